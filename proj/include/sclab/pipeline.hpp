#ifndef SCLAB_PIPELINE_HPP_
#define SCLAB_PIPELINE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sclab/analysis.hpp"
#include "sclab/attacks.hpp"
#include "sclab/cache.hpp"
#include "sclab/victims.hpp"

namespace sclab {

enum class VictimKind { kModExp, kModExpConstantTime, kAes };

std::string_view ToString(VictimKind kind);

struct VictimSpec {
  VictimKind kind = VictimKind::kModExp;
  VictimKey key = VictimKey::FromValue(0, 32);
  std::uint64_t base = 7;
  std::uint64_t modulus = 4294967291ULL;
  SlotDurations durations;
  SetId target_set = 65;
  std::uint32_t release_slots = 1;
};

struct ScenarioSeeds {
  std::uint64_t cache = 1;
  std::uint64_t attack = 2;
  std::uint64_t noise = 3;
  std::uint64_t key = 4;

  bool operator==(const ScenarioSeeds&) const = default;
};

// Everything one end-to-end attack needs, fully resolved.
struct AttackScenario {
  CacheConfig cache;
  VictimSpec victim;
  AttackConfig attack;
  double noise_sigma = 0.0;
  ScenarioSeeds seeds;
};

// 256 sets x 8 ways x 64 B, 300 slots over all sets, 32-bit zero key.
AttackScenario DefaultScenario();

// Pipeline warnings, as they appear in reports.
inline constexpr std::string_view kWarnSingleCluster = "single-cluster";
inline constexpr std::string_view kWarnDegenerateMatrix = "degenerate-matrix";
inline constexpr std::string_view kWarnNoOccupiedInterval = "no-occupied-interval";
inline constexpr std::string_view kWarnNoTableVotes = "no-table-votes";

struct PipelineResult {
  ProbeMatrix matrix{0, {}, Polarity::kSlowIsActivity};
  std::optional<OccupancyMap> occupancy;
  std::optional<IntervalSequence> intervals;
  BitDecoding decoding;
  RecoveryReport report;
  Bits truth;
  std::vector<std::string> warnings;
  std::uint64_t victim_result = 0;  // modexp result (modexp victims only)
  std::size_t victim_slots = 0;     // slots the victim needs, release gaps included

  bool HasWarning(std::string_view w) const;
  double accuracy() const { return report.accuracy.value_or(0.0); }
};

// Victim -> attack -> binarize -> intervals -> bits -> score. When the
// measurements carry no victim activity the attacker's best guess is an
// all-zero key of the (public) key length, reported with a warning.
//
// The latency threshold is fitted on the analysed column(s) only.
PipelineResult RunAttackPipeline(const AttackScenario& scenario);

// Throws ValidationError/UnsupportedInstruction on an unusable scenario.
void ValidateScenario(const AttackScenario& scenario);

}  // namespace sclab

#endif  // SCLAB_PIPELINE_HPP_
