#ifndef SCLAB_SCENARIO_HPP_
#define SCLAB_SCENARIO_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sclab/cache.hpp"
#include "sclab/defenses.hpp"
#include "sclab/pipeline.hpp"

namespace sclab {

// Malformed scenario document; carries the 1-based line/column and the
// dotted field path when known.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& message, int line, int column, std::string field);

  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  int column_;
  std::string field_;
};

struct VictimSettings {
  VictimKind kind = VictimKind::kModExp;
  // "random", "0x<hex>", "0b<binary>" or bare hex digits.
  std::string key = "random";
  // Defaults to 32 (modexp) or 8 (aes) for random keys and to the literal's
  // width otherwise.
  std::optional<std::size_t> key_bits;
  std::uint64_t base = 7;
  std::uint64_t modulus = 4294967291ULL;
  std::uint32_t d0 = 2;
  std::uint32_t d1 = 5;
  SetId target_set = 65;
  std::uint32_t release_slots = 1;
};

struct AttackSettings {
  Strategy strategy = Strategy::kPrimeProbe;
  std::optional<std::vector<SetId>> target_sets;  // nullopt = every set
  std::size_t num_slots = 300;
  bool shuffle_probe_order = false;
  std::optional<Address> shared_address;
};

enum class DefenseKind { kPartition, kRandomize, kConstantTime };

struct DefenseEntry {
  DefenseKind kind = DefenseKind::kPartition;
  std::optional<WayRange> attacker_ways;
  std::optional<WayRange> victim_ways;
  std::optional<std::uint64_t> seed;
};

struct PowerSettings {
  double base_power = 1.0;
  double op_weight = 1.0;
  double noise_sigma = 0.0;
  bool masked = false;
  // DPA: 256 means every plaintext once, anything else draws that many
  // random plaintexts.
  std::size_t num_traces = 256;
  std::size_t acquisitions = 16;
  // SPA: traces of the same key averaged before extraction.
  std::size_t averaged_traces = 1;
};

struct ScenarioConfig {
  CacheConfig cache;
  VictimSettings victim;
  AttackSettings attack;
  double noise_sigma = 0.0;
  std::vector<DefenseEntry> defenses;
  ScenarioSeeds seeds;
  std::string output_dir = "sclab_out";
  PowerSettings power;
};

inline constexpr const char* kOutputDirEnv = "SCLAB_OUTPUT_DIR";

// Parses and fully validates a scenario document (YAML; an empty document
// means all defaults). Unknown fields are rejected. Throws ParseError or
// another ValidationError.
ScenarioConfig ParseScenarioText(std::string_view text, std::string_view source = "<scenario>");
ScenarioConfig ParseScenarioFile(const std::filesystem::path& path);

// Checks every module invariant the scenario touches.
void ValidateScenarioConfig(const ScenarioConfig& config);

VictimKey ResolveKey(const ScenarioConfig& config);
DefenseSpec ResolveDefenses(const ScenarioConfig& config);

// Key drawn, defenses applied, seeds wired through.
AttackScenario ResolveScenario(const ScenarioConfig& config);

// Every field spelled out; parseable by ParseScenarioText. output_dir is
// left out so replays can target another directory.
nlohmann::ordered_json ScenarioToJson(const ScenarioConfig& config);

// $SCLAB_OUTPUT_DIR when set, otherwise config.output_dir.
std::filesystem::path EffectiveOutputDir(const ScenarioConfig& config);

// Applies one sweep point. Throws ValidationError for an unknown axis or a
// bad value.
void ApplySweepValue(ScenarioConfig& config, std::string_view axis, std::string_view value);

std::vector<std::string_view> SweepAxes();

}  // namespace sclab

#endif  // SCLAB_SCENARIO_HPP_
