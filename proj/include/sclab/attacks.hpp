#ifndef SCLAB_ATTACKS_HPP_
#define SCLAB_ATTACKS_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sclab/cache.hpp"
#include "sclab/common.hpp"
#include "sclab/victims.hpp"

namespace sclab {

enum class Strategy { kPrimeProbe, kFlushReload, kEvictReload, kFlushFlush };

std::string_view ToString(Strategy strategy);

// Flush-based strategies need a line-flush instruction; every strategy
// except PRIME+PROBE needs an address shared with the victim.
bool NeedsLineFlush(Strategy strategy);
bool NeedsSharedAddress(Strategy strategy);

struct EvictionSet {
  SetId set = 0;
  std::vector<Address> addresses;
};

// set * line_size + k * (num_sets * line_size) for k in [0, ways). The
// builder only knows the plain modular index, never a randomized one.
EvictionSet BuildEvictionSet(const CacheConfig& config, SetId set);
std::vector<EvictionSet> BuildEvictionSets(const CacheConfig& config, std::span<const SetId> sets);

std::vector<SetId> AllSets(const CacheConfig& config);

struct AttackConfig {
  Strategy strategy = Strategy::kPrimeProbe;
  std::vector<SetId> target_sets;
  std::size_t num_slots = 300;
  bool shuffle_probe_order = false;
  std::optional<Address> shared_address;
  std::uint64_t rng_seed = 0;

  // Throws InvalidConfig (missing shared address, empty or out-of-range
  // target sets, zero slots) or UnsupportedInstruction (flush strategy on
  // an ISA without line flush).
  void Validate(const CacheConfig& cache) const;
};

// Gaussian jitter added to each recorded measurement; never touches cache
// state.
struct MeasurementNoise {
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

// Which side of the latency split indicates victim activity.
enum class Polarity { kSlowIsActivity, kFastIsActivity };

// slot x column grid of measured cycles. PRIME+PROBE records per-set probe
// totals; the shared-address strategies record one latency per slot.
class ProbeMatrix {
 public:
  ProbeMatrix(std::size_t slots, std::vector<SetId> columns, Polarity polarity);

  double at(std::size_t slot, std::size_t column) const { return values_[slot * columns_.size() + column]; }
  double& at(std::size_t slot, std::size_t column) { return values_[slot * columns_.size() + column]; }

  std::size_t slots() const { return slots_; }
  std::size_t sets() const { return columns_.size(); }
  const std::vector<SetId>& columns() const { return columns_; }
  std::optional<std::size_t> ColumnOf(SetId set) const;
  std::span<const double> values() const { return values_; }
  Polarity polarity() const { return polarity_; }

  bool operator==(const ProbeMatrix&) const = default;

 private:
  std::size_t slots_;
  std::vector<SetId> columns_;
  Polarity polarity_;
  std::vector<double> values_;
};

// Slot-by-slot victim activity: the timeline's bits laid out in order with
// `release_slots` idle slots after every bit, truncated or padded with idle
// slots to `num_slots`.
using VictimSchedule = std::vector<std::optional<MemoryEvent>>;

VictimSchedule ScheduleTimeline(const VictimTimeline& timeline, std::size_t num_slots, std::uint32_t release_slots);

// Slots needed to run the whole timeline, release gaps included.
std::size_t ScheduledLength(const VictimTimeline& timeline, std::uint32_t release_slots);

// Called once per slot, between the attacker's prime and probe.
using VictimStep = std::function<void(std::size_t slot, Cache& cache)>;

VictimStep ReplaySchedule(const VictimSchedule& schedule);

// Prime/probe traversal over a fixed group of eviction sets. Consecutive
// traversals alternate direction so each set is walked most-recently-used
// first, which keeps one victim eviction from cascading into a full-set
// miss under LRU.
//
// Unshuffled traversals walk the attacker buffer linearly (way-major,
// ascending line addresses). Shuffled traversals visit sets in a fresh
// seeded order each time and ways in a per-set seeded order fixed for the
// session.
class PrimeProbeSession {
 public:
  PrimeProbeSession(std::vector<EvictionSet> sets, bool shuffle, std::uint64_t seed);

  // Returns total cycles spent.
  Cycles Prime(Cache& cache);

  // Per-set latency totals, in eviction-set order. Leaves every set primed.
  std::vector<Cycles> Probe(Cache& cache);

  const std::vector<EvictionSet>& eviction_sets() const { return sets_; }

 private:
  std::vector<Cycles> Traverse(Cache& cache);

  std::vector<EvictionSet> sets_;
  bool shuffle_;
  Rng rng_;
  std::size_t traversals_ = 0;
  std::size_t max_ways_ = 0;
  std::vector<std::vector<std::uint32_t>> way_order_;
};

ProbeMatrix RunPrimeProbe(Cache& cache, const VictimStep& victim, const AttackConfig& config,
                          MeasurementNoise noise = {});
ProbeMatrix RunPrimeProbe(Cache& cache, const VictimSchedule& schedule, const AttackConfig& config,
                          MeasurementNoise noise = {});
ProbeMatrix RunFlushReload(Cache& cache, const VictimSchedule& schedule, const AttackConfig& config,
                           MeasurementNoise noise = {});
ProbeMatrix RunEvictReload(Cache& cache, const VictimSchedule& schedule, const AttackConfig& config,
                           MeasurementNoise noise = {});
ProbeMatrix RunFlushFlush(Cache& cache, const VictimSchedule& schedule, const AttackConfig& config,
                          MeasurementNoise noise = {});

// Dispatches on config.strategy.
ProbeMatrix RunAttack(Cache& cache, const VictimSchedule& schedule, const AttackConfig& config,
                      MeasurementNoise noise = {});

}  // namespace sclab

#endif  // SCLAB_ATTACKS_HPP_
