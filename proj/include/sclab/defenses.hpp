#ifndef SCLAB_DEFENSES_HPP_
#define SCLAB_DEFENSES_HPP_

#include <cstdint>
#include <optional>
#include <string>

#include "sclab/cache.hpp"
#include "sclab/isolation.hpp"
#include "sclab/pipeline.hpp"

namespace sclab {

// Restricts fills and hits of each actor to its own ways. Throws
// InfeasiblePartition for an invalid policy (including ways < 2).
CacheConfig ApplyWayPartition(CacheConfig config, const PartitionPolicy& policy);

// Installs a seeded set permutation; inactive randomization leaves the
// config untouched.
CacheConfig ApplyIndexRandomization(CacheConfig config, const IndexRandomization& randomization);

struct DefenseSpec {
  std::optional<PartitionPolicy> partition;
  std::optional<IndexRandomization> randomization;
  // Swap the leaky victim for square-and-always-multiply.
  bool constant_time = false;

  bool empty() const { return !partition && !randomization && !constant_time; }
  std::string Describe() const;
};

// `key_index` re-keys the randomized index per evaluated key, except for
// the identity sentinel.
AttackScenario ApplyDefense(AttackScenario scenario, const DefenseSpec& defense, std::uint64_t key_index = 0);

struct DefenseReport {
  double baseline_accuracy = 0.0;
  double defended_accuracy = 0.0;
  std::size_t keys_evaluated = 0;
  std::string defense;
  std::size_t baseline_single_cluster = 0;
  std::size_t defended_single_cluster = 0;
  std::size_t defended_no_activity = 0;
};

// Runs the pipeline on `num_keys` random keys (length taken from the
// scenario's key) with and without the defense and averages accuracy.
// Key i is drawn from DeriveSeed(seed, i).
DefenseReport EvaluateDefense(const AttackScenario& scenario, const DefenseSpec& defense, std::size_t num_keys,
                              std::uint64_t seed);

}  // namespace sclab

#endif  // SCLAB_DEFENSES_HPP_
