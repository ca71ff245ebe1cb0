#include "sclab/defenses.hpp"

#include <fmt/format.h>

namespace sclab {

CacheConfig ApplyWayPartition(CacheConfig config, const PartitionPolicy& policy) {
  policy.Validate(config.ways);
  config.partition = policy;
  return config;
}

CacheConfig ApplyIndexRandomization(CacheConfig config, const IndexRandomization& randomization) {
  if (!randomization.active) return config;
  config.index_permutation = SetPermutation(config.num_sets, randomization.permutation_seed);
  return config;
}

std::string DefenseSpec::Describe() const {
  std::string out;
  auto add = [&out](std::string_view part) {
    if (!out.empty()) out += '+';
    out += part;
  };
  if (partition) {
    const WayRange a = partition->RangeFor(ActorId::kAttacker), v = partition->RangeFor(ActorId::kVictim);
    add(fmt::format("partition(attacker=[{},{}),victim=[{},{}))", a.begin, a.end, v.begin, v.end));
  }
  if (randomization && randomization->active) add("randomize");
  if (constant_time) add("constant_time");
  return out.empty() ? "none" : out;
}

AttackScenario ApplyDefense(AttackScenario scenario, const DefenseSpec& defense, std::uint64_t key_index) {
  if (defense.partition) scenario.cache = ApplyWayPartition(scenario.cache, *defense.partition);
  if (defense.randomization && defense.randomization->active) {
    IndexRandomization r = *defense.randomization;
    if (r.permutation_seed != SetPermutation::kIdentitySeed && key_index != 0) {
      r.permutation_seed = DeriveSeed(r.permutation_seed, key_index);
    }
    scenario.cache = ApplyIndexRandomization(scenario.cache, r);
  }
  if (defense.constant_time && scenario.victim.kind == VictimKind::kModExp) {
    scenario.victim.kind = VictimKind::kModExpConstantTime;
  }
  return scenario;
}

DefenseReport EvaluateDefense(const AttackScenario& scenario, const DefenseSpec& defense, std::size_t num_keys,
                              std::uint64_t seed) {
  if (num_keys == 0) throw InvalidConfig("evaluate_defense needs num_keys >= 1");
  DefenseReport report;
  report.defense = defense.Describe();
  double baseline = 0.0, defended = 0.0;
  for (std::size_t i = 0; i < num_keys; ++i) {
    AttackScenario base = scenario;
    Rng key_rng(DeriveSeed(seed, i));
    base.victim.key = VictimKey::Random(scenario.victim.key.length(), key_rng);

    const PipelineResult plain = RunAttackPipeline(base);
    const PipelineResult guarded = RunAttackPipeline(ApplyDefense(base, defense, i + 1));
    baseline += plain.accuracy();
    defended += guarded.accuracy();
    report.baseline_single_cluster += plain.HasWarning(kWarnSingleCluster) ? 1 : 0;
    report.defended_single_cluster += guarded.HasWarning(kWarnSingleCluster) ? 1 : 0;
    report.defended_no_activity +=
        (guarded.HasWarning(kWarnDegenerateMatrix) || guarded.HasWarning(kWarnNoOccupiedInterval)) ? 1 : 0;
  }
  report.keys_evaluated = num_keys;
  report.baseline_accuracy = baseline / static_cast<double>(num_keys);
  report.defended_accuracy = defended / static_cast<double>(num_keys);
  return report;
}

}  // namespace sclab
