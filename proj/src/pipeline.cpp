#include "sclab/pipeline.hpp"

#include <algorithm>
#include <bit>

#include <fmt/format.h>

namespace sclab {
namespace {

AttackConfig ResolveAttack(const AttackScenario& scenario) {
  AttackConfig attack = scenario.attack;
  attack.rng_seed = scenario.seeds.attack;
  if (NeedsSharedAddress(attack.strategy) && !attack.shared_address) {
    attack.shared_address = MakeModExpLayout(scenario.cache, scenario.victim.target_set).multiply_line;
  }
  return attack;
}

Bits ZeroGuess(std::size_t length) { return Bits(length, false); }

// Bits of the key byte above the line offset: what a cache line reveals.
std::size_t AesLeakedBits(const CacheConfig& config) {
  const auto offset_bits = static_cast<std::size_t>(std::countr_zero(config.line_size));
  return offset_bits >= 8 ? 0 : 8 - offset_bits;
}

void RunModExpPipeline(const AttackScenario& scenario, PipelineResult& out) {
  const VictimSpec& v = scenario.victim;
  const ModExpParams params{v.base, v.modulus, v.key};
  const VictimTimeline timeline = v.kind == VictimKind::kModExpConstantTime
                                      ? RunModExpConstantTime(params, v.durations, v.target_set, scenario.cache)
                                      : RunModExpVictim(params, v.durations, v.target_set, scenario.cache);
  out.victim_result = timeline.result;
  out.victim_slots = ScheduledLength(timeline, v.release_slots);
  out.truth = v.key.bits();

  const AttackConfig attack = ResolveAttack(scenario);
  Cache cache(scenario.cache, scenario.seeds.cache);
  const VictimSchedule schedule = ScheduleTimeline(timeline, attack.num_slots, v.release_slots);
  out.matrix = RunAttack(cache, schedule, attack, {scenario.noise_sigma, scenario.seeds.noise});

  const bool shared = attack.strategy != Strategy::kPrimeProbe;
  std::size_t column = 0;
  if (!shared) {
    const auto c = out.matrix.ColumnOf(v.target_set);
    if (!c) throw InvalidConfig(fmt::format("target set {} is not among the probed sets", v.target_set));
    column = *c;
  }
  const std::size_t calibration[] = {column};

  try {
    out.occupancy = Binarize(out.matrix, calibration);
  } catch (const DegenerateData&) {
    out.warnings.emplace_back(kWarnDegenerateMatrix);
    out.decoding.bits = ZeroGuess(v.key.length());
    out.decoding.margins.assign(v.key.length(), 0.0);
    return;
  }
  out.intervals = ExtractIntervals(*out.occupancy, out.matrix.columns()[column]);

  if (shared) {
    out.decoding = SharedLineToBits(*out.intervals, {v.durations.d0, v.release_slots}, v.key.length());
    return;
  }
  try {
    out.decoding = IntervalsToBits(*out.intervals, v.durations);
    if (out.decoding.single_cluster) out.warnings.emplace_back(kWarnSingleCluster);
  } catch (const DegenerateData&) {
    out.warnings.emplace_back(kWarnNoOccupiedInterval);
    out.decoding.bits = ZeroGuess(v.key.length());
    out.decoding.margins.assign(v.key.length(), 0.0);
  }
}

// Access-driven attack on the first-round table lookup: every slot the
// victim looks up sbox[p ^ k] for a fresh plaintext; the probed table line
// reveals the high bits of p ^ k.
void RunAesPipeline(const AttackScenario& scenario, PipelineResult& out) {
  const VictimSpec& v = scenario.victim;
  if (v.key.length() != 8) throw InvalidConfig("the aes victim needs an 8-bit key byte");
  const std::size_t leaked = AesLeakedBits(scenario.cache);
  if (leaked == 0) throw InvalidConfig("line_size >= 256 leaves no table index bits to observe");
  const auto key = static_cast<std::uint8_t>(v.key.value());
  out.truth = VictimKey::FromValue(key >> (8 - leaked), leaked).bits();

  const AttackConfig attack = ResolveAttack(scenario);
  if (attack.strategy != Strategy::kPrimeProbe) throw InvalidConfig("the aes victim is attacked with prime_probe only");
  const AesTableConfig table = MakeAesTable(scenario.cache, v.target_set);

  Rng plaintext_rng(DeriveSeed(scenario.seeds.attack, 0xae5));
  std::vector<std::uint8_t> plaintexts(attack.num_slots);
  for (auto& p : plaintexts) p = static_cast<std::uint8_t>(plaintext_rng() & 0xff);

  Cache cache(scenario.cache, scenario.seeds.cache);
  out.matrix = RunPrimeProbe(
      cache, [&](std::size_t slot, Cache& c) { RunAesFirstRound(plaintexts[slot], key, table, c); }, attack,
      {scenario.noise_sigma, scenario.seeds.noise});
  out.victim_slots = attack.num_slots;

  const std::size_t lines = std::size_t{1} << leaked;
  std::vector<std::size_t> columns;
  for (std::size_t i = 0; i < lines; ++i) {
    const auto c = out.matrix.ColumnOf(BaseSetIndex(scenario.cache, table.table_base + i * scenario.cache.line_size));
    if (!c) throw InvalidConfig("the aes table sets are not all probed");
    columns.push_back(*c);
  }

  std::vector<std::size_t> votes(lines, 0);
  try {
    out.occupancy = Binarize(out.matrix, columns);
    for (std::size_t slot = 0; slot < out.matrix.slots(); ++slot) {
      std::optional<std::size_t> seen;
      std::size_t hits = 0;
      for (std::size_t i = 0; i < lines; ++i) {
        if (out.occupancy->at(slot, columns[i])) {
          seen = i;
          ++hits;
        }
      }
      if (hits == 1) ++votes[(plaintexts[slot] >> (8 - leaked)) ^ *seen];
    }
  } catch (const DegenerateData&) {
    out.warnings.emplace_back(kWarnDegenerateMatrix);
  }
  const auto best = std::max_element(votes.begin(), votes.end());
  if (*best == 0) out.warnings.emplace_back(kWarnNoTableVotes);
  const auto guess = static_cast<std::uint64_t>(best - votes.begin());
  out.decoding.bits = VictimKey::FromValue(guess, leaked).bits();
  std::size_t total = 0;
  for (std::size_t n : votes) total += n;
  const double share = total == 0 ? 0.0 : static_cast<double>(*best) / static_cast<double>(total);
  out.decoding.margins.assign(leaked, share);
}

}  // namespace

std::string_view ToString(VictimKind kind) {
  switch (kind) {
    case VictimKind::kModExp:
      return "modexp";
    case VictimKind::kModExpConstantTime:
      return "modexp_ct";
    case VictimKind::kAes:
      return "aes";
  }
  return "unknown";
}

AttackScenario DefaultScenario() {
  AttackScenario s;
  s.attack.target_sets = AllSets(s.cache);
  return s;
}

bool PipelineResult::HasWarning(std::string_view w) const {
  return std::find(warnings.begin(), warnings.end(), w) != warnings.end();
}

void ValidateScenario(const AttackScenario& scenario) {
  scenario.cache.Validate();
  scenario.victim.durations.Validate();
  ModExpParams{scenario.victim.base, scenario.victim.modulus, scenario.victim.key}.Validate();
  if (scenario.victim.target_set >= scenario.cache.num_sets) {
    throw InvalidConfig(fmt::format("victim target_set {} out of range (num_sets = {})", scenario.victim.target_set,
                                    scenario.cache.num_sets));
  }
  if (!(scenario.noise_sigma >= 0.0)) throw InvalidConfig("noise_sigma must be >= 0");
  ResolveAttack(scenario).Validate(scenario.cache);
}

PipelineResult RunAttackPipeline(const AttackScenario& scenario) {
  ValidateScenario(scenario);
  PipelineResult out;
  if (scenario.victim.kind == VictimKind::kAes) {
    RunAesPipeline(scenario, out);
  } else {
    RunModExpPipeline(scenario, out);
  }
  out.report = ScoreRecovery(out.decoding.bits, out.truth, out.decoding.margins);
  return out;
}

}  // namespace sclab
