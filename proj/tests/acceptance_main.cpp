// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "sclab/defenses.hpp"
#include "sclab/pipeline.hpp"
#include "sclab/power.hpp"
#include "sclab/runner.hpp"
#include "sclab/scenario.hpp"

namespace {

using namespace sclab;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::uint64_t Lcg(std::uint64_t& state) {
  state = state * 6364136223846793005ULL + 1442695040888963407ULL;
  return state >> 11;
}

AttackScenario WithKey(AttackScenario s, const VictimKey& key) {
  s.victim.key = key;
  const VictimTimeline t = RunModExpVictim({s.victim.base, s.victim.modulus, key}, s.victim.durations,
                                           s.victim.target_set, s.cache);
  s.attack.num_slots = std::max<std::size_t>(s.attack.num_slots, ScheduledLength(t, s.victim.release_slots));
  return s;
}

// Default scenario, 256 sets x 300 slots, noiseless, 32-bit key from the
// default key seed.
Verdict DefaultExperiment() {
  const ScenarioConfig config = ParseScenarioText("");
  const auto dir = std::filesystem::temp_directory_path() / "sclab_acceptance_c1";
  std::filesystem::remove_all(dir);
  const auto start = std::chrono::steady_clock::now();
  const RunOutcome outcome = RunScenario(config, dir);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const AttackScenario scenario = ResolveScenario(config);
  const PipelineResult r = RunAttackPipeline(scenario);
  const Bits& truth = scenario.victim.key.bits();
  std::vector<std::size_t> occupied;
  for (const Run& run : r.intervals->runs) {
    if (run.occupied) occupied.push_back(run.length);
  }
  bool lengths_ok = occupied.size() == truth.size();
  for (std::size_t i = 0; lengths_ok && i < truth.size(); ++i) lengths_ok = occupied[i] == (truth[i] ? 5u : 2u);
  const bool geometry = r.matrix.slots() == 300 && r.matrix.sets() == 256 && truth.size() == 32;
  const bool pass = outcome.exit_code == kExitOk && geometry && lengths_ok && r.accuracy() == 1.0 && seconds < 5.0;
  std::filesystem::remove_all(dir);
  return {pass, fmt::format("matrix {}x{}, runs match key: {}, accuracy {}, runtime {:.3f} s", r.matrix.slots(),
                            r.matrix.sets(), lengths_ok, r.accuracy(), seconds)};
}

Verdict NoiselessCompleteness() {
  Rng rng(2024);
  std::uniform_int_distribution<std::size_t> length(8, 64);
  std::size_t perfect = 0;
  for (int i = 0; i < 200; ++i) {
    const VictimKey key = VictimKey::Random(length(rng), rng);
    if (RunAttackPipeline(WithKey(DefaultScenario(), key)).accuracy() == 1.0) ++perfect;
  }
  return {perfect == 200, fmt::format("{}/200 keys recovered exactly", perfect)};
}

// Oracle: b^e mod m built incrementally as b^(e-1) * b mod m.
Verdict OracleEquivalence() {
  const CacheConfig cache;
  std::uint64_t lcg = 99;
  std::size_t checked = 0, mismatches = 0;
  for (std::uint64_t m = 2; m < 256; ++m) {
    for (int trial = 0; trial < 32; ++trial) {
      const std::uint64_t b = Lcg(lcg) % 4096;
      std::uint64_t expected = 1 % m;
      for (std::uint64_t e = 0; e < 1024; ++e) {
        if (e > 0) expected = expected * (b % m) % m;
        const VictimTimeline t =
            RunModExpVictim({b, m, VictimKey::FromValue(e, 10)}, SlotDurations{}, 65, cache);
        if (t.result != expected || ModExpReference(b, e, m) != expected) ++mismatches;
        ++checked;
      }
    }
  }
  return {mismatches == 0, fmt::format("{} (b, e, m) triples, {} mismatches", checked, mismatches)};
}

Verdict IsaGate() {
  AttackScenario base = DefaultScenario();
  base.cache.isa.has_line_flush = false;
  Rng rng(7);
  base = WithKey(base, VictimKey::Random(32, rng));
  std::string detail;
  bool pass = true;
  for (Strategy s : {Strategy::kFlushReload, Strategy::kFlushFlush}) {
    AttackScenario sc = base;
    sc.attack.strategy = s;
    bool rejected = false;
    try {
      RunAttackPipeline(sc);
    } catch (const UnsupportedInstruction&) {
      rejected = true;
    }
    pass = pass && rejected;
    detail += fmt::format("{} {}; ", ToString(s), rejected ? "rejected" : "NOT rejected");
  }
  for (Strategy s : {Strategy::kPrimeProbe, Strategy::kEvictReload}) {
    AttackScenario sc = base;
    sc.attack.strategy = s;
    const double acc = RunAttackPipeline(sc).accuracy();
    pass = pass && acc == 1.0;
    detail += fmt::format("{} accuracy {}; ", ToString(s), acc);
  }
  return {pass, detail};
}

Verdict StrategyAgreement() {
  std::size_t agree = 0;
  for (std::uint64_t i = 0; i < 50; ++i) {
    Rng rng(DeriveSeed(55, i));
    const VictimKey key = VictimKey::Random(8 + rng() % 57, rng);
    AttackScenario base = WithKey(DefaultScenario(), key);
    base.seeds = {i + 1, i + 2, i + 3, i + 4};
    std::vector<Bits> recovered;
    for (Strategy s : {Strategy::kPrimeProbe, Strategy::kEvictReload, Strategy::kFlushReload}) {
      AttackScenario sc = base;
      sc.attack.strategy = s;
      recovered.push_back(RunAttackPipeline(sc).report.recovered);
    }
    if (recovered[0] == recovered[1] && recovered[1] == recovered[2] && recovered[0] == key.bits()) ++agree;
  }
  return {agree == 50, fmt::format("{}/50 scenarios with identical (and correct) bit vectors", agree)};
}

double MeanAccuracy(const AttackScenario& base, std::size_t keys, std::uint64_t seed) {
  double sum = 0.0;
  for (std::size_t i = 0; i < keys; ++i) {
    Rng rng(DeriveSeed(seed, i));
    AttackScenario sc = base;
    sc.victim.key = VictimKey::Random(32, rng);
    sc.seeds.attack = DeriveSeed(seed ^ 0xa77, i);
    sum += RunAttackPipeline(sc).accuracy();
  }
  return sum / static_cast<double>(keys);
}

Verdict PrefetcherShuffle() {
  AttackScenario base = DefaultScenario();
  base.cache.prefetcher = Prefetcher::kNextLine;
  AttackScenario shuffled = base;
  shuffled.attack.shuffle_probe_order = true;
  const double plain = MeanAccuracy(base, 50, 606);
  const double shuf = MeanAccuracy(shuffled, 50, 606);
  return {shuf - plain >= 0.1, fmt::format("shuffled {:.4f} - unshuffled {:.4f} = {:.4f} (need >= 0.1)", shuf, plain,
                                           shuf - plain)};
}

Verdict DefenseCollapse() {
  const AttackScenario base = DefaultScenario();
  bool pass = true;
  std::string detail;

  DefenseSpec partition;
  partition.partition = PartitionPolicy::EvenSplit(base.cache.ways);
  const DefenseReport p = EvaluateDefense(base, partition, 100, 707);
  const bool p_ok = p.defended_accuracy >= 0.4 && p.defended_accuracy <= 0.6 && p.baseline_accuracy == 1.0;
  detail += fmt::format("partition {:.4f}; ", p.defended_accuracy);

  DefenseSpec randomize;
  randomize.randomization = IndexRandomization{0x5eed, true};
  const DefenseReport r = EvaluateDefense(base, randomize, 100, 708);
  const bool r_ok = r.defended_accuracy >= 0.4 && r.defended_accuracy <= 0.6;
  detail += fmt::format("randomize {:.4f}; ", r.defended_accuracy);

  DefenseSpec constant_time;
  constant_time.constant_time = true;
  const DefenseReport c = EvaluateDefense(base, constant_time, 100, 709);
  const bool c_ok = c.defended_single_cluster == 100 && c.defended_accuracy >= 0.4 && c.defended_accuracy <= 0.6;
  detail += fmt::format("constant-time single-cluster {}/100 (accuracy {:.4f}); ", c.defended_single_cluster,
                        c.defended_accuracy);

  DefenseSpec identity;
  identity.randomization = IndexRandomization{SetPermutation::kIdentitySeed, true};
  std::size_t identical = 0;
  for (std::uint64_t i = 0; i < 20; ++i) {
    Rng rng(DeriveSeed(710, i));
    AttackScenario sc = base;
    sc.victim.key = VictimKey::Random(32, rng);
    sc.noise_sigma = 4.0;
    const PipelineResult plain = RunAttackPipeline(sc);
    const PipelineResult ident = RunAttackPipeline(ApplyDefense(sc, identity, i + 1));
    if (plain.matrix == ident.matrix && plain.report.recovered == ident.report.recovered) ++identical;
  }
  detail += fmt::format("identity permutation bit-identical {}/20", identical);
  pass = p_ok && r_ok && c_ok && identical == 20;
  return {pass, detail};
}

Verdict NoiseMonotonicity() {
  const std::vector<std::string> sigmas = {"0", "8", "16", "32", "48"};
  const ScenarioConfig config = ParseScenarioText("");
  std::vector<double> means;
  for (const std::string& sigma : sigmas) {
    double sum = 0.0;
    for (std::uint64_t j = 0; j < 20; ++j) {
      ScenarioConfig point = config;
      ApplySweepValue(point, "noise_sigma", sigma);
      point.seeds = {config.seeds.cache + j, config.seeds.attack + j, config.seeds.noise + j, config.seeds.key + j};
      sum += RunAttackPipeline(ResolveScenario(point)).accuracy();
    }
    means.push_back(sum / 20.0);
  }
  std::size_t violations = 0;
  bool small = true;
  for (std::size_t i = 1; i < means.size(); ++i) {
    if (means[i] > means[i - 1]) {
      ++violations;
      small = small && means[i] - means[i - 1] <= 0.02;
    }
  }
  std::string curve;
  for (std::size_t i = 0; i < means.size(); ++i) curve += fmt::format("{}:{:.4f} ", sigmas[i], means[i]);
  return {violations <= 1 && small, fmt::format("mean accuracy by sigma {}({} violation(s))", curve, violations)};
}

Verdict PowerAnalysis() {
  // SPA, noiseless, 64-bit keys.
  const PowerModel clean{1.0, 1.0, 0.0, false};
  std::size_t exact = 0;
  Rng key_rng(901);
  for (int i = 0; i < 20; ++i) {
    const VictimKey key = VictimKey::Random(64, key_rng);
    Rng rng(i);
    if (SpaExtract(TraceModExp(key, clean, rng)) == key.bits()) ++exact;
  }

  // SPA at sigma = 2 * op_weight, single traces.
  const PowerModel noisy{1.0, 1.0, 2.0, false};
  double spa_sum = 0.0;
  for (int i = 0; i < 20; ++i) {
    const VictimKey key = VictimKey::Random(64, key_rng);
    Rng rng(1000 + i);
    Bits bits;
    try {
      bits = SpaExtract(TraceModExp(key, noisy, rng));
    } catch (const DegenerateData&) {
      bits.assign(64, false);
    }
    spa_sum += ScoreRecovery(bits, key.bits()).accuracy.value_or(0.0);
  }
  const double spa_noisy = spa_sum / 20.0;

  // DPA on 256 exhaustive plaintexts, same noise, unmasked and masked.
  AesTableConfig table;
  table.sbox = AesSbox();
  auto dpa_hits = [&](bool masked) {
    std::size_t first = 0;
    for (std::uint64_t trial = 0; trial < 20; ++trial) {
      Rng rng(DeriveSeed(902, trial));
      const auto key = static_cast<std::uint8_t>(rng() & 0xff);
      const PowerModel model{1.0, 1.0, 2.0, masked};
      const auto traces = AcquireAesTraces(ExhaustivePlaintexts(), key, table, model, 16, rng);
      if (DpaAttack(traces, table).RankOf(key) == 0) ++first;
    }
    return first;
  };
  const std::size_t unmasked = dpa_hits(false);
  const std::size_t masked = dpa_hits(true);
  const bool pass = exact == 20 && spa_noisy < 0.9 && unmasked >= 19 && masked <= 3;
  return {pass, fmt::format("SPA sigma=0 exact {}/20; SPA sigma=2w accuracy {:.4f}; DPA rank-1 {}/20 unmasked, "
                            "{}/20 masked",
                            exact, spa_noisy, unmasked, masked)};
}

std::vector<std::pair<std::string, std::string>> ReadAll(const std::filesystem::path& dir) {
  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream text;
    text << in.rdbuf();
    files.emplace_back(entry.path().filename().string(), text.str());
  }
  std::sort(files.begin(), files.end());
  return files;
}

Verdict Determinism() {
  const std::vector<std::string> documents = {
      "",
      "noise_sigma: 12\nattack: {shuffle_probe_order: true}\ncache: {prefetcher: next_line}\n",
      "defenses: [randomize]\nnoise_sigma: 3\n",
      "defenses: [partition]\ncache: {replacement: random}\n",
      "attack: {strategy: flush_reload}\nnoise_sigma: 20\n",
      "victim: {kind: aes}\nnoise_sigma: 5\n",
      "victim: {kind: modexp, key_bits: 64}\npower: {noise_sigma: 1.5}\n",
      "victim: {kind: aes}\npower: {noise_sigma: 2, masked: true}\n",
  };
  const auto root = std::filesystem::temp_directory_path() / "sclab_acceptance_c10";
  std::size_t identical = 0, compared = 0;
  for (std::size_t d = 0; d < documents.size(); ++d) {
    const ScenarioConfig config = ParseScenarioText(documents[d]);
    std::vector<std::vector<std::pair<std::string, std::string>>> runs;
    for (int rep = 0; rep < 2; ++rep) {
      const auto dir = root / fmt::format("{}_{}", d, rep);
      std::filesystem::remove_all(dir);
      RunScenario(config, dir / "run");
      RunPower(config, dir / "power");
      RunSweep(config, {"noise_sigma", {"0", "16"}, 2}, dir / "sweep");
      std::vector<std::pair<std::string, std::string>> all;
      for (const char* sub : {"run", "power", "sweep"}) {
        if (!std::filesystem::exists(dir / sub)) continue;
        for (auto& f : ReadAll(dir / sub)) all.emplace_back(std::string(sub) + "/" + f.first, std::move(f.second));
      }
      runs.push_back(std::move(all));
    }
    ++compared;
    if (!runs[0].empty() && runs[0] == runs[1]) ++identical;
  }
  std::filesystem::remove_all(root);
  return {identical == compared, fmt::format("{}/{} scenarios byte-identical across two runs", identical, compared)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"default experiment", DefaultExperiment},
      {"noiseless completeness", NoiselessCompleteness},
      {"oracle equivalence", OracleEquivalence},
      {"isa gate", IsaGate},
      {"strategy agreement", StrategyAgreement},
      {"prefetcher/shuffle direction", PrefetcherShuffle},
      {"defense collapse", DefenseCollapse},
      {"noise monotonicity", NoiseMonotonicity},
      {"spa/dpa", PowerAnalysis},
      {"determinism", Determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, fmt::format("exception: {}", e.what())};
    }
    if (!v.pass) ++failures;
    std::cout << fmt::format("{} criterion {:2} {}: {}", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, v.detail)
              << std::endl;
  }
  std::cout << fmt::format("{} of {} criteria passed", criteria.size() - failures, criteria.size()) << std::endl;
  return failures == 0 ? 0 : 1;
}
