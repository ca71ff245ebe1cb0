#include "sclab/runner.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "sclab/artifacts.hpp"

namespace sclab {
namespace {

using Json = nlohmann::ordered_json;

std::string BitString(const Bits& bits) {
  std::string out;
  out.reserve(bits.size());
  for (bool b : bits) out += b ? '1' : '0';
  return out;
}

Json Header(std::string_view command, const ScenarioConfig& config) {
  Json j;
  j["schema_version"] = kReportSchemaVersion;
  j["command"] = command;
  j["status"] = "ok";
  j["scenario"] = ScenarioToJson(config);
  j["seeds"] = j["scenario"]["seeds"];
  return j;
}

void Emit(RunOutcome& outcome, const std::string& name, const std::string& content) {
  const auto path = outcome.output_dir / name;
  WriteTextFile(path, content);
  outcome.files.push_back(path);
}

void EmitReport(RunOutcome& outcome) {
  const auto path = outcome.output_dir / "report.json";
  WriteJsonFile(path, outcome.report);
  outcome.files.push_back(path);
}

void MarkFailed(RunOutcome& outcome, const std::exception& e) {
  outcome.exit_code = kExitPipeline;
  outcome.error = e.what();
  outcome.report["status"] = "error";
  outcome.report["error"] = e.what();
}

}  // namespace

RunOutcome RunScenario(const ScenarioConfig& config, const std::filesystem::path& output_dir) {
  RunOutcome outcome;
  outcome.output_dir = output_dir;
  outcome.report = Header("run", config);
  try {
    const AttackScenario scenario = ResolveScenario(config);
    const PipelineResult r = RunAttackPipeline(scenario);

    Json resolved;
    resolved["victim_kind"] = ToString(scenario.victim.kind);
    resolved["key_bits"] = scenario.victim.key.length();
    resolved["key_hex"] = scenario.victim.key.ToHex();
    resolved["defense"] = ResolveDefenses(config).Describe();
    resolved["probed_sets"] = scenario.attack.target_sets.size();
    outcome.report["resolved"] = resolved;

    Json result;
    result["accuracy"] = r.accuracy();
    result["alignment_offset"] = r.report.alignment_offset;
    result["recovered"] = BitString(r.report.recovered);
    result["truth"] = BitString(r.truth);
    result["single_cluster"] = r.decoding.single_cluster;
    result["decode_threshold"] = r.decoding.threshold;
    if (r.occupancy) result["threshold_used"] = r.occupancy->threshold_used;
    if (r.intervals) result["occupied_runs"] = r.intervals->OccupiedRuns();
    result["victim_slots"] = r.victim_slots;
    result["num_slots"] = r.matrix.slots();
    if (scenario.victim.kind != VictimKind::kAes) result["victim_result"] = r.victim_result;
    result["per_bit_margin"] = r.report.per_bit_margin;
    result["warnings"] = r.warnings;
    outcome.report["result"] = result;

    Emit(outcome, "probe_matrix.csv", ProbeMatrixCsv(r.matrix));
    if (r.occupancy) Emit(outcome, "occupancy.csv", OccupancyCsv(*r.occupancy));
    if (r.intervals) Emit(outcome, "intervals.csv", IntervalsCsv(*r.intervals));
    Emit(outcome, "heatmap.csv", HeatmapCsv(r.matrix));
  } catch (const ValidationError& e) {
    MarkFailed(outcome, e);
    outcome.exit_code = kExitValidation;
  } catch (const UnsupportedInstruction& e) {
    MarkFailed(outcome, e);
    outcome.exit_code = kExitValidation;
  } catch (const std::exception& e) {
    MarkFailed(outcome, e);
  }
  EmitReport(outcome);
  return outcome;
}

RunOutcome RunSweep(const ScenarioConfig& config, const SweepRequest& request,
                    const std::filesystem::path& output_dir) {
  if (request.values.empty()) throw InvalidConfig("sweep needs at least one value");
  if (request.seeds == 0) throw InvalidConfig("sweep needs at least one seed");
  std::vector<ScenarioConfig> points;
  for (const std::string& value : request.values) {
    ScenarioConfig point = config;
    ApplySweepValue(point, request.axis, value);
    points.push_back(std::move(point));
  }

  RunOutcome outcome;
  outcome.output_dir = output_dir;
  outcome.report = Header("sweep", config);
  outcome.report["axis"] = request.axis;
  outcome.report["seeds_per_value"] = request.seeds;

  std::string csv = "axis,value,seed_index,accuracy,mean_margin,min_margin,single_cluster,no_activity,status\n";
  Json summary = Json::array();
  std::size_t failures = 0;
  for (std::size_t v = 0; v < points.size(); ++v) {
    double sum = 0.0;
    std::size_t ok = 0;
    for (std::size_t j = 0; j < request.seeds; ++j) {
      ScenarioConfig point = points[v];
      point.seeds = {config.seeds.cache + j, config.seeds.attack + j, config.seeds.noise + j, config.seeds.key + j};
      std::string row;
      try {
        const PipelineResult r = RunAttackPipeline(ResolveScenario(point));
        const auto& m = r.report.per_bit_margin;
        double mean = 0.0, min = 0.0;
        if (!m.empty()) {
          min = m.front();
          for (double x : m) {
            mean += x;
            min = std::min(min, x);
          }
          mean /= static_cast<double>(m.size());
        }
        const bool no_activity = r.HasWarning(kWarnDegenerateMatrix) || r.HasWarning(kWarnNoOccupiedInterval);
        row = fmt::format("{},{},{},{},{},{},{},{},ok\n", request.axis, request.values[v], j, FormatNumber(r.accuracy()),
                          FormatNumber(mean), FormatNumber(min), r.HasWarning(kWarnSingleCluster) ? 1 : 0,
                          no_activity ? 1 : 0);
        sum += r.accuracy();
        ++ok;
      } catch (const std::exception& e) {
        ++failures;
        row = fmt::format("{},{},{},,,,,,error\n", request.axis, request.values[v], j);
      }
      csv += row;
    }
    Json entry;
    entry["value"] = request.values[v];
    entry["runs"] = ok;
    entry["mean_accuracy"] = ok == 0 ? Json(nullptr) : Json(sum / static_cast<double>(ok));
    summary.push_back(entry);
  }
  outcome.report["points"] = summary;
  outcome.report["failed_runs"] = failures;
  if (failures > 0) {
    outcome.exit_code = kExitPipeline;
    outcome.error = fmt::format("{} sweep run(s) failed", failures);
    outcome.report["status"] = "error";
    outcome.report["error"] = outcome.error;
  }
  Emit(outcome, "sweep.csv", csv);
  EmitReport(outcome);
  return outcome;
}

namespace {

void RunSpa(const ScenarioConfig& config, const AttackScenario& scenario, const PowerModel& model,
            RunOutcome& outcome) {
  const VictimKey& key = scenario.victim.key;
  Rng rng(config.seeds.noise);
  std::vector<PowerTrace> traces;
  for (std::size_t i = 0; i < config.power.averaged_traces; ++i) {
    traces.push_back(scenario.victim.kind == VictimKind::kModExpConstantTime ? TraceModExpConstantTime(key, model, rng)
                                                                              : TraceModExp(key, model, rng));
  }
  const PowerTrace trace = AverageTraces(traces);
  Json spa;
  spa["method"] = "spa";
  spa["victim_kind"] = ToString(scenario.victim.kind);
  spa["averaged_traces"] = config.power.averaged_traces;
  Bits recovered;
  std::vector<std::string> warnings;
  try {
    recovered = SpaExtract(trace);
  } catch (const DegenerateData&) {
    warnings.emplace_back(kWarnDegenerateMatrix);
    recovered.assign(key.length(), false);
  }
  const RecoveryReport report = ScoreRecovery(recovered, key.bits());
  spa["key_hex"] = key.ToHex();
  spa["recovered"] = BitString(recovered);
  spa["truth"] = BitString(key.bits());
  spa["accuracy"] = report.accuracy.value_or(0.0);
  spa["alignment_offset"] = report.alignment_offset;
  spa["warnings"] = warnings;
  outcome.report["result"] = spa;
  Emit(outcome, "trace.csv", TraceCsv(trace));
}

void RunDpa(const ScenarioConfig& config, const AttackScenario& scenario, const PowerModel& model,
            RunOutcome& outcome) {
  const auto key = static_cast<std::uint8_t>(scenario.victim.key.value());
  const AesTableConfig table = MakeAesTable(scenario.cache, scenario.victim.target_set);
  std::vector<std::uint8_t> plaintexts;
  if (config.power.num_traces == 256) {
    plaintexts = ExhaustivePlaintexts();
  } else {
    Rng prng(DeriveSeed(config.seeds.attack, 0xd9a));
    plaintexts.resize(config.power.num_traces);
    for (auto& p : plaintexts) p = static_cast<std::uint8_t>(prng() & 0xff);
  }
  Rng rng(config.seeds.noise);
  const std::vector<AesTraceSample> traces =
      AcquireAesTraces(plaintexts, key, table, model, config.power.acquisitions, rng);
  const DpaResult dpa = DpaAttack(traces, table);

  Json j;
  j["method"] = "dpa";
  j["masked"] = model.masked;
  j["num_traces"] = traces.size();
  j["acquisitions"] = config.power.acquisitions;
  j["key_byte"] = key;
  j["best_hypothesis"] = dpa.best_hypothesis;
  j["success"] = dpa.best_hypothesis == key;
  j["key_rank"] = dpa.RankOf(key);
  j["margin"] = dpa.margin;
  j["key_score"] = dpa.scores[key];
  outcome.report["result"] = j;
  Emit(outcome, "trace.csv", AesTraceCsv(traces));
}

}  // namespace

RunOutcome RunPower(const ScenarioConfig& config, const std::filesystem::path& output_dir) {
  RunOutcome outcome;
  outcome.output_dir = output_dir;
  outcome.report = Header("power", config);
  try {
    const AttackScenario scenario = ResolveScenario(config);
    const PowerModel model{config.power.base_power, config.power.op_weight, config.power.noise_sigma,
                           config.power.masked};
    if (scenario.victim.kind == VictimKind::kAes) {
      RunDpa(config, scenario, model, outcome);
    } else {
      RunSpa(config, scenario, model, outcome);
    }
  } catch (const ValidationError& e) {
    MarkFailed(outcome, e);
    outcome.exit_code = kExitValidation;
  } catch (const std::exception& e) {
    MarkFailed(outcome, e);
  }
  EmitReport(outcome);
  return outcome;
}

}  // namespace sclab
