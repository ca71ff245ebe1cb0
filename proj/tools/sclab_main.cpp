// sclab: run cache side-channel scenarios from YAML files.
//
//   sclab run SCENARIO [-o DIR]
//   sclab sweep SCENARIO --axis NAME --values V1,V2,... [--seeds N] [-o DIR]
//   sclab power SCENARIO [-o DIR]
//   sclab validate SCENARIO
//
// Exit status: 0 success, 1 invalid scenario or arguments, 2 pipeline failure.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "sclab/runner.hpp"
#include "sclab/scenario.hpp"

namespace {

std::filesystem::path OutputDir(const sclab::ScenarioConfig& config, const std::string& flag) {
  return flag.empty() ? sclab::EffectiveOutputDir(config) : std::filesystem::path(flag);
}

int Report(const sclab::RunOutcome& outcome) {
  if (outcome.exit_code != sclab::kExitOk) {
    std::cerr << "sclab: " << outcome.error << "\n";
  }
  std::cout << fmt::format("status={} output={}\n", outcome.exit_code == sclab::kExitOk ? "ok" : "error",
                           outcome.output_dir.string());
  const auto& result = outcome.report.find("result");
  if (result != outcome.report.end() && result->contains("accuracy")) {
    std::cout << fmt::format("accuracy={}\n", (*result)["accuracy"].get<double>());
  }
  if (result != outcome.report.end() && result->contains("key_rank")) {
    std::cout << fmt::format("best_hypothesis=0x{:02x} key_rank={}\n", (*result)["best_hypothesis"].get<int>(),
                             (*result)["key_rank"].get<int>());
  }
  return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cache side-channel simulation lab"};
  app.require_subcommand(1);

  std::string scenario_path, output_dir, axis;
  std::vector<std::string> values;
  std::size_t seeds = 1;

  auto* run = app.add_subcommand("run", "Run one attack scenario");
  auto* sweep = app.add_subcommand("sweep", "Sweep one scenario field over several values");
  auto* power = app.add_subcommand("power", "Power analysis (SPA for modexp, DPA for aes)");
  auto* validate = app.add_subcommand("validate", "Parse and validate a scenario without running it");
  for (auto* sub : {run, sweep, power, validate}) {
    sub->add_option("scenario", scenario_path, "Scenario YAML file")->required();
  }
  for (auto* sub : {run, sweep, power}) {
    sub->add_option("-o,--output-dir", output_dir, "Artifact directory (overrides $SCLAB_OUTPUT_DIR)");
  }
  std::string axes_help = "Field to sweep:";
  for (auto a : sclab::SweepAxes()) axes_help += " " + std::string(a);
  sweep->add_option("--axis", axis, axes_help)->required();
  sweep->add_option("--values", values, "Comma-separated values")->required()->delimiter(',');
  sweep->add_option("--seeds", seeds, "Repetitions per value; repetition j adds j to every seed")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? sclab::kExitOk : sclab::kExitValidation;
  }

  sclab::ScenarioConfig config;
  try {
    config = sclab::ParseScenarioFile(scenario_path);
  } catch (const sclab::ValidationError& e) {
    std::cerr << "sclab: invalid scenario: " << e.what() << "\n";
    return sclab::kExitValidation;
  }

  try {
    if (validate->parsed()) {
      std::cout << sclab::ScenarioToJson(config).dump(2) << "\n";
      return sclab::kExitOk;
    }
    if (run->parsed()) return Report(sclab::RunScenario(config, OutputDir(config, output_dir)));
    if (power->parsed()) return Report(sclab::RunPower(config, OutputDir(config, output_dir)));
    return Report(sclab::RunSweep(config, {axis, values, seeds}, OutputDir(config, output_dir)));
  } catch (const sclab::ValidationError& e) {
    std::cerr << "sclab: invalid scenario: " << e.what() << "\n";
    return sclab::kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "sclab: " << e.what() << "\n";
    return sclab::kExitPipeline;
  }
}
