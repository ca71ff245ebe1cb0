#ifndef SCLAB_RUNNER_HPP_
#define SCLAB_RUNNER_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "sclab/scenario.hpp"

namespace sclab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitPipeline = 2;

struct RunOutcome {
  int exit_code = kExitOk;
  std::filesystem::path output_dir;
  nlohmann::ordered_json report;
  std::vector<std::filesystem::path> files;  // every artifact written
  std::string error;                         // set when exit_code != 0
};

// Runs one attack scenario and writes report.json, probe_matrix.csv,
// occupancy.csv, intervals.csv and heatmap.csv into `output_dir`. A failure
// inside the pipeline still writes report.json with status "error".
RunOutcome RunScenario(const ScenarioConfig& config, const std::filesystem::path& output_dir);

struct SweepRequest {
  std::string axis;
  std::vector<std::string> values;
  std::size_t seeds = 1;  // point j adds j to every scenario seed
};

// Writes sweep.csv (one row per value and seed) and report.json (means per
// value). Throws ValidationError for an unknown axis or bad value before
// anything runs.
RunOutcome RunSweep(const ScenarioConfig& config, const SweepRequest& request,
                    const std::filesystem::path& output_dir);

// Power analysis of the configured victim: SPA for the modexp kinds, DPA
// for aes. Writes trace.csv and report.json.
RunOutcome RunPower(const ScenarioConfig& config, const std::filesystem::path& output_dir);

}  // namespace sclab

#endif  // SCLAB_RUNNER_HPP_
