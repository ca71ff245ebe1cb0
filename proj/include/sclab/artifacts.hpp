#ifndef SCLAB_ARTIFACTS_HPP_
#define SCLAB_ARTIFACTS_HPP_

#include <filesystem>
#include <span>
#include <string>

#include <json.hpp>

#include "sclab/analysis.hpp"
#include "sclab/attacks.hpp"
#include "sclab/power.hpp"

namespace sclab {

// Bumped whenever a report field changes meaning or disappears.
inline constexpr int kReportSchemaVersion = 1;

// Shortest text that reads back to the same double.
std::string FormatNumber(double value);

// Creates parent directories as needed. Throws Error on I/O failure.
void WriteTextFile(const std::filesystem::path& path, const std::string& content);
void WriteJsonFile(const std::filesystem::path& path, const nlohmann::ordered_json& json);

// Header "slot,set_<id>,..." then one row per slot.
std::string ProbeMatrixCsv(const ProbeMatrix& matrix);
// Same layout as the probe matrix, with 0/1 cells.
std::string OccupancyCsv(const OccupancyMap& map);
// Long format for plotting: header "slot,set,latency", one row per cell.
std::string HeatmapCsv(const ProbeMatrix& matrix);
// "index,occupied,length" per run.
std::string IntervalsCsv(const IntervalSequence& seq);
// "index,sample".
std::string TraceCsv(const PowerTrace& trace);
// "plaintext,sample".
std::string AesTraceCsv(std::span<const AesTraceSample> traces);

void EmitHeatmapData(const ProbeMatrix& matrix, const std::filesystem::path& path);

}  // namespace sclab

#endif  // SCLAB_ARTIFACTS_HPP_
