#include "sclab/artifacts.hpp"

#include <fstream>

#include <fmt/format.h>

namespace sclab {

std::string FormatNumber(double value) { return fmt::format("{}", value); }

void WriteTextFile(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw Error(fmt::format("cannot create directory '{}': {}", path.parent_path().string(), ec.message()));
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(fmt::format("cannot open '{}' for writing", path.string()));
  out << content;
  if (!out.flush()) throw Error(fmt::format("failed writing '{}'", path.string()));
}

void WriteJsonFile(const std::filesystem::path& path, const nlohmann::ordered_json& json) {
  WriteTextFile(path, json.dump(2) + "\n");
}

namespace {

std::string GridHeader(const std::vector<SetId>& columns) {
  std::string out = "slot";
  for (SetId s : columns) out += fmt::format(",set_{}", s);
  out += '\n';
  return out;
}

}  // namespace

std::string ProbeMatrixCsv(const ProbeMatrix& matrix) {
  std::string out = GridHeader(matrix.columns());
  for (std::size_t slot = 0; slot < matrix.slots(); ++slot) {
    out += std::to_string(slot);
    for (std::size_t c = 0; c < matrix.sets(); ++c) {
      out += ',';
      out += FormatNumber(matrix.at(slot, c));
    }
    out += '\n';
  }
  return out;
}

std::string OccupancyCsv(const OccupancyMap& map) {
  std::string out = GridHeader(map.columns);
  for (std::size_t slot = 0; slot < map.slots; ++slot) {
    out += std::to_string(slot);
    for (std::size_t c = 0; c < map.columns.size(); ++c) out += map.at(slot, c) ? ",1" : ",0";
    out += '\n';
  }
  return out;
}

std::string HeatmapCsv(const ProbeMatrix& matrix) {
  std::string out = "slot,set,latency\n";
  for (std::size_t slot = 0; slot < matrix.slots(); ++slot) {
    for (std::size_t c = 0; c < matrix.sets(); ++c) {
      out += fmt::format("{},{},{}\n", slot, matrix.columns()[c], FormatNumber(matrix.at(slot, c)));
    }
  }
  return out;
}

std::string IntervalsCsv(const IntervalSequence& seq) {
  std::string out = "index,occupied,length\n";
  for (std::size_t i = 0; i < seq.runs.size(); ++i) {
    out += fmt::format("{},{},{}\n", i, seq.runs[i].occupied ? 1 : 0, seq.runs[i].length);
  }
  return out;
}

std::string TraceCsv(const PowerTrace& trace) {
  std::string out = "index,sample\n";
  for (std::size_t i = 0; i < trace.samples.size(); ++i) out += fmt::format("{},{}\n", i, FormatNumber(trace.samples[i]));
  return out;
}

std::string AesTraceCsv(std::span<const AesTraceSample> traces) {
  std::string out = "plaintext,sample\n";
  for (const AesTraceSample& t : traces) out += fmt::format("{},{}\n", t.plaintext, FormatNumber(t.sample));
  return out;
}

void EmitHeatmapData(const ProbeMatrix& matrix, const std::filesystem::path& path) {
  WriteTextFile(path, HeatmapCsv(matrix));
}

}  // namespace sclab
