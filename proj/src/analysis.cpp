#include "sclab/analysis.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace sclab {

TwoMeansSplit SplitTwoMeans(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.empty() || sorted.front() == sorted.back()) {
    throw DegenerateData("degenerate data: fewer than two distinct values to cluster");
  }
  const std::size_t n = sorted.size();
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + sorted[i];

  // Minimizing within-cluster SSE is maximizing S1^2/n1 + S2^2/n2.
  double best_score = -1.0;
  std::size_t best_split = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (sorted[i - 1] == sorted[i]) continue;
    const double s1 = prefix[i], s2 = prefix[n] - prefix[i];
    const double score = s1 * s1 / static_cast<double>(i) + s2 * s2 / static_cast<double>(n - i);
    if (score > best_score) {
      best_score = score;
      best_split = i;
    }
  }
  TwoMeansSplit split;
  split.low_count = best_split;
  split.low_center = prefix[best_split] / static_cast<double>(best_split);
  split.high_center = (prefix[n] - prefix[best_split]) / static_cast<double>(n - best_split);
  return split;
}

namespace {

OccupancyMap Classify(const ProbeMatrix& matrix, double threshold) {
  OccupancyMap map;
  map.slots = matrix.slots();
  map.columns = matrix.columns();
  map.threshold_used = threshold;
  map.grid.resize(matrix.values().size());
  const bool slow_is_activity = matrix.polarity() == Polarity::kSlowIsActivity;
  std::size_t i = 0;
  for (double v : matrix.values()) {
    map.grid[i++] = slow_is_activity ? (v > threshold) : (v < threshold);
  }
  return map;
}

}  // namespace

OccupancyMap Binarize(const ProbeMatrix& matrix) {
  if (matrix.values().empty()) throw DegenerateData("degenerate matrix: no entries");
  try {
    return Classify(matrix, SplitTwoMeans(matrix.values()).threshold());
  } catch (const DegenerateData&) {
    throw DegenerateData("degenerate matrix: all entries equal, no victim activity observed");
  }
}

OccupancyMap Binarize(const ProbeMatrix& matrix, std::span<const std::size_t> calibration_columns) {
  std::vector<double> sample;
  sample.reserve(matrix.slots() * calibration_columns.size());
  for (std::size_t c : calibration_columns) {
    if (c >= matrix.sets()) throw InvalidConfig(fmt::format("calibration column {} out of range", c));
    for (std::size_t s = 0; s < matrix.slots(); ++s) sample.push_back(matrix.at(s, c));
  }
  if (sample.empty()) throw DegenerateData("degenerate matrix: no entries");
  try {
    return Classify(matrix, SplitTwoMeans(sample).threshold());
  } catch (const DegenerateData&) {
    throw DegenerateData("degenerate matrix: calibration entries all equal, no victim activity observed");
  }
}

std::size_t IntervalSequence::TotalSlots() const {
  std::size_t total = 0;
  for (const Run& r : runs) total += r.length;
  return total;
}

std::size_t IntervalSequence::OccupiedRuns() const {
  return static_cast<std::size_t>(std::count_if(runs.begin(), runs.end(), [](const Run& r) { return r.occupied; }));
}

IntervalSequence ExtractIntervals(const OccupancyMap& map, SetId target_set) {
  const auto it = std::find(map.columns.begin(), map.columns.end(), target_set);
  if (it == map.columns.end()) {
    throw InvalidConfig(fmt::format("set {} is not covered by the occupancy map", target_set));
  }
  const auto column = static_cast<std::size_t>(it - map.columns.begin());
  IntervalSequence seq;
  seq.target_set = target_set;
  for (std::size_t s = 0; s < map.slots; ++s) {
    const bool occupied = map.at(s, column);
    if (!seq.runs.empty() && seq.runs.back().occupied == occupied) {
      ++seq.runs.back().length;
    } else {
      seq.runs.push_back({occupied, 1});
    }
  }
  return seq;
}

BitDecoding IntervalsToBits(const IntervalSequence& seq) { return IntervalsToBits(seq, std::nullopt); }

BitDecoding IntervalsToBits(const IntervalSequence& seq, std::optional<SlotDurations> expected) {
  std::vector<double> lengths;
  for (const Run& r : seq.runs) {
    if (r.occupied) lengths.push_back(static_cast<double>(r.length));
  }
  if (lengths.empty()) throw DegenerateData("no occupied interval in the target set");

  BitDecoding out;
  if (std::all_of(lengths.begin(), lengths.end(), [&](double l) { return l == lengths.front(); })) {
    out.single_cluster = true;
    out.threshold = expected ? 0.5 * (expected->d0 + expected->d1) : lengths.front();
    out.bits.assign(lengths.size(), expected.has_value() && lengths.front() > out.threshold);
    out.margins.assign(lengths.size(), 0.0);
    return out;
  }
  out.threshold = SplitTwoMeans(lengths).threshold();
  for (double l : lengths) {
    out.bits.push_back(l > out.threshold);
    out.margins.push_back(std::abs(l - out.threshold));
  }
  return out;
}

BitDecoding SharedLineToBits(const IntervalSequence& seq, LoopTiming timing, std::size_t key_length) {
  const double period = static_cast<double>(timing.square_slots + timing.release_slots);
  BitDecoding out;
  out.threshold = period;
  std::size_t gap = 0;
  bool first_window = true;
  for (const Run& r : seq.runs) {
    if (!r.occupied) {
      gap += r.length;
      continue;
    }
    const double lead = first_window ? timing.square_slots : timing.square_slots + timing.release_slots;
    const double quotient = (static_cast<double>(gap) - lead) / period;
    const double zeros = std::max(0.0, std::round(quotient));
    const double margin = 0.5 - std::min(0.5, std::abs(quotient - zeros));
    for (std::size_t i = 0; i < static_cast<std::size_t>(zeros); ++i) {
      out.bits.push_back(false);
      out.margins.push_back(margin);
    }
    out.bits.push_back(true);
    out.margins.push_back(margin);
    gap = 0;
    first_window = false;
  }
  while (out.bits.size() < key_length) {
    out.bits.push_back(false);
    out.margins.push_back(0.0);
  }
  return out;
}

RecoveryReport ScoreRecovery(const Bits& recovered, const Bits& truth, std::vector<double> margins) {
  if (truth.empty()) throw InvalidConfig("truth must contain at least one bit");
  RecoveryReport report;
  report.recovered = recovered;
  report.truth = truth;
  report.per_bit_margin = std::move(margins);

  double best = -1.0;
  for (int offset : {0, -1, 1}) {
    std::size_t matches = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      const auto j = static_cast<std::ptrdiff_t>(i) + offset;
      if (j >= 0 && static_cast<std::size_t>(j) < recovered.size() && recovered[j] == truth[i]) ++matches;
    }
    const double accuracy = static_cast<double>(matches) / static_cast<double>(truth.size());
    if (accuracy > best) {
      best = accuracy;
      report.alignment_offset = offset;
    }
  }
  report.accuracy = best;
  return report;
}

}  // namespace sclab
