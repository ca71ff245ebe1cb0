#ifndef SCLAB_ANALYSIS_HPP_
#define SCLAB_ANALYSIS_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sclab/attacks.hpp"
#include "sclab/common.hpp"
#include "sclab/victims.hpp"

namespace sclab {

// Exact 1-D 2-means: the split of the sorted values minimizing total
// within-cluster squared error. Ties go to the lowest split point.
struct TwoMeansSplit {
  double low_center = 0.0;
  double high_center = 0.0;
  std::size_t low_count = 0;

  double threshold() const { return 0.5 * (low_center + high_center); }
};

// Throws DegenerateData when fewer than two distinct values are present.
TwoMeansSplit SplitTwoMeans(std::span<const double> values);

struct OccupancyMap {
  std::size_t slots = 0;
  std::vector<SetId> columns;
  std::vector<std::uint8_t> grid;  // slot-major; 1 = victim touched the set
  double threshold_used = 0.0;

  bool at(std::size_t slot, std::size_t column) const { return grid[slot * columns.size() + column] != 0; }
};

// Thresholds every entry at the 2-means midpoint of all entries. Throws
// DegenerateData when all entries are equal.
OccupancyMap Binarize(const ProbeMatrix& matrix);

// Same, but the threshold is fitted on the listed columns only. The whole
// grid is still classified.
OccupancyMap Binarize(const ProbeMatrix& matrix, std::span<const std::size_t> calibration_columns);

struct Run {
  bool occupied = false;
  std::size_t length = 0;

  bool operator==(const Run&) const = default;
};

struct IntervalSequence {
  std::vector<Run> runs;
  SetId target_set = 0;

  std::size_t TotalSlots() const;
  std::size_t OccupiedRuns() const;
};

// Run-length encoding of the target set's column. Throws InvalidConfig when
// the set is not in the map.
IntervalSequence ExtractIntervals(const OccupancyMap& map, SetId target_set);

struct BitDecoding {
  Bits bits;
  std::vector<double> margins;
  double threshold = 0.0;
  // All occupied runs had the same length: nothing to split on, so every
  // bit reads as 0 with zero margin.
  bool single_cluster = false;
};

// Occupied-run lengths are 2-means clustered; the long cluster reads as 1.
// Unoccupied runs are ignored. Throws DegenerateData without any occupied
// run.
BitDecoding IntervalsToBits(const IntervalSequence& seq);

// With the victim's per-bit durations known, a single cluster reads as all
// 1s when its length is nearer d1 than d0 (margins stay 0 and the
// single-cluster flag is still set).
BitDecoding IntervalsToBits(const IntervalSequence& seq, std::optional<SlotDurations> expected);

// Victim loop timing the attacker knows from the implementation.
struct LoopTiming {
  std::uint32_t square_slots = 2;
  std::uint32_t release_slots = 1;
};

// Decodes a shared-line column, where only multiply windows are visible.
// Each window is a 1-bit; the gap before it holds round(...) 0-bits of
// square_slots + release_slots each. Bits after the last window are padded
// with zeros up to key_length.
BitDecoding SharedLineToBits(const IntervalSequence& seq, LoopTiming timing, std::size_t key_length);

struct RecoveryReport {
  Bits recovered;
  std::optional<Bits> truth;
  std::optional<double> accuracy;
  int alignment_offset = 0;
  std::vector<double> per_bit_margin;
};

// Accuracy is the best matching fraction over truth positions when the
// recovered vector is shifted by -1, 0 or +1 (0 preferred on ties).
RecoveryReport ScoreRecovery(const Bits& recovered, const Bits& truth, std::vector<double> margins = {});

}  // namespace sclab

#endif  // SCLAB_ANALYSIS_HPP_
