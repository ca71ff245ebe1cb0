#ifndef SCLAB_POWER_HPP_
#define SCLAB_POWER_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "sclab/common.hpp"
#include "sclab/victims.hpp"

namespace sclab {

// Hamming-weight leakage with additive Gaussian noise.
struct PowerModel {
  double base_power = 1.0;
  double op_weight = 1.0;
  double noise_sigma = 0.0;
  // First-order boolean masking of the S-box output.
  bool masked = false;

  void Validate() const;
};

struct PowerTrace {
  std::vector<double> samples;
  std::vector<BitSpan> segmentation;  // one range per key bit (modexp only)
};

// One square sample per bit at base_power, plus a multiply sample at
// base_power + op_weight for each 1-bit.
PowerTrace TraceModExp(const VictimKey& key, const PowerModel& model, Rng& rng);

// Square-and-always-multiply: every bit gets both samples, so the trace
// does not depend on the key.
PowerTrace TraceModExpConstantTime(const VictimKey& key, const PowerModel& model, Rng& rng);

// Sample-wise mean of traces sharing one segmentation.
PowerTrace AverageTraces(std::span<const PowerTrace> traces);

// A segment reads as 1 when any of its samples is above the 2-means
// midpoint of all samples. Throws DegenerateData when the samples carry no
// split: all samples equal, no segmentation, or every segment identical
// (a constant-time trace, or a noiseless all-ones key, which looks the
// same).
Bits SpaExtract(const PowerTrace& trace);

// base + op_weight * HW(sbox[p ^ k]) + noise; masked models leak
// HW(sbox[p ^ k] ^ r) for a fresh mask r drawn from `rng`.
double TraceAesSbox(std::uint8_t plaintext, std::uint8_t key, const AesTableConfig& table, const PowerModel& model,
                    Rng& rng);

struct AesTraceSample {
  std::uint8_t plaintext = 0;
  double sample = 0.0;
};

// Each plaintext is measured `acquisitions` times and the samples averaged.
std::vector<AesTraceSample> AcquireAesTraces(std::span<const std::uint8_t> plaintexts, std::uint8_t key,
                                             const AesTableConfig& table, const PowerModel& model,
                                             std::size_t acquisitions, Rng& rng);

// All 256 plaintexts in order.
std::vector<std::uint8_t> ExhaustivePlaintexts();

struct DpaResult {
  std::uint8_t best_hypothesis = 0;
  std::array<double, 256> scores{};
  double margin = 0.0;

  // 0 for the best hypothesis; ties rank in favour of the lower byte.
  std::size_t RankOf(std::uint8_t hypothesis) const;
};

// Kocher difference of means on the MSB of sbox[p ^ h] for every
// hypothesis h. A hypothesis with an empty partition scores 0. Throws
// InsufficientTraces for fewer than two traces.
DpaResult DpaAttack(std::span<const AesTraceSample> traces, const AesTableConfig& table);

}  // namespace sclab

#endif  // SCLAB_POWER_HPP_
