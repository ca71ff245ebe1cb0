#include "sclab/power.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "sclab/analysis.hpp"

namespace sclab {
namespace {

class Noise {
 public:
  Noise(double sigma, Rng& rng) : sigma_(sigma), rng_(rng) {}
  double operator()() { return sigma_ > 0.0 ? normal_(rng_) * sigma_ : 0.0; }

 private:
  double sigma_;
  Rng& rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace

void PowerModel::Validate() const {
  if (!(noise_sigma >= 0.0)) throw InvalidConfig(fmt::format("noise_sigma must be >= 0 (got {})", noise_sigma));
}

PowerTrace TraceModExp(const VictimKey& key, const PowerModel& model, Rng& rng) {
  model.Validate();
  Noise noise(model.noise_sigma, rng);
  PowerTrace trace;
  trace.samples.reserve(key.length() + key.popcount());
  for (bool bit : key.bits()) {
    const std::size_t begin = trace.samples.size();
    trace.samples.push_back(model.base_power + noise());
    if (bit) trace.samples.push_back(model.base_power + model.op_weight + noise());
    trace.segmentation.push_back({begin, trace.samples.size() - begin});
  }
  return trace;
}

PowerTrace TraceModExpConstantTime(const VictimKey& key, const PowerModel& model, Rng& rng) {
  model.Validate();
  Noise noise(model.noise_sigma, rng);
  PowerTrace trace;
  trace.samples.reserve(2 * key.length());
  for (std::size_t i = 0; i < key.length(); ++i) {
    const std::size_t begin = trace.samples.size();
    trace.samples.push_back(model.base_power + noise());
    trace.samples.push_back(model.base_power + model.op_weight + noise());
    trace.segmentation.push_back({begin, 2});
  }
  return trace;
}

PowerTrace AverageTraces(std::span<const PowerTrace> traces) {
  if (traces.empty()) throw InsufficientTraces("no traces to average");
  PowerTrace out;
  out.segmentation = traces.front().segmentation;
  out.samples.assign(traces.front().samples.size(), 0.0);
  for (const PowerTrace& t : traces) {
    if (t.samples.size() != out.samples.size()) {
      throw InvalidConfig("cannot average traces of different lengths");
    }
    for (std::size_t i = 0; i < t.samples.size(); ++i) out.samples[i] += t.samples[i];
  }
  for (double& s : out.samples) s /= static_cast<double>(traces.size());
  return out;
}

Bits SpaExtract(const PowerTrace& trace) {
  if (trace.segmentation.empty()) throw DegenerateData("degenerate clusters: trace has no segmentation");
  TwoMeansSplit split;
  try {
    split = SplitTwoMeans(trace.samples);
  } catch (const DegenerateData&) {
    throw DegenerateData("degenerate clusters: all trace samples are equal");
  }
  const BitSpan& first = trace.segmentation.front();
  const auto same_as_first = [&](const BitSpan& seg) {
    return seg.length == first.length &&
           std::equal(trace.samples.begin() + static_cast<std::ptrdiff_t>(seg.begin),
                      trace.samples.begin() + static_cast<std::ptrdiff_t>(seg.begin + seg.length),
                      trace.samples.begin() + static_cast<std::ptrdiff_t>(first.begin));
  };
  if (trace.segmentation.size() > 1 && std::all_of(trace.segmentation.begin(), trace.segmentation.end(), same_as_first)) {
    throw DegenerateData("degenerate clusters: every segment is identical");
  }
  const double midpoint = split.threshold();
  Bits bits;
  bits.reserve(trace.segmentation.size());
  for (const BitSpan& seg : trace.segmentation) {
    const auto first = trace.samples.begin() + static_cast<std::ptrdiff_t>(seg.begin);
    bits.push_back(std::any_of(first, first + static_cast<std::ptrdiff_t>(seg.length),
                               [&](double s) { return s > midpoint; }));
  }
  return bits;
}

double TraceAesSbox(std::uint8_t plaintext, std::uint8_t key, const AesTableConfig& table, const PowerModel& model,
                    Rng& rng) {
  std::uint8_t value = table.sbox[static_cast<std::uint8_t>(plaintext ^ key)];
  if (model.masked) value ^= static_cast<std::uint8_t>(rng() & 0xff);
  Noise noise(model.noise_sigma, rng);
  return model.base_power + model.op_weight * std::popcount(value) + noise();
}

std::vector<AesTraceSample> AcquireAesTraces(std::span<const std::uint8_t> plaintexts, std::uint8_t key,
                                             const AesTableConfig& table, const PowerModel& model,
                                             std::size_t acquisitions, Rng& rng) {
  model.Validate();
  table.Validate();
  if (acquisitions == 0) throw InvalidConfig("acquisitions per plaintext must be >= 1");
  std::vector<AesTraceSample> out;
  out.reserve(plaintexts.size());
  for (std::uint8_t p : plaintexts) {
    double sum = 0.0;
    for (std::size_t a = 0; a < acquisitions; ++a) sum += TraceAesSbox(p, key, table, model, rng);
    out.push_back({p, sum / static_cast<double>(acquisitions)});
  }
  return out;
}

std::vector<std::uint8_t> ExhaustivePlaintexts() {
  std::vector<std::uint8_t> p(256);
  std::iota(p.begin(), p.end(), std::uint8_t{0});
  return p;
}

std::size_t DpaResult::RankOf(std::uint8_t hypothesis) const {
  std::size_t rank = 0;
  const double score = scores[hypothesis];
  for (std::size_t h = 0; h < scores.size(); ++h) {
    if (scores[h] > score || (scores[h] == score && h < hypothesis)) ++rank;
  }
  return rank;
}

DpaResult DpaAttack(std::span<const AesTraceSample> traces, const AesTableConfig& table) {
  if (traces.size() < 2) {
    throw InsufficientTraces(fmt::format("DPA needs at least 2 traces (got {})", traces.size()));
  }
  DpaResult result;
  for (std::size_t h = 0; h < 256; ++h) {
    double sum[2] = {0.0, 0.0};
    std::size_t count[2] = {0, 0};
    for (const AesTraceSample& t : traces) {
      const int msb = table.sbox[static_cast<std::uint8_t>(t.plaintext ^ h)] >> 7;
      sum[msb] += t.sample;
      ++count[msb];
    }
    result.scores[h] = (count[0] == 0 || count[1] == 0)
                           ? 0.0
                           : std::abs(sum[1] / static_cast<double>(count[1]) - sum[0] / static_cast<double>(count[0]));
  }
  std::size_t best = 0, second = 1;
  if (result.scores[second] > result.scores[best]) std::swap(best, second);
  for (std::size_t h = 2; h < 256; ++h) {
    if (result.scores[h] > result.scores[best]) {
      second = best;
      best = h;
    } else if (result.scores[h] > result.scores[second]) {
      second = h;
    }
  }
  result.best_hypothesis = static_cast<std::uint8_t>(best);
  result.margin = result.scores[best] - result.scores[second];
  return result;
}

}  // namespace sclab
