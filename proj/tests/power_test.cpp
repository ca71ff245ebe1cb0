#include <gtest/gtest.h>

#include <bit>
#include <map>

#include "sclab/power.hpp"

namespace sclab {
namespace {

const PowerModel kClean{1.0, 1.0, 0.0, false};

AesTableConfig Table(bool identity = false) {
  AesTableConfig t;
  t.sbox = identity ? IdentitySbox() : AesSbox();
  return t;
}

TEST(TraceModExpTest, SamplesFollowTheBits) {
  Rng rng(1);
  const PowerTrace t = TraceModExp(VictimKey::FromBinary("1011"), kClean, rng);
  EXPECT_EQ(t.samples, (std::vector<double>{1, 2, 1, 1, 2, 1, 2}));
  ASSERT_EQ(t.segmentation.size(), 4u);
  EXPECT_EQ(t.segmentation[1].begin, 2u);
  EXPECT_EQ(t.segmentation[1].length, 1u);
}

TEST(TraceModExpTest, ZeroKeyIsFlat) {
  Rng rng(1);
  for (double s : TraceModExp(VictimKey::FromBinary("0000"), kClean, rng).samples) EXPECT_EQ(s, 1.0);
}

TEST(TraceModExpTest, Deterministic) {
  const PowerModel noisy{1.0, 1.0, 0.5, false};
  Rng a(3), b(3);
  const VictimKey k = VictimKey::FromBinary("110100111");
  EXPECT_EQ(TraceModExp(k, noisy, a).samples, TraceModExp(k, noisy, b).samples);
}

TEST(SpaTest, InvertsNoiselessTrace) {
  Rng rng(1);
  EXPECT_EQ(SpaExtract(TraceModExp(VictimKey::FromBinary("1011"), kClean, rng)), (Bits{1, 0, 1, 1}));
}

TEST(SpaTest, IdenticalSegmentsAreDegenerate) {
  Rng rng(1);
  const VictimKey k = VictimKey::FromBinary("1011");
  EXPECT_THROW(SpaExtract(TraceModExpConstantTime(k, kClean, rng)), DegenerateData);
  EXPECT_THROW(SpaExtract(TraceModExp(VictimKey::FromBinary("0000"), kClean, rng)), DegenerateData);
  EXPECT_THROW(SpaExtract(PowerTrace{}), DegenerateData);
}

TEST(SpaTest, TinyNoiseStillExact) {
  const PowerModel model{1.0, 1.0, 0.01, false};
  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    const VictimKey k = VictimKey::Random(64, rng);
    EXPECT_EQ(SpaExtract(TraceModExp(k, model, rng)), k.bits());
  }
}

TEST(SpaTest, AveragingRecoversFromNoise) {
  const PowerModel model{1.0, 1.0, 2.0, false};
  Rng rng(6);
  const VictimKey k = VictimKey::Random(64, rng);
  std::vector<PowerTrace> traces;
  for (int i = 0; i < 400; ++i) traces.push_back(TraceModExp(k, model, rng));
  EXPECT_EQ(SpaExtract(AverageTraces(traces)), k.bits());
}

TEST(TraceAesTest, HammingWeight) {
  Rng rng(1);
  const PowerModel m{0.0, 1.0, 0.0, false};
  EXPECT_DOUBLE_EQ(TraceAesSbox(0x0F, 0x00, Table(true), m, rng), 4.0);
  for (int p = 0; p < 256; ++p) {
    EXPECT_DOUBLE_EQ(TraceAesSbox(static_cast<std::uint8_t>(p), static_cast<std::uint8_t>(p), Table(true), m, rng), 0.0);
  }
}

TEST(TraceAesTest, MaskedDistributionIsKeyIndependent) {
  // Over all 256 masks HW(v ^ r) has the binomial(8) distribution for any v.
  const PowerModel m{0.0, 1.0, 0.0, true};
  for (int key : {0x00, 0x3c, 0xa5}) {
    std::map<double, int> histogram;
    Rng rng(static_cast<std::uint64_t>(key));
    for (int i = 0; i < 200000; ++i) ++histogram[TraceAesSbox(0x11, static_cast<std::uint8_t>(key), Table(), m, rng)];
    EXPECT_NEAR(histogram[4.0] / 200000.0, 70.0 / 256.0, 0.01);
    EXPECT_NEAR(histogram[0.0] / 200000.0, 1.0 / 256.0, 0.002);
  }
}

// Oracle: score each hypothesis directly from the definition.
double OracleScore(const std::vector<AesTraceSample>& traces, int h) {
  double s1 = 0, s0 = 0;
  int n1 = 0, n0 = 0;
  for (const auto& t : traces) {
    if (AesSbox()[t.plaintext ^ h] & 0x80) {
      s1 += t.sample;
      ++n1;
    } else {
      s0 += t.sample;
      ++n0;
    }
  }
  return std::abs(s1 / n1 - s0 / n0);
}

TEST(DpaTest, NoiselessRecoversKey) {
  Rng rng(1);
  const auto traces = AcquireAesTraces(ExhaustivePlaintexts(), 0x3C, Table(), kClean, 1, rng);
  const DpaResult r = DpaAttack(traces, Table());
  EXPECT_EQ(r.best_hypothesis, 0x3C);
  EXPECT_EQ(r.RankOf(0x3C), 0u);
  EXPECT_GT(r.margin, 0.0);
  for (int h = 0; h < 256; ++h) EXPECT_NEAR(r.scores[h], OracleScore(traces, h), 1e-9);
}

TEST(DpaTest, NeedsTwoTraces) {
  const std::vector<AesTraceSample> one = {{1, 2.0}};
  EXPECT_THROW(DpaAttack(one, Table()), InsufficientTraces);
}

TEST(DpaTest, MaskingRemovesTheSignal) {
  Rng rng(12);
  const PowerModel masked{1.0, 1.0, 0.0, true};
  const PowerModel plain{1.0, 1.0, 0.0, false};
  std::vector<std::uint8_t> plaintexts(10000);
  for (auto& p : plaintexts) p = static_cast<std::uint8_t>(rng() & 0xff);
  const DpaResult m = DpaAttack(AcquireAesTraces(plaintexts, 0x3C, Table(), masked, 1, rng), Table());
  const DpaResult u = DpaAttack(AcquireAesTraces(plaintexts, 0x3C, Table(), plain, 1, rng), Table());
  // Unmasked: the true key stands far above the rest. Masked: it does not.
  EXPECT_GT(u.scores[0x3C], 0.9);
  EXPECT_LT(m.scores[0x3C], 0.1);
  EXPECT_LT(m.margin, 0.1);
}

TEST(AverageTracesTest, Mean) {
  PowerTrace a{{1, 2, 3}, {}}, b{{3, 4, 5}, {}};
  const std::vector<PowerTrace> v = {a, b};
  EXPECT_EQ(AverageTraces(v).samples, (std::vector<double>{2, 3, 4}));
  EXPECT_THROW(AverageTraces(std::vector<PowerTrace>{}), InsufficientTraces);
}

}  // namespace
}  // namespace sclab
