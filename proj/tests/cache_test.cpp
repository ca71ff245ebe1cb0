#include <gtest/gtest.h>

#include <set>

#include "sclab/cache.hpp"

namespace sclab {
namespace {

CacheConfig TwoWay() {
  CacheConfig c;
  c.ways = 2;
  return c;
}

// Addresses k * num_sets * line_size all share a set.
Address Alias(const CacheConfig& c, SetId set, std::uint64_t k) {
  return static_cast<Address>(set) * c.line_size + k * c.num_sets * c.line_size;
}

TEST(CacheTest, FreshCacheIsEmpty) {
  Cache cache(CacheConfig{}, 42);
  EXPECT_EQ(cache.ValidLineCount(), 0u);
  for (const WaySnapshot& w : cache.SnapshotSet(17)) EXPECT_FALSE(w.valid);
}

TEST(CacheTest, ZeroSetsIsInvalid) {
  CacheConfig c;
  c.num_sets = 0;
  EXPECT_THROW(Cache(c, 1), InvalidConfig);
}

TEST(CacheTest, InvariantsAreChecked) {
  for (auto mutate : std::vector<void (*)(CacheConfig&)>{
           [](CacheConfig& c) { c.ways = 0; },
           [](CacheConfig& c) { c.line_size = 48; },
           [](CacheConfig& c) { c.line_size = 0; },
           [](CacheConfig& c) { c.hit_latency = 100; },
           [](CacheConfig& c) { c.num_sets = 100; },
       }) {
    CacheConfig c;
    mutate(c);
    EXPECT_THROW(c.Validate(), InvalidConfig);
  }
}

TEST(CacheTest, SameSeedSameOutcomes) {
  CacheConfig c;
  c.replacement = Replacement::kRandom;
  c.ways = 4;
  Cache a(c, 7), b(c, 7);
  Rng rng(3);
  for (int i = 0; i < 5000; ++i) {
    const Address addr = Alias(c, rng() % 4, rng() % 12);
    const AccessResult ra = a.Access(addr, ActorId::kAttacker);
    const AccessResult rb = b.Access(addr, ActorId::kAttacker);
    ASSERT_EQ(ra.hit, rb.hit);
    ASSERT_EQ(ra.latency, rb.latency);
    ASSERT_EQ(ra.evicted_address, rb.evicted_address);
  }
}

TEST(SetIndexTest, HandComputed) {
  const CacheConfig c;
  EXPECT_EQ(SetIndex(c, 0x0), 0u);
  EXPECT_EQ(SetIndex(c, 0x1040), 4160u / 64 % 256);
  EXPECT_EQ(SetIndex(c, 0x1040), 65u);
  EXPECT_EQ(SetIndex(c, 0x40), 1u);
  EXPECT_EQ(SetIndex(c, 0x4040), 1u);
}

TEST(SetIndexTest, PermutationIsApplied) {
  CacheConfig c;
  c.index_permutation = SetPermutation(c.num_sets, 99);
  for (Address a = 0; a < 256 * 64; a += 64) {
    EXPECT_EQ(SetIndex(c, a), c.index_permutation->Map(BaseSetIndex(c, a)));
  }
}

TEST(CacheTest, ColdMissThenHit) {
  Cache cache(CacheConfig{}, 1);
  const AccessResult first = cache.Access(0x1234, ActorId::kVictim);
  EXPECT_FALSE(first.hit);
  EXPECT_EQ(first.latency, 100u);
  const AccessResult second = cache.Access(0x1234, ActorId::kVictim);
  EXPECT_TRUE(second.hit);
  EXPECT_EQ(second.latency, 4u);
  EXPECT_EQ(cache.stats(ActorId::kVictim).hits, 1u);
  EXPECT_EQ(cache.stats(ActorId::kVictim).misses, 1u);
}

TEST(CacheTest, LruEvictsLeastRecentlyUsed) {
  const CacheConfig c = TwoWay();
  Cache cache(c, 1);
  const Address a = Alias(c, 5, 0), b = Alias(c, 5, 1), d = Alias(c, 5, 2);
  cache.Access(a, ActorId::kAttacker);
  cache.Access(b, ActorId::kAttacker);
  const AccessResult r = cache.Access(d, ActorId::kAttacker);
  EXPECT_FALSE(r.hit);
  ASSERT_TRUE(r.evicted_address.has_value());
  EXPECT_EQ(*r.evicted_address, a);
  EXPECT_FALSE(cache.Contains(a));
  EXPECT_TRUE(cache.Contains(b));
}

TEST(CacheTest, LruRespectsRecencyUpdateOnHit) {
  const CacheConfig c = TwoWay();
  Cache cache(c, 1);
  const Address a = Alias(c, 5, 0), b = Alias(c, 5, 1), d = Alias(c, 5, 2);
  cache.Access(a, ActorId::kAttacker);
  cache.Access(b, ActorId::kAttacker);
  cache.Access(a, ActorId::kAttacker);
  EXPECT_EQ(cache.Access(d, ActorId::kAttacker).evicted_address, b);
}

TEST(CacheTest, RandomReplacementFillsInvalidWaysFirst) {
  CacheConfig c;
  c.replacement = Replacement::kRandom;
  Cache cache(c, 5);
  for (std::uint64_t k = 0; k < c.ways; ++k) {
    EXPECT_FALSE(cache.Access(Alias(c, 3, k), ActorId::kAttacker).evicted_address.has_value());
  }
  EXPECT_TRUE(cache.Access(Alias(c, 3, c.ways), ActorId::kAttacker).evicted_address.has_value());
}

TEST(CacheTest, FlushCachedLine) {
  Cache cache(CacheConfig{}, 1);
  cache.Access(0x1000, ActorId::kVictim);
  EXPECT_EQ(cache.FlushLine(0x1000), 100u);
  EXPECT_FALSE(cache.Contains(0x1000));
  EXPECT_FALSE(cache.Access(0x1000, ActorId::kVictim).hit);
}

TEST(CacheTest, FlushUncachedLineLeavesStateAlone) {
  Cache cache(CacheConfig{}, 1);
  cache.Access(0x2000, ActorId::kVictim);
  const std::size_t before = cache.ValidLineCount();
  EXPECT_EQ(cache.FlushLine(0x1000), 4u);
  EXPECT_EQ(cache.ValidLineCount(), before);
}

TEST(CacheTest, FlushWithoutInstructionThrows) {
  CacheConfig c;
  c.isa.has_line_flush = false;
  Cache cache(c, 1);
  EXPECT_THROW(cache.FlushLine(0x1000), UnsupportedInstruction);
}

TEST(CacheTest, SnapshotOutOfRange) {
  Cache cache(CacheConfig{}, 1);
  EXPECT_THROW(cache.SnapshotSet(256), std::out_of_range);
}

TEST(CacheTest, PrimeThenOneVictimAccess) {
  const CacheConfig c;
  Cache cache(c, 1);
  for (std::uint64_t k = 0; k < c.ways; ++k) cache.Access(Alias(c, 65, k), ActorId::kAttacker);
  for (const WaySnapshot& w : cache.SnapshotSet(65)) {
    EXPECT_TRUE(w.valid);
    EXPECT_EQ(w.owner, ActorId::kAttacker);
  }
  cache.Access(Alias(c, 65, 100), ActorId::kVictim);
  int victim_ways = 0;
  for (const WaySnapshot& w : cache.SnapshotSet(65)) victim_ways += w.owner == ActorId::kVictim ? 1 : 0;
  EXPECT_EQ(victim_ways, 1);
  EXPECT_EQ(cache.evictions(ActorId::kVictim, ActorId::kAttacker), 1u);
}

TEST(CacheTest, PrefetcherCannotBeCalledDirectly) {
  Cache cache(CacheConfig{}, 1);
  EXPECT_THROW(cache.Access(0, ActorId::kPrefetcher), std::invalid_argument);
}

TEST(CacheTest, NextLinePrefetchOnSequentialStream) {
  CacheConfig c;
  c.prefetcher = Prefetcher::kNextLine;
  Cache cache(c, 1);
  EXPECT_EQ(cache.Access(0x0, ActorId::kAttacker).latency, 100u);
  EXPECT_FALSE(cache.Contains(0x80));
  // Second line of an ascending stream triggers a prefetch of the third.
  EXPECT_EQ(cache.Access(0x40, ActorId::kAttacker).latency, 100u);
  EXPECT_TRUE(cache.Contains(0x80));
  EXPECT_TRUE(cache.Access(0x80, ActorId::kAttacker).hit);
  const auto snap = cache.SnapshotSet(SetIndex(c, 0xC0));
  EXPECT_TRUE(std::any_of(snap.begin(), snap.end(),
                          [](const WaySnapshot& w) { return w.valid && w.owner == ActorId::kPrefetcher; }));
}

TEST(CacheTest, NoPrefetchWhenDisabled) {
  Cache cache(CacheConfig{}, 1);
  cache.Access(0x0, ActorId::kAttacker);
  cache.Access(0x40, ActorId::kAttacker);
  EXPECT_FALSE(cache.Contains(0x80));
}

TEST(CacheTest, PartitionConfinesEachActor) {
  CacheConfig c;
  c.partition = PartitionPolicy::EvenSplit(c.ways);
  Cache cache(c, 1);
  for (std::uint64_t k = 0; k < c.ways; ++k) cache.Access(Alias(c, 9, k), ActorId::kAttacker);
  const auto snap = cache.SnapshotSet(9);
  const auto attacker = std::count_if(snap.begin(), snap.end(), [](const WaySnapshot& w) {
    return w.valid && w.owner == ActorId::kAttacker;
  });
  EXPECT_LE(attacker, 4);
  for (std::uint64_t k = 0; k < 4; ++k) cache.Access(Alias(c, 9, 50 + k), ActorId::kVictim);
  EXPECT_EQ(cache.evictions(ActorId::kVictim, ActorId::kAttacker), 0u);
}

TEST(CacheTest, PartitionHitsOnlyInOwnRange) {
  CacheConfig c;
  c.partition = PartitionPolicy::EvenSplit(c.ways);
  Cache cache(c, 1);
  cache.Access(0x1000, ActorId::kVictim);
  EXPECT_FALSE(cache.Access(0x1000, ActorId::kAttacker).hit);
  EXPECT_TRUE(cache.Access(0x1000, ActorId::kVictim).hit);
}

TEST(ComposeAddressTest, RoundTrip) {
  const CacheConfig c;
  const Address a = ComposeAddress(c, 65, 1234);
  EXPECT_EQ(BaseSetIndex(c, a), 65u);
}

}  // namespace
}  // namespace sclab
