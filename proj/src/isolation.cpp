#include "sclab/isolation.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

#include <fmt/format.h>

namespace sclab {

std::string_view ToString(ActorId actor) {
  switch (actor) {
    case ActorId::kAttacker:
      return "attacker";
    case ActorId::kVictim:
      return "victim";
    case ActorId::kPrefetcher:
      return "prefetcher";
  }
  return "unknown";
}

std::uint64_t DeriveSeed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

PartitionPolicy::PartitionPolicy(WayRange attacker, WayRange victim)
    : attacker_(attacker), victim_(victim) {}

PartitionPolicy PartitionPolicy::EvenSplit(std::uint32_t ways) {
  if (ways < 2) {
    throw InfeasiblePartition(
        fmt::format("infeasible partition: {} way(s) cannot hold 2 isolated actors", ways));
  }
  const std::uint32_t half = ways / 2;
  return PartitionPolicy({0, half}, {half, ways});
}

WayRange PartitionPolicy::RangeFor(ActorId actor) const {
  return actor == ActorId::kVictim ? victim_ : attacker_;
}

void PartitionPolicy::Validate(std::uint32_t ways) const {
  if (ways < 2) {
    throw InfeasiblePartition(
        fmt::format("infeasible partition: {} way(s) cannot hold 2 isolated actors", ways));
  }
  for (const WayRange& r : {attacker_, victim_}) {
    if (r.begin >= r.end) {
      throw InfeasiblePartition("infeasible partition: every actor needs at least one way");
    }
    if (r.end > ways) {
      throw InfeasiblePartition(
          fmt::format("infeasible partition: range [{}, {}) exceeds {} ways", r.begin, r.end, ways));
    }
  }
  WayRange lo = attacker_, hi = victim_;
  if (hi.begin < lo.begin) std::swap(lo, hi);
  if (lo.end > hi.begin) {
    throw InfeasiblePartition("infeasible partition: way ranges overlap");
  }
  if (lo.begin != 0 || lo.end != hi.begin || hi.end != ways) {
    throw InfeasiblePartition(
        fmt::format("infeasible partition: way ranges do not cover [0, {})", ways));
  }
}

SetPermutation::SetPermutation(std::uint32_t num_sets, std::uint64_t seed)
    : seed_(seed), forward_(num_sets), inverse_(num_sets) {
  std::iota(forward_.begin(), forward_.end(), SetId{0});
  if (seed != kIdentitySeed && num_sets > 1) {
    Rng rng(seed);
    for (std::uint32_t i = num_sets - 1; i > 0; --i) {
      const auto j = static_cast<std::uint32_t>(rng() % (i + 1));
      std::swap(forward_[i], forward_[j]);
    }
  }
  for (std::uint32_t i = 0; i < num_sets; ++i) inverse_[forward_[i]] = i;
}

bool SetPermutation::IsIdentity() const {
  for (std::uint32_t i = 0; i < forward_.size(); ++i) {
    if (forward_[i] != i) return false;
  }
  return true;
}

}  // namespace sclab
