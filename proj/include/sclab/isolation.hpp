#ifndef SCLAB_ISOLATION_HPP_
#define SCLAB_ISOLATION_HPP_

#include <cstdint>
#include <vector>

#include "sclab/common.hpp"

namespace sclab {

// Half-open way range [begin, end).
struct WayRange {
  std::uint32_t begin = 0;
  std::uint32_t end = 0;

  std::uint32_t size() const { return end - begin; }
  bool contains(std::uint32_t way) const { return way >= begin && way < end; }
  bool operator==(const WayRange&) const = default;
};

// Static per-actor way partition. Prefetches are placed in the range of the
// actor they were issued for.
class PartitionPolicy {
 public:
  PartitionPolicy(WayRange attacker, WayRange victim);

  // Attacker gets the lower half (rounded down, at least one way), the
  // victim the rest.
  static PartitionPolicy EvenSplit(std::uint32_t ways);

  WayRange RangeFor(ActorId actor) const;

  // Throws InfeasiblePartition when the ranges are empty, overlap or do not
  // exactly cover [0, ways).
  void Validate(std::uint32_t ways) const;

  bool operator==(const PartitionPolicy&) const = default;

 private:
  WayRange attacker_;
  WayRange victim_;
};

struct IndexRandomization {
  std::uint64_t permutation_seed = 0;
  bool active = true;
};

// Seeded Fisher-Yates permutation of set ids. The sentinel seed yields the
// identity map.
class SetPermutation {
 public:
  static constexpr std::uint64_t kIdentitySeed = 0;

  SetPermutation(std::uint32_t num_sets, std::uint64_t seed);

  SetId Map(SetId base_index) const { return forward_[base_index]; }
  SetId Inverse(SetId set) const { return inverse_[set]; }
  std::uint64_t seed() const { return seed_; }
  std::uint32_t size() const { return static_cast<std::uint32_t>(forward_.size()); }
  bool IsIdentity() const;

  bool operator==(const SetPermutation& other) const { return forward_ == other.forward_; }

 private:
  std::uint64_t seed_;
  std::vector<SetId> forward_;
  std::vector<SetId> inverse_;
};

}  // namespace sclab

#endif  // SCLAB_ISOLATION_HPP_
