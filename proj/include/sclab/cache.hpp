#ifndef SCLAB_CACHE_HPP_
#define SCLAB_CACHE_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "sclab/common.hpp"
#include "sclab/isolation.hpp"

namespace sclab {

enum class Replacement { kLru, kRandom };
enum class Prefetcher { kOff, kNextLine };

// Both modes derive the set from the address as given; PHYSICAL_IDENTITY
// models an identity virtual-to-physical translation.
enum class IndexMode { kVirtual, kPhysicalIdentity };

struct IsaCapabilities {
  bool has_line_flush = true;
};

struct CacheConfig {
  std::uint32_t num_sets = 256;
  std::uint32_t ways = 8;
  std::uint32_t line_size = 64;
  Replacement replacement = Replacement::kLru;
  Cycles hit_latency = 4;
  Cycles miss_latency = 100;
  Prefetcher prefetcher = Prefetcher::kOff;
  IndexMode index_mode = IndexMode::kVirtual;
  IsaCapabilities isa;

  // Isolation defenses; installed through ApplyWayPartition and
  // ApplyIndexRandomization.
  std::optional<PartitionPolicy> partition;
  std::optional<SetPermutation> index_permutation;

  // Throws InvalidConfig naming the first violated invariant.
  void Validate() const;
};

// floor(address / line_size) mod num_sets, before any randomization.
SetId BaseSetIndex(const CacheConfig& config, Address address);

// The set the hardware actually uses for `address`.
SetId SetIndex(const CacheConfig& config, Address address);

// First address whose line has base index `base_index` and tag `tag`.
Address ComposeAddress(const CacheConfig& config, SetId base_index, std::uint64_t tag);

struct CacheLine {
  bool valid = false;
  std::uint64_t tag = 0;
  SetId base_index = 0;
  ActorId owner = ActorId::kAttacker;
  // Actor whose way range holds the line; differs from owner only for
  // prefetched lines.
  ActorId domain = ActorId::kAttacker;
  std::uint64_t recency = 0;
};

struct AccessResult {
  bool hit = false;
  Cycles latency = 0;
  std::optional<Address> evicted_address;
};

struct ActorStats {
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t flushes = 0;
};

struct WaySnapshot {
  ActorId owner = ActorId::kAttacker;
  bool valid = false;
};

// Deterministic set-associative cache. Single-threaded; each scenario owns
// its own instance.
class Cache {
 public:
  // Throws InvalidConfig when `config` violates an invariant.
  Cache(CacheConfig config, std::uint64_t seed);

  AccessResult Access(Address address, ActorId actor);

  // Invalidates the line holding `address`. A present line costs
  // miss_latency, an absent one hit_latency. Throws UnsupportedInstruction
  // when the ISA has no line flush.
  Cycles FlushLine(Address address, ActorId actor = ActorId::kAttacker);

  // Throws std::out_of_range for set >= num_sets.
  std::vector<WaySnapshot> SnapshotSet(SetId set) const;

  bool Contains(Address address) const;
  std::size_t ValidLineCount() const;

  const CacheConfig& config() const { return config_; }
  std::uint64_t seed() const { return seed_; }
  Cycles clock() const { return clock_; }
  const ActorStats& stats(ActorId actor) const { return stats_[static_cast<std::size_t>(actor)]; }

  // Number of lines of `evicted_domain` displaced by fills done for `cause`.
  std::uint64_t evictions(ActorId cause, ActorId evicted_domain) const {
    return evictions_[static_cast<std::size_t>(cause)][static_cast<std::size_t>(evicted_domain)];
  }

 private:
  struct Located {
    SetId set;
    std::uint64_t tag;
    SetId base_index;
  };

  Located Locate(Address address) const;
  WayRange SearchRange(ActorId domain) const;
  CacheLine* Find(const Located& where, WayRange range);
  const CacheLine* Find(const Located& where, WayRange range) const;
  std::uint32_t ChooseVictimWay(SetId set, WayRange range);
  // Installs a line for `domain`; returns the displaced address, if any.
  std::optional<Address> Fill(const Located& where, ActorId owner, ActorId domain);
  void Prefetch(Address address, ActorId on_behalf_of);

  CacheConfig config_;
  std::uint64_t seed_;
  Rng rng_;
  std::vector<CacheLine> lines_;  // num_sets * ways, set-major
  std::vector<std::uint64_t> set_clock_;
  Cycles clock_ = 0;
  std::array<ActorStats, kNumActors> stats_{};
  std::array<std::array<std::uint64_t, kNumActors>, kNumActors> evictions_{};
  // Last demand line per actor, for sequential-stream detection.
  std::array<std::optional<std::uint64_t>, kNumActors> last_line_{};
};

}  // namespace sclab

#endif  // SCLAB_CACHE_HPP_
