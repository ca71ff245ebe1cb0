#include "sclab/cache.hpp"

#include <bit>
#include <stdexcept>

#include <fmt/format.h>

namespace sclab {

void CacheConfig::Validate() const {
  if (num_sets == 0 || !std::has_single_bit(num_sets)) {
    throw InvalidConfig(fmt::format("invalid cache config: num_sets must be a positive power of two (got {})", num_sets));
  }
  if (ways == 0) {
    throw InvalidConfig("invalid cache config: ways must be >= 1");
  }
  if (line_size < 4 || !std::has_single_bit(line_size)) {
    throw InvalidConfig(fmt::format("invalid cache config: line_size must be a power of two >= 4 (got {})", line_size));
  }
  if (miss_latency <= hit_latency) {
    throw InvalidConfig(fmt::format("invalid cache config: miss_latency ({}) must exceed hit_latency ({})",
                                    miss_latency, hit_latency));
  }
  if (partition) partition->Validate(ways);
  if (index_permutation && index_permutation->size() != num_sets) {
    throw InvalidConfig(fmt::format("invalid cache config: index permutation covers {} sets, cache has {}",
                                    index_permutation->size(), num_sets));
  }
}

SetId BaseSetIndex(const CacheConfig& config, Address address) {
  return static_cast<SetId>((address / config.line_size) % config.num_sets);
}

SetId SetIndex(const CacheConfig& config, Address address) {
  const SetId base = BaseSetIndex(config, address);
  return config.index_permutation ? config.index_permutation->Map(base) : base;
}

Address ComposeAddress(const CacheConfig& config, SetId base_index, std::uint64_t tag) {
  return (tag * config.num_sets + base_index) * config.line_size;
}

Cache::Cache(CacheConfig config, std::uint64_t seed)
    : config_(std::move(config)), seed_(seed), rng_(seed) {
  config_.Validate();
  lines_.resize(static_cast<std::size_t>(config_.num_sets) * config_.ways);
  set_clock_.assign(config_.num_sets, 0);
}

Cache::Located Cache::Locate(Address address) const {
  const std::uint64_t line = address / config_.line_size;
  const auto base = static_cast<SetId>(line % config_.num_sets);
  const SetId set = config_.index_permutation ? config_.index_permutation->Map(base) : base;
  return {set, line / config_.num_sets, base};
}

WayRange Cache::SearchRange(ActorId domain) const {
  if (config_.partition) return config_.partition->RangeFor(domain);
  return {0, config_.ways};
}

CacheLine* Cache::Find(const Located& where, WayRange range) {
  CacheLine* set = &lines_[static_cast<std::size_t>(where.set) * config_.ways];
  for (std::uint32_t w = range.begin; w < range.end; ++w) {
    if (set[w].valid && set[w].tag == where.tag && set[w].base_index == where.base_index) return &set[w];
  }
  return nullptr;
}

const CacheLine* Cache::Find(const Located& where, WayRange range) const {
  return const_cast<Cache*>(this)->Find(where, range);
}

std::uint32_t Cache::ChooseVictimWay(SetId set, WayRange range) {
  const CacheLine* lines = &lines_[static_cast<std::size_t>(set) * config_.ways];
  for (std::uint32_t w = range.begin; w < range.end; ++w) {
    if (!lines[w].valid) return w;
  }
  if (config_.replacement == Replacement::kRandom) {
    return range.begin + static_cast<std::uint32_t>(rng_() % range.size());
  }
  std::uint32_t oldest = range.begin;
  for (std::uint32_t w = range.begin + 1; w < range.end; ++w) {
    if (lines[w].recency < lines[oldest].recency) oldest = w;
  }
  return oldest;
}

std::optional<Address> Cache::Fill(const Located& where, ActorId owner, ActorId domain) {
  const std::uint32_t way = ChooseVictimWay(where.set, SearchRange(domain));
  CacheLine& line = lines_[static_cast<std::size_t>(where.set) * config_.ways + way];
  std::optional<Address> evicted;
  if (line.valid) {
    evicted = ComposeAddress(config_, line.base_index, line.tag);
    ++evictions_[static_cast<std::size_t>(domain)][static_cast<std::size_t>(line.domain)];
  }
  line.valid = true;
  line.tag = where.tag;
  line.base_index = where.base_index;
  line.owner = owner;
  line.domain = domain;
  line.recency = ++set_clock_[where.set];
  return evicted;
}

void Cache::Prefetch(Address address, ActorId on_behalf_of) {
  const Located where = Locate(address);
  if (Find(where, SearchRange(on_behalf_of)) != nullptr) return;
  Fill(where, ActorId::kPrefetcher, on_behalf_of);
}

AccessResult Cache::Access(Address address, ActorId actor) {
  if (actor == ActorId::kPrefetcher) {
    throw std::invalid_argument("prefetcher accesses are internal to the cache");
  }
  const Located where = Locate(address);
  AccessResult result;
  ActorStats& stats = stats_[static_cast<std::size_t>(actor)];
  if (CacheLine* line = Find(where, SearchRange(actor))) {
    line->recency = ++set_clock_[where.set];
    result.hit = true;
    result.latency = config_.hit_latency;
    ++stats.hits;
  } else {
    result.evicted_address = Fill(where, actor, actor);
    result.latency = config_.miss_latency;
    ++stats.misses;
  }
  clock_ += result.latency;

  // Next-line prefetch fires once the actor's demand stream is sequential;
  // it never alters the latency of the triggering access.
  if (config_.prefetcher == Prefetcher::kNextLine) {
    const std::uint64_t line = address / config_.line_size;
    auto& last = last_line_[static_cast<std::size_t>(actor)];
    if (last && line == *last + 1) Prefetch((line + 1) * config_.line_size, actor);
    last = line;
  }
  return result;
}

Cycles Cache::FlushLine(Address address, ActorId actor) {
  if (!config_.isa.has_line_flush) {
    throw UnsupportedInstruction("unsupported instruction: the ISA provides no cache-line flush");
  }
  const Located where = Locate(address);
  bool present = false;
  CacheLine* set = &lines_[static_cast<std::size_t>(where.set) * config_.ways];
  for (std::uint32_t w = 0; w < config_.ways; ++w) {
    if (set[w].valid && set[w].tag == where.tag && set[w].base_index == where.base_index) {
      set[w].valid = false;
      present = true;
    }
  }
  ++stats_[static_cast<std::size_t>(actor)].flushes;
  const Cycles latency = present ? config_.miss_latency : config_.hit_latency;
  clock_ += latency;
  return latency;
}

std::vector<WaySnapshot> Cache::SnapshotSet(SetId set) const {
  if (set >= config_.num_sets) {
    throw std::out_of_range(fmt::format("set {} out of range (num_sets = {})", set, config_.num_sets));
  }
  std::vector<WaySnapshot> out;
  out.reserve(config_.ways);
  const CacheLine* lines = &lines_[static_cast<std::size_t>(set) * config_.ways];
  for (std::uint32_t w = 0; w < config_.ways; ++w) out.push_back({lines[w].owner, lines[w].valid});
  return out;
}

bool Cache::Contains(Address address) const {
  return Find(Locate(address), {0, config_.ways}) != nullptr;
}

std::size_t Cache::ValidLineCount() const {
  std::size_t n = 0;
  for (const CacheLine& line : lines_) n += line.valid ? 1 : 0;
  return n;
}

}  // namespace sclab
