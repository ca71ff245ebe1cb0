#include "sclab/attacks.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

namespace sclab {
namespace {

class Jitter {
 public:
  explicit Jitter(MeasurementNoise noise) : sigma_(noise.sigma), rng_(noise.seed) {}

  double operator()(Cycles measured) {
    if (sigma_ <= 0.0) return static_cast<double>(measured);
    return static_cast<double>(measured) + normal_(rng_) * sigma_;
  }

 private:
  double sigma_;
  Rng rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

void RequireStrategy(const AttackConfig& config, Strategy expected) {
  if (config.strategy != expected) {
    throw InvalidConfig(fmt::format("attack configured for {} but {} was requested", ToString(config.strategy),
                                    ToString(expected)));
  }
}

void RunVictimSlot(const VictimSchedule& schedule, std::size_t slot, Cache& cache) {
  if (slot < schedule.size() && schedule[slot]) cache.Access(schedule[slot]->address, ActorId::kVictim);
}

}  // namespace

std::string_view ToString(Strategy strategy) {
  switch (strategy) {
    case Strategy::kPrimeProbe:
      return "prime_probe";
    case Strategy::kFlushReload:
      return "flush_reload";
    case Strategy::kEvictReload:
      return "evict_reload";
    case Strategy::kFlushFlush:
      return "flush_flush";
  }
  return "unknown";
}

bool NeedsLineFlush(Strategy strategy) {
  return strategy == Strategy::kFlushReload || strategy == Strategy::kFlushFlush;
}

bool NeedsSharedAddress(Strategy strategy) { return strategy != Strategy::kPrimeProbe; }

EvictionSet BuildEvictionSet(const CacheConfig& config, SetId set) {
  if (set >= config.num_sets) {
    throw InvalidConfig(fmt::format("eviction set target {} out of range (num_sets = {})", set, config.num_sets));
  }
  EvictionSet out{set, {}};
  out.addresses.reserve(config.ways);
  const Address stride = static_cast<Address>(config.num_sets) * config.line_size;
  for (std::uint32_t k = 0; k < config.ways; ++k) {
    out.addresses.push_back(static_cast<Address>(set) * config.line_size + k * stride);
  }
  return out;
}

std::vector<EvictionSet> BuildEvictionSets(const CacheConfig& config, std::span<const SetId> sets) {
  std::vector<EvictionSet> out;
  out.reserve(sets.size());
  for (SetId s : sets) out.push_back(BuildEvictionSet(config, s));
  return out;
}

std::vector<SetId> AllSets(const CacheConfig& config) {
  std::vector<SetId> sets(config.num_sets);
  std::iota(sets.begin(), sets.end(), SetId{0});
  return sets;
}

void AttackConfig::Validate(const CacheConfig& cache) const {
  if (num_slots == 0) throw InvalidConfig("attack num_slots must be >= 1");
  if (NeedsSharedAddress(strategy) && !shared_address) {
    throw InvalidConfig(fmt::format("{} requires a shared_address", ToString(strategy)));
  }
  if (NeedsLineFlush(strategy) && !cache.isa.has_line_flush) {
    throw UnsupportedInstruction(
        fmt::format("unsupported instruction: {} needs a line flush and the ISA has none", ToString(strategy)));
  }
  if (strategy == Strategy::kPrimeProbe) {
    if (target_sets.empty()) throw InvalidConfig("prime_probe needs at least one target set");
    for (SetId s : target_sets) {
      if (s >= cache.num_sets) {
        throw InvalidConfig(fmt::format("target set {} out of range (num_sets = {})", s, cache.num_sets));
      }
    }
  }
}

ProbeMatrix::ProbeMatrix(std::size_t slots, std::vector<SetId> columns, Polarity polarity)
    : slots_(slots), columns_(std::move(columns)), polarity_(polarity), values_(slots_ * columns_.size(), 0.0) {}

std::optional<std::size_t> ProbeMatrix::ColumnOf(SetId set) const {
  const auto it = std::find(columns_.begin(), columns_.end(), set);
  if (it == columns_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - columns_.begin());
}

VictimSchedule ScheduleTimeline(const VictimTimeline& timeline, std::size_t num_slots, std::uint32_t release_slots) {
  VictimSchedule schedule;
  schedule.reserve(num_slots);
  for (const BitSpan& span : timeline.bit_spans) {
    for (std::size_t i = 0; i < span.length && schedule.size() < num_slots; ++i) {
      schedule.push_back(timeline.slots[span.begin + i]);
    }
    for (std::uint32_t i = 0; i < release_slots && schedule.size() < num_slots; ++i) schedule.push_back(std::nullopt);
  }
  schedule.resize(num_slots);
  return schedule;
}

std::size_t ScheduledLength(const VictimTimeline& timeline, std::uint32_t release_slots) {
  return timeline.slots.size() + timeline.bit_spans.size() * release_slots;
}

VictimStep ReplaySchedule(const VictimSchedule& schedule) {
  return [&schedule](std::size_t slot, Cache& cache) { RunVictimSlot(schedule, slot, cache); };
}

PrimeProbeSession::PrimeProbeSession(std::vector<EvictionSet> sets, bool shuffle, std::uint64_t seed)
    : sets_(std::move(sets)), shuffle_(shuffle), rng_(seed) {
  for (const EvictionSet& s : sets_) max_ways_ = std::max(max_ways_, s.addresses.size());
  if (shuffle_) {
    way_order_.resize(sets_.size());
    for (std::size_t i = 0; i < sets_.size(); ++i) {
      way_order_[i].resize(sets_[i].addresses.size());
      std::iota(way_order_[i].begin(), way_order_[i].end(), 0u);
      std::shuffle(way_order_[i].begin(), way_order_[i].end(), rng_);
    }
  }
}

std::vector<Cycles> PrimeProbeSession::Traverse(Cache& cache) {
  const bool forward = traversals_++ % 2 == 0;
  std::vector<Cycles> totals(sets_.size(), 0);
  auto touch = [&](std::size_t set, std::size_t way) {
    totals[set] += cache.Access(sets_[set].addresses[way], ActorId::kAttacker).latency;
  };

  if (!shuffle_) {
    const std::size_t n = sets_.size();
    const std::size_t len = n * max_ways_;
    for (std::size_t step = 0; step < len; ++step) {
      const std::size_t pos = forward ? step : len - 1 - step;
      const std::size_t way = pos / n, set = pos % n;
      if (way < sets_[set].addresses.size()) touch(set, way);
    }
    return totals;
  }

  std::vector<std::size_t> set_order(sets_.size());
  std::iota(set_order.begin(), set_order.end(), std::size_t{0});
  std::shuffle(set_order.begin(), set_order.end(), rng_);
  for (std::size_t set : set_order) {
    const auto& order = way_order_[set];
    if (forward) {
      for (auto it = order.begin(); it != order.end(); ++it) touch(set, *it);
    } else {
      for (auto it = order.rbegin(); it != order.rend(); ++it) touch(set, *it);
    }
  }
  return totals;
}

Cycles PrimeProbeSession::Prime(Cache& cache) {
  const std::vector<Cycles> totals = Traverse(cache);
  return std::accumulate(totals.begin(), totals.end(), Cycles{0});
}

std::vector<Cycles> PrimeProbeSession::Probe(Cache& cache) { return Traverse(cache); }

ProbeMatrix RunPrimeProbe(Cache& cache, const VictimStep& victim, const AttackConfig& config,
                          MeasurementNoise noise) {
  RequireStrategy(config, Strategy::kPrimeProbe);
  config.Validate(cache.config());
  PrimeProbeSession session(BuildEvictionSets(cache.config(), config.target_sets), config.shuffle_probe_order,
                            config.rng_seed);
  ProbeMatrix matrix(config.num_slots, config.target_sets, Polarity::kSlowIsActivity);
  Jitter jitter(noise);

  // The probe at the end of each slot is also the next slot's prime.
  session.Prime(cache);
  for (std::size_t slot = 0; slot < config.num_slots; ++slot) {
    if (victim) victim(slot, cache);
    const std::vector<Cycles> totals = session.Probe(cache);
    for (std::size_t c = 0; c < totals.size(); ++c) matrix.at(slot, c) = jitter(totals[c]);
  }
  return matrix;
}

ProbeMatrix RunPrimeProbe(Cache& cache, const VictimSchedule& schedule, const AttackConfig& config,
                          MeasurementNoise noise) {
  return RunPrimeProbe(cache, ReplaySchedule(schedule), config, noise);
}

ProbeMatrix RunFlushReload(Cache& cache, const VictimSchedule& schedule, const AttackConfig& config,
                           MeasurementNoise noise) {
  RequireStrategy(config, Strategy::kFlushReload);
  config.Validate(cache.config());
  const Address shared = *config.shared_address;
  ProbeMatrix matrix(config.num_slots, {BaseSetIndex(cache.config(), shared)}, Polarity::kFastIsActivity);
  Jitter jitter(noise);
  for (std::size_t slot = 0; slot < config.num_slots; ++slot) {
    cache.FlushLine(shared, ActorId::kAttacker);
    RunVictimSlot(schedule, slot, cache);
    matrix.at(slot, 0) = jitter(cache.Access(shared, ActorId::kAttacker).latency);
  }
  return matrix;
}

ProbeMatrix RunEvictReload(Cache& cache, const VictimSchedule& schedule, const AttackConfig& config,
                           MeasurementNoise noise) {
  RequireStrategy(config, Strategy::kEvictReload);
  config.Validate(cache.config());
  const Address shared = *config.shared_address;
  const SetId believed_set = BaseSetIndex(cache.config(), shared);
  const EvictionSet evset = BuildEvictionSet(cache.config(), believed_set);
  ProbeMatrix matrix(config.num_slots, {believed_set}, Polarity::kFastIsActivity);
  Jitter jitter(noise);
  for (std::size_t slot = 0; slot < config.num_slots; ++slot) {
    for (Address a : evset.addresses) cache.Access(a, ActorId::kAttacker);
    RunVictimSlot(schedule, slot, cache);
    matrix.at(slot, 0) = jitter(cache.Access(shared, ActorId::kAttacker).latency);
  }
  return matrix;
}

ProbeMatrix RunFlushFlush(Cache& cache, const VictimSchedule& schedule, const AttackConfig& config,
                          MeasurementNoise noise) {
  RequireStrategy(config, Strategy::kFlushFlush);
  config.Validate(cache.config());
  const Address shared = *config.shared_address;
  ProbeMatrix matrix(config.num_slots, {BaseSetIndex(cache.config(), shared)}, Polarity::kSlowIsActivity);
  Jitter jitter(noise);
  cache.FlushLine(shared, ActorId::kAttacker);
  for (std::size_t slot = 0; slot < config.num_slots; ++slot) {
    RunVictimSlot(schedule, slot, cache);
    matrix.at(slot, 0) = jitter(cache.FlushLine(shared, ActorId::kAttacker));
  }
  return matrix;
}

ProbeMatrix RunAttack(Cache& cache, const VictimSchedule& schedule, const AttackConfig& config,
                      MeasurementNoise noise) {
  switch (config.strategy) {
    case Strategy::kPrimeProbe:
      return RunPrimeProbe(cache, schedule, config, noise);
    case Strategy::kFlushReload:
      return RunFlushReload(cache, schedule, config, noise);
    case Strategy::kEvictReload:
      return RunEvictReload(cache, schedule, config, noise);
    case Strategy::kFlushFlush:
      return RunFlushFlush(cache, schedule, config, noise);
  }
  throw InvalidConfig("unknown attack strategy");
}

}  // namespace sclab
