#include "sclab/victims.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <numeric>

#include <fmt/format.h>

namespace sclab {
namespace {

std::uint64_t MulMod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t RegionTag(const CacheConfig& config, Address region) {
  return region / (static_cast<Address>(config.num_sets) * config.line_size);
}

SetId BaseIndexFor(const CacheConfig& config, SetId actual_set) {
  return config.index_permutation ? config.index_permutation->Inverse(actual_set) : actual_set;
}

VictimTimeline RunModExp(const ModExpParams& params, SlotDurations durations, SetId target_set,
                         const CacheConfig& config, bool always_multiply) {
  params.Validate();
  durations.Validate();
  if (target_set >= config.num_sets) {
    throw InvalidConfig(fmt::format("target_set {} out of range (num_sets = {})", target_set, config.num_sets));
  }
  const ModExpLayout layout = MakeModExpLayout(config, target_set);
  const std::uint64_t m = params.modulus;
  const std::uint64_t b = params.base % m;

  VictimTimeline timeline;
  timeline.occupancy_for_bit = always_multiply ? std::array<std::uint32_t, 2>{durations.d1, durations.d1}
                                               : std::array<std::uint32_t, 2>{durations.d0, durations.d1};
  std::uint64_t r = 1 % m;
  for (bool bit : params.key.bits()) {
    const std::size_t begin = timeline.slots.size();
    r = MulMod(r, r, m);
    timeline.slots.insert(timeline.slots.end(), durations.d0, {layout.square_line, MemoryPurpose::kSquare});
    if (bit || always_multiply) {
      const std::uint64_t product = MulMod(r, b, m);
      if (bit) r = product;
      timeline.slots.insert(timeline.slots.end(), durations.d1 - durations.d0,
                            {layout.multiply_line, MemoryPurpose::kMultiply});
    }
    timeline.bit_spans.push_back({begin, timeline.slots.size() - begin});
  }
  timeline.result = r;
  return timeline;
}

}  // namespace

std::string_view ToString(MemoryPurpose purpose) {
  switch (purpose) {
    case MemoryPurpose::kSquare:
      return "square";
    case MemoryPurpose::kMultiply:
      return "multiply";
    case MemoryPurpose::kTableLookup:
      return "table_lookup";
  }
  return "unknown";
}

VictimKey::VictimKey(Bits bits) : bits_(std::move(bits)) {
  if (bits_.empty() || bits_.size() > kMaxBits) {
    throw InvalidConfig(fmt::format("key length must be in [1, {}] (got {})", kMaxBits, bits_.size()));
  }
}

VictimKey VictimKey::FromValue(std::uint64_t value, std::size_t length) {
  if (length == 0 || length > kMaxBits) {
    throw InvalidConfig(fmt::format("key length must be in [1, {}] (got {})", kMaxBits, length));
  }
  Bits bits(length);
  for (std::size_t i = 0; i < length; ++i) bits[i] = (value >> (length - 1 - i)) & 1;
  return VictimKey(std::move(bits));
}

VictimKey VictimKey::FromBinary(std::string_view text) {
  Bits bits;
  for (char c : text) {
    if (c != '0' && c != '1') throw InvalidConfig(fmt::format("invalid binary key digit '{}'", c));
    bits.push_back(c == '1');
  }
  return VictimKey(std::move(bits));
}

VictimKey VictimKey::FromHex(std::string_view text, std::size_t length) {
  if (text.starts_with("0x") || text.starts_with("0X")) text.remove_prefix(2);
  if (text.empty()) throw InvalidConfig("empty hex key");
  Bits bits;
  for (char c : text) {
    if (!std::isxdigit(static_cast<unsigned char>(c))) {
      throw InvalidConfig(fmt::format("invalid hex key digit '{}'", c));
    }
    const int v = std::isdigit(static_cast<unsigned char>(c)) ? c - '0' : std::tolower(c) - 'a' + 10;
    for (int i = 3; i >= 0; --i) bits.push_back((v >> i) & 1);
  }
  if (length != 0) {
    if (length > bits.size()) {
      bits.insert(bits.begin(), length - bits.size(), false);
    } else {
      for (std::size_t i = 0; i < bits.size() - length; ++i) {
        if (bits[i]) throw InvalidConfig(fmt::format("hex key {} does not fit in {} bits", text, length));
      }
      bits.erase(bits.begin(), bits.end() - static_cast<std::ptrdiff_t>(length));
    }
  }
  return VictimKey(std::move(bits));
}

VictimKey VictimKey::Random(std::size_t length, Rng& rng) {
  if (length == 0 || length > kMaxBits) {
    throw InvalidConfig(fmt::format("key length must be in [1, {}] (got {})", kMaxBits, length));
  }
  Bits bits(length);
  for (std::size_t i = 0; i < length; ++i) bits[i] = rng() & 1;
  return VictimKey(std::move(bits));
}

std::uint64_t VictimKey::value() const {
  std::uint64_t v = 0;
  for (bool b : bits_) v = (v << 1) | (b ? 1 : 0);
  return v;
}

std::size_t VictimKey::popcount() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), true));
}

std::string VictimKey::ToBinary() const {
  std::string s;
  for (bool b : bits_) s.push_back(b ? '1' : '0');
  return s;
}

std::string VictimKey::ToHex() const {
  const std::size_t digits = (bits_.size() + 3) / 4;
  return fmt::format("0x{:0{}x}", value(), digits);
}

void ModExpParams::Validate() const {
  if (modulus < 2) throw InvalidConfig(fmt::format("modulus must be >= 2 (got {})", modulus));
}

void SlotDurations::Validate() const {
  if (d0 < 1 || d1 <= d0) {
    throw InvalidConfig(fmt::format("slot durations need d1 > d0 >= 1 (got d0={}, d1={})", d0, d1));
  }
}

ModExpLayout MakeModExpLayout(const CacheConfig& config, SetId target_set) {
  const SetId base = BaseIndexFor(config, target_set);
  const std::uint64_t tag = RegionTag(config, kVictimRegionBase);
  return {ComposeAddress(config, base, tag), ComposeAddress(config, base, tag + 1)};
}

std::uint64_t ModExpReference(std::uint64_t base, std::uint64_t exponent, std::uint64_t modulus) {
  if (modulus < 2) throw InvalidConfig(fmt::format("modulus must be >= 2 (got {})", modulus));
  if (exponent >= (std::uint64_t{1} << 20)) {
    throw InvalidConfig(fmt::format("reference exponent must be < 2^20 (got {})", exponent));
  }
  std::uint64_t r = 1 % modulus;
  const std::uint64_t b = base % modulus;
  for (std::uint64_t i = 0; i < exponent; ++i) r = MulMod(r, b, modulus);
  return r;
}

VictimTimeline RunModExpVictim(const ModExpParams& params, SlotDurations durations, SetId target_set,
                               const CacheConfig& config) {
  return RunModExp(params, durations, target_set, config, /*always_multiply=*/false);
}

VictimTimeline RunModExpConstantTime(const ModExpParams& params, SlotDurations durations, SetId target_set,
                                     const CacheConfig& config) {
  return RunModExp(params, durations, target_set, config, /*always_multiply=*/true);
}

void AesTableConfig::Validate() const {
  std::array<bool, 256> seen{};
  for (std::uint8_t v : sbox) {
    if (seen[v]) throw InvalidConfig(fmt::format("sbox is not a bijection: value 0x{:02x} repeats", v));
    seen[v] = true;
  }
}

const std::array<std::uint8_t, 256>& AesSbox() {
  static const std::array<std::uint8_t, 256> kSbox = {
      0x63, 0x7c, 0x77, 0x7b, 0xf2, 0x6b, 0x6f, 0xc5, 0x30, 0x01, 0x67, 0x2b, 0xfe, 0xd7, 0xab, 0x76,
      0xca, 0x82, 0xc9, 0x7d, 0xfa, 0x59, 0x47, 0xf0, 0xad, 0xd4, 0xa2, 0xaf, 0x9c, 0xa4, 0x72, 0xc0,
      0xb7, 0xfd, 0x93, 0x26, 0x36, 0x3f, 0xf7, 0xcc, 0x34, 0xa5, 0xe5, 0xf1, 0x71, 0xd8, 0x31, 0x15,
      0x04, 0xc7, 0x23, 0xc3, 0x18, 0x96, 0x05, 0x9a, 0x07, 0x12, 0x80, 0xe2, 0xeb, 0x27, 0xb2, 0x75,
      0x09, 0x83, 0x2c, 0x1a, 0x1b, 0x6e, 0x5a, 0xa0, 0x52, 0x3b, 0xd6, 0xb3, 0x29, 0xe3, 0x2f, 0x84,
      0x53, 0xd1, 0x00, 0xed, 0x20, 0xfc, 0xb1, 0x5b, 0x6a, 0xcb, 0xbe, 0x39, 0x4a, 0x4c, 0x58, 0xcf,
      0xd0, 0xef, 0xaa, 0xfb, 0x43, 0x4d, 0x33, 0x85, 0x45, 0xf9, 0x02, 0x7f, 0x50, 0x3c, 0x9f, 0xa8,
      0x51, 0xa3, 0x40, 0x8f, 0x92, 0x9d, 0x38, 0xf5, 0xbc, 0xb6, 0xda, 0x21, 0x10, 0xff, 0xf3, 0xd2,
      0xcd, 0x0c, 0x13, 0xec, 0x5f, 0x97, 0x44, 0x17, 0xc4, 0xa7, 0x7e, 0x3d, 0x64, 0x5d, 0x19, 0x73,
      0x60, 0x81, 0x4f, 0xdc, 0x22, 0x2a, 0x90, 0x88, 0x46, 0xee, 0xb8, 0x14, 0xde, 0x5e, 0x0b, 0xdb,
      0xe0, 0x32, 0x3a, 0x0a, 0x49, 0x06, 0x24, 0x5c, 0xc2, 0xd3, 0xac, 0x62, 0x91, 0x95, 0xe4, 0x79,
      0xe7, 0xc8, 0x37, 0x6d, 0x8d, 0xd5, 0x4e, 0xa9, 0x6c, 0x56, 0xf4, 0xea, 0x65, 0x7a, 0xae, 0x08,
      0xba, 0x78, 0x25, 0x2e, 0x1c, 0xa6, 0xb4, 0xc6, 0xe8, 0xdd, 0x74, 0x1f, 0x4b, 0xbd, 0x8b, 0x8a,
      0x70, 0x3e, 0xb5, 0x66, 0x48, 0x03, 0xf6, 0x0e, 0x61, 0x35, 0x57, 0xb9, 0x86, 0xc1, 0x1d, 0x9e,
      0xe1, 0xf8, 0x98, 0x11, 0x69, 0xd9, 0x8e, 0x94, 0x9b, 0x1e, 0x87, 0xe9, 0xce, 0x55, 0x28, 0xdf,
      0x8c, 0xa1, 0x89, 0x0d, 0xbf, 0xe6, 0x42, 0x68, 0x41, 0x99, 0x2d, 0x0f, 0xb0, 0x54, 0xbb, 0x16,
  };
  return kSbox;
}

std::array<std::uint8_t, 256> IdentitySbox() {
  std::array<std::uint8_t, 256> s{};
  std::iota(s.begin(), s.end(), std::uint8_t{0});
  return s;
}

AesTableConfig MakeAesTable(const CacheConfig& config, SetId first_set) {
  AesTableConfig table;
  table.sbox = AesSbox();
  table.table_base = ComposeAddress(config, BaseIndexFor(config, first_set), RegionTag(config, kAesTableRegionBase));
  return table;
}

MemoryEvent RunAesFirstRound(std::uint8_t plaintext, std::uint8_t key, const AesTableConfig& table, Cache& cache) {
  const MemoryEvent event{table.table_base + static_cast<std::uint8_t>(plaintext ^ key), MemoryPurpose::kTableLookup};
  cache.Access(event.address, ActorId::kVictim);
  return event;
}

}  // namespace sclab
