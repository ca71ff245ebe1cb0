#ifndef SCLAB_VICTIMS_HPP_
#define SCLAB_VICTIMS_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sclab/cache.hpp"
#include "sclab/common.hpp"

namespace sclab {

// Secret exponent bits, most significant first. Leading zeros are kept.
class VictimKey {
 public:
  static constexpr std::size_t kMaxBits = 64;

  // Throws InvalidConfig when bits is empty or longer than kMaxBits.
  explicit VictimKey(Bits bits);

  static VictimKey FromValue(std::uint64_t value, std::size_t length);
  // "1011" style text.
  static VictimKey FromBinary(std::string_view text);
  // Hex digits (optional 0x prefix); four bits per digit unless `length` is
  // given, in which case the low `length` bits are kept.
  static VictimKey FromHex(std::string_view text, std::size_t length = 0);
  static VictimKey Random(std::size_t length, Rng& rng);

  const Bits& bits() const { return bits_; }
  std::size_t length() const { return bits_.size(); }
  std::uint64_t value() const;
  std::size_t popcount() const;
  std::string ToBinary() const;
  std::string ToHex() const;

  bool operator==(const VictimKey&) const = default;

 private:
  Bits bits_;
};

struct ModExpParams {
  std::uint64_t base = 7;
  std::uint64_t modulus = 4294967291ULL;
  VictimKey key = VictimKey::FromValue(0, 1);

  void Validate() const;
};

// Slots a key bit keeps the target set busy: d0 for the square step alone,
// d1 when the multiply runs too.
struct SlotDurations {
  std::uint32_t d0 = 2;
  std::uint32_t d1 = 5;

  void Validate() const;
};

enum class MemoryPurpose { kSquare, kMultiply, kTableLookup };

std::string_view ToString(MemoryPurpose purpose);

struct MemoryEvent {
  Address address = 0;
  MemoryPurpose purpose = MemoryPurpose::kSquare;

  bool operator==(const MemoryEvent&) const = default;
};

struct BitSpan {
  std::size_t begin = 0;
  std::size_t length = 0;
};

// Each slot carries exactly one victim access into the target set.
struct VictimTimeline {
  std::vector<MemoryEvent> slots;
  std::vector<BitSpan> bit_spans;
  std::uint64_t result = 0;
  std::array<std::uint32_t, 2> occupancy_for_bit{};  // [bit value] -> slots
};

// Where the exponentiation routines live. Both lines fall into the target
// set and carry distinct tags; the multiply line doubles as the address
// shared with the attacker.
struct ModExpLayout {
  Address square_line = 0;
  Address multiply_line = 0;
};

inline constexpr Address kVictimRegionBase = Address{1} << 40;
inline constexpr Address kAesTableRegionBase = Address{2} << 40;

// Lines whose actual set (after any index randomization) is `target_set`.
ModExpLayout MakeModExpLayout(const CacheConfig& config, SetId target_set);

// b^e mod m by e-fold repeated multiplication. Throws InvalidConfig for
// m < 2 or e >= 2^20.
std::uint64_t ModExpReference(std::uint64_t base, std::uint64_t exponent, std::uint64_t modulus);

// Left-to-right square-and-multiply; the multiply executes only for set
// bits.
VictimTimeline RunModExpVictim(const ModExpParams& params, SlotDurations durations, SetId target_set,
                               const CacheConfig& config);

// Square-and-always-multiply; the product for a zero bit is discarded.
VictimTimeline RunModExpConstantTime(const ModExpParams& params, SlotDurations durations, SetId target_set,
                                     const CacheConfig& config);

struct AesTableConfig {
  std::array<std::uint8_t, 256> sbox{};
  Address table_base = kAesTableRegionBase;

  // Throws InvalidConfig if sbox is not a permutation of the bytes.
  void Validate() const;
};

const std::array<std::uint8_t, 256>& AesSbox();
std::array<std::uint8_t, 256> IdentitySbox();

// Table whose first line lands in `first_set`.
AesTableConfig MakeAesTable(const CacheConfig& config, SetId first_set);

// One first-round lookup at table_base + (plaintext ^ key).
MemoryEvent RunAesFirstRound(std::uint8_t plaintext, std::uint8_t key, const AesTableConfig& table, Cache& cache);

}  // namespace sclab

#endif  // SCLAB_VICTIMS_HPP_
