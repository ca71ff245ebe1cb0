#ifndef SCLAB_COMMON_HPP_
#define SCLAB_COMMON_HPP_

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sclab {

using Address = std::uint64_t;
using Cycles = std::uint64_t;
using SetId = std::uint32_t;
using Bits = std::vector<bool>;

// All randomness in the library flows through explicitly seeded engines of
// this type.
using Rng = std::mt19937_64;

enum class ActorId : std::uint8_t { kAttacker = 0, kVictim = 1, kPrefetcher = 2 };
inline constexpr std::size_t kNumActors = 3;

std::string_view ToString(ActorId actor);

// Base of the error hierarchy. Anything derived from ValidationError is a
// problem with the inputs; everything else is a failure while running.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class InvalidConfig : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InfeasiblePartition : public InvalidConfig {
 public:
  using InvalidConfig::InvalidConfig;
};

class UnsupportedInstruction : public Error {
 public:
  using Error::Error;
};

// Raised when measured data carries no information to split on (all values
// equal, no occupied interval, ...).
class DegenerateData : public Error {
 public:
  using Error::Error;
};

class InsufficientTraces : public Error {
 public:
  using Error::Error;
};

// splitmix64 finalizer; derives independent stream seeds from one base seed.
std::uint64_t DeriveSeed(std::uint64_t base, std::uint64_t stream);

}  // namespace sclab

#endif  // SCLAB_COMMON_HPP_
