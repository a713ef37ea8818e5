#pragma once

#include <cstdint>
#include <stdexcept>

namespace prbox {

// Who a random draw belongs to. Draws for one side never consume entropy
// meant for the other side, which is what makes per-trial results identical
// no matter how trials are scheduled.
enum class Side : std::uint8_t { alice = 1, bob = 2, joint = 3 };

enum class Purpose : std::uint8_t {
  input_choice = 1,
  box_draw = 2,
  noise = 3,
  shared_bits = 4,
  record_pick = 5,
};

// Counter-based stream: the key is absorbed from (seed, trial, side, purpose)
// and draw i is a mix of key + i * golden. Streams with distinct coordinates
// are independent, and any draw can be reproduced from its coordinates alone.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t trial, Side side, Purpose purpose)
      : key_(absorb(seed, trial, side, purpose)) {}

  std::uint64_t next_u64() { return mix(key_ + (counter_++) * kGolden); }

  // Unbiased via rejection on the tail of the 64-bit range.
  std::uint64_t next_below(std::uint64_t bound) {
    if (bound == 0) {
      throw std::invalid_argument("RandomStream: bound must be positive");
    }
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t draw = next_u64();
    while (draw >= limit) {
      draw = next_u64();
    }
    return draw % bound;
  }

  // Uniform in [0, 1) with 53 bits of precision.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  bool next_bool() { return (next_u64() & 1u) != 0; }

  bool bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return next_unit() < p;
  }

  std::uint64_t draws_taken() const { return counter_; }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

  // splitmix64 finalizer
  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  static constexpr std::uint64_t absorb(std::uint64_t seed, std::uint64_t trial,
                                        Side side, Purpose purpose) {
    std::uint64_t k = mix(seed + kGolden);
    k = mix(k ^ (trial + kGolden));
    k = mix(k ^ (static_cast<std::uint64_t>(side) + kGolden));
    k = mix(k ^ (static_cast<std::uint64_t>(purpose) + kGolden));
    return k;
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace prbox
