#pragma once

#include <cstdint>
#include <stdexcept>

namespace prbox {

// One classical input/output bit. Constructible only from 0 or 1.
class Bit {
 public:
  constexpr Bit() = default;
  constexpr explicit Bit(unsigned value) : v_(narrow(value)) {}

  constexpr unsigned value() const { return v_; }
  constexpr Bit flipped() const { return Bit(v_ ^ 1u); }

  friend constexpr Bit operator^(Bit lhs, Bit rhs) { return Bit(lhs.v_ ^ rhs.v_); }
  friend constexpr Bit operator&(Bit lhs, Bit rhs) { return Bit(lhs.v_ & rhs.v_); }
  friend constexpr bool operator==(Bit lhs, Bit rhs) = default;
  friend constexpr bool operator<(Bit lhs, Bit rhs) { return lhs.v_ < rhs.v_; }

 private:
  static constexpr std::uint8_t narrow(unsigned value) {
    if (value > 1u) {
      throw std::invalid_argument("Bit: value must be 0 or 1");
    }
    return static_cast<std::uint8_t>(value);
  }

  std::uint8_t v_ = 0;
};

inline constexpr Bit kZero{0};
inline constexpr Bit kOne{1};

// Domain alias: button inputs are plain bits.
using InputBit = Bit;

enum class Colour : std::uint8_t { green = 0, red = 1 };

// The fixed encoding used everywhere: 0 is green, 1 is red.
constexpr Colour colour_of(Bit b) { return b.value() ? Colour::red : Colour::green; }
constexpr Bit bit_of(Colour c) { return Bit(static_cast<unsigned>(c)); }
constexpr Colour complement(Colour c) { return colour_of(bit_of(c).flipped()); }

constexpr const char* to_string(Colour c) { return c == Colour::green ? "green" : "red"; }

struct OutcomePair {
  Colour alice;
  Colour bob;

  friend constexpr bool operator==(const OutcomePair&, const OutcomePair&) = default;
};

// The defining correlation of a box pair: outputs must differ exactly when
// both inputs are 1, i.e. bit(a) xor bit(b) == x*y.
constexpr bool pr_constraint(Bit x, Bit y, Colour a, Colour b) {
  return (bit_of(a) ^ bit_of(b)) == (x & y);
}

constexpr bool pr_constraint(Bit x, Bit y, const OutcomePair& pair) {
  return pr_constraint(x, y, pair.alice, pair.bob);
}

}  // namespace prbox
