#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace prbox {

// Exact rational with int64 parts. Success probabilities here are tiny
// fractions (denominators 4 and 8), so overflow is not a practical concern,
// but comparisons still go through 128-bit intermediates to stay exact.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t num) : num_(num), den_(1) {}
  constexpr Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
    if (den_ == 0) {
      throw std::invalid_argument("Rational: zero denominator");
    }
    normalize();
  }

  constexpr std::int64_t num() const { return num_; }
  constexpr std::int64_t den() const { return den_; }

  constexpr Rational operator+(const Rational& rhs) const {
    return Rational(num_ * rhs.den_ + rhs.num_ * den_, den_ * rhs.den_);
  }
  constexpr Rational operator-(const Rational& rhs) const {
    return Rational(num_ * rhs.den_ - rhs.num_ * den_, den_ * rhs.den_);
  }
  constexpr Rational& operator+=(const Rational& rhs) { return *this = *this + rhs; }
  constexpr Rational operator*(const Rational& rhs) const {
    return Rational(num_ * rhs.num_, den_ * rhs.den_);
  }
  constexpr Rational operator/(const Rational& rhs) const {
    if (rhs.num_ == 0) {
      throw std::domain_error("Rational: division by zero");
    }
    return Rational(num_ * rhs.den_, den_ * rhs.num_);
  }

  friend constexpr bool operator==(const Rational& lhs, const Rational& rhs) {
    return lhs.num_ == rhs.num_ && lhs.den_ == rhs.den_;
  }
  friend constexpr std::strong_ordering operator<=>(const Rational& lhs, const Rational& rhs) {
    using I128 = __int128;
    const I128 l = I128(lhs.num_) * rhs.den_;
    const I128 r = I128(rhs.num_) * lhs.den_;
    return l < r ? std::strong_ordering::less
         : l > r ? std::strong_ordering::greater
                 : std::strong_ordering::equal;
  }

  constexpr double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  std::string to_string() const {
    return den_ == 1 ? std::to_string(num_)
                     : std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.to_string();
  }

 private:
  constexpr void normalize() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const std::int64_t g = std::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace prbox
