#pragma once

// Angles measured in turns (fractions of a full cycle), reduced mod 1.
//
// A phase is either an exact rational num/den or a double. Exact phases keep
// residue-tower arithmetic free of rounding, so that g(c + j) and g(c - j)
// evaluate to bit-identical doubles whenever c is an exact symmetry center.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>

namespace apsym {

/// Reduce x into [0, 1).
inline double frac_turns(double x) {
  double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

/// cos(2 pi x) with quadrant reduction; exact zeros at quarter turns.
inline double cos_turns(double x) {
  const double r = x - std::nearbyint(x);  // [-1/2, 1/2]
  const double q = std::nearbyint(4.0 * r);
  const double a = 2.0 * std::numbers::pi * (r - 0.25 * q);  // |a| <= pi/4
  switch (static_cast<int>(q)) {
    case 0: return std::cos(a);
    case 1: return -std::sin(a);
    case -1: return std::sin(a);
    default: return -std::cos(a);  // q = +-2
  }
}

/// sin(2 pi x) with quadrant reduction.
inline double sin_turns(double x) {
  const double r = x - std::nearbyint(x);
  const double q = std::nearbyint(4.0 * r);
  const double a = 2.0 * std::numbers::pi * (r - 0.25 * q);
  switch (static_cast<int>(q)) {
    case 0: return std::sin(a);
    case 1: return std::cos(a);
    case -1: return -std::cos(a);
    default: return -std::sin(a);
  }
}

class Turns {
 public:
  /// Exact denominators above this fall back to double arithmetic.
  static constexpr std::int64_t kMaxExactDenominator = std::int64_t{1} << 40;

  Turns() = default;

  static Turns real(double x) {
    Turns t;
    t.value_ = frac_turns(x);
    return t;
  }

  static Turns exact(std::int64_t num, std::int64_t den) {
    if (den <= 0) {
      num = -num;
      den = -den;
    }
    if (den == 0) return real(0.0);
    std::int64_t r = num % den;
    if (r < 0) r += den;
    const std::int64_t g = std::gcd(r, den);
    Turns t;
    t.exact_ = true;
    t.num_ = r / g;
    t.den_ = den / g;
    t.value_ = static_cast<double>(t.num_) / static_cast<double>(t.den_);
    return t;
  }

  bool is_exact() const { return exact_; }
  std::int64_t numerator() const { return num_; }
  std::int64_t denominator() const { return den_; }

  /// Representative in [0, 1).
  double value() const { return value_; }

  Turns operator-() const {
    if (exact_) return exact(den_ - num_, den_);
    return real(-value_);
  }

  friend Turns operator+(const Turns& a, const Turns& b) {
    if (a.exact_ && b.exact_) {
      const std::int64_t g = std::gcd(a.den_, b.den_);
      const __int128 den = static_cast<__int128>(a.den_ / g) * b.den_;
      if (den <= kMaxExactDenominator) {
        const __int128 num = static_cast<__int128>(a.num_) * (b.den_ / g) +
                             static_cast<__int128>(b.num_) * (a.den_ / g);
        const auto d = static_cast<std::int64_t>(den);
        return exact(static_cast<std::int64_t>(num % den), d);
      }
    }
    return real(a.value_ + b.value_);
  }

  friend Turns operator-(const Turns& a, const Turns& b) { return a + (-b); }

  /// Bitwise-meaningful equality: exact phases compare as rationals.
  friend bool operator==(const Turns& a, const Turns& b) {
    if (a.exact_ && b.exact_) return a.num_ == b.num_ && a.den_ == b.den_;
    return a.value_ == b.value_;
  }

 private:
  bool exact_ = false;
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  double value_ = 0.0;
};

/// cos(2 pi t). Exact phases j/d and (d - j)/d give identical results.
inline double cos_turns(const Turns& t) {
  if (t.is_exact()) {
    const std::int64_t j = std::min(t.numerator(), t.denominator() - t.numerator());
    return cos_turns(static_cast<double>(j) / static_cast<double>(t.denominator()));
  }
  return cos_turns(t.value());
}

inline double sin_turns(const Turns& t) {
  if (t.is_exact()) {
    const std::int64_t n = t.numerator();
    const std::int64_t d = t.denominator();
    // odd symmetry: sin(-x) = -sin(x) exactly
    if (2 * n > d) return -sin_turns(static_cast<double>(d - n) / static_cast<double>(d));
    return sin_turns(static_cast<double>(n) / static_cast<double>(d));
  }
  return sin_turns(t.value());
}

/// Distance on the circle R/Z, in [0, 1/2].
inline double circular_distance(const Turns& a, const Turns& b) {
  const double d = std::fabs(a.value() - b.value());
  return std::min(d, 1.0 - d);
}

}  // namespace apsym
