#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

#include "apsym/errors.hpp"
#include "apsym/turns.hpp"

namespace apsym {

/// Largest denominator scanned by the rational-proximity screen.
inline constexpr std::int64_t kIrrationalScreenMaxDenominator = 1'000'000;
/// Screen tolerance on |q*v - p|.
inline constexpr double kIrrationalScreenTolerance = 1e-12;

/// Returns the smallest q <= max_q with |q*v - round(q*v)| <= tol, or 0 if none.
inline std::int64_t nearby_rational_denominator(double v, std::int64_t max_q = kIrrationalScreenMaxDenominator,
                                                double tol = kIrrationalScreenTolerance) {
  for (std::int64_t q = 1; q <= max_q; ++q) {
    const double x = static_cast<double>(q) * v;
    if (std::fabs(x - std::nearbyint(x)) <= tol) return q;
  }
  return 0;
}

/// A frequency in turns per lattice step, value in [0, 1).
///
/// Rational frequencies p/q are stored reduced with 0 <= p < q. Irrational
/// frequencies carry a user assertion of irrationality; construction runs a
/// rational-proximity screen and rejects values that are (numerically) p/q.
class Frequency {
 public:
  enum class Kind { rational, irrational };

  static Frequency rational(std::int64_t p, std::int64_t q) {
    if (q <= 0) throw ValidationError("rational frequency needs q > 0, got q = " + std::to_string(q));
    std::int64_t r = p % q;
    if (r < 0) r += q;
    const std::int64_t g = std::gcd(r, q);
    Frequency f;
    f.kind_ = Kind::rational;
    f.p_ = r / g;
    f.q_ = q / g;
    f.value_ = static_cast<double>(f.p_) / static_cast<double>(f.q_);
    f.label_ = std::to_string(f.p_) + "/" + std::to_string(f.q_);
    return f;
  }

  static Frequency irrational(double value, std::string label = {}) {
    if (!(value > 0.0 && value < 1.0)) {
      throw ValidationError("irrational frequency must lie in (0,1), got " + std::to_string(value));
    }
    if (const auto q = nearby_rational_denominator(value); q != 0) {
      throw ValidationError("frequency " + std::to_string(value) + " is numerically rational (denominator " +
                            std::to_string(q) + ")");
    }
    Frequency f;
    f.kind_ = Kind::irrational;
    f.value_ = value;
    f.label_ = label.empty() ? std::to_string(value) : std::move(label);
    return f;
  }

  Kind kind() const { return kind_; }
  bool is_rational() const { return kind_ == Kind::rational; }
  std::int64_t p() const { return p_; }
  std::int64_t q() const { return q_; }
  double value_turns() const { return value_; }
  const std::string& label() const { return label_; }

  /// The conjugate character 1 - alpha (mod 1).
  Frequency conjugate() const {
    if (is_rational()) return rational(q_ - p_, q_);
    Frequency f = *this;
    f.value_ = 1.0 - value_;
    f.label_ = "1-(" + label_ + ")";
    return f;
  }

  /// alpha * n mod 1. Exact for rationals; fma-compensated for irrationals.
  Turns advance(std::int64_t n) const {
    if (is_rational()) {
      const auto r = static_cast<std::int64_t>((static_cast<__int128>(p_) * n) % q_);
      return Turns::exact(r, q_);
    }
    const double dn = static_cast<double>(n);
    const double k = std::nearbyint(value_ * dn);
    return Turns::real(std::fma(value_, dn, -k));
  }

  /// Same character: rationals compare exactly, irrationals within tol on the circle.
  bool matches(const Frequency& other, double tol = 1e-12) const {
    if (is_rational() && other.is_rational()) return p_ == other.p_ && q_ == other.q_;
    const double d = std::fabs(value_ - other.value_);
    return std::min(d, 1.0 - d) <= tol;
  }

 private:
  Frequency() = default;

  Kind kind_ = Kind::rational;
  std::int64_t p_ = 0;
  std::int64_t q_ = 1;
  double value_ = 0.0;
  std::string label_;
};

}  // namespace apsym
