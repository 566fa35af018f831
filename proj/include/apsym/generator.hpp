#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "apsym/errors.hpp"

namespace apsym {

/// Closed-form coefficient sequence k -> a_k (k >= 1) with a certified tail
/// bound m -> log(upper bound on sum_{k>m} |a_k|). Tails live in log space
/// because the interesting sequences decay super-exponentially; -inf means
/// the tail is exactly zero.
class CoefficientGenerator {
 public:
  using Rule = std::function<double(std::int64_t)>;

  CoefficientGenerator(std::string name, Rule coefficient, Rule log_tail_bound)
      : name_(std::move(name)), coefficient_(std::move(coefficient)), log_tail_(std::move(log_tail_bound)) {}

  const std::string& name() const { return name_; }

  double coefficient(std::int64_t k) const {
    if (k < 1) throw ValidationError("coefficient index starts at 1");
    return coefficient_(k);
  }

  double log_tail_bound(std::int64_t m) const {
    if (m < 0) throw ValidationError("tail index must be >= 0");
    return log_tail_(m);
  }

  double tail_bound(std::int64_t m) const { return std::exp(log_tail_bound(m)); }

  /// a_k = exp(-2 B k k!). The ratios rho_k = a_{k+1}/a_k decrease in k, so
  /// sum_{k>m} a_k <= a_{m+1} / (1 - rho_{m+1}). Using max(2, 1/(1 - rho))
  /// keeps tail(m) >= a_{m+1} + tail(m+1) and gives 2 a_{m+1} once rho <= 1/2.
  static CoefficientGenerator super_exponential(double B) {
    if (!(B > 0.0)) throw ValidationError("super_exponential generator needs B > 0");
    auto log_a = [B](std::int64_t k) {
      const double kk = static_cast<double>(k);
      return -2.0 * B * kk * std::exp(std::lgamma(kk + 1.0));
    };
    return CoefficientGenerator(
        "super_exponential", [log_a](std::int64_t k) { return std::exp(log_a(k)); },
        [log_a](std::int64_t m) {
          const double head = log_a(m + 1);
          const double rho = std::exp(log_a(m + 2) - head);
          return head + std::max(std::numbers::ln2, -std::log1p(-rho));
        });
  }

  /// a_k = 1/k^2; sum_{k>m} 1/k^2 < 1/m for m >= 1. At m = 0 the bound is
  /// a_1 + 1 = 2 rather than pi^2/6, so that tails stay mutually consistent.
  static CoefficientGenerator inverse_square() {
    return CoefficientGenerator(
        "inverse_square", [](std::int64_t k) { return 1.0 / (static_cast<double>(k) * static_cast<double>(k)); },
        [](std::int64_t m) {
          if (m == 0) return std::numbers::ln2;
          return -std::log(static_cast<double>(m));
        });
  }

  /// Finite support a_1..a_K; exact tails, zero beyond K.
  static CoefficientGenerator finite(std::vector<double> coefficients) {
    return CoefficientGenerator(
        "finite",
        [coefficients](std::int64_t k) {
          return k <= static_cast<std::int64_t>(coefficients.size()) ? coefficients[static_cast<std::size_t>(k - 1)] : 0.0;
        },
        [coefficients](std::int64_t m) {
          double s = 0.0;
          for (std::size_t k = static_cast<std::size_t>(m); k < coefficients.size(); ++k) s += std::fabs(coefficients[k]);
          return s == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(s);
        });
  }

 private:
  std::string name_;
  Rule coefficient_;
  Rule log_tail_;
};

}  // namespace apsym
