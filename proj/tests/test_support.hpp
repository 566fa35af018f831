#pragma once

// Independent oracles and statistics shared by the unit suites.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "apsym/trig_spec.hpp"

namespace apsym::oracle {

/// Kolmogorov-Smirnov statistic of a sample against Uniform[0,1).
inline double ks_uniform(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    d = std::max(d, std::max((static_cast<double>(i) + 1.0) / n - x[i], x[i] - static_cast<double>(i) / n));
  }
  return d;
}

/// Two-sample KS statistic.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

/// Asymptotic 1% critical value of the one-sample KS statistic.
inline double ks_critical_1pct(std::size_t n) { return 1.628 / std::sqrt(static_cast<double>(n)); }

/// Asymptotic 1% critical value of the two-sample KS statistic.
inline double ks2_critical_1pct(std::size_t n, std::size_t m) {
  return 1.628 * std::sqrt(static_cast<double>(n + m) / (static_cast<double>(n) * static_cast<double>(m)));
}

/// Chi-square 1% critical values, df = 1..10.
inline double chi2_critical_1pct(int df) {
  static constexpr double table[] = {6.635, 9.210, 11.345, 13.277, 15.086, 16.812, 18.475, 20.090, 21.666, 23.209};
  return table[df - 1];
}

/// Direct summation in long double, independent of the turn-based kernel.
inline long double evaluate_long(const TrigSpec& spec, const std::vector<double>& phases, long long n) {
  const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  long double s = 0.0L;
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const long double x = static_cast<long double>(spec.terms()[k].freq.value_turns()) * n + phases[k];
    s += static_cast<long double>(spec.terms()[k].amp) * std::cos(two_pi * x);
  }
  return s;
}

inline std::vector<double> random_phases(std::mt19937_64& rng, std::size_t d) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(d);
  for (auto& x : v) x = u(rng);
  return v;
}

}  // namespace apsym::oracle
