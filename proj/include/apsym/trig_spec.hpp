#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "apsym/errors.hpp"
#include "apsym/frequency.hpp"
#include "apsym/turns.hpp"

namespace apsym {

struct Term {
  Frequency freq;
  double amp;
};

enum class SpecClass { quasi_periodic, limit_periodic, mixed };

inline const char* to_string(SpecClass c) {
  switch (c) {
    case SpecClass::quasi_periodic: return "quasi_periodic";
    case SpecClass::limit_periodic: return "limit_periodic";
    case SpecClass::mixed: return "mixed";
  }
  return "?";
}

/// Declared properties that cannot be decided from floating point input.
struct SpecAssertions {
  bool irrational = true;
  bool rationally_independent = true;
};

/// f(n) = sum_k amp_k cos(2 pi alpha_k n): a finite trigonometric polynomial on Z.
class TrigSpec {
 public:
  TrigSpec() = default;

  explicit TrigSpec(std::vector<Term> terms, SpecAssertions assertions = {})
      : terms_(std::move(terms)), assertions_(assertions) {
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      const double a = terms_[i].amp;
      if (!(std::isfinite(a) && a != 0.0)) {
        throw ValidationError("term " + std::to_string(i) + ": amplitude must be finite and nonzero");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (terms_[i].freq.matches(terms_[j].freq)) {
          throw ValidationError("terms " + std::to_string(j) + " and " + std::to_string(i) +
                                " share frequency " + terms_[i].freq.label());
        }
      }
      if (!terms_[i].freq.is_rational() && !assertions_.irrational) {
        throw ValidationError("term " + std::to_string(i) + ": irrational frequency without irrationality assertion");
      }
    }
  }

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  const SpecAssertions& assertions() const { return assertions_; }

  /// Empty specs count as limit periodic (the zero function is periodic).
  SpecClass spec_class() const {
    std::size_t rational = 0;
    for (const auto& t : terms_) rational += t.freq.is_rational() ? 1 : 0;
    if (rational == terms_.size()) return SpecClass::limit_periodic;
    if (rational == 0) return SpecClass::quasi_periodic;
    return SpecClass::mixed;
  }

  double amplitude_sum() const {
    double s = 0.0;
    for (const auto& t : terms_) s += std::fabs(t.amp);
    return s;
  }

  /// Common period lcm(q_k) of a limit-periodic spec; 0 if it exceeds `limit`.
  std::int64_t common_period(std::int64_t limit = std::numeric_limits<std::int64_t>::max() / 2) const {
    std::int64_t l = 1;
    for (const auto& t : terms_) {
      if (!t.freq.is_rational()) throw UnsupportedClassError("common_period needs rational frequencies");
      const std::int64_t q = t.freq.q();
      const __int128 next = static_cast<__int128>(l / std::gcd(l, q)) * q;
      if (next > limit) return 0;
      l = static_cast<std::int64_t>(next);
    }
    return l;
  }

 private:
  std::vector<Term> terms_;
  SpecAssertions assertions_;
};

/// A point g of the hull: one phase (turns) per spec term,
/// g(n) = sum_k amp_k cos(2 pi (alpha_k n + theta_k)).
struct HullPoint {
  std::vector<Turns> phases;

  static HullPoint zeros(std::size_t dim) { return HullPoint{std::vector<Turns>(dim, Turns::exact(0, 1))}; }

  static HullPoint from_turns(const std::vector<double>& values) {
    HullPoint g;
    g.phases.reserve(values.size());
    for (double v : values) g.phases.push_back(Turns::real(v));
    return g;
  }

  std::size_t size() const { return phases.size(); }

  std::vector<double> values() const {
    std::vector<double> out;
    out.reserve(phases.size());
    for (const auto& p : phases) out.push_back(p.value());
    return out;
  }
};

inline void check_dimension(const TrigSpec& spec, const HullPoint& g) {
  if (g.size() != spec.size()) {
    throw DimensionError("hull point has " + std::to_string(g.size()) + " phases, spec has " +
                         std::to_string(spec.size()) + " terms");
  }
}

}  // namespace apsym
