#pragma once

// Evaluation, translation, reflection, sup-norm distances and Bohr-Fourier
// analysis of trigonometric almost periodic functions on Z.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "apsym/errors.hpp"
#include "apsym/frequency.hpp"
#include "apsym/trig_spec.hpp"
#include "apsym/turns.hpp"

namespace apsym {

using complex = std::complex<double>;

/// Longest common period that sup_distance_closed will enumerate.
inline constexpr std::int64_t kMaxEnumeratedPeriod = 10'000'000;

/// g(n) = sum_k amp_k cos(2 pi (alpha_k n + theta_k)).
inline double evaluate(const TrigSpec& spec, const HullPoint& g, std::int64_t n) {
  check_dimension(spec, g);
  double s = 0.0;
  const auto& terms = spec.terms();
  for (std::size_t k = 0; k < terms.size(); ++k) {
    s += terms[k].amp * cos_turns(g.phases[k] + terms[k].freq.advance(n));
  }
  return s;
}

/// T^m g: theta_k -> theta_k + m alpha_k.
inline HullPoint translate(const TrigSpec& spec, const HullPoint& g, std::int64_t m) {
  check_dimension(spec, g);
  HullPoint out;
  out.phases.reserve(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) out.phases.push_back(g.phases[k] + spec.terms()[k].freq.advance(m));
  return out;
}

/// R g: theta_k -> -theta_k, so that (Rg)(n) = g(-n).
inline HullPoint reflect(const TrigSpec& spec, const HullPoint& g) {
  check_dimension(spec, g);
  HullPoint out;
  out.phases.reserve(g.size());
  for (const auto& p : g.phases) out.phases.push_back(-p);
  return out;
}

/// max_{|n| <= N} |g(n) - h(n)|: a lower bound on d(g, h), nondecreasing in N.
inline double sup_distance_windowed(const TrigSpec& spec, const HullPoint& g, const HullPoint& h, std::int64_t N) {
  check_dimension(spec, g);
  check_dimension(spec, h);
  if (N < 1) throw ValidationError("window N must be >= 1");
  double best = 0.0;
  for (std::int64_t n = -N; n <= N; ++n) best = std::max(best, std::fabs(evaluate(spec, g, n) - evaluate(spec, h, n)));
  return best;
}

/// Exact d(g, h) = ||g - h||_inf for quasi-periodic (independence asserted)
/// and limit-periodic specs.
///
/// Quasi-periodic: the orbit n -> (alpha_k n)_k is dense in the torus, so the
/// sup decouples term by term into sum_k 2|a_k| |sin(pi (theta_k - phi_k))|.
/// Limit-periodic: max over one common period.
inline double sup_distance_closed(const TrigSpec& spec, const HullPoint& g, const HullPoint& h) {
  check_dimension(spec, g);
  check_dimension(spec, h);
  switch (spec.spec_class()) {
    case SpecClass::quasi_periodic: {
      if (!spec.assertions().rationally_independent) {
        throw UnsupportedClassError("closed-form distance needs rationally independent frequencies");
      }
      double s = 0.0;
      for (std::size_t k = 0; k < spec.size(); ++k) {
        const double d = (g.phases[k] - h.phases[k]).value();  // [0, 1)
        s += 2.0 * std::fabs(spec.terms()[k].amp) * std::fabs(sin_turns(0.5 * d));
      }
      return s;
    }
    case SpecClass::limit_periodic: {
      const std::int64_t period = spec.common_period(kMaxEnumeratedPeriod);
      if (period == 0) throw UnsupportedClassError("common period exceeds enumeration limit");
      double best = 0.0;
      for (std::int64_t n = 0; n < period; ++n) {
        best = std::max(best, std::fabs(evaluate(spec, g, n) - evaluate(spec, h, n)));
      }
      return best;
    }
    case SpecClass::mixed: break;
  }
  throw UnsupportedClassError("closed-form distance is not defined for mixed specs; use the windowed estimate");
}

/// Cesaro average (2N+1)^{-1} sum_{|n|<=N} xi^{-n} g(n).
inline complex bohr_mean(const TrigSpec& spec, const HullPoint& g, const Frequency& xi, std::int64_t N) {
  check_dimension(spec, g);
  if (N < 1) throw ValidationError("window N must be >= 1");
  complex acc{0.0, 0.0};
  for (std::int64_t n = -N; n <= N; ++n) {
    const Turns t = xi.advance(n);
    acc += evaluate(spec, g, n) * complex(cos_turns(t), -sin_turns(t));
  }
  return acc / static_cast<double>(2 * N + 1);
}

/// Exact Bohr-Fourier coefficient at character xi. A cosine term contributes
/// (a/2) e^{+2 pi i theta} at alpha and (a/2) e^{-2 pi i theta} at 1 - alpha;
/// both are summed when alpha = 1 - alpha (frequencies 0 and 1/2).
inline complex fourier_coefficient_exact(const TrigSpec& spec, const HullPoint& g, const Frequency& xi) {
  check_dimension(spec, g);
  complex c{0.0, 0.0};
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const auto& term = spec.terms()[k];
    const Turns& th = g.phases[k];
    if (xi.matches(term.freq)) c += 0.5 * term.amp * complex(cos_turns(th), sin_turns(th));
    if (xi.matches(term.freq.conjugate())) c += 0.5 * term.amp * complex(cos_turns(th), -sin_turns(th));
  }
  return c;
}

/// sigma(f): both characters alpha_k and 1 - alpha_k of every term, deduplicated,
/// sorted by value in turns.
inline std::vector<Frequency> spectrum(const TrigSpec& spec) {
  std::vector<Frequency> out;
  auto add = [&out](const Frequency& f) {
    for (const auto& e : out) {
      if (e.matches(f)) return;
    }
    out.push_back(f);
  };
  for (const auto& t : spec.terms()) {
    add(t.freq);
    add(t.freq.conjugate());
  }
  std::sort(out.begin(), out.end(),
            [](const Frequency& a, const Frequency& b) { return a.value_turns() < b.value_turns(); });
  return out;
}

enum class Periodicity { limit_periodic, non_limit_periodic };

inline const char* to_string(Periodicity p) {
  return p == Periodicity::limit_periodic ? "limit_periodic" : "non_limit_periodic";
}

/// Limit periodic iff the spectrum is rational.
inline Periodicity classify(const TrigSpec& spec) {
  for (const auto& t : spec.terms()) {
    if (!t.freq.is_rational()) return Periodicity::non_limit_periodic;
  }
  return Periodicity::limit_periodic;
}

}  // namespace apsym
