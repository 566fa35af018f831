#pragma once

// Concrete models of the hull U with its normalized Haar measure.
//
//   TorusHull      quasi-periodic specs; U is the phase torus [0,1)^d and
//                  Haar measure is the uniform product measure.
//   ProfiniteHull  f = sum_{k<=K} a_k cos(2 pi n / k); at depth K a hull
//                  point is a residue r mod L = lcm(1..K) with phases r/k.

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "apsym/apfunc.hpp"
#include "apsym/errors.hpp"
#include "apsym/generator.hpp"
#include "apsym/rng.hpp"
#include "apsym/trig_spec.hpp"

namespace apsym {

/// lcm(1..m); throws if it overflows int64.
inline std::int64_t lcm_up_to(std::int64_t m) {
  std::int64_t l = 1;
  for (std::int64_t k = 2; k <= m; ++k) {
    const __int128 next = static_cast<__int128>(l / std::gcd(l, k)) * k;
    if (next > std::numeric_limits<std::int64_t>::max()) throw ValidationError("lcm(1..m) overflows for m = " + std::to_string(m));
    l = static_cast<std::int64_t>(next);
  }
  return l;
}

class TorusHull {
 public:
  explicit TorusHull(TrigSpec spec) : spec_(std::move(spec)) {
    if (spec_.spec_class() != SpecClass::quasi_periodic || spec_.empty()) {
      throw UnsupportedClassError("torus hull needs a non-empty quasi-periodic spec");
    }
    if (!spec_.assertions().rationally_independent) {
      throw ValidationError("torus hull needs rationally independent frequencies (assertion missing)");
    }
  }

  const TrigSpec& spec() const { return spec_; }
  std::size_t dim() const { return spec_.size(); }

 private:
  TrigSpec spec_;
};

/// Residue class r mod L identifying a point of a profinite hull.
struct Residue {
  std::int64_t value = 0;
  friend bool operator==(Residue, Residue) = default;
};

class ProfiniteHull {
 public:
  /// Truncation of sum_k a_k cos(2 pi n / k) at depth K, coefficients from `gen`.
  ProfiniteHull(const CoefficientGenerator& gen, std::int64_t depth)
      : depth_(depth), modulus_(lcm_up_to(depth)), log_tail_(gen.log_tail_bound(depth)) {
    if (depth < 1) throw ValidationError("profinite depth must be >= 1");
    std::vector<Term> terms;
    for (std::int64_t m = 0; m <= depth; ++m) level_log_tails_.push_back(gen.log_tail_bound(m));
    for (std::int64_t k = 1; k <= depth; ++k) {
      const double a = gen.coefficient(k);
      coefficients_.push_back(a);
      // coefficients below double range drop out of the trigonometric sum but
      // not out of the residue tower
      if (a != 0.0) {
        terms.push_back(Term{Frequency::rational(1, k), a});
        levels_.push_back(k);
      }
    }
    spec_ = TrigSpec(std::move(terms));
  }

  const TrigSpec& spec() const { return spec_; }
  std::int64_t depth() const { return depth_; }
  std::int64_t modulus() const { return modulus_; }
  const std::vector<double>& coefficients() const { return coefficients_; }
  /// Tower level k of each spec term.
  const std::vector<std::int64_t>& levels() const { return levels_; }
  double log_tail_bound() const { return log_tail_; }
  double tail_bound() const { return std::exp(log_tail_); }
  /// log of the generator's bound on sum_{k>m} |a_k|, for 0 <= m <= depth.
  double level_log_tail(std::int64_t m) const {
    if (m < 0 || m > depth_) throw PreconditionError("level " + std::to_string(m) + " outside hull depth");
    return level_log_tails_[static_cast<std::size_t>(m)];
  }

  /// Phases r/k (exact) for every spec term.
  HullPoint point(Residue r) const {
    HullPoint g;
    g.phases.reserve(levels_.size());
    for (std::int64_t k : levels_) g.phases.push_back(Turns::exact(r.value, k));
    return g;
  }

  Residue reduce(std::int64_t r) const {
    std::int64_t v = r % modulus_;
    return Residue{v < 0 ? v + modulus_ : v};
  }

  /// Recover r from exact phases r/k by searching the residues mod L.
  /// Unique only modulo the lcm of levels that carry a term.
  Residue residue_of(const HullPoint& g) const {
    check_dimension(spec_, g);
    for (std::int64_t r = 0; r < modulus_; ++r) {
      bool ok = true;
      for (std::size_t i = 0; i < levels_.size() && ok; ++i) ok = g.phases[i] == Turns::exact(r, levels_[i]);
      if (ok) return Residue{r};
    }
    throw PreconditionError("phases are not of the form r/k for a single residue r");
  }

 private:
  std::int64_t depth_;
  std::int64_t modulus_;
  double log_tail_;
  std::vector<double> coefficients_;
  std::vector<std::int64_t> levels_;
  std::vector<double> level_log_tails_;
  TrigSpec spec_;
};

using HullModel = std::variant<TorusHull, ProfiniteHull>;

inline const TrigSpec& hull_spec(const HullModel& hull) {
  return std::visit([](const auto& h) -> const TrigSpec& { return h.spec(); }, hull);
}

inline HullPoint haar_sample_torus(const TorusHull& hull, SeededSampler& sampler) {
  HullPoint g;
  g.phases.reserve(hull.dim());
  for (std::size_t k = 0; k < hull.dim(); ++k) g.phases.push_back(Turns::real(sampler.uniform()));
  return g;
}

inline Residue haar_sample_residue(const ProfiniteHull& hull, SeededSampler& sampler) {
  return Residue{static_cast<std::int64_t>(sampler.uniform_below(static_cast<std::uint64_t>(hull.modulus())))};
}

inline HullPoint haar_sample_profinite(const ProfiniteHull& hull, SeededSampler& sampler) {
  return hull.point(haar_sample_residue(hull, sampler));
}

/// Sample number `index` of the stream keyed by `seed`; independent of any
/// other index, which is what makes parallel estimators order-free.
inline HullPoint haar_sample(const HullModel& hull, std::uint64_t seed, std::uint64_t index) {
  SeededSampler sampler(seed, index);
  if (const auto* t = std::get_if<TorusHull>(&hull)) return haar_sample_torus(*t, sampler);
  return haar_sample_profinite(std::get<ProfiniteHull>(hull), sampler);
}

/// Translate of f (zero phases) closest to g among |m| <= m_max, if within tol.
/// Ties go to the smallest |m|, then the positive one.
inline std::optional<std::int64_t> orbit_approximate(const TorusHull& hull, const HullPoint& g, double tol,
                                                      std::int64_t m_max) {
  if (!(tol > 0.0)) throw ValidationError("orbit_approximate needs tol > 0");
  check_dimension(hull.spec(), g);
  const HullPoint origin = HullPoint::zeros(hull.dim());
  double best = std::numeric_limits<double>::infinity();
  std::int64_t best_m = 0;
  for (std::int64_t a = 0; a <= m_max; ++a) {
    for (std::int64_t m : {a, -a}) {
      const double d = sup_distance_closed(hull.spec(), translate(hull.spec(), origin, m), g);
      if (d < best) {
        best = d;
        best_m = m;
      }
      if (a == 0) break;
    }
  }
  if (best <= tol) return best_m;
  return std::nullopt;
}

/// Profinite case: T^m f agrees with g on every level k <= K iff m = r mod L,
/// leaving only the tail, so d(T^r f, g) <= 2 * tail_bound.
inline std::optional<std::int64_t> orbit_approximate(const ProfiniteHull& hull, Residue r, double tol) {
  if (!(tol > 0.0)) throw ValidationError("orbit_approximate needs tol > 0");
  if (2.0 * hull.tail_bound() <= tol) return hull.reduce(r.value).value;
  return std::nullopt;
}

/// Weyl-sum diagnostic max_k |(2N+1)^{-1} sum_{|n|<=N} e^{2 pi i alpha_k n}|
/// over irrational-kind terms; 0 if there are none.
inline double equidistribution_check(const TrigSpec& spec, std::int64_t N) {
  if (N < 1) throw ValidationError("window N must be >= 1");
  double worst = 0.0;
  for (const auto& t : spec.terms()) {
    if (t.freq.is_rational()) continue;
    std::complex<double> acc{0.0, 0.0};
    for (std::int64_t n = -N; n <= N; ++n) {
      const Turns x = t.freq.advance(n);
      acc += std::complex<double>(cos_turns(x), sin_turns(x));
    }
    worst = std::max(worst, std::abs(acc) / static_cast<double>(2 * N + 1));
  }
  return worst;
}

}  // namespace apsym
