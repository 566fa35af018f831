#pragma once

// Reflection symmetry of hull elements: the sets
//   U_r(eps) = { g : d(Rg, g) <= eps },
//   U^(n)    = { g : d(R T^{2n} g, g) <= exp(-B n) },
// their Haar measures (Monte Carlo and closed form), the L^2 bound on the
// antisymmetric part, Borel-Cantelli summability, and the constructive
// symmetry-center search on profinite hulls.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "apsym/apfunc.hpp"
#include "apsym/errors.hpp"
#include "apsym/generator.hpp"
#include "apsym/hull.hpp"
#include "apsym/parallel.hpp"
#include "apsym/trig_spec.hpp"

namespace apsym {

/// Window used when no closed-form distance applies (mixed specs).
inline constexpr std::int64_t kDefaultDistanceWindow = 100'000;
/// Largest decay-check depth: B * m! stays finite in double up to 170!.
inline constexpr std::int64_t kMaxDecayDepth = 170;

/// log(exp(a) + exp(b)) without overflow; handles -inf.
inline double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

inline double safe_log(double x) { return x > 0.0 ? std::log(x) : -std::numeric_limits<double>::infinity(); }

struct MeasureEstimate {
  double value = 0.0;
  double half_width_95 = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
  std::uint64_t hits = 0;

  /// Binomial normal-approximation interval, 1.96 sqrt(p(1-p)/n).
  static MeasureEstimate from_hits(std::uint64_t hits, std::uint64_t n, std::uint64_t seed) {
    MeasureEstimate e;
    e.hits = hits;
    e.n_samples = n;
    e.seed = seed;
    e.value = static_cast<double>(hits) / static_cast<double>(n);
    e.half_width_95 = 1.96 * std::sqrt(e.value * (1.0 - e.value) / static_cast<double>(n));
    return e;
  }
};

/// d(Rg, g). Closed form when the frequency class supports it, otherwise the
/// windowed lower bound over |n| <= window.
inline double reflection_distance(const TrigSpec& spec, const HullPoint& g,
                                  std::int64_t window = kDefaultDistanceWindow) {
  const HullPoint rg = reflect(spec, g);
  try {
    return sup_distance_closed(spec, rg, g);
  } catch (const UnsupportedClassError&) {
    return sup_distance_windowed(spec, rg, g, window);
  }
}

/// d(R T^{2n} g, g) = d(R T^n g, T^n g), using RT = T^{-1}R and that T is an isometry.
inline double js_distance(const TrigSpec& spec, const HullPoint& g, std::int64_t n,
                          std::int64_t window = kDefaultDistanceWindow) {
  if (n < 0) throw ValidationError("js_distance needs n >= 0");
  return reflection_distance(spec, translate(spec, g, n), window);
}

/// Fraction of Haar samples in U_r(eps); boundary d = eps counts as inside.
inline MeasureEstimate measure_ur_mc(const HullModel& hull, double eps, std::uint64_t n_samples, std::uint64_t seed,
                                     unsigned workers = 1) {
  if (!(eps >= 0.0)) throw ValidationError("eps must be >= 0");
  if (n_samples < 1) throw ValidationError("n_samples must be >= 1");
  const TrigSpec& spec = hull_spec(hull);
  const auto hits = parallel_count(n_samples, workers, [&](std::uint64_t i) {
    return reflection_distance(spec, haar_sample(hull, seed, i)) <= eps;
  });
  return MeasureEstimate::from_hits(hits, n_samples, seed);
}

/// Lebesgue measure of { theta in [0,1) : 2 lambda |sin(2 pi theta)| <= eps }.
inline double measure_ur_exact_single_freq(double lambda, double eps) {
  if (!(lambda > 0.0)) throw ValidationError("lambda must be > 0");
  if (!(eps >= 0.0)) throw ValidationError("eps must be >= 0");
  const double x = std::min(1.0, eps / (2.0 * lambda));
  return std::min(1.0, 2.0 / std::numbers::pi * std::asin(x));
}

/// Constant C with mu(U_r(eps)) <= C eps, from the irrational character with
/// the largest Fourier coefficient |a_k|/2: C = 1 / (2 |a_k|/2) = 1 / |a_k|.
inline double theorem1_bound(const TrigSpec& spec) {
  double best = 0.0;
  for (const auto& t : spec.terms()) {
    if (!t.freq.is_rational()) best = std::max(best, std::fabs(t.amp));
  }
  if (best == 0.0) throw HypothesisViolation("linear bound needs a spec that is not limit periodic");
  return 1.0 / best;
}

struct ParsevalResult {
  double lhs = 0.0;       // ||Delta_g||^2 = 2 sum_k a_k^2 sin^2(2 pi theta_k)
  double distance = 0.0;  // d(Rg, g)
  bool within_distance = false;  // lhs <= distance^2 + tol
  bool ok = false;               // lhs <= eps^2 + tol, required whenever distance <= eps
};

inline ParsevalResult parseval_check(const TrigSpec& spec, const HullPoint& g, double eps, double tol = 1e-12) {
  check_dimension(spec, g);
  ParsevalResult r;
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double s = sin_turns(g.phases[k]);
    r.lhs += 2.0 * spec.terms()[k].amp * spec.terms()[k].amp * s * s;
  }
  r.distance = reflection_distance(spec, g);
  r.within_distance = r.lhs <= r.distance * r.distance + tol;
  r.ok = r.distance > eps || r.lhs <= eps * eps + tol;
  return r;
}

/// Fraction of Haar samples in U^(n), i.e. js_distance(g, n) <= exp(-B n).
inline MeasureEstimate measure_usn_mc(const HullModel& hull, std::int64_t n, double B, std::uint64_t n_samples,
                                      std::uint64_t seed, unsigned workers = 1) {
  if (n < 0) throw ValidationError("n must be >= 0");
  if (!(B > 0.0)) throw ValidationError("B must be > 0");
  if (n_samples < 1) throw ValidationError("n_samples must be >= 1");
  const TrigSpec& spec = hull_spec(hull);
  const double threshold = std::exp(-B * static_cast<double>(n));
  const auto hits = parallel_count(n_samples, workers, [&](std::uint64_t i) {
    return js_distance(spec, haar_sample(hull, seed, i), n) <= threshold;
  });
  return MeasureEstimate::from_hits(hits, n_samples, seed);
}

struct BorelCantelliRow {
  std::int64_t n = 0;
  MeasureEstimate estimate;
  double bound = 0.0;              // C e^{-Bn}
  double partial_sum_estimate = 0.0;
  double partial_sum_half_width = 0.0;  // sum of half widths up to n
  double partial_sum_bound = 0.0;
  double union_tail_estimate = 0.0;  // fraction of samples in U^(n) u ... u U^(n_max)
  double union_tail_bound = 0.0;     // C e^{-Bn} / (1 - e^{-B})
  bool violation = false;            // estimate - 3 hw > bound
};

struct BorelCantelliReport {
  double C = 0.0;
  double B = 0.0;
  double series_limit = 0.0;  // C / (1 - e^{-B})
  std::vector<BorelCantelliRow> rows;
  bool any_violation = false;
  bool partial_sums_ok = true;  // sum estimates <= series_limit + 3 * sum half widths
};

/// mu(U^(n)) for n = 0..n_max on one common set of Haar samples, against
/// C e^{-Bn}. Sharing samples across n makes the union-tail column meaningful.
inline BorelCantelliReport borel_cantelli_report(const HullModel& hull, double B, std::int64_t n_max,
                                                 std::uint64_t n_samples, std::uint64_t seed, unsigned workers = 1) {
  if (!(B > 0.0)) throw ValidationError("B must be > 0");
  if (n_max < 0) throw ValidationError("n_max must be >= 0");
  if (n_samples < 1) throw ValidationError("n_samples must be >= 1");
  const TrigSpec& spec = hull_spec(hull);
  BorelCantelliReport rep;
  rep.C = theorem1_bound(spec);
  rep.B = B;
  rep.series_limit = rep.C / (1.0 - std::exp(-B));

  const auto count = static_cast<std::size_t>(n_max + 1);
  // last_hit[i] = largest n with sample i in U^(n), or -1
  std::vector<std::int64_t> last_hit(n_samples, -1);
  std::vector<std::vector<std::uint8_t>> hit(count, std::vector<std::uint8_t>(n_samples, 0));
  parallel_for(n_samples, workers, [&](std::uint64_t i) {
    const HullPoint g = haar_sample(hull, seed, i);
    for (std::int64_t n = 0; n <= n_max; ++n) {
      if (js_distance(spec, g, n) <= std::exp(-B * static_cast<double>(n))) {
        hit[static_cast<std::size_t>(n)][i] = 1;
        last_hit[i] = n;
      }
    }
  });

  double ps = 0.0, ps_hw = 0.0, ps_bound = 0.0;
  for (std::int64_t n = 0; n <= n_max; ++n) {
    BorelCantelliRow row;
    row.n = n;
    std::uint64_t hits = 0, tail = 0;
    for (std::uint64_t i = 0; i < n_samples; ++i) {
      hits += hit[static_cast<std::size_t>(n)][i];
      tail += last_hit[i] >= n ? 1 : 0;
    }
    row.estimate = MeasureEstimate::from_hits(hits, n_samples, seed);
    row.bound = rep.C * std::exp(-B * static_cast<double>(n));
    ps += row.estimate.value;
    ps_hw += row.estimate.half_width_95;
    ps_bound += row.bound;
    row.partial_sum_estimate = ps;
    row.partial_sum_half_width = ps_hw;
    row.partial_sum_bound = ps_bound;
    row.union_tail_estimate = static_cast<double>(tail) / static_cast<double>(n_samples);
    row.union_tail_bound = row.bound / (1.0 - std::exp(-B));
    row.violation = row.estimate.value - 3.0 * row.estimate.half_width_95 > row.bound;
    rep.any_violation = rep.any_violation || row.violation;
    rep.rows.push_back(row);
  }
  rep.partial_sums_ok = ps <= rep.series_limit + 3.0 * ps_hw;
  return rep;
}

struct DecayRow {
  std::int64_t m = 0;
  double log_value = 0.0;  // log(4 exp(B m!) tail(m))
  bool below_one = false;
};

struct DecayCheck {
  std::vector<DecayRow> rows;
  std::vector<std::int64_t> witnesses;  // m with v(m) < 1
  bool verdict = false;
};

/// v(m) = 4 exp(B m!) sum_{k>m} |a_k| for m = 1..m_max, in log space.
inline DecayCheck decay_condition_check(const CoefficientGenerator& gen, double B, std::int64_t m_max) {
  if (!(B > 0.0)) throw ValidationError("B must be > 0");
  if (m_max < 1 || m_max > kMaxDecayDepth) {
    throw ValidationError("m_max must lie in [1, " + std::to_string(kMaxDecayDepth) + "]");
  }
  DecayCheck out;
  for (std::int64_t m = 1; m <= m_max; ++m) {
    const double b_fact = std::exp(std::log(B) + std::lgamma(static_cast<double>(m) + 1.0));
    const double log_tail = gen.log_tail_bound(m);
    DecayRow row;
    row.m = m;
    row.log_value = log_tail == -std::numeric_limits<double>::infinity()
                        ? log_tail
                        : 2.0 * std::numbers::ln2 + b_fact + log_tail;
    row.below_one = row.log_value < 0.0;
    if (row.below_one) out.witnesses.push_back(m);
    out.rows.push_back(row);
  }
  out.verdict = !out.witnesses.empty();
  return out;
}

/// Witness that g lies in U^(r): T^r g is within `upper` of its reflection
/// and upper <= exp(-B r). Distances on a depth-K profinite hull are only
/// known to +-2 tail(K), so validity is judged on the upper end.
struct SymmetryCertificate {
  std::int64_t center_r = 0;
  std::int64_t depth_m = 0;
  std::int64_t level_modulus = 1;  // lcm(1..m)
  double achieved_distance = 0.0;  // on the depth-K truncation
  double interval_lo = 0.0;
  double log_upper = 0.0;          // log(achieved + 2 tail(K))
  double log_threshold = 0.0;      // -B r
  double log_guarantee = 0.0;      // log(4 tail(m))
  bool valid = false;

  double threshold() const { return std::exp(log_threshold); }
  double upper() const { return std::exp(log_upper); }
};

/// Smallest r in {1..L} with 2(r + l) = 0 mod L: r = -l mod L/gcd(2, L).
inline std::int64_t smallest_symmetry_center(std::int64_t l, std::int64_t L) {
  const std::int64_t step = L % 2 == 0 ? L / 2 : L;
  std::int64_t r = (-l) % step;
  if (r <= 0) r += step;
  return r;
}

/// Centers of symmetry of the depth-m truncation T^l f^(m) (even, period
/// lcm(1..m)) are the r with 2(r + l) = 0 mod lcm(1..m). The smallest is
/// certified against exp(-B r) on the full depth-K truncation.
inline SymmetryCertificate symmetry_center_search(const ProfiniteHull& hull, Residue g, std::int64_t m, double B) {
  if (m < 1 || m > hull.depth()) {
    throw PreconditionError("depth m = " + std::to_string(m) + " outside [1, " + std::to_string(hull.depth()) + "]");
  }
  if (!(B > 0.0)) throw ValidationError("B must be > 0");
  SymmetryCertificate c;
  c.depth_m = m;
  c.level_modulus = lcm_up_to(m);
  const std::int64_t l = hull.reduce(g.value).value % c.level_modulus;
  c.center_r = smallest_symmetry_center(l, c.level_modulus);
  c.achieved_distance = js_distance(hull.spec(), hull.point(g), c.center_r);
  const double log_slack = std::numbers::ln2 + hull.log_tail_bound();
  c.interval_lo = std::max(0.0, c.achieved_distance - std::exp(log_slack));
  c.log_upper = log_add_exp(safe_log(c.achieved_distance), log_slack);
  c.log_threshold = -B * static_cast<double>(c.center_r);
  c.log_guarantee = 2.0 * std::numbers::ln2 + hull.level_log_tail(m);
  c.valid = c.log_upper <= c.log_threshold;
  return c;
}

inline SymmetryCertificate symmetry_center_search(const ProfiniteHull& hull, const HullPoint& g, std::int64_t m,
                                                  double B) {
  return symmetry_center_search(hull, hull.residue_of(g), m, B);
}

struct Theorem3Entry {
  std::uint64_t sample_id = 0;
  Residue residue;
  SymmetryCertificate certificate;
  double oracle_distance = 0.0;  // windowed over |n| <= 3 L
  bool oracle_valid = false;
};

struct Theorem3Report {
  DecayCheck decay;
  bool precondition_ok = false;
  std::int64_t oracle_window = 0;
  std::vector<Theorem3Entry> entries;
  std::uint64_t valid = 0;
  double hit_rate = 0.0;
};

/// For each Haar sample and each decay witness depth m_j <= depth, search a
/// symmetry center and certify it twice: closed form over one period, and a
/// windowed re-check over |n| <= 3 L.
inline Theorem3Report verify_theorem3(const ProfiniteHull& hull, const CoefficientGenerator& gen, double B,
                                      std::uint64_t n_points, std::uint64_t seed, unsigned workers = 1) {
  if (n_points < 1) throw ValidationError("n_points must be >= 1");
  Theorem3Report rep;
  rep.decay = decay_condition_check(gen, B, std::min(hull.depth(), kMaxDecayDepth));
  rep.precondition_ok = rep.decay.verdict;
  if (!rep.precondition_ok) return rep;

  const auto& depths = rep.decay.witnesses;
  const std::int64_t window = 3 * hull.modulus();
  rep.oracle_window = window;
  const double log_slack = std::numbers::ln2 + hull.log_tail_bound();
  rep.entries.resize(n_points * depths.size());
  parallel_for(n_points, workers, [&](std::uint64_t i) {
    SeededSampler sampler(seed, i);
    const Residue r = haar_sample_residue(hull, sampler);
    const HullPoint g = hull.point(r);
    for (std::size_t j = 0; j < depths.size(); ++j) {
      Theorem3Entry e;
      e.sample_id = i;
      e.residue = r;
      e.certificate = symmetry_center_search(hull, r, depths[j], B);
      const HullPoint shifted = translate(hull.spec(), g, e.certificate.center_r);
      e.oracle_distance = sup_distance_windowed(hull.spec(), reflect(hull.spec(), shifted), shifted, window);
      e.oracle_valid = log_add_exp(safe_log(e.oracle_distance), log_slack) <= e.certificate.log_threshold;
      rep.entries[i * depths.size() + j] = e;
    }
  });
  for (const auto& e : rep.entries) rep.valid += (e.certificate.valid && e.oracle_valid) ? 1 : 0;
  rep.hit_rate = static_cast<double>(rep.valid) / static_cast<double>(rep.entries.size());
  return rep;
}

}  // namespace apsym
