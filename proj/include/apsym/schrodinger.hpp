#pragma once

// Discrete Schrodinger operators [H_g u](n) = u(n+1) + u(n-1) + g(n) u(n),
// restricted to sites -N..N with Dirichlet boundary.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "apsym/apfunc.hpp"
#include "apsym/errors.hpp"
#include "apsym/tridiagonal_eigen.hpp"
#include "apsym/trig_spec.hpp"

namespace apsym {

struct TruncatedOperator {
  std::int64_t half_size = 0;    // sites -N..N
  std::vector<double> diagonal;  // g(-N), ..., g(N)

  std::size_t dim() const { return diagonal.size(); }

  /// Dense (row-major) copy; off-diagonals are 1.
  std::vector<double> dense() const {
    const std::size_t n = dim();
    std::vector<double> a(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      a[i * n + i] = diagonal[i];
      if (i + 1 < n) a[i * n + i + 1] = a[(i + 1) * n + i] = 1.0;
    }
    return a;
  }
};

inline TruncatedOperator truncate(const TrigSpec& spec, const HullPoint& g, std::int64_t N) {
  if (N < 1) throw ValidationError("truncation half-size N must be >= 1");
  TruncatedOperator op;
  op.half_size = N;
  op.diagonal.reserve(static_cast<std::size_t>(2 * N + 1));
  for (std::int64_t n = -N; n <= N; ++n) op.diagonal.push_back(evaluate(spec, g, n));
  return op;
}

inline EigenSystem eigen(const TruncatedOperator& op) {
  return tridiagonal_eigen(op.diagonal, std::vector<double>(op.dim() > 0 ? op.dim() - 1 : 0, 1.0));
}

struct ParityReport {
  double commutator_norm = 0.0;  // Frobenius norm of HP - PH
  std::size_t checked = 0;       // eigenvectors with an isolated eigenvalue
  std::size_t skipped = 0;       // near-degenerate eigenvalues
  std::size_t even = 0;
  std::size_t odd = 0;
  double max_parity_defect = 0.0;  // min(|v - Pv|, |v + Pv|) over checked vectors
  bool ok = false;
};

/// For an even potential, H commutes with the site reflection P and every
/// eigenvector of an isolated eigenvalue is even or odd. Pairs closer than
/// gap_tol are treated as degenerate, where the basis is arbitrary.
inline ParityReport parity_check(const TrigSpec& spec, const HullPoint& g_even, std::int64_t N,
                                 double commutator_tol = 1e-10, double parity_tol = 1e-8, double gap_tol = 1e-12) {
  check_dimension(spec, g_even);
  for (const auto& p : g_even.phases) {
    if (!(-p == p)) throw PreconditionError("parity_check needs an even hull point (phases in {0, 1/2})");
  }
  const TruncatedOperator op = truncate(spec, g_even, N);
  const std::size_t n = op.dim();
  const std::vector<double> a = op.dense();

  ParityReport rep;
  double fro = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double hp = a[i * n + (n - 1 - j)];  // (HP)_{ij} = H_{i, P(j)}
      const double ph = a[(n - 1 - i) * n + j];  // (PH)_{ij} = H_{P(i), j}
      fro += (hp - ph) * (hp - ph);
    }
  }
  rep.commutator_norm = std::sqrt(fro);

  const EigenSystem es = eigen(op);
  for (std::size_t j = 0; j < n; ++j) {
    const double gap_lo = j > 0 ? es.values[j] - es.values[j - 1] : INFINITY;
    const double gap_hi = j + 1 < n ? es.values[j + 1] - es.values[j] : INFINITY;
    if (std::min(gap_lo, gap_hi) <= gap_tol) {
      ++rep.skipped;
      continue;
    }
    const auto& v = es.vectors[j];
    double plus = 0.0, minus = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      plus += (v[k] - v[n - 1 - k]) * (v[k] - v[n - 1 - k]);
      minus += (v[k] + v[n - 1 - k]) * (v[k] + v[n - 1 - k]);
    }
    const double defect = std::sqrt(std::min(plus, minus));
    (plus <= minus ? rep.even : rep.odd) += 1;
    rep.max_parity_defect = std::max(rep.max_parity_defect, defect);
    ++rep.checked;
  }
  rep.ok = rep.commutator_norm <= commutator_tol && rep.max_parity_defect <= parity_tol;
  return rep;
}

/// Every eigenvalue of a truncation lies in [-2 - sum|a_k|, 2 + sum|a_k|].
inline bool spectral_enclosure_holds(const TrigSpec& spec, const std::vector<double>& eigenvalues, double tol = 1e-10) {
  const double r = 2.0 + spec.amplitude_sum() + tol;
  return std::all_of(eigenvalues.begin(), eigenvalues.end(), [r](double x) { return std::fabs(x) <= r; });
}

/// f(n) = lambda cos(2 pi alpha n) at phase theta.
inline std::pair<TrigSpec, HullPoint> almost_mathieu_preset(double lambda, double alpha, double theta,
                                                            std::string label = {}) {
  if (!(lambda > 0.0)) throw ValidationError("almost Mathieu coupling must be > 0");
  TrigSpec spec({Term{Frequency::irrational(alpha, std::move(label)), lambda}});
  return {std::move(spec), HullPoint::from_turns({theta})};
}

}  // namespace apsym
