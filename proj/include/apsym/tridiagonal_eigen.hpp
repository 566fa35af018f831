#pragma once

// Symmetric tridiagonal eigensolver: implicit QL with Wilkinson shifts.
// Iterates in long double; eigenvector error scales like eps |H| / gap, so
// the wider mantissa keeps close pairs (gaps ~1e-8) well resolved.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "apsym/errors.hpp"

namespace apsym {

struct EigenSystem {
  std::vector<double> values;                // ascending
  std::vector<std::vector<double>> vectors;  // vectors[j] pairs with values[j]
};

/// Eigen-decomposition of the symmetric tridiagonal matrix with main diagonal
/// `diag` (size n) and off-diagonal `off` (size n-1).
inline EigenSystem tridiagonal_eigen(const std::vector<double>& d0, const std::vector<double>& off, int max_sweeps = 60) {
  using real = long double;
  const std::size_t n = d0.size();
  if (n == 0) return {};
  if (off.size() + 1 != n) throw DimensionError("off-diagonal must have n-1 entries");

  std::vector<real> diag(d0.begin(), d0.end());
  std::vector<real> e(n, 0.0L);
  std::copy(off.begin(), off.end(), e.begin());
  // z is row-major; column j accumulates eigenvector j
  std::vector<real> z(n * n, 0.0L);
  for (std::size_t i = 0; i < n; ++i) z[i * n + i] = 1.0L;

  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const real dd = std::fabs(diag[m]) + std::fabs(diag[m + 1]);
        if (std::fabs(e[m]) <= std::numeric_limits<real>::epsilon() * dd) break;
      }
      if (m != l) {
        if (iter++ == max_sweeps) {
          throw NumericalError("tridiagonal QL failed to converge at index " + std::to_string(l) + " after " +
                               std::to_string(max_sweeps) + " sweeps, residual off-diagonal " +
                               std::to_string(static_cast<double>(e[l])));
        }
        real g = (diag[l + 1] - diag[l]) / (2.0L * e[l]);
        real r = std::hypot(g, 1.0L);
        g = diag[m] - diag[l] + e[l] / (g + std::copysign(r, g));
        real s = 1.0L, c = 1.0L, p = 0.0L;
        std::size_t i = m;
        bool deflated = false;
        while (i-- > l) {
          real f = s * e[i];
          const real b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0L) {
            diag[i + 1] -= p;
            e[m] = 0.0L;
            deflated = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = diag[i + 1] - p;
          r = (diag[i] - g) * s + 2.0L * c * b;
          p = s * r;
          diag[i + 1] = g + p;
          g = c * r - b;
          for (std::size_t k = 0; k < n; ++k) {
            f = z[k * n + i + 1];
            z[k * n + i + 1] = s * z[k * n + i] + c * f;
            z[k * n + i] = c * z[k * n + i] - s * f;
          }
        }
        if (deflated) continue;
        diag[l] -= p;
        e[l] = g;
        e[m] = 0.0L;
      }
    } while (m != l);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return diag[a] < diag[b]; });
  EigenSystem out;
  out.values.reserve(n);
  out.vectors.reserve(n);
  for (std::size_t j : order) {
    out.values.push_back(static_cast<double>(diag[j]));
    std::vector<double> v(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = static_cast<double>(z[k * n + j]);
    out.vectors.push_back(std::move(v));
  }
  return out;
}

}  // namespace apsym
