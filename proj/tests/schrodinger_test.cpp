#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "apsym/schrodinger.hpp"
#include "apsym/symmetry.hpp"

using namespace apsym;

namespace {

const double kSqrt2m1 = std::numbers::sqrt2 - 1.0;
const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;

Eigen::MatrixXd dense_matrix(const std::vector<double>& diag) {
  const auto n = static_cast<Eigen::Index>(diag.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, i) = diag[static_cast<std::size_t>(i)];
    if (i + 1 < n) a(i, i + 1) = a(i + 1, i) = 1.0;
  }
  return a;
}

Eigen::VectorXd oracle_eigenvalues(const std::vector<double>& diag) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_matrix(diag), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

std::vector<double> free_diag(std::int64_t N, double c = 0.0) {
  return std::vector<double>(static_cast<std::size_t>(2 * N + 1), c);
}

std::size_t count_in(const std::vector<double>& v, double lo, double hi) {
  return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [&](double x) { return x >= lo && x <= hi; }));
}

void expect_eigen_contract(const std::vector<double>& diag, const EigenSystem& es) {
  const std::size_t n = diag.size();
  ASSERT_EQ(es.values.size(), n);
  ASSERT_TRUE(std::is_sorted(es.values.begin(), es.values.end()));
  const Eigen::MatrixXd a = dense_matrix(diag);
  const double norm = a.norm();
  const Eigen::VectorXd ref = oracle_eigenvalues(diag);
  for (std::size_t j = 0; j < n; ++j) {
    EXPECT_NEAR(es.values[j], ref(static_cast<Eigen::Index>(j)), 1e-8 * std::max(1.0, norm));
    const Eigen::Map<const Eigen::VectorXd> v(es.vectors[j].data(), static_cast<Eigen::Index>(n));
    EXPECT_LE((a * v - es.values[j] * v).norm(), 1e-8 * norm);
    for (std::size_t k = j; k < n; ++k) {
      const Eigen::Map<const Eigen::VectorXd> w(es.vectors[k].data(), static_cast<Eigen::Index>(n));
      EXPECT_NEAR(v.dot(w), j == k ? 1.0 : 0.0, 1e-8);
    }
  }
}

}  // namespace

TEST(Truncate, Layout) {
  const auto [spec, g] = almost_mathieu_preset(2.0, kSqrt2m1, 0.1);
  const TruncatedOperator op = truncate(spec, g, 4);
  ASSERT_EQ(op.dim(), 9u);
  for (std::int64_t i = 0; i < 9; ++i) EXPECT_EQ(op.diagonal[static_cast<std::size_t>(i)], evaluate(spec, g, i - 4));
  const auto a = op.dense();
  EXPECT_EQ(a[0 * 9 + 1], 1.0);
  EXPECT_EQ(a[1 * 9 + 0], 1.0);
  EXPECT_EQ(a[0 * 9 + 2], 0.0);
  EXPECT_THROW(truncate(spec, g, 0), ValidationError);
}

TEST(Eigen, FreeThreeSites) {
  TruncatedOperator op;
  op.half_size = 1;
  op.diagonal = free_diag(1);
  const EigenSystem es = eigen(op);
  ASSERT_EQ(es.values.size(), 3u);
  EXPECT_NEAR(es.values[0], -std::numbers::sqrt2, 1e-10);
  EXPECT_NEAR(es.values[1], 0.0, 1e-10);
  EXPECT_NEAR(es.values[2], std::numbers::sqrt2, 1e-10);
}

TEST(Eigen, FreeClosedForm) {
  for (std::int64_t N : {1, 2, 5, 17, 40}) {
    TruncatedOperator op;
    op.half_size = N;
    op.diagonal = free_diag(N);
    const EigenSystem es = eigen(op);
    std::vector<double> expect;
    for (std::int64_t k = 1; k <= 2 * N + 1; ++k) {
      expect.push_back(2.0 * std::cos(static_cast<double>(k) * std::numbers::pi / static_cast<double>(2 * N + 2)));
    }
    std::sort(expect.begin(), expect.end());
    for (std::size_t j = 0; j < expect.size(); ++j) EXPECT_NEAR(es.values[j], expect[j], 1e-12);
  }
}

TEST(Eigen, ConstantShift) {
  TruncatedOperator free_op, shifted;
  free_op.diagonal = free_diag(10);
  shifted.diagonal = free_diag(10, 0.37);
  const auto a = eigen(free_op).values, b = eigen(shifted).values;
  for (std::size_t j = 0; j < a.size(); ++j) EXPECT_NEAR(b[j], a[j] + 0.37, 1e-12);
}

TEST(Eigen, MatchesDenseOracle) {
  // strongly diagonal-dominant alternating pattern
  std::vector<double> d;
  for (int n = -20; n <= 20; ++n) d.push_back(10.0 * n * (n % 2 == 0 ? 1.0 : -1.0));
  expect_eigen_contract(d, tridiagonal_eigen(d, std::vector<double>(d.size() - 1, 1.0)));

  const auto [spec, g] = almost_mathieu_preset(2.0, kSqrt2m1, 0.0);
  const auto op = truncate(spec, g, 30);
  expect_eigen_contract(op.diagonal, eigen(op));

  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<double> r(1 + rng() % 60);
    for (auto& x : r) x = u(rng);
    expect_eigen_contract(r, tridiagonal_eigen(r, std::vector<double>(r.size() - 1, 1.0)));
  }
}

TEST(Eigen, GeneralOffDiagonal) {
  const std::vector<double> d = {1.0, -2.0, 0.5, 3.0};
  const std::vector<double> e = {0.3, -1.2, 2.5};
  const EigenSystem es = tridiagonal_eigen(d, e);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(4, 4);
  for (int i = 0; i < 4; ++i) a(i, i) = d[static_cast<std::size_t>(i)];
  for (int i = 0; i < 3; ++i) a(i, i + 1) = a(i + 1, i) = e[static_cast<std::size_t>(i)];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(a);
  for (int j = 0; j < 4; ++j) EXPECT_NEAR(es.values[static_cast<std::size_t>(j)], ref.eigenvalues()(j), 1e-12);
  EXPECT_THROW(tridiagonal_eigen({1.0, 2.0}, {1.0, 1.0}), DimensionError);
  EXPECT_TRUE(tridiagonal_eigen({}, {}).values.empty());
}

TEST(Spectrum, EnclosureAlmostMathieu) {
  const auto [spec, g] = almost_mathieu_preset(2.0, kSqrt2m1, 0.0);
  const auto values = eigen(truncate(spec, g, 50)).values;
  EXPECT_TRUE(spectral_enclosure_holds(spec, values));
  EXPECT_GE(values.front(), -4.0);
  EXPECT_LE(values.back(), 4.0);
}

TEST(Spectrum, EnclosureOverHaarDraws) {
  const TrigSpec s({Term{Frequency::irrational(kSqrt2m1), 1.5}, Term{Frequency::irrational(kGolden), -0.6}});
  const HullModel h = TorusHull(s);
  for (std::uint64_t i = 0; i < 50; ++i) {
    const auto values = eigen(truncate(s, haar_sample(h, 3, i), 1 + static_cast<std::int64_t>(i))).values;
    EXPECT_TRUE(spectral_enclosure_holds(s, values));
  }
  EXPECT_FALSE(spectral_enclosure_holds(s, {4.2}));
}

// Adding two boundary sites moves each eigenvalue count by at most 2 (Cauchy interlacing).
TEST(Spectrum, InterlacingCounts) {
  const auto [spec, g] = almost_mathieu_preset(1.3, kGolden, 0.21);
  for (std::int64_t N = 5; N <= 40; N += 5) {
    const auto a = eigen(truncate(spec, g, N)).values;
    const auto b = eigen(truncate(spec, g, N + 1)).values;
    for (double lo = -3.5; lo < 3.5; lo += 0.25) {
      for (double hi : {lo + 0.1, lo + 0.7, lo + 2.0}) {
        const auto ca = static_cast<long>(count_in(a, lo, hi)), cb = static_cast<long>(count_in(b, lo, hi));
        EXPECT_LE(std::labs(ca - cb), 2) << "N " << N << " [" << lo << ", " << hi << "]";
      }
    }
  }
}

// translate(g, m) on [-N, N] has the same diagonal as g on [m - N, m + N].
TEST(Spectrum, TranslationCovariance) {
  const TrigSpec s({Term{Frequency::irrational(kSqrt2m1), 1.1}, Term{Frequency::rational(1, 5), 0.4}});
  const HullPoint g = HullPoint::from_turns({0.31, 0.2});
  const std::int64_t N = 25;
  for (std::int64_t m : {1, 7, -40, 1000}) {
    std::vector<double> window;
    for (std::int64_t n = m - N; n <= m + N; ++n) window.push_back(evaluate(s, g, n));
    const auto a = tridiagonal_eigen(window, std::vector<double>(window.size() - 1, 1.0)).values;
    const auto b = eigen(truncate(s, translate(s, g, m), N)).values;
    for (std::size_t j = 0; j < a.size(); ++j) EXPECT_NEAR(a[j], b[j], 1e-10);
  }
}

TEST(Parity, FreeOperatorCommutes) {
  const TrigSpec s({Term{Frequency::irrational(kSqrt2m1), 1e-300}});
  const auto rep = parity_check(s, HullPoint::zeros(1), 10);
  EXPECT_EQ(rep.commutator_norm, 0.0);
  EXPECT_TRUE(rep.ok);
}

TEST(Parity, AlmostMathieuEvenPhase) {
  const auto [spec, g] = almost_mathieu_preset(2.0, kSqrt2m1, 0.0);
  const auto rep = parity_check(spec, HullPoint::zeros(1), 30);
  EXPECT_TRUE(rep.ok);
  EXPECT_LE(rep.commutator_norm, 1e-10);
  EXPECT_LE(rep.max_parity_defect, 1e-8);
  EXPECT_EQ(rep.checked + rep.skipped, 61u);
  EXPECT_EQ(rep.skipped, 0u);
  EXPECT_EQ(rep.even + rep.odd, rep.checked);
  // P restricted to the 61 sites has trace 1, so even and odd counts differ by one
  EXPECT_EQ(rep.even, rep.odd + 1);
}

TEST(Parity, HalfTurnPhaseIsEven) {
  const TrigSpec s({Term{Frequency::irrational(kSqrt2m1), 1.0}, Term{Frequency::irrational(kGolden), 0.5}});
  const HullPoint g{{Turns::exact(1, 2), Turns::exact(0, 1)}};
  EXPECT_EQ(reflection_distance(s, g), 0.0);
  EXPECT_TRUE(parity_check(s, g, 20).ok);
}

TEST(Parity, OddPhaseRejected) {
  const auto [spec, g] = almost_mathieu_preset(2.0, kSqrt2m1, 0.3);
  EXPECT_THROW(parity_check(spec, g, 30), PreconditionError);
}

TEST(Preset, Examples) {
  const auto [s0, g0] = almost_mathieu_preset(2.0, kSqrt2m1, 0.0);
  EXPECT_EQ(reflection_distance(s0, g0), 0.0);
  const auto [s1, g1] = almost_mathieu_preset(2.0, kSqrt2m1, 0.25);
  EXPECT_DOUBLE_EQ(reflection_distance(s1, g1), 4.0);
  const auto [s2, g2] = almost_mathieu_preset(1.7, kGolden, 0.13);
  EXPECT_NEAR(evaluate(s2, g2, 0), 1.7 * std::cos(2.0 * std::numbers::pi * 0.13), 1e-15);
  EXPECT_EQ(s2.spec_class(), SpecClass::quasi_periodic);
  EXPECT_THROW(almost_mathieu_preset(0.0, kGolden, 0.0), ValidationError);
  EXPECT_THROW(almost_mathieu_preset(1.0, 0.5, 0.0), ValidationError);
}
