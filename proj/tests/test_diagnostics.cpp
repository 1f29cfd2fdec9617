#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "psdp/diagnostics.hpp"
#include "support.hpp"

namespace psdp {
namespace {

Projector ket(Complex a, Complex b) {
  Eigen::VectorXcd v(2);
  v << a, b;
  v.normalize();
  return {HermitianMatrix::from_hermitian_part(v * v.adjoint()), 1};
}

HermitianMatrix diag(const std::vector<double>& d) {
  Vector v(static_cast<Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) v[static_cast<Index>(i)] = d[i];
  return HermitianMatrix::diagonal(v);
}

TEST(Jordan, IdenticalProjectors) {
  const auto p = ket(1, 0);
  const auto d = jordan_decompose(p, p);
  ASSERT_EQ(d.blocks.size(), 1u);
  EXPECT_EQ(d.blocks[0].dim, 1);
  EXPECT_EQ(d.blocks[0].pi_rank, 1);
  EXPECT_EQ(d.blocks[0].delta_rank, 1);
  EXPECT_EQ(d.residual_space_dim, 1);
  const auto check = check_decomposition(d, p, p);
  EXPECT_EQ(check.total_dim, 2);
  EXPECT_LE(check.reconstruction_error, 1e-12);
}

TEST(Jordan, MaximallyTiltedPair) {
  const auto pi = ket(1, 0);
  const auto delta = ket(1, 1);
  const auto d = jordan_decompose(pi, delta);
  ASSERT_EQ(d.blocks.size(), 1u);
  EXPECT_EQ(d.blocks[0].dim, 2);
  EXPECT_EQ(d.residual_space_dim, 0);
  const auto check = check_decomposition(d, pi, delta);
  EXPECT_TRUE(check.block_ranks_ok);
  EXPECT_LE(check.invariance_residual, 1e-12);
  // Inside the block both projectors are rank one.
  const Matrix& basis = d.blocks[0].basis;
  for (const auto* p : {&pi, &delta}) {
    const Matrix restricted = basis.adjoint() * p->matrix.matrix() * basis;
    EXPECT_NEAR(restricted.trace().real(), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(restricted.determinant()), 0.0, 1e-12);
  }
}

TEST(Jordan, RandomProjectorsInDimensionEight) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const auto pi = random_projector(8, 3, rng);
    const auto delta = random_projector(8, 4, rng);
    const auto d = jordan_decompose(pi, delta);
    const auto check = check_decomposition(d, pi, delta);
    EXPECT_LE(check.invariance_residual, 1e-9);
    EXPECT_LE(check.gram_error, 1e-10);
    EXPECT_LE(check.reconstruction_error, 1e-9);
    EXPECT_EQ(check.total_dim, 8);
    EXPECT_TRUE(check.block_ranks_ok);
    for (const auto& b : d.blocks) {
      EXPECT_TRUE(b.dim == 1 || b.dim == 2);
      EXPECT_EQ(b.basis.cols(), b.dim);
    }
  }
}

TEST(Jordan, ValidatorOverRandomPairs) {
  const auto report = validate_jordan(100, 8, 5);
  EXPECT_LE(report.max_invariance_residual, 1e-9);
  EXPECT_LE(report.max_gram_error, 1e-10);
  EXPECT_LE(report.max_reconstruction_error, 1e-9);
  EXPECT_EQ(report.dimension_count_failures, 0);
  EXPECT_EQ(report.block_rank_failures, 0);
}

TEST(Jordan, PinchingIsMajorized) {
  // Compressing a PSD matrix onto the invariant blocks can only spread its
  // spectrum: partial sums of the sorted eigenvalues do not grow.
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 10; ++trial) {
    const auto pi = random_projector(6, 2, rng);
    const auto delta = random_projector(6, 3, rng);
    const auto d = jordan_decompose(pi, delta);
    const auto m = testing::random_psd(6, rng);
    Matrix pinched = Matrix::Zero(6, 6);
    for (const auto& b : d.blocks) {
      const Matrix proj = b.basis * b.basis.adjoint();
      pinched += proj * m.matrix() * proj;
    }
    if (d.residual_space_dim > 0) {
      const Matrix proj = d.residual_basis * d.residual_basis.adjoint();
      pinched += proj * m.matrix() * proj;
    }
    const auto orig = testing::charpoly_eigenvalues(m.matrix());
    const auto pin = testing::charpoly_eigenvalues(pinched);
    double so = 0, sp = 0;
    for (std::size_t k = 0; k < orig.size(); ++k) {
      so += orig[k];
      sp += pin[k];
      EXPECT_LE(sp, so + 1e-9);
    }
    EXPECT_NEAR(sp, so, 1e-9);
  }
}

TEST(MainLemma, ZeroARejected) {
  const auto c = LemmaConstants::make(0.1, 16);
  std::vector<double> d(16, 0.0);
  d[0] = 1.0;
  const auto s = evaluate_main_lemma(HermitianMatrix::zero(16), diag(d), c, std::pow(c.epsilon1, 9));
  EXPECT_TRUE(s.norm_hypothesis);
  EXPECT_FALSE(s.a_mass_hypothesis);
  EXPECT_FALSE(s.accepted());
}

TEST(MainLemma, CommutingPairByDirectCounting) {
  // For commuting pairs the A-mass and B-mass hypotheses together force
  // delta >= eps, so the pair below is only admissible with a loose delta.
  const auto c = LemmaConstants::make(0.1, 16);
  std::vector<double> b(16, 0.0), a(16, 0.0);
  b[0] = 1.0;
  b[1] = 1.0;
  b[2] = 0.9995;
  b[3] = 0.2;
  a[3] = 0.8;
  const auto loose = evaluate_main_lemma(diag(a), diag(b), c, 0.4);
  EXPECT_TRUE(loose.accepted());
  // A + B = diag(1, 1, 0.9995, 1, 0, ...).
  EXPECT_NEAR(loose.conclusion_rhs, (1 + 0.4 * 0.1) * 3.0, 1e-12);
  EXPECT_NEAR(loose.conclusion_lhs, 3.9995, 1e-12);
  EXPECT_GT(loose.margin(), 0.0);
  EXPECT_FALSE(evaluate_main_lemma(diag(a), diag(b), c, std::pow(c.epsilon1, 9)).accepted());
}

TEST(MainLemma, ValidatorFindsNoViolations) {
  const auto relaxed = validate_main_lemma(1000, 0.1, 1, LemmaMode::Relaxed, 16);
  EXPECT_GE(relaxed.accepted, 200);
  EXPECT_EQ(relaxed.violations, 0);
  ASSERT_TRUE(relaxed.min_margin.has_value());
  EXPECT_GT(*relaxed.min_margin, -1e-9);
  EXPECT_EQ(relaxed.delta, 1e-4);

  const auto strict = validate_main_lemma(1000, 0.1, 1, LemmaMode::Strict, 16);
  EXPECT_GT(strict.accepted, 0);
  EXPECT_EQ(strict.violations, 0);
  EXPECT_NEAR(strict.delta, std::pow(0.3 / std::log(16.0), 9), 1e-20);
}

TEST(MainLemma, DeterministicPerSeed) {
  const auto a = validate_main_lemma(60, 0.1, 9, LemmaMode::Relaxed);
  const auto b = validate_main_lemma(60, 0.1, 9, LemmaMode::Relaxed);
  EXPECT_EQ(a.accepted, b.accepted);
  EXPECT_EQ(a.min_margin, b.min_margin);
}

TEST(MainLemma, NoSamplesIsReported) {
  const auto r = validate_main_lemma(0, 0.1, 1, LemmaMode::Strict);
  EXPECT_TRUE(r.no_samples());
  EXPECT_FALSE(r.min_margin.has_value());
  EXPECT_THROW(validate_main_lemma(10, 1.5, 1, LemmaMode::Strict), Error);
}

TEST(TwoByTwo, ZeroPRejected) {
  const auto c = LemmaConstants::make(0.1, 16);
  const auto s = evaluate_2x2_lemma(HermitianMatrix::zero(2), diag({1.0, 0.3}), c);
  EXPECT_FALSE(s.p_mass_hypothesis);
  EXPECT_FALSE(s.accepted());
}

// Eigenvalues of [[1 + r cos^2, r cos sin], [r cos sin, b + r sin^2]].
std::pair<double, double> closed_form(double r, double theta, double b) {
  const double co = std::cos(theta), si = std::sin(theta);
  const double p = 1 + r * co * co, q = b + r * si * si, o = r * co * si;
  const double mean = 0.5 * (p + q);
  const double rad = std::sqrt(0.25 * (p - q) * (p - q) + o * o);
  return {mean + rad, mean - rad};
}

TEST(TwoByTwo, ClosedFormEigenvalues) {
  const auto c = LemmaConstants::make(0.1, 16);
  const double b = 0.4;
  // theta = pi/2 puts P on the second axis; P + Q stays diagonal.
  for (double r : {0.2, 0.55}) {
    const auto s = evaluate_2x2_lemma(diag({0.0, r}), diag({1.0, b}), c);
    EXPECT_NEAR(s.lambda2, std::min(1.0, b + r), 1e-15);
    EXPECT_FALSE(s.accepted());
  }
  for (double theta : {0.0, 0.3, 1.0, std::numbers::pi / 2 - 1e-3}) {
    const double r = 0.05;
    const Eigen::Vector2cd w(std::cos(theta), std::sin(theta));
    const Matrix p = r * (w * w.adjoint());
    const auto s = evaluate_2x2_lemma(HermitianMatrix::from_hermitian_part(p), diag({1.0, b}), c);
    EXPECT_NEAR(s.lambda2, closed_form(r, theta, b).second, 1e-14);
    EXPECT_NEAR(s.bound, 1 - std::pow(c.epsilon1, 3) / 9, 1e-15);
  }
}

TEST(TwoByTwo, ValidatorFindsNoViolations) {
  const auto r = validate_2x2_lemma(12000, 0.1, 3);
  EXPECT_GE(r.accepted, 1000);
  EXPECT_EQ(r.violations, 0);
  ASSERT_TRUE(r.min_margin.has_value());
  EXPECT_GT(*r.min_margin, -1e-12);
}

TEST(Constants, AmbientDimension) {
  const auto c = LemmaConstants::make(0.1, 16);
  EXPECT_NEAR(c.epsilon1, 0.3 / std::log(16.0), 1e-15);
  EXPECT_NEAR(c.eps_prime, c.epsilon0 / (1 + c.epsilon0), 1e-18);
  EXPECT_NEAR(LemmaConstants::make(0.1, 2).epsilon1, 0.3, 1e-15);
}

TEST(RandomUnitary, IsUnitary) {
  std::mt19937_64 rng(4);
  const Matrix u = random_unitary(5, rng);
  EXPECT_LE((u.adjoint() * u - Matrix::Identity(5, 5)).norm(), 1e-13);
  const auto p = random_projector(5, 2, rng);
  EXPECT_LE((p.matrix.matrix() * p.matrix.matrix() - p.matrix.matrix()).norm(), 1e-13);
  EXPECT_NEAR(p.matrix.trace(), 2.0, 1e-13);
}

}  // namespace
}  // namespace psdp
