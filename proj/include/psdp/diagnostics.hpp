#pragma once

// Numeric validators for the spectral facts behind the phase-length analysis:
// the two-projector (Jordan) decomposition, the eigenvalue-mass lemma and the
// 2x2 second-eigenvalue lemma. The lemma validators sample configurations,
// keep the ones that meet every hypothesis exactly as stated, and count
// conclusion failures among them.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "psdp/spectra.hpp"

namespace psdp {

struct JordanBlock {
  Matrix basis;  // n x dim, orthonormal columns
  Index dim = 1;
  Index pi_rank = 0;
  Index delta_rank = 0;
};

struct TwoProjectorDecomposition {
  Index dim = 0;
  std::vector<JordanBlock> blocks;
  Matrix residual_basis;  // W: both projectors vanish here
  Index residual_space_dim = 0;
};

namespace detail {

inline Matrix range_basis(const HermitianMatrix& p) {
  const auto dec = eigh(p);
  const Index rank = count_at_least(dec.values, 0.5, 0.0);
  return dec.vectors.leftCols(rank);
}

}  // namespace detail

/// Splits the space into 1- and 2-dimensional subspaces invariant under both
/// projectors. The blocks meeting range(Π) come from the eigenvectors x of
/// Π Δ Π on range(Π): x alone when Δ x is parallel to x, otherwise
/// span{x, Δx - c^2 x}. On the orthogonal complement Π vanishes and Δ is
/// diagonalized directly.
inline TwoProjectorDecomposition jordan_decompose(const Projector& pi, const Projector& delta) {
  if (pi.dim() != delta.dim()) fail(ErrorKind::DimensionMismatch, "projectors differ in size");
  const Index n = pi.dim();
  const Matrix& dm = delta.matrix.matrix();
  TwoProjectorDecomposition out;
  out.dim = n;

  const Matrix u_pi = detail::range_basis(pi.matrix);
  Matrix collected(n, 0);
  auto append = [&](const Matrix& cols) {
    Matrix next(n, collected.cols() + cols.cols());
    next << collected, cols;
    collected = std::move(next);
  };

  if (u_pi.cols() > 0) {
    const auto compressed = eigh(HermitianMatrix::from_hermitian_part(u_pi.adjoint() * dm * u_pi));
    for (Index j = 0; j < compressed.dim(); ++j) {
      const Eigen::VectorXcd x = u_pi * compressed.vectors.col(j);
      const double c2 = std::clamp(compressed.values[j], 0.0, 1.0);
      const Eigen::VectorXcd residual = dm * x - c2 * x;
      const double s = residual.norm();
      JordanBlock block;
      block.pi_rank = 1;
      if (s <= 1e-10) {
        block.basis = x;
        block.dim = 1;
        block.delta_rank = c2 > 0.5 ? 1 : 0;
      } else {
        block.basis.resize(n, 2);
        block.basis.col(0) = x;
        block.basis.col(1) = residual / s;
        block.dim = 2;
        block.delta_rank = 1;
      }
      append(block.basis);
      out.blocks.push_back(std::move(block));
    }
  }

  // Orthonormal basis of the complement of everything collected so far.
  const Matrix rest = Matrix::Identity(n, n) - collected * collected.adjoint();
  const Matrix k = detail::range_basis(HermitianMatrix::from_hermitian_part(rest));
  if (k.cols() > 0) {
    const auto on_rest = eigh(HermitianMatrix::from_hermitian_part(k.adjoint() * dm * k));
    const Index delta_rank = count_at_least(on_rest.values, 0.5, 0.0);
    for (Index j = 0; j < delta_rank; ++j) {
      JordanBlock block;
      block.basis = k * on_rest.vectors.col(j);
      block.dim = 1;
      block.pi_rank = 0;
      block.delta_rank = 1;
      out.blocks.push_back(std::move(block));
    }
    out.residual_basis = k * on_rest.vectors.rightCols(on_rest.dim() - delta_rank);
  } else {
    out.residual_basis = Matrix(n, 0);
  }
  out.residual_space_dim = out.residual_basis.cols();
  return out;
}

struct JordanCheck {
  double gram_error = 0.0;          // ||B^H B - I|| over all blocks plus W
  double invariance_residual = 0.0; // max ||(I - B B^H) P B|| for P in {Π, Δ}
  double reconstruction_error = 0.0;
  Index total_dim = 0;
  bool block_ranks_ok = true;       // every 2-dim block has rank-one Π and Δ
};

inline JordanCheck check_decomposition(const TwoProjectorDecomposition& d, const Projector& pi,
                                       const Projector& delta) {
  const Index n = d.dim;
  JordanCheck out;
  Matrix all(n, 0);
  Matrix pi_rebuilt = Matrix::Zero(n, n);
  Matrix delta_rebuilt = Matrix::Zero(n, n);
  for (const auto& block : d.blocks) {
    const Matrix& b = block.basis;
    Matrix next(n, all.cols() + b.cols());
    next << all, b;
    all = std::move(next);
    const Matrix outside = Matrix::Identity(n, n) - b * b.adjoint();
    for (const Matrix* p : {&pi.matrix.matrix(), &delta.matrix.matrix()}) {
      out.invariance_residual = std::max(out.invariance_residual, (outside * (*p) * b).norm());
    }
    const Matrix pi_local = b.adjoint() * pi.matrix.matrix() * b;
    const Matrix delta_local = b.adjoint() * delta.matrix.matrix() * b;
    pi_rebuilt += b * pi_local * b.adjoint();
    delta_rebuilt += b * delta_local * b.adjoint();
    if (block.dim == 2) {
      const double pi_trace = pi_local.trace().real();
      const double delta_trace = delta_local.trace().real();
      if (std::abs(pi_trace - 1.0) > 1e-8 || std::abs(delta_trace - 1.0) > 1e-8) out.block_ranks_ok = false;
    }
  }
  if (d.residual_basis.cols() > 0) {
    Matrix next(n, all.cols() + d.residual_basis.cols());
    next << all, d.residual_basis;
    all = std::move(next);
    for (const Matrix* p : {&pi.matrix.matrix(), &delta.matrix.matrix()}) {
      out.reconstruction_error = std::max(out.reconstruction_error, ((*p) * d.residual_basis).norm());
    }
  }
  out.total_dim = all.cols();
  out.gram_error = all.cols() == 0 ? 0.0 : (all.adjoint() * all - Matrix::Identity(all.cols(), all.cols())).norm();
  out.reconstruction_error = std::max({out.reconstruction_error, (pi_rebuilt - pi.matrix.matrix()).norm(),
                                       (delta_rebuilt - delta.matrix.matrix()).norm()});
  return out;
}

/// Haar-distributed n x n unitary.
inline Matrix random_unitary(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) {
      const double re = gauss(rng);
      g(i, j) = Complex(re, gauss(rng));
    }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

/// Random projector of the given rank in dimension n.
inline Projector random_projector(Index n, Index rank, std::mt19937_64& rng) {
  const Matrix u = random_unitary(n, rng).leftCols(rank);
  return Projector{HermitianMatrix::from_hermitian_part(u * u.adjoint()), rank};
}

/// Constants of the lemma family at ambient dimension n.
struct LemmaConstants {
  double epsilon = 0.1;
  double epsilon0 = 0.0;
  double epsilon1 = 0.0;
  double eps_prime = 0.0;

  static LemmaConstants make(double epsilon, Index n) {
    LemmaConstants c;
    c.epsilon = epsilon;
    const double ln_eff = std::max(std::log(static_cast<double>(n)), 1.0);
    c.epsilon0 = epsilon * epsilon / (ln_eff * ln_eff);
    c.epsilon1 = 3.0 * epsilon / ln_eff;
    c.eps_prime = c.epsilon0 / (1.0 + c.epsilon0);
    return c;
  }
};

namespace detail {

// Membership in the ">= 1" eigenspaces allows this much rounding.
inline constexpr double kUnitBand = 1e-12;

struct UnitSplit {
  SpectralDecomposition dec;
  Index rank = 0;  // eigenvalues >= 1
};

inline UnitSplit unit_split(const HermitianMatrix& a) {
  UnitSplit s{eigh(a), 0};
  s.rank = count_at_least(s.dec.values, 1.0, kUnitBand);
  return s;
}

// tr(Π m) where Π projects onto the leading `rank` eigenvectors in `dec`.
inline double projected_trace(const UnitSplit& s, const HermitianMatrix& m) {
  const auto basis = s.dec.vectors.leftCols(s.rank);
  return (basis.adjoint() * m.matrix() * basis).trace().real();
}

}  // namespace detail

enum class LemmaMode { Strict, Relaxed };

inline std::string_view to_string(LemmaMode m) { return m == LemmaMode::Strict ? "strict" : "relaxed"; }

struct MainLemmaSample {
  HermitianMatrix A;
  HermitianMatrix B;
  bool norm_hypothesis = false;       // ||A+B|| <= 1+eps1 and ||B|| >= 1
  bool a_mass_hypothesis = false;     // tr Π^{A+B} A >= eps tr Π^{A+B}(A+B)
  bool b_mass_hypothesis = false;     // tr Π^B B >= (1 - delta) tr Π^{A+B}(A+B)
  double conclusion_lhs = 0.0;        // N_{1-eps'}(A+B)
  double conclusion_rhs = 0.0;        // (1 + 2eps/5) N(A+B)

  bool accepted() const { return norm_hypothesis && a_mass_hypothesis && b_mass_hypothesis; }
  double margin() const { return conclusion_lhs - conclusion_rhs; }
};

/// Evaluates every hypothesis and both sides of the conclusion for (A, B).
/// `delta` replaces eps1^9 in the B-mass hypothesis.
inline MainLemmaSample evaluate_main_lemma(const HermitianMatrix& a, const HermitianMatrix& b,
                                           const LemmaConstants& c, double delta) {
  MainLemmaSample s;
  s.A = a;
  s.B = b;
  const auto sum = a + b;
  const auto split_sum = detail::unit_split(sum);
  const auto split_b = detail::unit_split(b);
  s.norm_hypothesis = split_sum.dec.max() <= 1.0 + c.epsilon1 && split_b.dec.max() >= 1.0 - detail::kUnitBand;
  const double top_mass = split_sum.dec.values.head(split_sum.rank).sum();
  s.a_mass_hypothesis = detail::projected_trace(split_sum, a) >= c.epsilon * top_mass;
  s.b_mass_hypothesis = split_b.dec.values.head(split_b.rank).sum() >= (1.0 - delta) * top_mass;
  s.conclusion_lhs = eigenvalue_mass(split_sum.dec.values, 1.0 - c.eps_prime, detail::kUnitBand);
  s.conclusion_rhs = (1.0 + 0.4 * c.epsilon) * top_mass;
  return s;
}

struct LemmaReport {
  std::string lemma;
  LemmaMode mode = LemmaMode::Strict;
  long trials = 0;
  long accepted = 0;
  long violations = 0;
  std::optional<double> min_margin;  // empty when nothing was accepted
  double epsilon = 0.0;
  Index n = 0;
  double delta = 0.0;  // the mass-hypothesis slack actually used
  std::uint64_t seed = 0;

  double acceptance_rate() const { return trials > 0 ? static_cast<double>(accepted) / static_cast<double>(trials) : 0.0; }
  bool no_samples() const { return accepted == 0; }
};

namespace detail {

// Rank-one P = r w w^H in the frame where Q = diag(1, b), with r solved so
// that lambda_max(P + Q) = top. Requires top >= 1 > b.
inline double rank_one_weight(double b, double cos2, double top) {
  const double sin2 = 1.0 - cos2;
  const double denom = (1.0 - top) * sin2 + (b - top) * cos2;
  if (denom == 0.0) return 0.0;
  return std::max(0.0, -(1.0 - top) * (b - top) / denom);
}

inline Matrix rank_one(double r, double cos2, double phase) {
  Eigen::Vector2cd w(std::sqrt(cos2), std::polar(std::sqrt(std::max(0.0, 1.0 - cos2)), phase));
  return r * (w * w.adjoint());
}

// A = S - diag(1, b) where S has eigenvalues top = 1 + tau and 1 - sigma and
// its top eigenvector leans toward the second axis. Empty if A is not PSD.
inline std::optional<Matrix> tilted_block(double bottom, double top, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double tau = top - 1.0;
  const double v2 = 0.1 + 0.9 * unit(rng);  // |v_2|^2
  const double v1 = 1.0 - v2;
  const double sigma = tau * v1 / v2 * unit(rng);
  const double phase = 2.0 * std::numbers::pi * unit(rng);
  Eigen::Vector2cd v(std::sqrt(v1), std::polar(std::sqrt(v2), phase));
  Eigen::Vector2cd u(-std::conj(v[1]), std::conj(v[0]));
  Matrix s = top * (v * v.adjoint()) + (1.0 - sigma) * (u * u.adjoint());
  s(0, 0) -= 1.0;
  s(1, 1) -= bottom;
  const auto dec = eigh(HermitianMatrix::from_hermitian_part(s));
  if (dec.min() < 0.0) return std::nullopt;
  return s;
}

// Block-diagonal pair assembled from 2x2 tilted blocks and 1x1 blocks, then
// rotated by a Haar unitary.
inline std::pair<HermitianMatrix, HermitianMatrix> planted_pair(Index n, double delta, const LemmaConstants& c,
                                                                std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Matrix a = Matrix::Zero(n, n);
  Matrix b = Matrix::Zero(n, n);
  const Index max_pairs = n / 2;
  const Index pairs = 1 + static_cast<Index>(unit(rng) * static_cast<double>(max_pairs));
  Index pos = 0;
  for (Index k = 0; k < std::min(pairs, max_pairs); ++k, pos += 2) {
    const double bottom = unit(rng);
    const double top = 1.0 + delta * std::pow(10.0, -3.0 * unit(rng)) * unit(rng);
    b(pos, pos) = 1.0;
    b(pos + 1, pos + 1) = bottom;
    if (unit(rng) < 0.5) {
      if (auto tilted = tilted_block(bottom, top, rng)) {
        a.block(pos, pos, 2, 2) = *tilted;
        continue;
      }
    }
    const double cos2 = std::pow(10.0, -14.0 * unit(rng));
    const double r = rank_one_weight(bottom, cos2, top);
    a.block(pos, pos, 2, 2) = rank_one(r, cos2, 2.0 * std::numbers::pi * unit(rng));
  }
  for (; pos < n; ++pos) {
    // Either a direction B keeps at the unit level or one below it.
    b(pos, pos) = unit(rng) < 0.3 ? 1.0 : unit(rng) * (1.0 - c.eps_prime);
  }
  const Matrix w = random_unitary(n, rng);
  return {HermitianMatrix::from_hermitian_part(w * a * w.adjoint()),
          HermitianMatrix::from_hermitian_part(w * b * w.adjoint())};
}

// A = s G G^H, B = Q + shift with ||B|| >= 1, and s chosen by bisection so
// that ||A + B|| lands inside (||B||, 1 + eps1].
inline std::pair<HermitianMatrix, HermitianMatrix> generic_pair(Index n, const LemmaConstants& c,
                                                                std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto gaussian = [&](Index cols) {
    Matrix g(n, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < n; ++i) {
        const double re = gauss(rng);
        g(i, j) = Complex(re, gauss(rng));
      }
    return g;
  };
  const Index a_rank = 1 + static_cast<Index>(unit(rng) * static_cast<double>(n));
  const Matrix ga = gaussian(std::min(a_rank, n));
  const Matrix gq = gaussian(n);
  const auto q_dec = eigh(HermitianMatrix::from_hermitian_part(gq * gq.adjoint()));
  const double b_top = 1.0 + 0.5 * c.epsilon1 * unit(rng);
  const auto b = q_dec.apply([&](double x) { return x / q_dec.max() * b_top; });
  const auto gram = HermitianMatrix::from_hermitian_part(ga * ga.adjoint());
  const double target = b_top + (1.0 + c.epsilon1 - b_top) * unit(rng);
  double lo = 0.0, hi = 1.0;
  while (spectral_norm(hi * gram + b) < target && hi < 1e6) hi *= 2.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (spectral_norm(mid * gram + b) > target ? hi : lo) = mid;
  }
  return {lo * gram, b};
}

}  // namespace detail

/// Samples (A, B) pairs, alternating planted block configurations with
/// generic Wishart pairs, and checks the eigenvalue-mass conclusion on every
/// pair that satisfies all hypotheses. Strict mode uses delta = eps1^9;
/// relaxed mode uses the supplied delta.
inline LemmaReport validate_main_lemma(long trials, double epsilon, std::uint64_t seed, LemmaMode mode,
                                       Index n = 16, double relaxed_delta = 1e-4) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) fail(ErrorKind::InvalidArgument, "epsilon must lie in (0, 1)");
  if (n < 2) fail(ErrorKind::InvalidArgument, "dimension must be at least 2");
  const auto c = LemmaConstants::make(epsilon, n);
  LemmaReport report;
  report.lemma = "mainlemma";
  report.mode = mode;
  report.trials = trials;
  report.epsilon = epsilon;
  report.n = n;
  report.seed = seed;
  report.delta = mode == LemmaMode::Strict ? std::pow(c.epsilon1, 9) : relaxed_delta;
  for (long trial = 0; trial < trials; ++trial) {
    std::mt19937_64 rng(seed ^ static_cast<std::uint64_t>(trial));
    const auto [a, b] = trial % 2 == 0 ? detail::planted_pair(n, report.delta, c, rng) : detail::generic_pair(n, c, rng);
    const auto sample = evaluate_main_lemma(a, b, c, report.delta);
    if (!sample.accepted()) continue;
    ++report.accepted;
    const double margin = sample.margin();
    report.min_margin = report.min_margin ? std::min(*report.min_margin, margin) : margin;
    if (margin <= -1e-9) ++report.violations;
  }
  return report;
}

struct TwoByTwoSample {
  bool norm_hypothesis = false;   // ||Q|| >= 1, ||P+Q|| <= 1+eps1, lambda_2(P+Q) < 1
  bool p_mass_hypothesis = false; // tr Π^{P+Q} P >= eps^2 tr Π^{P+Q}(P+Q)
  bool q_mass_hypothesis = false; // tr Π^Q Q >= (1 - eps1^8) tr Π^{P+Q}(P+Q)
  double lambda2 = 0.0;
  double bound = 0.0;             // 1 - eps1^3 / 9

  bool accepted() const { return norm_hypothesis && p_mass_hypothesis && q_mass_hypothesis; }
  double margin() const { return lambda2 - bound; }
};

inline TwoByTwoSample evaluate_2x2_lemma(const HermitianMatrix& p, const HermitianMatrix& q, const LemmaConstants& c) {
  if (p.dim() != 2 || q.dim() != 2) fail(ErrorKind::DimensionMismatch, "2x2 lemma needs 2x2 matrices");
  TwoByTwoSample s;
  const auto sum = p + q;
  const auto split_sum = detail::unit_split(sum);
  const auto split_q = detail::unit_split(q);
  s.lambda2 = split_sum.dec.values[1];
  s.bound = 1.0 - std::pow(c.epsilon1, 3) / 9.0;
  s.norm_hypothesis = split_q.dec.max() >= 1.0 - detail::kUnitBand && split_sum.dec.max() <= 1.0 + c.epsilon1 &&
                      s.lambda2 < 1.0 - detail::kUnitBand;
  const double top_mass = split_sum.dec.values.head(split_sum.rank).sum();
  s.p_mass_hypothesis = detail::projected_trace(split_sum, p) >= c.epsilon * c.epsilon * top_mass;
  s.q_mass_hypothesis =
      split_q.dec.values.head(split_q.rank).sum() >= (1.0 - std::pow(c.epsilon1, 8)) * top_mass;
  return s;
}

/// Samples 2x2 pairs in the reduced frame (P rank one, Q = diag(1, b)),
/// optionally lifts P to full rank along the complement of the top
/// eigenvector of P + Q, rotates by a random unitary, and checks
/// lambda_2(P+Q) > 1 - eps1^3/9 on every pair meeting the hypotheses.
/// eps1 = 3 eps / ln n for the ambient dimension n.
inline LemmaReport validate_2x2_lemma(long trials, double epsilon, std::uint64_t seed, Index n = 16) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) fail(ErrorKind::InvalidArgument, "epsilon must lie in (0, 1)");
  const auto c = LemmaConstants::make(epsilon, n);
  LemmaReport report;
  report.lemma = "lemma2x2";
  report.mode = LemmaMode::Strict;
  report.trials = trials;
  report.epsilon = epsilon;
  report.n = n;
  report.seed = seed;
  report.delta = std::pow(c.epsilon1, 8);
  const double top_span = 1.0 / (1.0 - report.delta) - 1.0;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (long trial = 0; trial < trials; ++trial) {
    std::mt19937_64 rng(seed ^ static_cast<std::uint64_t>(trial));
    const double bottom = unit(rng);
    const double cos2 = std::pow(10.0, -16.0 * unit(rng));
    const double top = 1.0 + 1.25 * top_span * unit(rng);
    const double r = detail::rank_one_weight(bottom, cos2, top);
    Matrix p = detail::rank_one(r, cos2, 2.0 * std::numbers::pi * unit(rng));
    Matrix q = Matrix::Zero(2, 2);
    q(0, 0) = 1.0;
    q(1, 1) = bottom;
    if (unit(rng) < 0.5) {
      const auto dec = eigh(HermitianMatrix::from_hermitian_part(p + q));
      const double room = std::max(0.0, 1.0 - dec.values[1]);
      const Eigen::Vector2cd v = dec.vectors.col(1);
      p += (room * unit(rng)) * (v * v.adjoint());
    }
    const Matrix w = random_unitary(2, rng);
    const auto sample = evaluate_2x2_lemma(HermitianMatrix::from_hermitian_part(w * p * w.adjoint()),
                                           HermitianMatrix::from_hermitian_part(w * q * w.adjoint()), c);
    if (!sample.accepted()) continue;
    ++report.accepted;
    const double margin = sample.margin();
    report.min_margin = report.min_margin ? std::min(*report.min_margin, margin) : margin;
    if (margin <= -1e-12) ++report.violations;
  }
  return report;
}

struct JordanReport {
  long trials = 0;
  Index max_dim = 0;
  std::uint64_t seed = 0;
  double max_invariance_residual = 0.0;
  double max_gram_error = 0.0;
  double max_reconstruction_error = 0.0;
  long dimension_count_failures = 0;
  long block_rank_failures = 0;
};

/// Random projector pairs of random ranks in dimensions 2..max_dim.
inline JordanReport validate_jordan(long trials, Index max_dim, std::uint64_t seed) {
  if (max_dim < 2) fail(ErrorKind::InvalidArgument, "max_dim must be at least 2");
  JordanReport report;
  report.trials = trials;
  report.max_dim = max_dim;
  report.seed = seed;
  for (long trial = 0; trial < trials; ++trial) {
    std::mt19937_64 rng(seed ^ static_cast<std::uint64_t>(trial));
    std::uniform_int_distribution<Index> dim_dist(2, max_dim);
    const Index n = dim_dist(rng);
    std::uniform_int_distribution<Index> rank_dist(0, n);
    const Index r1 = rank_dist(rng);
    const Index r2 = rank_dist(rng);
    const auto pi = random_projector(n, r1, rng);
    const auto delta = random_projector(n, r2, rng);
    const auto d = jordan_decompose(pi, delta);
    const auto check = check_decomposition(d, pi, delta);
    report.max_invariance_residual = std::max(report.max_invariance_residual, check.invariance_residual);
    report.max_gram_error = std::max(report.max_gram_error, check.gram_error);
    report.max_reconstruction_error = std::max(report.max_reconstruction_error, check.reconstruction_error);
    if (check.total_dim != n) ++report.dimension_count_failures;
    if (!check.block_ranks_ok) ++report.block_rank_failures;
  }
  return report;
}

}  // namespace psdp
