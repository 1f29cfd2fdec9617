#pragma once

// Reduction of a general positive SDP to special form and the pullback of
// special-form solutions to the original instance.
//
// Stages: drop constraints with b_i = 0 or with support outside supp(C),
// normalize A'_i = C^{-1/2} A_i C^{-1/2} / b_i, pad to m >= n by repeating the
// first retained constraint, clip the spectrum of each A'_i into
// [eps*beta/m, beta*m/eps] (values below the floor become 0), and finally
// divide by t = max_i ||A''_i||.

#include <string>
#include <utility>
#include <vector>

#include "psdp/instance.hpp"

namespace psdp {

struct TransformRecord {
  Index n = 0;
  Index original_m = 0;
  double epsilon = 0.0;
  HermitianMatrix C_inv_sqrt;
  std::vector<Index> removed_constraints;
  std::vector<Index> retained_constraints;
  Index padding = 0;
  double beta = 0.0;
  double clip_hi = 0.0;
  double clip_lo = 0.0;
  double scale_t = 0.0;
  // One entry per retained constraint: eigenbasis and eigenvalues of A'_i.
  std::vector<Matrix> eigbases;
  std::vector<Vector> normalized_eigenvalues;

  Index special_m() const { return static_cast<Index>(retained_constraints.size()) + padding; }

  /// Original constraint index behind special-form constraint `s`.
  Index original_index(Index s) const {
    const auto k = static_cast<std::size_t>(s);
    return k < retained_constraints.size() ? retained_constraints[k] : retained_constraints.front();
  }

  /// Retained slot (index into eigbases) behind special-form constraint `s`.
  std::size_t slot(Index s) const {
    const auto k = static_cast<std::size_t>(s);
    return k < retained_constraints.size() ? k : 0;
  }

  friend bool operator==(const TransformRecord&, const TransformRecord&) = default;
};

struct PullbackResult {
  HermitianMatrix X;
  double objective = 0.0;
  double factor_bound = 0.0;
  double min_residual = 0.0;  // min_i tr(A_i X) - b_i over retained constraints
};

/// Feasibility tolerance for general-form constraints.
inline double general_feas_tol(const PositiveSdpInstance& inst) {
  double max_b = 0.0;
  for (double v : inst.b) max_b = std::max(max_b, v);
  return 1e-7 * (1.0 + max_b);
}

inline constexpr double kSpecialFeasTol = 1e-7;

inline Vector clip_spectrum(const Vector& values, double clip_lo, double clip_hi) {
  Vector out = values;
  for (Index j = 0; j < out.size(); ++j) {
    if (out[j] > clip_hi) out[j] = clip_hi;
    else if (out[j] < clip_lo) out[j] = 0.0;
  }
  return out;
}

namespace detail {

inline HermitianMatrix from_eigen(const Matrix& basis, const Vector& values) {
  return HermitianMatrix::from_hermitian_part(basis * values.cast<Complex>().asDiagonal() * basis.adjoint());
}

template <class F>
PositiveSdpInstance unit_rhs_instance(const TransformRecord& rec, F&& matrix_for_slot, const std::string& name) {
  PositiveSdpInstance out;
  out.C = HermitianMatrix::identity(rec.n);
  for (Index s = 0; s < rec.special_m(); ++s) {
    out.A.push_back(matrix_for_slot(rec.slot(s)));
    out.b.push_back(1.0);
  }
  out.metadata.name = name;
  return out;
}

}  // namespace detail

/// A'_i for retained slot k.
inline HermitianMatrix normalized_matrix(const TransformRecord& rec, std::size_t k) {
  return detail::from_eigen(rec.eigbases.at(k), rec.normalized_eigenvalues.at(k));
}

/// A''_i for retained slot k.
inline HermitianMatrix clipped_matrix(const TransformRecord& rec, std::size_t k) {
  return detail::from_eigen(rec.eigbases.at(k), clip_spectrum(rec.normalized_eigenvalues.at(k), rec.clip_lo, rec.clip_hi));
}

/// Â_i for retained slot k.
inline HermitianMatrix special_matrix(const TransformRecord& rec, std::size_t k) {
  return detail::from_eigen(rec.eigbases.at(k),
                            clip_spectrum(rec.normalized_eigenvalues.at(k), rec.clip_lo, rec.clip_hi) / rec.scale_t);
}

/// The normalized program P' (objective tr X, all right-hand sides 1), padded.
inline PositiveSdpInstance normalized_instance(const TransformRecord& rec) {
  return detail::unit_rhs_instance(rec, [&](std::size_t k) { return normalized_matrix(rec, k); }, "normalized");
}

/// The clipped program P'' (objective tr X, all right-hand sides 1), padded.
inline PositiveSdpInstance clipped_instance(const TransformRecord& rec) {
  return detail::unit_rhs_instance(rec, [&](std::size_t k) { return clipped_matrix(rec, k); }, "clipped");
}

inline SpecialFormInstance special_instance(const TransformRecord& rec) {
  SpecialFormInstance out;
  for (Index s = 0; s < rec.special_m(); ++s) out.A.push_back(special_matrix(rec, rec.slot(s)));
  const double m = static_cast<double>(rec.special_m());
  out.gamma = m * m / (rec.epsilon * rec.epsilon);
  return out;
}

inline std::pair<SpecialFormInstance, TransformRecord> to_special_form(const PositiveSdpInstance& inst,
                                                                       double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) fail(ErrorKind::InvalidArgument, "epsilon must lie in (0, 1)");
  validate(inst);
  const Index n = inst.n();

  TransformRecord rec;
  rec.n = n;
  rec.original_m = inst.m();
  rec.epsilon = epsilon;

  const auto c_dec = eigh(inst.C);
  const double support_cut = tol::psd(c_dec.norm());
  const Index support = count_at_least(c_dec.values, support_cut, 0.0);
  const auto support_basis = c_dec.vectors.leftCols(support);
  const auto kernel_basis = c_dec.vectors.rightCols(n - support);
  Vector inv_sqrt = c_dec.values.head(support).cwiseSqrt().cwiseInverse();
  rec.C_inv_sqrt = detail::from_eigen(support_basis, inv_sqrt);

  for (Index i = 0; i < inst.m(); ++i) {
    const auto& a = inst.A[static_cast<std::size_t>(i)];
    const double b = inst.b[static_cast<std::size_t>(i)];
    if (b == 0.0) {
      rec.removed_constraints.push_back(i);
      continue;
    }
    const double a_norm = spectral_norm(a);
    if (a_norm <= tol::psd(0.0)) {
      fail(ErrorKind::InfeasibleStructure, "A[" + std::to_string(i) + "] is zero but b[" + std::to_string(i) +
                                               "] > 0; the primal constraint cannot be met");
    }
    if (support < n) {
      const auto kernel_part =
          HermitianMatrix::from_hermitian_part(kernel_basis.adjoint() * a.matrix() * kernel_basis);
      if (eigh(kernel_part).max() > tol::psd(a_norm)) {
        // Satisfiable at zero cost inside ker(C).
        rec.removed_constraints.push_back(i);
        continue;
      }
    }
    rec.retained_constraints.push_back(i);
  }
  if (rec.retained_constraints.empty()) {
    fail(ErrorKind::AllConstraintsTrivial, "every constraint is trivially satisfiable");
  }

  rec.beta = std::numeric_limits<double>::infinity();
  for (Index i : rec.retained_constraints) {
    const auto& a = inst.A[static_cast<std::size_t>(i)];
    const double b = inst.b[static_cast<std::size_t>(i)];
    const Matrix& s = rec.C_inv_sqrt.matrix();
    const auto normalized = HermitianMatrix::from_hermitian_part(s * a.matrix() * s / b);
    auto dec = eigh(normalized);
    for (Index j = 0; j < dec.dim(); ++j) dec.values[j] = std::max(dec.values[j], 0.0);
    rec.beta = std::min(rec.beta, dec.max());
    rec.eigbases.push_back(std::move(dec.vectors));
    rec.normalized_eigenvalues.push_back(std::move(dec.values));
  }
  if (!(rec.beta > 0.0)) fail(ErrorKind::InfeasibleStructure, "a normalized constraint matrix vanished");

  const Index retained = static_cast<Index>(rec.retained_constraints.size());
  rec.padding = std::max<Index>(0, n - retained);
  const double m = static_cast<double>(rec.special_m());
  rec.clip_hi = rec.beta * m / epsilon;
  rec.clip_lo = epsilon * rec.beta / m;

  rec.scale_t = 0.0;
  for (const auto& values : rec.normalized_eigenvalues) {
    rec.scale_t = std::max(rec.scale_t, clip_spectrum(values, rec.clip_lo, rec.clip_hi).maxCoeff());
  }

  SpecialFormInstance special = special_instance(rec);
  special.metadata.name = inst.metadata.name.empty() ? "special" : inst.metadata.name + "-special";
  special.metadata.seed = inst.metadata.seed;
  special.metadata.provenance = "transform epsilon=" + std::to_string(epsilon);
  validate(special);
  return {std::move(special), std::move(rec)};
}

/// Maps a feasible special-form primal X̂ to a feasible primal for `inst`.
/// tr(C X) equals tr(X̂)/t, so a (1+eps)-optimal X̂ yields objective within
/// (1+eps)^2 of opt(P).
inline PullbackResult pull_back(const HermitianMatrix& x_hat, const TransformRecord& rec,
                                const PositiveSdpInstance& inst) {
  if (x_hat.dim() != rec.n || inst.n() != rec.n) fail(ErrorKind::DimensionMismatch, "pull_back dimension mismatch");
  if (!is_psd(x_hat)) fail(ErrorKind::InfeasibleInput, "X_hat is not PSD");
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < rec.retained_constraints.size(); ++k) {
    worst = std::min(worst, trace_product(special_matrix(rec, k), x_hat));
  }
  if (worst < 1.0 - kSpecialFeasTol) {
    fail(ErrorKind::InfeasibleInput,
         "X_hat violates a special-form constraint (min tr(A_i X) = " + std::to_string(worst) + ")");
  }
  // Promote to exact feasibility when X_hat sits inside the tolerance band.
  const double promote = worst < 1.0 ? 1.0 / worst : 1.0;
  const Matrix& s = rec.C_inv_sqrt.matrix();
  Matrix x = s * (x_hat.matrix() * (promote / rec.scale_t)) * s;

  // Constraints removed because A_i reaches into ker(C) are met by adding
  // mass along ker(C), which costs nothing in the objective.
  const auto c_dec = eigh(inst.C);
  const Index support = count_at_least(c_dec.values, tol::psd(c_dec.norm()), 0.0);
  const auto kernel_basis = c_dec.vectors.rightCols(rec.n - support);
  for (Index i : rec.removed_constraints) {
    const double b = inst.b[static_cast<std::size_t>(i)];
    if (b == 0.0 || support == rec.n) continue;
    const auto& a = inst.A[static_cast<std::size_t>(i)];
    const auto kernel_dec =
        eigh(HermitianMatrix::from_hermitian_part(kernel_basis.adjoint() * a.matrix() * kernel_basis));
    const Eigen::VectorXcd v = kernel_basis * kernel_dec.vectors.col(0);
    const double have = trace_product(a, HermitianMatrix::from_hermitian_part(x));
    if (have >= b) continue;
    x += ((b - have) / kernel_dec.max()) * (v * v.adjoint());
  }

  PullbackResult out;
  out.X = HermitianMatrix::from_hermitian_part(x);
  out.objective = trace_product(inst.C, out.X);
  const double e = rec.epsilon;
  out.factor_bound = (1.0 + e) * (1.0 + e);
  out.min_residual = std::numeric_limits<double>::infinity();
  for (Index i : rec.retained_constraints) {
    const auto k = static_cast<std::size_t>(i);
    out.min_residual = std::min(out.min_residual, trace_product(inst.A[k], out.X) - inst.b[k]);
  }
  return out;
}

struct DualPullback {
  std::vector<double> y;
  double value = 0.0;
  double scale = 1.0;  // the factor the mapped dual was divided by
};

/// Maps a special-form dual ŷ onto a feasible dual for `inst`:
/// y_i = sum of ŷ_s over special constraints s copied from i, divided by
/// t * b_i, then rescaled so that C^{-1/2} (sum_i y_i A_i) C^{-1/2} <= I.
inline DualPullback pull_back_dual(std::span<const double> y_hat, const TransformRecord& rec,
                                   const PositiveSdpInstance& inst) {
  if (static_cast<Index>(y_hat.size()) != rec.special_m()) {
    fail(ErrorKind::DimensionMismatch, "dual vector length does not match the special-form instance");
  }
  DualPullback out;
  out.y.assign(static_cast<std::size_t>(inst.m()), 0.0);
  for (Index s = 0; s < rec.special_m(); ++s) {
    const auto i = static_cast<std::size_t>(rec.original_index(s));
    out.y[i] += y_hat[static_cast<std::size_t>(s)] / (rec.scale_t * inst.b[i]);
  }
  Matrix weighted = Matrix::Zero(rec.n, rec.n);
  for (std::size_t i = 0; i < out.y.size(); ++i) weighted += out.y[i] * inst.A[i].matrix();
  const Matrix& s = rec.C_inv_sqrt.matrix();
  const double top = eigh(HermitianMatrix::from_hermitian_part(s * weighted * s)).max();
  if (top > 0.0) {
    out.scale = top * (1.0 + 1e-12);
    for (double& v : out.y) v /= out.scale;
  }
  for (std::size_t i = 0; i < out.y.size(); ++i) out.value += inst.b[i] * out.y[i];
  return out;
}

}  // namespace psdp
