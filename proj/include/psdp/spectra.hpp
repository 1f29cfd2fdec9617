#pragma once

// Dense Hermitian linear-algebra kernel: eigendecompositions, spectral
// functions, threshold projectors and eigenvalue-mass sums.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <string>
#include <utility>

#include "psdp/error.hpp"

namespace psdp {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

namespace tol {
// Hermitian symmetry check, relative to the largest entry.
inline double sym(double max_abs) { return 1e-12 * max_abs; }
inline double psd(double norm) { return 1e-9 * (1.0 + norm); }
inline double recon(Index n, double norm) { return 1e-9 * static_cast<double>(n) * (1.0 + norm); }
// Eigenvalues within this band below a threshold count as being at the threshold.
inline double eig_cluster(double norm) { return 1e-9 * (1.0 + norm); }
}  // namespace tol

/// Dense n x n complex Hermitian matrix. The stored entries are always
/// exactly Hermitian: the checked constructor rejects inputs that are off by
/// more than `tol::sym` and then replaces the matrix by (M + M^H) / 2.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;

  explicit HermitianMatrix(const Matrix& m) {
    if (m.rows() != m.cols()) {
      fail(ErrorKind::DimensionMismatch,
           "matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
    if (!m.allFinite()) fail(ErrorKind::InvalidArgument, "matrix has non-finite entries");
    const double max_abs = m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
    const double asym = m.size() == 0 ? 0.0 : (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (asym > tol::sym(max_abs)) {
      fail(ErrorKind::InvalidArgument, "matrix is not Hermitian (asymmetry " + std::to_string(asym) + ")");
    }
    m_ = symmetrized(m);
  }

  /// Symmetrizes without the tolerance check; for results of arithmetic that
  /// is Hermitian in exact arithmetic.
  static HermitianMatrix from_hermitian_part(const Matrix& m) {
    HermitianMatrix h;
    h.m_ = symmetrized(m);
    return h;
  }

  static HermitianMatrix zero(Index n) { return from_hermitian_part(Matrix::Zero(n, n)); }
  static HermitianMatrix identity(Index n) { return from_hermitian_part(Matrix::Identity(n, n)); }
  static HermitianMatrix diagonal(const Vector& d) {
    return from_hermitian_part(d.cast<Complex>().asDiagonal().toDenseMatrix());
  }

  Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  Complex operator()(Index i, Index j) const { return m_(i, j); }
  double trace() const { return m_.diagonal().real().sum(); }
  double max_abs() const { return m_.size() == 0 ? 0.0 : m_.cwiseAbs().maxCoeff(); }

  /// Largest off-diagonal modulus.
  double off_diagonal_mass() const {
    double worst = 0.0;
    for (Index j = 0; j < m_.cols(); ++j)
      for (Index i = 0; i < m_.rows(); ++i)
        if (i != j) worst = std::max(worst, std::abs(m_(i, j)));
    return worst;
  }

  bool is_real() const { return m_.imag().isZero(0.0); }

  HermitianMatrix& operator+=(const HermitianMatrix& o) {
    m_ += o.m_;
    return *this;
  }
  friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) { return a += b; }
  friend HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b) {
    return from_hermitian_part(a.m_ - b.m_);
  }
  friend HermitianMatrix operator*(double s, const HermitianMatrix& a) {
    HermitianMatrix h;
    h.m_ = s * a.m_;
    return h;
  }
  friend bool operator==(const HermitianMatrix& a, const HermitianMatrix& b) { return a.m_ == b.m_; }

 private:
  static Matrix symmetrized(const Matrix& m) { return (m + m.adjoint()) * 0.5; }

  Matrix m_;
};

/// Real part of tr(A B) for Hermitian A, B.
inline double trace_product(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) fail(ErrorKind::DimensionMismatch, "trace_product operands differ in size");
  // tr(AB) = sum_ij A_ij B_ji = sum_ij A_ij conj(B_ij) for Hermitian B.
  return (a.matrix().array() * b.matrix().array().conjugate()).sum().real();
}

struct SpectralDecomposition {
  Vector values;   // non-increasing
  Matrix vectors;  // column j belongs to values[j]

  Index dim() const { return values.size(); }
  double norm() const {
    return values.size() == 0 ? 0.0 : std::max(std::abs(values[0]), std::abs(values[values.size() - 1]));
  }
  double max() const { return values[0]; }
  double min() const { return values[values.size() - 1]; }

  /// V diag(f(lambda)) V^H.
  template <class F>
  HermitianMatrix apply(F&& f) const {
    Vector mapped(values.size());
    for (Index i = 0; i < values.size(); ++i) mapped[i] = f(values[i]);
    return HermitianMatrix::from_hermitian_part(vectors * mapped.cast<Complex>().asDiagonal() * vectors.adjoint());
  }

  HermitianMatrix reconstruct() const {
    return apply([](double x) { return x; });
  }
};

/// Hermitian eigendecomposition with eigenvalues sorted non-increasing and
/// each eigenvector scaled so that its first non-negligible component is
/// real and positive.
inline SpectralDecomposition eigh(const HermitianMatrix& a) {
  const Index n = a.dim();
  SpectralDecomposition out;
  if (n == 0) return out;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    fail(ErrorKind::NonConvergence, "Hermitian eigensolver did not converge (n=" + std::to_string(n) + ")");
  }
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  for (Index j = 0; j < n; ++j) {
    auto col = out.vectors.col(j);
    for (Index i = 0; i < n; ++i) {
      const double mag = std::abs(col[i]);
      if (mag > 1e-10) {
        col *= std::conj(col[i]) / mag;
        col[i] = Complex(col[i].real(), 0.0);
        break;
      }
    }
  }
  return out;
}

inline double spectral_norm(const HermitianMatrix& a) { return eigh(a).norm(); }

inline double lambda_min(const HermitianMatrix& a) { return eigh(a).min(); }

inline bool is_psd(const HermitianMatrix& a) {
  const auto dec = eigh(a);
  return dec.dim() == 0 || dec.min() >= -tol::psd(dec.norm());
}

/// exp(-A) through the eigendecomposition.
inline HermitianMatrix matrix_exp_neg(const HermitianMatrix& a) {
  return eigh(a).apply([](double x) { return std::exp(-x); });
}

struct Projector {
  HermitianMatrix matrix;
  Index rank = 0;

  Index dim() const { return matrix.dim(); }
};

/// Number of leading eigenvalues that are >= l - cluster_tol.
inline Index count_at_least(const Vector& sorted_desc, double l, double cluster_tol) {
  Index count = 0;
  while (count < sorted_desc.size() && sorted_desc[count] >= l - cluster_tol) ++count;
  return count;
}

/// Sum of the eigenvalues that are >= l - cluster_tol.
inline double eigenvalue_mass(const Vector& sorted_desc, double l, double cluster_tol) {
  const Index count = count_at_least(sorted_desc, l, cluster_tol);
  return sorted_desc.head(count).sum();
}

inline double eigenvalue_mass(const SpectralDecomposition& dec, double l) {
  return eigenvalue_mass(dec.values, l, tol::eig_cluster(dec.norm()));
}

/// N_l(A): the sum of eigenvalues of A that are at least l.
inline double eigenvalue_mass(const HermitianMatrix& a, double l) { return eigenvalue_mass(eigh(a), l); }

inline Projector projector_at_least(const SpectralDecomposition& dec, double l, double cluster_tol) {
  const Index rank = count_at_least(dec.values, l, cluster_tol);
  const auto basis = dec.vectors.leftCols(rank);
  return Projector{HermitianMatrix::from_hermitian_part(basis * basis.adjoint()), rank};
}

inline Projector projector_at_least(const SpectralDecomposition& dec, double l) {
  return projector_at_least(dec, l, tol::eig_cluster(dec.norm()));
}

/// Projector onto the span of eigenvectors of A with eigenvalue >= l.
inline Projector projector_at_least(const HermitianMatrix& a, double l) { return projector_at_least(eigh(a), l); }

/// P A P.
inline HermitianMatrix conjugate(const Projector& p, const HermitianMatrix& a) {
  if (p.dim() != a.dim()) fail(ErrorKind::DimensionMismatch, "projector and matrix differ in size");
  const Matrix& pm = p.matrix.matrix();
  return HermitianMatrix::from_hermitian_part(pm * a.matrix() * pm);
}

}  // namespace psdp
