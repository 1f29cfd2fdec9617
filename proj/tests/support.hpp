#pragma once

// Independent oracles and random-matrix helpers shared by the unit tests.
// None of these call into the library's eigensolver or solver code.

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "psdp/spectra.hpp"

namespace psdp::testing {

inline Matrix random_complex(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) {
      const double re = g(rng);
      m(i, j) = Complex(re, g(rng));
    }
  return m;
}

inline HermitianMatrix random_hermitian(Index n, std::mt19937_64& rng) {
  const Matrix g = random_complex(n, n, rng);
  return HermitianMatrix::from_hermitian_part(0.5 * (g + g.adjoint()));
}

inline HermitianMatrix random_psd(Index n, std::mt19937_64& rng, Index rank = -1) {
  const Matrix g = random_complex(n, rank < 0 ? n : rank, rng);
  return HermitianMatrix::from_hermitian_part(g * g.adjoint() / static_cast<double>(n));
}

// Eigenvalues as roots of the characteristic polynomial: Faddeev-LeVerrier
// coefficients, Durand-Kerner iteration, then Newton polishing. Returned
// sorted non-increasing (real parts).
inline std::vector<double> charpoly_eigenvalues(const Matrix& a) {
  using LC = std::complex<long double>;
  const Index n = a.rows();
  using LMatrix = Eigen::Matrix<LC, Eigen::Dynamic, Eigen::Dynamic>;
  const LMatrix al = a.cast<LC>();
  std::vector<LC> c(static_cast<std::size_t>(n + 1));  // c[k] multiplies x^k
  c[static_cast<std::size_t>(n)] = 1.0L;
  LMatrix mk = LMatrix::Zero(n, n);
  for (Index k = 1; k <= n; ++k) {
    mk = al * mk + c[static_cast<std::size_t>(n - k + 1)] * LMatrix::Identity(n, n);
    c[static_cast<std::size_t>(n - k)] = -(al * mk).trace() / static_cast<long double>(k);
  }
  auto eval = [&](LC x) {
    LC v = c[static_cast<std::size_t>(n)];
    for (Index k = n - 1; k >= 0; --k) v = v * x + c[static_cast<std::size_t>(k)];
    return v;
  };
  auto deriv = [&](LC x) {
    LC v = static_cast<long double>(n) * c[static_cast<std::size_t>(n)];
    for (Index k = n - 1; k >= 1; --k) v = v * x + static_cast<long double>(k) * c[static_cast<std::size_t>(k)];
    return v;
  };
  long double radius = 1.0L;
  for (Index k = 0; k < n; ++k) radius = std::max(radius, 1.0L + std::abs(c[static_cast<std::size_t>(k)]));
  std::vector<LC> z(static_cast<std::size_t>(n));
  const LC seed(0.4L, 0.9L);
  for (Index k = 0; k < n; ++k) z[static_cast<std::size_t>(k)] = radius * std::pow(seed, static_cast<long double>(k));
  for (int it = 0; it < 2000; ++it) {
    long double move = 0.0L;
    for (Index i = 0; i < n; ++i) {
      LC denom = 1.0L;
      for (Index j = 0; j < n; ++j)
        if (i != j) denom *= z[static_cast<std::size_t>(i)] - z[static_cast<std::size_t>(j)];
      const LC step = eval(z[static_cast<std::size_t>(i)]) / denom;
      z[static_cast<std::size_t>(i)] -= step;
      move = std::max(move, std::abs(step));
    }
    if (move < 1e-18L) break;
  }
  for (auto& r : z) {
    for (int it = 0; it < 5; ++it) {
      const LC d = deriv(r);
      if (std::abs(d) == 0.0L) break;
      r -= eval(r) / d;
    }
  }
  std::vector<double> out;
  for (const auto& r : z) out.push_back(static_cast<double>(r.real()));
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

// exp(-A) by scaling and squaring a truncated Taylor series.
inline Matrix taylor_exp_neg(const Matrix& a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm / std::ldexp(1.0, squarings) > 0.25) ++squarings;
  const Matrix x = -a / std::ldexp(1.0, squarings);
  const Index n = a.rows();
  Matrix term = Matrix::Identity(n, n);
  Matrix sum = term;
  for (int k = 1; k <= 30; ++k) {
    term = term * x / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

}  // namespace psdp::testing
