#pragma once

// Dense simplex for covering LPs  min c.x  s.t.  A x >= b, x >= 0  with
// c, b >= 0. It runs on the packing dual  max b.y  s.t.  A^T y <= c, y >= 0,
// whose slack basis is feasible from the start, using Bland's rule. The final
// basis is re-solved with a pivoted LU to clean up accumulated rounding.

#include <Eigen/Dense>

#include <limits>
#include <vector>

#include "psdp/error.hpp"

namespace psdp::lp {

struct CoveringSolution {
  double optimum = 0.0;
  Eigen::VectorXd dual;  // y, length m
  long pivots = 0;
};

inline CoveringSolution solve_covering(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  if (b.size() != m || c.size() != n) fail(ErrorKind::DimensionMismatch, "covering LP data has inconsistent sizes");
  if ((b.array() < 0).any() || (c.array() < 0).any()) {
    fail(ErrorKind::InvalidArgument, "covering LP needs non-negative b and c");
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    if (b[i] > 0 && (a.row(i).array() <= 0).all()) {
      fail(ErrorKind::OracleInfeasible, "row " + std::to_string(i) + " has no positive entry but b > 0");
    }
  }

  // Columns 0..m-1 are y, m..m+n-1 are slacks; last column is the rhs.
  const Eigen::Index cols = m + n;
  Eigen::MatrixXd tab = Eigen::MatrixXd::Zero(n + 1, cols + 1);
  tab.block(0, 0, n, m) = a.transpose();
  tab.block(0, m, n, n).setIdentity();
  tab.block(0, cols, n, 1) = c;
  tab.block(n, 0, 1, m) = -b.transpose();
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) basis[static_cast<std::size_t>(j)] = m + j;

  const double scale = 1.0 + std::max(a.cwiseAbs().maxCoeff(), std::max(b.maxCoeff(), c.maxCoeff()));
  const double eps = 1e-12 * scale;
  CoveringSolution out;
  const long max_pivots = 100000;
  while (true) {
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (tab(n, j) < -eps) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;
    Eigen::Index leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index r = 0; r < n; ++r) {
      const double coef = tab(r, enter);
      if (coef <= eps) continue;
      const double ratio = tab(r, cols) / coef;
      if (leave < 0 || ratio < best - 1e-15) {
        best = ratio;
        leave = r;
      } else if (ratio <= best + 1e-15 && basis[static_cast<std::size_t>(r)] < basis[static_cast<std::size_t>(leave)]) {
        leave = r;
      }
    }
    if (leave < 0) fail(ErrorKind::OracleInfeasible, "covering LP is infeasible (dual unbounded)");
    tab.row(leave) /= tab(leave, enter);
    for (Eigen::Index r = 0; r <= n; ++r) {
      if (r != leave && tab(r, enter) != 0.0) tab.row(r) -= tab(r, enter) * tab.row(leave);
    }
    basis[static_cast<std::size_t>(leave)] = enter;
    if (++out.pivots > max_pivots) fail(ErrorKind::NonConvergence, "simplex pivot limit reached");
  }

  // Re-solve B x_B = c on the final basis.
  Eigen::MatrixXd full(n, cols);
  full.leftCols(m) = a.transpose();
  full.rightCols(n).setIdentity();
  Eigen::MatrixXd basis_cols(n, n);
  for (Eigen::Index j = 0; j < n; ++j) basis_cols.col(j) = full.col(basis[static_cast<std::size_t>(j)]);
  const Eigen::VectorXd xb = basis_cols.fullPivLu().solve(c);
  out.dual = Eigen::VectorXd::Zero(m);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index var = basis[static_cast<std::size_t>(j)];
    if (var < m) out.dual[var] = std::max(xb[j], 0.0);
  }
  out.optimum = b.dot(out.dual);
  return out;
}

}  // namespace psdp::lp
