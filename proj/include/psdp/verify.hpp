#pragma once

// Solver-independent certificate checks and reference optima.
//
// Everything here recomputes traces and eigenvalues from the instance and the
// certificate alone; nothing is read from solver internals.

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "psdp/instance.hpp"
#include "psdp/lp.hpp"

namespace psdp {

enum class Verdict { Certified, FeasibilityFail, GapFail };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Certified: return "certified";
    case Verdict::FeasibilityFail: return "feasibility_fail";
    case Verdict::GapFail: return "gap_fail";
  }
  return "unknown";
}

enum class Form { Special, General };

struct VerificationReport {
  Form form = Form::Special;
  double primal_feasibility = 0.0;  // min_i tr(A_i X) - rhs_i
  double dual_feasibility = 0.0;    // 1 - lambda_max(Φ*(y))  or  lambda_min(C - sum y_i A_i)
  double primal_psd = 0.0;          // lambda_min(X)
  double dual_nonnegativity = 0.0;  // min_i y_i
  double primal_value = 0.0;
  double dual_value = 0.0;
  double gap_ratio = 0.0;
  double guarantee = 0.0;
  double feas_tol = 0.0;
  double epsilon = 0.0;
  Verdict verdict = Verdict::GapFail;
};

namespace detail {

inline Verdict judge(const VerificationReport& r) {
  const double psd_band = 1e-9 * (1.0 + std::abs(r.primal_value));
  if (r.primal_feasibility < -r.feas_tol || r.dual_feasibility < -r.feas_tol || r.primal_psd < -psd_band ||
      r.dual_nonnegativity < 0.0) {
    return Verdict::FeasibilityFail;
  }
  if (!(r.dual_value > 0.0) || !(r.gap_ratio <= r.guarantee + 1e-9)) return Verdict::GapFail;
  return Verdict::Certified;
}

inline double min_of(std::span<const double> v) {
  return v.empty() ? 0.0 : *std::min_element(v.begin(), v.end());
}

}  // namespace detail

inline double special_guarantee(double epsilon) { return 1.0 + 5.0 * std::sqrt(epsilon); }
inline double general_guarantee(double epsilon) { return (1.0 + epsilon) * (1.0 + epsilon) * special_guarantee(epsilon); }

/// Checks a special-form certificate (X, y): tr(A_i X) >= 1, sum y_i A_i <= I,
/// and tr X <= (1 + 5 sqrt(eps)) sum y_i.
inline VerificationReport verify_certificate(const SpecialFormInstance& inst, const HermitianMatrix& x,
                                             std::span<const double> y, double epsilon) {
  if (x.dim() != inst.n() || static_cast<Index>(y.size()) != inst.m()) {
    fail(ErrorKind::DimensionMismatch, "certificate does not match the instance dimensions");
  }
  VerificationReport r;
  r.form = Form::Special;
  r.epsilon = epsilon;
  r.feas_tol = 1e-7;
  r.guarantee = special_guarantee(epsilon);
  double worst = std::numeric_limits<double>::infinity();
  Matrix weighted = Matrix::Zero(inst.n(), inst.n());
  for (std::size_t i = 0; i < inst.A.size(); ++i) {
    worst = std::min(worst, trace_product(inst.A[i], x) - 1.0);
    weighted += y[i] * inst.A[i].matrix();
  }
  r.primal_feasibility = worst;
  r.dual_feasibility = 1.0 - eigh(HermitianMatrix::from_hermitian_part(weighted)).max();
  r.primal_psd = lambda_min(x);
  r.dual_nonnegativity = detail::min_of(y);
  r.primal_value = x.trace();
  for (double v : y) r.dual_value += v;
  r.gap_ratio = r.dual_value > 0.0 ? r.primal_value / r.dual_value : std::numeric_limits<double>::infinity();
  r.verdict = detail::judge(r);
  return r;
}

/// Checks a general-form certificate: tr(A_i X) >= b_i, C - sum y_i A_i >= 0,
/// and tr(C X) <= (1+eps)^2 (1 + 5 sqrt(eps)) sum b_i y_i.
inline VerificationReport verify_general(const PositiveSdpInstance& inst, const HermitianMatrix& x,
                                         std::span<const double> y, double epsilon) {
  if (x.dim() != inst.n() || static_cast<Index>(y.size()) != inst.m()) {
    fail(ErrorKind::DimensionMismatch, "certificate does not match the instance dimensions");
  }
  VerificationReport r;
  r.form = Form::General;
  r.epsilon = epsilon;
  double max_b = 0.0;
  for (double v : inst.b) max_b = std::max(max_b, v);
  r.feas_tol = 1e-7 * (1.0 + max_b);
  r.guarantee = general_guarantee(epsilon);
  double worst = std::numeric_limits<double>::infinity();
  Matrix slack = inst.C.matrix();
  for (std::size_t i = 0; i < inst.A.size(); ++i) {
    worst = std::min(worst, trace_product(inst.A[i], x) - inst.b[i]);
    slack -= y[i] * inst.A[i].matrix();
    r.dual_value += inst.b[i] * y[i];
  }
  r.primal_feasibility = worst;
  r.dual_feasibility = eigh(HermitianMatrix::from_hermitian_part(slack)).min();
  r.primal_psd = lambda_min(x);
  r.dual_nonnegativity = detail::min_of(y);
  r.primal_value = trace_product(inst.C, x);
  r.gap_ratio = r.dual_value > 0.0 ? r.primal_value / r.dual_value : std::numeric_limits<double>::infinity();
  r.verdict = detail::judge(r);
  return r;
}

enum class OracleMethod { DiagonalLp, DenseBracket };

inline std::string_view to_string(OracleMethod m) {
  return m == OracleMethod::DiagonalLp ? "diagonal_lp" : "dense_bracket";
}

struct OracleResult {
  double optimum = 0.0;
  OracleMethod method = OracleMethod::DiagonalLp;
  double tolerance = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

namespace detail {

inline Vector checked_diagonal(const HermitianMatrix& a, const std::string& field) {
  if (a.off_diagonal_mass() > 1e-12) fail(ErrorKind::NotDiagonal, field + " is not diagonal");
  return a.matrix().diagonal().real();
}

inline OracleResult lp_result(const Eigen::MatrixXd& rows, const Eigen::VectorXd& b, const Eigen::VectorXd& c) {
  const auto sol = lp::solve_covering(rows, b, c);
  OracleResult out;
  out.method = OracleMethod::DiagonalLp;
  out.optimum = sol.optimum;
  out.tolerance = 1e-9 * std::max(1.0, std::abs(sol.optimum));
  out.lower = out.optimum - out.tolerance;
  out.upper = out.optimum + out.tolerance;
  return out;
}

}  // namespace detail

/// Exact optimum of a commuting (all-diagonal) instance, solved as the
/// positive LP  min c.x  s.t.  sum_j a_ij x_j >= b_i, x >= 0.
inline OracleResult diagonal_lp_oracle(const PositiveSdpInstance& inst) {
  const Index n = inst.n();
  const Index m = inst.m();
  Eigen::MatrixXd rows(m, n);
  Eigen::VectorXd b(m);
  for (Index i = 0; i < m; ++i) {
    rows.row(i) = detail::checked_diagonal(inst.A[static_cast<std::size_t>(i)], "A[" + std::to_string(i) + "]").transpose();
    b[i] = inst.b[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd c = detail::checked_diagonal(inst.C, "C");
  return detail::lp_result(rows.cwiseMax(0.0), b, c.cwiseMax(0.0));
}

inline OracleResult diagonal_lp_oracle(const SpecialFormInstance& inst) {
  const Index n = inst.n();
  const Index m = inst.m();
  Eigen::MatrixXd rows(m, n);
  for (Index i = 0; i < m; ++i) {
    rows.row(i) = detail::checked_diagonal(inst.A[static_cast<std::size_t>(i)], "A[" + std::to_string(i) + "]").transpose();
  }
  return detail::lp_result(rows.cwiseMax(0.0), Eigen::VectorXd::Ones(m), Eigen::VectorXd::Ones(n));
}

/// Brackets the optimum of a small special-form instance through its dual:
/// opt = 1 / min over the simplex of f(u) = lambda_max(sum_i u_i A_i).
/// f is convex, so branch-and-bound over simplex cells with subgradient
/// lower bounds converges to a certified interval [1/UB, 1/LB].
inline OracleResult bracket_oracle(const SpecialFormInstance& inst, double resolution, long cell_budget = 400000) {
  const Index m = inst.m();
  if (inst.n() > 4 || m > 4) fail(ErrorKind::InvalidArgument, "bracket_oracle supports n, m <= 4 only");
  if (!(resolution > 0.0)) fail(ErrorKind::InvalidArgument, "resolution must be positive");

  struct Eval {
    double value = 0.0;
    Vector grad;
  };
  std::map<std::vector<double>, Eval> cache;
  auto key_of = [](const Vector& u) { return std::vector<double>(u.data(), u.data() + u.size()); };
  auto evaluate = [&](const Vector& u) -> const Eval& {
    auto key = key_of(u);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    Matrix acc = Matrix::Zero(inst.n(), inst.n());
    for (Index i = 0; i < m; ++i) acc += u[i] * inst.A[static_cast<std::size_t>(i)].matrix();
    const auto dec = eigh(HermitianMatrix::from_hermitian_part(acc));
    Eval e;
    e.value = dec.max();
    const Eigen::VectorXcd v = dec.vectors.col(0);
    e.grad.resize(m);
    for (Index i = 0; i < m; ++i) e.grad[i] = (v.adjoint() * inst.A[static_cast<std::size_t>(i)].matrix() * v)(0).real();
    return cache.emplace(std::move(key), std::move(e)).first->second;
  };

  struct Cell {
    std::vector<Vector> vertices;
    double lower = 0.0;
  };
  double best_upper = std::numeric_limits<double>::infinity();  // min f seen
  auto bound_cell = [&](Cell& cell) {
    Vector centroid = Vector::Zero(m);
    for (const auto& v : cell.vertices) centroid += v;
    centroid /= static_cast<double>(cell.vertices.size());
    std::vector<Vector> points = cell.vertices;
    points.push_back(centroid);
    double lower = -std::numeric_limits<double>::infinity();
    for (const auto& q : points) {
      const Eval& e = evaluate(q);
      best_upper = std::min(best_upper, e.value);
      double worst = std::numeric_limits<double>::infinity();
      for (const auto& w : cell.vertices) worst = std::min(worst, e.grad.dot(w - q));
      lower = std::max(lower, e.value + worst);
    }
    cell.lower = lower;
  };

  auto cmp = [](const Cell& a, const Cell& b) { return a.lower > b.lower; };
  std::priority_queue<Cell, std::vector<Cell>, decltype(cmp)> open(cmp);
  Cell root;
  for (Index i = 0; i < m; ++i) root.vertices.push_back(Vector::Unit(m, i));
  bound_cell(root);
  open.push(root);

  auto make_result = [&](double lower_f) {
    OracleResult out;
    out.method = OracleMethod::DenseBracket;
    out.lower = 1.0 / best_upper;
    out.upper = lower_f > 0.0 ? 1.0 / lower_f : std::numeric_limits<double>::infinity();
    out.optimum = 0.5 * (out.lower + out.upper);
    out.tolerance = 0.5 * (out.upper - out.lower);
    return out;
  };

  long processed = 0;
  while (true) {
    const double lower_f = open.empty() ? best_upper : std::min(best_upper, open.top().lower);
    const auto current = make_result(lower_f);
    if (current.upper - current.lower <= resolution) return current;
    if (++processed > cell_budget) {
      fail(ErrorKind::ResolutionUnreachable, "bracket did not reach resolution " + std::to_string(resolution));
    }
    Cell cell = open.top();
    open.pop();
    if (cell.lower >= best_upper) continue;
    std::size_t ia = 0, ib = 1;
    double longest = -1.0;
    for (std::size_t i = 0; i < cell.vertices.size(); ++i)
      for (std::size_t j = i + 1; j < cell.vertices.size(); ++j) {
        const double d = (cell.vertices[i] - cell.vertices[j]).lpNorm<1>();
        if (d > longest) {
          longest = d;
          ia = i;
          ib = j;
        }
      }
    const Vector mid = 0.5 * (cell.vertices[ia] + cell.vertices[ib]);
    for (std::size_t replaced : {ia, ib}) {
      Cell child = cell;
      child.vertices[replaced] = mid;
      bound_cell(child);
      if (child.lower < best_upper) open.push(std::move(child));
    }
  }
}

}  // namespace psdp
