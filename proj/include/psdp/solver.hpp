#pragma once

// Width-free matrix multiplicative-weights solver for special-form positive
// SDPs:
//
//   minimize tr X  s.t. tr(A_i X) >= 1,  X >= 0
//   maximize sum y_i  s.t. sum y_i A_i <= I,  y >= 0
//
// Each iteration forms S = Φ*(Y_t) = sum_i y_i A_i with y_i = exp(-tr(A_i X_t)),
// lowers the phase exponent k until ||S|| >= (1+eps0)^k, walks the threshold
// exponent thr down while the eigenvalue mass keeps growing by (1 + 2eps/5),
// and adds lambda_t times the projector onto the eigenvalues of S that are at
// least (1+eps0)^thr. The run stops once tr Y_t <= m^{-1/eps}.

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "psdp/instance.hpp"

namespace psdp {

struct SolverParams {
  double epsilon = 0.1;
  double ln_eff = 1.0;           // max(ln n, 1)
  double epsilon0 = 0.0;         // eps^2 / ln_eff^2
  double epsilon1 = 0.0;         // 3 eps / ln_eff
  double eps_prime = 0.0;        // eps0 / (1 + eps0)
  double stop_threshold = 0.0;   // m^{-1/eps}
  double projector_split = 0.0;  // 2 sqrt(eps)
  long long thr_bound = 0;       // ceil(ln n / ln(1 + 2eps/5))
  long long max_iterations = 1'000'000;
  bool assert_invariants = false;

  static SolverParams make(double epsilon, Index n, Index m) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) fail(ErrorKind::InvalidArgument, "epsilon must lie in (0, 1)");
    if (n < 1 || m < 1) fail(ErrorKind::InvalidArgument, "instance must be nonempty");
    SolverParams p;
    p.epsilon = epsilon;
    const double ln_n = std::log(static_cast<double>(n));
    p.ln_eff = std::max(ln_n, 1.0);
    p.epsilon0 = epsilon * epsilon / (p.ln_eff * p.ln_eff);
    p.epsilon1 = 3.0 * epsilon / p.ln_eff;
    p.eps_prime = p.epsilon0 / (1.0 + p.epsilon0);
    p.stop_threshold = std::pow(static_cast<double>(m), -1.0 / epsilon);
    p.projector_split = 2.0 * std::sqrt(epsilon);
    p.thr_bound = static_cast<long long>(std::ceil(ln_n / std::log1p(0.4 * epsilon)));
    return p;
  }

  /// (1 + eps0)^j, evaluated in log space.
  double level(long long j) const { return std::exp(static_cast<double>(j) * std::log1p(epsilon0)); }
};

/// Named per-iteration checks recorded in every IterationRecord.
enum class Check : std::size_t {
  NormBound,       // ||Φ*(Y_t)|| <= (1+eps0)^thr (1+eps1)
  TraceDecrease,   // tr Y_{t+1} <= tr Y_t - lambda_t (1-4 sqrt eps) ||Φ*(Y_t)|| tr Π_t
  MassAbove,       // weighted mass on P>= is at least sqrt(eps) of the total
  MassBelow,       // weighted mass on P<= is at least (1 - sqrt(eps)) of the total
  ThrGap,          // k - thr <= ceil(ln n / ln(1 + 2eps/5))
  PhaseMonotone,   // k never increases
  TraceMonotone,   // tr Y strictly decreases
  kCount,
};

inline constexpr std::size_t kCheckCount = static_cast<std::size_t>(Check::kCount);

inline constexpr std::array<std::string_view, kCheckCount> kCheckNames = {
    "norm_bound", "trace_decrease", "mass_above", "mass_below", "thr_gap", "phase_monotone", "trace_monotone"};

struct IterationRecord {
  long long t = 0;
  long long k = 0;
  long long thr = 0;
  double lambda_t = 0.0;
  Index r_index = 0;
  double tr_Pi_t = 0.0;
  double tr_Y = 0.0;
  double norm_phi_star_Y = 0.0;
  double ratio_tr_over_norm = 0.0;
  std::array<bool, kCheckCount> invariant_flags{};

  bool passed(Check c) const { return invariant_flags[static_cast<std::size_t>(c)]; }
  bool all_passed() const {
    return std::all_of(invariant_flags.begin(), invariant_flags.end(), [](bool b) { return b; });
  }
};

struct PhaseCount {
  long long k = 0;
  long long count = 0;
};

struct SolveResult {
  HermitianMatrix X_star;
  std::vector<double> y_star;
  double alpha = 0.0;
  double primal_value = 0.0;
  double dual_value = 0.0;
  double gap_ratio = 0.0;
  long long iterations = 0;  // t_f
  long long best_t = 0;      // t' maximizing tr Y_t / ||Φ*(Y_t)||
  long long k_start = 0;
  long long k_final = 0;
  double final_tr_Y = 0.0;
  SolverParams params;
  std::vector<IterationRecord> trace;
  std::vector<PhaseCount> phases;
};

/// Raised for MaxIterationsExceeded and InvariantViolation; keeps the trace
/// collected so far.
class SolveFailure : public Error {
 public:
  SolveFailure(ErrorKind kind, const std::string& what, std::vector<IterationRecord> trace)
      : Error(kind, what), trace_(std::move(trace)) {}
  const std::vector<IterationRecord>& trace() const { return trace_; }

 private:
  std::vector<IterationRecord> trace_;
};

/// Φ(X)_i = tr(A_i X).
inline Vector phi(const SpecialFormInstance& inst, const HermitianMatrix& x) {
  if (x.dim() != inst.n()) fail(ErrorKind::DimensionMismatch, "phi: X has the wrong dimension");
  Vector out(inst.m());
  for (Index i = 0; i < inst.m(); ++i) out[i] = trace_product(inst.A[static_cast<std::size_t>(i)], x);
  return out;
}

/// Φ*(y) = sum_i y_i A_i.
inline HermitianMatrix phi_star(const SpecialFormInstance& inst, std::span<const double> y) {
  if (static_cast<Index>(y.size()) != inst.m()) fail(ErrorKind::DimensionMismatch, "phi_star: y has the wrong length");
  Matrix acc = Matrix::Zero(inst.n(), inst.n());
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] != 0.0) acc += y[i] * inst.A[i].matrix();
  }
  return HermitianMatrix::from_hermitian_part(acc);
}

/// Phase exponent k with (1+eps0)^k <= norm < (1+eps0)^{k+1}.
inline long long bracket_exponent(double norm, const SolverParams& p) {
  if (!(norm > 0.0)) fail(ErrorKind::InvalidArgument, "norm must be positive");
  auto k = static_cast<long long>(std::floor(std::log(norm) / std::log1p(p.epsilon0)));
  while (p.level(k) > norm) --k;
  while (p.level(k + 1) <= norm) ++k;
  return k;
}

inline long long initial_k(const SpecialFormInstance& inst, const SolverParams& p) {
  const std::vector<double> ones(static_cast<std::size_t>(inst.m()), 1.0);
  return bracket_exponent(spectral_norm(phi_star(inst, ones)), p);
}

/// Largest k' <= k with (1+eps0)^{k'} <= norm.
inline long long descend_k(long long k, double norm, const SolverParams& p) {
  if (p.level(k) <= norm) return k;
  return std::min(k - 1, bracket_exponent(norm, p));
}

/// Threshold search on the (non-increasing) spectrum of Φ*(Y_t). Masses are
/// evaluated on the spectrum scaled by its top eigenvalue so the cluster
/// tolerance is relative.
inline long long find_thr(const Vector& spectrum, long long k, Index n, const SolverParams& p) {
  const double top = spectrum[0];
  if (!(top > 0.0)) fail(ErrorKind::DegenerateProjector, "Φ*(Y) has no positive eigenvalue");
  const Vector scaled = spectrum / top;
  const double cluster = tol::eig_cluster(1.0);
  auto mass = [&](long long j) { return eigenvalue_mass(scaled, p.level(j) / top, cluster); };
  const double growth = 1.0 + 0.4 * p.epsilon;
  const long long bound = static_cast<long long>(std::ceil(std::log(static_cast<double>(n)) / std::log1p(0.4 * p.epsilon)));
  long long thr = k;
  double upper = mass(thr);
  while (true) {
    const double lower = mass(thr - 1);
    if (!(lower >= growth * upper)) break;
    --thr;
    upper = lower;
    if (k - thr > bound) {
      fail(ErrorKind::ThrSearchOverrun, "threshold search ran " + std::to_string(k - thr) +
                                            " steps, bound is " + std::to_string(bound));
    }
  }
  return thr;
}

inline long long find_thr(const SpecialFormInstance& inst, std::span<const double> y, long long k,
                          const SolverParams& p) {
  return find_thr(eigh(phi_star(inst, y)).values, k, inst.n(), p);
}

struct LambdaChoice {
  double lambda = 0.0;
  Index r_index = 0;           // original index j_r
  Index r_position = 0;        // 1-based position r in the sorted order
  double total = 0.0;          // sum_i y_i tr(A_i Π_t)
};

/// Sorts tr(A_i Π_t) non-increasing (ties by ascending index) and picks the
/// first position whose weighted prefix reaches sqrt(eps) of the total.
inline LambdaChoice select_lambda(std::span<const double> y, std::span<const double> traces, double epsilon) {
  if (y.size() != traces.size()) fail(ErrorKind::DimensionMismatch, "select_lambda: length mismatch");
  std::vector<Index> order(y.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return traces[static_cast<std::size_t>(a)] > traces[static_cast<std::size_t>(b)];
  });
  LambdaChoice out;
  for (Index j : order) out.total += y[static_cast<std::size_t>(j)] * traces[static_cast<std::size_t>(j)];
  if (!(out.total > 0.0)) fail(ErrorKind::DegenerateProjector, "weighted projector mass is not positive");
  const double root = std::sqrt(epsilon);
  double prefix = 0.0;
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const auto j = static_cast<std::size_t>(order[pos]);
    prefix += y[j] * traces[j];
    if (prefix >= root * out.total) {
      out.r_index = order[pos];
      out.r_position = static_cast<Index>(pos + 1);
      out.lambda = 2.0 * root / traces[j];
      return out;
    }
  }
  fail(ErrorKind::DegenerateProjector, "no admissible index r");
}

inline LambdaChoice select_lambda(const SpecialFormInstance& inst, std::span<const double> y, const Projector& pi,
                                  double epsilon) {
  const Vector traces = phi(inst, pi.matrix);
  return select_lambda(y, std::span<const double>(traces.data(), static_cast<std::size_t>(traces.size())), epsilon);
}

/// The two weighted-mass conditions on the diagonal projectors of
/// Φ(lambda Π_t) at 2 sqrt(eps); an entry exactly at the split belongs to both.
struct MassConditions {
  bool above = false;
  bool below = false;
};

inline MassConditions check_mass_conditions(std::span<const double> y, std::span<const double> traces, double lambda,
                                            double epsilon) {
  const double split = 2.0 * std::sqrt(epsilon);
  const double root = std::sqrt(epsilon);
  double total = 0.0, above = 0.0, below = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double w = y[i] * traces[i];
    const double v = lambda * traces[i];
    total += w;
    if (v >= split * (1.0 - 1e-12)) above += w;
    if (v <= split * (1.0 + 1e-12)) below += w;
  }
  return {above >= root * total * (1.0 - 1e-12), below >= (1.0 - root) * total * (1.0 - 1e-12)};
}

/// Lower bound on k_f from m (1+eps0)^{k_f+1} >= eps^2 / m^{2+1/eps},
/// evaluated in log space.
inline bool final_phase_bound_holds(long long k_final, Index m, const SolverParams& p) {
  const double ln_m = std::log(static_cast<double>(m));
  const double lhs = ln_m + static_cast<double>(k_final + 1) * std::log1p(p.epsilon0);
  const double rhs = 2.0 * std::log(p.epsilon) - (2.0 + 1.0 / p.epsilon) * ln_m;
  return lhs >= rhs - 1e-12 * std::abs(rhs);
}

inline SolveResult solve(const SpecialFormInstance& inst, SolverParams params) {
  const Index n = inst.n();
  const Index m = inst.m();
  if (n < 2) fail(ErrorKind::InvalidArgument, "solver requires n >= 2");
  if (m < 1) fail(ErrorKind::InvalidArgument, "solver requires m >= 1");

  SolveResult res;
  res.params = params;
  const auto& p = params;
  const double root = std::sqrt(p.epsilon);

  Matrix x = Matrix::Zero(n, n);
  std::vector<double> phi_x(static_cast<std::size_t>(m), 0.0);
  std::vector<double> y(static_cast<std::size_t>(m), 1.0);
  std::vector<double> traces(static_cast<std::size_t>(m), 0.0);
  long long k = initial_k(inst, p);
  res.k_start = k;

  double best_ratio = -1.0;
  std::vector<double> best_y;
  double best_norm = 0.0;
  long long t = 0;

  auto abort_run = [&](ErrorKind kind, const std::string& what) {
    throw SolveFailure(kind, what, std::move(res.trace));
  };

  double tr_y = std::accumulate(y.begin(), y.end(), 0.0);
  while (true) {
    const auto s_dec = eigh(phi_star(inst, y));
    const double norm = s_dec.max();
    const double ratio = tr_y / norm;
    if (ratio > best_ratio) {
      best_ratio = ratio;
      best_y = y;
      best_norm = norm;
      res.best_t = t;
    }
    if (!(tr_y > p.stop_threshold)) break;
    if (t >= p.max_iterations) {
      abort_run(ErrorKind::MaxIterationsExceeded, "iteration cap " + std::to_string(p.max_iterations) + " reached");
    }

    IterationRecord rec;
    rec.t = t;
    const long long k_before = k;
    k = descend_k(k, norm, p);
    const long long thr = find_thr(s_dec.values, k, n, p);
    const double cut = p.level(thr) / norm;
    const Vector scaled = s_dec.values / norm;
    const Index rank = count_at_least(scaled, cut, tol::eig_cluster(1.0));
    const auto basis = s_dec.vectors.leftCols(rank);
    const auto pi = HermitianMatrix::from_hermitian_part(basis * basis.adjoint());
    for (Index i = 0; i < m; ++i) traces[static_cast<std::size_t>(i)] = trace_product(inst.A[static_cast<std::size_t>(i)], pi);
    const auto choice = select_lambda(y, traces, p.epsilon);
    const double lambda = choice.lambda;
    const auto mass = check_mass_conditions(y, traces, lambda, p.epsilon);

    x += lambda * pi.matrix();
    for (std::size_t i = 0; i < y.size(); ++i) {
      phi_x[i] += lambda * traces[i];
      y[i] = std::exp(-phi_x[i]);
    }
    const double tr_y_next = std::accumulate(y.begin(), y.end(), 0.0);

    rec.k = k;
    rec.thr = thr;
    rec.lambda_t = lambda;
    rec.r_index = choice.r_index;
    rec.tr_Pi_t = static_cast<double>(rank);
    rec.tr_Y = tr_y;
    rec.norm_phi_star_Y = norm;
    rec.ratio_tr_over_norm = ratio;
    auto& flags = rec.invariant_flags;
    flags[static_cast<std::size_t>(Check::NormBound)] = norm <= p.level(thr) * (1.0 + p.epsilon1) * (1.0 + 1e-9);
    flags[static_cast<std::size_t>(Check::TraceDecrease)] =
        tr_y_next <= tr_y - lambda * (1.0 - 4.0 * root) * norm * static_cast<double>(rank) + 1e-8 * tr_y;
    flags[static_cast<std::size_t>(Check::MassAbove)] = mass.above;
    flags[static_cast<std::size_t>(Check::MassBelow)] = mass.below;
    flags[static_cast<std::size_t>(Check::ThrGap)] = k - thr <= p.thr_bound;
    flags[static_cast<std::size_t>(Check::PhaseMonotone)] = k <= k_before;
    flags[static_cast<std::size_t>(Check::TraceMonotone)] = tr_y_next < tr_y;

    if (res.phases.empty() || res.phases.back().k != k) res.phases.push_back({k, 0});
    ++res.phases.back().count;
    res.trace.push_back(rec);

    if (p.assert_invariants && !rec.all_passed()) {
      std::string failed;
      for (std::size_t c = 0; c < kCheckCount; ++c) {
        if (!rec.invariant_flags[c]) failed += std::string(failed.empty() ? "" : ",") + std::string(kCheckNames[c]);
      }
      abort_run(ErrorKind::InvariantViolation, "iteration " + std::to_string(t) + " failed: " + failed);
    }
    tr_y = tr_y_next;
    ++t;
  }

  res.iterations = t;
  res.k_final = k;
  res.final_tr_Y = tr_y;
  const auto x_final = HermitianMatrix::from_hermitian_part(x);
  const Vector phi_final = phi(inst, x_final);
  res.alpha = phi_final.minCoeff();
  if (!(res.alpha > 0.0)) {
    abort_run(ErrorKind::InvariantViolation, "alpha = min_i tr(A_i X) is not positive");
  }
  res.X_star = (1.0 / res.alpha) * x_final;
  res.y_star.resize(best_y.size());
  for (std::size_t i = 0; i < best_y.size(); ++i) res.y_star[i] = best_y[i] / best_norm;
  res.primal_value = res.X_star.trace();
  res.dual_value = std::accumulate(res.y_star.begin(), res.y_star.end(), 0.0);
  res.gap_ratio = res.primal_value / res.dual_value;
  return res;
}

}  // namespace psdp
