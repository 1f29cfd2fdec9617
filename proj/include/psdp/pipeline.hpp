#pragma once

// General-form solve: reduce to special form, run the solver, and map both
// halves of the certificate back to the original instance.

#include "psdp/solver.hpp"
#include "psdp/transform.hpp"
#include "psdp/verify.hpp"

namespace psdp {

struct GeneralSolve {
  SolveResult special;
  TransformRecord record;
  PullbackResult primal;
  DualPullback dual;

  double gap_ratio() const { return primal.objective / dual.value; }
};

/// `tuning` supplies max_iterations and assert_invariants; the remaining
/// parameters follow from epsilon and the special-form dimensions.
inline GeneralSolve solve_general(const PositiveSdpInstance& inst, double epsilon, const SolverParams& tuning = {}) {
  auto [special, record] = to_special_form(inst, epsilon);
  auto params = SolverParams::make(epsilon, special.n(), special.m());
  params.max_iterations = tuning.max_iterations;
  params.assert_invariants = tuning.assert_invariants;
  GeneralSolve out;
  out.special = solve(special, params);
  out.primal = pull_back(out.special.X_star, record, inst);
  out.dual = pull_back_dual(out.special.y_star, record, inst);
  out.record = std::move(record);
  return out;
}

}  // namespace psdp
