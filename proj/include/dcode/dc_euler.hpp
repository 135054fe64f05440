#pragma once

#include <stdexcept>
#include <vector>

#include "dcode/marching.hpp"

namespace dcode {

/// Euler stage j+1 over `range`; `lower` is stage j (none for j = 0).
template <typename Scalar, int Dim>
Trajectory<Scalar, Dim> euler_stage_run(const OdeProblem<Scalar, Dim>& problem, const Trajectory<Scalar, Dim>* lower,
                                        int j, EulerVariant variant, double k, IndexRange range, Index n_steps,
                                        const NewtonConfig& newton) {
  if (j < 0) throw std::invalid_argument("euler_stage_run: j must be >= 0");
  const StageStencil st = euler_stage_stencil(j, variant, euler_coeffs_double(j + 1, variant));
  if (j == 0) {
    if (lower) throw std::invalid_argument("euler_stage_run: stage 1 takes no lower stage");
    return run_stage<Scalar, Dim>(problem, st, k, range, n_steps, nullptr, newton);
  }
  if (!lower) throw std::invalid_argument("euler_stage_run: missing lower stage");
  if (lower->stage_order != j) throw std::invalid_argument("euler_stage_run: lower stage has the wrong order");
  TrajectorySource<Scalar, Dim> src(*lower);
  return run_stage<Scalar, Dim>(problem, st, lower->step(), range, lower->n_steps, &src, newton);
}

template <typename Scalar, int Dim>
Trajectory<Scalar, Dim> euler_dc_solve(const OdeProblem<Scalar, Dim>& problem, const SchemeSpec& spec, double k,
                                       const NewtonConfig& newton, RunStats* stats = nullptr) {
  if (spec.family == SchemeFamily::trapezoid_dc) throw std::invalid_argument("euler_dc_solve: not an Euler scheme");
  return solve_scheme<Scalar, Dim>(problem, spec, k, steps_for_horizon(problem.t_end, k), newton, stats);
}

/// Residuals |D+D- (u - reference)| at n = 1 .. N-1 and their maximum.
template <typename Scalar, int Dim>
double euler_dcc_max(const Trajectory<Scalar, Dim>& stage, const Trajectory<Scalar, Dim>& reference) {
  if (stage.step() != reference.step() || stage.n_steps != reference.n_steps)
    throw std::invalid_argument("euler_dcc_max: grids differ");
  double m = 0.0;
  const double k2 = stage.step() * stage.step();
  for (Index n = 1; n < stage.n_steps; ++n) {
    const State<Scalar, Dim> e = (stage[n + 1] - reference[n + 1]) - 2.0 * (stage[n] - reference[n]) +
                                 (stage[n - 1] - reference[n - 1]);
    m = std::max(m, max_norm(e) / k2);
  }
  return m;
}

}  // namespace dcode
