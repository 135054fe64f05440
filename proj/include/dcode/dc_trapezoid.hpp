#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dcode/fit.hpp"
#include "dcode/marching.hpp"
#include "dcode/operators.hpp"

namespace dcode {

/// Modified trapezoidal rule (DC2) over `range`, which must contain 0.
/// Negative indices are reached by marching backward from u0.
template <typename Scalar, int Dim>
Trajectory<Scalar, Dim> dc2_run(const OdeProblem<Scalar, Dim>& problem, double k, IndexRange range,
                                const NewtonConfig& newton) {
  return run_stage<Scalar, Dim>(problem, trapezoid_stage_stencil(0, trapezoid_coeffs_double(1)), k, range,
                                std::max<Index>(range.last, 0), nullptr, newton);
}

/// Lambda and Gamma of correction depth j at n+1/2, from a stage of order 2j.
///   Lambda = sum_i c_{2i+1} k^{2i} D(D+D-)^i lower
///   Gamma  = sum_i c_{2i}   k^{2i} (D+D-)^i E lower
template <typename Scalar, int Dim>
std::pair<State<Scalar, Dim>, State<Scalar, Dim>> correction_terms(const Trajectory<Scalar, Dim>& lower, int j,
                                                                   Index n) {
  if (j < 1) throw std::invalid_argument("correction_terms: j must be >= 1");
  lower.states.require(n - j, n + 1 + j);
  const auto c = trapezoid_coeffs_double(j);
  const double k = lower.step();
  State<Scalar, Dim> lam = State<Scalar, Dim>::Zero(lower.states.dim());
  State<Scalar, Dim> gam = State<Scalar, Dim>::Zero(lower.states.dim());
  for (int i = 1; i <= j; ++i) {
    const double k2i = std::pow(k, 2 * i);
    lam += (c[static_cast<std::size_t>(2 * i + 1)] * k2i) * midpoint_centered_diff(lower.states, n, i);
    const State<Scalar, Dim> avg = (composite_power(lower.states, n + 1, i) + composite_power(lower.states, n, i)) / 2.0;
    gam += (c[static_cast<std::size_t>(2 * i)] * k2i) * avg;
  }
  return {lam, gam};
}

/// Corrected stage of order 2j+2 built on `lower` (order 2j) over `range`.
template <typename Scalar, int Dim>
Trajectory<Scalar, Dim> dc_stage_run(const OdeProblem<Scalar, Dim>& problem, const Trajectory<Scalar, Dim>& lower,
                                     int j, IndexRange range, const NewtonConfig& newton) {
  if (j < 1) throw std::invalid_argument("dc_stage_run: j must be >= 1");
  if (lower.stage_order != 2 * j)
    throw std::invalid_argument("dc_stage_run: lower stage has order " + std::to_string(lower.stage_order) +
                                ", expected " + std::to_string(2 * j));
  TrajectorySource<Scalar, Dim> src(lower);
  return run_stage<Scalar, Dim>(problem, trapezoid_stage_stencil(j, trapezoid_coeffs_double(j)), lower.step(), range,
                                lower.n_steps, &src, newton);
}

/// DC(order) on [0, N], N = steps_for_horizon(problem.t_end, k).
template <typename Scalar, int Dim>
Trajectory<Scalar, Dim> dc_solve(const OdeProblem<Scalar, Dim>& problem, const SchemeSpec& spec, double k,
                                 const NewtonConfig& newton, RunStats* stats = nullptr) {
  if (spec.family != SchemeFamily::trapezoid_dc) throw std::invalid_argument("dc_solve: not a trapezoid DC scheme");
  return solve_scheme<Scalar, Dim>(problem, spec, k, steps_for_horizon(problem.t_end, k), newton, stats);
}

/// Whole hierarchy stage by stage, every stage kept in full. Element s-1 is
/// stage s on its inflated range. Equal bit for bit to the pipelined run.
template <typename Scalar, int Dim>
std::vector<Trajectory<Scalar, Dim>> dc_stages(const OdeProblem<Scalar, Dim>& problem, const SchemeSpec& spec,
                                               double k, const NewtonConfig& newton) {
  const Index n_steps = steps_for_horizon(problem.t_end, k);
  const auto ranges = stage_ranges(spec, n_steps);
  std::vector<Trajectory<Scalar, Dim>> out;
  for (int s = 1; s <= spec.stage_count(); ++s) {
    const IndexRange r = ranges[static_cast<std::size_t>(s - 1)];
    if (s == 1) {
      out.push_back(run_stage<Scalar, Dim>(problem, stage_stencil(spec, 1), k, r, n_steps, nullptr, newton));
    } else {
      TrajectorySource<Scalar, Dim> src(out.back());
      out.push_back(run_stage<Scalar, Dim>(problem, stage_stencil(spec, s), k, r, n_steps, &src, newton));
    }
  }
  return out;
}

/// Residuals of the deferred correction condition for one stage against a
/// reference on the same grid, for n = 1 .. N-2:
///   r1[n] = |D(D+D-) e| at n+1/2,  r2[n] = |D+D- e| at n+1,  e = stage - reference.
struct DccReport {
  std::vector<double> r1;
  std::vector<double> r2;
  double max_r1 = 0.0;
  double max_r2 = 0.0;
  double bound_estimate = 0.0;  // max(max_r1, max_r2) / k^{order}
};

template <typename Scalar, int Dim>
DccReport dcc_residual(const Trajectory<Scalar, Dim>& stage, const Trajectory<Scalar, Dim>& reference) {
  if (stage.step() != reference.step() || stage.n_steps != reference.n_steps)
    throw std::invalid_argument("dcc_residual: grids differ");
  const Index N = stage.n_steps;
  if (N < 4) throw std::invalid_argument("dcc_residual: need at least 4 steps");
  StateBlock<Scalar, Dim> diff(stage.states.dim(), N + 1);
  for (Index n = 0; n <= N; ++n) diff.col(n) = stage[n] - reference[n];
  const GridSeq<Scalar, Dim> e(stage.step(), 0, std::move(diff));
  DccReport rep;
  rep.r1.reserve(static_cast<std::size_t>(N - 2));
  rep.r2.reserve(static_cast<std::size_t>(N - 2));
  for (Index n = 1; n <= N - 2; ++n) {
    rep.r1.push_back(max_norm(midpoint_centered_diff(e, n, 1)));
    rep.r2.push_back(max_norm(composite_power(e, n + 1, 1)));
  }
  rep.max_r1 = *std::max_element(rep.r1.begin(), rep.r1.end());
  rep.max_r2 = *std::max_element(rep.r2.begin(), rep.r2.end());
  rep.bound_estimate = std::max(rep.max_r1, rep.max_r2) / std::pow(stage.step(), stage.stage_order);
  return rep;
}

}  // namespace dcode
