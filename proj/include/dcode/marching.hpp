#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dcode/newton.hpp"
#include "dcode/ode_problem.hpp"
#include "dcode/scheme.hpp"
#include "dcode/trajectory.hpp"

namespace dcode {

struct RunStats {
  Index steps = 0;          // implicit or explicit steps over all stages, ghosts included
  Index newton_iterations = 0;
  int max_newton_iterations = 0;

  void merge(const RunStats& o) {
    steps += o.steps;
    newton_iterations += o.newton_iterations;
    max_newton_iterations = std::max(max_newton_iterations, o.max_newton_iterations);
  }
};

/// Marches one stage of a deferred-correction hierarchy over an index range.
///
/// Left ghosts (negative indices) are produced at construction by marching
/// backward from u0 with the same step relation solved for the earlier state.
/// Forward values are produced lazily as consumers fetch them and live in a
/// ring buffer of `capacity` states; a capacity of range().last + 1 keeps
/// every forward value.
template <typename Scalar, int Dim>
class StageMarcher final : public StateSource<Scalar, Dim> {
 public:
  using Problem = OdeProblem<Scalar, Dim>;
  using Vec = State<Scalar, Dim>;
  using Mat = JacobianMatrix<Scalar, Dim>;
  using Block = StateBlock<Scalar, Dim>;
  using Weights = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  StageMarcher(const Problem& problem, StageStencil stencil, double k, IndexRange range,
               StateSource<Scalar, Dim>* lower, const NewtonConfig& newton, Index capacity)
      : problem_(problem), st_(std::move(stencil)), k_(k), range_(range), lower_(lower), newton_(newton) {
    if (!(k_ > 0.0)) throw std::invalid_argument("StageMarcher: step must be positive");
    if (range_.first > 0 || range_.last < 0) throw std::invalid_argument("StageMarcher: range must contain 0");
    if (st_.has_lower() != (lower_ != nullptr)) throw std::invalid_argument("StageMarcher: lower stage mismatch");
    if (lower_) {
      const IndexRange need = lower_range_for(st_, range_);
      const IndexRange have = lower_->range();
      if (need.first < have.first || need.last > have.last) {
        throw std::out_of_range("StageMarcher: lower stage covers [" + std::to_string(have.first) + ", " +
                                std::to_string(have.last) + "] but stage " + std::to_string(st_.stage) + " needs [" +
                                std::to_string(need.first) + ", " + std::to_string(need.last) + "]");
      }
      lambda_ = to_weights(st_.lambda);
      gamma_ = to_weights(st_.gamma);
      window_.resize(problem_.dim(), st_.width());
    }
    switch (st_.eval) {
      case EvalPoint::left: a_ = 0.0; break;
      case EvalPoint::midpoint: a_ = 0.5; break;
      case EvalPoint::right: a_ = 1.0; break;
    }
    capacity_ = std::clamp<Index>(capacity, 2, range_.last + 1);
    ring_.resize(problem_.dim(), capacity_);
    ring_.col(0) = problem_.u0;
    head_ = 0;
    march_ghosts();
  }

  [[nodiscard]] IndexRange range() const override { return range_; }
  [[nodiscard]] const RunStats& stats() const noexcept { return stats_; }
  [[nodiscard]] const StageStencil& stencil() const noexcept { return st_; }
  [[nodiscard]] Index head() const noexcept { return head_; }

  void fetch(Index first, Index count, Block& out) override {
    const Index last = first + count - 1;
    if (first < range_.first || last > range_.last) {
      throw std::out_of_range("stage " + std::to_string(st_.stage) + ": request [" + std::to_string(first) + ", " +
                              std::to_string(last) + "] outside [" + std::to_string(range_.first) + ", " +
                              std::to_string(range_.last) + "]");
    }
    advance_to(last);
    for (Index n = first; n <= last; ++n) out.col(n - first) = value(n);
  }

  /// State at n; forward values must not have been evicted from the ring.
  [[nodiscard]] Vec value(Index n) {
    if (n < range_.first || n > range_.last) throw std::out_of_range("StageMarcher: index " + std::to_string(n) + " outside range");
    if (n < 0) return ghosts_.col(n - range_.first);
    advance_to(n);
    if (n <= head_ - capacity_) throw std::logic_error("StageMarcher: value " + std::to_string(n) + " was evicted");
    return ring_.col(n % capacity_);
  }

  void advance_to(Index n) {
    while (head_ < n) {
      const Vec next = step_forward(head_, ring_.col(head_ % capacity_));
      ++head_;
      ring_.col(head_ % capacity_) = next;
    }
  }

 private:
  static Weights to_weights(const std::vector<double>& w) {
    Weights out(static_cast<Index>(w.size()));
    for (Index i = 0; i < out.size(); ++i) out(i) = Scalar(w[static_cast<std::size_t>(i)]);
    return out;
  }

  void march_ghosts() {
    const Index g = -range_.first;
    ghosts_.resize(problem_.dim(), g);
    Vec right = problem_.u0;
    for (Index n = -1; n >= range_.first; --n) {
      right = step_backward(n, right);
      ghosts_.col(n - range_.first) = right;
    }
  }

  // Loads lower[n+lo .. n+hi] and forms the stencil sums.
  void load_corrections(Index n) {
    if (!lower_) return;
    lower_->fetch(n + st_.lo, st_.width(), window_);
    lam_.noalias() = window_ * lambda_;
    gam_.noalias() = window_ * gamma_;
  }

  // lower[n+1] - lower[n] from the loaded window
  Vec lower_increment(Index /*n*/) const { return window_.col(1 - st_.lo) - window_.col(-st_.lo); }

  Vec eval_rhs(double t, const Vec& x) const { return problem_.rhs(t, x); }

  Mat eval_jac(double t, const Vec& x) const {
    if (problem_.has_jacobian()) return problem_.jacobian(t, x);
    return Mat();  // unused: finite differences are taken on the residual
  }

  [[noreturn]] void fail(Index n, double t, const std::string& why) const {
    std::ostringstream os;
    os << "stage " << st_.stage << " (order " << st_.order << "): " << why << " at step index " << n << ", t = " << t;
    throw SolverError(os.str(), n, t);
  }

  void record(const NewtonReport& rep) {
    stats_.newton_iterations += rep.iterations;
    stats_.max_newton_iterations = std::max(stats_.max_newton_iterations, rep.iterations);
  }

  // u^{n+1} from u^n
  Vec step_forward(Index n, const Vec& un) {
    load_corrections(n);
    ++stats_.steps;
    const double ts = (static_cast<double>(n) + a_) * k_;
    const Scalar kk(k_);
    if (a_ == 0.0) {
      Vec x = un;
      if (lower_) x -= gam_;
      Vec v = un + kk * eval_rhs(ts, x);
      if (lower_) v += lam_;
      if (!all_finite(v)) fail(n + 1, ts, "non-finite state");
      return v;
    }
    const Scalar a(a_), b(1.0 - a_);
    Vec base = un;
    if (lower_) base += lam_;
    auto state_arg = [&](const Vec& v) {
      Vec x = a * v + b * un;
      if (lower_) x -= gam_;
      return x;
    };
    auto residual = [&](const Vec& v) -> Vec { return v - base - kk * eval_rhs(ts, state_arg(v)); };
    Vec v = un;
    if (lower_) v += lower_increment(n);
    solve(residual, state_arg, ts, kk * a, v, n + 1);
    return v;
  }

  // u^n from u^{n+1}
  Vec step_backward(Index n, const Vec& un1) {
    load_corrections(n);
    ++stats_.steps;
    const double ts = (static_cast<double>(n) + a_) * k_;
    const Scalar kk(k_);
    if (a_ == 1.0) {
      Vec x = un1;
      if (lower_) x -= gam_;
      Vec w = un1 - kk * eval_rhs(ts, x);
      if (lower_) w -= lam_;
      if (!all_finite(w)) fail(n, ts, "non-finite state");
      return w;
    }
    const Scalar a(a_), b(1.0 - a_);
    Vec base = un1;
    if (lower_) base -= lam_;
    auto state_arg = [&](const Vec& w) {
      Vec x = a * un1 + b * w;
      if (lower_) x -= gam_;
      return x;
    };
    // written as w - (u^{n+1} - Lambda) + k F so that the Jacobian is I + k b J
    auto residual = [&](const Vec& w) -> Vec { return w - base + kk * eval_rhs(ts, state_arg(w)); };
    Vec w = un1;
    if (lower_) w -= lower_increment(n);
    solve(residual, state_arg, ts, -kk * b, w, n);
    return w;
  }

  // Newton on residual(v) whose Jacobian is I - coef * J_F(ts, state_arg(v)).
  template <typename Residual, typename StateArg>
  void solve(Residual& residual, StateArg& state_arg, double ts, Scalar coef, Vec& v, Index n) {
    NewtonReport rep;
    try {
      if (problem_.has_jacobian()) {
        auto jac = [&](const Vec& x, const Vec&) -> Mat {
          return Mat::Identity(x.size(), x.size()) - coef * eval_jac(ts, state_arg(x));
        };
        rep = newton_solve<Scalar, Dim>(residual, jac, v, newton_);
      } else {
        rep = newton_solve<Scalar, Dim>(residual, v, newton_);
      }
    } catch (const NonFiniteResidual& e) {
      fail(n, ts, e.what());
    }
    record(rep);
    if (!rep.converged) {
      std::ostringstream os;
      os << "Newton did not converge (" << rep.diagnostic << ", residual " << rep.final_residual_norm << " after "
         << rep.iterations << " iterations)";
      fail(n, ts, os.str());
    }
  }

  const Problem& problem_;
  StageStencil st_;
  double k_;
  IndexRange range_;
  StateSource<Scalar, Dim>* lower_;
  NewtonConfig newton_;
  double a_ = 0.5;

  Weights lambda_, gamma_;
  Block window_;
  Vec lam_, gam_;

  Block ghosts_;
  Block ring_;
  Index capacity_ = 2;
  Index head_ = 0;
  RunStats stats_;
};

/// Callback receiving final-stage states in increasing index order.
template <typename Scalar, int Dim>
using StateSink = std::function<void(Index, const State<Scalar, Dim>&)>;

/// Pipelined run of a whole hierarchy: every stage keeps only the window its
/// consumer needs, so memory does not grow with the number of steps. Final
/// stage states for n = 0 .. n_steps are passed to `sink`.
template <typename Scalar, int Dim>
RunStats stream_scheme(const OdeProblem<Scalar, Dim>& problem, const SchemeSpec& spec, double k, Index n_steps,
                       const NewtonConfig& newton, const StateSink<Scalar, Dim>& sink) {
  problem.validate();
  newton.validate();
  if (n_steps < 1) throw std::invalid_argument("stream_scheme: n_steps must be >= 1");
  const int stages = spec.stage_count();
  const auto ranges = stage_ranges(spec, n_steps);
  std::vector<std::unique_ptr<StageMarcher<Scalar, Dim>>> marchers;
  marchers.reserve(static_cast<std::size_t>(stages));
  for (int s = 1; s <= stages; ++s) {
    const Index capacity = s < stages ? stage_stencil(spec, s + 1).width() + 1 : 2;
    StateSource<Scalar, Dim>* lower = s > 1 ? marchers.back().get() : nullptr;
    marchers.push_back(std::make_unique<StageMarcher<Scalar, Dim>>(
        problem, stage_stencil(spec, s), k, ranges[static_cast<std::size_t>(s - 1)], lower, newton, capacity));
  }
  auto& top = *marchers.back();
  for (Index n = 0; n <= n_steps; ++n) sink(n, top.value(n));
  RunStats stats;
  for (const auto& m : marchers) stats.merge(m->stats());
  return stats;
}

/// Full final-stage trajectory on [0, n_steps].
template <typename Scalar, int Dim>
Trajectory<Scalar, Dim> solve_scheme(const OdeProblem<Scalar, Dim>& problem, const SchemeSpec& spec, double k,
                                     Index n_steps, const NewtonConfig& newton, RunStats* stats = nullptr) {
  StateBlock<Scalar, Dim> block(problem.dim(), n_steps + 1);
  const RunStats st = stream_scheme<Scalar, Dim>(problem, spec, k, n_steps, newton,
                                                 [&](Index n, const State<Scalar, Dim>& u) { block.col(n) = u; });
  if (stats) *stats = st;
  Trajectory<Scalar, Dim> out;
  out.states = GridSeq<Scalar, Dim>(k, 0, std::move(block));
  out.n_steps = n_steps;
  out.stage_order = spec.order;
  return out;
}

/// Runs a single stage over `range` with every value retained.
template <typename Scalar, int Dim>
Trajectory<Scalar, Dim> run_stage(const OdeProblem<Scalar, Dim>& problem, const StageStencil& stencil, double k,
                                  IndexRange range, Index n_steps, StateSource<Scalar, Dim>* lower,
                                  const NewtonConfig& newton, RunStats* stats = nullptr) {
  problem.validate();
  newton.validate();
  StageMarcher<Scalar, Dim> m(problem, stencil, k, range, lower, newton, range.last + 1);
  StateBlock<Scalar, Dim> block(problem.dim(), range.size());
  for (Index n = range.first; n <= range.last; ++n) block.col(n - range.first) = m.value(n);
  if (stats) *stats = m.stats();
  Trajectory<Scalar, Dim> out;
  out.states = GridSeq<Scalar, Dim>(k, range.first, std::move(block));
  out.n_steps = n_steps;
  out.stage_order = stencil.order;
  return out;
}

}  // namespace dcode
