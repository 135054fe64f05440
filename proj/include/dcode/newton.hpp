#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "dcode/types.hpp"

namespace dcode {

struct NewtonConfig {
  double abs_tol = 1e-14;
  double rel_tol = 1e-14;
  int max_iters = 50;
  double fd_jacobian_scale = 1.0;
  int max_halvings = 10;
  int min_iters = 1;  // updates applied even when the guess already satisfies the tolerance

  void validate() const {
    if (!(abs_tol > 0.0)) throw std::invalid_argument("NewtonConfig: abs_tol must be positive");
    if (!(rel_tol >= 0.0)) throw std::invalid_argument("NewtonConfig: rel_tol must be nonnegative");
    if (max_iters < 1) throw std::invalid_argument("NewtonConfig: max_iters must be >= 1");
    if (min_iters < 0 || min_iters > max_iters) throw std::invalid_argument("NewtonConfig: bad min_iters");
  }

  /// Defaults scaled to an initial state: abs_tol = 1e-14 (1 + |u0|).
  template <typename Derived>
  static NewtonConfig for_state(const Eigen::MatrixBase<Derived>& u0) {
    NewtonConfig cfg;
    cfg.abs_tol = 1e-14 * (1.0 + max_norm(u0));
    return cfg;
  }
};

struct NewtonReport {
  int iterations = 0;
  double final_residual_norm = 0.0;
  bool converged = false;
  std::string diagnostic;
};

/// Non-finite residual; the iteration cannot continue.
class NonFiniteResidual : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

namespace detail {

template <typename Scalar, int Dim, typename Residual>
JacobianMatrix<Scalar, Dim> fd_jacobian(Residual& residual, const State<Scalar, Dim>& v,
                                        const State<Scalar, Dim>& r0, double scale) {
  const Index n = v.size();
  JacobianMatrix<Scalar, Dim> jac(n, n);
  const double root_eps = std::sqrt(std::numeric_limits<double>::epsilon());
  State<Scalar, Dim> w = v;
  for (Index i = 0; i < n; ++i) {
    const double h = scale * (1.0 + std::abs(v(i))) * root_eps;
    w(i) = v(i) + Scalar(h);
    jac.col(i) = (residual(w) - r0) / Scalar(h);
    w(i) = v(i);
  }
  return jac;
}

}  // namespace detail

/// Damped Newton iteration on residual(v) = 0, starting from v.
///
/// On return v holds the last iterate. Converged means
/// |residual(v)|_max <= abs_tol + rel_tol |v|_max after at least min_iters
/// updates. A singular Jacobian ends the iteration with converged = false;
/// a non-finite residual throws NonFiniteResidual.
template <typename Scalar, int Dim, typename Residual, typename Jacobian>
NewtonReport newton_solve(Residual&& residual, Jacobian&& jacobian, State<Scalar, Dim>& v, const NewtonConfig& cfg) {
  using Vec = State<Scalar, Dim>;
  NewtonReport rep;
  auto tol = [&](const Vec& x) { return cfg.abs_tol + cfg.rel_tol * max_norm(x); };

  Vec r = residual(v);
  if (!all_finite(r)) throw NonFiniteResidual("newton_solve: residual is not finite at the initial guess");
  double rn = max_norm(r);

  for (;;) {
    if (rep.iterations >= cfg.min_iters && rn <= tol(v)) {
      rep.converged = true;
      break;
    }
    if (rep.iterations >= cfg.max_iters) {
      rep.diagnostic = "iteration limit reached";
      break;
    }
    const JacobianMatrix<Scalar, Dim> jac = jacobian(v, r);
    Eigen::PartialPivLU<JacobianMatrix<Scalar, Dim>> lu(jac);
    bool singular = false;
    for (Index i = 0; i < jac.rows(); ++i) singular = singular || lu.matrixLU()(i, i) == Scalar(0);
    Vec delta;
    if (!singular) delta = lu.solve(r);
    if (singular || !all_finite(delta)) {
      rep.diagnostic = "singular Jacobian";
      break;
    }

    double lambda = 1.0;
    Vec trial = v - delta;
    Vec rt = residual(trial);
    double rtn = all_finite(rt) ? max_norm(rt) : std::numeric_limits<double>::infinity();
    for (int h = 0; h < cfg.max_halvings && rtn > rn && rtn > tol(trial); ++h) {
      lambda *= 0.5;
      trial = v - Scalar(lambda) * delta;
      rt = residual(trial);
      rtn = all_finite(rt) ? max_norm(rt) : std::numeric_limits<double>::infinity();
    }
    if (!all_finite(rt)) throw NonFiniteResidual("newton_solve: residual became non-finite");
    v = trial;
    r = rt;
    rn = rtn;
    ++rep.iterations;
  }
  rep.final_residual_norm = rn;
  return rep;
}

/// Newton iteration with a one-sided finite-difference Jacobian.
template <typename Scalar, int Dim, typename Residual>
NewtonReport newton_solve(Residual&& residual, State<Scalar, Dim>& v, const NewtonConfig& cfg) {
  auto fd = [&](const State<Scalar, Dim>& x, const State<Scalar, Dim>& rx) {
    return detail::fd_jacobian<Scalar, Dim>(residual, x, rx, cfg.fd_jacobian_scale);
  };
  return newton_solve<Scalar, Dim>(residual, fd, v, cfg);
}

}  // namespace dcode
