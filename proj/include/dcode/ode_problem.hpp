#pragma once

#include <functional>
#include <stdexcept>
#include <string>

#include "dcode/types.hpp"

namespace dcode {

/// u' = F(t, u), u(0) = u0 on [0, t_end].
template <typename Scalar, int Dim = Eigen::Dynamic>
struct OdeProblem {
  using ScalarType = Scalar;
  static constexpr int dimension = Dim;
  using StateType = State<Scalar, Dim>;
  using JacobianType = JacobianMatrix<Scalar, Dim>;
  using Rhs = std::function<StateType(double, const StateType&)>;
  using Jac = std::function<JacobianType(double, const StateType&)>;

  std::string name;
  StateType u0;
  double t_end = 1.0;
  Rhs rhs;
  Jac jacobian;  // optional; finite differences are used when empty

  [[nodiscard]] Index dim() const noexcept { return u0.size(); }
  [[nodiscard]] bool has_jacobian() const noexcept { return static_cast<bool>(jacobian); }

  void validate() const {
    if (!rhs) throw std::invalid_argument("OdeProblem '" + name + "': missing right-hand side");
    if (u0.size() < 1) throw std::invalid_argument("OdeProblem '" + name + "': empty initial state");
    if (!(t_end > 0.0)) throw std::invalid_argument("OdeProblem '" + name + "': t_end must be positive");
    const StateType f0 = rhs(0.0, u0);
    if (f0.size() != u0.size()) throw std::invalid_argument("OdeProblem '" + name + "': F has the wrong dimension");
    if (!all_finite(f0)) throw std::invalid_argument("OdeProblem '" + name + "': F(0, u0) is not finite");
    if (has_jacobian()) {
      const JacobianType j0 = jacobian(0.0, u0);
      if (j0.rows() != u0.size() || j0.cols() != u0.size())
        throw std::invalid_argument("OdeProblem '" + name + "': Jacobian has the wrong shape");
    }
  }
};

}  // namespace dcode
