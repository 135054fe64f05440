#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <type_traits>

#include <Eigen/Dense>

namespace dcode {

using Index = std::ptrdiff_t;

template <typename Scalar, int Dim = Eigen::Dynamic>
using State = Eigen::Matrix<Scalar, Dim, 1>;

template <typename Scalar, int Dim = Eigen::Dynamic>
using JacobianMatrix = Eigen::Matrix<Scalar, Dim, Dim>;

// States stored column-wise; column i holds one state vector.
template <typename Scalar, int Dim = Eigen::Dynamic>
using StateBlock = Eigen::Matrix<Scalar, Dim, Eigen::Dynamic>;

template <typename T>
struct is_complex : std::false_type {};
template <typename T>
struct is_complex<std::complex<T>> : std::true_type {};

template <typename Derived>
[[nodiscard]] inline double max_norm(const Eigen::MatrixBase<Derived>& v) {
  if (v.size() == 0) return 0.0;
  return static_cast<double>(v.cwiseAbs().maxCoeff());
}

template <typename Derived>
[[nodiscard]] inline bool all_finite(const Eigen::MatrixBase<Derived>& v) {
  for (Index i = 0; i < v.size(); ++i) {
    const auto x = v.derived().coeff(i);
    if constexpr (is_complex<typename Derived::Scalar>::value) {
      if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
    } else {
      if (!std::isfinite(x)) return false;
    }
  }
  return true;
}

/// Raised when an implicit step cannot be solved or produces non-finite data.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, Index step_index, double time)
      : std::runtime_error(what), step_index_(step_index), time_(time) {}

  [[nodiscard]] Index step_index() const noexcept { return step_index_; }
  [[nodiscard]] double time() const noexcept { return time_; }

 private:
  Index step_index_;
  double time_;
};

}  // namespace dcode
