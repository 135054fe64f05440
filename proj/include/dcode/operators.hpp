#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "dcode/grid_seq.hpp"

namespace dcode {

/// Binomial coefficient as a double; exact for the stencil sizes used here.
[[nodiscard]] inline double binomial(int n, int r) {
  if (r < 0 || r > n) return 0.0;
  double b = 1.0;
  for (int i = 1; i <= r; ++i) b = b * (n - r + i) / i;
  return std::round(b);
}

/// Signed weights (-1)^i C(order, i) of an order-th difference, attached to
/// the offsets top, top-1, ..., top-order. Entry i belongs to offset top-i.
[[nodiscard]] inline std::vector<double> difference_weights(int order) {
  std::vector<double> w(static_cast<std::size_t>(order) + 1);
  for (int i = 0; i <= order; ++i) w[static_cast<std::size_t>(i)] = (i % 2 == 0 ? 1.0 : -1.0) * binomial(order, i);
  return w;
}

namespace detail {

// k^{-order} * sum_i (-1)^i C(order,i) s[top - i]
template <typename Scalar, int Dim>
State<Scalar, Dim> binomial_difference(const GridSeq<Scalar, Dim>& s, Index top, int order) {
  s.require(top - order, top);
  const auto w = difference_weights(order);
  State<Scalar, Dim> acc = State<Scalar, Dim>::Zero(s.dim());
  for (int i = 0; i <= order; ++i) acc += w[static_cast<std::size_t>(i)] * s[top - i];
  return acc / std::pow(s.step(), order);
}

}  // namespace detail

/// D+ s at n: (s[n+1] - s[n]) / k
template <typename Scalar, int Dim>
[[nodiscard]] State<Scalar, Dim> forward_diff(const GridSeq<Scalar, Dim>& s, Index n) {
  s.require(n, n + 1);
  return (s[n + 1] - s[n]) / s.step();
}

/// D- s at n: (s[n] - s[n-1]) / k
template <typename Scalar, int Dim>
[[nodiscard]] State<Scalar, Dim> backward_diff(const GridSeq<Scalar, Dim>& s, Index n) {
  s.require(n - 1, n);
  return (s[n] - s[n - 1]) / s.step();
}

/// E s at n+1/2: (s[n+1] + s[n]) / 2
template <typename Scalar, int Dim>
[[nodiscard]] State<Scalar, Dim> average(const GridSeq<Scalar, Dim>& s, Index n) {
  s.require(n, n + 1);
  return (s[n + 1] + s[n]) / 2.0;
}

/// (D+D-)^m s at n, evaluated through the binomial closed form on n-m .. n+m.
template <typename Scalar, int Dim>
[[nodiscard]] State<Scalar, Dim> composite_power(const GridSeq<Scalar, Dim>& s, Index n, int m) {
  if (m < 0) throw std::invalid_argument("composite_power: m must be nonnegative");
  return detail::binomial_difference(s, n + m, 2 * m);
}

/// D-(D+D-)^m s at n, stencil n-m-1 .. n+m.
template <typename Scalar, int Dim>
[[nodiscard]] State<Scalar, Dim> odd_composite(const GridSeq<Scalar, Dim>& s, Index n, int m) {
  if (m < 0) throw std::invalid_argument("odd_composite: m must be nonnegative");
  return detail::binomial_difference(s, n + m, 2 * m + 1);
}

/// D(D+D-)^m s at n+1/2, stencil n-m .. n+1+m. Equal to D-(D+D-)^m at n+1.
template <typename Scalar, int Dim>
[[nodiscard]] State<Scalar, Dim> midpoint_centered_diff(const GridSeq<Scalar, Dim>& s, Index n, int m) {
  if (m < 0) throw std::invalid_argument("midpoint_centered_diff: m must be nonnegative");
  return detail::binomial_difference(s, n + 1 + m, 2 * m + 1);
}

}  // namespace dcode
