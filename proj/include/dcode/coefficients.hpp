#pragma once

#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace dcode {

/// Exact fraction in lowest terms with a positive denominator.
using Rational = boost::multiprecision::cpp_rational;

/// Nearest double to an exact rational.
[[nodiscard]] double to_double(const Rational& r);

/// "numerator/denominator" in lowest terms.
[[nodiscard]] std::string to_fraction_string(const Rational& r);

/// Central-difference coefficients c_2 .. c_{2p+1}.
///
/// c(2i+1) weights k^{2i} D(D+D-)^i in the midpoint derivative expansion and
/// c(2i) weights k^{2i} (D+D-)^i E in the midpoint value expansion. Entries
/// are independent of p: generating with a larger p only appends.
struct TrapezoidCoeffs {
  int p = 0;
  std::vector<Rational> c;  // c[i] for i in [2, 2p+1]; c[0], c[1] unused

  [[nodiscard]] const Rational& operator()(int i) const { return c.at(static_cast<std::size_t>(i)); }
  [[nodiscard]] int first_index() const noexcept { return 2; }
  [[nodiscard]] int last_index() const noexcept { return 2 * p + 1; }
};

enum class EulerVariant { forward, backward };

/// One-sided coefficients a_1 .. a_p of
///   f'(t_n) = D f(t_n) - sum_{i=1}^{p-1} a_{i+1} k^i D-^{e_i} (D+D-)^{m_i} f(t_n) + O(k^p)
/// with e_i = (1 + (-1)^i)/2 and m_i = floor((i+1)/2). The forward variant
/// leads with D = D+ (the explicit Euler hierarchy); the backward variant
/// leads with D = D- (the implicit hierarchy).
struct EulerCoeffs {
  int p = 0;
  EulerVariant variant = EulerVariant::forward;
  std::vector<Rational> a;  // a[i] for i in [1, p]; a[0] unused

  [[nodiscard]] const Rational& operator()(int i) const { return a.at(static_cast<std::size_t>(i)); }
};

[[nodiscard]] TrapezoidCoeffs generate_trapezoid_coeffs(int p);

[[nodiscard]] EulerCoeffs generate_euler_coeffs(int p, EulerVariant variant = EulerVariant::forward);

/// Process-wide cached double snapshots. Entry i is the coefficient with
/// index i; the vectors grow on demand and entries never change once set.
[[nodiscard]] std::vector<double> trapezoid_coeffs_double(int p);
[[nodiscard]] std::vector<double> euler_coeffs_double(int p, EulerVariant variant);

}  // namespace dcode
