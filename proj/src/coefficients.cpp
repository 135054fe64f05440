#include "dcode/coefficients.hpp"

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace dcode {

namespace {

using boost::multiprecision::cpp_int;

Rational rational_pow(const Rational& x, int e) {
  Rational r = 1;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

Rational factorial(int n) {
  cpp_int f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return Rational(f);
}

Rational binom(int n, int r) {
  cpp_int b = 1;
  for (int i = 1; i <= r; ++i) b = b * (n - r + i) / i;
  return Rational(b);
}

// sum_{j=0}^{order} (-1)^j C(order, j) (shift - j)^power
Rational alternating_moment(int order, const Rational& shift, int power) {
  Rational s = 0;
  for (int j = 0; j <= order; ++j) {
    const Rational term = binom(order, j) * rational_pow(shift - j, power);
    s += (j % 2 == 0) ? term : Rational(-term);
  }
  return s;
}

// k^{i+1} D-^{e_i}(D+D-)^{m_i} applied to x^q at x = 0 with k = 1.
Rational one_sided_moment(int i, int q) {
  const int e = (i % 2 == 0) ? 1 : 0;
  const int m = (i + 1) / 2;
  // D-(D+D-)^m at 0 is the (2m+1)-th difference with top offset m.
  return alternating_moment(2 * m + e, Rational(m), q);
}

}  // namespace

double to_double(const Rational& r) {
  using Wide = boost::multiprecision::cpp_bin_float_100;
  const Wide num(boost::multiprecision::numerator(r));
  const Wide den(boost::multiprecision::denominator(r));
  return static_cast<double>(num / den);
}

std::string to_fraction_string(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

TrapezoidCoeffs generate_trapezoid_coeffs(int p) {
  if (p < 1) throw std::invalid_argument("generate_trapezoid_coeffs: p must be >= 1");
  const int top = 2 * p + 1;

  // d[i] holds the current-level coefficient of k^i f^{(i)}(t_{n+1/2}) / i!
  // left after eliminating the lower derivatives. Level 1: d_{1,i} = 2^{1-i}.
  std::vector<Rational> d_odd(static_cast<std::size_t>(top) + 1), d_even(static_cast<std::size_t>(top) + 1);
  for (int i = 2; i <= top; ++i) {
    d_odd[static_cast<std::size_t>(i)] = Rational(1) / rational_pow(Rational(2), i - 1);
    d_even[static_cast<std::size_t>(i)] = d_odd[static_cast<std::size_t>(i)];
  }

  TrapezoidCoeffs out;
  out.p = p;
  out.c.assign(static_cast<std::size_t>(top) + 1, Rational(0));
  for (int q = 1; q <= p; ++q) {
    // Coefficient of the order-q stencil is fixed at level q.
    const Rational lead_odd = d_odd[static_cast<std::size_t>(2 * q + 1)];
    const Rational lead_even = d_even[static_cast<std::size_t>(2 * q)];
    out.c[static_cast<std::size_t>(2 * q + 1)] = lead_odd / factorial(2 * q + 1);
    out.c[static_cast<std::size_t>(2 * q)] = lead_even / (2 * factorial(2 * q));

    // Substitute f^{(2q+1)} and f^{(2q)} by their stencil expansions; the
    // remainders feed the higher-order terms of the next level.
    for (int i = q + 1; i <= p; ++i) {
      const Rational odd_moment = alternating_moment(2 * q + 1, Rational(2 * q + 1, 2), 2 * i + 1);
      d_odd[static_cast<std::size_t>(2 * i + 1)] -= lead_odd / factorial(2 * q + 1) * odd_moment;
      const Rational even_moment = alternating_moment(2 * q, Rational(2 * q + 1, 2), 2 * i) +
                                   alternating_moment(2 * q, Rational(2 * q - 1, 2), 2 * i);
      d_even[static_cast<std::size_t>(2 * i)] -= lead_even / (factorial(2 * q) * 2) * even_moment;
    }
  }
  return out;
}

EulerCoeffs generate_euler_coeffs(int p, EulerVariant variant) {
  if (p < 1) throw std::invalid_argument("generate_euler_coeffs: p must be >= 1");
  EulerCoeffs out;
  out.p = p;
  out.variant = variant;
  out.a.assign(static_cast<std::size_t>(p) + 1, Rational(0));
  out.a[1] = 1;
  // Match x^q, q = 2..p, at x = 0 with k = 1. The system is lower triangular:
  // term i annihilates degrees <= i and maps x^{i+1} to (i+1)!.
  for (int q = 2; q <= p; ++q) {
    const Rational lead = (variant == EulerVariant::forward) ? Rational(1) : Rational(q % 2 == 0 ? -1 : 1);
    Rational rhs = lead;
    for (int i = 1; i < q - 1; ++i) rhs -= out.a[static_cast<std::size_t>(i) + 1] * one_sided_moment(i, q);
    const Rational pivot = one_sided_moment(q - 1, q);
    if (pivot == 0) throw std::logic_error("generate_euler_coeffs: singular moment system");
    out.a[static_cast<std::size_t>(q)] = rhs / pivot;
  }
  return out;
}

namespace {

std::mutex cache_mutex;

std::vector<double> snapshot(const std::vector<Rational>& v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = to_double(v[i]);
  return out;
}

}  // namespace

std::vector<double> trapezoid_coeffs_double(int p) {
  static std::vector<double> cache;
  const std::lock_guard<std::mutex> lock(cache_mutex);
  const std::size_t needed = static_cast<std::size_t>(2 * p + 2);
  if (cache.size() < needed) cache = snapshot(generate_trapezoid_coeffs(std::max(p, 1)).c);
  return {cache.begin(), cache.begin() + static_cast<std::ptrdiff_t>(needed)};
}

std::vector<double> euler_coeffs_double(int p, EulerVariant variant) {
  static std::map<EulerVariant, std::vector<double>> cache;
  const std::lock_guard<std::mutex> lock(cache_mutex);
  auto& entry = cache[variant];
  const std::size_t needed = static_cast<std::size_t>(p + 1);
  if (entry.size() < needed) entry = snapshot(generate_euler_coeffs(std::max(p, 1), variant).a);
  return {entry.begin(), entry.begin() + static_cast<std::ptrdiff_t>(needed)};
}

}  // namespace dcode
