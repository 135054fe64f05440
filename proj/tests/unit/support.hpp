#pragma once

#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "dcode/grid_seq.hpp"
#include "dcode/ode_problem.hpp"

namespace dcode::testing {

using Seq1 = GridSeq<double, 1>;

inline Seq1 sampled(double k, Index first, Index count, const std::function<double(double)>& f) {
  Seq1 s(k, first, count, 1);
  for (Index n = first; n < first + count; ++n) s[n](0) = f(static_cast<double>(n) * k);
  return s;
}

inline Seq1 random_seq(double k, Index first, Index count, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Seq1 s(k, first, count, 1);
  for (Index n = first; n < first + count; ++n) s[n](0) = dist(gen);
  return s;
}

// Plain sequence with first index, used for the nested-operator oracle.
struct Nested {
  Index first = 0;
  double k = 1.0;
  std::vector<double> v;

  static Nested from(const Seq1& s) {
    Nested out{s.first(), s.step(), {}};
    for (Index n = s.first(); n <= s.last(); ++n) out.v.push_back(s[n](0));
    return out;
  }
  [[nodiscard]] Index last() const { return first + static_cast<Index>(v.size()) - 1; }
  [[nodiscard]] double at(Index n) const { return v.at(static_cast<std::size_t>(n - first)); }

  // D+ : result defined on [first, last-1]
  [[nodiscard]] Nested plus() const {
    Nested o{first, k, {}};
    for (Index n = first; n < last(); ++n) o.v.push_back((at(n + 1) - at(n)) / k);
    return o;
  }
  // D- : result defined on [first+1, last]
  [[nodiscard]] Nested minus() const {
    Nested o{first + 1, k, {}};
    for (Index n = first + 1; n <= last(); ++n) o.v.push_back((at(n) - at(n - 1)) / k);
    return o;
  }
  [[nodiscard]] Nested composite(int m) const {
    Nested o = *this;
    for (int i = 0; i < m; ++i) o = o.minus().plus();
    return o;
  }
};

inline OdeProblem<std::complex<double>, 1> dahlquist(std::complex<double> lambda) {
  using C = std::complex<double>;
  OdeProblem<C, 1> p;
  p.name = "dahlquist";
  p.u0 = State<C, 1>::Constant(C(1.0));
  p.t_end = 1.0;
  p.rhs = [lambda](double, const State<C, 1>& u) -> State<C, 1> { return lambda * u; };
  p.jacobian = [lambda](double, const State<C, 1>&) -> JacobianMatrix<C, 1> {
    return JacobianMatrix<C, 1>::Constant(lambda);
  };
  return p;
}

inline OdeProblem<double, 1> scalar_problem(std::function<double(double, double)> f, double u0, double t_end) {
  OdeProblem<double, 1> p;
  p.name = "scalar";
  p.u0 = State<double, 1>::Constant(u0);
  p.t_end = t_end;
  p.rhs = [f](double t, const State<double, 1>& u) -> State<double, 1> { return State<double, 1>::Constant(f(t, u(0))); };
  return p;
}

}  // namespace dcode::testing
