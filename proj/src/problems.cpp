#include "dcode/problems.hpp"

#include <cmath>
#include <complex>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace dcode {

std::string to_string(ErrorKind k) { return k == ErrorKind::absolute ? "absolute" : "relative"; }

const std::vector<std::string>& benchmark_names() {
  static const std::vector<std::string> names{"oscillator", "krogh", "robertson", "d6", "oregonator", "vdp"};
  return names;
}

BenchmarkProblem<1> make_oscillator(double t_end) {
  using V = State<double, 1>;
  BenchmarkProblem<1> b;
  b.problem.name = "oscillator";
  b.problem.u0 = V::Constant(1.0);
  b.problem.t_end = t_end;
  b.problem.rhs = [](double t, const V& u) -> V { return V::Constant(2.0 * u(0) * std::cos(t)); };
  b.problem.jacobian = [](double t, const V&) -> JacobianMatrix<double, 1> {
    return JacobianMatrix<double, 1>::Constant(2.0 * std::cos(t));
  };
  b.exact = [](double t) -> V { return V::Constant(std::exp(2.0 * std::sin(t))); };
  b.error_kind = ErrorKind::absolute;
  b.magnitude_notes = {"u in [e^-2, e^2]"};
  return b;
}

Eigen::Matrix4d krogh_u() {
  Eigen::Matrix4d u = Eigen::Matrix4d::Constant(0.5);
  u.diagonal().setConstant(-0.5);
  return u;
}

Eigen::Matrix4d krogh_b() {
  Eigen::Matrix4d d = Eigen::Matrix4d::Zero();
  d << -10, -10, 0, 0,
        10, -10, 0, 0,
         0,   0, 1000, 0,
         0,   0, 0, 1e-4;
  const Eigen::Matrix4d u = krogh_u();
  return u * d * u;
}

namespace {

constexpr double kroghEps = 1e-4;

// z(0) = U y(0) = (-2, 0, -1, -1).
// z3(t) = 1 / (0.001 - 1.001 e^{1000 t}), from z3' = -1000 z3 + z3^2, z3(0) = -1.
double krogh_z3(double t) { return 1.0 / (0.001 - 1.001 * std::exp(1000.0 * t)); }

// int_0^t e^{eps s} z3(s)^2 ds over [0, min(t, 0.06)] (or [t, 0] for t < 0);
// beyond s = 0.06 the integrand is below e^{-120}.
double krogh_z3_sq_integral_raw(double t) {
  using boost::math::quadrature::gauss_kronrod;
  auto f = [](double s) {
    const double z = krogh_z3(s);
    return std::exp(kroghEps * s) * z * z;
  };
  const double end = std::min(t, 0.06);
  const double panel = end >= 0.0 ? 0.002 : -0.002;
  double acc = 0.0;
  for (double a = 0.0; std::abs(end - a) > 0.0;) {
    const double b = end >= 0.0 ? std::min(a + panel, end) : std::max(a + panel, end);
    acc += gauss_kronrod<double, 31>::integrate(f, a, b, 8, 1e-15);
    a = b;
  }
  return acc;
}

double krogh_z3_sq_integral(double t) {
  static const double saturated = krogh_z3_sq_integral_raw(0.06);
  return t >= 0.06 ? saturated : krogh_z3_sq_integral_raw(t);
}

}  // namespace

BenchmarkProblem<4> make_krogh(KroghVariant variant, double t_end) {
  using V = State<double, 4>;
  using M = JacobianMatrix<double, 4>;
  const Eigen::Matrix4d U = krogh_u();
  const Eigen::Matrix4d B = krogh_b();
  const bool classic = variant == KroghVariant::classic;

  BenchmarkProblem<4> b;
  b.problem.name = "krogh";
  b.problem.u0 = V(0.0, -2.0, -1.0, -1.0);
  b.problem.t_end = t_end;
  b.problem.rhs = [U, B, classic](double, const V& y) -> V {
    const V z = U * y;
    const V w(0.5 * z(0) * z(0) - 0.5 * z(1) * z(1), z(0) * z(1), z(2) * z(2), classic ? z(3) * z(3) : z(2) * z(2));
    return -B * y + U * w;
  };
  b.problem.jacobian = [U, B, classic](double, const V& y) -> M {
    const V z = U * y;
    M jw = M::Zero();
    jw(0, 0) = z(0);
    jw(0, 1) = -z(1);
    jw(1, 0) = z(1);
    jw(1, 1) = z(0);
    jw(2, 2) = 2.0 * z(2);
    if (classic) jw(3, 3) = 2.0 * z(3);
    else jw(3, 2) = 2.0 * z(2);
    return -B + U * jw * U;
  };
  b.exact = [U, classic](double t) -> V {
    // zeta = z1 + i z2 solves zeta' = a zeta + zeta^2 / 2, a = 10 (1 - i)
    const std::complex<double> a(10.0, -10.0);
    const std::complex<double> w = (-0.5 + 0.5 / a) * std::exp(-a * t) - 0.5 / a;
    const std::complex<double> zeta = 1.0 / w;
    const double z3 = krogh_z3(t);
    double z4;
    if (classic) {
      // z4' = -eps z4 + z4^2, z4(0) = -1
      z4 = 1.0 / ((-1.0 - 1.0 / kroghEps) * std::exp(kroghEps * t) + 1.0 / kroghEps);
    } else {
      // z4' = -eps z4 + z3^2, z4(0) = -1
      z4 = std::exp(-kroghEps * t) * (-1.0 + krogh_z3_sq_integral(t));
    }
    return U * V(zeta.real(), zeta.imag(), z3, z4);
  };
  b.k0 = 1e-3;
  b.error_kind = ErrorKind::absolute;
  b.magnitude_notes = {"all components O(1) to O(20)"};
  return b;
}

BenchmarkProblem<3> make_robertson(double t_end) {
  using V = State<double, 3>;
  using M = JacobianMatrix<double, 3>;
  BenchmarkProblem<3> b;
  b.problem.name = "robertson";
  b.problem.u0 = V(1.0, 0.0, 0.0);
  b.problem.t_end = t_end;
  b.problem.rhs = [](double, const V& y) -> V {
    const double r1 = 0.04 * y(0), r2 = 1e4 * y(1) * y(2), r3 = 3e7 * y(1) * y(1);
    return V(-r1 + r2, r1 - r2 - r3, r3);
  };
  b.problem.jacobian = [](double, const V& y) -> M {
    M j;
    j << -0.04, 1e4 * y(2), 1e4 * y(1),
          0.04, -1e4 * y(2) - 6e7 * y(1), -1e4 * y(1),
          0.0, 6e7 * y(1), 0.0;
    return j;
  };
  b.k0 = 1.12e-4;
  b.error_kind = ErrorKind::relative;
  b.magnitude_notes = {"y1 ~ 1", "y2 up to ~5.78e-5", "y3 ~ 1"};
  return b;
}

BenchmarkProblem<3> make_d6(double t_end) {
  using V = State<double, 3>;
  using M = JacobianMatrix<double, 3>;
  BenchmarkProblem<3> b;
  b.problem.name = "d6";
  b.problem.u0 = V(1.0, 0.0, 0.0);
  b.problem.t_end = t_end;
  b.problem.rhs = [](double, const V& y) -> V {
    const double f1 = -y(0) + 1e8 * y(2) * (1.0 - y(0));
    const double f2 = -10.0 * y(1) + 3e7 * y(2) * (1.0 - y(1));
    return V(f1, f2, -f1 - f2);
  };
  b.problem.jacobian = [](double, const V& y) -> M {
    M j;
    j(0, 0) = -1.0 - 1e8 * y(2);
    j(0, 1) = 0.0;
    j(0, 2) = 1e8 * (1.0 - y(0));
    j(1, 0) = 0.0;
    j(1, 1) = -10.0 - 3e7 * y(2);
    j(1, 2) = 3e7 * (1.0 - y(1));
    j.row(2) = -j.row(0) - j.row(1);
    return j;
  };
  b.k0 = 3.3e-8;
  b.error_kind = ErrorKind::relative;
  b.magnitude_notes = {"y1 ~ 1", "y2 ~ 1", "y3 ~ 1e-8"};
  return b;
}

BenchmarkProblem<3> make_oregonator(double t_end) {
  using V = State<double, 3>;
  using M = JacobianMatrix<double, 3>;
  static constexpr double s = 77.27, q = 8.375e-6, w = 0.161;
  BenchmarkProblem<3> b;
  b.problem.name = "oregonator";
  b.problem.u0 = V(1.0, 2.0, 3.0);
  b.problem.t_end = t_end;
  b.problem.rhs = [](double, const V& y) -> V {
    return V(s * (y(1) + y(0) * (1.0 - q * y(0) - y(1))), (y(2) - (1.0 + y(0)) * y(1)) / s, w * (y(0) - y(2)));
  };
  b.problem.jacobian = [](double, const V& y) -> M {
    M j;
    j << s * (1.0 - 2.0 * q * y(0) - y(1)), s * (1.0 - y(0)), 0.0,
         -y(1) / s, -(1.0 + y(0)) / s, 1.0 / s,
         w, 0.0, -w;
    return j;
  };
  b.k0 = 7.33e-6;
  b.error_kind = ErrorKind::absolute;
  b.magnitude_notes = {"y1 in [1, 117845.8]", "y2 in [0.003, 1768.7]", "y3 in [1.005, 31263.85]"};
  return b;
}

BenchmarkProblem<2> make_vdp(double mu, double t_end) {
  using V = State<double, 2>;
  using M = JacobianMatrix<double, 2>;
  BenchmarkProblem<2> b;
  b.problem.name = "vdp";
  b.problem.u0 = V(2.0, 0.0);
  b.problem.t_end = t_end;
  b.problem.rhs = [mu](double, const V& y) -> V { return V(y(1), mu * (1.0 - y(0) * y(0)) * y(1) - y(0)); };
  b.problem.jacobian = [mu](double, const V& y) -> M {
    M j;
    j << 0.0, 1.0,
         -2.0 * mu * y(0) * y(1) - 1.0, mu * (1.0 - y(0) * y(0));
    return j;
  };
  b.k0 = 3.33e-4;
  b.error_kind = ErrorKind::absolute;
  b.magnitude_notes = {"y1 in [-2, 2.000073]", "y2 in [-1323.04, 1231.35] at mu = 1000"};
  return b;
}

}  // namespace dcode
