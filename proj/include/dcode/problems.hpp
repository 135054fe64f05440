#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dcode/ode_problem.hpp"

namespace dcode {

enum class ErrorKind { absolute, relative };

[[nodiscard]] std::string to_string(ErrorKind k);

template <int Dim>
struct BenchmarkProblem {
  static constexpr int dimension = Dim;
  using StateType = State<double, Dim>;

  OdeProblem<double, Dim> problem;
  std::function<StateType(double)> exact;  // empty when no closed form is known
  std::optional<double> k0;
  ErrorKind error_kind = ErrorKind::absolute;
  std::vector<std::string> magnitude_notes;

  [[nodiscard]] bool has_exact() const noexcept { return static_cast<bool>(exact); }
  [[nodiscard]] const std::string& name() const noexcept { return problem.name; }
};

/// u' = 2u cos t, u(0) = 1, exact e^{2 sin t}.
[[nodiscard]] BenchmarkProblem<1> make_oscillator(double t_end = 1e6);

/// Which nonlinearity drives the fourth transformed component.
///   printed: (z1^2/2 - z2^2/2, z1 z2, z3^2, z3^2)
///   classic: (z1^2/2 - z2^2/2, z1 z2, z3^2, z4^2)
enum class KroghVariant { printed, classic };

/// y' = -B y + U w(z), z = U y, with U symmetric and U^2 = I. In z the system
/// decouples into scalar Bernoulli equations, so the exact solution is known
/// (the printed variant needs one quadrature for z4).
[[nodiscard]] BenchmarkProblem<4> make_krogh(KroghVariant variant = KroghVariant::printed, double t_end = 1000.0);

/// The Krogh transformation matrix U and the linear part B = U D U.
[[nodiscard]] Eigen::Matrix4d krogh_u();
[[nodiscard]] Eigen::Matrix4d krogh_b();

[[nodiscard]] BenchmarkProblem<3> make_robertson(double t_end = 1e4);
[[nodiscard]] BenchmarkProblem<3> make_d6(double t_end = 1.0);
[[nodiscard]] BenchmarkProblem<3> make_oregonator(double t_end = 360.0);
[[nodiscard]] BenchmarkProblem<2> make_vdp(double mu = 1000.0, double t_end = 3000.0);

struct ProblemOptions {
  std::optional<double> t_end;
  std::optional<double> mu;  // van der Pol only
  KroghVariant krogh = KroghVariant::printed;
};

[[nodiscard]] const std::vector<std::string>& benchmark_names();

/// Calls fn(BenchmarkProblem<Dim>) for the problem called `name`.
template <typename Fn>
decltype(auto) visit_benchmark(const std::string& name, const ProblemOptions& opt, Fn&& fn) {
  auto horizon = [&](double def) { return opt.t_end.value_or(def); };
  if (name == "oscillator") return fn(make_oscillator(horizon(1e6)));
  if (name == "krogh") return fn(make_krogh(opt.krogh, horizon(1000.0)));
  if (name == "robertson") return fn(make_robertson(horizon(1e4)));
  if (name == "d6") return fn(make_d6(horizon(1.0)));
  if (name == "oregonator") return fn(make_oregonator(horizon(360.0)));
  if (name == "vdp") return fn(make_vdp(opt.mu.value_or(1000.0), horizon(3000.0)));
  throw std::invalid_argument("unknown problem '" + name + "'");
}

}  // namespace dcode
