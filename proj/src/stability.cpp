#include "dcode/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dcode/marching.hpp"

namespace dcode {

namespace {

constexpr double poleTol = 1e-9;

OdeProblem<Complex, 1> dahlquist(Complex z, Index n_steps) {
  using V = State<Complex, 1>;
  OdeProblem<Complex, 1> p;
  p.name = "dahlquist";
  p.u0 = V::Constant(Complex(1.0, 0.0));
  p.t_end = static_cast<double>(n_steps);
  p.rhs = [z](double, const V& u) -> V { return z * u; };
  p.jacobian = [z](double, const V&) -> JacobianMatrix<Complex, 1> { return JacobianMatrix<Complex, 1>::Constant(z); };
  return p;
}

NewtonConfig linear_newton() {
  NewtonConfig cfg;
  cfg.abs_tol = 1e-300;  // states legitimately decay far below any fixed threshold
  cfg.rel_tol = 1e-10;
  cfg.max_iters = 8;
  return cfg;
}

bool near_pole(Complex z, const SchemeSpec& spec) {
  for (Complex p : scheme_poles(spec))
    if (std::abs(z - p) < poleTol) return true;
  return false;
}

}  // namespace

std::vector<Complex> scheme_poles(const SchemeSpec& spec) {
  const bool ghosts = stage_ranges(spec, 1).front().first < 0;
  switch (spec.family) {
    case SchemeFamily::trapezoid_dc:
      if (ghosts) return {Complex(2.0, 0.0), Complex(-2.0, 0.0)};
      return {Complex(2.0, 0.0)};
    case SchemeFamily::euler_forward_dc:
      if (ghosts) return {Complex(-1.0, 0.0)};
      return {};
    case SchemeFamily::euler_backward_dc: return {Complex(1.0, 0.0)};
  }
  return {};
}

std::vector<Complex> amplification_sequence(Complex z, const SchemeSpec& spec, Index n_steps) {
  if (n_steps < 2 * spec.stage_count() + 4)
    throw std::invalid_argument("amplification_sequence: n_steps must be at least 2 * stages + 4");
  if (near_pole(z, spec)) throw std::domain_error("amplification_sequence: z is a pole of " + spec.name());
  const auto problem = dahlquist(z, n_steps);
  std::vector<Complex> out(static_cast<std::size_t>(n_steps + 1));
  stream_scheme<Complex, 1>(problem, spec, 1.0, n_steps, linear_newton(),
                            [&](Index n, const State<Complex, 1>& u) { out[static_cast<std::size_t>(n)] = u(0); });
  return out;
}

StabilitySample stability_sample(Complex z, const SchemeSpec& spec, Index n_steps) {
  StabilitySample s;
  s.z = z;
  s.order = spec.order;
  s.family = spec.family;
  s.n_steps = n_steps;
  if (near_pole(z, spec)) {
    s.skipped = true;
    return s;
  }
  const auto u = amplification_sequence(z, spec, n_steps);
  double mx = 0.0;
  for (const Complex& v : u) mx = std::max(mx, std::abs(v));
  const double last = std::abs(u.back());
  const double mid = std::abs(u[static_cast<std::size_t>(n_steps / 2)]);
  const double start = std::abs(u[static_cast<std::size_t>(2 * spec.stage_count())]);
  s.max_modulus = mx;
  s.tail_ratio = mid > 0.0 ? last / mid : (last == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
  s.decayed = s.tail_ratio < 1.0 && last < start;
  return s;
}

std::vector<StabilitySample> stability_scan(const SchemeSpec& spec, const SampleRange& re, const SampleRange& im,
                                            Index n_steps) {
  if (re.count < 1 || im.count < 1) throw std::invalid_argument("stability_scan: empty sampling grid");
  std::vector<StabilitySample> out;
  out.reserve(static_cast<std::size_t>(re.count) * static_cast<std::size_t>(im.count));
  for (int a = 0; a < re.count; ++a)
    for (int b = 0; b < im.count; ++b) out.push_back(stability_sample(Complex(re.at(a), im.at(b)), spec, n_steps));
  return out;
}

SampleRange SampleRange::parse_step_form(const std::string& text) {
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
  if (c2 == std::string::npos) {
    const double v = std::stod(text);
    return {v, v, 1};
  }
  const double lo = std::stod(text.substr(0, c1));
  const double step = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
  const double hi = std::stod(text.substr(c2 + 1));
  if (!(step > 0.0) || hi < lo) throw std::invalid_argument("bad range '" + text + "', expected lo:step:hi");
  const int count = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
  return {lo, lo + step * (count - 1), count};
}

StructureCheck lemma4_structure_check(Complex z, int j, Index n_steps) {
  if (j < 0) throw std::invalid_argument("lemma4_structure_check: j must be >= 0");
  if (!(z.real() < 0.0)) throw std::invalid_argument("lemma4_structure_check: Re z must be negative");
  if (std::abs(z + 2.0) < poleTol) throw std::domain_error("lemma4_structure_check: r = 0 at z = -2");
  if (n_steps < 4 * j + 8) throw std::invalid_argument("lemma4_structure_check: n_steps must be >= 4j + 8");
  const Complex r = (2.0 + z) / (2.0 - z);

  StructureCheck res;
  res.n_steps = n_steps;
  // Keep |r|^{n} comfortably above the denormal range.
  const double per_step = -std::log(std::abs(r));
  const double limit = 600.0;  // e^{-600} ~ 1e-261
  if (per_step * static_cast<double>(n_steps) > limit) {
    res.n_steps = std::max<Index>(4 * j + 8, static_cast<Index>(limit / per_step));
    res.shrunk = true;
  }
  const Index N = res.n_steps;
  const auto u = amplification_sequence(z, SchemeSpec::trapezoid(2 * j + 2), N);

  // r^{n-j} by repeated multiplication from r^{j-j} = 1 at n = j.
  std::vector<Complex> q;
  Complex rp(1.0, 0.0);
  for (Index n = j; n < 2 * j; ++n) rp *= r;
  for (Index n = 2 * j; n <= N; ++n) {
    q.push_back(u[static_cast<std::size_t>(n)] / rp);
    rp *= r;
  }
  double qmax = 0.0;
  for (const Complex& v : q) qmax = std::max(qmax, std::abs(v));
  auto diff_max = [&](int order) {
    std::vector<Complex> d = q;
    for (int o = 0; o < order; ++o) {
      for (std::size_t i = 0; i + 1 < d.size(); ++i) d[i] = d[i + 1] - d[i];
      d.pop_back();
    }
    double m = 0.0;
    for (const Complex& v : d) m = std::max(m, std::abs(v));
    return m / qmax;
  };
  res.next_difference = diff_max(j + 1);
  res.jth_difference = diff_max(j);
  return res;
}

}  // namespace dcode
