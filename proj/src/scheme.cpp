#include "dcode/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dcode/operators.hpp"

namespace dcode {

std::string to_string(SchemeFamily f) {
  switch (f) {
    case SchemeFamily::trapezoid_dc: return "trapezoid";
    case SchemeFamily::euler_forward_dc: return "euler-fwd";
    case SchemeFamily::euler_backward_dc: return "euler-bwd";
  }
  return "unknown";
}

SchemeFamily parse_family(const std::string& name) {
  if (name == "trapezoid" || name == "trapezoid_dc") return SchemeFamily::trapezoid_dc;
  if (name == "euler-fwd" || name == "euler_forward_dc") return SchemeFamily::euler_forward_dc;
  if (name == "euler-bwd" || name == "euler_backward_dc") return SchemeFamily::euler_backward_dc;
  throw std::invalid_argument("unknown scheme family '" + name + "'");
}

SchemeSpec SchemeSpec::trapezoid(int order) {
  if (order < 2 || order % 2 != 0) throw std::invalid_argument("trapezoid DC order must be even and >= 2");
  return {SchemeFamily::trapezoid_dc, order, trapezoid_coeffs_double(std::max(1, order / 2 - 1))};
}

SchemeSpec SchemeSpec::euler_forward(int order) {
  if (order < 1) throw std::invalid_argument("Euler DC order must be >= 1");
  return {SchemeFamily::euler_forward_dc, order, euler_coeffs_double(order, EulerVariant::forward)};
}

SchemeSpec SchemeSpec::euler_backward(int order) {
  if (order < 1) throw std::invalid_argument("Euler DC order must be >= 1");
  return {SchemeFamily::euler_backward_dc, order, euler_coeffs_double(order, EulerVariant::backward)};
}

SchemeSpec SchemeSpec::make(SchemeFamily family, int order) {
  switch (family) {
    case SchemeFamily::trapezoid_dc: return trapezoid(order);
    case SchemeFamily::euler_forward_dc: return euler_forward(order);
    case SchemeFamily::euler_backward_dc: return euler_backward(order);
  }
  throw std::invalid_argument("unknown scheme family");
}

int SchemeSpec::stage_count() const { return family == SchemeFamily::trapezoid_dc ? order / 2 : order; }

int SchemeSpec::stage_order(int stage) const { return family == SchemeFamily::trapezoid_dc ? 2 * stage : stage; }

std::string SchemeSpec::name() const {
  switch (family) {
    case SchemeFamily::trapezoid_dc: return "DC" + std::to_string(order);
    case SchemeFamily::euler_forward_dc: return "EulerFwdDC" + std::to_string(order);
    case SchemeFamily::euler_backward_dc: return "EulerBwdDC" + std::to_string(order);
  }
  return "?";
}

namespace {

// Adds coeff * (order-th difference with top offset `top`) into w (offset base lo).
void add_difference(std::vector<double>& w, Index lo, int order, Index top, double coeff) {
  const auto d = difference_weights(order);
  for (int i = 0; i <= order; ++i) w[static_cast<std::size_t>(top - i - lo)] += coeff * d[static_cast<std::size_t>(i)];
}

}  // namespace

StageStencil trapezoid_stage_stencil(int j, const std::vector<double>& c) {
  if (j < 0) throw std::invalid_argument("trapezoid stage depth must be >= 0");
  StageStencil st;
  st.stage = j + 1;
  st.order = 2 * j + 2;
  st.eval = EvalPoint::midpoint;
  if (j == 0) return st;
  if (c.size() < static_cast<std::size_t>(2 * j + 2)) throw std::invalid_argument("too few trapezoid coefficients");
  st.lo = -j;
  st.hi = j + 1;
  st.lambda.assign(static_cast<std::size_t>(st.width()), 0.0);
  st.gamma.assign(static_cast<std::size_t>(st.width()), 0.0);
  for (int i = 1; i <= j; ++i) {
    // k * c_{2i+1} k^{2i} D(D+D-)^i at n+1/2
    add_difference(st.lambda, st.lo, 2 * i + 1, i + 1, c[static_cast<std::size_t>(2 * i + 1)]);
    // c_{2i} k^{2i} (D+D-)^i E at n+1/2
    add_difference(st.gamma, st.lo, 2 * i, i + 1, 0.5 * c[static_cast<std::size_t>(2 * i)]);
    add_difference(st.gamma, st.lo, 2 * i, i, 0.5 * c[static_cast<std::size_t>(2 * i)]);
  }
  return st;
}

StageStencil euler_stage_stencil(int j, EulerVariant variant, const std::vector<double>& a) {
  if (j < 0) throw std::invalid_argument("Euler stage depth must be >= 0");
  StageStencil st;
  st.stage = j + 1;
  st.order = j + 1;
  st.eval = variant == EulerVariant::forward ? EvalPoint::left : EvalPoint::right;
  if (j == 0) return st;
  if (a.size() < static_cast<std::size_t>(j + 2)) throw std::invalid_argument("too few Euler coefficients");
  // Correction anchored at n (forward) or n+1 (backward).
  const Index anchor = variant == EulerVariant::forward ? 0 : 1;
  Index reach_left = 0, reach_right = 0;
  for (int i = 1; i <= j; ++i) {
    const int e = (i % 2 == 0) ? 1 : 0;
    const int m = (i + 1) / 2;
    reach_left = std::max<Index>(reach_left, m + e);
    reach_right = std::max<Index>(reach_right, m);
  }
  st.lo = std::min<Index>(0, anchor - reach_left);
  st.hi = std::max<Index>(1, anchor + reach_right);
  st.lambda.assign(static_cast<std::size_t>(st.width()), 0.0);
  st.gamma.assign(static_cast<std::size_t>(st.width()), 0.0);
  for (int i = 1; i <= j; ++i) {
    const int e = (i % 2 == 0) ? 1 : 0;
    const int m = (i + 1) / 2;
    // k * a_{i+1} k^i D-^e (D+D-)^m at the anchor
    add_difference(st.lambda, st.lo, 2 * m + e, anchor + m, a[static_cast<std::size_t>(i + 1)]);
  }
  return st;
}

StageStencil stage_stencil(const SchemeSpec& spec, int stage) {
  if (stage < 1 || stage > spec.stage_count()) throw std::out_of_range("stage outside scheme");
  switch (spec.family) {
    case SchemeFamily::trapezoid_dc: return trapezoid_stage_stencil(stage - 1, spec.coeffs);
    case SchemeFamily::euler_forward_dc: return euler_stage_stencil(stage - 1, EulerVariant::forward, spec.coeffs);
    case SchemeFamily::euler_backward_dc: return euler_stage_stencil(stage - 1, EulerVariant::backward, spec.coeffs);
  }
  throw std::invalid_argument("unknown scheme family");
}

IndexRange lower_range_for(const StageStencil& st, const IndexRange& range) {
  // Steps n -> n+1 for n in [first, last-1] read low[n+lo .. n+hi].
  return {std::min<Index>(range.first + st.lo, 0), std::max<Index>(range.last - 1 + st.hi, 0)};
}

std::vector<IndexRange> stage_ranges(const SchemeSpec& spec, Index n_steps) {
  const int stages = spec.stage_count();
  std::vector<IndexRange> ranges(static_cast<std::size_t>(stages));
  ranges.back() = {0, n_steps};
  for (int s = stages; s > 1; --s) {
    ranges[static_cast<std::size_t>(s - 2)] = lower_range_for(stage_stencil(spec, s), ranges[static_cast<std::size_t>(s - 1)]);
  }
  return ranges;
}

Index steps_for_horizon(double t_end, double k) {
  if (!(k > 0.0)) throw std::invalid_argument("time step must be positive");
  if (!(t_end > 0.0)) throw std::invalid_argument("horizon must be positive");
  const double ratio = t_end / k;
  const auto nearest = static_cast<Index>(std::llround(ratio));
  if (std::abs(ratio - static_cast<double>(nearest)) <= 1e-9 * ratio) return std::max<Index>(nearest, 1);
  return static_cast<Index>(std::ceil(ratio));
}

}  // namespace dcode
