#pragma once

#include <string>
#include <vector>

#include "dcode/coefficients.hpp"
#include "dcode/types.hpp"

namespace dcode {

enum class SchemeFamily { trapezoid_dc, euler_forward_dc, euler_backward_dc };

[[nodiscard]] std::string to_string(SchemeFamily f);
/// Accepts "trapezoid", "euler-fwd", "euler-bwd".
[[nodiscard]] SchemeFamily parse_family(const std::string& name);

/// A member of one of the deferred-correction hierarchies.
struct SchemeSpec {
  SchemeFamily family = SchemeFamily::trapezoid_dc;
  int order = 2;
  std::vector<double> coeffs;  // indexed like TrapezoidCoeffs::c or EulerCoeffs::a

  static SchemeSpec trapezoid(int order);
  static SchemeSpec euler_forward(int order);
  static SchemeSpec euler_backward(int order);
  static SchemeSpec make(SchemeFamily family, int order);

  /// Number of marching stages (DC2 = 1, DC(2J+2) = J+1; Euler order p = p).
  [[nodiscard]] int stage_count() const;
  [[nodiscard]] int stage_order(int stage) const;
  [[nodiscard]] std::string name() const;
};

/// Where F is evaluated inside one step n -> n+1.
enum class EvalPoint { left, midpoint, right };

/// Linear data of one marching stage. A step n -> n+1 solves
///
///   u^{n+1} - u^n - sum_o lambda[o] low[n+o] = k F(t*, X - sum_o gamma[o] low[n+o])
///
/// where o runs over [lo, hi], t* and X depend on `eval` (t_n and u^n for
/// left, t_{n+1/2} and the state average for midpoint, t_{n+1} and u^{n+1}
/// for right). `low` is the previous stage; stage 1 has empty weights.
struct StageStencil {
  int stage = 1;
  int order = 2;
  EvalPoint eval = EvalPoint::midpoint;
  Index lo = 0;
  Index hi = 1;
  std::vector<double> lambda;  // hi-lo+1 entries, or empty
  std::vector<double> gamma;   // hi-lo+1 entries, or empty

  [[nodiscard]] bool has_lower() const noexcept { return !lambda.empty(); }
  [[nodiscard]] Index width() const noexcept { return hi - lo + 1; }
};

/// Stencil of trapezoidal stage j+1 (correction depth j, j = 0 is DC2).
[[nodiscard]] StageStencil trapezoid_stage_stencil(int j, const std::vector<double>& c);

/// Stencil of Euler stage j+1 (correction depth j, j = 0 is plain Euler).
[[nodiscard]] StageStencil euler_stage_stencil(int j, EulerVariant variant, const std::vector<double>& a);

[[nodiscard]] StageStencil stage_stencil(const SchemeSpec& spec, int stage);

/// Inclusive index range [first, last] of a stage.
struct IndexRange {
  Index first = 0;
  Index last = 0;
  [[nodiscard]] Index size() const noexcept { return last - first + 1; }
  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

/// Ranges each stage must cover so that the final stage spans [0, n_steps].
/// Element s-1 belongs to stage s.
[[nodiscard]] std::vector<IndexRange> stage_ranges(const SchemeSpec& spec, Index n_steps);

/// Range a lower stage must cover so that a stage with stencil `st` can
/// march over `range`.
[[nodiscard]] IndexRange lower_range_for(const StageStencil& st, const IndexRange& range);

/// Number of grid steps for horizon t_end: the smallest N with N*k >= t_end
/// (up to a 1e-9 relative slack).
[[nodiscard]] Index steps_for_horizon(double t_end, double k);

}  // namespace dcode
