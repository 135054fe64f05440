#pragma once

#include <complex>
#include <string>
#include <vector>

#include "dcode/scheme.hpp"

namespace dcode {

using Complex = std::complex<double>;

/// u^0 .. u^{n_steps} of the scheme on u' = z u, u(0) = 1 with k = 1.
/// Throws std::domain_error when z sits on a pole of the step relations.
[[nodiscard]] std::vector<Complex> amplification_sequence(Complex z, const SchemeSpec& spec, Index n_steps);

/// Values of z where some step relation of the scheme is singular (forward
/// steps and, when ghost values are needed, backward steps).
[[nodiscard]] std::vector<Complex> scheme_poles(const SchemeSpec& spec);

struct StabilitySample {
  Complex z;
  int order = 0;
  SchemeFamily family = SchemeFamily::trapezoid_dc;
  Index n_steps = 0;
  bool decayed = false;
  bool skipped = false;  // within 1e-9 of a pole
  double max_modulus = 0.0;
  double tail_ratio = 0.0;  // |u^N| / |u^{N/2}|
};

/// Evenly sampled closed interval [lo, hi] with `count` points.
struct SampleRange {
  double lo = 0.0;
  double hi = 0.0;
  int count = 1;

  [[nodiscard]] double at(int i) const { return count == 1 ? lo : lo + (hi - lo) * i / (count - 1); }
  /// Parses "lo:step:hi"; a single number gives a one-point range.
  static SampleRange parse_step_form(const std::string& text);
};

[[nodiscard]] StabilitySample stability_sample(Complex z, const SchemeSpec& spec, Index n_steps);

/// One sample per grid point, real part varying slowest.
[[nodiscard]] std::vector<StabilitySample> stability_scan(const SchemeSpec& spec, const SampleRange& re,
                                                          const SampleRange& im, Index n_steps);

struct StructureCheck {
  double next_difference = 0.0;  // |Delta^{j+1} q|_max / |q|_max, expected at rounding level
  double jth_difference = 0.0;   // |Delta^j q|_max / |q|_max, expected clearly nonzero
  Index n_steps = 0;             // steps actually used
  bool shrunk = false;           // n_steps was reduced to avoid underflow
};

/// De-geometrizes DC(2j+2) on u' = z u: q_n = u^n / r^{n-j}, r = (2+z)/(2-z),
/// for n >= 2j, and measures how far q is from a polynomial of degree j.
[[nodiscard]] StructureCheck lemma4_structure_check(Complex z, int j, Index n_steps);

/// Same measure as lemma4_structure_check; the plain number asked for most often.
[[nodiscard]] inline double lemma4_residual(Complex z, int j, Index n_steps) {
  return lemma4_structure_check(z, j, n_steps).next_difference;
}

}  // namespace dcode
