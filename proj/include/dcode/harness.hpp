#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dcode/fit.hpp"
#include "dcode/marching.hpp"
#include "dcode/problems.hpp"

namespace dcode {

inline constexpr Index default_sample_cap = 4'000'000;

template <int Dim>
using TruthFn = std::function<State<double, Dim>(double)>;

/// Grid indices at which errors are measured: every index when N+1 <= cap,
/// otherwise cap indices (i N) / (cap - 1) spread evenly over [0, N].
class SampleSchedule {
 public:
  SampleSchedule(Index n_steps, Index cap) : n_(n_steps), cap_(cap) {
    if (n_steps < 0) throw std::invalid_argument("SampleSchedule: negative step count");
    if (cap < 2) throw std::invalid_argument("SampleSchedule: cap must be >= 2");
  }
  [[nodiscard]] bool full() const noexcept { return n_ + 1 <= cap_; }
  [[nodiscard]] Index count() const noexcept { return full() ? n_ + 1 : cap_; }
  [[nodiscard]] Index index(Index i) const noexcept { return full() ? i : (i * n_) / (cap_ - 1); }

 private:
  Index n_;
  Index cap_;
};

struct ErrorNorm {
  ErrorKind kind = ErrorKind::absolute;
  std::vector<double> per_component;
  Index sample_cap = default_sample_cap;
  Index samples_used = 0;

  [[nodiscard]] double max() const {
    double m = 0.0;
    for (double e : per_component) m = std::max(m, e);
    return m;
  }
};

/// Streaming max-norm error. States are offered in increasing index order;
/// only the scheduled indices are compared against the truth. The relative
/// kind starts at n = 1, the absolute kind at n = 0.
template <int Dim>
class ErrorAccumulator {
 public:
  ErrorAccumulator(ErrorKind kind, Index n_steps, double k, Index dim, TruthFn<Dim> truth,
                   Index cap = default_sample_cap)
      : kind_(kind), k_(k), schedule_(n_steps, cap), truth_(std::move(truth)) {
    norm_.kind = kind;
    norm_.sample_cap = cap;
    norm_.per_component.assign(static_cast<std::size_t>(dim), 0.0);
  }

  void observe(Index n, const State<double, Dim>& u) {
    while (next_ < schedule_.count() && schedule_.index(next_) < n) ++next_;
    if (next_ >= schedule_.count() || schedule_.index(next_) != n) return;
    ++next_;
    if (kind_ == ErrorKind::relative && n == 0) return;
    const double t = static_cast<double>(n) * k_;
    const State<double, Dim> ref = truth_(t);
    for (Index i = 0; i < u.size(); ++i) {
      double e = std::abs(u(i) - ref(i));
      if (kind_ == ErrorKind::relative) {
        const double scale = std::abs(ref(i));
        if (scale == 0.0) {
          std::ostringstream os;
          os << "relative error undefined: component " << i + 1 << " of the truth is zero at t = " << t;
          throw std::domain_error(os.str());
        }
        e /= scale;
      }
      double& cur = norm_.per_component[static_cast<std::size_t>(i)];
      if (!std::isnan(cur) && (std::isnan(e) || e > cur)) cur = e;
    }
    ++norm_.samples_used;
  }

  [[nodiscard]] const ErrorNorm& result() const noexcept { return norm_; }

 private:
  ErrorKind kind_;
  double k_;
  SampleSchedule schedule_;
  TruthFn<Dim> truth_;
  ErrorNorm norm_;
  Index next_ = 0;
};

template <int Dim>
ErrorNorm error_norm(const Trajectory<double, Dim>& traj, const TruthFn<Dim>& truth, ErrorKind kind,
                     Index cap = default_sample_cap) {
  ErrorAccumulator<Dim> acc(kind, traj.n_steps, traj.step(), traj.states.dim(), truth, cap);
  for (Index n = 0; n <= traj.n_steps; ++n) acc.observe(n, traj[n]);
  return acc.result();
}

/// Sampled high-accuracy solution stored on a uniform coarse grid of spacing
/// stride * k. Between samples it is read through 8-point Lagrange
/// interpolation; at sample times the stored value is returned unchanged.
class ReferenceSolution {
 public:
  std::string problem;
  std::string scheme;
  int order = 0;
  double k = 0.0;
  Index n_steps = 0;  // steps covering t_end
  Index stride = 1;
  double t_end = 0.0;
  Eigen::MatrixXd samples;              // dim x count, column i at t = i * stride * k
  std::vector<double> estimated_error;  // per component, from a run at 2k; empty if unknown
  std::string digest;                   // SHA-256 of the sample payload

  [[nodiscard]] Index dim() const noexcept { return samples.rows(); }
  [[nodiscard]] Index count() const noexcept { return samples.cols(); }
  [[nodiscard]] double spacing() const noexcept { return static_cast<double>(stride) * k; }

  [[nodiscard]] Eigen::VectorXd evaluate(double t) const;

  /// Writes atomically (temporary file, then rename) and updates `digest`.
  void save(const std::string& path);
  /// Loads and verifies the digest; throws on any mismatch.
  [[nodiscard]] static ReferenceSolution load(const std::string& path);

  /// Recomputes the payload digest.
  [[nodiscard]] std::string payload_digest() const;

  template <int Dim>
  [[nodiscard]] TruthFn<Dim> truth() const {
    return [this](double t) -> State<double, Dim> { return evaluate(t); };
  }
};

/// Runs `spec` with step k over the problem horizon, keeping at most `cap`
/// evenly strided samples. With estimate_error the scheme is also run at 2k
/// and the sample-wise difference, scaled by 1/(2^order - 1), is stored as
/// the estimated error.
template <int Dim>
ReferenceSolution compute_reference(const BenchmarkProblem<Dim>& bench, const SchemeSpec& spec, double k,
                                    Index cap = default_sample_cap, bool estimate_error = true) {
  const auto& p = bench.problem;
  const Index N = steps_for_horizon(p.t_end, k);
  ReferenceSolution ref;
  ref.problem = p.name;
  ref.scheme = spec.name();
  ref.order = spec.order;
  ref.k = k;
  ref.n_steps = N;
  ref.t_end = p.t_end;
  ref.stride = std::max<Index>(1, (N + cap - 2) / (cap - 1));
  const Index count = (N + ref.stride - 1) / ref.stride + 1;  // last sample at or beyond N
  const Index run_steps = (count - 1) * ref.stride;
  ref.samples.resize(p.dim(), count);
  const NewtonConfig newton = NewtonConfig::for_state(p.u0);
  stream_scheme<double, Dim>(p, spec, k, run_steps, newton, [&](Index n, const State<double, Dim>& u) {
    if (n % ref.stride == 0) ref.samples.col(n / ref.stride) = u;
  });
  if (estimate_error) {
    std::vector<double> est(static_cast<std::size_t>(p.dim()), 0.0);
    const Index coarse_steps = run_steps / 2 + 1;
    const double scale = 1.0 / (std::pow(2.0, spec.order) - 1.0);
    stream_scheme<double, Dim>(p, spec, 2.0 * k, coarse_steps, newton, [&](Index m, const State<double, Dim>& u) {
      const Index n = 2 * m;
      if (n > run_steps || n % ref.stride != 0) return;
      const auto d = (u - ref.samples.col(n / ref.stride)).cwiseAbs();
      for (Index i = 0; i < p.dim(); ++i)
        est[static_cast<std::size_t>(i)] = std::max(est[static_cast<std::size_t>(i)], d(i) * scale);
    });
    ref.estimated_error = est;
  }
  ref.digest = ref.payload_digest();
  return ref;
}

struct ConvergenceRow {
  double k = 0.0;
  std::vector<double> errors;  // per component; NaN when the run failed
  bool failed = false;
  std::string message;
  RunStats stats;
  double seconds = 0.0;
};

struct ConvergenceReport {
  std::string problem;
  SchemeSpec spec;
  ErrorKind kind = ErrorKind::absolute;
  std::vector<ConvergenceRow> rows;  // decreasing k
  std::vector<double> error_floor;   // per component
  std::vector<OrderFit> fits;        // per component
  std::vector<std::vector<double>> pairwise;  // [component][row]

  [[nodiscard]] Index dim() const noexcept { return static_cast<Index>(error_floor.size()); }
  /// Largest fitted order over components that produced a fit.
  [[nodiscard]] double max_fitted_order() const;
  /// Component-wise maximum error of a row.
  [[nodiscard]] double row_max_error(std::size_t row) const;
};

/// Fills fits and pairwise orders from rows and error_floor.
void finalize_report(ConvergenceReport& report);

struct StudyOptions {
  Index sample_cap = default_sample_cap;
  std::vector<double> floor;  // per component; a single entry applies to all; empty means 0
  std::optional<NewtonConfig> newton;
  std::function<void(const ConvergenceRow&)> on_row;  // progress hook
};

/// One run per k against `truth`; failed runs are recorded and left out of the fits.
template <int Dim>
ConvergenceReport convergence_study(const BenchmarkProblem<Dim>& bench, const SchemeSpec& spec,
                                    const std::vector<double>& ks, const TruthFn<Dim>& truth,
                                    const StudyOptions& opt = {}) {
  for (std::size_t i = 1; i < ks.size(); ++i)
    if (!(ks[i] < ks[i - 1])) throw std::invalid_argument("convergence_study: step sizes must be strictly decreasing");
  const auto& p = bench.problem;
  const Index d = p.dim();
  ConvergenceReport rep;
  rep.problem = p.name;
  rep.spec = spec;
  rep.kind = bench.error_kind;
  rep.error_floor.assign(static_cast<std::size_t>(d), 0.0);
  if (opt.floor.size() == 1) rep.error_floor.assign(static_cast<std::size_t>(d), opt.floor.front());
  else if (opt.floor.size() == static_cast<std::size_t>(d)) rep.error_floor = opt.floor;
  else if (!opt.floor.empty()) throw std::invalid_argument("convergence_study: floor has the wrong length");
  const NewtonConfig newton = opt.newton.value_or(NewtonConfig::for_state(p.u0));

  for (double k : ks) {
    ConvergenceRow row;
    row.k = k;
    const auto start = std::chrono::steady_clock::now();
    try {
      const Index N = steps_for_horizon(p.t_end, k);
      ErrorAccumulator<Dim> acc(bench.error_kind, N, k, d, truth, opt.sample_cap);
      row.stats = stream_scheme<double, Dim>(p, spec, k, N, newton,
                                             [&](Index n, const State<double, Dim>& u) { acc.observe(n, u); });
      row.errors = acc.result().per_component;
    } catch (const std::exception& e) {
      row.failed = true;
      row.message = e.what();
      row.errors.assign(static_cast<std::size_t>(d), std::numeric_limits<double>::quiet_NaN());
    }
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (opt.on_row) opt.on_row(row);
    rep.rows.push_back(std::move(row));
  }
  finalize_report(rep);
  return rep;
}

/// CSV with columns k, err_1..err_d, order_1..order_d (pairwise), closed by a
/// "fit" row carrying the fitted orders. With several reports a leading
/// `scheme` column tells them apart. Numbers use 17 significant digits.
void write_report_csv(std::ostream& os, const std::vector<ConvergenceReport>& reports);

/// Formats with 17 significant digits.
[[nodiscard]] std::string format_g17(double v);

}  // namespace dcode
