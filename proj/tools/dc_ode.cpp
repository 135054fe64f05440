// dc-ode: command-line front end for the deferred-correction solvers.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dcode/coefficients.hpp"
#include "dcode/harness.hpp"
#include "dcode/problems.hpp"
#include "dcode/stability.hpp"

using namespace dcode;

namespace {

struct ProblemArgs {
  std::string name = "oscillator";
  double t_end = 0.0;  // 0: problem default
  double mu = 0.0;     // 0: problem default
  std::string krogh = "printed";

  void attach(CLI::App* cmd) {
    cmd->add_option("--problem", name, "oscillator | krogh | robertson | d6 | oregonator | vdp")->required();
    cmd->add_option("--t-end", t_end, "override the horizon T");
    cmd->add_option("--mu", mu, "van der Pol stiffness parameter");
    cmd->add_option("--krogh-variant", krogh, "printed | classic")->check(CLI::IsMember({"printed", "classic"}));
  }

  [[nodiscard]] ProblemOptions options() const {
    ProblemOptions o;
    if (t_end > 0.0) o.t_end = t_end;
    if (mu > 0.0) o.mu = mu;
    o.krogh = krogh == "classic" ? KroghVariant::classic : KroghVariant::printed;
    return o;
  }
};

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  return os;
}

int cmd_run(const ProblemArgs& pa, const std::string& family, int order, double dt, const std::string& out) {
  const SchemeSpec spec = SchemeSpec::make(parse_family(family), order);
  return visit_benchmark(pa.name, pa.options(), [&](const auto& bench) {
    constexpr int D = std::decay_t<decltype(bench)>::dimension;
    const auto& p = bench.problem;
    const Index N = steps_for_horizon(p.t_end, dt);
    std::ofstream file;
    if (!out.empty()) {
      file = open_out(out);
      file << "t";
      for (Index i = 1; i <= p.dim(); ++i) file << ",y" << i;
      file << '\n';
    }
    std::optional<ErrorAccumulator<D>> acc;
    if (bench.has_exact()) acc.emplace(bench.error_kind, N, dt, p.dim(), bench.exact);
    State<double, D> last = p.u0;
    const RunStats st = stream_scheme<double, D>(p, spec, dt, N, NewtonConfig::for_state(p.u0),
                                                 [&](Index n, const State<double, D>& u) {
                                                   if (file.is_open()) {
                                                     file << format_g17(static_cast<double>(n) * dt);
                                                     for (Index i = 0; i < u.size(); ++i) file << ',' << format_g17(u(i));
                                                     file << '\n';
                                                   }
                                                   if (acc) acc->observe(n, u);
                                                   last = u;
                                                 });
    std::cout << "problem " << p.name << "  scheme " << spec.name() << "  k " << format_g17(dt) << "  steps " << N
              << "\n";
    std::cout << "final state at t = " << format_g17(static_cast<double>(N) * dt) << ":";
    for (Index i = 0; i < last.size(); ++i) std::cout << ' ' << format_g17(last(i));
    std::cout << "\nstage steps " << st.steps << "  newton iterations " << st.newton_iterations << " (max per step "
              << st.max_newton_iterations << ")\n";
    if (acc) {
      std::cout << to_string(bench.error_kind) << " error vs exact solution:";
      for (double e : acc->result().per_component) std::cout << ' ' << format_g17(e);
      std::cout << '\n';
    }
    return 0;
  });
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stod(item));
  return out;
}

int cmd_convergence(const ProblemArgs& pa, const std::string& family, const std::string& orders,
                    const std::string& dts, const std::string& reference, bool exact, double floor,
                    const std::string& report, Index cap) {
  const auto ks = parse_list(dts);
  const auto ords = parse_list(orders);
  if (ks.empty() || ords.empty()) throw std::invalid_argument("--orders and --dts must not be empty");
  if (exact == !reference.empty()) throw std::invalid_argument("give exactly one of --reference and --exact");

  return visit_benchmark(pa.name, pa.options(), [&](const auto& bench) {
    constexpr int D = std::decay_t<decltype(bench)>::dimension;
    std::optional<ReferenceSolution> ref;
    TruthFn<D> truth;
    StudyOptions opt;
    opt.sample_cap = cap;
    if (exact) {
      if (!bench.has_exact()) throw std::invalid_argument("problem '" + bench.name() + "' has no exact solution");
      truth = bench.exact;
    } else {
      ref = ReferenceSolution::load(reference);
      if (ref->problem != bench.name()) throw std::invalid_argument("reference belongs to problem '" + ref->problem + "'");
      if (ref->dim() != bench.problem.dim()) throw std::invalid_argument("reference has the wrong dimension");
      if (ref->t_end + 1e-12 < bench.problem.t_end) throw std::invalid_argument("reference horizon is too short");
      truth = ref->truth<D>();
      for (double e : ref->estimated_error) opt.floor.push_back(10.0 * e);
    }
    if (floor >= 0.0) opt.floor = {floor};
    opt.on_row = [](const ConvergenceRow& r) {
      std::cerr << "  k = " << format_g17(r.k);
      if (r.failed) std::cerr << "  FAILED: " << r.message;
      else
        for (double e : r.errors) std::cerr << "  " << e;
      std::cerr << "  (" << r.seconds << " s)\n";
    };
    std::vector<ConvergenceReport> reports;
    for (double o : ords) {
      const SchemeSpec spec = SchemeSpec::make(parse_family(family), static_cast<int>(o));
      std::cerr << bench.name() << " " << spec.name() << '\n';
      reports.push_back(convergence_study<D>(bench, spec, ks, truth, opt));
    }
    if (!report.empty()) {
      auto os = open_out(report);
      write_report_csv(os, reports);
    }
    write_report_csv(std::cout, reports);
    return 0;
  });
}

int cmd_reference(const ProblemArgs& pa, int order, double dt, const std::string& out, bool estimate, Index cap) {
  return visit_benchmark(pa.name, pa.options(), [&](const auto& bench) {
    constexpr int D = std::decay_t<decltype(bench)>::dimension;
    ReferenceSolution ref = compute_reference<D>(bench, SchemeSpec::trapezoid(order), dt, cap, estimate);
    ref.save(out);
    std::cout << "wrote " << out << ": " << ref.count() << " samples every " << ref.stride << " steps, sha256 "
              << ref.digest << '\n';
    if (!ref.estimated_error.empty()) {
      std::cout << "estimated error:";
      for (double e : ref.estimated_error) std::cout << ' ' << format_g17(e);
      std::cout << '\n';
    }
    return 0;
  });
}

int cmd_stability(const std::string& family, int order, const std::string& re, const std::string& im, Index steps,
                  const std::string& out) {
  const SchemeSpec spec = SchemeSpec::make(parse_family(family), order);
  const auto samples = stability_scan(spec, SampleRange::parse_step_form(re), SampleRange::parse_step_form(im), steps);
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!out.empty()) {
    file = open_out(out);
    os = &file;
  }
  *os << "re,im,decayed,max_modulus,tail_ratio\n";
  std::size_t decayed = 0, skipped = 0;
  for (const auto& s : samples) {
    if (s.skipped) {
      ++skipped;
      continue;
    }
    decayed += s.decayed ? 1 : 0;
    *os << format_g17(s.z.real()) << ',' << format_g17(s.z.imag()) << ',' << (s.decayed ? 1 : 0) << ','
        << format_g17(s.max_modulus) << ',' << format_g17(s.tail_ratio) << '\n';
  }
  std::cerr << spec.name() << ": " << decayed << " of " << samples.size() - skipped << " samples decayed";
  if (skipped) std::cerr << " (" << skipped << " skipped near a pole)";
  std::cerr << '\n';
  return 0;
}

int cmd_coeffs(const std::string& family, int p, const std::string& variant) {
  if (family == "trapezoid") {
    const auto c = generate_trapezoid_coeffs(p);
    for (int i = c.first_index(); i <= c.last_index(); ++i)
      std::cout << i << ' ' << to_fraction_string(c(i)) << ' ' << format_g17(to_double(c(i))) << '\n';
    return 0;
  }
  const auto a = generate_euler_coeffs(p, variant == "backward" ? EulerVariant::backward : EulerVariant::forward);
  for (int i = 1; i <= p; ++i) std::cout << i << ' ' << to_fraction_string(a(i)) << ' ' << format_g17(to_double(a(i))) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deferred-correction ODE solvers: runs, convergence studies, references, stability scans"};
  app.require_subcommand(1);

  ProblemArgs run_pa, conv_pa, ref_pa;
  std::string run_family = "trapezoid", run_out;
  int run_order = 2;
  double run_dt = 0.0;
  auto* run = app.add_subcommand("run", "integrate one problem with one scheme");
  run_pa.attach(run);
  run->add_option("--family", run_family, "trapezoid | euler-fwd | euler-bwd");
  run->add_option("--order", run_order, "scheme order");
  run->add_option("--dt", run_dt, "time step")->required();
  run->add_option("--out", run_out, "write the trajectory as CSV");

  std::string conv_family = "trapezoid", conv_orders = "2,4,6,8,10", conv_dts, conv_ref, conv_report;
  bool conv_exact = false;
  double conv_floor = -1.0;
  Index conv_cap = default_sample_cap;
  auto* conv = app.add_subcommand("convergence", "error table over several step sizes");
  conv_pa.attach(conv);
  conv->add_option("--family", conv_family, "trapezoid | euler-fwd | euler-bwd");
  conv->add_option("--orders", conv_orders, "comma-separated scheme orders");
  conv->add_option("--dts", conv_dts, "comma-separated decreasing time steps")->required();
  conv->add_option("--reference", conv_ref, "reference file from `dc-ode reference`");
  conv->add_flag("--exact", conv_exact, "compare with the closed-form solution");
  conv->add_option("--floor", conv_floor, "error floor excluded from order fits (default: 10x reference estimate)");
  conv->add_option("--report", conv_report, "write the report CSV here");
  conv->add_option("--cap", conv_cap, "maximum number of sampled grid points");

  int ref_order = 10;
  double ref_dt = 0.0;
  std::string ref_out;
  bool ref_no_estimate = false;
  Index ref_cap = default_sample_cap;
  auto* refc = app.add_subcommand("reference", "compute and store a reference solution");
  ref_pa.attach(refc);
  refc->add_option("--order", ref_order, "trapezoid DC order");
  refc->add_option("--dt", ref_dt, "time step")->required();
  refc->add_option("--out", ref_out, "output file")->required();
  refc->add_flag("--no-estimate", ref_no_estimate, "skip the 2k run used to estimate the reference error");
  refc->add_option("--cap", ref_cap, "maximum number of stored samples");

  std::string st_family = "trapezoid", st_re = "-10:0.5:-0.5", st_im = "-10:0.5:10", st_out;
  int st_order = 2;
  Index st_steps = 400;
  auto* stab = app.add_subcommand("stability", "scan decay on u' = z u over a grid of z");
  stab->add_option("--family", st_family, "trapezoid | euler-fwd | euler-bwd");
  stab->add_option("--order", st_order, "scheme order");
  stab->add_option("--re", st_re, "lo:step:hi for Re z");
  stab->add_option("--im", st_im, "lo:step:hi for Im z");
  stab->add_option("--steps", st_steps, "steps per sample");
  stab->add_option("--out", st_out, "CSV output (default stdout)");

  std::string co_family = "trapezoid", co_variant = "forward";
  int co_p = 5;
  auto* co = app.add_subcommand("coeffs", "print exact correction coefficients");
  co->add_option("--family", co_family, "trapezoid | euler")->check(CLI::IsMember({"trapezoid", "euler"}));
  co->add_option("--p", co_p, "number of coefficients (trapezoid: pairs)")->check(CLI::Range(1, 40));
  co->add_option("--variant", co_variant, "euler: forward | backward")->check(CLI::IsMember({"forward", "backward"}));

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(run_pa, run_family, run_order, run_dt, run_out);
    if (*conv)
      return cmd_convergence(conv_pa, conv_family, conv_orders, conv_dts, conv_ref, conv_exact, conv_floor, conv_report,
                             conv_cap);
    if (*refc) return cmd_reference(ref_pa, ref_order, ref_dt, ref_out, !ref_no_estimate, ref_cap);
    if (*stab) return cmd_stability(st_family, st_order, st_re, st_im, st_steps, st_out);
    if (*co) return cmd_coeffs(co_family, co_p, co_variant);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
