#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "dcode/dc_trapezoid.hpp"
#include "dcode/harness.hpp"
#include "support.hpp"

using namespace dcode;

namespace {

using V1 = State<double, 1>;

Trajectory<double, 1> from_values(const std::vector<double>& v, double k) {
  Trajectory<double, 1> t;
  t.states = GridSeq<double, 1>(k, 0, static_cast<Index>(v.size()), 1);
  for (std::size_t i = 0; i < v.size(); ++i) t.states[static_cast<Index>(i)](0) = v[i];
  t.n_steps = static_cast<Index>(v.size()) - 1;
  return t;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("dcode_test_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("error norms") {
  const auto b = make_oscillator(10.0);
  const double k = 0.1;
  std::vector<double> v;
  for (int n = 0; n <= 100; ++n) v.push_back(b.exact(n * k)(0));
  const auto exact = from_values(v, k);
  CHECK(error_norm<1>(exact, b.exact, ErrorKind::absolute).max() == 0.0);
  CHECK(error_norm<1>(exact, b.exact, ErrorKind::relative).max() == 0.0);

  const auto two = from_values({1.0, 2.0}, 1.0);
  const TruthFn<1> ones = [](double) { return V1::Constant(1.0); };
  const auto e = error_norm<1>(two, ones, ErrorKind::absolute);
  CHECK(e.max() == 1.0);
  CHECK(e.per_component.size() == 1);
  CHECK(e.samples_used == 2);
}

TEST_CASE("relative errors skip t = 0 and reject a vanishing truth") {
  const TruthFn<1> line = [](double t) { return V1::Constant(t); };
  const auto traj = from_values({5.0, 1.5, 2.0}, 1.0);
  CHECK(error_norm<1>(traj, line, ErrorKind::relative).max() == 0.5);
  const TruthFn<1> dip = [](double t) { return V1::Constant(t - 1.0); };
  try {
    (void)error_norm<1>(traj, dip, ErrorKind::relative);
    FAIL("expected a domain error");
  } catch (const std::domain_error& err) {
    const std::string msg = err.what();
    CHECK(msg.find("component 1") != std::string::npos);
    CHECK(msg.find("t = 1") != std::string::npos);
  }
}

TEST_CASE("DC4 on the oscillator at k = 0.25") {
  const auto b = make_oscillator();
  const auto t = dc_solve(b.problem, SchemeSpec::trapezoid(4), 0.25, NewtonConfig::for_state(b.problem.u0));
  CHECK(error_norm<1>(t, b.exact, ErrorKind::absolute).max() == doctest::Approx(1.86e-3).epsilon(0.01));
}

TEST_CASE("sample schedule") {
  const SampleSchedule full(10, 11);
  CHECK(full.full());
  CHECK(full.count() == 11);
  const SampleSchedule sub(1000003, 1000);
  CHECK_FALSE(sub.full());
  CHECK(sub.count() == 1000);
  CHECK(sub.index(0) == 0);
  CHECK(sub.index(999) == 1000003);
  for (Index i = 1; i < 1000; ++i) CHECK(sub.index(i) > sub.index(i - 1));
  CHECK_THROWS_AS(SampleSchedule(5, 1), std::invalid_argument);
}

TEST_CASE("subsampled norms only look at scheduled indices") {
  std::vector<double> v(101, 0.0);
  v[37] = 3.0;  // not on the schedule (i * 100) / 10
  v[40] = 1.0;
  const auto t = from_values(v, 1.0);
  const TruthFn<1> zero = [](double) { return V1::Zero(); };
  CHECK(error_norm<1>(t, zero, ErrorKind::absolute, 11).max() == 1.0);
  CHECK(error_norm<1>(t, zero, ErrorKind::absolute, 101).max() == 3.0);
}

TEST_CASE("NaN errors stick") {
  const auto t = from_values({0.0, std::nan(""), 0.0}, 1.0);
  const TruthFn<1> zero = [](double) { return V1::Zero(); };
  CHECK(std::isnan(error_norm<1>(t, zero, ErrorKind::absolute).max()) == false);
  CHECK(std::isnan(error_norm<1>(t, zero, ErrorKind::absolute).per_component[0]));
}

TEST_CASE("DC2 convergence study on the oscillator") {
  const auto b = make_oscillator();
  const auto rep = convergence_study<1>(b, SchemeSpec::trapezoid(2), {0.25, 0.125, 0.0625}, b.exact);
  REQUIRE(rep.rows.size() == 3);
  CHECK(rep.rows[0].errors[0] == doctest::Approx(0.25).epsilon(0.05));
  CHECK(rep.rows[1].errors[0] == doctest::Approx(6.16e-2).epsilon(0.02));
  CHECK(rep.rows[2].errors[0] == doctest::Approx(1.53e-2).epsilon(0.02));
  CHECK(rep.fits[0].status == "fit");
  CHECK(rep.fits[0].order == doctest::Approx(2.01).epsilon(0.02));
  CHECK_THROWS_AS(convergence_study<1>(b, SchemeSpec::trapezoid(2), {0.1, 0.2}, b.exact), std::invalid_argument);
}

TEST_CASE("studies of F = c are exact") {
  BenchmarkProblem<1> b;
  b.problem = dcode::testing::scalar_problem([](double, double) { return 2.0; }, 1.0, 4.0);
  b.exact = [](double t) { return V1::Constant(1.0 + 2.0 * t); };
  for (int order : {2, 6}) {
    const auto rep = convergence_study<1>(b, SchemeSpec::trapezoid(order), {0.5, 0.25, 0.125}, b.exact);
    for (const auto& row : rep.rows) CHECK(row.errors[0] == 0.0);
    CHECK(rep.fits[0].status == "exact");
  }
}

TEST_CASE("failed rows are recorded and left out") {
  BenchmarkProblem<1> b;
  b.problem = dcode::testing::scalar_problem([](double, double u) { return u * u; }, 1.0, 0.9);
  b.exact = [](double t) { return V1::Constant(1.0 / (1.0 - t)); };
  const auto rep = convergence_study<1>(b, SchemeSpec::trapezoid(2), {0.3, 0.01, 0.005}, b.exact);
  CHECK(rep.rows[0].failed);
  CHECK(std::isnan(rep.rows[0].errors[0]));
  CHECK_FALSE(rep.rows[1].failed);
  CHECK(rep.fits[0].rows_used == 2);
}

TEST_CASE("references") {
  const auto b = make_oscillator(50.0);
  const auto ref = compute_reference<1>(b, SchemeSpec::trapezoid(10), 0.01, 1001);
  CHECK(ref.stride == 5);
  CHECK(ref.count() == 1001);
  CHECK(ref.n_steps == 5000);
  REQUIRE(ref.estimated_error.size() == 1);
  CHECK(ref.estimated_error[0] >= 0.0);
  CHECK(ref.estimated_error[0] <= 1e-10);
  double at_samples = 0.0, between = 0.0;
  for (Index i = 0; i < ref.count(); ++i) {
    const double t = static_cast<double>(i) * ref.spacing();
    CHECK(ref.evaluate(t)(0) == ref.samples(0, i));
    at_samples = std::max(at_samples, std::abs(ref.samples(0, i) - b.exact(t)(0)));
    if (i + 1 < ref.count()) between = std::max(between, std::abs(ref.evaluate(t + 0.37 * ref.spacing())(0) - b.exact(t + 0.37 * ref.spacing())(0)));
  }
  CHECK(at_samples <= 1e-11);
  CHECK(between <= 1e-7);

  const auto path = temp_file("ref.bin");
  auto copy = ref;
  copy.save(path.string());
  CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));
  const auto back = ReferenceSolution::load(path.string());
  CHECK(back.samples == ref.samples);
  CHECK(back.digest == ref.digest);
  CHECK(back.problem == "oscillator");
  CHECK(back.k == ref.k);
  CHECK(back.stride == ref.stride);
  CHECK(back.estimated_error == ref.estimated_error);
  for (double t : {0.0, 1.234, 49.99}) CHECK(back.evaluate(t)(0) == ref.evaluate(t)(0));

  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(-3, std::ios::end);
    f.put('\x7f');
  }
  CHECK_THROWS((void)ReferenceSolution::load(path.string()));
  std::filesystem::remove(path);
  CHECK_THROWS((void)ReferenceSolution::load(path.string()));
}

TEST_CASE("invariant: capped and full sampling agree when everything fits") {
  const auto b = make_oscillator(300.0);
  const double k = 0.05;
  const auto t = dc_solve(b.problem, SchemeSpec::trapezoid(4), k, NewtonConfig::for_state(b.problem.u0));
  const auto full = error_norm<1>(t, b.exact, ErrorKind::absolute, t.n_steps + 1);
  const auto capped = error_norm<1>(t, b.exact, ErrorKind::absolute);
  CHECK(full.per_component == capped.per_component);
  CHECK(full.samples_used == capped.samples_used);

  ErrorAccumulator<1> acc(ErrorKind::absolute, t.n_steps, k, 1, b.exact);
  stream_scheme<double, 1>(b.problem, SchemeSpec::trapezoid(4), k, t.n_steps, NewtonConfig::for_state(b.problem.u0),
                           [&](Index n, const V1& u) { acc.observe(n, u); });
  CHECK(acc.result().per_component == full.per_component);
}

TEST_CASE("invariant: order fits recover synthetic orders") {
  const std::vector<double> ks = {0.3, 0.2, 0.1, 0.05, 0.025};
  for (int q : {2, 4, 6, 8, 10}) {
    std::vector<double> e;
    for (double k : ks) e.push_back(3.7 * std::pow(k, q));
    const auto fit = fit_order(ks, e, 0.0);
    CHECK(fit.status == "fit");
    CHECK(std::abs(fit.order - q) <= 1e-10);
    for (std::size_t i = 1; i < ks.size(); ++i) CHECK(std::abs(pairwise_orders(ks, e)[i] - q) <= 1e-10);
  }
}

TEST_CASE("invariant: rows on or below the floor stay out of the fit") {
  const std::vector<double> ks = {0.4, 0.2, 0.1, 0.05};
  const std::vector<double> e = {1.6e-3, 1e-4, 6e-9, 6e-9};
  const auto fit = fit_order(ks, e, 6e-9);
  CHECK(fit.rows_used == 2);
  CHECK(fit.order == doctest::Approx(4.0));
  const auto none = fit_order(ks, e, 1e-3);
  CHECK(none.status == "insufficient");
  CHECK(fit_order(ks, {0, 0, 0, 0}, 0.0).status == "exact");
}

TEST_CASE("report CSV") {
  ConvergenceReport rep;
  rep.problem = "p";
  rep.spec = SchemeSpec::trapezoid(2);
  rep.error_floor = {0.0, 0.0};
  for (double k : {0.5, 0.25}) {
    ConvergenceRow row;
    row.k = k;
    row.errors = {k * k, 0.1 * k * k};
    rep.rows.push_back(row);
  }
  finalize_report(rep);
  std::ostringstream one;
  write_report_csv(one, {rep});
  std::istringstream in(one.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "k,err_1,err_2,order_1,order_2");
  std::getline(in, line);
  CHECK(line == "0.5,0.25,0.025000000000000001,,");
  std::getline(in, line);
  CHECK(line == "0.25,0.0625,0.0062500000000000003,2,2");
  std::getline(in, line);
  CHECK(line == "fit,,,2,2");

  auto rep4 = rep;
  rep4.spec = SchemeSpec::trapezoid(4);
  std::ostringstream two;
  write_report_csv(two, {rep, rep4});
  const std::string s = two.str();
  CHECK(s.rfind("scheme,k,err_1", 0) == 0);
  CHECK(s.find("\nDC4,fit,,,2,2\n") != std::string::npos);
  CHECK(format_g17(0.1) == "0.10000000000000001");
}

}  // TEST_SUITE
