#include <cmath>
#include <limits>
#include <complex>
#include <vector>

#include "doctest.h"

#include "dcode/coefficients.hpp"
#include "dcode/dc_trapezoid.hpp"
#include "dcode/harness.hpp"
#include "dcode/problems.hpp"
#include "recurrence.hpp"
#include "support.hpp"

using namespace dcode;
using dcode::testing::dahlquist;
using dcode::testing::Nested;
using dcode::testing::scalar_problem;
using dcode::testing::Assembled;
using dcode::testing::assemble;
using dcode::testing::recurrence_hierarchy;

namespace {

using C = std::complex<double>;
using V1 = State<double, 1>;

Trajectory<double, 1> as_trajectory(const GridSeq<double, 1>& s, Index n_steps, int order) {
  Trajectory<double, 1> t;
  t.states = s;
  t.n_steps = n_steps;
  t.stage_order = order;
  return t;
}

Trajectory<double, 1> exact_trajectory(const BenchmarkProblem<1>& b, double k, Index n_steps) {
  GridSeq<double, 1> s(k, 0, n_steps + 1, 1);
  for (Index n = 0; n <= n_steps; ++n) s[n] = b.exact(static_cast<double>(n) * k);
  return as_trajectory(s, n_steps, 0);
}

double max_rel_diff(const Trajectory<C, 1>& got, const std::vector<C>& want, const IndexRange& rg) {
  double worst = 0.0;
  for (Index n = rg.first; n <= rg.last; ++n) {
    const C w = want[static_cast<std::size_t>(n - rg.first)];
    worst = std::max(worst, std::abs(got[n](0) - w) / std::abs(w));
  }
  return worst;
}

}  // namespace

TEST_SUITE("dc_trapezoid") {

TEST_CASE("DC2 keeps a constant solution, ghosts included") {
  const auto p = scalar_problem([](double, double) { return 0.0; }, 2.5, 1.0);
  const auto t = dc2_run(p, 0.1, IndexRange{-4, 10}, NewtonConfig{});
  for (Index n = -4; n <= 10; ++n) CHECK(t[n](0) == 2.5);
  CHECK(t.ghost_left() == 4);
}

TEST_CASE("DC2 on F = 1 is exact for negative and positive n") {
  const auto p = scalar_problem([](double, double) { return 1.0; }, 1.0, 2.0);
  const double k = 0.125;
  const auto t = dc2_run(p, k, IndexRange{-5, 16}, NewtonConfig{});
  for (Index n = -5; n <= 16; ++n) CHECK(t[n](0) == 1.0 + static_cast<double>(n) * k);
}

TEST_CASE("DC2 amplification on the test equation") {
  for (C z : {C(-1.0, 0.0), C(-0.3, 2.0), C(0.5, -1.5)}) {
    const double k = 0.2;
    const auto p = dahlquist(z / k);
    const auto t = dc2_run(p, k, IndexRange{-3, 12}, NewtonConfig{});
    const C r = (2.0 + z) / (2.0 - z);
    for (Index n = -3; n < 12; ++n) CHECK(std::abs(t[n + 1](0) / t[n](0) - r) <= 1e-13 * std::abs(r));
  }
  const auto p = dahlquist(C(-2.0 / 0.1));
  const auto t = dc2_run(p, 0.1, IndexRange{0, 3}, NewtonConfig{});
  CHECK(std::abs(t[1](0)) <= 1e-14);
}

TEST_CASE("DC2 on the oscillator at k = 0.125") {
  const auto b = make_oscillator();
  const auto traj = dc_solve(b.problem, SchemeSpec::trapezoid(2), 0.125, NewtonConfig::for_state(b.problem.u0));
  const double err = error_norm<1>(traj, b.exact, ErrorKind::absolute).max();
  CHECK(err == doctest::Approx(6.16e-2).epsilon(0.02));
}

TEST_CASE("correction terms vanish on quadratics") {
  const double k = 0.3;
  const auto s = dcode::testing::sampled(k, -3, 12, [](double t) { return 2.0 - t + 0.7 * t * t; });
  const auto tr = as_trajectory(s, 6, 2);
  for (Index n = -2; n <= 6; ++n) {
    const auto [lam, gam] = correction_terms(tr, 1, n);
    CHECK(std::abs(lam(0)) <= 1e-15);
    // (D+D-) of a quadratic is the constant 1.4; its c_2 k^2 multiple is what remains
    CHECK(gam(0) == doctest::Approx(0.125 * k * k * 1.4).epsilon(1e-12));
  }
  const auto lin = dcode::testing::sampled(k, -3, 12, [](double t) { return 2.0 - t; });
  const auto tl = as_trajectory(lin, 6, 2);
  for (Index n = -2; n <= 6; ++n) {
    const auto [lam, gam] = correction_terms(tl, 1, n);
    CHECK(std::abs(lam(0)) <= 1e-15);
    CHECK(std::abs(gam(0)) <= 1e-14);
  }
}

TEST_CASE("correction terms on t^3") {
  for (double k : {0.5, 0.125}) {
    const auto s = dcode::testing::sampled(k, -3, 14, [](double t) { return t * t * t; });
    const auto tr = as_trajectory(s, 8, 2);
    for (Index n = -2; n <= 8; ++n) {
      const auto [lam, gam] = correction_terms(tr, 1, n);
      CHECK(lam(0) == doctest::Approx(k * k / 4.0).epsilon(1e-13));
      const double mid = (static_cast<double>(n) + 0.5) * k;
      CHECK(gam(0) == doctest::Approx(0.125 * k * k * 6.0 * mid).epsilon(1e-12));
    }
  }
}

TEST_CASE("correction terms of depth 2 match nested operators") {
  const double k = 0.35;
  const auto s = dcode::testing::random_seq(k, -6, 24, 4242);
  const auto tr = as_trajectory(s, 12, 4);
  const auto c = generate_trapezoid_coeffs(2);
  const Nested base = Nested::from(s);
  const Nested e1 = base.composite(1), e2 = base.composite(2);
  for (Index n = -3; n <= 13; ++n) {
    const auto [lam, gam] = correction_terms(tr, 2, n);
    const double c2 = to_double(c(2)), c3 = to_double(c(3)), c4 = to_double(c(4)), c5 = to_double(c(5));
    const double want_lam = c3 * k * k * e1.plus().at(n) + c5 * std::pow(k, 4) * e2.plus().at(n);
    const double want_gam = c2 * k * k * 0.5 * (e1.at(n + 1) + e1.at(n)) + c4 * std::pow(k, 4) * 0.5 * (e2.at(n + 1) + e2.at(n));
    CHECK(lam(0) == doctest::Approx(want_lam).epsilon(1e-12).scale(1.0));
    CHECK(gam(0) == doctest::Approx(want_gam).epsilon(1e-12).scale(1.0));
  }
  CHECK_THROWS_AS(correction_terms(tr, 2, 15), std::out_of_range);
}

TEST_CASE("corrected stage on the test equation follows the assembled recurrence") {
  const C z(-0.4, 1.1);
  const double k = 0.05;
  auto p = dahlquist(z / k);
  p.t_end = 40 * k;
  for (int j = 1; j <= 3; ++j) {
    // stage j of DC(2j+2) is an order-2j stage covering [-j, 40+j]
    const auto stages = dc_stages(p, SchemeSpec::trapezoid(2 * j + 2), k, NewtonConfig{});
    const auto& lower = stages[static_cast<std::size_t>(j - 1)];
    REQUIRE(lower.range() == IndexRange{-j, 40 + j});
    const auto up = dc_stage_run(p, lower, j, IndexRange{0, 40}, NewtonConfig{});
    CHECK(up.states.values() == stages[static_cast<std::size_t>(j)].states.values());
    const Assembled w = assemble(j);
    const C r = (2.0 + z) / (2.0 - z);
    for (Index n = 0; n < 40; ++n) {
      C acc = 0.0;
      for (Index o = -j; o <= j + 1; ++o)
        acc += (w.lam[static_cast<std::size_t>(o + j)] - z * w.gam[static_cast<std::size_t>(o + j)]) * lower[n + o](0);
      const C want = r * up[n](0) + 2.0 / (2.0 - z) * acc;
      CHECK(std::abs(up[n + 1](0) - want) <= 1e-13 * std::abs(want));
    }
  }
}

TEST_CASE("every stage reproduces u = n k for F = 1") {
  const auto p = scalar_problem([](double, double) { return 1.0; }, 0.0, 4.0);
  const double k = 0.125;
  const auto stages = dc_stages(p, SchemeSpec::trapezoid(10), k, NewtonConfig{});
  REQUIRE(stages.size() == 5);
  for (const auto& st : stages)
    for (Index n = st.range().first; n <= st.range().last; ++n) CHECK(st[n](0) == static_cast<double>(n) * k);
}

TEST_CASE("DC4 on the oscillator at k = 0.125") {
  const auto b = make_oscillator();
  const auto traj = dc_solve(b.problem, SchemeSpec::trapezoid(4), 0.125, NewtonConfig::for_state(b.problem.u0));
  const double err = error_norm<1>(traj, b.exact, ErrorKind::absolute).max();
  CHECK(err == doctest::Approx(1.18e-4).epsilon(0.02));
}

TEST_CASE("dc_solve of order 2 is dc2_run") {
  const auto b = make_oscillator(200.0);
  const double k = 0.05;
  const NewtonConfig cfg = NewtonConfig::for_state(b.problem.u0);
  const auto a = dc_solve(b.problem, SchemeSpec::trapezoid(2), k, cfg);
  const auto d = dc2_run(b.problem, k, IndexRange{0, a.n_steps}, cfg);
  CHECK(a.states.values() == d.states.values());
  CHECK_THROWS_AS(dc_solve(b.problem, SchemeSpec::euler_forward(2), k, cfg), std::invalid_argument);
}

TEST_CASE("stage ranges") {
  const auto r = stage_ranges(SchemeSpec::trapezoid(10), 100);
  REQUIRE(r.size() == 5);
  CHECK(r[4] == IndexRange{0, 100});
  CHECK(r[3] == IndexRange{-4, 104});
  CHECK(r[2] == IndexRange{-7, 107});
  CHECK(r[1] == IndexRange{-9, 109});
  CHECK(r[0] == IndexRange{-10, 110});
  CHECK(steps_for_horizon(1e6, 0.0625) == 16000000);
  CHECK(steps_for_horizon(1000.0, 1.0 / 7200.0) == 7200000);
  CHECK(steps_for_horizon(1.0, 0.3) == 4);
}

TEST_CASE("lower stage coverage is checked") {
  const auto p = scalar_problem([](double, double u) { return -u; }, 1.0, 1.0);
  const auto low = dc2_run(p, 0.1, IndexRange{0, 10}, NewtonConfig{});
  CHECK_THROWS_AS(dc_stage_run(p, low, 1, IndexRange{-1, 10}, NewtonConfig{}), std::out_of_range);
  CHECK_THROWS_AS(dc_stage_run(p, low, 2, IndexRange{0, 5}, NewtonConfig{}), std::invalid_argument);
}

TEST_CASE("solver failures name the step") {
  // u' = u^2 from u0 = 1 blows up at t = 1
  const auto p = scalar_problem([](double, double u) { return u * u; }, 1.0, 2.0);
  try {
    (void)dc_solve(p, SchemeSpec::trapezoid(2), 0.1, NewtonConfig{});
    FAIL("expected a solver error");
  } catch (const SolverError& e) {
    CHECK(e.step_index() > 5);
    CHECK(e.time() > 0.5);
    CHECK(std::string(e.what()).find("step index") != std::string::npos);
  }
}

TEST_CASE("DCC residuals") {
  const auto b = make_oscillator(20.0);
  const double k0 = 1.0 / 8.0;
  const auto same = exact_trajectory(b, k0, steps_for_horizon(20.0, k0));
  const auto zero = dcc_residual(same, same);
  CHECK(zero.max_r1 == 0.0);
  CHECK(zero.max_r2 == 0.0);
  CHECK(zero.r1.size() == static_cast<std::size_t>(same.n_steps - 2));

  for (int order : {2, 4}) {
    std::vector<double> ks, res;
    for (double k : {1.0 / 8, 1.0 / 16, 1.0 / 32}) {
      auto traj = dc_solve(b.problem, SchemeSpec::trapezoid(order), k, NewtonConfig::for_state(b.problem.u0));
      traj.stage_order = order;
      const auto rep = dcc_residual(traj, exact_trajectory(b, k, traj.n_steps));
      ks.push_back(k);
      res.push_back(std::max(rep.max_r1, rep.max_r2));
      CHECK(rep.bound_estimate > 0.0);
    }
    const double slope = log_log_slope(ks, res);
    CAPTURE(order);
    CAPTURE(slope);
    CHECK(std::abs(slope - order) <= 0.3);
  }
  CHECK_THROWS_AS(dcc_residual(same, exact_trajectory(b, 0.1, 200)), std::invalid_argument);
}

TEST_CASE("invariant: order of DC2..DC6 on the oscillator") {
  const auto b = make_oscillator(2000.0);
  const std::vector<double> ks = {0.25, 0.125, 0.0625};
  for (int order : {2, 4, 6}) {
    std::vector<double> errs;
    for (double k : ks) {
      const auto t = dc_solve(b.problem, SchemeSpec::trapezoid(order), k, NewtonConfig::for_state(b.problem.u0));
      errs.push_back(error_norm<1>(t, b.exact, ErrorKind::absolute).max());
    }
    const auto pw = pairwise_orders(ks, errs);
    CAPTURE(order);
    CHECK(std::abs(pw[1] - order) <= 0.3);
    CHECK(std::abs(pw[2] - order) <= 0.3);
  }
}

TEST_CASE("invariant: linear problems follow the assembled recurrence over 1e4 steps") {
  const Index n_steps = 10000;
  for (C z : {C(-1e-3, 0.3), C(0.0, 0.5), C(-0.01, 0.0)}) {
    for (int stages : {2, 3, 5}) {
      const double k = 1.0;
      auto p = dahlquist(z / k);
      p.t_end = static_cast<double>(n_steps) * k;
      std::vector<IndexRange> ranges;
      const auto want = recurrence_hierarchy(z, stages, n_steps, ranges);
      const auto got = dc_solve(p, SchemeSpec::trapezoid(2 * stages), k, NewtonConfig{});
      const double rel = max_rel_diff(got, want.back(), ranges.back());
      CAPTURE(z);
      CAPTURE(stages);
      CAPTURE(rel);
      // near |r| = 1 the two evaluation orders drift apart by about one rounding per step
      CHECK(rel <= 10.0 * static_cast<double>(n_steps) * std::numeric_limits<double>::epsilon());
    }
  }
}

TEST_CASE("invariant: ghost values follow the solution continued backward") {
  const auto b = make_oscillator(2.0);
  const auto spec = SchemeSpec::trapezoid(6);
  std::vector<double> ks = {0.1, 0.05, 0.025};
  std::vector<std::vector<double>> errs(3);
  for (double k : ks) {
    const auto stages = dc_stages(b.problem, spec, k, NewtonConfig::for_state(b.problem.u0));
    for (std::size_t s = 0; s < stages.size(); ++s) {
      const auto& st = stages[s];
      if (st.ghost_left() == 0) continue;
      double e = 0.0;
      for (Index n = st.range().first; n < 0; ++n) e = std::max(e, std::abs(st[n](0) - b.exact(st.time(n))(0)));
      errs[s].push_back(e);
    }
  }
  for (std::size_t s = 0; s < 2; ++s) {
    REQUIRE(errs[s].size() == 3);
    const double slope = log_log_slope(ks, errs[s]);
    CAPTURE(s);
    CAPTURE(slope);
    CHECK(slope >= 2.0 * static_cast<double>(s + 1) - 0.3);
  }
}

TEST_CASE("invariant: F = c gives u0 + n k c on every stage") {
  const double c = 3.0, k = 0.125;
  const auto p = scalar_problem([c](double, double) { return c; }, 1.0, 3.0);
  for (int order : {2, 4, 6, 8, 10}) {
    const auto stages = dc_stages(p, SchemeSpec::trapezoid(order), k, NewtonConfig{});
    for (const auto& st : stages)
      for (Index n = st.range().first; n <= st.range().last; ++n)
        CHECK(st[n](0) == 1.0 + static_cast<double>(n) * k * c);
  }
}

TEST_CASE("invariant: runs are deterministic and staging does not change the result") {
  const auto osc = make_oscillator(50.0);
  const auto spec = SchemeSpec::trapezoid(10);
  const NewtonConfig cfg = NewtonConfig::for_state(osc.problem.u0);
  const auto a = dc_solve(osc.problem, spec, 0.05, cfg);
  const auto b = dc_solve(osc.problem, spec, 0.05, cfg);
  CHECK(a.states.values() == b.states.values());
  const auto staged = dc_stages(osc.problem, spec, 0.05, cfg).back().restricted();
  CHECK(staged.states.values() == a.states.values());

  const auto rob = make_robertson(2.0);
  const auto spec6 = SchemeSpec::trapezoid(6);
  const NewtonConfig rc = NewtonConfig::for_state(rob.problem.u0);
  const auto piped = dc_solve(rob.problem, spec6, 1e-3, rc);
  const auto full = dc_stages(rob.problem, spec6, 1e-3, rc).back().restricted();
  CHECK(piped.states.values() == full.states.values());
}

}  // TEST_SUITE
