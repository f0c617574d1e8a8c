#include <doctest.h>

#include <cmath>

#include "graphpde/dynamics.hpp"
#include "graphpde/monotone.hpp"
#include "oracles.hpp"

using namespace graphpde;

TEST_CASE("reactions evaluate and differentiate") {
  const Reaction lg = Reaction::logistic(1.8, 1.0);
  CHECK(lg(0.0) == 0.0);
  CHECK(lg(1.8) == doctest::Approx(0.0));
  CHECK(lg(0.5) == doctest::Approx(0.5 * 1.3));
  CHECK(lg.deriv(0.0) == doctest::Approx(1.8));

  const Reaction ac = Reaction::allen_cahn(0.3);
  CHECK(ac(0.0) == 0.0);
  CHECK(ac(0.3) == doctest::Approx(0.0));
  CHECK(ac(1.0) == doctest::Approx(0.0));
  CHECK(ac(0.1) < 0.0);
  CHECK(ac(0.5) > 0.0);
  CHECK(ac(0.65) == doctest::Approx(0.65 * 0.35 * 0.35));
}

TEST_CASE("lipschitz constants") {
  SUBCASE("logistic on its natural range") {
    const Reaction f = Reaction::logistic(1.8, 1.0);
    CHECK(lipschitz_constant(f, 0.0, 1.8) == doctest::Approx(1.98).epsilon(1e-13));
  }
  SUBCASE("zero reaction") {
    CHECK(lipschitz_constant(Reaction::zero(), 0.0, 1.0) == 0.0);
  }
  SUBCASE("bistable cubic via the derivative's critical points") {
    // f' endpoints on [0,1]: |−0.3| and |−0.7|; interior critical value ~0.263
    const Reaction f = Reaction::allen_cahn(0.3);
    CHECK(lipschitz_constant(f, 0.0, 1.0) == doctest::Approx(0.77).epsilon(1e-13));
  }
}

TEST_CASE("kpp hypothesis checks") {
  std::string notes;
  CHECK(Reaction::fisher_kpp().check_kpp_hypotheses(&notes));
  // f = u(1−u)(1+2u): f/u = 1 + u − 2u² increases near 0, violating the
  // quotient-monotonicity hypothesis while staying KPP otherwise
  const Reaction bad = Reaction::polynomial({0.0, 1.0, 1.0, -2.0});
  CHECK(std::abs(bad(0.0)) < 1e-15);
  CHECK(std::abs(bad(1.0)) < 1e-15);
  CHECK(bad(0.5) > 0.0);
  CHECK_FALSE(bad.check_kpp_hypotheses(&notes));
  CHECK(notes.find("increases") != std::string::npos);
}

TEST_CASE("elliptic monotone iteration on the demo problem") {
  const auto g = demo_graph();
  const auto p = demo_partition(g);
  std::vector<double> zeros(2, 0.0);

  SUBCASE("supercritical logistic finds the unique positive state") {
    const Reaction f = Reaction::logistic(1.8, 1.0);
    const Bracket br = make_logistic_bracket(g, &p, BoundaryKind::Dirichlet, f,
                                             std::vector<double>{8.0, 1.0, 0.5});
    CHECK(br.lower[0] > 0.0);  // subsolution certificate found a positive floor
    const auto res = elliptic_monotone(g, p, BoundaryKind::Dirichlet, f, zeros, br);
    CHECK(res.converged);
    CHECK(res.gap <= 1e-8);
    CHECK(res.unique);
    CHECK(res.residual <= 1e-9);
    CHECK(res.lower_certified);
    CHECK(res.upper_certified);
    // chain ordering, pointwise, all the way down
    const double scale = std::max(1.0, sup_norm(br.upper));
    for (size_t m = 1; m < res.lower_iterates.size(); ++m)
      for (int x = 0; x < g.size(); ++x) {
        CHECK(res.lower_iterates[m][x] >= res.lower_iterates[m - 1][x] - 1e-12 * scale);
        CHECK(res.upper_iterates[m][x] <= res.upper_iterates[m - 1][x] + 1e-12 * scale);
        CHECK(res.lower_iterates[m][x] <= res.upper_iterates[m][x] + 1e-12 * scale);
      }
    // observed contraction: increment sup-norms eventually nonincreasing
    std::vector<double> incs;
    for (size_t m = 1; m < res.upper_iterates.size(); ++m) {
      double inc = 0.0;
      for (int x = 0; x < g.size(); ++x)
        inc = std::max(inc, std::abs(res.upper_iterates[m][x] - res.upper_iterates[m - 1][x]));
      incs.push_back(inc);
    }
    REQUIRE(incs.size() >= 10);
    for (size_t m = incs.size() / 5; m + 1 < incs.size(); ++m)
      CHECK(incs[m + 1] <= incs[m] * (1.0 + 1e-9) + 1e-15);
  }
  SUBCASE("zero reaction collapses in one step") {
    const Bracket br{GraphFunction(5, 0.0), GraphFunction(5, 1.0)};
    const auto res =
        elliptic_monotone(g, p, BoundaryKind::Dirichlet, Reaction::zero(), zeros, br);
    CHECK(res.converged);
    REQUIRE(res.upper_iterates.size() >= 2);
    for (int x = 0; x < g.size(); ++x)
      CHECK(res.upper_iterates[1][x] == doctest::Approx(0.0).epsilon(1e-14));
    for (double v : res.maximal) CHECK(std::abs(v) <= 1e-12);
  }
  SUBCASE("subcritical growth leaves only the trivial state") {
    const Reaction f = Reaction::logistic(0.1, 1.0);
    const Bracket br{GraphFunction(5, 0.0), GraphFunction(5, 0.1)};
    const auto res = elliptic_monotone(g, p, BoundaryKind::Dirichlet, f, zeros, br);
    CHECK(res.converged);
    for (double v : res.minimal) CHECK(std::abs(v) <= 1e-8);
    for (double v : res.maximal) CHECK(std::abs(v) <= 1e-8);
  }
  SUBCASE("inverted bracket throws") {
    const Bracket br{GraphFunction(5, 1.0), GraphFunction(5, 0.0)};
    CHECK_THROWS_AS(
        elliptic_monotone(g, p, BoundaryKind::Dirichlet, Reaction::zero(), zeros, br),
        std::invalid_argument);
  }
}

TEST_CASE("boundaryless elliptic iteration") {
  const auto g = demo_graph();
  std::vector<double> c0(5, 0.0);
  DriftField b0(5, 0.0);

  SUBCASE("kpp has the constant-one state") {
    const Reaction f = Reaction::fisher_kpp();
    const Bracket br = make_logistic_bracket(g, nullptr, BoundaryKind::None, f,
                                             std::vector<double>(5, 0.01));
    const auto res = cauchy_elliptic_monotone(g, f, b0, c0, br);
    CHECK(res.converged);
    CHECK(res.coercivity_margin > 1.0);
    for (double v : res.minimal) CHECK(v == doctest::Approx(1.0).epsilon(1e-7));
    for (double v : res.maximal) CHECK(v == doctest::Approx(1.0).epsilon(1e-7));
  }
  SUBCASE("zero reaction with positive zero-order term") {
    std::vector<double> ones(5, 1.0);
    const Bracket br{GraphFunction(5, 0.0), GraphFunction(5, 0.0)};
    const auto res = cauchy_elliptic_monotone(g, Reaction::zero(), b0, ones, br);
    CHECK(res.converged);
    for (double v : res.maximal) CHECK(std::abs(v) <= 1e-12);
  }
  SUBCASE("bistable bracket strictly below the unstable root collapses to zero") {
    const Reaction f = Reaction::allen_cahn(0.3);
    const Bracket br{GraphFunction(5, 0.0), GraphFunction(5, 0.25)};
    const auto res = cauchy_elliptic_monotone(g, f, b0, c0, br);
    CHECK(res.converged);
    for (double v : res.maximal) CHECK(std::abs(v) <= 1e-8);
    // the limit is certified as an equation solution
    auto rhs = [&](int x) { return f(res.maximal[x]); };
    const auto cert = certify_elliptic(g, nullptr, res.maximal, nullptr, {}, rhs,
                                       BoundaryKind::None, {}, 1e-8);
    CHECK(cert.is_supersolution);
    CHECK(cert.is_subsolution);
  }
  SUBCASE("bracket reaching the unstable root keeps it as the maximal solution") {
    // f(alpha) = 0, so the constant alpha solves the equation; the maximal
    // limit in [0, alpha] is alpha itself while the minimal one is zero
    const Reaction f = Reaction::allen_cahn(0.3);
    const Bracket br{GraphFunction(5, 0.0), GraphFunction(5, 0.3)};
    const auto res = cauchy_elliptic_monotone(g, f, b0, c0, br);
    CHECK(res.converged);
    for (double v : res.maximal) CHECK(v == doctest::Approx(0.3).epsilon(1e-12));
    for (double v : res.minimal) CHECK(std::abs(v) <= 1e-12);
    CHECK_FALSE(res.unique);
  }
  SUBCASE("negative drift rejected") {
    DriftField bad(5, -1.0);
    const Bracket br{GraphFunction(5, 0.0), GraphFunction(5, 1.0)};
    CHECK_THROWS_AS(cauchy_elliptic_monotone(g, Reaction::fisher_kpp(), bad, c0, br),
                    std::invalid_argument);
  }
}

TEST_CASE("parabolic picard iteration") {
  const auto g = demo_graph();
  const auto p = demo_partition(g);

  SUBCASE("zero reaction reproduces the linear solve exactly") {
    SemilinearParabolicProblem prob;
    prob.graph = &g;
    prob.partition = &p;
    prob.kind = BoundaryKind::Dirichlet;
    prob.f = Reaction::zero();
    prob.initial = {8.0, 1.0, 0.5};
    prob.horizon = 1.0;
    const TimeGrid grid{1.0, 100};
    const auto lower = constant_series(g, grid, 0.0);
    const auto upper = constant_series(g, grid, 8.0);
    const auto res = parabolic_monotone(prob, lower, upper, grid);
    CHECK(res.converged);
    CHECK(res.shift == 0.0);

    LinearParabolicProblem lp;
    lp.graph = &g;
    lp.partition = &p;
    lp.kind = BoundaryKind::Dirichlet;
    lp.initial = prob.initial;
    lp.horizon = 1.0;
    const auto direct = solve_ibvp_dirichlet(lp, grid);
    for (int m = 0; m < direct.size(); ++m)
      CHECK(oracles::sup_diff(res.upper_fixed.states[m], direct.states[m]) == 0.0);
  }
  SUBCASE("logistic fixed point matches the time stepper") {
    SemilinearParabolicProblem prob;
    prob.graph = &g;
    prob.partition = &p;
    prob.kind = BoundaryKind::Dirichlet;
    prob.f = Reaction::logistic(1.8, 1.0);
    prob.initial = {8.0, 1.0, 0.5};
    prob.horizon = 5.0;
    const TimeGrid grid{5.0, 5000};
    const auto lower = constant_series(g, grid, 0.0);
    const auto upper = constant_series(g, grid, 8.0);
    const auto res = parabolic_monotone(prob, lower, upper, grid, {1e-10, 400, false});
    CHECK(res.converged);
    CHECK(res.gap <= 1e-9);

    // the stepper's own first-order error needs a finer dt than its default
    Scenario sc{&g, &p, BoundaryKind::Dirichlet, prob.f, {}, prob.initial, 5.0, 5e-5, 20000};
    const auto imex = integrate(sc);
    // compare at the recorded times of the IMEX run
    double worst = 0.0;
    for (int k = 0; k < imex.size(); ++k) {
      const int m = static_cast<int>(std::llround(imex.times[k] / grid.dt()));
      worst = std::max(worst, oracles::sup_diff(imex.states[k], res.upper_fixed.states[m]));
    }
    CHECK(worst <= 1e-4);
  }
  SUBCASE("iterates remain inside a constant bracket") {
    SemilinearParabolicProblem prob;
    prob.graph = &g;
    prob.partition = &p;
    prob.kind = BoundaryKind::Dirichlet;
    prob.f = Reaction::logistic(1.8, 1.0);
    prob.initial = {8.0, 1.0, 0.5};
    prob.horizon = 2.0;
    const TimeGrid grid{2.0, 400};
    const double top = std::max(1.8, 8.0);
    const auto lower = constant_series(g, grid, 0.0);
    const auto upper = constant_series(g, grid, top);
    const auto res = parabolic_monotone(prob, lower, upper, grid, {1e-10, 400, false});
    CHECK(res.converged);
    for (int m = 0; m < grid.size(); ++m)
      for (int x = 0; x < g.size(); ++x) {
        CHECK(res.lower_fixed.states[m][x] >= -1e-9);
        CHECK(res.upper_fixed.states[m][x] <= top + 1e-9);
      }
  }
  SUBCASE("unordered bracket throws") {
    SemilinearParabolicProblem prob;
    prob.graph = &g;
    prob.partition = &p;
    prob.kind = BoundaryKind::Dirichlet;
    prob.f = Reaction::zero();
    prob.initial = {0.0, 0.0, 0.0};
    prob.horizon = 1.0;
    const TimeGrid grid{1.0, 10};
    const auto lower = constant_series(g, grid, 1.0);
    const auto upper = constant_series(g, grid, 0.0);
    CHECK_THROWS_AS(parabolic_monotone(prob, lower, upper, grid), std::invalid_argument);
  }
}
