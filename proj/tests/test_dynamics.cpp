#include <doctest.h>

#include <cmath>
#include <random>

#include "graphpde/dynamics.hpp"
#include "graphpde/random_graph.hpp"
#include "oracles.hpp"

using namespace graphpde;

TEST_CASE("imex integration") {
  const auto g = demo_graph();
  const auto p = demo_partition(g);

  SUBCASE("linear dirichlet decay converges at first order in dt") {
    const auto es = dirichlet_eigensystem(g, p);
    auto run = [&](double dt) {
      Scenario sc{&g, &p, BoundaryKind::Dirichlet, Reaction::zero(), {},
                  es.functions[0], 1.0, dt, static_cast<int>(std::llround(1.0 / dt))};
      const auto ts = integrate(sc);
      double err = 0.0;
      const double factor = std::exp(-es.values[0]);
      for (size_t i = 0; i < p.interior().size(); ++i)
        err = std::max(err, std::abs(ts.states.back()[p.interior()[i]] -
                                     factor * es.functions[0][i]));
      return err;
    };
    const double e1 = run(1e-2);
    const double e2 = run(5e-3);
    CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.2));
  }
  SUBCASE("neumann zero-flux conserves mass per step") {
    Scenario sc{&g, &p, BoundaryKind::Neumann, Reaction::zero(), {},
                {2.0, 0.5, 1.0}, 0.05, 1e-3, 1};
    const auto ts = integrate(sc);
    const double m0 = integrate(g, ts.states[0], p.interior());
    for (int m = 1; m < ts.size(); ++m)
      CHECK(std::abs(integrate(g, ts.states[m], p.interior()) - m0) <= 1e-12 * (1.0 + m0));
  }
  SUBCASE("supercritical logistic rises toward the positive state") {
    Scenario sc{&g, &p, BoundaryKind::Dirichlet, Reaction::logistic(1.8, 1.0), {},
                {8.0, 1.0, 0.5}, 50.0, 1e-3, 1000};
    const auto ts = integrate(sc);
    // x3 starts below the steady value and must climb; x1 starts above and drops
    CHECK(ts.states.back()[2] > 1.0);
    CHECK(ts.states.back()[0] < 8.0);
    const auto det = steady_state_detect(ts, sc, 5, 1e-6);
    CHECK(det.has_value());
  }
  SUBCASE("halving dt halves the gap to the picard fixed point") {
    SemilinearParabolicProblem prob;
    prob.graph = &g;
    prob.partition = &p;
    prob.kind = BoundaryKind::Dirichlet;
    prob.f = Reaction::logistic(1.8, 1.0);
    prob.initial = {1.0, 0.4, 0.2};
    prob.horizon = 1.0;
    const TimeGrid grid{1.0, 2000};
    const auto lower = constant_series(g, grid, 0.0);
    const auto upper = constant_series(g, grid, 1.8);
    const auto fixed = parabolic_monotone(prob, lower, upper, grid, {1e-11, 400, false});
    REQUIRE(fixed.converged);
    auto imex_err = [&](double dt) {
      Scenario sc{&g, &p, BoundaryKind::Dirichlet, prob.f, {}, prob.initial, 1.0, dt,
                  static_cast<int>(std::llround(1.0 / dt))};
      const auto ts = integrate(sc);
      return oracles::sup_diff(ts.states.back(), fixed.upper_fixed.states.back());
    };
    const double e1 = imex_err(2e-3);
    const double e2 = imex_err(1e-3);
    CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.3));
  }
  SUBCASE("nonnegative data stays nonnegative") {
    std::mt19937_64 rng(4);
    for (int it = 0; it < 5; ++it) {
      const auto gr = make_random_connected_graph(rng, 6, 0.4, true);
      Scenario sc{&gr, nullptr, BoundaryKind::None, Reaction::allen_cahn(0.4), {},
                  random_function(rng, 6, 0.0, 1.0), 2.0, 1e-3, 100};
      const auto ts = integrate(sc);
      for (const auto& st : ts.states)
        for (double v : st) CHECK(v >= -1e-12);
    }
  }
  SUBCASE("blow-up is reported with its time") {
    // u' = u² from 2 blows up around t = 0.5
    Scenario sc{&g, nullptr, BoundaryKind::None, Reaction::polynomial({0.0, 0.0, 1e8}), {},
                GraphFunction(5, 10.0), 10.0, 1e-3, 10};
    CHECK_THROWS_AS(integrate(sc), BlowUpError);
  }
}

TEST_CASE("dirichlet logistic classifier") {
  const auto g = demo_graph();
  const auto p = demo_partition(g);
  const GraphFunction u0{8.0, 1.0, 0.5};

  SUBCASE("subcritical growth dies out") {
    RunControls rc;
    rc.horizon = 100.0;
    const auto cl = classify_logistic_dirichlet(g, p, 0.1, 1.0, u0, rc);
    CHECK(cl.outcome == Outcome::Extinction);
    CHECK(cl.lambda1 == doctest::Approx(0.23240812075600188).epsilon(1e-12));
    CHECK(cl.threshold_margin < 0.0);
    CHECK(cl.final_sup <= 1e-3);
    CHECK(cl.monotone_tail);
  }
  SUBCASE("supercritical growth settles on the steady state") {
    RunControls rc;
    rc.horizon = 50.0;
    const auto cl = classify_logistic_dirichlet(g, p, 1.8, 1.0, u0, rc);
    CHECK(cl.outcome == Outcome::ConvergenceToState);
    CHECK(cl.threshold_margin > 0.0);
    CHECK(cl.steady_residual <= 1e-8);
    REQUIRE(cl.steady_state.size() == 5);
    CHECK(cl.steady_state[1] > cl.steady_state[0]);  // x2 carries the peak
  }
  SUBCASE("critical growth decays slowly but decays") {
    const auto es = dirichlet_eigensystem(g, p);
    RunControls rc;
    rc.horizon = 2000.0;
    rc.stride = 10000;
    const auto cl = classify_logistic_dirichlet(g, p, es.values[0], 1.0, u0, rc);
    CHECK(cl.outcome == Outcome::Extinction);
  }
}

TEST_CASE("neumann logistic classifier") {
  const auto g = demo_graph();
  const auto p = demo_partition(g);

  SUBCASE("uniform data converges to a/b with a valid envelope") {
    RunControls rc;
    rc.horizon = 50.0;
    const auto cl = classify_logistic_neumann(g, p, 1.0, 1.0, {0.1, 0.1, 0.1}, rc);
    CHECK(cl.outcome == Outcome::ConvergenceToConstant);
    CHECK(cl.constant_value == doctest::Approx(1.0));
    CHECK(cl.final_sup == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(cl.sandwich_ok);
  }
  SUBCASE("starting at the equilibrium stays there") {
    RunControls rc;
    rc.horizon = 5.0;
    const auto cl = classify_logistic_neumann(g, p, 1.0, 1.0, {1.0, 1.0, 1.0}, rc);
    CHECK(cl.outcome == Outcome::ConvergenceToConstant);
    CHECK(cl.sandwich_ok);
  }
}

TEST_CASE("kpp classifier") {
  std::mt19937_64 rng(42);
  const auto g = make_random_connected_graph(rng, 10, 0.3, true);

  SUBCASE("spike spreads to one") {
    GraphFunction u0(10, 0.0);
    u0[0] = 0.01;
    RunControls rc;
    rc.horizon = 100.0;
    const auto cl = classify_kpp_cauchy(g, Reaction::fisher_kpp(), u0, rc);
    CHECK(cl.hypothesis_ok);
    CHECK(cl.outcome == Outcome::ConvergenceToConstant);
    CHECK(cl.constant_value == doctest::Approx(1.0));
  }
  SUBCASE("constant one is an equilibrium") {
    RunControls rc;
    rc.horizon = 1.0;
    const auto cl = classify_kpp_cauchy(g, Reaction::fisher_kpp(), GraphFunction(10, 1.0), rc);
    CHECK(cl.outcome == Outcome::ConvergenceToConstant);
  }
  SUBCASE("a quotient-increasing reaction raises the hypothesis flag") {
    GraphFunction u0(10, 0.5);
    RunControls rc;
    rc.horizon = 60.0;
    const Reaction flagged = Reaction::polynomial({0.0, 1.0, 1.0, -2.0});
    const auto cl = classify_kpp_cauchy(g, flagged, u0, rc);
    CHECK_FALSE(cl.hypothesis_ok);
    // classification is still attempted
    CHECK(cl.outcome == Outcome::ConvergenceToConstant);
  }
}

TEST_CASE("allen-cahn criterion") {
  const auto g = demo_graph();
  const Reaction f = Reaction::allen_cahn(0.3);

  SUBCASE("exact quotient supremum at rho = 0") {
    const auto crit = allen_cahn_criterion(g, f, GraphFunction(5, 0.0));
    CHECK(std::abs(crit.s0 - 0.1225) <= 1e-12);
  }
  SUBCASE("zero data admits rho = 0") {
    const auto crit = allen_cahn_criterion(g, f, GraphFunction(5, 0.0));
    CHECK(crit.any_admissible);
    CHECK(crit.admissible[0]);
  }
  SUBCASE("sampled quotient agrees with the closed form for small rho") {
    // continuity: s(rho) near s(0) for tiny rho
    const auto crit = allen_cahn_criterion(g, f, GraphFunction(5, 0.0));
    CHECK(crit.s_values[1] == doctest::Approx(crit.s0).epsilon(1e-2));
    CHECK(crit.s_values[1] >= crit.s0 - 1e-12);  // shrinking denominator grows s
  }
  SUBCASE("data above the root takes the propagation branch") {
    const auto crit = allen_cahn_criterion(g, f, GraphFunction(5, 0.5));
    CHECK(crit.propagation);
    CHECK_FALSE(crit.any_admissible);
  }
  SUBCASE("per-vertex slack identifies the binding vertex") {
    GraphFunction u0(5, 0.05);
    const auto crit = allen_cahn_criterion(g, f, u0);
    REQUIRE(crit.vertex_slack.size() == 5);
    // largest measure binds hardest: x1 or x3 with mu = 3
    double worst = 1e300;
    int arg = -1;
    for (int x = 0; x < 5; ++x)
      if (crit.vertex_slack[x] < worst) {
        worst = crit.vertex_slack[x];
        arg = x;
      }
    CHECK(g.measure(arg) == doctest::Approx(3.0));
  }
}

TEST_CASE("allen-cahn classifier") {
  const auto g = demo_graph();
  const Reaction f = Reaction::allen_cahn(0.3);
  RunControls rc;
  rc.horizon = 60.0;

  SUBCASE("small data dies out") {
    const auto cl = classify_allen_cahn(g, f, GraphFunction(5, 0.05), rc);
    CHECK_FALSE(cl.admissible_rho.empty());
    CHECK(cl.outcome == Outcome::Extinction);
    CHECK(cl.final_sup <= 1e-3);
  }
  SUBCASE("data above the root propagates to one") {
    const auto cl = classify_allen_cahn(g, f, GraphFunction(5, 0.5), rc);
    CHECK(cl.outcome == Outcome::ConvergenceToConstant);
    CHECK(cl.constant_value == doctest::Approx(1.0));
    CHECK(cl.final_sup == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("sitting on the unstable root is undecided") {
    const auto cl = classify_allen_cahn(g, f, GraphFunction(5, 0.3), rc);
    CHECK(cl.outcome == Outcome::Undecided);
  }
}

TEST_CASE("steady state detection") {
  const auto g = demo_graph();
  const auto p = demo_partition(g);

  SUBCASE("constant series detected at the window end") {
    Scenario sc{&g, &p, BoundaryKind::Dirichlet, Reaction::zero(), {},
                GraphFunction(3, 0.0), 1.0, 1e-2, 10};
    TimeSeries s;
    for (int m = 0; m <= 10; ++m) {
      s.times.push_back(0.1 * m);
      s.states.emplace_back(5, 0.0);
    }
    const auto det = steady_state_detect(s, sc, 4, 1e-12);
    REQUIRE(det.has_value());
    CHECK(det->achieved_at == doctest::Approx(0.3));
  }
  SUBCASE("oscillating series is not detected") {
    Scenario sc{&g, &p, BoundaryKind::Dirichlet, Reaction::zero(), {},
                GraphFunction(3, 0.0), 1.0, 1e-2, 10};
    TimeSeries s;
    for (int m = 0; m <= 10; ++m) {
      s.times.push_back(0.1 * m);
      s.states.emplace_back(5, m % 2 == 0 ? 1.0 : -1.0);
    }
    CHECK_FALSE(steady_state_detect(s, sc, 4, 1e-6).has_value());
  }
  SUBCASE("logistic run detects the monotone-iteration state") {
    const Reaction f = Reaction::logistic(1.8, 1.0);
    Scenario sc{&g, &p, BoundaryKind::Dirichlet, f, {}, {8.0, 1.0, 0.5}, 60.0, 1e-3, 1000};
    const auto ts = integrate(sc);
    const auto det = steady_state_detect(ts, sc, 5, 1e-7);
    REQUIRE(det.has_value());
    const Bracket br =
        make_logistic_bracket(g, &p, BoundaryKind::Dirichlet, f, std::vector<double>{8.0, 1.0, 0.5});
    std::vector<double> zeros(2, 0.0);
    const auto mono = elliptic_monotone(g, p, BoundaryKind::Dirichlet, f, zeros, br,
                                        {1e-10, 10000, false});
    CHECK(oracles::sup_diff(det->state, mono.minimal) <= 1e-6);
  }
}

TEST_CASE("scalar ode envelope") {
  SUBCASE("logistic closed form") {
    const auto z = scalar_ode_bound([](double v) { return v * (1.0 - v); }, 0.5, 5.0, 1e-3);
    const double got = z.back();
    const double want = 1.0 / (1.0 + std::exp(-5.0));
    CHECK(std::abs(got - want) <= 1e-8);
  }
  SUBCASE("zero stays zero") {
    const auto z = scalar_ode_bound([](double v) { return v * (1.0 - v); }, 0.0, 2.0, 1e-3);
    for (double v : z) CHECK(v == 0.0);
  }
  SUBCASE("bistable decay below the root") {
    const Reaction f = Reaction::allen_cahn(0.3);
    const auto z = scalar_ode_bound([&](double v) { return f(v); }, 0.2, 30.0, 1e-3);
    for (size_t k = 1; k < z.size(); ++k) CHECK(z[k] <= z[k - 1] + 1e-15);
    CHECK(z.back() <= 1e-3);
  }
}
