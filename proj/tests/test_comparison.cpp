#include <doctest.h>

#include <cmath>
#include <random>

#include "graphpde/comparison.hpp"
#include "graphpde/dynamics.hpp"
#include "graphpde/random_graph.hpp"

using namespace graphpde;

namespace {

TimeSeries zero_series(const WeightedGraph& g, int steps, double T) {
  TimeSeries s;
  for (int m = 0; m <= steps; ++m) {
    s.times.push_back(T * m / steps);
    s.states.emplace_back(g.size(), 0.0);
  }
  return s;
}

const BoundaryOperator kDirichletOp{[](int, double) { return 1.0; }, {}, {}};

}  // namespace

TEST_CASE("parabolic certificates") {
  const auto g = demo_graph();
  const auto p = demo_partition(g);

  SUBCASE("the zero series is both a super- and a subsolution") {
    const auto zs = zero_series(g, 20, 1.0);
    const auto cert = certify_parabolic(zs, g, &p, constant_fn(0.5), kDirichletOp, {}, 1e-12);
    CHECK(cert.is_supersolution);
    CHECK(cert.is_subsolution);
    CHECK(cert.verdict() == "SupersolutionAndSubsolution");
  }
  SUBCASE("solver output with nonnegative data certifies as supersolution") {
    LinearParabolicProblem lp;
    lp.graph = &g;
    lp.partition = &p;
    lp.kind = BoundaryKind::Dirichlet;
    lp.initial = {8.0, 1.0, 0.5};
    lp.horizon = 1.0;
    const TimeGrid grid{1.0, 200};
    const auto ts = solve_ibvp_dirichlet(lp, grid);
    double sup = 0.0;
    for (const auto& st : ts.states) sup = std::max(sup, sup_norm(st));
    const auto cert = certify_parabolic(ts, g, &p, {}, kDirichletOp, {},
                                        default_parabolic_tolerance(grid.dt(), sup));
    CHECK(cert.is_supersolution);
    CHECK(cert.min_residual >= -1e-9 - default_parabolic_tolerance(grid.dt(), sup));
    const auto pos = check_positivity(ts, g, &p, PositivityMode::Nonneg, 1e-9);
    CHECK(pos.pass);
  }
  SUBCASE("a planted violation flips the verdict and is located") {
    auto zs = zero_series(g, 20, 1.0);
    zs.states[0][1] = -1.0;  // x2 at t = 0
    const auto cert = certify_parabolic(zs, g, &p, {}, kDirichletOp, {}, 1e-12);
    CHECK_FALSE(cert.is_supersolution);
    CHECK(cert.verdict() != "SupersolutionAndSubsolution");
    CHECK(cert.min_initial_margin == doctest::Approx(-1.0));
  }
  SUBCASE("grid too coarse") {
    const auto zs = zero_series(g, 1, 1.0);
    CHECK_THROWS_AS(certify_parabolic(zs, g, &p, {}, kDirichletOp, {}, 1e-12),
                    std::invalid_argument);
  }
  SUBCASE("nonzero boundary data certifies through the data-aware operator") {
    LinearParabolicProblem lp;
    lp.graph = &g;
    lp.partition = &p;
    lp.kind = BoundaryKind::Dirichlet;
    lp.boundary_data = constant_fn(0.3);
    lp.initial = {0.3, 0.3, 0.3};
    lp.horizon = 1.0;
    const TimeGrid grid{1.0, 200};
    const auto ts = solve_ibvp_dirichlet(lp, grid);
    double sup = 0.0;
    for (const auto& st : ts.states) sup = std::max(sup, sup_norm(st));
    BoundaryOperator bc{[](int, double) { return 1.0; }, {}, constant_fn(0.3)};
    const auto cert =
        certify_parabolic(ts, g, &p, {}, bc, {}, default_parabolic_tolerance(grid.dt(), sup),
                          [](int) { return 0.3; });
    CHECK(cert.is_supersolution);
    CHECK(cert.is_subsolution);  // exact solution with its own data as reference
    CHECK(cert.min_boundary_margin == doctest::Approx(0.0));
  }
  SUBCASE("mixed boundary operator is accepted") {
    const auto zs = zero_series(g, 10, 1.0);
    BoundaryOperator mixed{[](int, double) { return 0.5; }, [](int, double) { return 2.0; }, {}};
    const auto cert = certify_parabolic(zs, g, &p, {}, mixed, {}, 1e-12);
    CHECK(cert.is_supersolution);
    CHECK(cert.is_subsolution);
  }
  SUBCASE("loosening the tolerance never flips pass to fail") {
    LinearParabolicProblem lp;
    lp.graph = &g;
    lp.partition = &p;
    lp.kind = BoundaryKind::Dirichlet;
    lp.initial = {1.0, 0.5, 0.25};
    lp.horizon = 1.0;
    const auto ts = solve_ibvp_dirichlet(lp, {1.0, 100});
    double sup = 0.0;
    for (const auto& st : ts.states) sup = std::max(sup, sup_norm(st));
    bool prev = false;
    for (double tol : {1e-12, 1e-8, 1e-4, 1e-2, 1.0}) {
      const auto cert = certify_parabolic(ts, g, &p, {}, kDirichletOp, {}, tol);
      if (prev) CHECK(cert.is_supersolution);
      prev = prev || cert.is_supersolution;
    }
    CHECK(prev);
  }
}

TEST_CASE("elliptic certificates") {
  const auto g = demo_graph();
  const auto p = demo_partition(g);
  const auto es = dirichlet_eigensystem(g, p);

  SUBCASE("zero function both ways") {
    GraphFunction z(5, 0.0);
    const auto cert = certify_elliptic(g, &p, z, nullptr, {}, {}, BoundaryKind::Dirichlet, {},
                                       1e-12);
    CHECK(cert.is_supersolution);
    CHECK(cert.is_subsolution);
  }
  SUBCASE("eigenfunction identity") {
    GraphFunction u(5, 0.0);
    for (size_t i = 0; i < p.interior().size(); ++i)
      u[p.interior()[i]] = es.functions[0][i];
    auto rhs = [&](int x) { return es.values[0] * u[x]; };
    const auto cert =
        certify_elliptic(g, &p, u, nullptr, {}, rhs, BoundaryKind::Dirichlet, {}, 1e-10);
    CHECK(cert.is_supersolution);
    CHECK(cert.is_subsolution);
  }
  SUBCASE("one bad residual entry yields Neither") {
    GraphFunction u(5, 0.0);
    u[0] = 1.0;  // -Δu(x1) > 0, -Δu(x2) < 0
    const auto cert =
        certify_elliptic(g, &p, u, nullptr, {}, {}, BoundaryKind::Dirichlet, {}, 1e-6);
    CHECK_FALSE(cert.is_supersolution);
    CHECK_FALSE(cert.is_subsolution);
    CHECK(cert.verdict() == "Neither");
  }
}

TEST_CASE("ordering reports") {
  const auto g = demo_graph();
  const auto p = demo_partition(g);

  SUBCASE("identical series pass with zero margin") {
    const auto a = zero_series(g, 10, 1.0);
    const auto rep = assert_ordering(a, a, g, &p, 1e-12);
    CHECK(rep.pass);
    CHECK(rep.min_margin == doctest::Approx(0.0));
  }
  SUBCASE("logistic runs from ordered data stay ordered") {
    const Reaction f = Reaction::logistic(1.8, 1.0);
    Scenario lo{&g, &p, BoundaryKind::Dirichlet, f, {}, {8.0, 1.0, 0.5}, 2.0, 1e-3, 100};
    Scenario hi = lo;
    hi.initial = {8.1, 1.1, 0.6};
    const auto ts_lo = integrate(lo);
    const auto ts_hi = integrate(hi);
    const auto rep = assert_ordering(ts_hi, ts_lo, g, &p, 1e-10);
    CHECK(rep.pass);
    CHECK(rep.strict_margin_interior > 0.0);
  }
  SUBCASE("a constructed crossing is reported with its first time") {
    auto a = zero_series(g, 10, 1.0);
    auto b = zero_series(g, 10, 1.0);
    b.states[7][2] = 0.5;  // lower pops above upper at t = 0.7
    const auto rep = assert_ordering(a, b, g, &p, 1e-12);
    CHECK_FALSE(rep.pass);
    REQUIRE(rep.first_crossing_time.has_value());
    CHECK(*rep.first_crossing_time == doctest::Approx(0.7));
    CHECK(rep.first_crossing_vertex == "x3");
  }
  SUBCASE("mismatched grids throw") {
    const auto a = zero_series(g, 10, 1.0);
    const auto b = zero_series(g, 20, 1.0);
    CHECK_THROWS_AS(assert_ordering(a, b, g, &p, 1e-12), std::invalid_argument);
  }
}

TEST_CASE("positivity checks") {
  const auto g = demo_graph();
  const auto p = demo_partition(g);

  SUBCASE("strict interior positivity for solver output from nonneg data") {
    const Reaction f = Reaction::logistic(1.8, 1.0);
    Scenario sc{&g, &p, BoundaryKind::Dirichlet, f, {}, {8.0, 1.0, 0.5}, 1.0, 1e-3, 100};
    const auto ts = integrate(sc);
    CHECK(check_positivity(ts, g, &p, PositivityMode::StrictInterior, 1e-12).pass);
  }
  SUBCASE("zero data passes Nonneg but not StrictInterior") {
    const auto zs = zero_series(g, 10, 1.0);
    CHECK(check_positivity(zs, g, &p, PositivityMode::Nonneg, 1e-12).pass);
    CHECK_FALSE(check_positivity(zs, g, &p, PositivityMode::StrictInterior, 1e-12).pass);
  }
  SUBCASE("full-graph spike is everywhere positive immediately") {
    LinearParabolicProblem lp;
    lp.graph = &g;
    lp.initial = {1.0, 0.0, 0.0, 0.0, 0.0};
    lp.horizon = 0.01;
    const auto ts = solve_cauchy(lp, {0.01, 4});
    for (double v : ts.states.back()) CHECK(v > 0.0);
  }
}
