#include "graphpde/props.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "graphpde/comparison.hpp"
#include "graphpde/dynamics.hpp"
#include "graphpde/random_graph.hpp"

namespace graphpde {

namespace {

struct Tally {
  PropsEntry entry;
  explicit Tally(std::string name) { entry.name = std::move(name); }
  void check(bool ok, double magnitude, const std::string& note = "") {
    ++entry.runs;
    if (!ok) {
      ++entry.failures;
      if (entry.note.empty()) entry.note = note;
    }
    entry.worst = std::max(entry.worst, magnitude);
  }
};

void operator_identities(const PropsConfig& cfg, std::mt19937_64& rng, PropsReport& rep) {
  Tally adj("mu-self-adjointness of the graph Laplacian");
  Tally green("boundary-flux identity");
  Tally bilinear("gradient-form bilinearity");
  Tally nonneg("gradient-form nonnegativity");
  Tally constants("Laplacian annihilates constants");
  Tally accepts("validate() accepts generated graphs");
  Tally rejects("validate() rejects single-axiom mutations");
  std::uniform_int_distribution<int> nsize(5, 10);

  for (int it = 0; it < cfg.operator_identity_runs; ++it) {
    const int n = nsize(rng);
    const auto g = make_random_connected_graph(rng, n, 0.3, it % 2 == 0);
    const auto p = make_random_partition(rng, g);
    const auto u = random_function(rng, n, -2.0, 2.0);
    const auto v = random_function(rng, n, -2.0, 2.0);
    const auto w = random_function(rng, n, -2.0, 2.0);

    accepts.check(validate(g, &p).ok(), 0.0, "generated graph rejected");

    double lhs = 0.0, rhs = 0.0;
    for (int x = 0; x < n; ++x) {
      lhs += g.measure(x) * v[x] * laplacian_full(g, u, x);
      rhs += g.measure(x) * u[x] * laplacian_full(g, v, x);
    }
    adj.check(std::abs(lhs - rhs) <= 1e-11 * (1.0 + std::abs(lhs)), std::abs(lhs - rhs));

    double gl = 0.0, gr = 0.0;
    for (int x : p.interior()) gl += g.measure(x) * laplacian_domain(g, p, u, x);
    for (int z : p.boundary()) gr += g.measure(z) * normal_derivative(g, p, u, z);
    green.check(std::abs(gl - gr) <= 1e-11 * (1.0 + std::abs(gl)), std::abs(gl - gr));

    const double a = 1.7, b = -0.6;
    for (int x = 0; x < n; ++x) {
      GraphFunction au_bw(n);
      for (int i = 0; i < n; ++i) au_bw[i] = a * u[i] + b * w[i];
      const double left = gradient_form(g, au_bw, v, x);
      const double right = a * gradient_form(g, u, v, x) + b * gradient_form(g, w, v, x);
      bilinear.check(std::abs(left - right) <= 1e-12 * (1.0 + std::abs(left)),
                     std::abs(left - right));
      nonneg.check(gradient_form(g, u, u, x) >= 0.0, -std::min(0.0, gradient_form(g, u, u, x)));
    }

    GraphFunction c(n, 3.25);
    for (int x = 0; x < n; ++x)
      constants.check(std::abs(laplacian_full(g, c, x)) <= 1e-13,
                      std::abs(laplacian_full(g, c, x)));

    // single-axiom mutations must each be caught
    {
      Matrix wm(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) wm(i, j) = g.weight(i, j);
      int ei = -1, ej = -1;
      for (int i = 0; i < n && ei < 0; ++i)
        for (int j = 0; j < n; ++j)
          if (g.weight(i, j) > 0.0) {
            ei = i;
            ej = j;
            break;
          }
      wm(ei, ej) += 0.5;  // asymmetry
      auto bad = WeightedGraph::raw(g.ids(), g.measures(), wm);
      rejects.check(!validate(bad).ok(), 0.0, "asymmetric weight accepted");
    }
    {
      auto mu = g.measures();
      mu[it % n] = 0.0;  // nonpositive measure
      Matrix wm(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) wm(i, j) = g.weight(i, j);
      auto bad = WeightedGraph::raw(g.ids(), mu, wm);
      rejects.check(!validate(bad).ok(), 0.0, "nonpositive measure accepted");
    }
    {
      Matrix wm(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) wm(i, j) = g.weight(i, j);
      wm(it % n, it % n) = 1.0;  // self-loop
      auto bad = WeightedGraph::raw(g.ids(), g.measures(), wm);
      rejects.check(!validate(bad).ok(), 0.0, "self-loop accepted");
    }
    {
      // disconnect one vertex entirely
      Matrix wm(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) wm(i, j) = g.weight(i, j);
      const int cut = it % n;
      for (int j = 0; j < n; ++j) wm(cut, j) = wm(j, cut) = 0.0;
      auto bad = WeightedGraph::raw(g.ids(), g.measures(), wm);
      rejects.check(!validate(bad).ok(), 0.0, "disconnected graph accepted");
    }
  }

  rep.entries.push_back(adj.entry);
  rep.entries.push_back(green.entry);
  rep.entries.push_back(bilinear.entry);
  rep.entries.push_back(nonneg.entry);
  rep.entries.push_back(constants.entry);
  rep.entries.push_back(accepts.entry);
  rep.entries.push_back(rejects.entry);
}

void spectral_properties(const PropsConfig& cfg, std::mt19937_64& rng, PropsReport& rep) {
  Tally ortho("mu-orthonormality of eigenfunctions");
  Tally resid("eigen residual below 1e-10");
  Tally order("eigenvalue orderings");
  Tally recon("operator reconstruction from the eigensystem");

  for (int it = 0; it < cfg.spectral_runs; ++it) {
    std::uniform_int_distribution<int> nsize(4, 9);
    const int n = nsize(rng);
    const auto g = make_random_connected_graph(rng, n, 0.35, it % 2 == 0);
    const auto p = make_random_partition(rng, g);

    const auto full = full_eigensystem(g);
    const auto dir = dirichlet_eigensystem(g, p);
    const auto neu = neumann_eigensystem(g, p);

    for (const auto* es : {&full, &dir, &neu}) {
      double worst = 0.0;
      for (int i = 0; i < es->count(); ++i)
        for (int j = 0; j < es->count(); ++j) {
          const double want = (i == j) ? 1.0 : 0.0;
          worst = std::max(worst,
                           std::abs(es->inner(es->functions[i], es->functions[j]) - want));
        }
      ortho.check(worst <= 1e-10, worst);
    }

    resid.check(eigen_residual(assemble_neg_laplacian_full(g), full) <= 1e-10,
                eigen_residual(assemble_neg_laplacian_full(g), full));
    resid.check(eigen_residual(assemble_neg_laplacian_dirichlet(g, p), dir) <= 1e-10,
                eigen_residual(assemble_neg_laplacian_dirichlet(g, p), dir));
    resid.check(eigen_residual(assemble_neg_laplacian_neumann(g, p), neu) <= 1e-10,
                eigen_residual(assemble_neg_laplacian_neumann(g, p), neu));

    order.check(std::abs(full.values[0]) <= 1e-10 && full.values[1] > 1e-10,
                std::abs(full.values[0]));
    order.check(dir.values[0] > 0.0, -std::min(0.0, dir.values[0]));
    order.check(std::abs(neu.values[0]) <= 1e-10 &&
                    (neu.count() < 2 || neu.values[1] > 1e-10),
                std::abs(neu.values[0]));
    order.check(std::is_sorted(full.values.begin(), full.values.end()), 0.0);

    // rebuild M = Σ λ_j φ_j (μ φ_j)ᵀ and compare entrywise
    const Matrix m = assemble_neg_laplacian_full(g);
    double worst = 0.0;
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        double s = 0.0;
        for (int j = 0; j < n; ++j)
          s += full.values[j] * full.functions[j][x] * full.functions[j][y] * g.measure(y);
        worst = std::max(worst, std::abs(s - m(x, y)));
      }
    recon.check(worst <= 1e-9, worst);
  }

  rep.entries.push_back(ortho.entry);
  rep.entries.push_back(resid.entry);
  rep.entries.push_back(order.entry);
  rep.entries.push_back(recon.entry);
}

void kernel_properties(const PropsConfig& cfg, std::mt19937_64& rng, PropsReport& rep) {
  Tally delta("heat kernel is the identity at t = 0");
  Tally positive("heat kernel strictly positive for t > 0");
  Tally rows("full-kernel rows sum to one");
  Tally dirrows("Dirichlet-kernel row sums in (0, 1]");
  Tally balance("detailed balance");
  Tally semigroup("semigroup composition");

  for (int it = 0; it < cfg.kernel_runs; ++it) {
    std::uniform_int_distribution<int> nsize(4, 8);
    const int n = nsize(rng);
    const auto g = make_random_connected_graph(rng, n, 0.35, it % 2 == 0);
    const auto p = make_random_partition(rng, g);
    const auto full = full_eigensystem(g);
    const auto dir = dirichlet_eigensystem(g, p);

    for (const auto* es : {&full, &dir}) {
      const auto k0 = heat_kernel(*es, 0.0);
      double worst = 0.0;
      for (int x = 0; x < es->count(); ++x)
        for (int y = 0; y < es->count(); ++y)
          worst = std::max(worst, std::abs(k0.entries(x, y) - (x == y ? 1.0 : 0.0)));
      delta.check(worst <= 1e-10, worst);

      for (double t : {0.1, 1.0}) {
        const auto kt = heat_kernel(*es, t);
        double minv = 1e300;
        for (int x = 0; x < es->count(); ++x)
          for (int y = 0; y < es->count(); ++y) minv = std::min(minv, kt.entries(x, y));
        positive.check(minv > 0.0, -std::min(0.0, minv));

        double worst_bal = 0.0;
        for (int x = 0; x < es->count(); ++x)
          for (int y = 0; y < es->count(); ++y)
            worst_bal = std::max(worst_bal, std::abs(es->mu[x] * kt.entries(x, y) -
                                                     es->mu[y] * kt.entries(y, x)));
        balance.check(worst_bal <= 1e-10, worst_bal);
      }

      // K(t+s) = K(t)∘K(s)
      const auto ka = heat_kernel(*es, 0.3);
      const auto kb = heat_kernel(*es, 0.5);
      const auto kc = heat_kernel(*es, 0.8);
      double worst_sg = 0.0;
      for (int x = 0; x < es->count(); ++x)
        for (int y = 0; y < es->count(); ++y) {
          double s = 0.0;
          for (int z = 0; z < es->count(); ++z) s += ka.entries(x, z) * kb.entries(z, y);
          worst_sg = std::max(worst_sg, std::abs(s - kc.entries(x, y)));
        }
      semigroup.check(worst_sg <= 1e-10, worst_sg);
    }

    for (double t : {0.1, 1.0, 10.0}) {
      const auto kt = heat_kernel(full, t);
      for (int x = 0; x < n; ++x) {
        double s = 0.0;
        for (int y = 0; y < n; ++y) s += kt.entries(x, y);
        rows.check(std::abs(s - 1.0) <= 1e-10, std::abs(s - 1.0));
      }
      const auto kd = heat_kernel(dir, t);
      for (int x = 0; x < dir.count(); ++x) {
        double s = 0.0;
        for (int y = 0; y < dir.count(); ++y) s += kd.entries(x, y);
        dirrows.check(s > 0.0 && s <= 1.0 + 1e-12, std::max(0.0, s - 1.0));
      }
    }
  }

  rep.entries.push_back(delta.entry);
  rep.entries.push_back(positive.entry);
  rep.entries.push_back(rows.entry);
  rep.entries.push_back(dirrows.entry);
  rep.entries.push_back(balance.entry);
  rep.entries.push_back(semigroup.entry);
}

void linear_supersolutions(const PropsConfig& cfg, std::mt19937_64& rng, PropsReport& rep) {
  Tally super("nonnegative-data solves certified Supersolution");
  Tally nonneg("nonnegative-data solves stay nonnegative");
  std::uniform_int_distribution<int> nsize(4, 8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (int it = 0; it < cfg.linear_supersolution_runs; ++it) {
    const int n = nsize(rng);
    const auto g = make_random_connected_graph(rng, n, 0.3, it % 3 != 0);
    const auto p = make_random_partition(rng, g);
    const double c = 2.0 * unit(rng) - 1.0;  // bounded zero-order coefficient

    LinearParabolicProblem lp;
    lp.graph = &g;
    lp.partition = &p;
    lp.kind = BoundaryKind::Dirichlet;
    lp.shift = c;
    const double f0 = unit(rng), f1 = unit(rng);
    lp.forcing = [f0, f1](int, double t) { return f0 + f1 * t; };
    const double gb = 0.5 * unit(rng);
    lp.boundary_data = [gb](int, double) { return gb; };
    lp.initial = random_function(rng, static_cast<int>(p.interior().size()), 0.0, 1.5);
    lp.horizon = 1.0;

    const TimeGrid grid{1.0, 50};
    const auto ts = solve_ibvp_dirichlet(lp, grid);

    double sup_all = 0.0;
    for (const auto& st : ts.states) sup_all = std::max(sup_all, sup_norm(st));
    const double tol = default_parabolic_tolerance(grid.dt(), sup_all);

    // v_t − Δv − (−c)·v − forcing ≥ 0 with the Dirichlet boundary operator
    BoundaryOperator bc{[](int, double) { return 1.0; }, {}, {}};
    const double shift = lp.shift;
    SpaceTimeFn kfun = [shift](int, double) { return -shift; };
    const auto cert = certify_parabolic(ts, g, &p, kfun, bc, lp.forcing, tol);
    super.check(cert.is_supersolution, std::max(0.0, -cert.min_residual), cert.verdict());

    const auto pos = check_positivity(ts, g, &p, PositivityMode::Nonneg, 1e-9);
    nonneg.check(pos.pass, std::max(0.0, -pos.min_value));
  }

  rep.entries.push_back(super.entry);
  rep.entries.push_back(nonneg.entry);
}

void ordered_pairs(const PropsConfig& cfg, std::mt19937_64& rng, PropsReport& rep) {
  Tally ordered("ordered initial data stay ordered");
  std::uniform_int_distribution<int> nsize(4, 8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (int it = 0; it < cfg.ordered_pair_runs; ++it) {
    const int n = nsize(rng);
    const auto g = make_random_connected_graph(rng, n, 0.3, true);
    const bool dirichlet = it % 2 == 0;
    const Reaction f = (it % 3 == 0) ? Reaction::allen_cahn(0.2 + 0.3 * unit(rng))
                                     : Reaction::logistic(0.5 + unit(rng), 1.0);

    Scenario lo_sc, hi_sc;
    DomainPartition p = make_random_partition(rng, g);
    GraphFunction u_lo, u_hi;
    if (dirichlet) {
      const int ni = static_cast<int>(p.interior().size());
      u_lo = random_function(rng, ni, 0.0, 0.8);
      u_hi = u_lo;
      for (auto& v : u_hi) v += 0.1 + 0.3 * unit(rng);
      lo_sc = {&g, &p, BoundaryKind::Dirichlet, f, {}, u_lo, 1.0, 1e-3, 50};
      hi_sc = {&g, &p, BoundaryKind::Dirichlet, f, {}, u_hi, 1.0, 1e-3, 50};
    } else {
      u_lo = random_function(rng, n, 0.0, 0.8);
      u_hi = u_lo;
      for (auto& v : u_hi) v += 0.1 + 0.3 * unit(rng);
      lo_sc = {&g, nullptr, BoundaryKind::None, f, {}, u_lo, 1.0, 1e-3, 50};
      hi_sc = {&g, nullptr, BoundaryKind::None, f, {}, u_hi, 1.0, 1e-3, 50};
    }
    const auto ts_lo = integrate(lo_sc);
    const auto ts_hi = integrate(hi_sc);
    const auto rep_ord =
        assert_ordering(ts_hi, ts_lo, g, dirichlet ? &p : nullptr, 1e-10);
    ordered.check(rep_ord.pass, std::max(0.0, -rep_ord.min_margin));
  }

  rep.entries.push_back(ordered.entry);
}

void monotone_chains(const PropsConfig& cfg, std::mt19937_64& rng, PropsReport& rep) {
  Tally chain("monotone iteration chains ordered");
  Tally inside("independently found states sit inside the min/max pair");
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (int it = 0; it < cfg.monotone_runs; ++it) {
    const auto g = make_random_connected_graph(rng, 6, 0.3, true);
    const auto p = make_random_partition(rng, g);
    // supercritical with a healthy margin so the long run settles on the
    // positive state well within the horizon
    const double lambda1 = dirichlet_eigensystem(g, p).values[0];
    const double a = lambda1 + 0.5 + 1.5 * unit(rng);
    const Reaction f = Reaction::logistic(a, 1.0);
    GraphFunction u0(p.interior().size(), 0.5);

    const Bracket br = make_logistic_bracket(g, &p, BoundaryKind::Dirichlet, f, u0);
    std::vector<double> zeros(p.boundary().size(), 0.0);
    const auto res =
        elliptic_monotone(g, p, BoundaryKind::Dirichlet, f, zeros, br, {1e-10, 10000, true});

    const double scale = std::max(1.0, sup_norm(br.upper));
    double worst = 0.0;
    bool ok = res.converged;
    for (size_t m = 1; m < res.lower_iterates.size(); ++m)
      for (int x = 0; x < g.size(); ++x) {
        worst = std::max(worst, res.lower_iterates[m - 1][x] - res.lower_iterates[m][x]);
        worst = std::max(worst, res.upper_iterates[m][x] - res.upper_iterates[m - 1][x]);
        worst = std::max(worst, res.lower_iterates[m][x] - res.upper_iterates[m][x]);
      }
    ok = ok && worst <= 1e-12 * scale;
    chain.check(ok, worst, "chain ordering violated");

    // a settled trajectory is a solution, so it must land between the limits
    Scenario sc{&g, &p, BoundaryKind::Dirichlet, f, {}, u0, 120.0, 1e-3, 1000};
    const auto ts = integrate(sc);
    const auto det = steady_state_detect(ts, sc, 5, 1e-7);
    if (!det) {
      inside.check(false, 0.0, "long run did not settle");
      continue;
    }
    double viol = 0.0;
    for (int x : p.interior()) {
      viol = std::max(viol, res.minimal[x] - det->state[x]);
      viol = std::max(viol, det->state[x] - res.maximal[x]);
    }
    inside.check(viol <= 1e-6 * scale, viol);
  }

  rep.entries.push_back(chain.entry);
  rep.entries.push_back(inside.entry);
}

}  // namespace

PropsReport run_property_suites(const PropsConfig& cfg) {
  PropsReport rep;
  std::mt19937_64 rng(cfg.seed);
  operator_identities(cfg, rng, rep);
  spectral_properties(cfg, rng, rep);
  kernel_properties(cfg, rng, rep);
  linear_supersolutions(cfg, rng, rep);
  ordered_pairs(cfg, rng, rep);
  monotone_chains(cfg, rng, rep);
  return rep;
}

}  // namespace graphpde
