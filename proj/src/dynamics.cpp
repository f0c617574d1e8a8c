#include "graphpde/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace graphpde {

namespace {

double eval_or(const SpaceTimeFn& f, int x, double t) { return f ? f(x, t) : 0.0; }

}  // namespace

TimeSeries integrate(const Scenario& s) {
  if (!s.graph) throw std::invalid_argument("integrate: missing graph");
  if (!(s.dt > 0.0)) throw std::invalid_argument("integrate: dt must be positive");
  const WeightedGraph& g = *s.graph;
  const int n = g.size();
  const int steps = static_cast<int>(std::llround(s.horizon / s.dt));

  // (I − dt·Δ) u^{n+1} = u^n + dt f(u^n); boundary rows carry B u^{n+1} = g
  Matrix a(n, n);
  if (s.partition) {
    for (int x : s.partition->interior()) {
      a(x, x) = 1.0 + s.dt * g.weighted_degree(x) / g.measure(x);
      for (int y = 0; y < n; ++y)
        if (y != x) a(x, y) = -s.dt * g.weight(y, x) / g.measure(x);
    }
    for (int z : s.partition->boundary()) {
      if (s.kind == BoundaryKind::Dirichlet) {
        a(z, z) = 1.0;
      } else {
        double sum = 0.0;
        for (int y : s.partition->interior()) {
          a(z, y) = -g.weight(z, y) / g.measure(z);
          sum += g.weight(z, y);
        }
        a(z, z) = sum / g.measure(z);
      }
    }
  } else {
    for (int x = 0; x < n; ++x) {
      a(x, x) = 1.0 + s.dt * g.weighted_degree(x) / g.measure(x);
      for (int y = 0; y < n; ++y)
        if (y != x) a(x, y) = -s.dt * g.weight(y, x) / g.measure(x);
    }
  }
  const LuFactor lu = lu_factor(std::move(a));

  // initial state on the host vertex set
  GraphFunction u(n, 0.0);
  if (s.partition) {
    const auto& in = s.partition->interior();
    if (s.initial.size() != in.size())
      throw std::invalid_argument("integrate: initial data must cover the interior");
    for (size_t i = 0; i < in.size(); ++i) u[in[i]] = s.initial[i];
    if (s.kind == BoundaryKind::Dirichlet) {
      for (int z : s.partition->boundary()) u[z] = eval_or(s.boundary_data, z, 0.0);
    } else {
      // zero-flux start: boundary takes the interior-neighbor average shifted
      // by the prescribed flux
      for (int z : s.partition->boundary()) {
        double sw = 0.0, su = 0.0;
        for (int y : s.partition->interior()) {
          sw += g.weight(z, y);
          su += g.weight(z, y) * u[y];
        }
        u[z] = (su + g.measure(z) * eval_or(s.boundary_data, z, 0.0)) / sw;
      }
    }
  } else {
    if (static_cast<int>(s.initial.size()) != n)
      throw std::invalid_argument("integrate: initial data must cover all vertices");
    u = s.initial;
  }

  TimeSeries out;
  out.times.push_back(0.0);
  out.states.push_back(u);

  std::vector<double> rhs(n);
  for (int k = 1; k <= steps; ++k) {
    const double t_next = s.dt * k;
    if (s.partition) {
      for (int x : s.partition->interior()) rhs[x] = u[x] + s.dt * s.f(u[x]);
      for (int z : s.partition->boundary()) rhs[z] = eval_or(s.boundary_data, z, t_next);
    } else {
      for (int x = 0; x < n; ++x) rhs[x] = u[x] + s.dt * s.f(u[x]);
    }
    u = lu_solve(lu, rhs);
    for (double v : u)
      if (!std::isfinite(v)) throw BlowUpError(t_next);
    if (k % s.stride == 0 || k == steps) {
      out.times.push_back(t_next);
      out.states.push_back(u);
    }
  }
  return out;
}

std::string outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Extinction: return "Extinction";
    case Outcome::ConvergenceToState: return "ConvergenceToState";
    case Outcome::ConvergenceToConstant: return "ConvergenceToConstant";
    default: return "Undecided";
  }
}

namespace {

std::vector<double> sup_trail_of(const TimeSeries& ts) {
  std::vector<double> trail(ts.size());
  for (int m = 0; m < ts.size(); ++m) trail[m] = sup_norm(ts.states[m]);
  return trail;
}

bool tail_monotone_decreasing(const std::vector<double>& trail, int window) {
  const int n = static_cast<int>(trail.size());
  const int from = std::max(1, n - window);
  for (int i = from; i < n; ++i)
    if (trail[i] > trail[i - 1] + 1e-15) return false;
  return true;
}

// least-squares slope of log(trail) over the trailing window
double log_slope(const std::vector<double>& trail, const std::vector<double>& times,
                 int window) {
  const int n = static_cast<int>(trail.size());
  const int from = std::max(0, n - window);
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  int cnt = 0;
  for (int i = from; i < n; ++i) {
    if (trail[i] <= 0.0) continue;
    const double y = std::log(trail[i]);
    st += times[i];
    sy += y;
    stt += times[i] * times[i];
    sty += times[i] * y;
    ++cnt;
  }
  if (cnt < 2) return 0.0;
  const double denom = cnt * stt - st * st;
  return denom != 0.0 ? (cnt * sty - st * sy) / denom : 0.0;
}

}  // namespace

Classification classify_logistic_dirichlet(const WeightedGraph& g, const DomainPartition& p,
                                           double a, double b, const GraphFunction& u0,
                                           const RunControls& rc) {
  if (!(a > 0.0 && b > 0.0))
    throw std::invalid_argument("classify_logistic_dirichlet: need a, b > 0");
  Classification cl;
  const auto es = dirichlet_eigensystem(g, p);
  cl.lambda1 = es.values[0];
  cl.threshold_margin = a - cl.lambda1;

  const Reaction f = Reaction::logistic(a, b);
  Scenario sc{&g, &p, BoundaryKind::Dirichlet, f, {}, u0, rc.horizon, rc.dt, rc.stride};
  const TimeSeries ts = integrate(sc);
  cl.sup_trail = sup_trail_of(ts);
  cl.final_sup = cl.sup_trail.back();
  cl.monotone_tail = tail_monotone_decreasing(cl.sup_trail, rc.tail_window);

  if (a > cl.lambda1) {
    const Bracket br = make_logistic_bracket(g, &p, BoundaryKind::Dirichlet, f, u0);
    std::vector<double> zeros(p.boundary().size(), 0.0);
    const auto mono = elliptic_monotone(g, p, BoundaryKind::Dirichlet, f, zeros, br,
                                        {1e-10, 10000, false});
    cl.steady_state = mono.minimal;
    cl.steady_residual = mono.residual;
    double dist = 0.0;
    for (int x = 0; x < g.size(); ++x)
      dist = std::max(dist, std::abs(ts.states.back()[x] - mono.minimal[x]));
    if (mono.converged && dist <= rc.match_tol) {
      cl.outcome = Outcome::ConvergenceToState;
    } else {
      cl.outcome = Outcome::Undecided;
      cl.notes = "trajectory-steady distance " + std::to_string(dist);
    }
    return cl;
  }

  // a ≤ λ₁: extinction, algebraic decay at the threshold itself
  if (cl.final_sup <= rc.extinction_threshold && cl.monotone_tail) {
    cl.outcome = Outcome::Extinction;
  } else if (log_slope(cl.sup_trail, ts.times, rc.tail_window) < 0.0 && cl.monotone_tail) {
    cl.outcome = Outcome::Extinction;
    cl.notes = "slow decay";
  } else {
    cl.outcome = Outcome::Undecided;
  }
  return cl;
}

Classification classify_logistic_neumann(const WeightedGraph& g, const DomainPartition& p,
                                         double a, double b, const GraphFunction& u0,
                                         const RunControls& rc) {
  if (!(a > 0.0 && b > 0.0))
    throw std::invalid_argument("classify_logistic_neumann: need a, b > 0");
  Classification cl;
  const double target = a / b;

  const Reaction f = Reaction::logistic(a, b);
  Scenario sc{&g, &p, BoundaryKind::Neumann, f, {}, u0, rc.horizon, rc.dt, rc.stride};
  const TimeSeries ts = integrate(sc);
  cl.sup_trail = sup_trail_of(ts);
  cl.final_sup = cl.sup_trail.back();

  // scalar logistic envelope from the initial extremes
  double m = u0[0], M = u0[0];
  for (double v : u0) {
    m = std::min(m, v);
    M = std::max(M, v);
  }
  auto fz = [&](double z) { return f(z); };
  const double dt_ode = std::min(rc.dt, 1e-3);
  const auto zlo = scalar_ode_bound(fz, m, rc.horizon, dt_ode);
  const auto zhi = scalar_ode_bound(fz, M, rc.horizon, dt_ode);
  double sup_all = 0.0;
  for (const auto& st : ts.states) sup_all = std::max(sup_all, sup_norm(st));
  const double sandwich_tol = default_parabolic_tolerance(rc.dt, sup_all);
  cl.sandwich_ok = true;
  for (int k = 0; k < ts.size(); ++k) {
    const int idx = std::min(static_cast<int>(std::llround(ts.times[k] / dt_ode)),
                             static_cast<int>(zlo.size()) - 1);
    for (int x = 0; x < g.size(); ++x) {
      if (ts.states[k][x] < zlo[idx] - sandwich_tol || ts.states[k][x] > zhi[idx] + sandwich_tol) {
        cl.sandwich_ok = false;
        break;
      }
    }
    if (!cl.sandwich_ok) break;
  }

  double dist = 0.0;
  for (int x = 0; x < g.size(); ++x)
    dist = std::max(dist, std::abs(ts.states.back()[x] - target));
  if (dist <= rc.convergence_tol) {
    cl.outcome = Outcome::ConvergenceToConstant;
    cl.constant_value = target;
  } else {
    cl.outcome = Outcome::Undecided;
    cl.notes = "distance to a/b " + std::to_string(dist);
  }
  return cl;
}

Classification classify_kpp_cauchy(const WeightedGraph& g, const Reaction& f,
                                   const GraphFunction& u0, const RunControls& rc) {
  Classification cl;
  std::string notes;
  cl.hypothesis_ok = f.check_kpp_hypotheses(&notes);
  if (!cl.hypothesis_ok) cl.notes = "hypothesis check failed: " + notes;

  Scenario sc{&g, nullptr, BoundaryKind::None, f, {}, u0, rc.horizon, rc.dt, rc.stride};
  const TimeSeries ts = integrate(sc);
  cl.sup_trail = sup_trail_of(ts);
  cl.final_sup = cl.sup_trail.back();

  double dist = 0.0;
  for (int x = 0; x < g.size(); ++x)
    dist = std::max(dist, std::abs(ts.states.back()[x] - 1.0));
  if (dist <= rc.convergence_tol) {
    cl.outcome = Outcome::ConvergenceToConstant;
    cl.constant_value = 1.0;
  } else {
    cl.outcome = Outcome::Undecided;
    if (cl.notes.empty()) cl.notes = "distance to 1 " + std::to_string(dist);
  }
  return cl;
}

namespace {

// sup of q(u) = f(u)/(u−ρ) over (α,1): sampled, then golden-section refined.
double sup_quotient(const Reaction& f, double rho, double alpha) {
  if (f.kind() == Reaction::Kind::AllenCahn && rho == 0.0) {
    // f(u)/u = (u−α)(1−u), maximal at the midpoint of (α,1)
    const double h = (1.0 - alpha) / 2.0;
    return h * h;
  }
  auto q = [&](double u) { return f(u) / (u - rho); };
  const int samples = 401;
  double best = -1e300;
  int arg = 1;
  for (int i = 1; i < samples; ++i) {
    const double u = alpha + (1.0 - alpha) * i / samples;
    const double v = q(u);
    if (v > best) {
      best = v;
      arg = i;
    }
  }
  double lo = alpha + (1.0 - alpha) * std::max(1, arg - 1) / samples;
  double hi = alpha + (1.0 - alpha) * std::min(samples - 1, arg + 1) / samples;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
  for (int it = 0; it < 200 && (hi - lo) > 1e-13; ++it) {
    if (q(c) > q(d)) {
      hi = d;
      d = c;
      c = hi - gr * (hi - lo);
    } else {
      lo = c;
      c = d;
      d = lo + gr * (hi - lo);
    }
  }
  return std::max(best, q(0.5 * (lo + hi)));
}

}  // namespace

AllenCahnCriterion allen_cahn_criterion(const WeightedGraph& g, const Reaction& f,
                                        const GraphFunction& u0, int rho_points) {
  const double alpha = f.alpha();
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("allen_cahn_criterion: reaction has no bistable root");
  AllenCahnCriterion out;
  out.s0 = sup_quotient(f, 0.0, alpha);
  const double root_e = std::exp(0.5);

  int best_rho = -1;
  double best_slack = -1e300;
  for (int k = 0; k < rho_points; ++k) {
    const double rho = alpha * k / rho_points;
    out.rho_scan.push_back(rho);
    out.s_values.push_back(sup_quotient(f, rho, alpha));
    double min_slack = 1e300;
    for (int x = 0; x < g.size(); ++x) {
      const double lhs = root_e * std::max(u0[x] - rho, 0.0) * g.measure(x);
      min_slack = std::min(min_slack, (alpha - rho) - lhs);
    }
    const bool adm = min_slack > 0.0;
    out.admissible.push_back(adm);
    if (adm) out.any_admissible = true;
    if (min_slack > best_slack) {
      best_slack = min_slack;
      best_rho = k;
    }
  }
  if (best_rho >= 0) {
    const double rho = out.rho_scan[best_rho];
    out.vertex_slack.resize(g.size());
    for (int x = 0; x < g.size(); ++x)
      out.vertex_slack[x] =
          (alpha - rho) - root_e * std::max(u0[x] - rho, 0.0) * g.measure(x);
  }
  out.propagation = true;
  for (int x = 0; x < g.size(); ++x)
    if (!(u0[x] > alpha)) out.propagation = false;
  return out;
}

Classification classify_allen_cahn(const WeightedGraph& g, const Reaction& f,
                                   const GraphFunction& u0, const RunControls& rc) {
  Classification cl;
  const auto crit = allen_cahn_criterion(g, f, u0);
  for (size_t k = 0; k < crit.rho_scan.size(); ++k)
    if (crit.admissible[k]) cl.admissible_rho.push_back(crit.rho_scan[k]);

  Scenario sc{&g, nullptr, BoundaryKind::None, f, {}, u0, rc.horizon, rc.dt, rc.stride};
  const TimeSeries ts = integrate(sc);
  cl.sup_trail = sup_trail_of(ts);
  cl.final_sup = cl.sup_trail.back();
  cl.monotone_tail = tail_monotone_decreasing(cl.sup_trail, rc.tail_window);

  if (crit.any_admissible) {
    if (cl.final_sup <= rc.extinction_threshold) {
      cl.outcome = Outcome::Extinction;
    } else {
      cl.outcome = Outcome::Undecided;
      cl.notes = "smallness criterion held but the run did not decay below threshold";
    }
    return cl;
  }
  if (crit.propagation) {
    double dist = 0.0;
    for (int x = 0; x < g.size(); ++x)
      dist = std::max(dist, std::abs(ts.states.back()[x] - 1.0));
    if (dist <= rc.convergence_tol) {
      cl.outcome = Outcome::ConvergenceToConstant;
      cl.constant_value = 1.0;
    } else {
      cl.outcome = Outcome::Undecided;
      cl.notes = "initial data above the unstable root but distance to 1 is " +
                 std::to_string(dist);
    }
    return cl;
  }
  cl.outcome = Outcome::Undecided;
  cl.notes = "neither the smallness nor the propagation branch applies";
  return cl;
}

std::optional<SteadyDetect> steady_state_detect(const TimeSeries& series, const Scenario& s,
                                                int window, double tol) {
  if (series.size() < window) return std::nullopt;
  const WeightedGraph& g = *s.graph;
  for (int i = window - 1; i < series.size(); ++i) {
    double variation = 0.0;
    for (int k = i - window + 1; k <= i; ++k)
      for (int x = 0; x < g.size(); ++x)
        variation = std::max(variation, std::abs(series.states[k][x] - series.states[i][x]));
    if (variation > tol) continue;

    const auto& u = series.states[i];
    double resid = 0.0;
    if (s.partition) {
      for (int x : s.partition->interior())
        resid = std::max(resid, std::abs(-laplacian_domain(g, *s.partition, u, x) - s.f(u[x])));
    } else {
      for (int x = 0; x < g.size(); ++x)
        resid = std::max(resid, std::abs(-laplacian_full(g, u, x) - s.f(u[x])));
    }
    if (resid <= 10.0 * tol) return SteadyDetect{u, series.times[i]};
  }
  return std::nullopt;
}

std::vector<double> scalar_ode_bound(const std::function<double(double)>& f, double z0,
                                     double horizon, double dt) {
  const int steps = static_cast<int>(std::llround(horizon / dt));
  std::vector<double> z(steps + 1);
  z[0] = z0;
  for (int k = 0; k < steps; ++k) {
    const double y = z[k];
    const double k1 = f(y);
    const double k2 = f(y + 0.5 * dt * k1);
    const double k3 = f(y + 0.5 * dt * k2);
    const double k4 = f(y + dt * k3);
    z[k + 1] = y + dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
    if (!std::isfinite(z[k + 1]) || std::abs(z[k + 1]) > 1e12)
      throw BlowUpError(dt * (k + 1));
  }
  return z;
}

}  // namespace graphpde
