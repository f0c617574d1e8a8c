#include "graphpde/monotone.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace graphpde {

Reaction Reaction::zero() { return Reaction{}; }

Reaction Reaction::logistic(double a, double b) {
  Reaction r;
  r.kind_ = Kind::Logistic;
  r.a_ = a;
  r.b_ = b;
  r.coeffs_ = {0.0, a, -b};
  return r;
}

Reaction Reaction::fisher_kpp() {
  Reaction r = logistic(1.0, 1.0);
  r.kind_ = Kind::Kpp;
  return r;
}

Reaction Reaction::allen_cahn(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("Reaction::allen_cahn: need 0 < alpha < 1");
  Reaction r;
  r.kind_ = Kind::AllenCahn;
  r.alpha_ = alpha;
  // u(u−α)(1−u) = −α·u + (1+α)·u² − u³
  r.coeffs_ = {0.0, -alpha, 1.0 + alpha, -1.0};
  return r;
}

Reaction Reaction::polynomial(std::vector<double> coeffs) {
  Reaction r;
  r.kind_ = Kind::Polynomial;
  if (coeffs.empty()) coeffs.push_back(0.0);
  r.coeffs_ = std::move(coeffs);
  return r;
}

double Reaction::operator()(double u) const {
  double s = 0.0;
  for (size_t k = coeffs_.size(); k-- > 0;) s = s * u + coeffs_[k];
  return s;
}

double Reaction::deriv(double u) const {
  double s = 0.0;
  for (size_t k = coeffs_.size(); k-- > 1;) s = s * u + coeffs_[k] * static_cast<double>(k);
  return s;
}

bool Reaction::is_zero() const {
  for (double c : coeffs_)
    if (c != 0.0) return false;
  return true;
}

bool Reaction::check_kpp_hypotheses(std::string* notes) const {
  const Reaction& f = *this;
  std::string msg;
  bool ok = true;
  if (std::abs(f(0.0)) > 1e-12) {
    ok = false;
    msg += "f(0) != 0; ";
  }
  if (std::abs(f(1.0)) > 1e-12) {
    ok = false;
    msg += "f(1) != 0; ";
  }
  if (!(f.deriv(0.0) > 0.0)) {
    ok = false;
    msg += "f'(0) <= 0; ";
  }
  bool positive = true;
  for (int i = 1; i < 200 && positive; ++i) positive = f(i / 200.0) > 0.0;
  if (!positive) {
    ok = false;
    msg += "f not positive on (0,1); ";
  }
  // f(u)/u nonincreasing, sampled; the u→0 limit is f'(0)
  double prev = f.deriv(0.0);
  for (int i = 1; i <= 200; ++i) {
    const double u = i / 200.0;
    const double q = f(u) / u;
    if (q > prev + 1e-12) {
      ok = false;
      msg += "f(u)/u increases near u=" + std::to_string(u) + "; ";
      break;
    }
    prev = q;
  }
  if (notes) *notes = msg;
  return ok;
}

double lipschitz_constant(const Reaction& f, double lo, double hi) {
  if (!(lo <= hi)) throw std::invalid_argument("lipschitz_constant: empty range");
  if (f.is_zero()) return 0.0;
  double worst = std::max(std::abs(f.deriv(lo)), std::abs(f.deriv(hi)));
  const auto& c = f.coeffs();
  const int deg = static_cast<int>(c.size()) - 1;
  if (deg <= 3) {
    // |f'| peaks at an endpoint or a root of f'' inside the interval
    if (deg == 2) {
      // f'' constant: endpoints already cover it
    } else if (deg == 3) {
      const double denom = 6.0 * c[3];
      if (denom != 0.0) {
        const double root = -2.0 * c[2] / denom;
        if (root > lo && root < hi) worst = std::max(worst, std::abs(f.deriv(root)));
      }
    }
  } else {
    for (int i = 0; i <= 1000; ++i) {
      const double u = lo + (hi - lo) * i / 1000.0;
      const double d = f.deriv(u);
      if (!std::isfinite(d))
        throw std::invalid_argument("lipschitz_constant: non-finite derivative sample");
      worst = std::max(worst, std::abs(d));
    }
  }
  return 1.1 * worst;
}

namespace {

double sup_diff(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s = std::max(s, std::abs(a[i] - b[i]));
  return s;
}

void check_bracket(const Bracket& br) {
  if (br.lower.size() != br.upper.size())
    throw std::invalid_argument("bracket: size mismatch");
  for (size_t i = 0; i < br.lower.size(); ++i)
    if (br.lower[i] > br.upper[i] + 1e-14)
      throw std::invalid_argument("bracket inverted: lower > upper");
}

double range_min(std::span<const double> v) {
  double m = v[0];
  for (double x : v) m = std::min(m, x);
  return m;
}

double range_max(std::span<const double> v) {
  double m = v[0];
  for (double x : v) m = std::max(m, x);
  return m;
}

}  // namespace

MonotoneResult elliptic_monotone(const WeightedGraph& g, const DomainPartition& p,
                                 BoundaryKind kind, const Reaction& f,
                                 std::span<const double> boundary_data, const Bracket& bracket,
                                 const MonotoneOptions& opt) {
  check_bracket(bracket);
  const auto& in = p.interior();
  const int n = static_cast<int>(in.size());

  const double clo = range_min(bracket.lower);
  const double chi = range_max(bracket.upper);
  const double mlip = lipschitz_constant(f, clo, chi);
  // −Δ_Ω is already positive definite, so the Dirichlet problem tolerates a
  // zero shift; the Neumann quotient needs a positive one (K₁ = 0).
  double M = mlip;
  if (!(M > 0.0) && kind == BoundaryKind::Neumann) M = 1.0;

  MonotoneResult res;
  res.shift = M;
  {
    auto rhs_fn = [&](int x) { return f(bracket.lower[x]); };
    auto cert = certify_elliptic(g, &p, bracket.lower, nullptr, {}, rhs_fn, kind, boundary_data,
                                 1e-9 * (1.0 + std::abs(chi)));
    res.lower_certified = cert.is_subsolution;
  }
  {
    auto rhs_fn = [&](int x) { return f(bracket.upper[x]); };
    auto cert = certify_elliptic(g, &p, bracket.upper, nullptr, {}, rhs_fn, kind, boundary_data,
                                 1e-9 * (1.0 + std::abs(chi)));
    res.upper_certified = cert.is_supersolution;
  }

  // factor/decompose once, reuse for every iterate
  const EigenSystem neumann_es =
      (kind == BoundaryKind::Neumann) ? neumann_eigensystem(g, p) : EigenSystem{};
  LuFactor dirichlet_lu;
  if (kind == BoundaryKind::Dirichlet) {
    Matrix a = assemble_neg_laplacian_dirichlet(g, p);
    for (int i = 0; i < n; ++i) a(i, i) += M;
    dirichlet_lu = lu_factor(std::move(a));
  }

  auto apply_T = [&](const GraphFunction& u) -> GraphFunction {
    std::vector<double> rhs(n);
    for (int i = 0; i < n; ++i) rhs[i] = M * u[in[i]] + f(u[in[i]]);
    if (kind == BoundaryKind::Dirichlet) {
      std::vector<double> b = rhs;
      const auto& bd = p.boundary();
      for (int i = 0; i < n; ++i)
        for (size_t k = 0; k < bd.size(); ++k)
          b[i] += g.weight(bd[k], in[i]) * boundary_data[k] / g.measure(in[i]);
      auto u_in = lu_solve(dirichlet_lu, b);
      GraphFunction out(g.size(), 0.0);
      for (int i = 0; i < n; ++i) out[in[i]] = u_in[i];
      for (size_t k = 0; k < bd.size(); ++k) out[p.boundary()[k]] = boundary_data[k];
      return out;
    }
    return solve_elliptic_neumann(g, p, M, rhs, boundary_data, &neumann_es);
  };

  // an increment of δ leaves an equation residual up to (M + Lip)·δ, so the
  // stop threshold is tightened to keep the promised residual ≤ 10·tol
  const double eff_tol = std::min(opt.tol, 10.0 * opt.tol / std::max(1.0, M + mlip));

  GraphFunction lo = bracket.lower, hi = bracket.upper;
  if (opt.record_iterates) {
    res.lower_iterates.push_back(lo);
    res.upper_iterates.push_back(hi);
  }
  double inc = 0.0;
  int it = 0;
  for (; it < opt.max_iters; ++it) {
    GraphFunction lo2 = apply_T(lo);
    GraphFunction hi2 = apply_T(hi);
    inc = std::max(sup_diff(lo2, lo), sup_diff(hi2, hi));
    lo = std::move(lo2);
    hi = std::move(hi2);
    if (opt.record_iterates) {
      res.lower_iterates.push_back(lo);
      res.upper_iterates.push_back(hi);
    }
    if (inc <= eff_tol) {
      ++it;
      res.converged = true;
      break;
    }
  }
  res.iterations = it;
  res.final_increment = inc;
  res.minimal = lo;
  res.maximal = hi;
  res.gap = sup_diff(hi, lo);
  res.unique = res.gap <= 100.0 * opt.tol;

  auto equation_residual = [&](const GraphFunction& u) {
    double worst = 0.0;
    for (int x : in)
      worst = std::max(worst, std::abs(-laplacian_domain(g, p, u, x) - f(u[x])));
    return worst;
  };
  res.residual = std::max(equation_residual(lo), equation_residual(hi));
  return res;
}

MonotoneResult cauchy_elliptic_monotone(const WeightedGraph& g, const Reaction& f,
                                        const DriftField& b, std::span<const double> c,
                                        const Bracket& bracket, const MonotoneOptions& opt) {
  check_bracket(bracket);
  const int n = g.size();
  for (double bv : b)
    if (bv < 0.0) throw std::invalid_argument("cauchy_elliptic_monotone: drift must be >= 0");

  const double clo = range_min(bracket.lower);
  const double chi = range_max(bracket.upper);
  const double mlip = lipschitz_constant(f, clo, chi);
  double bmax = 0.0;
  for (double bv : b) bmax = std::max(bmax, std::abs(bv));
  double c0 = c[0];
  for (double cv : c) c0 = std::min(c0, cv);
  const double M = std::max(mlip, 1.0 + bmax * bmax / 2.0 - c0) + 1.0;

  // assemble (−Δ − b·∇ + c + M) once
  Matrix a = assemble_neg_laplacian_full(g);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      const double w = g.weight(x, y);
      if (w > 0.0) {
        const double coef = b[y] * std::sqrt(w / (2.0 * g.measure(x)));
        a(x, x) += coef;
        a(x, y) -= coef;
      }
    }
    a(x, x) += c[x] + M;
  }
  const LuFactor lu = lu_factor(std::move(a));

  MonotoneResult res;
  res.shift = M;
  res.coercivity_margin = M + c0 - bmax * bmax / 2.0;

  auto cfun = [&](int x) { return c[x]; };
  {
    auto rhs_fn = [&](int x) { return f(bracket.lower[x]); };
    auto cert = certify_elliptic(g, nullptr, bracket.lower, &b, cfun, rhs_fn, BoundaryKind::None,
                                 {}, 1e-9 * (1.0 + std::abs(chi)));
    res.lower_certified = cert.is_subsolution;
  }
  {
    auto rhs_fn = [&](int x) { return f(bracket.upper[x]); };
    auto cert = certify_elliptic(g, nullptr, bracket.upper, &b, cfun, rhs_fn, BoundaryKind::None,
                                 {}, 1e-9 * (1.0 + std::abs(chi)));
    res.upper_certified = cert.is_supersolution;
  }

  auto apply_T = [&](const GraphFunction& u) {
    std::vector<double> rhs(n);
    for (int x = 0; x < n; ++x) rhs[x] = M * u[x] + f(u[x]);
    return lu_solve(lu, rhs);
  };

  const double eff_tol = std::min(opt.tol, 10.0 * opt.tol / std::max(1.0, M + mlip));

  GraphFunction lo = bracket.lower, hi = bracket.upper;
  if (opt.record_iterates) {
    res.lower_iterates.push_back(lo);
    res.upper_iterates.push_back(hi);
  }
  double inc = 0.0;
  int it = 0;
  for (; it < opt.max_iters; ++it) {
    GraphFunction lo2 = apply_T(lo);
    GraphFunction hi2 = apply_T(hi);
    inc = std::max(sup_diff(lo2, lo), sup_diff(hi2, hi));
    lo = std::move(lo2);
    hi = std::move(hi2);
    if (opt.record_iterates) {
      res.lower_iterates.push_back(lo);
      res.upper_iterates.push_back(hi);
    }
    if (inc <= eff_tol) {
      ++it;
      res.converged = true;
      break;
    }
  }
  res.iterations = it;
  res.final_increment = inc;
  res.minimal = lo;
  res.maximal = hi;
  res.gap = sup_diff(hi, lo);
  res.unique = res.gap <= 100.0 * opt.tol;

  auto equation_residual = [&](const GraphFunction& u) {
    double worst = 0.0;
    for (int x = 0; x < n; ++x)
      worst = std::max(worst, std::abs(-laplacian_full(g, u, x) - drift_dot_gradient(g, b, u, x) +
                                       c[x] * u[x] - f(u[x])));
    return worst;
  };
  res.residual = std::max(equation_residual(lo), equation_residual(hi));
  return res;
}

Bracket make_logistic_bracket(const WeightedGraph& g, const DomainPartition* p,
                              BoundaryKind kind, const Reaction& f,
                              std::span<const double> u0) {
  const int n = g.size();
  Bracket br;
  br.lower.assign(n, 0.0);
  br.upper.assign(n, 0.0);

  // upper: the equilibrium cap a/b (or 1 for a general KPP) vs the data
  double cap = 1.0;
  if (f.kind() == Reaction::Kind::Logistic || f.kind() == Reaction::Kind::Kpp)
    cap = f.growth() / f.saturation();
  double u0max = 0.0;
  for (double v : u0) u0max = std::max(u0max, v);
  const double top = std::max(cap, u0max);
  br.upper.assign(n, top);

  // lower: δ · (principal eigenfunction), halving δ until the subsolution
  // certificate passes; falls back to zero when nothing does
  GraphFunction principal(n, 0.0);
  if (p) {
    const auto es = dirichlet_eigensystem(g, *p);
    for (size_t i = 0; i < p->interior().size(); ++i)
      principal[p->interior()[i]] = es.functions[0][i];
  } else {
    const auto es = full_eigensystem(g);
    principal = es.functions[0];
  }
  for (int k = 0; k <= 60; ++k) {
    const double delta = std::ldexp(1.0, -k);
    GraphFunction cand(n);
    for (int x = 0; x < n; ++x) cand[x] = delta * principal[x];
    bool inside = true;
    for (int x = 0; x < n; ++x)
      if (cand[x] > br.upper[x]) inside = false;
    if (!inside) continue;
    auto rhs_fn = [&](int x) { return f(cand[x]); };
    auto cert = certify_elliptic(g, p, cand, nullptr, {}, rhs_fn,
                                 p ? kind : BoundaryKind::None, {}, 1e-12);
    if (cert.is_subsolution) {
      br.lower = cand;
      break;
    }
  }
  return br;
}

TimeSeries constant_series(const WeightedGraph& g, const TimeGrid& grid, double value) {
  TimeSeries s;
  s.times.resize(grid.size());
  s.states.assign(grid.size(), GraphFunction(g.size(), value));
  for (int m = 0; m < grid.size(); ++m) s.times[m] = grid.time(m);
  return s;
}

ParabolicMonotoneResult parabolic_monotone(const SemilinearParabolicProblem& prob,
                                           const TimeSeries& lower0, const TimeSeries& upper0,
                                           const TimeGrid& grid, const MonotoneOptions& opt) {
  if (!prob.graph) throw std::invalid_argument("parabolic_monotone: missing graph");
  const WeightedGraph& g = *prob.graph;
  if (lower0.size() != grid.size() || upper0.size() != grid.size())
    throw std::invalid_argument("parabolic_monotone: bracket grids do not match");
  for (int m = 0; m < grid.size(); ++m)
    for (int x = 0; x < g.size(); ++x)
      if (lower0.states[m][x] > upper0.states[m][x] + 1e-14)
        throw std::invalid_argument("parabolic_monotone: bracket not ordered");

  double lo = lower0.states[0][0], hi = upper0.states[0][0];
  for (int m = 0; m < grid.size(); ++m)
    for (int x = 0; x < g.size(); ++x) {
      lo = std::min({lo, lower0.states[m][x], upper0.states[m][x]});
      hi = std::max({hi, lower0.states[m][x], upper0.states[m][x]});
    }
  const double M = lipschitz_constant(prob.f, lo, hi);

  const EigenSystem es = prob.partition
                             ? (prob.kind == BoundaryKind::Dirichlet
                                    ? dirichlet_eigensystem(g, *prob.partition)
                                    : neumann_eigensystem(g, *prob.partition))
                             : full_eigensystem(g);

  auto step = [&](const TimeSeries& prev) -> TimeSeries {
    LinearParabolicProblem lp;
    lp.graph = prob.graph;
    lp.partition = prob.partition;
    lp.kind = prob.kind;
    lp.shift = M;
    lp.boundary_data = prob.boundary_data;
    lp.initial = prob.initial;
    lp.horizon = grid.horizon;
    const double dt = grid.dt();
    lp.forcing = [&prev, &prob, M, dt](int x, double t) {
      // previous iterate sampled on the grid, linear in between
      const double pos = t / dt;
      int m = static_cast<int>(std::floor(pos + 1e-9));
      m = std::clamp(m, 0, static_cast<int>(prev.states.size()) - 1);
      double v;
      if (m + 1 < static_cast<int>(prev.states.size())) {
        const double w = std::clamp(pos - m, 0.0, 1.0);
        v = (1.0 - w) * prev.states[m][x] + w * prev.states[m + 1][x];
      } else {
        v = prev.states[m][x];
      }
      return prob.f(v) + M * v;
    };
    if (!prob.partition) return solve_cauchy(lp, grid, &es);
    if (prob.kind == BoundaryKind::Dirichlet) return solve_ibvp_dirichlet(lp, grid, &es);
    return solve_ibvp_neumann(lp, grid, &es);
  };

  auto series_diff = [&](const TimeSeries& a, const TimeSeries& b) {
    double s = 0.0;
    for (int m = 0; m < a.size(); ++m) s = std::max(s, sup_diff(a.states[m], b.states[m]));
    return s;
  };

  ParabolicMonotoneResult res;
  res.shift = M;
  TimeSeries lo_s = lower0, hi_s = upper0;
  double inc = 0.0;
  int it = 0;
  for (; it < opt.max_iters; ++it) {
    TimeSeries lo2 = step(lo_s);
    TimeSeries hi2 = step(hi_s);
    inc = std::max(series_diff(lo2, lo_s), series_diff(hi2, hi_s));
    lo_s = std::move(lo2);
    hi_s = std::move(hi2);
    if (inc <= opt.tol) {
      ++it;
      res.converged = true;
      break;
    }
  }
  res.iterations = it;
  res.final_increment = inc;
  res.gap = series_diff(hi_s, lo_s);
  res.lower_fixed = std::move(lo_s);
  res.upper_fixed = std::move(hi_s);
  return res;
}

}  // namespace graphpde
