#include "graphpde/linear_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace graphpde {

SpaceTimeFn constant_fn(double c) {
  if (c == 0.0) return {};
  return [c](int, double) { return c; };
}

namespace {

double eval(const SpaceTimeFn& f, int x, double t) { return f ? f(x, t) : 0.0; }

// Simpson over `panels` subintervals of [0, len] of w(σ)·h(σ), h linear from
// h0 to h1, w(σ) = e^{−rate·(len−σ)}. This is the stable per-step form of the
// mode integral: the exponent never exceeds zero for positive rates.
double step_mode_integral(double h0, double h1, double rate, double len, int panels) {
  if (len == 0.0) return 0.0;
  if (panels % 2 != 0) ++panels;
  const double d = len / panels;
  double acc = 0.0;
  for (int k = 0; k <= panels; ++k) {
    const double sigma = d * k;
    const double h = h0 + (h1 - h0) * (sigma / len);
    const double f = std::exp(-rate * (len - sigma)) * h;
    const double wgt = (k == 0 || k == panels) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    acc += wgt * f;
  }
  return acc * d / 3.0;
}

struct ModeMarch {
  // v_j(t_{m+1}) = e^{−r dt} v_j(t_m) + ∫ over the step; h sampled per node.
  // modes_h[m][j] is the j-th coefficient at grid node m.
  static std::vector<std::vector<double>> run(const std::vector<double>& rates,
                                              const std::vector<double>& v0,
                                              const std::vector<std::vector<double>>& modes_h,
                                              const TimeGrid& grid, int panels) {
    const int n = static_cast<int>(rates.size());
    const double dt = grid.dt();
    std::vector<std::vector<double>> v(grid.size(), std::vector<double>(n));
    v[0] = v0;
    for (int m = 0; m + 1 < grid.size(); ++m)
      for (int j = 0; j < n; ++j)
        v[m + 1][j] = std::exp(-rates[j] * dt) * v[m][j] +
                      step_mode_integral(modes_h[m][j], modes_h[m + 1][j], rates[j], dt, panels);
    return v;
  }
};

constexpr int kPanelsPerStep = 10;

}  // namespace

double forcing_mode_integral(std::span<const double> samples, double grid_dt, double rate,
                             double t, int panels_per_step) {
  if (samples.empty()) throw std::invalid_argument("forcing_mode_integral: no samples");
  for (double s : samples)
    if (!std::isfinite(s)) throw std::invalid_argument("forcing_mode_integral: non-finite sample");
  if (t < 0.0) throw std::invalid_argument("forcing_mode_integral: negative t");
  if (panels_per_step % 2 != 0) ++panels_per_step;

  double acc = 0.0;
  const int nsteps = static_cast<int>(samples.size()) - 1;
  for (int m = 0; m < nsteps; ++m) {
    const double t0 = m * grid_dt;
    if (t0 >= t) break;
    const double len = std::min(grid_dt, t - t0);
    const double h0 = samples[m];
    const double h1 = samples[m] + (samples[m + 1] - samples[m]) * (len / grid_dt);
    // direct weight e^{rate·s}; fine for the moderate rate·t this op serves
    const double d = len / panels_per_step;
    double part = 0.0;
    for (int k = 0; k <= panels_per_step; ++k) {
      const double s = t0 + d * k;
      const double h = h0 + (h1 - h0) * (d * k / len);
      const double f = std::exp(rate * s) * h;
      const double wgt = (k == 0 || k == panels_per_step) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
      part += wgt * f;
    }
    acc += part * d / 3.0;
  }
  return acc;
}

TimeSeries solve_ibvp_dirichlet(const LinearParabolicProblem& p, const TimeGrid& grid,
                                const EigenSystem* es_in) {
  if (!p.graph || !p.partition) throw std::invalid_argument("solve_ibvp_dirichlet: missing geometry");
  const WeightedGraph& g = *p.graph;
  const DomainPartition& part = *p.partition;
  EigenSystem local;
  if (!es_in) {
    local = dirichlet_eigensystem(g, part);
    es_in = &local;
  }
  const EigenSystem& es = *es_in;
  const auto& in = part.interior();
  const int n = es.count();
  if (static_cast<int>(p.initial.size()) != n)
    throw std::invalid_argument("solve_ibvp_dirichlet: initial data must cover the interior");

  // H(x,t) = G̃(x,t) + Σ_{z∈∂Ω} g(z,t) ω_zx / μ(x), projected at each node
  std::vector<std::vector<double>> modes_h(grid.size());
  std::vector<double> H(n);
  for (int m = 0; m < grid.size(); ++m) {
    const double t = grid.time(m);
    for (int i = 0; i < n; ++i) {
      double v = eval(p.forcing, in[i], t);
      if (p.boundary_data)
        for (int z : part.boundary())
          v += p.boundary_data(z, t) * g.weight(z, in[i]) / g.measure(in[i]);
      H[i] = v;
      if (!std::isfinite(v)) throw std::invalid_argument("solve_ibvp_dirichlet: non-finite forcing");
    }
    modes_h[m] = es.project(H);
  }

  std::vector<double> rates(n);
  for (int j = 0; j < n; ++j) rates[j] = es.values[j] + p.shift;
  const auto v = ModeMarch::run(rates, es.project(p.initial), modes_h, grid, kPanelsPerStep);

  TimeSeries out;
  out.times.resize(grid.size());
  out.states.assign(grid.size(), GraphFunction(g.size(), 0.0));
  for (int m = 0; m < grid.size(); ++m) {
    out.times[m] = grid.time(m);
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += v[m][j] * es.functions[j][i];
      out.states[m][in[i]] = s;
    }
    for (int z : part.boundary())
      out.states[m][z] = eval(p.boundary_data, z, out.times[m]);
  }
  return out;
}

GraphFunction solve_neumann_lift(const WeightedGraph& g, const DomainPartition& p,
                                 std::span<const double> data) {
  const int n = g.size();
  const auto& bd = p.boundary();
  double flux_total = 0.0;
  for (size_t a = 0; a < bd.size(); ++a) flux_total += g.measure(bd[a]) * data[a];
  double vol_interior = 0.0;
  for (int x : p.interior()) vol_interior += g.measure(x);
  const double I = flux_total / vol_interior;

  Matrix a(n, n);
  std::vector<double> rhs(n, 0.0);
  for (int x : p.interior()) {
    // Δ_Ω u(x) = I
    a(x, x) = -g.weighted_degree(x) / g.measure(x);
    for (int y = 0; y < n; ++y)
      if (y != x) a(x, y) = g.weight(y, x) / g.measure(x);
    rhs[x] = I;
  }
  for (size_t k = 0; k < bd.size(); ++k) {
    const int z = bd[k];
    double s = 0.0;
    for (int y : p.interior()) {
      a(z, y) = -g.weight(z, y) / g.measure(z);
      s += g.weight(z, y);
    }
    a(z, z) = s / g.measure(z);
    rhs[z] = data[k];
  }
  // One equation is redundant through the boundary-flux identity; trade the
  // last boundary row for the zero μ-mean gauge.
  const int gauge_row = bd.back();
  for (int y = 0; y < n; ++y) a(gauge_row, y) = g.measure(y);
  rhs[gauge_row] = 0.0;

  return solve_dense(std::move(a), rhs);
}

TimeSeries solve_ibvp_neumann(const LinearParabolicProblem& p, const TimeGrid& grid,
                              const EigenSystem* es_in) {
  if (!p.graph || !p.partition) throw std::invalid_argument("solve_ibvp_neumann: missing geometry");
  const WeightedGraph& g = *p.graph;
  const DomainPartition& part = *p.partition;
  EigenSystem local;
  if (!es_in) {
    local = neumann_eigensystem(g, part);
    es_in = &local;
  }
  const EigenSystem& es = *es_in;
  const auto& in = part.interior();
  const auto& bd = part.boundary();
  const int n = es.count();
  if (static_cast<int>(p.initial.size()) != n)
    throw std::invalid_argument("solve_ibvp_neumann: initial data must cover the interior");

  const bool homogeneous = !p.boundary_data;
  const double dt = grid.dt();

  // boundary lift at each grid node (identically zero when g ≡ 0)
  std::vector<GraphFunction> lift(grid.size());
  std::vector<double> lift_I(grid.size(), 0.0);
  if (!homogeneous) {
    double vol_interior = 0.0;
    for (int x : in) vol_interior += g.measure(x);
    std::vector<double> data(bd.size());
    for (int m = 0; m < grid.size(); ++m) {
      double flux = 0.0;
      for (size_t k = 0; k < bd.size(); ++k) {
        data[k] = p.boundary_data(bd[k], grid.time(m));
        flux += g.measure(bd[k]) * data[k];
      }
      lift[m] = solve_neumann_lift(g, part, data);
      lift_I[m] = flux / vol_interior;
    }
  } else {
    lift.assign(grid.size(), GraphFunction(g.size(), 0.0));
  }

  // lift time derivative: centered in the interior of the grid, one-sided ends
  auto lift_dt = [&](int m, int x) -> double {
    if (homogeneous) return 0.0;
    if (grid.size() == 1) return 0.0;
    if (m == 0) return (lift[1][x] - lift[0][x]) / dt;
    if (m == grid.size() - 1) return (lift[m][x] - lift[m - 1][x]) / dt;
    return (lift[m + 1][x] - lift[m - 1][x]) / (2.0 * dt);
  };

  // H = G̃ − û_t + Δ_Ω û − c·û, with Δ_Ω û = I by construction
  std::vector<std::vector<double>> modes_h(grid.size());
  std::vector<double> H(n);
  for (int m = 0; m < grid.size(); ++m) {
    const double t = grid.time(m);
    for (int i = 0; i < n; ++i) {
      const int x = in[i];
      double v = eval(p.forcing, x, t);
      if (!homogeneous) v += -lift_dt(m, x) + lift_I[m] - p.shift * lift[m][x];
      H[i] = v;
      if (!std::isfinite(v)) throw std::invalid_argument("solve_ibvp_neumann: non-finite forcing");
    }
    modes_h[m] = es.project(H);
  }

  std::vector<double> psi(n);
  for (int i = 0; i < n; ++i) psi[i] = p.initial[i] - lift[0][in[i]];

  std::vector<double> rates(n);
  for (int j = 0; j < n; ++j) rates[j] = es.values[j] + p.shift;
  const auto v = ModeMarch::run(rates, es.project(psi), modes_h, grid, kPanelsPerStep);

  TimeSeries out;
  out.times.resize(grid.size());
  out.states.assign(grid.size(), GraphFunction(g.size(), 0.0));
  for (int m = 0; m < grid.size(); ++m) {
    out.times[m] = grid.time(m);
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += v[m][j] * es.functions[j][i];
      out.states[m][in[i]] = s + lift[m][in[i]];
    }
    for (size_t k = 0; k < bd.size(); ++k) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += v[m][j] * es.boundary_values[j][k];
      out.states[m][bd[k]] = s + lift[m][bd[k]];
    }
  }
  return out;
}

TimeSeries solve_cauchy(const LinearParabolicProblem& p, const TimeGrid& grid,
                        const EigenSystem* es_in) {
  if (!p.graph) throw std::invalid_argument("solve_cauchy: missing graph");
  const WeightedGraph& g = *p.graph;
  EigenSystem local;
  if (!es_in) {
    local = full_eigensystem(g);
    es_in = &local;
  }
  const EigenSystem& es = *es_in;
  const int n = es.count();
  if (static_cast<int>(p.initial.size()) != n)
    throw std::invalid_argument("solve_cauchy: initial data must cover all vertices");

  std::vector<std::vector<double>> modes_h(grid.size());
  std::vector<double> H(n);
  for (int m = 0; m < grid.size(); ++m) {
    const double t = grid.time(m);
    for (int x = 0; x < n; ++x) {
      H[x] = eval(p.forcing, x, t);
      if (!std::isfinite(H[x])) throw std::invalid_argument("solve_cauchy: non-finite forcing");
    }
    modes_h[m] = es.project(H);
  }

  std::vector<double> rates(n);
  for (int j = 0; j < n; ++j) rates[j] = es.values[j] + p.shift;
  const auto v = ModeMarch::run(rates, es.project(p.initial), modes_h, grid, kPanelsPerStep);

  TimeSeries out;
  out.times.resize(grid.size());
  out.states.assign(grid.size(), GraphFunction(n, 0.0));
  for (int m = 0; m < grid.size(); ++m) {
    out.times[m] = grid.time(m);
    for (int x = 0; x < n; ++x) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += v[m][j] * es.functions[j][x];
      out.states[m][x] = s;
    }
  }
  return out;
}

GraphFunction solve_elliptic_dirichlet(const WeightedGraph& g, const DomainPartition& p,
                                       double shift, std::span<const double> rhs,
                                       std::span<const double> data) {
  const auto& in = p.interior();
  const auto& bd = p.boundary();
  const int n = static_cast<int>(in.size());
  Matrix a = assemble_neg_laplacian_dirichlet(g, p);
  for (int i = 0; i < n; ++i) a(i, i) += shift;
  std::vector<double> b(rhs.begin(), rhs.end());
  for (int i = 0; i < n; ++i)
    for (size_t k = 0; k < bd.size(); ++k)
      b[i] += g.weight(bd[k], in[i]) * data[k] / g.measure(in[i]);
  auto u_in = solve_dense(std::move(a), b);

  GraphFunction u(g.size(), 0.0);
  for (int i = 0; i < n; ++i) u[in[i]] = u_in[i];
  for (size_t k = 0; k < bd.size(); ++k) u[bd[k]] = data[k];
  return u;
}

GraphFunction solve_elliptic_neumann(const WeightedGraph& g, const DomainPartition& p,
                                     double shift, std::span<const double> rhs,
                                     std::span<const double> data, const EigenSystem* es_in) {
  if (!(shift > 0.0)) throw std::invalid_argument("solve_elliptic_neumann: shift must be positive");
  EigenSystem local;
  if (!es_in) {
    local = neumann_eigensystem(g, p);
    es_in = &local;
  }
  const EigenSystem& es = *es_in;
  const auto& in = p.interior();
  const auto& bd = p.boundary();
  const int n = es.count();

  bool zero_data = true;
  for (double d : data)
    if (d != 0.0) {
      zero_data = false;
      break;
    }
  GraphFunction lift(g.size(), 0.0);
  double I_plus = 0.0;
  if (!zero_data) {
    lift = solve_neumann_lift(g, p, data);
    double flux = 0.0, vol_interior = 0.0;
    for (size_t k = 0; k < bd.size(); ++k) flux += g.measure(bd[k]) * data[k];
    for (int x : in) vol_interior += g.measure(x);
    I_plus = flux / vol_interior;
  }

  // u = w + z with Δ_Ω z = I⁺, so (−Δ+M)w = rhs + I⁺ − M·z and ∂w/∂n = 0
  std::vector<double> F(n);
  for (int i = 0; i < n; ++i) F[i] = rhs[i] + I_plus - shift * lift[in[i]];
  const auto coeffs = es.project(F);

  GraphFunction u = lift;
  for (int j = 0; j < n; ++j) {
    const double c = coeffs[j] / (es.values[j] + shift);
    for (int i = 0; i < n; ++i) u[in[i]] += c * es.functions[j][i];
    for (size_t k = 0; k < bd.size(); ++k) u[bd[k]] += c * es.boundary_values[j][k];
  }
  return u;
}

GraphFunction solve_elliptic_cauchy(const WeightedGraph& g, double shift,
                                    std::span<const double> rhs) {
  Matrix a = assemble_neg_laplacian_full(g);
  for (int i = 0; i < g.size(); ++i) a(i, i) += shift;
  return solve_dense(std::move(a), rhs);
}

GraphFunction solve_elliptic_shifted(const WeightedGraph& g, const DomainPartition* p,
                                     BoundaryKind kind, double shift,
                                     std::span<const double> rhs,
                                     std::span<const double> data) {
  if (!(shift > 0.0)) throw std::invalid_argument("solve_elliptic_shifted: shift must be positive");
  switch (kind) {
    case BoundaryKind::Dirichlet:
      if (!p) throw std::invalid_argument("solve_elliptic_shifted: partition required");
      return solve_elliptic_dirichlet(g, *p, shift, rhs, data);
    case BoundaryKind::Neumann:
      if (!p) throw std::invalid_argument("solve_elliptic_shifted: partition required");
      return solve_elliptic_neumann(g, *p, shift, rhs, data);
    case BoundaryKind::None: return solve_elliptic_cauchy(g, shift, rhs);
  }
  throw std::invalid_argument("solve_elliptic_shifted: unknown kind");
}

DriftSolveResult solve_elliptic_drift(const WeightedGraph& g, const DriftField& b,
                                      std::span<const double> c, double shift,
                                      std::span<const double> rhs) {
  const int n = g.size();
  Matrix a = assemble_neg_laplacian_full(g);
  double bmax = 0.0, c0 = c.empty() ? 0.0 : c[0];
  for (int x = 0; x < n; ++x) {
    bmax = std::max(bmax, std::abs(b[x]));
    c0 = std::min(c0, c[x]);
    for (int y = 0; y < n; ++y) {
      const double w = g.weight(x, y);
      if (w > 0.0) {
        const double coef = b[y] * std::sqrt(w / (2.0 * g.measure(x)));
        a(x, x) += coef;   // −b·∇ contributes +b(y)√(ω/2μ) on the diagonal
        a(x, y) -= coef;
      }
    }
    a(x, x) += c[x] + shift;
  }
  DriftSolveResult out;
  out.coercivity_margin = shift + c0 - bmax * bmax / 2.0;
  out.u = solve_dense(std::move(a), rhs);
  return out;
}

double elliptic_residual_dirichlet(const WeightedGraph& g, const DomainPartition& p, double shift,
                                   std::span<const double> rhs, std::span<const double> data,
                                   std::span<const double> u) {
  double worst = 0.0;
  const auto& in = p.interior();
  for (size_t i = 0; i < in.size(); ++i)
    worst = std::max(worst, std::abs(-laplacian_domain(g, p, u, in[i]) + shift * u[in[i]] -
                                     rhs[i]));
  const auto& bd = p.boundary();
  for (size_t k = 0; k < bd.size(); ++k)
    worst = std::max(worst, std::abs(u[bd[k]] - data[k]));
  return worst;
}

double elliptic_residual_neumann(const WeightedGraph& g, const DomainPartition& p, double shift,
                                 std::span<const double> rhs, std::span<const double> data,
                                 std::span<const double> u) {
  double worst = 0.0;
  const auto& in = p.interior();
  for (size_t i = 0; i < in.size(); ++i)
    worst = std::max(worst, std::abs(-laplacian_domain(g, p, u, in[i]) + shift * u[in[i]] -
                                     rhs[i]));
  const auto& bd = p.boundary();
  for (size_t k = 0; k < bd.size(); ++k)
    worst = std::max(worst, std::abs(normal_derivative(g, p, u, bd[k]) - data[k]));
  return worst;
}

}  // namespace graphpde
