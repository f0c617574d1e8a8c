#pragma once

// Test-side oracles, kept independent of the spectral solution path they
// check: explicit Euler marching on the same continuous problems.

#include <cmath>
#include <vector>

#include "graphpde/linear_solvers.hpp"

namespace oracles {

// u_t − Δ_Ω u + c u = forcing in Ω, u = g on ∂Ω; state at t_end on the host
// vertex set.
inline graphpde::GraphFunction euler_ibvp_dirichlet(
    const graphpde::WeightedGraph& g, const graphpde::DomainPartition& p, double c,
    const graphpde::SpaceTimeFn& forcing, const graphpde::SpaceTimeFn& gdata,
    const graphpde::GraphFunction& u0_interior, double t_end, double dt) {
  const int n = g.size();
  graphpde::GraphFunction u(n, 0.0);
  for (size_t i = 0; i < p.interior().size(); ++i) u[p.interior()[i]] = u0_interior[i];
  for (int z : p.boundary()) u[z] = gdata ? gdata(z, 0.0) : 0.0;

  const int steps = static_cast<int>(std::llround(t_end / dt));
  graphpde::GraphFunction next(n, 0.0);
  for (int k = 0; k < steps; ++k) {
    const double t = dt * k;
    for (int x : p.interior()) {
      double lap = 0.0;
      for (int y = 0; y < n; ++y) lap += (u[y] - u[x]) * g.weight(y, x);
      lap /= g.measure(x);
      next[x] = u[x] + dt * (lap - c * u[x] + (forcing ? forcing(x, t) : 0.0));
    }
    for (int z : p.boundary()) next[z] = gdata ? gdata(z, dt * (k + 1)) : 0.0;
    u = next;
  }
  return u;
}

// u_t − Δ_Ω u + c u = forcing in Ω, ∂u/∂n = g on ∂Ω. Boundary values follow
// the flux equation after each interior update.
inline graphpde::GraphFunction euler_ibvp_neumann(
    const graphpde::WeightedGraph& g, const graphpde::DomainPartition& p, double c,
    const graphpde::SpaceTimeFn& forcing, const graphpde::SpaceTimeFn& gdata,
    const graphpde::GraphFunction& u0_interior, double t_end, double dt) {
  const int n = g.size();
  auto boundary_fill = [&](graphpde::GraphFunction& u, double t) {
    for (int z : p.boundary()) {
      double sw = 0.0, su = 0.0;
      for (int y : p.interior()) {
        sw += g.weight(z, y);
        su += g.weight(z, y) * u[y];
      }
      u[z] = (su + g.measure(z) * (gdata ? gdata(z, t) : 0.0)) / sw;
    }
  };
  graphpde::GraphFunction u(n, 0.0);
  for (size_t i = 0; i < p.interior().size(); ++i) u[p.interior()[i]] = u0_interior[i];
  boundary_fill(u, 0.0);

  const int steps = static_cast<int>(std::llround(t_end / dt));
  graphpde::GraphFunction next = u;
  for (int k = 0; k < steps; ++k) {
    const double t = dt * k;
    for (int x : p.interior()) {
      double lap = 0.0;
      for (int y = 0; y < n; ++y) lap += (u[y] - u[x]) * g.weight(y, x);
      lap /= g.measure(x);
      next[x] = u[x] + dt * (lap - c * u[x] + (forcing ? forcing(x, t) : 0.0));
    }
    boundary_fill(next, dt * (k + 1));
    u = next;
  }
  return u;
}

// u_t − Δ_V u + M u = forcing on V
inline graphpde::GraphFunction euler_cauchy(const graphpde::WeightedGraph& g, double shift,
                                            const graphpde::SpaceTimeFn& forcing,
                                            const graphpde::GraphFunction& u0, double t_end,
                                            double dt) {
  const int n = g.size();
  graphpde::GraphFunction u = u0, next(n, 0.0);
  const int steps = static_cast<int>(std::llround(t_end / dt));
  for (int k = 0; k < steps; ++k) {
    const double t = dt * k;
    for (int x = 0; x < n; ++x) {
      double lap = 0.0;
      for (int y = 0; y < n; ++y) lap += (u[y] - u[x]) * g.weight(y, x);
      lap /= g.measure(x);
      next[x] = u[x] + dt * (lap - shift * u[x] + (forcing ? forcing(x, t) : 0.0));
    }
    u = next;
  }
  return u;
}

inline double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s = std::max(s, std::abs(a[i] - b[i]));
  return s;
}

}  // namespace oracles
