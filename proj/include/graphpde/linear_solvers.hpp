#pragma once

#include <functional>
#include <span>
#include <vector>

#include "graphpde/graph.hpp"
#include "graphpde/spectral.hpp"

namespace graphpde {

enum class BoundaryKind { Dirichlet, Neumann, None };

// Evaluated at (host vertex index, time). An empty function means zero.
using SpaceTimeFn = std::function<double(int, double)>;

SpaceTimeFn constant_fn(double c);

struct TimeGrid {
  double horizon = 1.0;
  int steps = 100;
  double dt() const { return horizon / steps; }
  double time(int i) const { return horizon * i / steps; }
  int size() const { return steps + 1; }
};

// u_t − Δu + shift·u = forcing, with boundary data g (IBVP) or nothing
// (Cauchy), initial data u0 on the interior (IBVP) or on V (Cauchy).
struct LinearParabolicProblem {
  const WeightedGraph* graph = nullptr;
  const DomainPartition* partition = nullptr;  // null for Cauchy
  BoundaryKind kind = BoundaryKind::None;
  double shift = 0.0;            // c (IBVP) or M (Cauchy)
  SpaceTimeFn forcing;           // G̃ or h on interior vertices / V
  SpaceTimeFn boundary_data;     // g on boundary vertices; empty means zero
  GraphFunction initial;         // length |Ω| (IBVP, interior order) or |V|
  double horizon = 1.0;
};

// Sampled trajectory; states carry the full host vertex set, boundary values
// filled per the problem kind.
struct TimeSeries {
  std::vector<double> times;
  std::vector<GraphFunction> states;
  int size() const { return static_cast<int>(times.size()); }
  double dt() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
};

// Closed-form spectral solutions, forcing treated as piecewise-linear between
// grid samples with a 10-panel Simpson rule per step for the mode integrals.
TimeSeries solve_ibvp_dirichlet(const LinearParabolicProblem& p, const TimeGrid& grid,
                                const EigenSystem* es = nullptr);
TimeSeries solve_ibvp_neumann(const LinearParabolicProblem& p, const TimeGrid& grid,
                              const EigenSystem* es = nullptr);
TimeSeries solve_cauchy(const LinearParabolicProblem& p, const TimeGrid& grid,
                        const EigenSystem* es = nullptr);

// ∫_0^t e^{rate·s} h(s) ds for h piecewise-linear through uniform samples of
// spacing grid_dt, by composite Simpson with panels_per_step sub-panels per
// grid step. Direct form; intended for moderate rate·t.
double forcing_mode_integral(std::span<const double> samples, double grid_dt, double rate,
                             double t, int panels_per_step = 10);

// (−Δ_Ω + M)u = rhs in Ω, u = data on ∂Ω. Returns values on the whole host
// vertex set. rhs in interior order, data in boundary order.
GraphFunction solve_elliptic_dirichlet(const WeightedGraph& g, const DomainPartition& p,
                                       double shift, std::span<const double> rhs,
                                       std::span<const double> data);

// (−Δ_Ω + M)u = rhs in Ω, ∂u/∂n = data on ∂Ω, via the Neumann eigenfunction
// quotient plus a boundary-flux lift.
GraphFunction solve_elliptic_neumann(const WeightedGraph& g, const DomainPartition& p,
                                     double shift, std::span<const double> rhs,
                                     std::span<const double> data,
                                     const EigenSystem* es = nullptr);

// (−Δ_V + M)u = rhs on V.
GraphFunction solve_elliptic_cauchy(const WeightedGraph& g, double shift,
                                    std::span<const double> rhs);

// Front door over the three elliptic variants: M > 0, rhs in interior (or
// full-vertex) order, data in boundary order, ignored for BoundaryKind::None.
GraphFunction solve_elliptic_shifted(const WeightedGraph& g, const DomainPartition* p,
                                     BoundaryKind kind, double shift,
                                     std::span<const double> rhs,
                                     std::span<const double> data);

// (−Δ_V − b·∇ + c + M)u = rhs on V. The margin M + min c − max|b|²/2 must
// exceed 1 for the underlying theory to apply; it is reported, not enforced.
struct DriftSolveResult {
  GraphFunction u;
  double coercivity_margin = 0.0;
};

DriftSolveResult solve_elliptic_drift(const WeightedGraph& g, const DriftField& b,
                                      std::span<const double> c, double shift,
                                      std::span<const double> rhs);

// Δ_Ω z = I in Ω with I ≡ ∫_∂Ω data dμ / Vol(Ω), ∂z/∂n = data on ∂Ω, zero
// μ-mean gauge over the host vertex set. Shared by the Neumann solvers.
GraphFunction solve_neumann_lift(const WeightedGraph& g, const DomainPartition& p,
                                 std::span<const double> data);

// sup_x |(−Δ + M)u − rhs| plus boundary mismatch, for post-solve checks
double elliptic_residual_dirichlet(const WeightedGraph& g, const DomainPartition& p, double shift,
                                   std::span<const double> rhs, std::span<const double> data,
                                   std::span<const double> u);
double elliptic_residual_neumann(const WeightedGraph& g, const DomainPartition& p, double shift,
                                 std::span<const double> rhs, std::span<const double> data,
                                 std::span<const double> u);

}  // namespace graphpde
