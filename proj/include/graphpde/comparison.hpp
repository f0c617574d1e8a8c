#pragma once

#include <functional>
#include <optional>
#include <string>

#include "graphpde/linear_solvers.hpp"

namespace graphpde {

enum class CertKind { ParabolicIBVP, ParabolicCauchy, EllipticBVP, EllipticCauchy };

// Two-sided residual summary. A series can be super- and subsolution at once
// (any exact solution is both), so the flags are kept separately.
struct ResidualCertificate {
  CertKind kind = CertKind::ParabolicCauchy;
  double min_residual = 0.0, max_residual = 0.0;
  double min_boundary_margin = 0.0, max_boundary_margin = 0.0;
  double min_initial_margin = 0.0, max_initial_margin = 0.0;
  double tolerance = 0.0;
  bool is_supersolution = false;
  bool is_subsolution = false;
  std::string worst_location;  // vertex id (and time) of the binding residual

  std::string verdict() const {
    if (is_supersolution && is_subsolution) return "SupersolutionAndSubsolution";
    if (is_supersolution) return "Supersolution";
    if (is_subsolution) return "Subsolution";
    return "Neither";
  }
};

// Residual-noise floor for finite-difference certificates on a dt grid.
double default_parabolic_tolerance(double dt, double sup_u);

// Boundary operator A = α·v + β·∂v/∂n with α, β ≥ 0, α+β > 0. The margin is
// A v − data; empty data gives the homogeneous maximum-principle form.
struct BoundaryOperator {
  SpaceTimeFn alpha;  // empty means 0
  SpaceTimeFn beta;
  SpaceTimeFn data;
};

// Certify v_t − Δv − k·v − source ≥ 0 (≤ 0) over the grid, with A v ≥ data on
// the boundary and v(·,0) ≥ initial_data. Empty data functions give the
// homogeneous maximum-principle form; supplying the problem's data certifies
// upper/lower solutions of that problem. Time derivative: centered
// differences at interior grid times, one-sided at the ends. A null partition
// means the Cauchy case.
ResidualCertificate certify_parabolic(const TimeSeries& series, const WeightedGraph& g,
                                      const DomainPartition* p, const SpaceTimeFn& k,
                                      const BoundaryOperator& bc, const SpaceTimeFn& source,
                                      double tolerance,
                                      const std::function<double(int)>& initial_data = {});

// Certify −Δu − b·∇u + c·u − rhs ≥ 0 (≤ 0) pointwise; boundary margin is
// B[u] − data with B per `kind` (ignored for BoundaryKind::None).
ResidualCertificate certify_elliptic(const WeightedGraph& g, const DomainPartition* p,
                                     std::span<const double> u, const DriftField* b,
                                     const std::function<double(int)>& c,
                                     const std::function<double(int)>& rhs, BoundaryKind kind,
                                     std::span<const double> boundary_data, double tolerance);

struct OrderingReport {
  bool pass = false;
  double min_margin = 0.0;             // min of upper − lower over everything
  double strict_margin_interior = 0.0; // min over Ω × (0,T]
  std::optional<double> first_crossing_time;
  std::string first_crossing_vertex;
};

// upper ≥ lower − tolerance everywhere; both series must share the grid.
OrderingReport assert_ordering(const TimeSeries& upper, const TimeSeries& lower,
                               const WeightedGraph& g, const DomainPartition* p,
                               double tolerance);

enum class PositivityMode { Nonneg, StrictInterior };

struct PositivityReport {
  bool pass = false;
  double min_value = 0.0;
  std::string min_vertex;
  double min_time = 0.0;
  double strict_threshold = 0.0;
};

PositivityReport check_positivity(const TimeSeries& series, const WeightedGraph& g,
                                  const DomainPartition* p, PositivityMode mode,
                                  double tolerance);
PositivityReport check_positivity(std::span<const double> u, const WeightedGraph& g,
                                  const DomainPartition* p, PositivityMode mode,
                                  double tolerance);

}  // namespace graphpde
