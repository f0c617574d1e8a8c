#include "graphpde/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace graphpde {

double default_parabolic_tolerance(double dt, double sup_u) {
  return 10.0 * dt * (1.0 + sup_u);
}

namespace {

double eval_or(const SpaceTimeFn& f, int x, double t, double fallback) {
  return f ? f(x, t) : fallback;
}

// local spacings: recorded grids may end on a shorter final interval
double time_derivative(const TimeSeries& s, int m, int x) {
  const int last = s.size() - 1;
  if (m == 0) return (s.states[1][x] - s.states[0][x]) / (s.times[1] - s.times[0]);
  if (m == last)
    return (s.states[last][x] - s.states[last - 1][x]) / (s.times[last] - s.times[last - 1]);
  return (s.states[m + 1][x] - s.states[m - 1][x]) / (s.times[m + 1] - s.times[m - 1]);
}

}  // namespace

ResidualCertificate certify_parabolic(const TimeSeries& series, const WeightedGraph& g,
                                      const DomainPartition* p, const SpaceTimeFn& k,
                                      const BoundaryOperator& bc, const SpaceTimeFn& source,
                                      double tolerance,
                                      const std::function<double(int)>& initial_data) {
  if (series.size() < 3)
    throw std::invalid_argument("certify_parabolic: grid too coarse (need at least 3 times)");

  ResidualCertificate cert;
  cert.kind = p ? CertKind::ParabolicIBVP : CertKind::ParabolicCauchy;
  cert.tolerance = tolerance;
  cert.min_residual = std::numeric_limits<double>::infinity();
  cert.max_residual = -std::numeric_limits<double>::infinity();

  const std::vector<int>* interior = nullptr;
  std::vector<int> all;
  if (p) {
    interior = &p->interior();
  } else {
    all.resize(g.size());
    for (int i = 0; i < g.size(); ++i) all[i] = i;
    interior = &all;
  }

  double worst_abs = -1.0;
  for (int m = 1; m < series.size(); ++m) {  // equation holds on (0,T]
    const double t = series.times[m];
    for (int x : *interior) {
      const double lap = p ? laplacian_domain(g, *p, series.states[m], x)
                           : laplacian_full(g, series.states[m], x);
      const double r = time_derivative(series, m, x) - lap -
                       eval_or(k, x, t, 0.0) * series.states[m][x] - eval_or(source, x, t, 0.0);
      cert.min_residual = std::min(cert.min_residual, r);
      cert.max_residual = std::max(cert.max_residual, r);
      if (std::abs(r) > worst_abs) {
        worst_abs = std::abs(r);
        cert.worst_location = g.id(x) + " @ t=" + std::to_string(t);
      }
    }
  }

  cert.min_initial_margin = std::numeric_limits<double>::infinity();
  cert.max_initial_margin = -std::numeric_limits<double>::infinity();
  for (int x : *interior) {
    const double margin = series.states[0][x] - (initial_data ? initial_data(x) : 0.0);
    cert.min_initial_margin = std::min(cert.min_initial_margin, margin);
    cert.max_initial_margin = std::max(cert.max_initial_margin, margin);
  }

  if (p) {
    cert.min_boundary_margin = std::numeric_limits<double>::infinity();
    cert.max_boundary_margin = -std::numeric_limits<double>::infinity();
    for (int m = 0; m < series.size(); ++m) {
      const double t = series.times[m];
      for (int z : p->boundary()) {
        const double a = eval_or(bc.alpha, z, t, 0.0);
        const double b = eval_or(bc.beta, z, t, 0.0);
        const double margin = a * series.states[m][z] +
                              b * normal_derivative(g, *p, series.states[m], z) -
                              eval_or(bc.data, z, t, 0.0);
        cert.min_boundary_margin = std::min(cert.min_boundary_margin, margin);
        cert.max_boundary_margin = std::max(cert.max_boundary_margin, margin);
      }
    }
  }

  cert.is_supersolution = cert.min_residual >= -tolerance &&
                          cert.min_initial_margin >= -tolerance &&
                          (!p || cert.min_boundary_margin >= -tolerance);
  cert.is_subsolution = cert.max_residual <= tolerance && cert.max_initial_margin <= tolerance &&
                        (!p || cert.max_boundary_margin <= tolerance);
  return cert;
}

ResidualCertificate certify_elliptic(const WeightedGraph& g, const DomainPartition* p,
                                     std::span<const double> u, const DriftField* b,
                                     const std::function<double(int)>& c,
                                     const std::function<double(int)>& rhs, BoundaryKind kind,
                                     std::span<const double> boundary_data, double tolerance) {
  ResidualCertificate cert;
  cert.kind = p ? CertKind::EllipticBVP : CertKind::EllipticCauchy;
  cert.tolerance = tolerance;
  cert.min_residual = std::numeric_limits<double>::infinity();
  cert.max_residual = -std::numeric_limits<double>::infinity();

  std::vector<int> all;
  const std::vector<int>* interior = nullptr;
  if (p) {
    interior = &p->interior();
  } else {
    all.resize(g.size());
    for (int i = 0; i < g.size(); ++i) all[i] = i;
    interior = &all;
  }

  double worst_abs = -1.0;
  for (int x : *interior) {
    double r = p ? -laplacian_domain(g, *p, u, x) : -laplacian_full(g, u, x);
    if (b) r -= drift_dot_gradient(g, *b, u, x);
    if (c) r += c(x) * u[x];
    if (rhs) r -= rhs(x);
    cert.min_residual = std::min(cert.min_residual, r);
    cert.max_residual = std::max(cert.max_residual, r);
    if (std::abs(r) > worst_abs) {
      worst_abs = std::abs(r);
      cert.worst_location = g.id(x);
    }
  }

  if (p && kind != BoundaryKind::None) {
    cert.min_boundary_margin = std::numeric_limits<double>::infinity();
    cert.max_boundary_margin = -std::numeric_limits<double>::infinity();
    const auto& bd = p->boundary();
    for (size_t k = 0; k < bd.size(); ++k) {
      const double bu = (kind == BoundaryKind::Dirichlet)
                            ? u[bd[k]]
                            : normal_derivative(g, *p, u, bd[k]);
      const double data = boundary_data.empty() ? 0.0 : boundary_data[k];
      cert.min_boundary_margin = std::min(cert.min_boundary_margin, bu - data);
      cert.max_boundary_margin = std::max(cert.max_boundary_margin, bu - data);
    }
  }

  cert.is_supersolution =
      cert.min_residual >= -tolerance &&
      (!(p && kind != BoundaryKind::None) || cert.min_boundary_margin >= -tolerance);
  cert.is_subsolution =
      cert.max_residual <= tolerance &&
      (!(p && kind != BoundaryKind::None) || cert.max_boundary_margin <= tolerance);
  return cert;
}

OrderingReport assert_ordering(const TimeSeries& upper, const TimeSeries& lower,
                               const WeightedGraph& g, const DomainPartition* p,
                               double tolerance) {
  if (upper.size() != lower.size())
    throw std::invalid_argument("assert_ordering: mismatched grids");
  for (int m = 0; m < upper.size(); ++m)
    if (std::abs(upper.times[m] - lower.times[m]) > 1e-12)
      throw std::invalid_argument("assert_ordering: mismatched grid times");

  OrderingReport rep;
  rep.min_margin = std::numeric_limits<double>::infinity();
  rep.strict_margin_interior = std::numeric_limits<double>::infinity();
  rep.pass = true;
  for (int m = 0; m < upper.size(); ++m) {
    for (int x = 0; x < g.size(); ++x) {
      const double d = upper.states[m][x] - lower.states[m][x];
      rep.min_margin = std::min(rep.min_margin, d);
      const bool interior = !p || p->is_interior(x);
      if (interior && m > 0)
        rep.strict_margin_interior = std::min(rep.strict_margin_interior, d);
      if (d < -tolerance && rep.pass) {
        rep.pass = false;
        rep.first_crossing_time = upper.times[m];
        rep.first_crossing_vertex = g.id(x);
      }
    }
  }
  return rep;
}

namespace {

PositivityReport positivity_impl(const std::vector<const GraphFunction*>& states,
                                 const std::vector<double>& times, const WeightedGraph& g,
                                 const DomainPartition* p, PositivityMode mode,
                                 double tolerance) {
  PositivityReport rep;
  rep.min_value = std::numeric_limits<double>::infinity();
  double sup = 0.0;
  for (const auto* s : states) sup = std::max(sup, sup_norm(*s));
  rep.strict_threshold = 1e-14 * sup;

  for (size_t m = 0; m < states.size(); ++m) {
    const bool strict_time = times.empty() || times[m] > 0.0;
    for (int x = 0; x < g.size(); ++x) {
      if (mode == PositivityMode::StrictInterior) {
        if (p && !p->is_interior(x)) continue;
        if (!strict_time) continue;
      }
      const double v = (*states[m])[x];
      if (v < rep.min_value) {
        rep.min_value = v;
        rep.min_vertex = g.id(x);
        rep.min_time = times.empty() ? 0.0 : times[m];
      }
    }
  }
  rep.pass = (mode == PositivityMode::Nonneg) ? rep.min_value >= -tolerance
                                              : rep.min_value > rep.strict_threshold;
  return rep;
}

}  // namespace

PositivityReport check_positivity(const TimeSeries& series, const WeightedGraph& g,
                                  const DomainPartition* p, PositivityMode mode,
                                  double tolerance) {
  std::vector<const GraphFunction*> states;
  states.reserve(series.states.size());
  for (const auto& s : series.states) states.push_back(&s);
  return positivity_impl(states, series.times, g, p, mode, tolerance);
}

PositivityReport check_positivity(std::span<const double> u, const WeightedGraph& g,
                                  const DomainPartition* p, PositivityMode mode,
                                  double tolerance) {
  GraphFunction copy(u.begin(), u.end());
  return positivity_impl({&copy}, {}, g, p, mode, tolerance);
}

}  // namespace graphpde
