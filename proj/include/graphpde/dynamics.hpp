#pragma once

#include <functional>
#include <optional>
#include <string>

#include "graphpde/monotone.hpp"

namespace graphpde {

// One semilinear run: u_t − Δu = f(u) with the stated boundary handling,
// integrated by an IMEX scheme (implicit diffusion, explicit reaction).
struct Scenario {
  const WeightedGraph* graph = nullptr;
  const DomainPartition* partition = nullptr;  // null for Cauchy
  BoundaryKind kind = BoundaryKind::None;
  Reaction f;
  SpaceTimeFn boundary_data;  // empty means zero
  GraphFunction initial;      // interior order (IBVP) or all vertices (Cauchy)
  double horizon = 1.0;
  double dt = 1e-3;
  int stride = 100;  // record every stride steps
};

struct BlowUpError : std::runtime_error {
  double time;
  explicit BlowUpError(double t)
      : std::runtime_error("integration diverged at t=" + std::to_string(t)), time(t) {}
};

TimeSeries integrate(const Scenario& s);

enum class Outcome { Extinction, ConvergenceToState, ConvergenceToConstant, Undecided };

std::string outcome_name(Outcome o);

struct Classification {
  Outcome outcome = Outcome::Undecided;
  GraphFunction steady_state;       // ConvergenceToState
  double constant_value = 0.0;      // ConvergenceToConstant
  double lambda1 = 0.0;             // principal Dirichlet eigenvalue, when relevant
  double threshold_margin = 0.0;    // a − λ₁ for the logistic threshold
  std::vector<double> admissible_rho;  // Allen–Cahn smallness scan
  double final_sup = 0.0;
  std::vector<double> sup_trail;    // sup-norm at each recorded time
  double steady_residual = 0.0;
  bool monotone_tail = false;
  bool sandwich_ok = false;         // Neumann scalar-ODE envelope
  bool hypothesis_ok = true;
  std::string notes;
};

struct RunControls {
  double horizon = 50.0;
  double dt = 1e-3;
  int stride = 100;
  double extinction_threshold = 1e-3;
  double convergence_tol = 1e-6;
  double match_tol = 1e-4;  // trajectory vs steady state
  int tail_window = 20;     // recorded samples inspected for the trend tests
};

Classification classify_logistic_dirichlet(const WeightedGraph& g, const DomainPartition& p,
                                           double a, double b, const GraphFunction& u0,
                                           const RunControls& rc = {});
Classification classify_logistic_neumann(const WeightedGraph& g, const DomainPartition& p,
                                         double a, double b, const GraphFunction& u0,
                                         const RunControls& rc = {});
Classification classify_kpp_cauchy(const WeightedGraph& g, const Reaction& f,
                                   const GraphFunction& u0, const RunControls& rc = {});

// s(ρ) = sup { f(u)/(u−ρ) : u ∈ (α,1) } and the pointwise smallness test
// e^{1/2}·[u0−ρ]⁺·μ(x) < α−ρ, scanned over ρ ∈ [0,α).
struct AllenCahnCriterion {
  std::vector<double> rho_scan;
  std::vector<double> s_values;
  std::vector<bool> admissible;
  std::vector<double> vertex_slack;  // per vertex, at the best admissible ρ
  double s0 = 0.0;                   // s(0)
  bool any_admissible = false;
  bool propagation = false;  // u0 > α everywhere
};

AllenCahnCriterion allen_cahn_criterion(const WeightedGraph& g, const Reaction& f,
                                        const GraphFunction& u0, int rho_points = 256);

Classification classify_allen_cahn(const WeightedGraph& g, const Reaction& f,
                                   const GraphFunction& u0, const RunControls& rc = {});

// Terminal state once the trailing `window` recorded states vary by at most
// tol and the state solves the elliptic problem to 10·tol.
struct SteadyDetect {
  GraphFunction state;
  double achieved_at = 0.0;
};

std::optional<SteadyDetect> steady_state_detect(const TimeSeries& series, const Scenario& s,
                                                int window, double tol);

// Classical 4th-order one-step integration of z' = f(z); values at k·dt.
std::vector<double> scalar_ode_bound(const std::function<double(double)>& f, double z0,
                                     double horizon, double dt);

}  // namespace graphpde
