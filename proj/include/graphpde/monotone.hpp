#pragma once

#include <string>
#include <vector>

#include "graphpde/comparison.hpp"
#include "graphpde/linear_solvers.hpp"

namespace graphpde {

// Reaction term f(u). All built-ins are polynomials stored by ascending
// coefficients, so derivative evaluation and exact interval bounds are cheap.
class Reaction {
 public:
  enum class Kind { Zero, Logistic, Kpp, AllenCahn, Polynomial };

  static Reaction zero();
  static Reaction logistic(double a, double b);      // u(a − b·u)
  static Reaction fisher_kpp();                      // u(1 − u)
  static Reaction allen_cahn(double alpha);          // u(u − α)(1 − u), 0 < α < 1
  static Reaction polynomial(std::vector<double> coeffs);

  double operator()(double u) const;
  double deriv(double u) const;

  Kind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  double growth() const { return a_; }      // logistic a
  double saturation() const { return b_; }  // logistic b
  const std::vector<double>& coeffs() const { return coeffs_; }
  bool is_zero() const;

  // KPP structural hypotheses: f(0)=f(1)=0, f>0 on (0,1), f'(0)>0, and
  // f(u)/u monotone nonincreasing on [0,1], checked by sampling.
  bool check_kpp_hypotheses(std::string* notes = nullptr) const;

 private:
  Kind kind_ = Kind::Zero;
  std::vector<double> coeffs_{0.0};
  double alpha_ = 0.0, a_ = 0.0, b_ = 0.0;
};

// Smallest M with f(x,u)−f(x,v) ≥ −M(u−v) on [lo,hi], padded by 10%. Exact
// interval bound of |f'| for polynomials up to cubic, sampled otherwise.
double lipschitz_constant(const Reaction& f, double lo, double hi);

struct Bracket {
  GraphFunction lower, upper;  // full host length, lower ≤ upper pointwise
};

struct MonotoneResult {
  GraphFunction minimal, maximal;
  std::vector<GraphFunction> lower_iterates, upper_iterates;  // includes the bracket itself
  int iterations = 0;
  double final_increment = 0.0;
  double gap = 0.0;       // sup |maximal − minimal|
  double residual = 0.0;  // worst equation residual of the two limits
  double shift = 0.0;
  double coercivity_margin = 0.0;  // drift problems only
  bool converged = false;
  bool unique = false;  // gap ≤ 100·tol
  bool lower_certified = false, upper_certified = false;
};

struct MonotoneOptions {
  double tol = 1e-10;
  int max_iters = 10000;
  bool record_iterates = true;
};

// Iterates (−Δ_Ω + M)u_{m+1} = M·u_m + f(u_m) with B u_{m+1} = data from both
// bracket ends; returns minimal and maximal solutions.
MonotoneResult elliptic_monotone(const WeightedGraph& g, const DomainPartition& p,
                                 BoundaryKind kind, const Reaction& f,
                                 std::span<const double> boundary_data, const Bracket& bracket,
                                 const MonotoneOptions& opt = {});

// Same scheme for −Δ_V u − b·∇u + c·u = f(u) on the whole graph; the shift is
// raised to keep M + min c − max|b|²/2 > 1.
MonotoneResult cauchy_elliptic_monotone(const WeightedGraph& g, const Reaction& f,
                                        const DriftField& b, std::span<const double> c,
                                        const Bracket& bracket, const MonotoneOptions& opt = {});

// Default logistic/KPP bracket: lower = largest δ ∈ {2^−k} with δ·(principal
// eigenfunction) a certified subsolution (0 when none passes), upper =
// max(positive equilibrium cap, max u0).
Bracket make_logistic_bracket(const WeightedGraph& g, const DomainPartition* p,
                              BoundaryKind kind, const Reaction& f,
                              std::span<const double> u0);

// Picard iteration for the semilinear parabolic problem via the linear
// solvers, forcing f(u_{k−1}) + M·u_{k−1} sampled on the grid.
struct SemilinearParabolicProblem {
  const WeightedGraph* graph = nullptr;
  const DomainPartition* partition = nullptr;  // null for Cauchy
  BoundaryKind kind = BoundaryKind::None;
  Reaction f;
  SpaceTimeFn boundary_data;
  GraphFunction initial;  // interior order (IBVP) or all vertices (Cauchy)
  double horizon = 1.0;
};

struct ParabolicMonotoneResult {
  TimeSeries lower_fixed, upper_fixed;
  int iterations = 0;
  double final_increment = 0.0;
  double gap = 0.0;
  double shift = 0.0;
  bool converged = false;
};

TimeSeries constant_series(const WeightedGraph& g, const TimeGrid& grid, double value);

ParabolicMonotoneResult parabolic_monotone(const SemilinearParabolicProblem& prob,
                                           const TimeSeries& lower0, const TimeSeries& upper0,
                                           const TimeGrid& grid,
                                           const MonotoneOptions& opt = {});

}  // namespace graphpde
