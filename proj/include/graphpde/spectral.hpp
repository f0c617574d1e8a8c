#pragma once

#include <span>
#include <vector>

#include "graphpde/graph.hpp"

namespace graphpde {

enum class EigenKind { Full, Dirichlet, Neumann };

// Eigen-decomposition of −Δ in one of its three variants. Eigenvalues ascend;
// eigenfunctions are μ-orthonormal on `support` (all of V for Full, the
// interior for Dirichlet/Neumann). Neumann eigenfunctions additionally carry
// their zero-flux extension to the boundary; Dirichlet ones extend by zero.
struct EigenSystem {
  EigenKind kind = EigenKind::Full;
  std::vector<double> values;
  std::vector<std::vector<double>> functions;        // each of length support.size()
  std::vector<std::vector<double>> boundary_values;  // per function, length boundary.size()
  std::vector<int> support;
  std::vector<int> boundary;
  std::vector<double> mu;  // measure restricted to support

  int count() const { return static_cast<int>(values.size()); }
  // ⟨u,v⟩_μ over the support
  double inner(std::span<const double> u, std::span<const double> v) const;
  // μ-projection coefficients of a function given on the support
  std::vector<double> project(std::span<const double> u) const;
  // value of eigenfunction j on the full host vertex set (zero/flux extension)
  double value_on_host(int j, int host_vertex, const DomainPartition* p) const;
};

// Operator matrices, indexed like `support`. The Neumann variant is the
// interior operator after eliminating boundary values through the zero-flux
// constraint; `boundary_weights` returns the elimination matrix C with
// u_boundary = C u_interior.
Matrix assemble_neg_laplacian_full(const WeightedGraph& g);
Matrix assemble_neg_laplacian_dirichlet(const WeightedGraph& g, const DomainPartition& p);
Matrix assemble_neg_laplacian_neumann(const WeightedGraph& g, const DomainPartition& p);
Matrix neumann_boundary_elimination(const WeightedGraph& g, const DomainPartition& p);

EigenSystem full_eigensystem(const WeightedGraph& g);
EigenSystem dirichlet_eigensystem(const WeightedGraph& g, const DomainPartition& p);
EigenSystem neumann_eigensystem(const WeightedGraph& g, const DomainPartition& p);

// Spectral heat kernel Σ_j e^{−λ_j t} φ_j(x) φ_j(y) μ(y) over the support.
struct HeatKernel {
  EigenKind kind;
  double t = 0.0;
  Matrix entries;  // entries(x,y), indices into support
  std::vector<int> support;
};

HeatKernel heat_kernel(const EigenSystem& es, double t);

// Max over pairs of ‖−Δ φ_j − λ_j φ_j‖∞, with −Δ given as its assembled matrix.
double eigen_residual(const Matrix& op, const EigenSystem& es);

}  // namespace graphpde
