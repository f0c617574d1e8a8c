#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "graphpde/dense.hpp"

namespace graphpde {

using VertexId = std::string;

// A function on the vertex set, indexed in graph vertex order. Domain problems
// keep the full host-graph length (interior and boundary values together).
using GraphFunction = std::vector<double>;
using DriftField = std::vector<double>;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Finite weighted graph: ordered vertex ids, symmetric nonnegative weights,
// positive vertex measure. Immutable after construction; all operators below
// are pure, so instances are safe to share across threads.
class WeightedGraph {
 public:
  struct Edge {
    int i, j;
    double w;
  };

  WeightedGraph(std::vector<VertexId> ids, std::vector<double> measure,
                const std::vector<Edge>& edges);

  // Bypasses the symmetric edge insertion; lets validation tests build graphs
  // that break the axioms on purpose.
  static WeightedGraph raw(std::vector<VertexId> ids, std::vector<double> measure,
                           Matrix weights);

  int size() const { return static_cast<int>(ids_.size()); }
  const std::vector<VertexId>& ids() const { return ids_; }
  const VertexId& id(int v) const { return ids_[v]; }
  int index_of(const VertexId& id) const;  // -1 when unknown

  double weight(int i, int j) const { return w_(i, j); }
  double measure(int i) const { return mu_[i]; }
  const std::vector<double>& measures() const { return mu_; }

  // Σ_y ω_xy
  double weighted_degree(int x) const;
  double volume() const;
  bool connected() const;
  bool connected_on(std::span<const int> subset) const;

 private:
  WeightedGraph() = default;
  std::vector<VertexId> ids_;
  std::vector<double> mu_;
  Matrix w_;
};

// Interior/boundary split of a host graph's vertices. Ω ∪ ∂Ω covers the host
// vertex set, so functions on Ω̄ are just GraphFunctions on the host graph.
class DomainPartition {
 public:
  enum class Role { Interior, Boundary };

  DomainPartition(const WeightedGraph& g, const std::vector<Role>& roles);

  const std::vector<int>& interior() const { return interior_; }
  const std::vector<int>& boundary() const { return boundary_; }
  bool is_interior(int v) const { return role_[v] == 0; }
  bool is_boundary(int v) const { return role_[v] == 1; }
  // position of v within the interior (boundary) list, -1 otherwise
  int interior_pos(int v) const { return ipos_[v]; }
  int boundary_pos(int v) const { return bpos_[v]; }

 private:
  std::vector<int> interior_, boundary_;
  std::vector<int> role_, ipos_, bpos_;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Report-style check of the weight/measure axioms, connectivity, and the
// partition's boundary-adjacency and interior-connectivity requirements.
ValidationReport validate(const WeightedGraph& g, const DomainPartition* p = nullptr);

// ---- discrete operators ----

// Δ_V u(x) = Σ_{y∈V} (u(y)−u(x)) ω_yx / μ(x)
double laplacian_full(const WeightedGraph& g, std::span<const double> u, int x);

// Δ_Ω u(x) = Σ_{y∈Ω̄} (u(y)−u(x)) ω_yx / μ(x), x ∈ Ω
double laplacian_domain(const WeightedGraph& g, const DomainPartition& p,
                        std::span<const double> u, int x);

// ∂u/∂n(z) = Σ_{y∈Ω} (u(z)−u(y)) ω_zy / μ(z), z ∈ ∂Ω
double normal_derivative(const WeightedGraph& g, const DomainPartition& p,
                         std::span<const double> u, int z);

// Γ(u,v)(x) = (1/2μ(x)) Σ_{y∼x} ω_xy (u(y)−u(x))(v(y)−v(x))
double gradient_form(const WeightedGraph& g, std::span<const double> u,
                     std::span<const double> v, int x);
double gradient_norm(const WeightedGraph& g, std::span<const double> u, int x);

// Σ_y b(y)(u(y)−u(x)) √(ω_xy / 2μ(x)); b indexed by the neighbor
double drift_dot_gradient(const WeightedGraph& g, const DriftField& b,
                          std::span<const double> u, int x);

double integrate(const WeightedGraph& g, std::span<const double> u);
double integrate(const WeightedGraph& g, std::span<const double> u, std::span<const int> subset);
double sup_norm(std::span<const double> u);
double lp_norm(const WeightedGraph& g, std::span<const double> u, double p);
double volume(const WeightedGraph& g, std::span<const int> subset);

// ---- graph file format ----
//
// Two sections. `vertices:` holds `id, measure, role` records with role in
// {interior, boundary, plain}; `edges:` holds `id1, id2, weight` records,
// undirected, each edge listed once. `#` starts a comment. Duplicate edges and
// self-loops are rejected.
struct GraphFile {
  WeightedGraph graph;
  std::optional<DomainPartition> partition;
};

GraphFile parse_graph_text(const std::string& text, const std::string& origin = "<string>");
GraphFile load_graph_file(const std::string& path);

// Built-in five-vertex demo: unit weights on the path-plus-triangle graph,
// μ(x) = Σ_y ω_xy, interior {x1,x2,x3}, boundary {x4,x5}, u0 = (8, 1, 0.5).
WeightedGraph demo_graph();
DomainPartition demo_partition(const WeightedGraph& g);
GraphFunction demo_initial();

}  // namespace graphpde
