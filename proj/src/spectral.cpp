#include "graphpde/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace graphpde {

double EigenSystem::inner(std::span<const double> u, std::span<const double> v) const {
  double s = 0.0;
  for (size_t i = 0; i < mu.size(); ++i) s += mu[i] * u[i] * v[i];
  return s;
}

std::vector<double> EigenSystem::project(std::span<const double> u) const {
  std::vector<double> c(count());
  for (int j = 0; j < count(); ++j) c[j] = inner(u, functions[j]);
  return c;
}

double EigenSystem::value_on_host(int j, int host_vertex, const DomainPartition* p) const {
  if (kind == EigenKind::Full) return functions[j][host_vertex];
  if (!p) throw std::invalid_argument("value_on_host: partition required");
  if (p->is_interior(host_vertex)) return functions[j][p->interior_pos(host_vertex)];
  if (kind == EigenKind::Dirichlet) return 0.0;
  return boundary_values[j][p->boundary_pos(host_vertex)];
}

Matrix assemble_neg_laplacian_full(const WeightedGraph& g) {
  const int n = g.size();
  Matrix a(n, n);
  for (int x = 0; x < n; ++x) {
    a(x, x) = g.weighted_degree(x) / g.measure(x);
    for (int y = 0; y < n; ++y)
      if (y != x) a(x, y) = -g.weight(x, y) / g.measure(x);
  }
  return a;
}

Matrix assemble_neg_laplacian_dirichlet(const WeightedGraph& g, const DomainPartition& p) {
  const auto& in = p.interior();
  const int n = static_cast<int>(in.size());
  Matrix a(n, n);
  for (int i = 0; i < n; ++i) {
    const int x = in[i];
    a(i, i) = g.weighted_degree(x) / g.measure(x);
    for (int j = 0; j < n; ++j)
      if (j != i) a(i, j) = -g.weight(x, in[j]) / g.measure(x);
  }
  return a;
}

Matrix neumann_boundary_elimination(const WeightedGraph& g, const DomainPartition& p) {
  const auto& in = p.interior();
  const auto& bd = p.boundary();
  Matrix c(static_cast<int>(bd.size()), static_cast<int>(in.size()));
  for (size_t a = 0; a < bd.size(); ++a) {
    const int z = bd[a];
    double s = 0.0;
    for (int y : in) s += g.weight(z, y);
    if (!(s > 0.0))
      throw std::invalid_argument("neumann_boundary_elimination: boundary vertex " + g.id(z) +
                                  " has no interior neighbor");
    for (size_t b = 0; b < in.size(); ++b) c(static_cast<int>(a), static_cast<int>(b)) =
        g.weight(z, in[b]) / s;
  }
  return c;
}

Matrix assemble_neg_laplacian_neumann(const WeightedGraph& g, const DomainPartition& p) {
  const auto& in = p.interior();
  const auto& bd = p.boundary();
  const int n = static_cast<int>(in.size());
  const Matrix c = neumann_boundary_elimination(g, p);
  Matrix a(n, n);
  for (int i = 0; i < n; ++i) {
    const int x = in[i];
    // full weighted degree (interior and boundary neighbors both count)
    a(i, i) = g.weighted_degree(x) / g.measure(x);
    for (int j = 0; j < n; ++j) {
      double w = (j != i) ? g.weight(x, in[j]) : 0.0;
      for (size_t z = 0; z < bd.size(); ++z)
        w += g.weight(x, bd[z]) * c(static_cast<int>(z), j);
      if (j == i)
        a(i, i) -= w / g.measure(x);
      else
        a(i, j) = -w / g.measure(x);
    }
  }
  return a;
}

namespace {

// Solve the μ-self-adjoint eigenproblem for M by symmetrizing with D^{1/2},
// then map eigenvectors back and enforce the conventions: μ-orthonormal,
// clusters re-orthonormalized, largest-magnitude entry positive.
EigenSystem decompose(EigenKind kind, const Matrix& m, std::vector<int> support,
                      std::vector<double> mu_support) {
  const int n = m.rows();
  Matrix s(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      s(i, j) = std::sqrt(mu_support[i]) * m(i, j) / std::sqrt(mu_support[j]);
  // enforce exact symmetry before Jacobi to keep rotations clean
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = 0.5 * (s(i, j) + s(j, i));
      s(i, j) = v;
      s(j, i) = v;
    }

  SymmetricEigen se = jacobi_eigensystem(std::move(s));

  EigenSystem es;
  es.kind = kind;
  es.values = se.values;
  es.support = std::move(support);
  es.mu = std::move(mu_support);
  es.functions.assign(n, std::vector<double>(n));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) es.functions[j][i] = se.vectors(i, j) / std::sqrt(es.mu[i]);

  // Gram-Schmidt in the μ-inner product within eigenvalue clusters (gap < 1e-9)
  int start = 0;
  while (start < n) {
    int end = start + 1;
    while (end < n && es.values[end] - es.values[end - 1] < 1e-9) ++end;
    for (int j = start; j < end; ++j) {
      auto& f = es.functions[j];
      for (int k = start; k < j; ++k) {
        const double c = es.inner(f, es.functions[k]);
        for (int i = 0; i < n; ++i) f[i] -= c * es.functions[k][i];
      }
      const double nrm = std::sqrt(es.inner(f, f));
      for (int i = 0; i < n; ++i) f[i] /= nrm;
    }
    start = end;
  }

  for (auto& f : es.functions) {
    int arg = 0;
    for (int i = 1; i < n; ++i)
      if (std::abs(f[i]) > std::abs(f[arg])) arg = i;
    if (f[arg] < 0.0)
      for (auto& v : f) v = -v;
  }
  return es;
}

}  // namespace

EigenSystem full_eigensystem(const WeightedGraph& g) {
  std::vector<int> support(g.size());
  for (int i = 0; i < g.size(); ++i) support[i] = i;
  return decompose(EigenKind::Full, assemble_neg_laplacian_full(g), std::move(support),
                   g.measures());
}

EigenSystem dirichlet_eigensystem(const WeightedGraph& g, const DomainPartition& p) {
  if (p.boundary().empty())
    throw std::invalid_argument("dirichlet_eigensystem: empty boundary");
  std::vector<double> mu;
  for (int x : p.interior()) mu.push_back(g.measure(x));
  EigenSystem es = decompose(EigenKind::Dirichlet, assemble_neg_laplacian_dirichlet(g, p),
                             p.interior(), std::move(mu));
  es.boundary = p.boundary();
  es.boundary_values.assign(es.count(), std::vector<double>(p.boundary().size(), 0.0));
  return es;
}

EigenSystem neumann_eigensystem(const WeightedGraph& g, const DomainPartition& p) {
  if (p.boundary().empty())
    throw std::invalid_argument("neumann_eigensystem: empty boundary");
  std::vector<double> mu;
  for (int x : p.interior()) mu.push_back(g.measure(x));
  EigenSystem es = decompose(EigenKind::Neumann, assemble_neg_laplacian_neumann(g, p),
                             p.interior(), std::move(mu));
  es.boundary = p.boundary();
  const Matrix c = neumann_boundary_elimination(g, p);
  es.boundary_values.assign(es.count(), std::vector<double>(p.boundary().size(), 0.0));
  for (int j = 0; j < es.count(); ++j) {
    auto ext = mat_vec(c, es.functions[j]);
    es.boundary_values[j] = std::move(ext);
  }
  return es;
}

HeatKernel heat_kernel(const EigenSystem& es, double t) {
  if (t < 0.0) throw std::invalid_argument("heat_kernel: t must be nonnegative");
  const int n = es.count();
  HeatKernel k;
  k.kind = es.kind;
  k.t = t;
  k.support = es.support;
  k.entries = Matrix(n, n);
  for (int j = 0; j < n; ++j) {
    const double e = std::exp(-es.values[j] * t);
    const auto& f = es.functions[j];
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) k.entries(x, y) += e * f[x] * f[y] * es.mu[y];
  }
  return k;
}

double eigen_residual(const Matrix& op, const EigenSystem& es) {
  double worst = 0.0;
  for (int j = 0; j < es.count(); ++j) {
    auto av = mat_vec(op, es.functions[j]);
    for (int i = 0; i < es.count(); ++i)
      worst = std::max(worst, std::abs(av[i] - es.values[j] * es.functions[j][i]));
  }
  return worst;
}

}  // namespace graphpde
