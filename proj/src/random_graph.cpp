#include "graphpde/random_graph.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace graphpde {

WeightedGraph make_random_connected_graph(std::mt19937_64& rng, int n, double extra_edge_prob,
                                          bool degree_measure) {
  if (n < 2) throw std::invalid_argument("make_random_connected_graph: need n >= 2");
  std::uniform_real_distribution<double> wdist(0.5, 2.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<WeightedGraph::Edge> edges;
  std::vector<std::vector<char>> present(n, std::vector<char>(n, 0));
  for (int v = 1; v < n; ++v) {
    std::uniform_int_distribution<int> pick(0, v - 1);
    const int u = pick(rng);
    edges.push_back({u, v, wdist(rng)});
    present[u][v] = present[v][u] = 1;
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!present[i][j] && unit(rng) < extra_edge_prob) {
        edges.push_back({i, j, wdist(rng)});
        present[i][j] = present[j][i] = 1;
      }

  std::vector<VertexId> ids(n);
  for (int i = 0; i < n; ++i) ids[i] = "v" + std::to_string(i + 1);
  std::vector<double> mu(n, 0.0);
  if (degree_measure) {
    for (const auto& e : edges) {
      mu[e.i] += e.w;
      mu[e.j] += e.w;
    }
  } else {
    for (auto& m : mu) m = wdist(rng);
  }
  return WeightedGraph(std::move(ids), std::move(mu), edges);
}

DomainPartition make_random_partition(std::mt19937_64& rng, const WeightedGraph& g,
                                      int max_tries) {
  const int n = g.size();
  if (n < 3) throw std::invalid_argument("make_random_partition: need at least 3 vertices");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    std::shuffle(order.begin(), order.end(), rng);
    std::uniform_int_distribution<int> bsize(1, n - 2);
    const int nb = bsize(rng);
    std::vector<DomainPartition::Role> roles(n, DomainPartition::Role::Interior);
    for (int k = 0; k < nb; ++k) roles[order[k]] = DomainPartition::Role::Boundary;
    DomainPartition p(g, roles);
    if (validate(g, &p).ok()) return p;
  }
  throw std::runtime_error("make_random_partition: no valid partition found");
}

GraphFunction random_function(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  GraphFunction u(n);
  for (auto& v : u) v = dist(rng);
  return u;
}

}  // namespace graphpde
