#pragma once

#include <random>

#include "graphpde/graph.hpp"

namespace graphpde {

// Random connected graph: a random spanning tree plus extra edges, weights
// uniform in [0.5, 2]. measure is Σ_y ω_xy when degree_measure, otherwise
// uniform in [0.5, 2].
WeightedGraph make_random_connected_graph(std::mt19937_64& rng, int n,
                                          double extra_edge_prob = 0.3,
                                          bool degree_measure = true);

// Random interior/boundary split that passes validation (boundary nonempty,
// every boundary vertex touching the interior, interior connected).
DomainPartition make_random_partition(std::mt19937_64& rng, const WeightedGraph& g,
                                      int max_tries = 500);

GraphFunction random_function(std::mt19937_64& rng, int n, double lo, double hi);

}  // namespace graphpde
