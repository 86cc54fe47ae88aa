#pragma once

// Shared construction helpers for the test suite.

#include <numeric>
#include <vector>

#include "gdl/gdl.hpp"

namespace testutil {

/// Random undirected graph that is connected: seeded retries over
/// Erdos-Renyi draws with p chosen fairly dense.
inline gdl::Graph random_connected_graph(int n, std::uint64_t seed,
                                         double p = 0.5) {
  return gdl::erdos_renyi_until(n, p, /*directed=*/false, seed, 10000,
                                [](const gdl::Graph& g) {
                                  return gdl::connected_components(g).size() ==
                                         1;
                                });
}

/// Random strongly connected digraph via seeded retries.
inline gdl::Graph random_strongly_connected(int n, std::uint64_t seed,
                                            double p = 0.5) {
  return gdl::erdos_renyi_until(n, p, /*directed=*/true, seed, 10000,
                                [](const gdl::Graph& g) {
                                  return gdl::strongly_connected(g);
                                });
}

/// Strongly connected digraph whose cycle lengths are all multiples of
/// layers: nodes are arranged in `layers` groups and edges only go from
/// group i to group i+1 (mod layers), so the cycle gcd is a multiple of
/// layers. Used to exercise periods > 1.
inline gdl::Graph layered_strongly_connected(int layers, int per_layer,
                                             std::uint64_t seed, double p = 0.6) {
  gdl::Rng rng(seed);
  const int n = layers * per_layer;
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<std::pair<int, int>> edges;
    auto node = [&](int layer, int i) { return layer * per_layer + i; };
    for (int l = 0; l < layers; ++l)
      for (int i = 0; i < per_layer; ++i)
        for (int j = 0; j < per_layer; ++j)
          if (rng.bernoulli(p))
            edges.push_back({node(l, i), node((l + 1) % layers, j)});
    gdl::Graph g = gdl::Graph::directed(n, edges);
    if (gdl::strongly_connected(g)) return g;
  }
  throw std::runtime_error("layered graph retries exhausted");
}

inline gdl::Valuation random_valuation(int n, long long lo, long long hi,
                                       std::uint64_t seed) {
  gdl::Rng rng(seed);
  gdl::Valuation f(n);
  for (auto& x : f) x = rng.range(lo, hi);
  return f;
}

/// The worked 8-node instance built from a 3-cycle and a 6-cycle joined
/// at node 0 (the only node with two out-edges); converges at t = 7 with
/// period 3.
inline gdl::Instance two_cycle_instance() {
  gdl::Graph g = gdl::Graph::directed(8, {{0, 1},
                                          {1, 2},
                                          {2, 3},
                                          {3, 4},
                                          {4, 5},
                                          {5, 0},
                                          {0, 6},
                                          {6, 7},
                                          {7, 0}});
  return gdl::Instance{std::move(g), {3, 1, 1, 5, 6, 1, 4, 2},
                       "two_cycle", std::nullopt};
}

/// 5-node instance with sum 23 and square-sum gap 5; absorbs into two 4s
/// and three 5s.
inline gdl::Instance motivating_instance() {
  gdl::Graph g = gdl::Graph::undirected(
      5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 2}, {1, 3}});
  return gdl::Instance{std::move(g), {2, 6, 4, 5, 6}, "motivating",
                       std::nullopt};
}

}  // namespace testutil
