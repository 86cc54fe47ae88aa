#pragma once

#include <algorithm>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gdl/random.hpp"

namespace gdl {

using Value = long long;
/// Per-node integer opinion at one time step. Length must equal the
/// node count of the graph it is bound to.
using Valuation = std::vector<Value>;

/// Immutable simple graph. Undirected graphs are stored as symmetric
/// directed pairs so the same adjacency serves both models; edge_count
/// reports the undirected count when directed() is false.
class Graph {
 public:
  static Graph directed(int node_count,
                        const std::vector<std::pair<int, int>>& edges) {
    return Graph(node_count, edges, /*directed=*/true);
  }

  static Graph undirected(int node_count,
                          const std::vector<std::pair<int, int>>& edges) {
    return Graph(node_count, edges, /*directed=*/false);
  }

  int node_count() const { return n_; }
  long long edge_count() const { return static_cast<long long>(edges_.size()); }
  bool directed() const { return directed_; }

  const std::vector<int>& out(int v) const {
    check_node(v);
    return out_[v];
  }
  const std::vector<int>& in(int v) const {
    check_node(v);
    return in_[v];
  }

  /// Canonical edge list: ordered pairs for directed graphs, pairs with
  /// u <= v stored once for undirected graphs.
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  bool has_edge(int u, int v) const {
    check_node(u);
    check_node(v);
    const auto& adj = out_[u];
    return std::binary_search(adj.begin(), adj.end(), v);
  }

  void check_node(int v) const {
    if (v < 0 || v >= n_)
      throw std::invalid_argument("invalid node id " + std::to_string(v));
  }

  void check_valuation(const Valuation& f) const {
    if (static_cast<int>(f.size()) != n_)
      throw std::invalid_argument("valuation length does not match node count");
  }

 private:
  Graph(int node_count, std::vector<std::pair<int, int>> edges, bool directed)
      : n_(node_count), directed_(directed) {
    if (node_count < 0) throw std::invalid_argument("negative node count");
    for (auto& [u, v] : edges) {
      if (u < 0 || u >= n_ || v < 0 || v >= n_)
        throw std::invalid_argument("edge endpoint out of range");
      if (u == v && !directed)
        throw std::invalid_argument("self-loop in undirected graph");
      if (!directed && u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges_ = std::move(edges);
    out_.assign(n_, {});
    in_.assign(n_, {});
    for (const auto& [u, v] : edges_) {
      out_[u].push_back(v);
      in_[v].push_back(u);
      if (!directed_ && u != v) {
        out_[v].push_back(u);
        in_[u].push_back(v);
      }
    }
    for (auto& a : out_) std::sort(a.begin(), a.end());
    for (auto& a : in_) std::sort(a.begin(), a.end());
  }

  int n_;
  bool directed_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;
};

/// k-step neighborhood: the set of nodes reachable by exactly k out-edge
/// steps (k = 0 gives {v}). Unreachable combinations yield the empty set.
inline std::vector<int> neighborhood(const Graph& g, int v, int k) {
  g.check_node(v);
  if (k < 0) throw std::invalid_argument("negative step count");
  std::vector<int> current{v};
  std::vector<char> mark(g.node_count(), 0);
  for (int step = 0; step < k; ++step) {
    std::vector<int> next;
    for (int u : current)
      for (int w : g.out(u))
        if (!mark[w]) {
          mark[w] = 1;
          next.push_back(w);
        }
    for (int w : next) mark[w] = 0;
    std::sort(next.begin(), next.end());
    current = std::move(next);
    if (current.empty()) break;
  }
  return current;
}

/// BFS distances from src along out-edges; -1 marks unreachable nodes.
inline std::vector<int> bfs_distances(const Graph& g, int src) {
  g.check_node(src);
  std::vector<int> dist(g.node_count(), -1);
  std::queue<int> q;
  dist[src] = 0;
  q.push(src);
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int w : g.out(u))
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        q.push(w);
      }
  }
  return dist;
}

/// Shortest directed distance; empty optional when v is unreachable from u.
inline std::optional<int> shortest_distance(const Graph& g, int u, int v) {
  g.check_node(v);
  auto dist = bfs_distances(g, u);
  if (dist[v] < 0) return std::nullopt;
  return dist[v];
}

/// Longest finite shortest distance, by BFS from every node.
inline int diameter(const Graph& g) {
  if (g.node_count() == 0) throw std::invalid_argument("empty graph");
  int best = 0;
  for (int s = 0; s < g.node_count(); ++s) {
    auto dist = bfs_distances(g, s);
    for (int d : dist) best = std::max(best, d);
  }
  return best;
}

/// Lower bound on the diameter from `count` seeded-random BFS sources.
/// Cheap estimate for graphs too large for the exact all-pairs sweep.
inline int diameter_sampled(const Graph& g, int count, std::uint64_t seed) {
  if (g.node_count() == 0) throw std::invalid_argument("empty graph");
  Rng rng(seed);
  int best = 0;
  for (int i = 0; i < count; ++i) {
    int s = static_cast<int>(rng.below(g.node_count()));
    auto dist = bfs_distances(g, s);
    for (int d : dist) best = std::max(best, d);
  }
  return best;
}

/// Weakly connected components (edge direction ignored), each sorted.
inline std::vector<std::vector<int>> connected_components(const Graph& g) {
  std::vector<int> comp(g.node_count(), -1);
  std::vector<std::vector<int>> result;
  for (int s = 0; s < g.node_count(); ++s) {
    if (comp[s] >= 0) continue;
    int id = static_cast<int>(result.size());
    result.emplace_back();
    std::queue<int> q;
    comp[s] = id;
    q.push(s);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      result[id].push_back(u);
      for (const auto& adj : {g.out(u), g.in(u)})
        for (int w : adj)
          if (comp[w] < 0) {
            comp[w] = id;
            q.push(w);
          }
    }
    std::sort(result[id].begin(), result[id].end());
  }
  return result;
}

/// Per-node component ids for the weak components, 0-based.
inline std::vector<int> component_ids(const Graph& g) {
  auto comps = connected_components(g);
  std::vector<int> id(g.node_count(), -1);
  for (int c = 0; c < static_cast<int>(comps.size()); ++c)
    for (int v : comps[c]) id[v] = c;
  return id;
}

struct SccDecomposition {
  std::vector<int> component_id;               // per node
  std::vector<std::vector<int>> components;    // members, sorted
  std::vector<std::pair<int, int>> condensation_edges;
  std::vector<int> topological_order;          // component ids, sources first
};

/// Tarjan's algorithm, iterative. Components come out in reverse
/// topological order, which we invert for topological_order.
inline SccDecomposition scc_decompose(const Graph& g) {
  const int n = g.node_count();
  SccDecomposition out;
  out.component_id.assign(n, -1);
  std::vector<int> index(n, -1), low(n, 0), on_stack(n, 0);
  std::vector<int> stack;
  int counter = 0;

  struct Frame {
    int v;
    std::size_t next;
  };
  for (int root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& fr = call.back();
      int v = fr.v;
      if (fr.next < g.out(v).size()) {
        int w = g.out(v)[fr.next++];
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
      } else {
        if (low[v] == index[v]) {
          int id = static_cast<int>(out.components.size());
          out.components.emplace_back();
          int w;
          do {
            w = stack.back();
            stack.pop_back();
            on_stack[w] = 0;
            out.component_id[w] = id;
            out.components[id].push_back(w);
          } while (w != v);
          std::sort(out.components[id].begin(), out.components[id].end());
        }
        call.pop_back();
        if (!call.empty())
          low[call.back().v] = std::min(low[call.back().v], low[v]);
      }
    }
  }

  std::set<std::pair<int, int>> cedges;
  for (int u = 0; u < n; ++u)
    for (int w : g.out(u)) {
      int a = out.component_id[u], b = out.component_id[w];
      if (a != b) cedges.insert({a, b});
    }
  out.condensation_edges.assign(cedges.begin(), cedges.end());
  // Tarjan emits components in reverse topological order.
  int c = static_cast<int>(out.components.size());
  out.topological_order.resize(c);
  for (int i = 0; i < c; ++i) out.topological_order[i] = c - 1 - i;
  return out;
}

inline bool strongly_connected(const Graph& g) {
  if (g.node_count() == 0) return false;
  return scc_decompose(g).components.size() == 1;
}

struct BfsLayering {
  int source = 0;
  std::vector<int> layer_of;             // -1 marks unreachable
  std::vector<std::vector<int>> layers;  // Lambda_0, Lambda_1, ...
  std::optional<std::pair<int, int>> intra_layer_edge;
  bool bipartite = true;
};

/// BFS layers from source on an undirected graph; the bipartite flag is
/// false exactly when some edge joins two nodes of the same layer.
inline BfsLayering bfs_layering(const Graph& g, int source,
                                bool strict = false) {
  if (g.directed())
    throw std::invalid_argument("bfs_layering expects an undirected graph");
  BfsLayering out;
  out.source = source;
  out.layer_of = bfs_distances(g, source);
  int depth = 0;
  for (int d : out.layer_of) depth = std::max(depth, d);
  out.layers.assign(depth + 1, {});
  int reached = 0;
  for (int v = 0; v < g.node_count(); ++v)
    if (out.layer_of[v] >= 0) {
      out.layers[out.layer_of[v]].push_back(v);
      ++reached;
    }
  if (strict && reached != g.node_count())
    throw std::invalid_argument("source does not reach the whole graph");
  for (const auto& [u, v] : g.edges())
    if (out.layer_of[u] >= 0 && out.layer_of[u] == out.layer_of[v]) {
      out.intra_layer_edge = {u, v};
      out.bipartite = false;
      break;
    }
  return out;
}

/// Valuations are equivalent when every connected component carries the
/// same multiset of values under both.
inline bool valuations_isomorphic(const Graph& g, const Valuation& a,
                                  const Valuation& b) {
  g.check_valuation(a);
  g.check_valuation(b);
  for (const auto& comp : connected_components(g)) {
    std::vector<Value> ma, mb;
    for (int v : comp) {
      ma.push_back(a[v]);
      mb.push_back(b[v]);
    }
    std::sort(ma.begin(), ma.end());
    std::sort(mb.begin(), mb.end());
    if (ma != mb) return false;
  }
  return true;
}

struct RepairResult {
  Graph graph;
  std::vector<int> removed;        // original ids, ascending
  std::vector<int> kept_original;  // new id -> original id
};

/// Iteratively delete outdegree-0 nodes (and incident edges) until every
/// surviving node has an out-edge; survivors are relabeled densely.
inline RepairResult repair_outdegree(const Graph& g) {
  if (!g.directed())
    throw std::invalid_argument("repair_outdegree expects a directed graph");
  const int n = g.node_count();
  std::vector<int> outdeg(n, 0);
  std::vector<char> alive(n, 1);
  for (int v = 0; v < n; ++v) outdeg[v] = static_cast<int>(g.out(v).size());
  std::queue<int> dead;
  for (int v = 0; v < n; ++v)
    if (outdeg[v] == 0) dead.push(v);
  while (!dead.empty()) {
    int v = dead.front();
    dead.pop();
    if (!alive[v]) continue;
    alive[v] = 0;
    for (int u : g.in(v))
      if (alive[u] && --outdeg[u] == 0) dead.push(u);
  }
  RepairResult out{Graph::directed(0, {}), {}, {}};
  std::vector<int> new_id(n, -1);
  for (int v = 0; v < n; ++v) {
    if (alive[v]) {
      new_id[v] = static_cast<int>(out.kept_original.size());
      out.kept_original.push_back(v);
    } else {
      out.removed.push_back(v);
    }
  }
  std::vector<std::pair<int, int>> edges;
  for (const auto& [u, v] : g.edges())
    if (alive[u] && alive[v]) edges.push_back({new_id[u], new_id[v]});
  out.graph =
      Graph::directed(static_cast<int>(out.kept_original.size()), edges);
  return out;
}

}  // namespace gdl
