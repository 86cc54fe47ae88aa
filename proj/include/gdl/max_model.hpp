#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "gdl/graph.hpp"
#include "gdl/random.hpp"

namespace gdl {

inline void require_outdegrees(const Graph& g) {
  for (int v = 0; v < g.node_count(); ++v)
    if (g.out(v).empty())
      throw std::invalid_argument("node " + std::to_string(v) +
                                  " has outdegree 0");
}

/// One synchronous step: every node replaces its value with the max over
/// its out-neighbors' previous values (its own value is discarded; for
/// undirected graphs the neighbor set excludes the node itself).
inline Valuation sync_step(const Graph& g, const Valuation& f) {
  g.check_valuation(f);
  require_outdegrees(g);
  Valuation next(g.node_count());
  for (int v = 0; v < g.node_count(); ++v) {
    Value best = f[g.out(v)[0]];
    for (int w : g.out(v)) best = std::max(best, f[w]);
    next[v] = best;
  }
  return next;
}

/// f_{t+k}(v) as the max of f_t over the k-step neighborhood of v.
inline Value k_step_max(const Graph& g, const Valuation& f, int v, int k) {
  g.check_valuation(f);
  require_outdegrees(g);
  auto hood = neighborhood(g, v, k);
  Value best = f[hood.front()];
  for (int w : hood) best = std::max(best, f[w]);
  return best;
}

struct MaxTrajectory {
  long long convergence_time = 0;  // tail length before the limit cycle
  long long period = 1;
  std::vector<Valuation> limit_cycle;  // f_T, f_{T+1}, ..., length = period
  bool capped = false;
};

struct ValuationHash {
  std::size_t operator()(const Valuation& f) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    for (Value x : f) h = mix64(h ^ static_cast<std::uint64_t>(x));
    return static_cast<std::size_t>(h);
  }
};

/// Step synchronously until a state recurs; hashing the full vectors
/// with equality confirmation makes false merges impossible.
inline MaxTrajectory detect_convergence(const Graph& g, const Valuation& f0,
                                        long long max_steps = 1 << 22) {
  g.check_valuation(f0);
  MaxTrajectory out;
  std::unordered_map<Valuation, long long, ValuationHash> first_seen;
  std::vector<Valuation> history{f0};
  first_seen[f0] = 0;
  Valuation f = f0;
  for (long long t = 1; t <= max_steps; ++t) {
    f = sync_step(g, f);
    auto it = first_seen.find(f);
    if (it != first_seen.end()) {
      out.convergence_time = it->second;
      out.period = t - it->second;
      out.limit_cycle.assign(history.begin() + it->second, history.end());
      return out;
    }
    first_seen[f] = t;
    history.push_back(f);
  }
  out.capped = true;
  return out;
}

/// GCD of all simple cycle lengths of a strongly connected digraph,
/// computed without cycle enumeration: with BFS distances d from any
/// root, g = gcd over edges (u, v) of |d(u) + 1 - d(v)|.
inline int cycle_gcd(const Graph& g) {
  if (!strongly_connected(g))
    throw std::invalid_argument("cycle_gcd requires a strongly connected graph");
  auto dist = bfs_distances(g, 0);
  long long acc = 0;
  for (int u = 0; u < g.node_count(); ++u)
    for (int v : g.out(u))
      acc = std::gcd(acc, std::abs(static_cast<long long>(dist[u]) + 1 - dist[v]));
  return static_cast<int>(acc);
}

/// Partition into the g residue classes that the stabilized maximum
/// rotates through; labels are distance residues from node 0.
struct ClassColoring {
  int g = 1;
  std::vector<int> class_of;
  std::vector<std::vector<int>> class_members;
  std::vector<Value> class_max;
};

inline ClassColoring class_coloring(const Graph& graph, const Valuation& f0) {
  graph.check_valuation(f0);
  ClassColoring out;
  out.g = cycle_gcd(graph);
  auto dist = bfs_distances(graph, 0);
  out.class_of.resize(graph.node_count());
  out.class_members.assign(out.g, {});
  out.class_max.assign(out.g, 0);
  for (int v = 0; v < graph.node_count(); ++v) {
    out.class_of[v] = dist[v] % out.g;
    out.class_members[out.class_of[v]].push_back(v);
  }
  for (int r = 0; r < out.g; ++r) {
    Value best = f0[out.class_members[r].front()];
    for (int v : out.class_members[r]) best = std::max(best, f0[v]);
    out.class_max[r] = best;
  }
  return out;
}

struct UndirectedComponentPrediction {
  std::vector<int> members;
  bool bipartite = false;
  Value limit_max = 0;     // m: max over the side containing the reference max
  Value other_max = 0;     // m': max over the opposite side (bipartite only)
  long long period = 1;
  std::vector<int> side_of;  // per member index: 0 = m side, 1 = m' side
};

struct UndirectedPrediction {
  long long period = 1;  // lcm over components, i.e. 2 iff any side differs
  long long bound = 0;   // 2 * diameter convergence bound
  std::vector<UndirectedComponentPrediction> components;
};

/// Closed-form limit for the undirected sync model: non-bipartite
/// components settle on their max with period 1; bipartite components
/// alternate the two side maxima m, m' with period 2 iff m != m'.
inline UndirectedPrediction predict_undirected(const Graph& g,
                                               const Valuation& f0) {
  if (g.directed())
    throw std::invalid_argument("predict_undirected expects undirected input");
  g.check_valuation(f0);
  UndirectedPrediction out;
  for (auto& members : connected_components(g)) {
    if (members.size() == 1)
      throw std::invalid_argument("isolated node violates the outdegree assumption");
    UndirectedComponentPrediction c;
    c.members = members;
    // root the layering at a node holding the component maximum
    int root = members[0];
    for (int v : members)
      if (f0[v] > f0[root]) root = v;
    auto layering = bfs_layering(g, root);
    c.bipartite = layering.bipartite;
    if (!c.bipartite) {
      c.limit_max = f0[root];
      c.other_max = f0[root];
      c.period = 1;
      c.side_of.assign(members.size(), 0);
    } else {
      // B = even layers from the maximum node, B' = odd layers
      Value m = f0[root], mp = f0[root];
      bool seen_other = false;
      c.side_of.resize(members.size());
      for (std::size_t i = 0; i < members.size(); ++i) {
        int v = members[i];
        c.side_of[i] = layering.layer_of[v] % 2;
        if (c.side_of[i] == 0) {
          m = std::max(m, f0[v]);
        } else {
          mp = seen_other ? std::max(mp, f0[v]) : f0[v];
          seen_other = true;
        }
      }
      c.limit_max = m;
      c.other_max = seen_other ? mp : m;
      c.period = c.limit_max == c.other_max ? 1 : 2;
    }
    if (c.period == 2) out.period = 2;
    out.components.push_back(std::move(c));
  }
  out.bound = 2 * diameter(g);
  return out;
}

/// Stabilized schedule on a strongly connected graph: at phase r every
/// node u holds class_max((class_of(u) + r) mod g); the period is the
/// smallest rotation fixing the class-max sequence.
struct ScPrediction {
  ClassColoring coloring;
  long long period = 1;

  Value value_at(int node, long long phase) const {
    long long g = coloring.g;
    return coloring.class_max[(coloring.class_of[node] + phase % g) % g];
  }
};

inline ScPrediction predict_strongly_connected(const Graph& g,
                                               const Valuation& f0) {
  ScPrediction out;
  out.coloring = class_coloring(g, f0);
  int n = out.coloring.g;
  for (int p = 1; p <= n; ++p) {
    if (n % p != 0) continue;
    bool fixed = true;
    for (int i = 0; i < n && fixed; ++i)
      fixed = out.coloring.class_max[i] == out.coloring.class_max[(i + p) % n];
    if (fixed) {
      out.period = p;
      break;
    }
  }
  return out;
}

/// f0(v) = class_of(v) mod p: immediately absorbed with period exactly p
/// for any divisor p of the cycle gcd.
inline Valuation construct_period_valuation(const Graph& g, int p) {
  int gg = cycle_gcd(g);
  if (p < 1 || gg % p != 0)
    throw std::invalid_argument("p must divide the cycle gcd");
  Valuation scratch(g.node_count(), 0);
  auto coloring = class_coloring(g, scratch);
  Valuation f(g.node_count());
  for (int v = 0; v < g.node_count(); ++v) f[v] = coloring.class_of[v] % p;
  return f;
}

struct AsyncResult {
  long long convergence_time = 0;
  Valuation final_valuation;
  double final_value_ratio = 1.0;
  bool capped = false;
};

/// Asynchronous model: one uniformly random node per step takes the max
/// of its out-neighbors. Stops at a fixpoint, detected by keeping a
/// count of nodes that differ from their out-neighborhood max.
inline AsyncResult async_simulate(const Graph& g, const Valuation& f0,
                                  std::uint64_t seed,
                                  long long max_steps = 1000000000LL) {
  g.check_valuation(f0);
  require_outdegrees(g);
  const int n = g.node_count();
  Valuation f = f0;
  auto neighbor_max = [&](int v) {
    Value best = f[g.out(v)[0]];
    for (int w : g.out(v)) best = std::max(best, f[w]);
    return best;
  };
  std::vector<char> unstable(n, 0);
  int unstable_count = 0;
  for (int v = 0; v < n; ++v)
    if (f[v] != neighbor_max(v)) {
      unstable[v] = 1;
      ++unstable_count;
    }
  auto refresh = [&](int v) {
    bool now = f[v] != neighbor_max(v);
    if (now != static_cast<bool>(unstable[v])) {
      unstable[v] = now;
      unstable_count += now ? 1 : -1;
    }
  };
  Rng rng(seed);
  AsyncResult out;
  Value initial_max = *std::max_element(f.begin(), f.end());
  long long t = 0;
  while (unstable_count > 0) {
    if (t >= max_steps) {
      out.capped = true;
      break;
    }
    int v = static_cast<int>(rng.below(n));
    Value nv = neighbor_max(v);
    ++t;
    if (nv != f[v]) {
      f[v] = nv;
      refresh(v);
      for (int u : g.in(v)) refresh(u);
    } else {
      refresh(v);
    }
  }
  out.convergence_time = t;
  out.final_valuation = f;
  auto scc = scc_decompose(g);
  std::size_t largest = 0;
  for (std::size_t i = 1; i < scc.components.size(); ++i)
    if (scc.components[i].size() > scc.components[largest].size()) largest = i;
  Value reached = f[scc.components[largest].front()];
  for (int v : scc.components[largest]) reached = std::max(reached, f[v]);
  out.final_value_ratio =
      initial_max == 0 ? 1.0
                       : static_cast<double>(reached) /
                             static_cast<double>(initial_max);
  return out;
}

}  // namespace gdl
