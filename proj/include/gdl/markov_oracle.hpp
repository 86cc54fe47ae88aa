#pragma once

#include <algorithm>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "gdl/graph.hpp"
#include "gdl/load_balancing.hpp"
#include "gdl/max_model.hpp"

namespace gdl {

using Rational = boost::multiprecision::cpp_rational;

enum class ChainModel {
  load_balancing_symmetric,
  max_synchronous,
  max_asynchronous
};

/// Exhaustively enumerated Markov chain on reachable valuations, with
/// exact rational transition probabilities. States are the literal value
/// vectors, not isomorphism classes.
struct ValuationChain {
  std::vector<Valuation> states;
  std::unordered_map<Valuation, int, ValuationHash> index_of;
  std::vector<std::vector<std::pair<int, Rational>>> transitions;
  int start = 0;
  ChainModel model = ChainModel::load_balancing_symmetric;
};

namespace detail {

/// Raw successor distribution of one state as (valuation, probability).
inline std::vector<std::pair<Valuation, Rational>> successors(
    const Graph& g, const Valuation& f, ChainModel model) {
  std::vector<std::pair<Valuation, Rational>> out;
  switch (model) {
    case ChainModel::load_balancing_symmetric: {
      const auto& edges = g.edges();
      Rational p(1, static_cast<long long>(edges.size()));
      for (const auto& [u, v] : edges) {
        Valuation next = f;
        if (next[u] != next[v]) {
          Value a = next[u], b = next[v];
          next[u] = a + (b > a ? 1 : -1);
          next[v] = b + (a > b ? 1 : -1);
        }
        out.push_back({std::move(next), p});
      }
      break;
    }
    case ChainModel::max_synchronous:
      out.push_back({sync_step(g, f), Rational(1)});
      break;
    case ChainModel::max_asynchronous: {
      Rational p(1, g.node_count());
      for (int v = 0; v < g.node_count(); ++v) {
        Valuation next = f;
        Value best = f[g.out(v)[0]];
        for (int w : g.out(v)) best = std::max(best, f[w]);
        next[v] = best;
        out.push_back({std::move(next), p});
      }
      break;
    }
  }
  return out;
}

}  // namespace detail

/// BFS over reachable valuations; merged duplicate targets keep the
/// probabilities exactly rational.
inline ValuationChain enumerate_chain(const Graph& g, const Valuation& f0,
                                      ChainModel model,
                                      int state_limit = 200000) {
  g.check_valuation(f0);
  if (model == ChainModel::load_balancing_symmetric) {
    if (g.directed())
      throw std::invalid_argument("load balancing runs on undirected graphs");
    if (g.edges().empty())
      throw std::invalid_argument("load-balancing chain requires an edge");
  } else {
    require_outdegrees(g);
  }
  ValuationChain chain;
  chain.model = model;
  chain.states.push_back(f0);
  chain.index_of[f0] = 0;
  std::queue<int> frontier;
  frontier.push(0);
  while (!frontier.empty()) {
    int s = frontier.front();
    frontier.pop();
    std::unordered_map<int, Rational> merged;
    for (auto& [next, p] : detail::successors(g, chain.states[s], model)) {
      auto it = chain.index_of.find(next);
      int idx;
      if (it == chain.index_of.end()) {
        idx = static_cast<int>(chain.states.size());
        if (idx >= state_limit)
          throw std::length_error("chain state limit exceeded at " +
                                  std::to_string(idx) + " states");
        chain.index_of[next] = idx;
        chain.states.push_back(std::move(next));
        frontier.push(idx);
      } else {
        idx = it->second;
      }
      merged[idx] += p;
    }
    if (static_cast<int>(chain.transitions.size()) <= s)
      chain.transitions.resize(chain.states.size());
    auto& row = chain.transitions[s];
    row.assign(merged.begin(), merged.end());
    std::sort(row.begin(), row.end());
  }
  chain.transitions.resize(chain.states.size());
  return chain;
}

/// The one-dimensional chain from the gambler's-ruin analysis: states
/// e_0..e_{n-1} track the distance between the +-1 pair; interior states
/// move each way with probability 1/(n-1), e_0 absorbs.
inline ValuationChain one_sided_gambler_chain(int n) {
  if (n < 2) throw std::invalid_argument("requires n >= 2");
  ValuationChain chain;
  chain.model = ChainModel::load_balancing_symmetric;
  for (int k = 0; k < n; ++k) {
    chain.states.push_back({k});
    chain.index_of[{k}] = k;
  }
  chain.transitions.resize(n);
  Rational step(1, n - 1);
  chain.transitions[0] = {{0, Rational(1)}};
  for (int k = 1; k < n; ++k) {
    auto& row = chain.transitions[k];
    row.push_back({k - 1, step});
    if (k + 1 < n) {
      if (n > 3) row.push_back({k, Rational(n - 3, n - 1)});
      row.push_back({k + 1, step});
    } else if (n > 2) {
      row.push_back({k, Rational(n - 2, n - 1)});
    }
  }
  chain.start = n - 1;
  return chain;
}

struct AbsorptionReport {
  std::vector<std::vector<int>> absorbing_classes;  // state index sets
  // reachable absorbing classes with exact reach probabilities from start
  std::vector<std::pair<int, Rational>> class_reach_probabilities;
  long long tail_length = -1;  // deterministic chains: convergence time
  long long period = -1;       // deterministic chains: absorbing class size
};

namespace detail {

inline Graph chain_digraph(const ValuationChain& chain) {
  std::vector<std::pair<int, int>> edges;
  for (int s = 0; s < static_cast<int>(chain.states.size()); ++s)
    for (const auto& [t, p] : chain.transitions[s])
      if (s != t) edges.push_back({s, t});
  return Graph::directed(static_cast<int>(chain.states.size()), edges);
}

/// Solve x(s) = base(s) + sum p(s,t) x(t) for transient states, where
/// absorbing states carry fixed values. Processes condensation SCC
/// blocks in reverse topological order with dense rational elimination.
inline std::vector<Rational> solve_backward(
    const ValuationChain& chain, const SccDecomposition& scc,
    const std::vector<char>& fixed, const std::vector<Rational>& fixed_value,
    const Rational& base) {
  const int n = static_cast<int>(chain.states.size());
  std::vector<Rational> x(n);
  for (int s = 0; s < n; ++s)
    if (fixed[s]) x[s] = fixed_value[s];
  // reverse topological order = successors first
  for (auto it = scc.topological_order.rbegin();
       it != scc.topological_order.rend(); ++it) {
    const auto& block = scc.components[*it];
    if (fixed[block.front()]) continue;
    const int b = static_cast<int>(block.size());
    std::vector<int> pos(n, -1);
    for (int i = 0; i < b; ++i) pos[block[i]] = i;
    // rows: x_i - sum_{j in block} p_ij x_j = base + sum_{out} p x
    std::vector<std::vector<Rational>> a(b, std::vector<Rational>(b + 1));
    for (int i = 0; i < b; ++i) {
      a[i][i] = 1;
      a[i][b] = base;
      for (const auto& [t, p] : chain.transitions[block[i]]) {
        if (pos[t] >= 0)
          a[i][pos[t]] -= p;
        else
          a[i][b] += p * x[t];
      }
    }
    for (int col = 0; col < b; ++col) {
      int pivot = -1;
      for (int row = col; row < b; ++row)
        if (a[row][col] != 0) {
          pivot = row;
          break;
        }
      if (pivot < 0) throw std::runtime_error("singular transient block");
      std::swap(a[col], a[pivot]);
      for (int row = 0; row < b; ++row) {
        if (row == col || a[row][col] == 0) continue;
        Rational factor = a[row][col] / a[col][col];
        for (int j = col; j <= b; ++j) a[row][j] -= factor * a[col][j];
      }
    }
    for (int i = 0; i < b; ++i) x[block[i]] = a[i][b] / a[i][i];
  }
  return x;
}

}  // namespace detail

/// Condense the chain: sink components are the absorbing classes. For
/// deterministic chains the tail from the start state and the class size
/// give convergence time and period; reach probabilities are solved
/// exactly for stochastic chains.
inline AbsorptionReport absorbing_analysis(const ValuationChain& chain) {
  AbsorptionReport report;
  Graph digraph = detail::chain_digraph(chain);
  auto scc = scc_decompose(digraph);
  const int n = static_cast<int>(chain.states.size());
  std::vector<char> is_sink_component(scc.components.size(), 1);
  for (const auto& [a, b] : scc.condensation_edges) is_sink_component[a] = 0;
  std::vector<int> class_index(scc.components.size(), -1);
  for (std::size_t c = 0; c < scc.components.size(); ++c)
    if (is_sink_component[c]) {
      class_index[c] = static_cast<int>(report.absorbing_classes.size());
      report.absorbing_classes.push_back(scc.components[c]);
    }

  bool deterministic = true;
  for (const auto& row : chain.transitions)
    deterministic &= row.size() == 1;
  if (deterministic) {
    // follow the unique walk from start until it enters a sink component
    int s = chain.start;
    long long steps = 0;
    while (!is_sink_component[scc.component_id[s]]) {
      s = chain.transitions[s].front().first;
      ++steps;
    }
    report.tail_length = steps;
    report.period = static_cast<long long>(
        scc.components[scc.component_id[s]].size());
    report.class_reach_probabilities = {
        {class_index[scc.component_id[s]], Rational(1)}};
    return report;
  }

  std::vector<char> fixed(n, 0);
  for (const auto& cls : report.absorbing_classes)
    for (int s : cls) fixed[s] = 1;
  for (std::size_t c = 0; c < report.absorbing_classes.size(); ++c) {
    std::vector<Rational> value(n);
    for (int s : report.absorbing_classes[c]) value[s] = 1;
    auto x = detail::solve_backward(chain, scc, fixed, value, Rational(0));
    if (x[chain.start] != 0)
      report.class_reach_probabilities.push_back(
          {static_cast<int>(c), x[chain.start]});
  }
  return report;
}

/// Exact expected number of steps from the start state until absorption.
inline Rational expected_absorption_time(const ValuationChain& chain) {
  Graph digraph = detail::chain_digraph(chain);
  auto scc = scc_decompose(digraph);
  std::vector<char> is_sink_component(scc.components.size(), 1);
  for (const auto& [a, b] : scc.condensation_edges) is_sink_component[a] = 0;
  const int n = static_cast<int>(chain.states.size());
  std::vector<char> fixed(n, 0);
  for (std::size_t c = 0; c < scc.components.size(); ++c)
    if (is_sink_component[c])
      for (int s : scc.components[c]) fixed[s] = 1;
  // structural absorption check: every component reaches a sink
  std::vector<char> reaches(scc.components.size(), 0);
  for (auto it = scc.topological_order.rbegin();
       it != scc.topological_order.rend(); ++it) {
    if (is_sink_component[*it]) reaches[*it] = 1;
  }
  for (auto it = scc.topological_order.rbegin();
       it != scc.topological_order.rend(); ++it)
    for (const auto& [a, b] : scc.condensation_edges)
      if (a == *it && reaches[b]) reaches[a] = 1;
  for (std::size_t c = 0; c < scc.components.size(); ++c)
    if (!reaches[c])
      throw std::runtime_error("state cannot reach any absorbing class");
  std::vector<Rational> zero(n);
  auto x = detail::solve_backward(chain, scc, fixed, zero, Rational(1));
  return x[chain.start];
}

namespace detail {

inline void cycle_dfs(const Graph& g, int root, int v, int depth,
                      std::vector<char>& on_path, std::set<int>& lengths) {
  for (int w : g.out(v)) {
    if (w == root) {
      lengths.insert(depth + 1);
    } else if (w > root && !on_path[w]) {
      on_path[w] = 1;
      cycle_dfs(g, root, w, depth + 1, on_path, lengths);
      on_path[w] = 0;
    }
  }
}

}  // namespace detail

/// Exhaustive simple-cycle length enumeration (DFS rooted at each node,
/// restricted to ids >= root so every cycle is found exactly once).
inline std::set<int> simple_cycle_lengths(const Graph& g,
                                          int node_limit = 16) {
  if (g.node_count() > node_limit)
    throw std::length_error("graph too large for cycle enumeration");
  std::set<int> lengths;
  std::vector<char> on_path(g.node_count(), 0);
  for (int root = 0; root < g.node_count(); ++root) {
    on_path[root] = 1;
    detail::cycle_dfs(g, root, root, 0, on_path, lengths);
    on_path[root] = 0;
  }
  return lengths;
}

/// Exact hitting times of the uniform-random-neighbor walk into target;
/// empty optional for nodes that cannot reach it.
inline std::vector<std::optional<Rational>> walk_hitting_times(const Graph& g,
                                                               int target) {
  g.check_node(target);
  const int n = g.node_count();
  // nodes that can reach the target, via reverse BFS
  std::vector<char> can_reach(n, 0);
  std::queue<int> q;
  can_reach[target] = 1;
  q.push(target);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int u : g.in(v))
      if (!can_reach[u]) {
        can_reach[u] = 1;
        q.push(u);
      }
  }
  std::vector<int> idx(n, -1);
  std::vector<int> nodes;
  for (int v = 0; v < n; ++v)
    if (can_reach[v] && v != target) {
      idx[v] = static_cast<int>(nodes.size());
      nodes.push_back(v);
    }
  const int m = static_cast<int>(nodes.size());
  std::vector<std::vector<Rational>> a(m, std::vector<Rational>(m + 1));
  for (int i = 0; i < m; ++i) {
    int v = nodes[i];
    const auto& adj = g.out(v);
    if (adj.empty()) throw std::invalid_argument("walk stuck: outdegree 0");
    a[i][i] = 1;
    a[i][m] = 1;
    Rational p(1, static_cast<long long>(adj.size()));
    for (int w : adj) {
      if (w == target) continue;
      if (!can_reach[w])
        throw std::runtime_error("walk can leave the reaching set");
      a[i][idx[w]] -= p;
    }
  }
  for (int col = 0; col < m; ++col) {
    int pivot = -1;
    for (int row = col; row < m; ++row)
      if (a[row][col] != 0) {
        pivot = row;
        break;
      }
    if (pivot < 0) throw std::runtime_error("singular hitting-time system");
    std::swap(a[col], a[pivot]);
    for (int row = 0; row < m; ++row) {
      if (row == col || a[row][col] == 0) continue;
      Rational factor = a[row][col] / a[col][col];
      for (int j = col; j <= m; ++j) a[row][j] -= factor * a[col][j];
    }
  }
  std::vector<std::optional<Rational>> result(n);
  result[target] = Rational(0);
  for (int i = 0; i < m; ++i) result[nodes[i]] = a[i][m] / a[i][i];
  return result;
}

}  // namespace gdl
