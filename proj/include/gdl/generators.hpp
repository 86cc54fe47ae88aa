#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gdl/graph.hpp"
#include "gdl/load_balancing.hpp"
#include "gdl/random.hpp"

namespace gdl {

/// A graph paired with an initial valuation.
struct Instance {
  Graph graph;
  Valuation valuation;
  std::string label;
  std::optional<std::uint64_t> seed;
};

/// Outcome of the (k, b) selection for a target square-sum gap q:
/// k nodes get uniform values in [-b, b], expected gap k*b*(b+1)/6.
struct GapTarget {
  long long q = 0;
  double relative_tolerance = 0.0;  // 0 means exact match required
  long long chosen_k = 0;
  long long chosen_b = 0;
};

inline Graph erdos_renyi(int n, double p, bool directed, std::uint64_t seed) {
  if (n < 0) throw std::invalid_argument("negative n");
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("p outside [0, 1]");
  Rng rng(seed);
  std::vector<std::pair<int, int>> edges;
  if (directed) {
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        if (u != v && rng.bernoulli(p)) edges.push_back({u, v});
    return Graph::directed(n, edges);
  }
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.bernoulli(p)) edges.push_back({u, v});
  return Graph::undirected(n, edges);
}

/// Regenerate with derived seeds until `ok` accepts the sample (the
/// retry policy used to enforce model preconditions on random graphs).
inline Graph erdos_renyi_until(int n, double p, bool directed,
                               std::uint64_t seed, int retry_cap,
                               const std::function<bool(const Graph&)>& ok) {
  for (int attempt = 0; attempt < retry_cap; ++attempt) {
    Graph g = erdos_renyi(n, p, directed, Rng::derive(seed, attempt));
    if (ok(g)) return g;
  }
  throw std::runtime_error("random graph retry cap exhausted");
}

/// Preferential attachment: m isolated seed nodes, then each new node
/// attaches to m distinct existing nodes drawn proportionally to degree
/// (degree-0 nodes carry weight 1). Always m(n - m) edges.
inline Graph barabasi_albert(int n, int m, std::uint64_t seed) {
  if (m < 1 || m >= n) throw std::invalid_argument("require 1 <= m < n");
  Rng rng(seed);
  std::vector<long long> degree(n, 0);
  std::vector<std::pair<int, int>> edges;
  for (int v = m; v < n; ++v) {
    std::vector<int> chosen;
    while (static_cast<int>(chosen.size()) < m) {
      long long total = 0;
      for (int u = 0; u < v; ++u) total += std::max(degree[u], 1LL);
      long long pick = static_cast<long long>(rng.below(total));
      int target = -1;
      for (int u = 0; u < v; ++u) {
        pick -= std::max(degree[u], 1LL);
        if (pick < 0) {
          target = u;
          break;
        }
      }
      bool duplicate = false;
      for (int c : chosen) duplicate |= (c == target);
      if (!duplicate) chosen.push_back(target);
    }
    for (int u : chosen) {
      edges.push_back({u, v});
      ++degree[u];
      ++degree[v];
    }
  }
  return Graph::undirected(n, edges);
}

/// Attachment parameter matching a target edge count: solve m(n-m) = k.
inline double barabasi_albert_m_for(long long n, long long target_edges) {
  double disc = static_cast<double>(n) * n - 4.0 * target_edges;
  if (disc < 0) throw std::invalid_argument("target edge count unreachable");
  return (n - std::sqrt(disc)) / 2.0;
}

enum class Family {
  path,
  cycle,
  star,
  complete,
  bipartite_worst,    // path of n nodes: hits the n-2 sync-max bound
  nonbipartite_worst  // path with a triangle fused at the far end: 2n-5
};

inline Graph family_graph(Family kind, int n) {
  std::vector<std::pair<int, int>> edges;
  switch (kind) {
    case Family::path:
    case Family::bipartite_worst:
      if (n < 2) throw std::invalid_argument("path requires n >= 2");
      for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
      break;
    case Family::cycle:
      if (n < 3) throw std::invalid_argument("cycle requires n >= 3");
      for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n});
      break;
    case Family::star:
      if (n < 2) throw std::invalid_argument("star requires n >= 2");
      for (int i = 1; i < n; ++i) edges.push_back({0, i});
      break;
    case Family::complete:
      if (n < 1) throw std::invalid_argument("complete requires n >= 1");
      for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) edges.push_back({u, v});
      break;
    case Family::nonbipartite_worst:
      // nodes 0..n-3 form a path; nodes n-2, n-1 close a triangle on n-3
      if (n < 3)
        throw std::invalid_argument("nonbipartite_worst requires n >= 3");
      for (int i = 0; i + 1 <= n - 3; ++i) edges.push_back({i, i + 1});
      edges.push_back({n - 3, n - 2});
      edges.push_back({n - 2, n - 1});
      edges.push_back({n - 1, n - 3});
      break;
  }
  return Graph::undirected(n, edges);
}

/// Complete graph on 2^n nodes; node id x carries 2*popcount(x) - n, so
/// the value multiset is C(n,k) copies of -n+2k. Sum 0, square sum n*2^n.
inline Instance binomial_instance(int n, int max_nodes = 1 << 12) {
  if (n < 0) throw std::invalid_argument("negative n");
  if (n > 30 || (1LL << n) > max_nodes)
    throw std::length_error("binomial instance exceeds node guard");
  const int size = 1 << n;
  Graph g = family_graph(Family::complete, size);
  Valuation f(size);
  for (int x = 0; x < size; ++x)
    f[x] = 2LL * std::popcount(static_cast<unsigned>(x)) - n;
  return Instance{std::move(g), std::move(f),
                  "binomial(" + std::to_string(n) + ")", std::nullopt};
}

/// Path of n nodes with -1 and 1 at the leaves, zeros inside (gap 1).
inline Instance gamblers_ruin_instance(int n) {
  if (n < 2) throw std::invalid_argument("gamblers ruin requires n >= 2");
  Graph g = family_graph(Family::path, n);
  Valuation f(n, 0);
  f[0] = -1;
  f[n - 1] = 1;
  return Instance{std::move(g), std::move(f),
                  "gamblers_ruin(" + std::to_string(n) + ")", std::nullopt};
}

/// Pick (k, b) for a target gap q on n nodes: solve n*b(b+1)/6 = q for b
/// (so k can stay as large as possible), round b, then k = min(n,
/// round(6q / (b(b+1)))). Falls back to b = 1, k = round(3q) when even
/// b = 1 overshoots with k = n.
inline GapTarget choose_gap_parameters(int n, long long q) {
  GapTarget t;
  t.q = q;
  if (q == 0 || n == 0) return t;
  double bstar = (-1.0 + std::sqrt(1.0 + 24.0 * static_cast<double>(q) / n)) / 2.0;
  long long b = bstar < 1.0 ? 1 : std::llround(bstar);
  long long k = std::llround(6.0 * static_cast<double>(q) / (b * (b + 1)));
  t.chosen_b = b;
  t.chosen_k = std::min<long long>(n, std::max<long long>(1, k));
  return t;
}

/// Seeded valuation whose realized square-sum gap hits q: k uniform
/// values in [-b, b] on the first k nodes, resampled until the gap is
/// exact (q <= 10 000) or within 0.01% (larger q).
inline std::pair<Valuation, GapTarget> random_gap_valuation(
    const Graph& g, long long q, std::uint64_t seed,
    long long retry_cap = 2000000) {
  if (q < 0) throw std::invalid_argument("negative gap target");
  const int n = g.node_count();
  GapTarget t = choose_gap_parameters(n, q);
  t.relative_tolerance = q <= 10000 ? 0.0 : 0.0001;
  if (q == 0) return {Valuation(n, 0), t};
  Rng rng(seed);
  long long best = -1;
  for (long long attempt = 0; attempt < retry_cap; ++attempt) {
    Valuation f(n, 0);
    for (long long i = 0; i < t.chosen_k; ++i)
      f[i] = rng.range(-t.chosen_b, t.chosen_b);
    long long realized = square_sum_gap(g, f);
    if (t.relative_tolerance == 0.0 ? realized == q
                                    : std::abs(static_cast<double>(realized - q)) <=
                                          t.relative_tolerance * q)
      return {std::move(f), t};
    if (best < 0 || std::abs(realized - q) < std::abs(best - q))
      best = realized;
  }
  throw std::runtime_error("gap target unmet after retries; best achieved " +
                           std::to_string(best));
}

inline std::vector<int> first_primes(int k) {
  std::vector<int> primes;
  for (int x = 2; static_cast<int>(primes.size()) < k; ++x) {
    bool prime = true;
    for (int p : primes)
      if (x % p == 0) {
        prime = false;
        break;
      }
    if (prime) primes.push_back(x);
  }
  return primes;
}

/// Hub with one out-edge into each of k disjoint directed cycles whose
/// lengths are the first k primes. Value p_i sits p_i steps from the hub
/// in cycle i; the hub starts at p_k so f_0 already lies on the limit
/// cycle of period p_1 * ... * p_k.
inline Instance prime_flower_instance(int k, int max_nodes = 4096) {
  if (k < 2) throw std::invalid_argument("prime flower requires k >= 2");
  auto primes = first_primes(k);
  long long total = 1;
  for (int p : primes) total += p;
  if (total > max_nodes)
    throw std::length_error("prime flower exceeds node guard");
  std::vector<std::pair<int, int>> edges;
  Valuation f(total, 0);
  int next = 1;  // node 0 is the hub
  for (int p : primes) {
    int entry = next;
    for (int i = 0; i < p; ++i)
      edges.push_back({entry + i, entry + (i + 1) % p});
    edges.push_back({0, entry});
    // entry is 1 step from the hub, so distance p lands on entry's
    // predecessor in the cycle
    f[entry + p - 1] = p;
    next += p;
  }
  f[0] = primes.back();
  return Instance{Graph::directed(static_cast<int>(total), edges),
                  std::move(f), "prime_flower(" + std::to_string(k) + ")",
                  std::nullopt};
}

/// Value 1 at one node, 0 elsewhere.
inline Valuation unique_max_valuation(const Graph& g, int node) {
  g.check_node(node);
  Valuation f(g.node_count(), 0);
  f[node] = 1;
  return f;
}

/// Labels 1..n in seeded random order.
inline Valuation shuffled_labels(int n, std::uint64_t seed) {
  Valuation f(n);
  for (int i = 0; i < n; ++i) f[i] = i + 1;
  Rng rng(seed);
  for (int i = n - 1; i > 0; --i)
    std::swap(f[i], f[rng.below(static_cast<std::uint64_t>(i) + 1)]);
  return f;
}

}  // namespace gdl
