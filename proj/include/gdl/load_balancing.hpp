#pragma once

#include <cassert>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "gdl/graph.hpp"
#include "gdl/random.hpp"

namespace gdl {

using BigInt = boost::multiprecision::cpp_int;

enum class UpdateKind { swap_update, shrink_update };

/// Running state of the symmetric load-balancing process: one random
/// edge per step, both endpoints move one unit toward each other.
/// Absorption (per-component max - min <= 1) is tracked incrementally so
/// the post-update check is cheap.
class LbState {
 public:
  LbState(const Graph& g, Valuation f0) : g_(&g), f_(std::move(f0)) {
    if (g.directed())
      throw std::invalid_argument("load balancing runs on undirected graphs");
    g.check_valuation(f_);
    comp_of_ = component_ids(g);
    int c = 0;
    for (int id : comp_of_) c = std::max(c, id + 1);
    hist_.assign(c, {});
    for (int v = 0; v < g.node_count(); ++v) ++hist_[comp_of_[v]][f_[v]];
    unabsorbed_ = 0;
    absorbed_flag_.assign(c, 1);
    for (int i = 0; i < c; ++i)
      if (!component_settled(i)) {
        absorbed_flag_[i] = 0;
        ++unabsorbed_;
      }
  }

  /// Apply the two-sided update to an existing edge; classifies it per
  /// the |a - b| <= 1 swap / > 1 shrink split.
  UpdateKind apply_edge_update(int u, int v) {
    if (!g_->has_edge(u, v))
      throw std::invalid_argument("edge not present in graph");
    ++step_;
    Value a = f_[u], b = f_[v];
    if (a == b) return UpdateKind::swap_update;
    Value na = a + (b > a ? 1 : -1);
    Value nb = b + (a > b ? 1 : -1);
    int c = comp_of_[u];
    auto& h = hist_[c];
    remove_value(h, a);
    remove_value(h, b);
    ++h[na];
    ++h[nb];
    f_[u] = na;
    f_[v] = nb;
    bool settled = component_settled(c);
    if (settled != static_cast<bool>(absorbed_flag_[c])) {
      absorbed_flag_[c] = settled;
      unabsorbed_ += settled ? -1 : 1;
    }
    Value diff = a > b ? a - b : b - a;
    if (diff <= 1) return UpdateKind::swap_update;
    ++shrink_count_;
    return UpdateKind::shrink_update;
  }

  bool is_absorbed() const { return unabsorbed_ == 0; }

  const Valuation& valuation() const { return f_; }
  const Graph& graph() const { return *g_; }
  long long step() const { return step_; }
  long long shrink_count() const { return shrink_count_; }

 private:
  static void remove_value(std::map<Value, int>& h, Value x) {
    auto it = h.find(x);
    if (--it->second == 0) h.erase(it);
  }
  bool component_settled(int c) const {
    const auto& h = hist_[c];
    return h.empty() || h.rbegin()->first - h.begin()->first <= 1;
  }

  const Graph* g_;
  Valuation f_;
  std::vector<int> comp_of_;
  std::vector<std::map<Value, int>> hist_;
  std::vector<char> absorbed_flag_;
  int unabsorbed_ = 0;
  long long step_ = 0;
  long long shrink_count_ = 0;
};

struct ComponentPrediction {
  std::vector<int> members;
  long long n = 0;  // component size
  long long sum = 0;
  long long k = 0;  // floored average
  long long r = 0;  // remainder, 0 <= r < n
};

struct FinalPrediction {
  std::vector<ComponentPrediction> components;
  BigInt period = 1;  // product of C(n_i, r_i)

  /// Sorted final multiset for one component: r copies of k+1, n-r of k.
  std::vector<Value> component_multiset(std::size_t i) const {
    const auto& c = components[i];
    std::vector<Value> vals(c.n - c.r, c.k);
    vals.resize(c.n, c.k + 1);
    return vals;
  }
};

inline BigInt binomial_coefficient(long long n, long long r) {
  if (r < 0 || r > n) return 0;
  r = std::min(r, n - r);
  BigInt result = 1;
  for (long long i = 1; i <= r; ++i) {
    result *= n - r + i;
    result /= i;
  }
  return result;
}

/// Absorbing-state prediction: per component, S = k*n + r under floored
/// division, final values are r copies of k+1 and n-r copies of k.
inline FinalPrediction predict_final(const Graph& g, const Valuation& f0) {
  g.check_valuation(f0);
  FinalPrediction out;
  for (auto& members : connected_components(g)) {
    ComponentPrediction c;
    c.members = members;
    c.n = static_cast<long long>(members.size());
    for (int v : members) c.sum += f0[v];
    // floored division keeps 0 <= r < n for negative sums too
    c.k = c.sum / c.n;
    if (c.sum % c.n != 0 && c.sum < 0) --c.k;
    c.r = c.sum - c.k * c.n;
    out.components.push_back(std::move(c));
  }
  for (const auto& c : out.components)
    out.period *= binomial_coefficient(c.n, c.r);
  return out;
}

/// Period of the absorbing class: product of C(n_i, r_i) over components.
inline BigInt predict_period(const FinalPrediction& prediction) {
  return prediction.period;
}

inline long long square_sum(const Valuation& f) {
  long long q = 0;
  for (Value x : f) q += x * x;
  return q;
}

/// q = (Q_init - Q_final) / 2, the exact budget of shrink updates.
inline long long square_sum_gap(const Graph& g, const Valuation& f0) {
  auto prediction = predict_final(g, f0);
  long long q_final = 0;
  for (const auto& c : prediction.components)
    q_final += c.r * (c.k + 1) * (c.k + 1) + (c.n - c.r) * c.k * c.k;
  long long diff = square_sum(f0) - q_final;
  assert(diff >= 0 && diff % 2 == 0);
  return diff / 2;
}

struct TrialStats {
  long long convergence_time = 0;
  long long height = 0;  // shrink updates until absorption
  bool capped = false;
  Valuation final_valuation;

  /// Width = convergence time / height; undefined when height is 0.
  std::optional<double> width() const {
    if (height == 0) return std::nullopt;
    return static_cast<double>(convergence_time) / static_cast<double>(height);
  }
};

/// Run the process with uniformly random edge draws (with replacement)
/// until absorbed or max_steps; t counts every draw, no-op swaps included.
inline TrialStats simulate(const Graph& g, const Valuation& f0,
                           std::uint64_t seed,
                           long long max_steps = 1000000000LL) {
  LbState state(g, f0);
  const auto& edges = g.edges();
  if (edges.empty() && !state.is_absorbed())
    throw std::invalid_argument("unabsorbed instance with no edges");
  Rng rng(seed);
  TrialStats stats;
  while (!state.is_absorbed()) {
    if (state.step() >= max_steps) {
      stats.capped = true;
      break;
    }
    const auto& [u, v] = edges[rng.below(edges.size())];
    state.apply_edge_update(u, v);
  }
  stats.convergence_time = state.step();
  stats.height = state.shrink_count();
  stats.final_valuation = state.valuation();
  return stats;
}

/// Worst-case schedule for the binomial valuation on the complete graph
/// over 2^n nodes (node id = bitstring, value = 2*popcount - n): level d
/// pairs every node with bit d clear against its bit-d partner. Every
/// update is a shrink with |a - b| = 2; n * 2^(n-1) updates reach all-zero.
inline std::vector<std::pair<int, int>> binomial_worst_schedule(
    int n, int max_nodes = 1 << 12) {
  if (n < 0) throw std::invalid_argument("negative n");
  if (n > 30 || (1LL << n) > max_nodes)
    throw std::length_error("binomial schedule exceeds node guard");
  std::vector<std::pair<int, int>> schedule;
  const int size = 1 << n;
  for (int d = 0; d < n; ++d)
    for (int x = 0; x < size; ++x)
      if (!(x & (1 << d))) schedule.push_back({x, x | (1 << d)});
  return schedule;
}

}  // namespace gdl
