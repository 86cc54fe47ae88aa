#pragma once

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "gdl/generators.hpp"
#include "gdl/graph.hpp"
#include "gdl/load_balancing.hpp"
#include "gdl/max_model.hpp"

namespace gdl {

/// Parse a whitespace edge list ('#' lines are comments); external ids
/// are densely relabeled in order of first appearance, duplicates are
/// dropped, and undirected mode symmetrizes.
inline Graph load_edge_list(const std::string& path, bool directed) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::unordered_map<long long, int> id_of;
  std::vector<std::pair<int, int>> edges;
  std::string line;
  long long line_no = 0;
  auto dense = [&](long long raw) {
    auto [it, added] = id_of.insert({raw, static_cast<int>(id_of.size())});
    return it->second;
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::istringstream row(line);
    long long a, b;
    if (!(row >> a >> b))
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": malformed edge line");
    std::string rest;
    if (row >> rest)
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": trailing tokens on edge line");
    int u = dense(a), v = dense(b);
    if (u == v && !directed) continue;  // undirected graphs are loop-free
    edges.push_back({u, v});
  }
  if (id_of.empty())
    throw std::runtime_error(path + ": no edges found");
  int n = static_cast<int>(id_of.size());
  return directed ? Graph::directed(n, edges) : Graph::undirected(n, edges);
}

/// Plain-text instance format: "n m directed_flag", m edge lines, then
/// n value lines.
inline void write_instance(const std::string& path, const Graph& g,
                           const Valuation& f) {
  g.check_valuation(f);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << g.node_count() << ' ' << g.edges().size() << ' '
      << (g.directed() ? 1 : 0) << '\n';
  for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
  for (Value x : f) out << x << '\n';
}

inline std::pair<Graph, Valuation> read_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  long long n, m;
  int directed_flag;
  if (!(in >> n >> m >> directed_flag))
    throw std::runtime_error(path + ": malformed instance header");
  std::vector<std::pair<int, int>> edges(m);
  for (auto& [u, v] : edges)
    if (!(in >> u >> v))
      throw std::runtime_error(path + ": truncated edge list");
  Valuation f(n);
  for (auto& x : f)
    if (!(in >> x)) throw std::runtime_error(path + ": truncated valuation");
  Graph g = directed_flag ? Graph::directed(static_cast<int>(n), edges)
                          : Graph::undirected(static_cast<int>(n), edges);
  return {std::move(g), std::move(f)};
}

struct GraphStats {
  long long nodes = 0;
  long long edges = 0;
  long long min_out = 0, max_out = 0;
  long long min_in = 0, max_in = 0;
  double avg_out = 0.0;
  double avg_degree = 0.0;  // undirected: 2m/n; directed: avg total degree
  int diameter = 0;
  bool diameter_exact = true;
  long long scc_count = 0;
  long long largest_scc = 0;
  bool weakly_connected = false;
};

inline GraphStats graph_stats(const Graph& g, bool exact_diameter = true,
                              int samples = 32, std::uint64_t seed = 1) {
  GraphStats s;
  s.nodes = g.node_count();
  s.edges = g.edge_count();
  if (s.nodes == 0) return s;
  long long total_out = 0, total_in = 0;
  s.min_out = s.min_in = s.nodes;
  for (int v = 0; v < g.node_count(); ++v) {
    long long o = static_cast<long long>(g.out(v).size());
    long long i = static_cast<long long>(g.in(v).size());
    total_out += o;
    total_in += i;
    s.min_out = std::min(s.min_out, o);
    s.max_out = std::max(s.max_out, o);
    s.min_in = std::min(s.min_in, i);
    s.max_in = std::max(s.max_in, i);
  }
  s.avg_out = static_cast<double>(total_out) / s.nodes;
  s.avg_degree = g.directed()
                     ? static_cast<double>(total_out + total_in) / s.nodes
                     : static_cast<double>(total_out) / s.nodes;
  s.diameter_exact = exact_diameter;
  s.diameter =
      exact_diameter ? diameter(g) : diameter_sampled(g, samples, seed);
  auto scc = scc_decompose(g);
  s.scc_count = static_cast<long long>(scc.components.size());
  for (const auto& c : scc.components)
    s.largest_scc = std::max(s.largest_scc, static_cast<long long>(c.size()));
  s.weakly_connected = connected_components(g).size() == 1;
  return s;
}

struct ExperimentConfig {
  std::string model = "lb";  // lb | sync-max | async-max
  nlohmann::json graph_spec = nlohmann::json::object();
  nlohmann::json valuation_spec = nlohmann::json::object();
  long long trials = 1;
  std::uint64_t base_seed = 0;
  long long max_steps = 1000000000LL;
  std::string output_path;
  int workers = 1;
};

inline void to_json(nlohmann::json& j, const ExperimentConfig& c) {
  j = nlohmann::json{{"model", c.model},         {"graph", c.graph_spec},
                     {"valuation", c.valuation_spec},
                     {"trials", c.trials},       {"base_seed", c.base_seed},
                     {"max_steps", c.max_steps}, {"output", c.output_path},
                     {"workers", c.workers}};
}

inline void from_json(const nlohmann::json& j, ExperimentConfig& c) {
  c.model = j.value("model", "lb");
  c.graph_spec = j.value("graph", nlohmann::json::object());
  c.valuation_spec = j.value("valuation", nlohmann::json::object());
  c.trials = j.value("trials", 1LL);
  c.base_seed = j.value("base_seed", std::uint64_t{0});
  c.max_steps = j.value("max_steps", 1000000000LL);
  c.output_path = j.value("output", std::string{});
  c.workers = j.value("workers", 1);
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  nlohmann::json j;
  in >> j;
  return j.get<ExperimentConfig>();
}

/// Build the per-trial instance from the graph and valuation specs.
/// Random specs consume independent streams derived from trial_seed.
inline Instance build_instance(const nlohmann::json& graph_spec,
                               const nlohmann::json& valuation_spec,
                               std::uint64_t trial_seed) {
  std::string kind = graph_spec.value("kind", "erdos_renyi");
  std::uint64_t graph_seed = Rng::derive(trial_seed, 1);
  std::uint64_t value_seed = Rng::derive(trial_seed, 2);
  Instance inst{Graph::undirected(0, {}), {}, kind, trial_seed};
  if (kind == "erdos_renyi") {
    int n = graph_spec.at("n");
    double p = graph_spec.at("p");
    bool directed = graph_spec.value("directed", false);
    std::string require = graph_spec.value("require", "");
    if (require.empty()) {
      inst.graph = erdos_renyi(n, p, directed, graph_seed);
    } else {
      auto ok = [&](const Graph& g) {
        if (require == "connected") return connected_components(g).size() == 1;
        if (require == "outdegree") {
          for (int v = 0; v < g.node_count(); ++v)
            if (g.out(v).empty()) return false;
          return true;
        }
        throw std::invalid_argument("unknown requirement " + require);
      };
      inst.graph = erdos_renyi_until(n, p, directed, graph_seed, 1000, ok);
    }
    inst.valuation.assign(n, 0);
  } else if (kind == "barabasi_albert") {
    inst.graph = barabasi_albert(graph_spec.at("n"), graph_spec.value("m", 9),
                                 graph_seed);
    inst.valuation.assign(inst.graph.node_count(), 0);
  } else if (kind == "family") {
    std::string name = graph_spec.at("family");
    int n = graph_spec.at("n");
    Family fam = name == "path"              ? Family::path
                 : name == "cycle"           ? Family::cycle
                 : name == "star"            ? Family::star
                 : name == "complete"        ? Family::complete
                 : name == "bipartite_worst" ? Family::bipartite_worst
                 : name == "nonbipartite_worst"
                     ? Family::nonbipartite_worst
                     : throw std::invalid_argument("unknown family " + name);
    inst.graph = family_graph(fam, n);
    inst.valuation.assign(n, 0);
  } else if (kind == "dataset") {
    inst.graph = load_edge_list(graph_spec.at("path"),
                                graph_spec.value("directed", false));
    inst.valuation.assign(inst.graph.node_count(), 0);
  } else if (kind == "binomial") {
    inst = binomial_instance(graph_spec.at("n"));
  } else if (kind == "gamblers_ruin") {
    inst = gamblers_ruin_instance(graph_spec.at("n"));
  } else if (kind == "prime_flower") {
    inst = prime_flower_instance(graph_spec.at("k"));
  } else {
    throw std::invalid_argument("unknown graph kind " + kind);
  }

  std::string vkind = valuation_spec.value("kind", "instance");
  const int n = inst.graph.node_count();
  if (vkind == "instance") {
    // keep the valuation bundled with the generator
  } else if (vkind == "zero") {
    inst.valuation.assign(n, 0);
  } else if (vkind == "unique_max") {
    int node = valuation_spec.contains("node")
                   ? valuation_spec.at("node").get<int>()
                   : static_cast<int>(Rng(value_seed).below(n));
    inst.valuation = unique_max_valuation(inst.graph, node);
  } else if (vkind == "uniform") {
    long long lo = valuation_spec.at("lo"), hi = valuation_spec.at("hi");
    Rng rng(value_seed);
    inst.valuation.resize(n);
    for (auto& x : inst.valuation) x = rng.range(lo, hi);
  } else if (vkind == "shuffled_labels") {
    inst.valuation = shuffled_labels(n, value_seed);
  } else if (vkind == "random_gap") {
    inst.valuation =
        random_gap_valuation(inst.graph, valuation_spec.at("q"), value_seed)
            .first;
  } else {
    throw std::invalid_argument("unknown valuation kind " + vkind);
  }
  return inst;
}

struct TrialRow {
  long long trial = 0;
  std::uint64_t seed = 0;
  long long conv_time = 0;
  std::optional<long long> height;
  std::optional<double> width;
  std::optional<BigInt> period;
  std::optional<double> final_ratio;
  bool capped = false;
};

struct ReportAggregate {
  long long trials = 0;
  double mean_conv = 0.0, sd_conv = 0.0;
  std::optional<double> mean_height;
  std::optional<double> mean_width;
  std::optional<double> mean_period;
  std::optional<double> mean_ratio;
  long long capped_count = 0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<TrialRow> rows;
};

inline ReportAggregate aggregate(const ExperimentReport& report) {
  ReportAggregate a;
  a.trials = static_cast<long long>(report.rows.size());
  if (a.trials == 0) return a;
  auto mean_of = [&](auto&& get) -> std::optional<double> {
    double total = 0.0;
    long long count = 0;
    for (const auto& r : report.rows) {
      auto v = get(r);
      if (v) {
        total += *v;
        ++count;
      }
    }
    if (count == 0) return std::nullopt;
    return total / static_cast<double>(count);
  };
  double total = 0.0;
  for (const auto& r : report.rows) {
    total += static_cast<double>(r.conv_time);
    a.capped_count += r.capped ? 1 : 0;
  }
  a.mean_conv = total / static_cast<double>(a.trials);
  double ss = 0.0;
  for (const auto& r : report.rows) {
    double d = static_cast<double>(r.conv_time) - a.mean_conv;
    ss += d * d;
  }
  a.sd_conv = a.trials > 1 ? std::sqrt(ss / static_cast<double>(a.trials - 1))
                           : 0.0;
  a.mean_height = mean_of([](const TrialRow& r) -> std::optional<double> {
    if (!r.height) return std::nullopt;
    return static_cast<double>(*r.height);
  });
  a.mean_width = mean_of([](const TrialRow& r) { return r.width; });
  a.mean_period = mean_of([](const TrialRow& r) -> std::optional<double> {
    if (!r.period) return std::nullopt;
    return r.period->convert_to<double>();
  });
  a.mean_ratio = mean_of([](const TrialRow& r) { return r.final_ratio; });
  return a;
}

/// Run `trials` independent simulations; per-trial seeds are strong
/// mixes of (base_seed, trial index), so any worker count produces the
/// identical report.
inline ExperimentReport run_trials(const ExperimentConfig& config) {
  if (config.trials < 1) throw std::invalid_argument("trials must be >= 1");
  // validate the model preconditions on the trial-0 instance up front
  {
    Instance probe = build_instance(config.graph_spec, config.valuation_spec,
                                    Rng::derive(config.base_seed, 0));
    if (config.model == "lb") {
      if (probe.graph.directed())
        throw std::invalid_argument("lb model requires an undirected graph");
    } else if (config.model == "sync-max" || config.model == "async-max") {
      require_outdegrees(probe.graph);
    } else {
      throw std::invalid_argument("unknown model " + config.model);
    }
  }
  ExperimentReport report;
  report.config = config;
  report.rows.resize(config.trials);
  std::atomic<long long> next{0};
  auto worker = [&]() {
    while (true) {
      long long i = next.fetch_add(1);
      if (i >= config.trials) return;
      std::uint64_t trial_seed = Rng::derive(config.base_seed, i);
      Instance inst =
          build_instance(config.graph_spec, config.valuation_spec, trial_seed);
      std::uint64_t sim_seed = Rng::derive(trial_seed, 3);
      TrialRow row;
      row.trial = i;
      row.seed = trial_seed;
      if (config.model == "lb") {
        auto stats =
            simulate(inst.graph, inst.valuation, sim_seed, config.max_steps);
        row.conv_time = stats.convergence_time;
        row.height = stats.height;
        row.width = stats.width();
        row.period = predict_period(predict_final(inst.graph, inst.valuation));
        row.capped = stats.capped;
      } else if (config.model == "sync-max") {
        auto traj =
            detect_convergence(inst.graph, inst.valuation, config.max_steps);
        row.conv_time = traj.convergence_time;
        row.period = BigInt(traj.period);
        row.capped = traj.capped;
      } else {
        auto res = async_simulate(inst.graph, inst.valuation, sim_seed,
                                  config.max_steps);
        row.conv_time = res.convergence_time;
        row.final_ratio = res.final_value_ratio;
        row.capped = res.capped;
      }
      report.rows[i] = std::move(row);
    }
  };
  int workers = std::max(1, config.workers);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return report;
}

inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

/// CSV with the fixed header, one row per trial, aggregate row last;
/// LF endings, '.' decimals, NA for undefined cells.
inline void emit_report(const ExperimentReport& report,
                        const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write report to " + path);
  out << "trial,seed,conv_time,height,width,period,final_ratio,capped\n";
  auto opt_ll = [](const std::optional<long long>& v) {
    return v ? std::to_string(*v) : std::string("NA");
  };
  auto opt_d = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string("NA");
  };
  for (const auto& r : report.rows) {
    out << r.trial << ',' << r.seed << ',' << r.conv_time << ','
        << opt_ll(r.height) << ',' << opt_d(r.width) << ','
        << (r.period ? r.period->str() : std::string("NA")) << ','
        << opt_d(r.final_ratio) << ',' << (r.capped ? 1 : 0) << '\n';
  }
  auto a = aggregate(report);
  out << "aggregate," << a.trials << ',' << format_double(a.mean_conv) << ','
      << opt_d(a.mean_height) << ',' << opt_d(a.mean_width) << ','
      << opt_d(a.mean_period) << ',' << opt_d(a.mean_ratio) << ','
      << a.capped_count << '\n';
}

}  // namespace gdl
