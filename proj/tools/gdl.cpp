// Command-line front end: generate instances, inspect graphs, run single
// simulations, closed-form predictors, exact oracle analyses, and batch
// experiments.

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "gdl/gdl.hpp"
#include "gdl/markov_oracle.hpp"

namespace {

std::string resolve_dataset(const std::string& name) {
  const char* dir = std::getenv("GDL_DATA_DIR");
  if (!dir)
    throw std::runtime_error(
        "GDL_DATA_DIR is not set; cannot resolve dataset " + name);
  return std::string(dir) + "/" + name;
}

void print_stats(const gdl::GraphStats& s, bool as_json) {
  if (as_json) {
    nlohmann::json j{{"nodes", s.nodes},
                     {"edges", s.edges},
                     {"min_out_degree", s.min_out},
                     {"max_out_degree", s.max_out},
                     {"min_in_degree", s.min_in},
                     {"max_in_degree", s.max_in},
                     {"avg_out_degree", s.avg_out},
                     {"avg_degree", s.avg_degree},
                     {"diameter", s.diameter},
                     {"diameter_exact", s.diameter_exact},
                     {"scc_count", s.scc_count},
                     {"largest_scc", s.largest_scc},
                     {"weakly_connected", s.weakly_connected}};
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::cout << "metric,value\n"
            << "nodes," << s.nodes << "\nedges," << s.edges
            << "\nmin_out_degree," << s.min_out << "\nmax_out_degree,"
            << s.max_out << "\nmin_in_degree," << s.min_in
            << "\nmax_in_degree," << s.max_in << "\navg_out_degree,"
            << gdl::format_double(s.avg_out) << "\navg_degree,"
            << gdl::format_double(s.avg_degree) << "\ndiameter," << s.diameter
            << "\ndiameter_exact," << (s.diameter_exact ? 1 : 0)
            << "\nscc_count," << s.scc_count << "\nlargest_scc,"
            << s.largest_scc << "\nweakly_connected,"
            << (s.weakly_connected ? 1 : 0) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dynamic processes on graphs: simulation and exact analysis"};
  app.require_subcommand(1);

  // ---- generate ----
  auto* generate = app.add_subcommand("generate", "emit an instance file");
  std::string g_kind = "erdos_renyi", g_family = "path", g_values = "instance";
  std::string g_out;
  int g_n = 10, g_m = 9, g_k = 2, g_node = 0;
  long long g_q = 0, g_lo = -5, g_hi = 5;
  double g_p = 0.5;
  bool g_directed = false;
  std::uint64_t g_seed = 0;
  generate->add_option("--kind", g_kind,
                       "erdos_renyi|barabasi_albert|family|binomial|"
                       "gamblers_ruin|prime_flower");
  generate->add_option("--n", g_n);
  generate->add_option("--p", g_p);
  generate->add_option("--m", g_m);
  generate->add_option("--family", g_family);
  generate->add_option("--k", g_k);
  generate->add_option("--values", g_values,
                       "instance|zero|unique_max|uniform|shuffled_labels|"
                       "random_gap");
  generate->add_option("--node", g_node);
  generate->add_option("--lo", g_lo);
  generate->add_option("--hi", g_hi);
  generate->add_option("--q", g_q);
  generate->add_flag("--directed,!--undirected", g_directed);
  generate->add_option("--seed", g_seed);
  generate->add_option("--out", g_out)->required();

  // ---- stats ----
  auto* stats = app.add_subcommand("stats", "structural graph statistics");
  std::string s_in, s_dataset, s_out;
  bool s_directed = false, s_json = false, s_sampled = false;
  int s_samples = 32;
  std::uint64_t s_seed = 1;
  stats->add_option("--in", s_in, "edge-list file");
  stats->add_option("--dataset", s_dataset,
                    "file name under GDL_DATA_DIR");
  stats->add_flag("--directed,!--undirected", s_directed);
  stats->add_flag("--sampled", s_sampled, "sampled diameter estimate");
  stats->add_option("--samples", s_samples);
  stats->add_option("--seed", s_seed);
  stats->add_flag("--json", s_json);

  // ---- simulate ----
  auto* simulate = app.add_subcommand("simulate", "run one trial");
  std::string sim_in, sim_model = "lb";
  std::uint64_t sim_seed = 0;
  long long sim_max_steps = 1000000000LL;
  simulate->add_option("--in", sim_in)->required();
  simulate->add_option("--model", sim_model, "lb|sync-max|async-max");
  simulate->add_option("--seed", sim_seed);
  simulate->add_option("--max-steps", sim_max_steps);

  // ---- predict ----
  auto* predict = app.add_subcommand("predict", "closed-form predictors");
  std::string p_in, p_model = "lb";
  predict->add_option("--in", p_in)->required();
  predict->add_option("--model", p_model, "lb|sync-max");

  // ---- oracle ----
  auto* oracle = app.add_subcommand("oracle", "exact Markov-chain analysis");
  std::string o_in, o_model = "lb";
  int o_state_limit = 200000, o_hitting = -1;
  bool o_cycles = false;
  oracle->add_option("--in", o_in)->required();
  oracle->add_option("--model", o_model, "lb|sync-max|async-max");
  oracle->add_option("--state-limit", o_state_limit);
  oracle->add_flag("--cycles", o_cycles, "enumerate simple cycle lengths");
  oracle->add_option("--hitting", o_hitting,
                     "random-walk hitting times into this node");

  // ---- experiment ----
  auto* experiment = app.add_subcommand("experiment", "batch trials to CSV");
  std::string e_config, e_out;
  experiment->add_option("--config", e_config, "JSON config file")->required();
  experiment->add_option("--out", e_out, "override the config output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate) {
      nlohmann::json graph_spec{{"kind", g_kind}, {"n", g_n},
                                {"p", g_p},       {"m", g_m},
                                {"family", g_family},
                                {"k", g_k},       {"directed", g_directed}};
      nlohmann::json valuation_spec{{"kind", g_values}, {"lo", g_lo},
                                    {"hi", g_hi},       {"q", g_q}};
      if (g_values == "unique_max") valuation_spec["node"] = g_node;
      auto inst = gdl::build_instance(graph_spec, valuation_spec, g_seed);
      gdl::write_instance(g_out, inst.graph, inst.valuation);
      std::cout << "wrote " << g_out << " (" << inst.graph.node_count()
                << " nodes, " << inst.graph.edge_count() << " edges)\n";
    } else if (*stats) {
      std::string path = !s_in.empty() ? s_in : resolve_dataset(s_dataset);
      auto g = gdl::load_edge_list(path, s_directed);
      print_stats(gdl::graph_stats(g, !s_sampled, s_samples, s_seed), s_json);
    } else if (*simulate) {
      auto [g, f] = gdl::read_instance(sim_in);
      if (sim_model == "lb") {
        auto r = gdl::simulate(g, f, sim_seed, sim_max_steps);
        std::cout << "conv_time=" << r.convergence_time
                  << " height=" << r.height << " width="
                  << (r.width() ? gdl::format_double(*r.width()) : "NA")
                  << " capped=" << r.capped << '\n';
      } else if (sim_model == "sync-max") {
        auto r = gdl::detect_convergence(g, f, sim_max_steps);
        std::cout << "conv_time=" << r.convergence_time
                  << " period=" << r.period << " capped=" << r.capped << '\n';
      } else {
        auto r = gdl::async_simulate(g, f, sim_seed, sim_max_steps);
        std::cout << "conv_time=" << r.convergence_time << " final_ratio="
                  << gdl::format_double(r.final_value_ratio)
                  << " capped=" << r.capped << '\n';
      }
    } else if (*predict) {
      auto [g, f] = gdl::read_instance(p_in);
      if (p_model == "lb") {
        auto pred = gdl::predict_final(g, f);
        std::cout << "components=" << pred.components.size()
                  << " period=" << pred.period.str() << '\n';
        for (const auto& c : pred.components)
          std::cout << "  n=" << c.n << " sum=" << c.sum << " k=" << c.k
                    << " r=" << c.r << '\n';
      } else if (!g.directed()) {
        auto pred = gdl::predict_undirected(g, f);
        std::cout << "period=" << pred.period << " bound=" << pred.bound
                  << '\n';
        for (const auto& c : pred.components)
          std::cout << "  bipartite=" << c.bipartite << " m=" << c.limit_max
                    << " m'=" << c.other_max << " period=" << c.period << '\n';
      } else {
        auto pred = gdl::predict_strongly_connected(g, f);
        std::cout << "g=" << pred.coloring.g << " period=" << pred.period
                  << '\n';
      }
    } else if (*oracle) {
      auto [g, f] = gdl::read_instance(o_in);
      if (o_cycles) {
        std::cout << "cycle_lengths=";
        for (int len : gdl::simple_cycle_lengths(g, g.node_count()))
          std::cout << len << ' ';
        std::cout << '\n';
        return 0;
      }
      if (o_hitting >= 0) {
        auto h = gdl::walk_hitting_times(g, o_hitting);
        for (int v = 0; v < g.node_count(); ++v)
          std::cout << v << ": "
                    << (h[v] ? h[v]->str() : std::string("unreachable"))
                    << '\n';
        return 0;
      }
      gdl::ChainModel model =
          o_model == "lb"         ? gdl::ChainModel::load_balancing_symmetric
          : o_model == "sync-max" ? gdl::ChainModel::max_synchronous
                                  : gdl::ChainModel::max_asynchronous;
      auto chain = gdl::enumerate_chain(g, f, model, o_state_limit);
      auto report = gdl::absorbing_analysis(chain);
      std::cout << "states=" << chain.states.size()
                << " absorbing_classes=" << report.absorbing_classes.size()
                << '\n';
      for (const auto& [c, p] : report.class_reach_probabilities)
        std::cout << "  class " << c << " size "
                  << report.absorbing_classes[c].size() << " reach "
                  << p.str() << '\n';
      if (report.tail_length >= 0)
        std::cout << "tail=" << report.tail_length
                  << " period=" << report.period << '\n';
      else
        std::cout << "expected_steps="
                  << gdl::expected_absorption_time(chain).str() << '\n';
    } else if (*experiment) {
      auto config = gdl::load_config(e_config);
      if (!e_out.empty()) config.output_path = e_out;
      if (config.output_path.empty())
        throw std::runtime_error("no output path configured");
      auto report = gdl::run_trials(config);
      gdl::emit_report(report, config.output_path);
      auto a = gdl::aggregate(report);
      std::cout << "trials=" << a.trials
                << " mean_conv=" << gdl::format_double(a.mean_conv)
                << " capped=" << a.capped_count << " -> "
                << config.output_path << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
