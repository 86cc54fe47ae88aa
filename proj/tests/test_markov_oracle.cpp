#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>

#include "helpers.hpp"

using namespace gdl;

TEST_CASE("chain enumeration") {
  SECTION("an equal pair is a single absorbing state") {
    Graph g = Graph::undirected(2, {{0, 1}});
    auto chain = enumerate_chain(g, {0, 0},
                                 ChainModel::load_balancing_symmetric);
    REQUIRE(chain.states.size() == 1);
    REQUIRE(chain.transitions[0].size() == 1);
    CHECK(chain.transitions[0][0].first == 0);
    CHECK(chain.transitions[0][0].second == Rational(1));
  }
  SECTION("synchronous chains are deterministic") {
    auto inst = testutil::two_cycle_instance();
    auto chain =
        enumerate_chain(inst.graph, inst.valuation, ChainModel::max_synchronous);
    for (const auto& row : chain.transitions) REQUIRE(row.size() == 1);
  }
  SECTION("transition rows always sum to one") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      Graph g = testutil::random_connected_graph(4, seed + 30, 0.6);
      Valuation f0 = testutil::random_valuation(4, 0, 2, seed);
      for (auto model : {ChainModel::load_balancing_symmetric,
                         ChainModel::max_asynchronous}) {
        auto chain = enumerate_chain(g, f0, model);
        for (const auto& row : chain.transitions) {
          Rational total = 0;
          for (const auto& [t, p] : row) {
            REQUIRE(p > 0);
            total += p;
          }
          REQUIRE(total == Rational(1));
        }
      }
    }
  }
  SECTION("the state limit is enforced") {
    Graph g = testutil::random_connected_graph(8, 3, 0.5);
    Valuation f0 = testutil::random_valuation(8, -20, 20, 1);
    CHECK_THROWS_AS(
        enumerate_chain(g, f0, ChainModel::load_balancing_symmetric, 10),
        std::length_error);
  }
}

TEST_CASE("absorption structure") {
  SECTION("the motivating instance has one absorbing class of size 10") {
    auto inst = testutil::motivating_instance();
    auto chain = enumerate_chain(inst.graph, inst.valuation,
                                 ChainModel::load_balancing_symmetric);
    auto report = absorbing_analysis(chain);
    REQUIRE(report.class_reach_probabilities.size() == 1);
    auto [cls, prob] = report.class_reach_probabilities[0];
    CHECK(prob == Rational(1));
    CHECK(report.absorbing_classes[cls].size() == 10);
    // every state in the class is an absorbed arrangement of {5,5,5,4,4}
    for (int s : report.absorbing_classes[cls]) {
      std::multiset<Value> vals(chain.states[s].begin(),
                                chain.states[s].end());
      CHECK(vals == std::multiset<Value>{4, 4, 5, 5, 5});
    }
  }
  SECTION("deterministic tail and period match direct detection") {
    auto inst = testutil::two_cycle_instance();
    auto chain =
        enumerate_chain(inst.graph, inst.valuation, ChainModel::max_synchronous);
    auto report = absorbing_analysis(chain);
    auto traj = detect_convergence(inst.graph, inst.valuation);
    CHECK(report.tail_length == traj.convergence_time);
    CHECK(report.period == traj.period);
  }
  SECTION("starting absorbed gives tail 0 and expectation 0") {
    auto inst = testutil::motivating_instance();
    auto chain = enumerate_chain(inst.graph, Valuation(5, 3),
                                 ChainModel::load_balancing_symmetric);
    auto report = absorbing_analysis(chain);
    CHECK(report.tail_length == 0);
    CHECK(expected_absorption_time(chain) == Rational(0));
  }
}

TEST_CASE("expected absorption times") {
  SECTION("one-sided ruin closed form n(n-1)^2/2") {
    for (int n : {2, 3, 4, 5, 8}) {
      auto chain = one_sided_gambler_chain(n);
      CHECK(expected_absorption_time(chain) ==
            Rational(static_cast<long long>(n) * (n - 1) * (n - 1), 2));
    }
  }
  SECTION("two-sided ruin: exact value matches Monte Carlo within 1%") {
    auto inst = gamblers_ruin_instance(4);
    auto chain = enumerate_chain(inst.graph, inst.valuation,
                                 ChainModel::load_balancing_symmetric);
    double exact =
        static_cast<double>(expected_absorption_time(chain));
    const int trials = 200000;
    double total = 0;
    for (int t = 0; t < trials; ++t) {
      auto stats =
          simulate(inst.graph, inst.valuation, Rng::derive(77, t));
      REQUIRE_FALSE(stats.capped);
      total += static_cast<double>(stats.convergence_time);
    }
    CHECK(total / trials == Catch::Approx(exact).epsilon(0.01));
  }
}

TEST_CASE("reach probabilities agree with simulation") {
  // directed 2-cycle from (0, 1): each absorbing constant is hit with
  // probability exactly 1/2 under the asynchronous model
  Graph two = Graph::directed(2, {{0, 1}, {1, 0}});
  auto chain = enumerate_chain(two, {0, 1}, ChainModel::max_asynchronous);
  auto report = absorbing_analysis(chain);
  REQUIRE(report.class_reach_probabilities.size() == 2);
  std::map<Value, Rational> reach;
  for (auto [cls, prob] : report.class_reach_probabilities) {
    REQUIRE(report.absorbing_classes[cls].size() == 1);
    reach[chain.states[report.absorbing_classes[cls][0]][0]] = prob;
  }
  CHECK(reach[0] == Rational(1, 2));
  CHECK(reach[1] == Rational(1, 2));

  const int trials = 20000;
  int ones = 0;
  for (int t = 0; t < trials; ++t) {
    auto res = async_simulate(two, {0, 1}, Rng::derive(555, t));
    ones += res.final_valuation[0] == 1;
  }
  // 3 standard errors around p = 1/2
  double se = std::sqrt(0.25 / trials);
  CHECK(std::abs(ones / double(trials) - 0.5) < 3 * se);
}

TEST_CASE("simple cycle lengths") {
  auto inst = testutil::two_cycle_instance();
  CHECK(simple_cycle_lengths(inst.graph) == std::set<int>{3, 6});
  SECTION("acyclic graphs have none") {
    Graph dag = Graph::directed(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
    CHECK(simple_cycle_lengths(dag).empty());
  }
  SECTION("undirected triangles walk both ways") {
    Graph k3 = family_graph(Family::complete, 3);
    CHECK(simple_cycle_lengths(k3) == std::set<int>{2, 3});
  }
  SECTION("oversized graphs are rejected") {
    Graph big = family_graph(Family::cycle, 30);
    CHECK_THROWS_AS(simple_cycle_lengths(big), std::length_error);
  }
}

TEST_CASE("random walk hitting times") {
  Graph path = family_graph(Family::path, 5);
  auto h = walk_hitting_times(path, 0);
  REQUIRE(h[0].has_value());
  CHECK(*h[0] == Rational(0));
  REQUIRE(h[4].has_value());
  CHECK(*h[4] == Rational(16));
  SECTION("a shortcut edge strictly helps the far end") {
    Graph shortcut = Graph::undirected(
        5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {1, 3}});
    auto hs = walk_hitting_times(shortcut, 0);
    REQUIRE(hs[4].has_value());
    CHECK(*hs[4] == Rational(40, 3));
    CHECK(*hs[4] < *h[4]);
  }
  SECTION("unreachable nodes report no value") {
    Graph g = Graph::directed(3, {{0, 1}, {1, 0}, {1, 2}});
    auto hd = walk_hitting_times(g, 2);
    CHECK(hd[0].has_value());
    Graph iso = Graph::directed(3, {{0, 1}, {1, 0}, {2, 2}});
    auto hi = walk_hitting_times(iso, 0);
    CHECK_FALSE(hi[2].has_value());
  }
}
