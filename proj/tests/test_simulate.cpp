#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include <commnet/simulate.hpp>

using namespace commnet;

namespace {

CommunityGraph full_link_graph_n8() {
  // N = 8, c_k = 1 gives k_target = 9 > 7, so every community links to all.
  return generate(GraphParams{TreeParams(2, 4), 1.0, 1.0, 5});
}

}  // namespace

TEST_CASE("routing to yourself takes no hops") {
  const CommunityGraph g = full_link_graph_n8();
  RoutingConfig cfg;
  Rng rng(1);
  const SearchOutcome out = greedy_route(g, 3, 3, cfg, rng);
  CHECK(out.success);
  CHECK(out.inter_hops == 0);
  CHECK(out.fallback_steps == 0);
}

TEST_CASE("full links deliver in one hop") {
  const CommunityGraph g = full_link_graph_n8();
  RoutingConfig cfg;
  Rng rng(1);
  for (CommunityId src = 0; src < 8; ++src) {
    for (CommunityId dst = 0; dst < 8; ++dst) {
      if (src == dst) continue;
      const SearchOutcome out = greedy_route(g, src, dst, cfg, rng);
      CHECK(out.success);
      CHECK(out.inter_hops == 1);
    }
  }
  CHECK(exhaustive_mean_hops(g, cfg) == 1.0);
}

TEST_CASE("strict-improvement routing never exceeds the tree height") {
  // Fail-fast forbids sideways moves, so every hop cuts the distance by at
  // least one and hops <= community_distance(src, dst) <= H.
  const GraphParams gp{TreeParams(2, 7), 1.0, 1.0, 21};
  const CommunityGraph g = generate(gp);
  RoutingConfig cfg;
  cfg.fallback = Fallback::fail_fast;
  Rng rng(1);
  for (CommunityId src = 0; src < g.community_count(); ++src) {
    for (CommunityId dst = 0; dst < g.community_count(); ++dst) {
      if (src == dst) continue;
      const SearchOutcome out = greedy_route(g, src, dst, cfg, rng);
      CHECK(out.inter_hops <= community_distance(src, dst, gp.tree));
      CHECK(out.fallback_steps == 0);
    }
  }
}

TEST_CASE("successful greedy routes are never shorter than BFS") {
  for (auto [b, h] : {std::pair<std::uint64_t, std::uint64_t>{2, 7},
                      {4, 4},
                      {3, 4}}) {
    for (double beta : {0.0, 1.0, 2.0}) {
      for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        const GraphParams gp{TreeParams(b, h), beta, 0.5, seed};
        const CommunityGraph g = generate(gp);
        for (Fallback fb : {Fallback::fail_fast, Fallback::random_neighbor}) {
          RoutingConfig cfg;
          cfg.fallback = fb;
          Rng rng(seed);
          for (CommunityId src = 0; src < g.community_count(); ++src) {
            for (CommunityId dst = 0; dst < g.community_count(); ++dst) {
              if (src == dst) continue;
              const SearchOutcome out = greedy_route(g, src, dst, cfg, rng);
              if (!out.success) continue;
              const auto shortest = bfs_shortest_hops(g, src, dst);
              REQUIRE(shortest.has_value());
              CHECK(out.inter_hops >= *shortest);
            }
          }
        }
      }
    }
  }
}

TEST_CASE("hop budget caps the walk") {
  const GraphParams gp{TreeParams(2, 7), 0.0, 0.3, 9};
  const CommunityGraph g = generate(gp);
  RoutingConfig cfg;
  cfg.hop_budget = 1;
  Rng rng(4);
  for (CommunityId dst = 1; dst < 30; ++dst) {
    const SearchOutcome out = greedy_route(g, 0, dst, cfg, rng);
    CHECK(out.inter_hops <= 1);
  }
}

TEST_CASE("auto hop budget") {
  const CommunityGraph g = full_link_graph_n8();  // N = 8, (log2 N)^2 = 9
  RoutingConfig cfg;
  CHECK(resolve_hop_budget(cfg, g) == 64);
  cfg.hop_budget = 10;
  CHECK(resolve_hop_budget(cfg, g) == 10);
  const CommunityGraph big = generate(GraphParams{TreeParams(2, 8), 1, 1, 0});
  RoutingConfig auto_cfg;  // N = 128, 4 * 49 = 196
  CHECK(resolve_hop_budget(auto_cfg, big) == 196);
}

TEST_CASE("modeled time composition") {
  const CommunityGraph g = full_link_graph_n8();
  RoutingConfig cfg;
  cfg.kappa3 = 2.0;
  cfg.omega = 1.0;  // local cost 2 * b = 4 per charge
  Rng rng(1);
  const SearchOutcome out = greedy_route(g, 0, 5, cfg, rng);
  REQUIRE(out.inter_hops == 1);
  CHECK(out.modeled_time == doctest::Approx(1.0 + 2.0 * 4.0).epsilon(1e-14));

  cfg.per_hop_local_time = true;
  const SearchOutcome per_hop = greedy_route(g, 0, 5, cfg, rng);
  CHECK(per_hop.modeled_time ==
        doctest::Approx(1.0 + 2.0 * 4.0).epsilon(1e-14));  // hops+1 == 2

  const SearchOutcome self = greedy_route(g, 2, 2, cfg, rng);
  CHECK(self.modeled_time == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("run_trials is deterministic and order-insensitive") {
  const GraphParams gp{TreeParams(2, 6), 1.0, 1.0, 33};
  const CommunityGraph g = generate(gp);
  RoutingConfig cfg;
  const auto a = run_trials_detailed(g, 500, cfg, 99);
  const auto b = run_trials_detailed(g, 500, cfg, 99);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].src == b[i].src);
    CHECK(a[i].dst == b[i].dst);
    CHECK(a[i].outcome.inter_hops == b[i].outcome.inter_hops);
    CHECK(a[i].outcome.success == b[i].outcome.success);
  }
  // aggregating a reversed copy gives identical statistics
  auto reversed = a;
  std::reverse(reversed.begin(), reversed.end());
  const TrialStats sa = aggregate_trials(a);
  const TrialStats sr = aggregate_trials(reversed);
  CHECK(sa.mean_hops == sr.mean_hops);
  CHECK(sa.std_hops == sr.std_hops);
  CHECK(sa.p50 == sr.p50);
  CHECK(sa.p95 == sr.p95);
  CHECK(sa.failure_rate == sr.failure_rate);
}

TEST_CASE("two communities: every trial is one hop") {
  const CommunityGraph g = generate(GraphParams{TreeParams(2, 2), 1, 1, 0});
  RoutingConfig cfg;
  const TrialStats stats = run_trials(g, 200, cfg, 7);
  CHECK(stats.mean_hops == 1.0);
  CHECK(stats.failure_rate == 0.0);
  CHECK(stats.std_hops == 0.0);
}

TEST_CASE("monte carlo agrees with the exhaustive oracle") {
  // Sparse N = 8 graph (out-degree 2) so routing is nontrivial.
  const GraphParams gp{TreeParams(2, 4), 1.0, 0.2, 11};
  const CommunityGraph g = generate(gp);
  REQUIRE(g.out_links[0].size() == 2);
  RoutingConfig cfg;
  cfg.fallback = Fallback::fail_fast;

  // self-consistency: the oracle equals direct enumeration
  Rng rng(0);
  double sum = 0.0;
  std::uint64_t succ = 0;
  for (CommunityId src = 0; src < 8; ++src) {
    for (CommunityId dst = 0; dst < 8; ++dst) {
      if (src == dst) continue;
      const SearchOutcome out = greedy_route(g, src, dst, cfg, rng);
      if (out.success) {
        sum += static_cast<double>(out.inter_hops);
        ++succ;
      }
    }
  }
  REQUIRE(succ > 0);
  const double oracle = exhaustive_mean_hops(g, cfg);
  CHECK(oracle == doctest::Approx(sum / succ).epsilon(1e-14));

  const TrialStats mc = run_trials(g, 1000000, cfg, 123);
  const double sigma =
      mc.std_hops / std::sqrt(static_cast<double>(mc.successes));
  CHECK(std::abs(mc.mean_hops - oracle) < 3.0 * sigma);
}

TEST_CASE("exhaustive oracle refuses large graphs") {
  const CommunityGraph g = generate(GraphParams{TreeParams(2, 10), 1, 1, 0});
  RoutingConfig cfg;
  CHECK_THROWS_AS(exhaustive_mean_hops(g, cfg), std::invalid_argument);
}

TEST_CASE("bfs oracle") {
  const CommunityGraph g = full_link_graph_n8();
  CHECK(bfs_shortest_hops(g, 3, 3) == 0);
  CHECK(bfs_shortest_hops(g, 0, 7) == 1);

  // a graph with an unreachable target
  CommunityGraph isolated = g;
  for (auto& links : isolated.out_links) {
    links.erase(std::remove(links.begin(), links.end(), CommunityId{7}),
                links.end());
  }
  isolated.out_links[7].clear();
  CHECK(!bfs_shortest_hops(isolated, 0, 7).has_value());
}

TEST_CASE("trial statistics aggregation") {
  std::vector<TrialRecord> records;
  for (std::uint64_t i = 0; i < 10; ++i) {
    TrialRecord r;
    r.trial_id = i;
    r.outcome.success = true;
    r.outcome.inter_hops = i + 1;  // 1..10
    records.push_back(r);
  }
  for (std::uint64_t i = 10; i < 12; ++i) {
    TrialRecord r;
    r.trial_id = i;
    r.outcome.success = false;
    records.push_back(r);
  }
  const TrialStats stats = aggregate_trials(records);
  CHECK(stats.trials == 12);
  CHECK(stats.successes == 10);
  CHECK(stats.failure_rate == doctest::Approx(2.0 / 12.0).epsilon(1e-14));
  CHECK(stats.mean_hops == doctest::Approx(5.5).epsilon(1e-14));
  CHECK(stats.std_hops ==
        doctest::Approx(std::sqrt(55.0 / 6.0)).epsilon(1e-12));
  CHECK(stats.p50 == 5.0);
  CHECK(stats.p95 == 10.0);
}

TEST_CASE("run_trials validates arguments") {
  const CommunityGraph g = full_link_graph_n8();
  RoutingConfig cfg;
  CHECK_THROWS_AS(run_trials(g, 0, cfg, 1), std::invalid_argument);
  const CommunityGraph single =
      generate(GraphParams{TreeParams(2, 1), 1, 1, 0});
  CHECK_THROWS_AS(run_trials(single, 10, cfg, 1), std::invalid_argument);
}

TEST_CASE("trial csv export") {
  const CommunityGraph g = full_link_graph_n8();
  RoutingConfig cfg;
  const auto records = run_trials_detailed(g, 3, cfg, 42);
  std::stringstream ss;
  write_trials_csv(ss, records);
  std::string line;
  std::getline(ss, line);
  CHECK(line ==
        "trial_id,src,dst,inter_hops,success,fallback_steps,modeled_time");
  int rows = 0;
  while (std::getline(ss, line)) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 3);
}
