#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "ksl/adversary.hpp"
#include "ksl/error.hpp"
#include "ksl/generators.hpp"
#include "ksl/offline.hpp"
#include "oracles.hpp"

using namespace ksl;

namespace {

struct Instance {
  Graph graph;
  DistanceMatrix dm;
  Configuration init;
  std::vector<Vertex> sigma;
};

Instance random_instance(SplitMix64& rng, int max_n, int max_k, int max_len, Weight max_weight) {
  Instance in;
  const int n = static_cast<int>(rng.uniform(2, max_n));
  in.graph = random_partial_ktree(rng, n, static_cast<int>(rng.uniform(1, 3)), max_weight).graph;
  in.dm = all_pairs_shortest_paths(in.graph);
  in.init = random_configuration(rng, n, static_cast<int>(rng.uniform(1, max_k)));
  in.sigma = random_sequence(rng, n, static_cast<std::size_t>(rng.uniform(0, max_len)));
  return in;
}

}  // namespace

TEST(OfflineDp, EmptySequenceCostsNothing) {
  DistanceMatrix dm = all_pairs_shortest_paths(path_graph(5));
  OptResult r = opt_cost_dp(dm, Configuration{{1, 3}}, {});
  EXPECT_EQ(r.cost, 0);
  EXPECT_TRUE(r.schedule.moves.empty());
  EXPECT_EQ(opt_cost_flow(dm, Configuration{{1, 3}}, {}).cost, 0);
}

TEST(OfflineDp, SingleRoundOnPathCostsFour) {
  DistanceMatrix dm = all_pairs_shortest_paths(path_graph(5));
  const std::vector<Vertex> sigma{2, 4, 2, 1, 3, 1, 3};
  OptResult r = opt_cost_dp(dm, path_round_start(), sigma);
  EXPECT_EQ(r.cost, 4);
  EXPECT_EQ(replay_schedule(dm, path_round_start(), sigma, r.schedule), 4);
}

TEST(OfflineDp, ThreeRoundsCostTwelveBothSolvers) {
  DistanceMatrix dm = all_pairs_shortest_paths(path_graph(5));
  auto sigma = path_round_sequence(parse_round_bits("101"), 5);
  EXPECT_EQ(opt_cost_dp(dm, path_round_start(), sigma).cost, 12);
  EXPECT_EQ(opt_cost_flow(dm, path_round_start(), sigma).cost, 12);
}

TEST(OfflineDp, ModuleRoundCostsEight) {
  ModuleFamily f(2, 1, false);
  DistanceMatrix dm = all_pairs_shortest_paths(f.graph());
  ValidSequence vs = valid_sequence(f, {{{{0, 1}}, {{0, 1}}}});
  EXPECT_EQ(opt_cost_dp(dm, f.start(), vs.requests).cost, 8);
}

TEST(OfflineDp, MatchesBruteForceOnTinyInstances) {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 80; ++trial) {
    Instance in = random_instance(rng, 7, 3, 7, 6);
    auto ref = oracle::bellman_ford(in.graph);
    const Weight expected = oracle::brute_force_opt(ref, in.init.positions, in.sigma);
    OptResult r = opt_cost_dp(in.dm, in.init, in.sigma);
    ASSERT_EQ(r.cost, expected) << "trial " << trial;
    ASSERT_EQ(replay_schedule(in.dm, in.init, in.sigma, r.schedule), r.cost);
  }
}

TEST(OfflineFlow, AgreesWithDpOnHundredInstances) {
  SplitMix64 rng(314);
  for (int trial = 0; trial < 100; ++trial) {
    Instance in = random_instance(rng, 12, 3, 15, 9);
    OptResult dp = opt_cost_dp(in.dm, in.init, in.sigma);
    OptResult flow = opt_cost_flow(in.dm, in.init, in.sigma);
    ASSERT_EQ(flow.cost, dp.cost) << "trial " << trial;
    ASSERT_EQ(replay_schedule(in.dm, in.init, in.sigma, flow.schedule), flow.cost);
  }
}

TEST(OfflineAll, SymmetricRequestHasTwoOptima) {
  DistanceMatrix dm = all_pairs_shortest_paths(path_graph(5));
  const std::vector<Vertex> sigma{2};
  auto all = opt_all_schedules(dm, Configuration{{1, 3}}, sigma);
  ASSERT_EQ(all.size(), 2u);
  EXPECT_NE(all[0].moves[0].server, all[1].moves[0].server);
  for (const auto& s : all) EXPECT_EQ(s.total_cost, 1);
}

TEST(OfflineAll, SingleServerHasOneSchedule) {
  DistanceMatrix dm = all_pairs_shortest_paths(path_graph(5));
  const std::vector<Vertex> sigma{4};
  EXPECT_EQ(opt_all_schedules(dm, Configuration{{0}}, sigma).size(), 1u);
}

TEST(OfflineAll, EverySchedulePassesReplayAndIsDistinct) {
  SplitMix64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    Instance in = random_instance(rng, 6, 3, 6, 3);
    const Weight best = opt_cost_dp(in.dm, in.init, in.sigma).cost;
    auto all = opt_all_schedules(in.dm, in.init, in.sigma);
    ASSERT_FALSE(all.empty());
    for (std::size_t i = 0; i < all.size(); ++i) {
      ASSERT_EQ(replay_schedule(in.dm, in.init, in.sigma, all[i]), best);
      for (std::size_t j = 0; j < i; ++j) ASSERT_FALSE(all[i] == all[j]);
    }
  }
}

TEST(OfflineAll, RoundBoundariesCanBeNormalized) {
  DistanceMatrix dm = all_pairs_shortest_paths(path_graph(5));
  for (const char* bits : {"000", "011", "101", "110"}) {
    auto sigma = path_round_sequence(parse_round_bits(bits), 5);
    auto all = opt_all_schedules(dm, path_round_start(), sigma);
    bool normalized = false;
    for (const auto& s : all) {
      auto trace = configuration_trace(path_round_start(), s);
      bool ok = true;
      for (std::size_t t = 0; t <= sigma.size(); t += kRoundLength) {
        auto c = trace[t];
        std::sort(c.begin(), c.end());
        ok = ok && c == std::vector<Vertex>{1, 3};
      }
      normalized = normalized || ok;
    }
    EXPECT_TRUE(normalized) << bits;
  }
}

TEST(OfflineReplay, RejectsInconsistentSchedules) {
  DistanceMatrix dm = all_pairs_shortest_paths(path_graph(5));
  const std::vector<Vertex> sigma{2, 4};
  Schedule s = opt_cost_dp(dm, Configuration{{1, 3}}, sigma).schedule;
  s.moves[1].to = 0;
  EXPECT_THROW(replay_schedule(dm, Configuration{{1, 3}}, sigma, s), Error);
}

TEST(OfflineLazy, ConversionNeverIncreasesCost) {
  SplitMix64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    Instance in = random_instance(rng, 9, 3, 10, 5);
    Schedule s = opt_cost_dp(in.dm, in.init, in.sigma).schedule;
    Schedule lazy = make_lazy(in.dm, s);
    EXPECT_LE(replay_schedule(in.dm, in.init, in.sigma, lazy), s.total_cost);
  }
}

TEST(OfflineJson, ScheduleRoundTrip) {
  DistanceMatrix dm = all_pairs_shortest_paths(path_graph(5));
  auto sigma = path_round_sequence(parse_round_bits("10"), 5);
  Schedule s = opt_cost_dp(dm, path_round_start(), sigma).schedule;
  EXPECT_EQ(schedule_from_json(schedule_to_json(s)), s);
  EXPECT_THROW(schedule_from_json(nlohmann::json::parse("{\"moves\": 3}")), Error);
}
