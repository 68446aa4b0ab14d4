// Acceptance suite. Prints one PASS/FAIL line per criterion; `--only N`
// restricts the run to criterion N. Exit code is 0 only when every selected
// criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ksl/adversary.hpp"
#include "ksl/error.hpp"
#include "ksl/generators.hpp"
#include "ksl/gpc.hpp"
#include "ksl/offline.hpp"
#include "ksl/spanner.hpp"
#include "ksl/tree_decomposition.hpp"
#include "ksl_cli.hpp"
#include "oracles.hpp"

using namespace ksl;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  json report;  // deterministic measurements, compared byte-wise by criterion 10
};

// Smallest b with 2^b >= x, by repeated doubling.
int bits_for(std::uint64_t x) {
  int b = 0;
  std::uint64_t cap = 1;
  while (cap < x) {
    cap *= 2;
    ++b;
  }
  return b;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

Outcome gpc_optimality() {
  Outcome o;
  SplitMix64 rng(1001);
  int optimal = 0, within = 0;
  json rows = json::array();
  for (int i = 0; i < 200; ++i) {
    const int n_vertices = static_cast<int>(rng.uniform(2, 25));
    const int tw = static_cast<int>(rng.uniform(1, 4));
    auto [g, td] = random_partial_ktree(rng, n_vertices, tw, 5);
    const Configuration init = random_configuration(rng, n_vertices, static_cast<int>(rng.uniform(1, 3)));
    const auto sigma = random_sequence(rng, n_vertices, static_cast<std::size_t>(rng.uniform(0, 30)));
    const DistanceMatrix dm = all_pairs_shortest_paths(g);
    const TreeDecomposition reduced = reduce_height(td);
    const OptResult opt = opt_cost_dp(dm, init, sigma);
    AdviceTape tape = generate_advice(dm, reduced, init, sigma, opt.schedule);
    const GpcRun run = run_online(dm, reduced, init, sigma, tape);
    const std::size_t bound = (2 * sigma.size() + static_cast<std::size_t>(init.k())) *
                              static_cast<std::size_t>(bits_for(static_cast<std::uint64_t>(reduced.height()) + 1) +
                                                       bits_for(static_cast<std::uint64_t>(reduced.width()) + 1));
    optimal += run.online_cost == opt.cost;
    within += run.bits_read <= bound;
    rows.push_back({i, n_vertices, init.k(), sigma.size(), run.online_cost, opt.cost, run.bits_read, bound});
  }
  o.pass = optimal == 200 && within == 200;
  o.detail = "optimal " + std::to_string(optimal) + "/200, within bit bound " + std::to_string(within) + "/200";
  o.report = rows;
  return o;
}

Outcome round_dichotomy() {
  Outcome o;
  const auto d = oracle::bellman_ford(path_graph(5));
  bool ok = true;
  json rows = json::array();
  for (bool type : {false, true}) {
    const RoundCostSplit split = round_cost_split(type);
    const Weight brute = oracle::brute_force_opt(d, {1, 3}, path_round_sequence({type}, 5));
    ok = ok && split.matched == 4 && split.mismatched >= 6 && brute == 4;
    rows.push_back({type, split.matched, split.mismatched, brute});
  }
  const DistanceMatrix dm = all_pairs_shortest_paths(path_graph(5));
  for (unsigned mask = 0; mask < 8; ++mask) {
    const RoundBits bits{(mask & 1U) != 0, (mask & 2U) != 0, (mask & 4U) != 0};
    const Weight cost = opt_cost_dp(dm, path_round_start(), path_round_sequence(bits, 5)).cost;
    ok = ok && cost == 12;
    rows.push_back({mask, cost});
  }
  o.pass = ok;
  o.detail = "matched 4, mismatched >= 6, three rounds cost 12 for all 8 type strings: " + std::string(ok ? "yes" : "no");
  o.report = rows;
  return o;
}

Outcome bound_values() {
  Outcome o;
  const double n = 1e6;
  const double at_six_fifths = sgkh_advice_bound(6.0 / 5.0, n) / n;
  const double at_seven_sixths = sgkh_advice_bound(7.0 / 6.0, n) / n;
  const double at_five_quarters = sgkh_advice_bound(5.0 / 4.0, n) / n;
  const double near_one = sgkh_advice_bound(1.0 + 1e-12, n) / n;
  const bool a = std::fabs(at_six_fifths - 0.007262) <= 1e-6;
  const bool b = std::fabs(at_seven_sixths - 0.020425) <= 1e-6;
  const bool c = std::fabs(at_five_quarters) <= 1e-12;
  const bool d = std::fabs(near_one - 1.0 / 7.0) <= 1e-6;
  o.pass = a && b && c && d;
  o.detail = "tau=6/5 " + fmt(at_six_fifths) + " (want 0.007262) " + (a ? "ok" : "MISMATCH") + "; tau=7/6 " +
             fmt(at_seven_sixths) + " (want 0.020425) " + (b ? "ok" : "MISMATCH") + "; tau=5/4 " +
             fmt(at_five_quarters) + (c ? " ok" : " MISMATCH") + "; tau->1 " + fmt(near_one) + " vs 1/7 " +
             (d ? "ok" : "MISMATCH");
  o.report = {fmt(at_six_fifths, 12), fmt(at_seven_sixths, 12), fmt(at_five_quarters, 12), fmt(near_one, 12)};
  return o;
}

Outcome construction_fidelity() {
  Outcome o;
  bool ok = true;
  json rows = json::array();
  for (int gamma : {2, 3}) {
    const int unit_n = unit_graph(gamma).graph.vertex_count();
    const TreeDecomposition td = module_graph_decomposition(gamma);
    const bool module_ok = !verify_decomposition(module_graph(gamma), td).has_value();
    bool sizes_ok = true;
    for (const auto& bag : td.bags()) sizes_ok = sizes_ok && static_cast<int>(bag.size()) == 2 * gamma + 1;
    ok = ok && unit_n == gamma + (1 << gamma) - 1 && module_ok && sizes_ok;
    rows.push_back({gamma, unit_n, td.bag_count(), module_ok, sizes_ok});
    for (int m : {1, 2, 3}) {
      const TreeDecomposition gb = gb_decomposition(m, gamma);
      const bool gb_ok = !verify_decomposition(gb_graph(m, gamma), gb).has_value() && gb.width() == 2 * gamma;
      ok = ok && gb_ok;
      rows.push_back({gamma, m, gb.width(), gb_ok});
    }
  }
  o.pass = ok;
  o.detail = "unit sizes, module bags of size 2g+1, joined widths 2g for g in {2,3}: " + std::string(ok ? "yes" : "no");
  o.report = rows;
  return o;
}

Outcome perm_uniqueness() {
  Outcome o;
  const ModuleFamily f(2, 1, false);
  const DistanceMatrix dm = all_pairs_shortest_paths(module_graph(2));
  int checked = 0, good = 0;
  json rows = json::array();
  for (int rounds : {1, 2}) {
    for (const auto& vs : all_valid_sequences(f, rounds)) {
      const Schedule perm = perm_algorithm(dm, f, f.start(), vs.requests);
      const Weight opt = opt_cost_dp(dm, f.start(), vs.requests).cost;
      const auto all = opt_all_schedules(dm, f.start(), vs.requests);
      const bool ok = perm.total_cost == static_cast<Weight>(vs.requests.size()) && perm.total_cost == opt &&
                      all.size() == 1 && all.front() == perm;
      ++checked;
      good += ok;
      rows.push_back({rounds, vs.requests, perm.total_cost, opt, all.size()});
    }
  }
  o.pass = checked > 0 && good == checked;
  o.detail = std::to_string(good) + "/" + std::to_string(checked) + " sequences with PERM as the single optimum";
  o.report = rows;
  return o;
}

Outcome sequence_counting() {
  Outcome o;
  const ModuleFamily f(2, 1, false);
  std::set<std::vector<Vertex>> distinct;
  for (const auto& vs : all_valid_sequences(f, 1)) distinct.insert(vs.requests);
  const auto formula = count_valid_sequences(2, 8);
  const TreewidthAdviceBound small = treewidth_advice_bound(4, 8);
  const TreewidthAdviceBound big = treewidth_advice_bound(8, 1000);
  const bool count_ok = distinct.size() == 4 && formula == 4;
  const bool forms_ok = std::fabs(small.exact_bits - 2) < 1e-12 &&
                        std::fabs(big.exact_bits - 1000.0 / 8 * std::log2(24.0)) < 1e-9 &&
                        std::fabs(big.closed_form_bits - 890) < 1e-9;
  o.pass = count_ok && forms_ok;
  o.detail = "distinct " + std::to_string(distinct.size()) + ", formula " + formula.str() + ", alpha=8 n=1000 exact " +
             fmt(big.exact_bits, 1) + " closed form " + fmt(big.closed_form_bits, 1);
  o.report = {distinct.size(), formula.str(), fmt(small.exact_bits, 9), fmt(big.exact_bits, 9),
              fmt(big.closed_form_bits, 9), fmt(big.stirling_bits, 9)};
  return o;
}

Outcome spanner_competitiveness() {
  Outcome o;
  const Graph grid = grid_graph(4, 4);
  const DistanceMatrix gdm = all_pairs_shortest_paths(grid);
  std::vector<SpannerTree> trees{shortest_path_tree(grid, gdm, 0), shortest_path_tree(grid, gdm, 15)};
  const StretchReport measured = verify_stretch(gdm, SpannerSystem(trees, 1, 0), 1, 0);
  const SpannerSystem system(trees, measured.measured_q(), 0);
  const bool stretch_ok = verify_stretch(gdm, system, system.q(), system.r()).ok;
  const int log_mu = bits_for(2);
  const int loglog = bits_for(static_cast<std::uint64_t>(bits_for(16)));
  SplitMix64 rng(7007);
  int violations = 0, over_budget = 0;
  json rows = json::array();
  for (int i = 0; i < 50; ++i) {
    const Configuration init = random_configuration(rng, 16, 2);
    const auto sigma = random_sequence(rng, 16, static_cast<std::size_t>(rng.uniform(1, 20)));
    const OptResult opt = opt_cost_dp(gdm, init, sigma);
    AdviceTape tape = generate_advice_spanner(gdm, system, init, sigma, opt.schedule);
    const SpannerRun run = run_online_spanner(gdm, system, init, sigma, tape);
    const std::size_t budget = sigma.size() * static_cast<std::size_t>(2 * log_mu + 2 * loglog) +
                               2 * static_cast<std::size_t>(log_mu + loglog);
    violations += static_cast<double>(run.online_cost) > (system.q() + system.r()) * static_cast<double>(opt.cost) + 1e-9;
    over_budget += run.bits_read > budget;
    rows.push_back({i, run.online_cost, opt.cost, run.bits_read, budget});
  }
  int tree_mismatch = 0;
  for (int i = 0; i < 50; ++i) {
    const int n_vertices = static_cast<int>(rng.uniform(2, 20));
    const Graph t = random_tree(rng, n_vertices, 4);
    const DistanceMatrix dm = all_pairs_shortest_paths(t);
    const SpannerSystem single({shortest_path_tree(t, dm, static_cast<Vertex>(rng.uniform(0, n_vertices - 1)))}, 1, 0);
    const Configuration init = random_configuration(rng, n_vertices, static_cast<int>(rng.uniform(1, 3)));
    const auto sigma = random_sequence(rng, n_vertices, static_cast<std::size_t>(rng.uniform(0, 20)));
    const OptResult opt = opt_cost_dp(dm, init, sigma);
    AdviceTape tape = generate_advice_spanner(dm, single, init, sigma, opt.schedule);
    const SpannerRun run = run_online_spanner(dm, single, init, sigma, tape);
    tree_mismatch += run.online_cost != opt.cost;
    rows.push_back({"tree", i, run.online_cost, opt.cost});
  }
  o.pass = stretch_ok && violations == 0 && over_budget == 0 && tree_mismatch == 0;
  o.detail = "q=" + fmt(system.q(), 3) + " r=0, violations " + std::to_string(violations) + "/50, over budget " +
             std::to_string(over_budget) + "/50, tree metric mismatches " + std::to_string(tree_mismatch) + "/50";
  o.report = {fmt(system.q(), 12), rows};
  return o;
}

Outcome bag_path_intersection() {
  Outcome o;
  SplitMix64 rng(8008);
  int misses = 0, calls = 0;
  json rows = json::array();
  for (int i = 0; i < 100; ++i) {
    const int n_vertices = static_cast<int>(rng.uniform(2, 30));
    auto [g, td] = random_partial_ktree(rng, n_vertices, static_cast<int>(rng.uniform(1, 4)), 6);
    const TreeDecomposition used = rng.chance(1, 2) ? reduce_height(td) : td;
    const DistanceMatrix dm = all_pairs_shortest_paths(g);
    const Vertex x = static_cast<Vertex>(rng.uniform(0, n_vertices - 1));
    const Vertex y = static_cast<Vertex>(rng.uniform(0, n_vertices - 1));
    const int bx = used.representative_bag(x);
    const int by = used.representative_bag(y);
    const int top = used.lca(bx, by);
    std::vector<int> path;
    for (int b = bx; b != top; b = used.parent(b)) path.push_back(b);
    for (int b = by; b != top; b = used.parent(b)) path.push_back(b);
    path.push_back(top);
    std::vector<Vertex> hits;
    for (int bag : path) {
      ++calls;
      try {
        hits.push_back(intersect_shortest_path(dm, used, x, y, bag));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kNoIntersection) throw;
        ++misses;
      }
    }
    rows.push_back({i, x, y, hits});
  }
  o.pass = misses == 0;
  o.detail = std::to_string(calls) + " bag queries over 100 triples, NoIntersection " + std::to_string(misses);
  o.report = rows;
  return o;
}

Outcome height_reduction() {
  Outcome o;
  SplitMix64 rng(9009);
  int good = 0;
  json rows = json::array();
  for (int i = 0; i < 200; ++i) {
    const int n_vertices = static_cast<int>(rng.uniform(1, 60));
    auto [g, td] = random_partial_ktree(rng, n_vertices, static_cast<int>(rng.uniform(1, 4)));
    const TreeDecomposition r = reduce_height(td);
    const int alpha = td.width();
    const int height_cap = 4 * bits_for(static_cast<std::uint64_t>(n_vertices));
    const bool ok = !verify_decomposition(g, r).has_value() && r.width() <= 3 * alpha + 2 && r.height() <= height_cap;
    good += ok;
    rows.push_back({i, n_vertices, alpha, td.height(), r.width(), r.height(), height_cap});
  }
  o.pass = good == 200;
  o.detail = std::to_string(good) + "/200 decompositions valid within width 3a+2 and height 4 ceil(log2 N)";
  o.report = rows;
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double time_limit;  // seconds, 0 when none is stated
  std::function<Outcome()> run;
};

std::vector<Criterion> criteria() {
  return {
      {1, "gpc-optimality", 60, gpc_optimality},
      {2, "round-cost-dichotomy", 5, round_dichotomy},
      {3, "bound-function-values", 0, bound_values},
      {4, "construction-fidelity", 5, construction_fidelity},
      {5, "perm-uniqueness", 30, perm_uniqueness},
      {6, "sequence-counting", 0, sequence_counting},
      {7, "spanner-competitiveness", 60, spanner_competitiveness},
      {8, "bag-path-intersection", 0, bag_path_intersection},
      {9, "height-reduction", 0, height_reduction},
  };
}

Outcome determinism() {
  Outcome o;
  int same = 0, total = 0;
  for (const auto& c : criteria()) {
    const std::string first = c.run().report.dump();
    const std::string second = c.run().report.dump();
    ++total;
    same += first == second;
  }
  std::vector<cli::RunSpec> specs(5);
  specs[0].command = "run", specs[0].family = "path-rounds", specs[0].bits = "101", specs[0].algo = "opt";
  specs[1].command = "run", specs[1].family = "module", specs[1].gamma = 2, specs[1].rounds = 1, specs[1].algo = "perm";
  specs[2].command = "run", specs[2].family = "ktree", specs[2].vertices = 18, specs[2].width = 3, specs[2].algo = "gpc",
  specs[2].instances = 5, specs[2].seed = 42;
  specs[3].command = "run", specs[3].family = "grid", specs[3].algo = "spanner", specs[3].instances = 5, specs[3].seed = 42,
  specs[3].format = "csv";
  specs[4].command = "bounds", specs[4].tau = {"6/5", "7/6", "5/4"}, specs[4].alpha = {8}, specs[4].n = 1000000;
  for (const auto& s : specs) {
    const cli::CommandResult a = cli::execute(s);
    const cli::CommandResult b = cli::execute(s);
    ++total;
    same += a.exit_code == b.exit_code && a.output == b.output && !a.output.empty();
  }
  o.pass = same == total;
  o.detail = std::to_string(same) + "/" + std::to_string(total) + " repeated reports byte-identical";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
  }
  auto list = criteria();
  list.push_back({10, "determinism", 0, determinism});
  bool all = true;
  for (const auto& c : list) {
    if (only != 0 && c.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double elapsed = seconds_since(start);
    if (c.time_limit > 0 && elapsed > c.time_limit) {
      o.pass = false;
      o.detail += "; took " + fmt(elapsed, 1) + " s, limit " + fmt(c.time_limit, 0) + " s";
    }
    all = all && o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << " " << c.name << ": " << o.detail << " ("
              << fmt(elapsed, 2) << " s)\n";
  }
  return all ? 0 : 1;
}
