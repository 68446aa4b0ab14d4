#include "ksl/offline.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "ksl/error.hpp"

namespace ksl {
namespace {

using Key = std::uint64_t;
using Layer = std::unordered_map<Key, Weight>;

void check_inputs(const DistanceMatrix& dm, const Configuration& init, std::span<const Vertex> sigma) {
  if (init.k() == 0) throw Error(ErrorCode::kInvalidArgument, "at least one server is required");
  for (Vertex v : init.positions) {
    if (v < 0 || v >= dm.size()) throw Error(ErrorCode::kVertexOutOfRange, "initial position out of range");
  }
  for (Vertex v : sigma) {
    if (v < 0 || v >= dm.size()) throw Error(ErrorCode::kVertexOutOfRange, "request out of range");
  }
}

void check_guard(int n_vertices, int k, std::size_t n, double guard) {
  double states = std::pow(static_cast<double>(n_vertices), k) * static_cast<double>(n);
  if (states > guard) {
    throw Error(ErrorCode::kInstanceTooLarge,
                "N^k*n = " + std::to_string(states) + " exceeds guard " + std::to_string(guard));
  }
}

class ConfigCodec {
 public:
  ConfigCodec(int n_vertices, int k) : base_(static_cast<Key>(n_vertices)), k_(k) {}

  Key encode(const std::vector<Vertex>& sorted) const {
    Key key = 0;
    for (Vertex v : sorted) key = key * base_ + static_cast<Key>(v);
    return key;
  }

  std::vector<Vertex> decode(Key key) const {
    std::vector<Vertex> out(static_cast<std::size_t>(k_));
    for (int i = k_ - 1; i >= 0; --i) {
      out[static_cast<std::size_t>(i)] = static_cast<Vertex>(key % base_);
      key /= base_;
    }
    return out;
  }

 private:
  Key base_;
  int k_;
};

bool contains(const std::vector<Vertex>& config, Vertex v) {
  return std::binary_search(config.begin(), config.end(), v);
}

// Replace one occurrence of `from` by `to`, keeping the multiset sorted.
std::vector<Vertex> replace_one(std::vector<Vertex> config, Vertex from, Vertex to) {
  auto it = std::lower_bound(config.begin(), config.end(), from);
  *it = to;
  std::sort(config.begin(), config.end());
  return config;
}

std::vector<Layer> forward_layers(const DistanceMatrix& dm, const Configuration& init, std::span<const Vertex> sigma,
                                  const ConfigCodec& codec) {
  std::vector<Layer> layers(sigma.size() + 1);
  layers[0][codec.encode(init.sorted())] = 0;
  for (std::size_t t = 1; t <= sigma.size(); ++t) {
    const Vertex r = sigma[t - 1];
    Layer& next = layers[t];
    auto relax = [&](Key key, Weight cost) {
      auto [it, inserted] = next.try_emplace(key, cost);
      if (!inserted && cost < it->second) it->second = cost;
    };
    for (const auto& [key, cost] : layers[t - 1]) {
      auto config = codec.decode(key);
      if (contains(config, r)) {
        relax(key, cost);
        continue;
      }
      for (std::size_t i = 0; i < config.size(); ++i) {
        if (i > 0 && config[i] == config[i - 1]) continue;
        relax(codec.encode(replace_one(config, config[i], r)), cost + dm(config[i], r));
      }
    }
  }
  return layers;
}

// Predecessors of `config` in layer t-1 that lie on a cost-optimal path into
// (t, config). The no-move option comes first, then moves by source vertex.
std::vector<std::vector<Vertex>> optimal_predecessors(const DistanceMatrix& dm, const std::vector<Layer>& layers,
                                                      const ConfigCodec& codec, std::size_t t, Vertex r,
                                                      const std::vector<Vertex>& config, Weight cost) {
  std::vector<std::vector<Vertex>> preds;
  const Layer& prev = layers[t - 1];
  if (contains(config, r)) {
    auto it = prev.find(codec.encode(config));
    if (it != prev.end() && it->second == cost) preds.push_back(config);
    if (std::count(config.begin(), config.end(), r) == 1) {
      for (Vertex p = 0; p < dm.size(); ++p) {
        if (p == r) continue;
        auto candidate = replace_one(config, r, p);
        auto jt = prev.find(codec.encode(candidate));
        if (jt != prev.end() && jt->second + dm(p, r) == cost) preds.push_back(std::move(candidate));
      }
    }
  }
  return preds;
}

Schedule schedule_from_trace(const DistanceMatrix& dm, const Configuration& init, std::span<const Vertex> sigma,
                             const std::vector<std::vector<Vertex>>& trace) {
  Schedule s;
  std::vector<Vertex> pos = init.positions;
  auto lowest_at = [&](Vertex v) {
    for (std::size_t i = 0; i < pos.size(); ++i) {
      if (pos[i] == v) return static_cast<int>(i);
    }
    return -1;
  };
  for (std::size_t t = 0; t < sigma.size(); ++t) {
    const Vertex r = sigma[t];
    const auto& before = trace[t];
    const auto& after = trace[t + 1];
    Move m;
    m.t = t;
    m.to = r;
    if (before == after) {
      m.server = lowest_at(r);
      m.from = r;
    } else {
      // The vertex whose multiplicity dropped is the source.
      std::vector<Vertex> diff;
      std::set_difference(before.begin(), before.end(), after.begin(), after.end(), std::back_inserter(diff));
      m.from = diff.at(0);
      m.server = lowest_at(m.from);
      m.cost = dm(m.from, r);
      pos[static_cast<std::size_t>(m.server)] = r;
    }
    s.total_cost += m.cost;
    s.moves.push_back(m);
  }
  return s;
}

// Successive-shortest-path min-cost flow with Johnson potentials.
class MinCostFlow {
 public:
  explicit MinCostFlow(int nodes) : adj_(static_cast<std::size_t>(nodes)) {}

  int add_arc(int from, int to, int cap, Weight cost) {
    arcs_.push_back({to, cap, cost});
    adj_[from].push_back(static_cast<int>(arcs_.size()) - 1);
    arcs_.push_back({from, 0, -cost});
    adj_[to].push_back(static_cast<int>(arcs_.size()) - 1);
    return static_cast<int>(arcs_.size()) - 2;
  }

  // Sends `amount` units from s to t; returns the total cost.
  Weight solve(int s, int t, int amount) {
    const std::size_t n = adj_.size();
    constexpr Weight kInf = std::numeric_limits<Weight>::max() / 4;
    std::vector<Weight> potential(n, kInf);
    potential[static_cast<std::size_t>(s)] = 0;
    // Bellman-Ford for the initial potentials (the arc set is acyclic).
    for (std::size_t round = 0; round < n; ++round) {
      bool changed = false;
      for (std::size_t u = 0; u < n; ++u) {
        if (potential[u] == kInf) continue;
        for (int a : adj_[u]) {
          const Arc& arc = arcs_[static_cast<std::size_t>(a)];
          if (arc.cap > 0 && potential[u] + arc.cost < potential[static_cast<std::size_t>(arc.to)]) {
            potential[static_cast<std::size_t>(arc.to)] = potential[u] + arc.cost;
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    for (auto& p : potential) {
      if (p == kInf) p = 0;
    }

    Weight total = 0;
    for (int unit = 0; unit < amount; ++unit) {
      std::vector<Weight> dist(n, kInf);
      std::vector<int> via_arc(n, -1);
      using Item = std::pair<Weight, int>;
      std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
      dist[static_cast<std::size_t>(s)] = 0;
      queue.push({0, s});
      while (!queue.empty()) {
        auto [d, u] = queue.top();
        queue.pop();
        if (d != dist[static_cast<std::size_t>(u)]) continue;
        for (int a : adj_[static_cast<std::size_t>(u)]) {
          const Arc& arc = arcs_[static_cast<std::size_t>(a)];
          if (arc.cap == 0) continue;
          Weight reduced = arc.cost + potential[static_cast<std::size_t>(u)] - potential[static_cast<std::size_t>(arc.to)];
          Weight nd = d + reduced;
          if (nd < dist[static_cast<std::size_t>(arc.to)]) {
            dist[static_cast<std::size_t>(arc.to)] = nd;
            via_arc[static_cast<std::size_t>(arc.to)] = a;
            queue.push({nd, arc.to});
          }
        }
      }
      if (dist[static_cast<std::size_t>(t)] == kInf) throw Error(ErrorCode::kInvalidArgument, "flow infeasible");
      for (std::size_t v = 0; v < n; ++v) {
        if (dist[v] != kInf) potential[v] += dist[v];
      }
      for (int v = t; v != s;) {
        int a = via_arc[static_cast<std::size_t>(v)];
        arcs_[static_cast<std::size_t>(a)].cap -= 1;
        arcs_[static_cast<std::size_t>(a ^ 1)].cap += 1;
        total += arcs_[static_cast<std::size_t>(a)].cost;
        v = arcs_[static_cast<std::size_t>(a ^ 1)].to;
      }
    }
    return total;
  }

  bool saturated(int arc) const { return arcs_[static_cast<std::size_t>(arc)].cap == 0; }
  int head(int arc) const { return arcs_[static_cast<std::size_t>(arc)].to; }
  const std::vector<int>& out_arcs(int node) const { return adj_[static_cast<std::size_t>(node)]; }
  static bool forward(int arc) { return (arc & 1) == 0; }

 private:
  struct Arc {
    int to;
    int cap;
    Weight cost;
  };
  std::vector<Arc> arcs_;
  std::vector<std::vector<int>> adj_;
};

}  // namespace

std::vector<Vertex> Configuration::sorted() const {
  auto out = positions;
  std::sort(out.begin(), out.end());
  return out;
}

Weight replay_schedule(const DistanceMatrix& dm, const Configuration& init, std::span<const Vertex> sigma,
                       const Schedule& schedule) {
  auto fail = [](std::size_t t, const std::string& why) {
    throw Error(ErrorCode::kScheduleMismatch, "request " + std::to_string(t) + ": " + why);
  };
  if (schedule.moves.size() != sigma.size()) {
    throw Error(ErrorCode::kScheduleMismatch, "schedule has " + std::to_string(schedule.moves.size()) +
                                                  " moves for " + std::to_string(sigma.size()) + " requests");
  }
  std::vector<Vertex> pos = init.positions;
  Weight total = 0;
  for (std::size_t t = 0; t < sigma.size(); ++t) {
    const Move& m = schedule.moves[t];
    if (m.t != t) fail(t, "moves out of order");
    if (m.server < 0 || m.server >= init.k()) fail(t, "unknown server " + std::to_string(m.server));
    if (pos[static_cast<std::size_t>(m.server)] != m.from) {
      fail(t, "server " + std::to_string(m.server) + " is at " + std::to_string(pos[static_cast<std::size_t>(m.server)]) +
                  ", not " + std::to_string(m.from));
    }
    if (m.to != sigma[t]) fail(t, "move ends at " + std::to_string(m.to) + " but request is " + std::to_string(sigma[t]));
    Weight cost = m.via ? dm(m.from, *m.via) + dm(*m.via, m.to) : dm(m.from, m.to);
    if (cost != m.cost) fail(t, "declared cost " + std::to_string(m.cost) + " but route costs " + std::to_string(cost));
    pos[static_cast<std::size_t>(m.server)] = m.to;
    total += cost;
  }
  if (total != schedule.total_cost) {
    throw Error(ErrorCode::kScheduleMismatch, "declared total " + std::to_string(schedule.total_cost) +
                                                  " but moves sum to " + std::to_string(total));
  }
  return total;
}

Schedule make_lazy(const DistanceMatrix& dm, const Schedule& schedule) {
  Schedule out;
  for (Move m : schedule.moves) {
    m.via.reset();
    m.cost = dm(m.from, m.to);
    out.total_cost += m.cost;
    out.moves.push_back(m);
  }
  return out;
}

std::vector<std::vector<Vertex>> configuration_trace(const Configuration& init, const Schedule& schedule) {
  std::vector<std::vector<Vertex>> trace{init.sorted()};
  Configuration cur = init;
  for (const Move& m : schedule.moves) {
    cur.positions[static_cast<std::size_t>(m.server)] = m.to;
    trace.push_back(cur.sorted());
  }
  return trace;
}

OptResult opt_cost_dp(const DistanceMatrix& dm, const Configuration& init, std::span<const Vertex> sigma) {
  check_inputs(dm, init, sigma);
  check_guard(dm.size(), init.k(), sigma.size(), kDpStateGuard);
  ConfigCodec codec(dm.size(), init.k());
  auto layers = forward_layers(dm, init, sigma, codec);

  const Layer& last = layers.back();
  Key best_key = 0;
  Weight best = std::numeric_limits<Weight>::max();
  for (const auto& [key, cost] : last) {
    if (cost < best || (cost == best && key < best_key)) {
      best = cost;
      best_key = key;
    }
  }
  std::vector<std::vector<Vertex>> trace(sigma.size() + 1);
  trace.back() = codec.decode(best_key);
  Weight cost = best;
  for (std::size_t t = sigma.size(); t >= 1; --t) {
    auto preds = optimal_predecessors(dm, layers, codec, t, sigma[t - 1], trace[t], cost);
    trace[t - 1] = preds.at(0);
    cost = layers[t - 1].at(codec.encode(trace[t - 1]));
  }
  Schedule schedule = schedule_from_trace(dm, init, sigma, trace);
  return {best, std::move(schedule)};
}

std::vector<Schedule> opt_all_schedules(const DistanceMatrix& dm, const Configuration& init,
                                        std::span<const Vertex> sigma, std::size_t limit) {
  check_inputs(dm, init, sigma);
  check_guard(dm.size(), init.k(), sigma.size(), kEnumerationStateGuard);
  ConfigCodec codec(dm.size(), init.k());
  auto layers = forward_layers(dm, init, sigma, codec);

  Weight best = std::numeric_limits<Weight>::max();
  for (const auto& [key, cost] : layers.back()) best = std::min(best, cost);
  std::vector<Key> finals;
  for (const auto& [key, cost] : layers.back()) {
    if (cost == best) finals.push_back(key);
  }
  std::sort(finals.begin(), finals.end());

  std::vector<Schedule> out;
  std::vector<std::vector<Vertex>> trace(sigma.size() + 1);
  std::function<void(std::size_t)> descend = [&](std::size_t t) {
    if (t == 0) {
      if (out.size() >= limit) {
        throw Error(ErrorCode::kInstanceTooLarge, "more than " + std::to_string(limit) + " optimal schedules");
      }
      out.push_back(schedule_from_trace(dm, init, sigma, trace));
      return;
    }
    Weight cost = layers[t].at(codec.encode(trace[t]));
    for (auto& pred : optimal_predecessors(dm, layers, codec, t, sigma[t - 1], trace[t], cost)) {
      trace[t - 1] = std::move(pred);
      descend(t - 1);
    }
  };
  for (Key key : finals) {
    trace.back() = codec.decode(key);
    descend(sigma.size());
  }
  return out;
}

OptResult opt_cost_flow(const DistanceMatrix& dm, const Configuration& init, std::span<const Vertex> sigma) {
  check_inputs(dm, init, sigma);
  const int k = init.k();
  const int n = static_cast<int>(sigma.size());
  if (n == 0) {
    return {0, {}};
  }
  // Any request can be spliced into some chain for at most 2*diameter, so a
  // reward above that forces full coverage.
  const Weight reward = 2 * dm.diameter() + 1;
  const int source = 0;
  const int sink = 1;
  auto server_node = [](int i) { return 2 + i; };
  auto in_node = [k](int j) { return 2 + k + 2 * j; };
  auto out_node = [k](int j) { return 2 + k + 2 * j + 1; };

  MinCostFlow flow(2 + k + 2 * n);
  std::vector<int> cover_arc(static_cast<std::size_t>(n));
  for (int i = 0; i < k; ++i) {
    flow.add_arc(source, server_node(i), 1, 0);
    for (int j = 0; j < n; ++j) {
      flow.add_arc(server_node(i), in_node(j), 1, dm(init.positions[static_cast<std::size_t>(i)], sigma[static_cast<std::size_t>(j)]));
    }
    flow.add_arc(server_node(i), sink, 1, 0);
  }
  for (int j = 0; j < n; ++j) {
    cover_arc[static_cast<std::size_t>(j)] = flow.add_arc(in_node(j), out_node(j), 1, -reward);
    for (int l = j + 1; l < n; ++l) {
      flow.add_arc(out_node(j), in_node(l), 1, dm(sigma[static_cast<std::size_t>(j)], sigma[static_cast<std::size_t>(l)]));
    }
    flow.add_arc(out_node(j), sink, 1, 0);
  }
  Weight flow_cost = flow.solve(source, sink, k);
  for (int j = 0; j < n; ++j) {
    if (!flow.saturated(cover_arc[static_cast<std::size_t>(j)])) {
      throw Error(ErrorCode::kInvalidArgument, "flow left request " + std::to_string(j) + " uncovered");
    }
  }
  const Weight cost = flow_cost + reward * n;

  // Walk each server's chain to recover the schedule.
  Schedule schedule;
  schedule.moves.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < k; ++i) {
    Vertex at = init.positions[static_cast<std::size_t>(i)];
    int node = server_node(i);
    while (node != sink) {
      int next = -1;
      for (int a : flow.out_arcs(node)) {
        if (MinCostFlow::forward(a) && flow.saturated(a)) {
          next = flow.head(a);
          break;
        }
      }
      if (next == sink || next < 0) break;
      int j = (next - 2 - k) / 2;
      Vertex r = sigma[static_cast<std::size_t>(j)];
      schedule.moves[static_cast<std::size_t>(j)] = Move{static_cast<std::size_t>(j), i, at, std::nullopt, r, dm(at, r)};
      at = r;
      node = out_node(j);
    }
  }
  for (const Move& m : schedule.moves) schedule.total_cost += m.cost;
  if (schedule.total_cost != cost) {
    throw Error(ErrorCode::kScheduleMismatch, "flow schedule cost disagrees with flow value");
  }
  return {cost, std::move(schedule)};
}

nlohmann::json schedule_to_json(const Schedule& s) {
  nlohmann::json moves = nlohmann::json::array();
  for (const Move& m : s.moves) {
    nlohmann::json j = {{"t", m.t}, {"server", m.server}, {"from", m.from}, {"to", m.to}, {"cost", m.cost}};
    if (m.via) j["via"] = *m.via;
    moves.push_back(std::move(j));
  }
  return {{"total_cost", s.total_cost}, {"moves", std::move(moves)}};
}

Schedule schedule_from_json(const nlohmann::json& j) {
  Schedule s;
  try {
    s.total_cost = j.at("total_cost").get<Weight>();
    for (const auto& m : j.at("moves")) {
      Move move;
      move.t = m.at("t").get<std::size_t>();
      move.server = m.at("server").get<int>();
      move.from = m.at("from").get<Vertex>();
      if (m.contains("via")) move.via = m.at("via").get<Vertex>();
      move.to = m.at("to").get<Vertex>();
      move.cost = m.at("cost").get<Weight>();
      s.moves.push_back(move);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("schedule JSON: ") + e.what());
  }
  return s;
}

}  // namespace ksl
