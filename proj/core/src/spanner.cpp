#include "ksl/spanner.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <tuple>

#include <nlohmann/json.hpp>

#include "ksl/error.hpp"

namespace ksl {
namespace {

[[noreturn]] void malformed(const std::string& why) { throw Error(ErrorCode::kMalformedSpanner, why); }

std::size_t at(Vertex v) { return static_cast<std::size_t>(v); }

struct Placement {
  int tree = 0;
  int segment = 0;
  Vertex exit = 0;
};

// Where a server that just served x waits before heading to y: the exit of
// the root-to-x path from the heavy path holding lca(x, y) in the best tree.
Placement plan_parking(const SpannerSystem& system, Vertex x, Vertex y) {
  const int q = system.best_tree(x, y);
  const SpannerTree& tree = system.tree(q);
  const HeavyPathIndex& hp = system.heavy_paths(q);
  const int target = hp.path_of[at(tree.lca(x, y))];
  const auto& segments = hp.root_segments[at(x)];
  for (std::size_t j = 0; j < segments.size(); ++j) {
    if (segments[j].path == target) return {q, static_cast<int>(j), segments[j].exit};
  }
  throw Error(ErrorCode::kMalformedSpanner, "lca path is not on the root path");
}

struct ServerState {
  std::vector<Vertex> at;
  std::vector<Vertex> last_served;
  std::vector<int> label;
};

// Servers labeled `tree` that sit on a heavy path crossed by the root-to-y
// path, ordered by (segment, position on the path, id).
std::vector<int> retrieval_candidates(const SpannerSystem& system, const ServerState& state, int tree, Vertex y) {
  const HeavyPathIndex& hp = system.heavy_paths(tree);
  const auto& segments = hp.root_segments[at(y)];
  std::vector<std::tuple<int, int, int>> keyed;
  for (std::size_t s = 0; s < state.at.size(); ++s) {
    if (state.label[s] != tree) continue;
    const Vertex v = state.at[s];
    for (std::size_t j = 0; j < segments.size(); ++j) {
      if (segments[j].path == hp.path_of[at(v)]) {
        keyed.emplace_back(static_cast<int>(j), hp.position[at(v)], static_cast<int>(s));
        break;
      }
    }
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<int> out;
  for (const auto& key : keyed) out.push_back(std::get<2>(key));
  return out;
}

struct Links {
  std::vector<std::size_t> next_use;         // next request of the same server, or t itself
  std::vector<std::ptrdiff_t> first_use;     // per server, -1 when unused
};

Links trajectory_links(const Configuration& init, std::span<const Vertex> sigma, const Schedule& opt) {
  const int k = init.k();
  if (opt.moves.size() != sigma.size()) {
    throw Error(ErrorCode::kScheduleMismatch, "schedule does not cover the request sequence");
  }
  Links links{std::vector<std::size_t>(sigma.size()), std::vector<std::ptrdiff_t>(static_cast<std::size_t>(k), -1)};
  std::vector<std::ptrdiff_t> last(static_cast<std::size_t>(k), -1);
  for (std::size_t t = 0; t < sigma.size(); ++t) {
    const Move& m = opt.moves[t];
    if (m.server < 0 || m.server >= k || m.to != sigma[t]) {
      throw Error(ErrorCode::kScheduleMismatch, "move " + std::to_string(t) + " does not serve its request");
    }
    auto s = static_cast<std::size_t>(m.server);
    links.next_use[t] = t;
    if (last[s] >= 0) links.next_use[static_cast<std::size_t>(last[s])] = t;
    else links.first_use[s] = static_cast<std::ptrdiff_t>(t);
    last[s] = static_cast<std::ptrdiff_t>(t);
  }
  return links;
}

}  // namespace

SpannerTree::SpannerTree(const Graph& g, Vertex root, std::vector<Vertex> parent)
    : root_(root), parent_(std::move(parent)) {
  const int n = g.vertex_count();
  if (static_cast<int>(parent_.size()) != n) malformed("parent list has " + std::to_string(parent_.size()) + " entries, graph has " + std::to_string(n) + " vertices");
  if (root < 0 || root >= n) malformed("root " + std::to_string(root) + " out of range");
  if (parent_[at(root)] != -1) malformed("root must have parent -1");
  children_.resize(at(n));
  for (Vertex v = 0; v < n; ++v) {
    if (v == root) continue;
    Vertex p = parent_[at(v)];
    if (p < 0 || p >= n) malformed("vertex " + std::to_string(v) + " has invalid parent " + std::to_string(p));
    if (!g.has_edge(v, p)) malformed("tree edge (" + std::to_string(p) + "," + std::to_string(v) + ") is not a graph edge");
    children_[at(p)].push_back(v);
  }
  depth_.assign(at(n), 0);
  root_distance_.assign(at(n), 0);
  order_.push_back(root);
  for (std::size_t head = 0; head < order_.size(); ++head) {
    Vertex v = order_[head];
    for (Vertex c : children_[at(v)]) {
      depth_[at(c)] = depth_[at(v)] + 1;
      root_distance_[at(c)] = root_distance_[at(v)] + g.edge_weight(v, c);
      order_.push_back(c);
    }
  }
  if (static_cast<int>(order_.size()) != n) malformed("parent links do not form a spanning tree");

  const int levels = std::max(1, static_cast<int>(std::bit_width(static_cast<unsigned>(n))));
  up_.assign(static_cast<std::size_t>(levels), std::vector<Vertex>(at(n)));
  for (Vertex v = 0; v < n; ++v) up_[0][at(v)] = v == root ? v : parent_[at(v)];
  for (int j = 1; j < levels; ++j) {
    for (Vertex v = 0; v < n; ++v) up_[static_cast<std::size_t>(j)][at(v)] = up_[static_cast<std::size_t>(j - 1)][at(up_[static_cast<std::size_t>(j - 1)][at(v)])];
  }
}

Vertex SpannerTree::lca(Vertex a, Vertex b) const {
  if (depth(a) < depth(b)) std::swap(a, b);
  int lift = depth(a) - depth(b);
  for (std::size_t j = 0; lift > 0; ++j, lift >>= 1) {
    if (lift & 1) a = up_[j][at(a)];
  }
  if (a == b) return a;
  for (int j = static_cast<int>(up_.size()) - 1; j >= 0; --j) {
    const auto& level = up_[static_cast<std::size_t>(j)];
    if (level[at(a)] != level[at(b)]) {
      a = level[at(a)];
      b = level[at(b)];
    }
  }
  return parent(a);
}

bool SpannerTree::is_ancestor(Vertex ancestor, Vertex v) const { return lca(ancestor, v) == ancestor; }

int HeavyPathIndex::max_segments() const {
  int best = 0;
  for (const auto& s : root_segments) best = std::max(best, static_cast<int>(s.size()));
  return best;
}

HeavyPathIndex build_heavy_paths(const SpannerTree& tree) {
  const int n = tree.size();
  const auto& order = tree.top_down();
  std::vector<int> subtree(at(n), 1);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (*it != tree.root()) subtree[at(tree.parent(*it))] += subtree[at(*it)];
  }
  std::vector<Vertex> heavy(at(n), -1);
  for (Vertex v = 0; v < n; ++v) {
    for (Vertex c : tree.children(v)) {  // ascending ids
      if (heavy[at(v)] < 0 || subtree[at(c)] > subtree[at(heavy[at(v)])]) heavy[at(v)] = c;
    }
  }

  HeavyPathIndex hp;
  hp.path_of.assign(at(n), -1);
  hp.position.assign(at(n), 0);
  hp.root_segments.resize(at(n));
  for (Vertex v : order) {
    if (v == tree.root() || heavy[at(tree.parent(v))] != v) {
      const int id = static_cast<int>(hp.paths.size());
      hp.paths.emplace_back();
      for (Vertex u = v; u >= 0; u = heavy[at(u)]) {
        hp.path_of[at(u)] = id;
        hp.position[at(u)] = static_cast<int>(hp.paths.back().size());
        hp.paths.back().push_back(u);
      }
    }
    auto& segments = hp.root_segments[at(v)];
    if (v != tree.root()) segments = hp.root_segments[at(tree.parent(v))];
    if (!segments.empty() && segments.back().path == hp.path_of[at(v)]) segments.back().exit = v;
    else segments.push_back({hp.path_of[at(v)], v});
  }
  return hp;
}

int segment_slots(int n_vertices) { return std::max(1, ceil_log2(static_cast<std::uint64_t>(n_vertices))); }

SpannerSystem::SpannerSystem(std::vector<SpannerTree> trees, double q, double r)
    : trees_(std::move(trees)), q_(q), r_(r) {
  if (trees_.empty()) malformed("a spanner system needs at least one tree");
  for (const auto& t : trees_) {
    if (t.size() != trees_.front().size()) malformed("trees span different vertex counts");
    heavy_.push_back(build_heavy_paths(t));
  }
}

int SpannerSystem::best_tree(Vertex a, Vertex b) const {
  int best = 0;
  Weight best_distance = trees_[0].distance(a, b);
  for (int i = 1; i < mu(); ++i) {
    Weight d = trees_[static_cast<std::size_t>(i)].distance(a, b);
    if (d < best_distance) {
      best_distance = d;
      best = i;
    }
  }
  return best;
}

SpannerTree shortest_path_tree(const Graph& g, const DistanceMatrix& dm, Vertex root) {
  std::vector<Vertex> parent(at(g.vertex_count()), -1);
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (v != root) parent[at(v)] = dm.next_hop(v, root);
  }
  return SpannerTree(g, root, std::move(parent));
}

StretchReport verify_stretch(const DistanceMatrix& dm, const SpannerSystem& system, double q, double r) {
  StretchReport report;
  bool first = true;
  for (Vertex x = 0; x < dm.size(); ++x) {
    for (Vertex y = x + 1; y < dm.size(); ++y) {
      const Weight tree_distance = system.tree(system.best_tree(x, y)).distance(x, y);
      const Weight graph_distance = dm(x, y);
      const double excess = static_cast<double>(tree_distance) - (q * static_cast<double>(graph_distance) + r);
      if (first || excess > report.worst_excess) {
        first = false;
        report.worst_excess = excess;
        report.worst_x = x;
        report.worst_y = y;
        report.worst_tree_distance = tree_distance;
        report.worst_graph_distance = graph_distance;
      }
      if (tree_distance * report.measured_q_den > report.measured_q_num * graph_distance) {
        report.measured_q_num = tree_distance;
        report.measured_q_den = graph_distance;
      }
    }
  }
  report.ok = report.worst_excess <= 1e-9;
  return report;
}

int SpannerParameters::rank_bits(std::size_t candidates) const {
  if (candidates <= (std::size_t{1} << segment_bits)) return segment_bits;
  return ceil_log2(candidates);
}

SpannerParameters spanner_parameters(const SpannerSystem& system, int k, std::size_t n) {
  SpannerParameters p;
  p.mu = system.mu();
  p.n_vertices = system.tree(0).size();
  p.k = k;
  p.n = n;
  p.tree_bits = ceil_log2(static_cast<std::uint64_t>(p.mu));
  p.segment_bits = ceil_log2(static_cast<std::uint64_t>(segment_slots(p.n_vertices)));
  return p;
}

AdviceTape generate_advice_spanner(const DistanceMatrix& /*dm*/, const SpannerSystem& system, const Configuration& init,
                                   std::span<const Vertex> sigma, const Schedule& opt) {
  const int k = init.k();
  const Links links = trajectory_links(init, sigma, opt);
  const SpannerParameters p = spanner_parameters(system, k, sigma.size());
  AdviceTape tape;
  ServerState state{init.positions, init.positions, std::vector<int>(static_cast<std::size_t>(k), 0)};

  auto park = [&](std::size_t s, Vertex from, Vertex toward) {
    Placement place = plan_parking(system, from, toward);
    tape.write_uint(static_cast<std::uint64_t>(place.tree), p.tree_bits);
    tape.write_uint(static_cast<std::uint64_t>(place.segment), p.segment_bits);
    state.at[s] = place.exit;
    state.label[s] = place.tree;
  };

  for (int i = 0; i < k; ++i) {
    const auto s = static_cast<std::size_t>(i);
    const std::ptrdiff_t first = links.first_use[s];
    park(s, init.positions[s], first >= 0 ? sigma[static_cast<std::size_t>(first)] : init.positions[s]);
  }
  for (std::size_t t = 0; t < sigma.size(); ++t) {
    const auto s = static_cast<std::size_t>(opt.moves[t].server);
    const Vertex y = sigma[t];
    const int label = state.label[s];
    auto candidates = retrieval_candidates(system, state, label, y);
    auto it = std::find(candidates.begin(), candidates.end(), static_cast<int>(s));
    if (it == candidates.end()) {
      throw Error(ErrorCode::kNoLabeledServerOnRootPath, "request " + std::to_string(t) + ": parked server is not above the request");
    }
    tape.write_uint(static_cast<std::uint64_t>(label), p.tree_bits);
    tape.write_uint(static_cast<std::uint64_t>(it - candidates.begin()), p.rank_bits(candidates.size()));
    state.at[s] = y;
    state.last_served[s] = y;
    park(s, y, sigma[links.next_use[t]]);
  }
  return tape;
}

SpannerRun run_online_spanner(const DistanceMatrix& dm, const SpannerSystem& system, const Configuration& init,
                              std::span<const Vertex> sigma, AdviceTape& tape) {
  const int k = init.k();
  SpannerRun run;
  run.params = spanner_parameters(system, k, sigma.size());
  const SpannerParameters& p = run.params;
  const std::size_t start = tape.bits_read();
  ServerState state{init.positions, init.positions, std::vector<int>(static_cast<std::size_t>(k), 0)};

  auto read_parking = [&](std::size_t s, Vertex from) {
    const int tree = static_cast<int>(tape.read_uint(p.tree_bits));
    const int segment = static_cast<int>(tape.read_uint(p.segment_bits));
    if (tree >= p.mu) throw Error(ErrorCode::kCorruptAdvice, "tree index " + std::to_string(tree) + " out of range");
    const auto& segments = system.heavy_paths(tree).root_segments[at(from)];
    if (segment >= static_cast<int>(segments.size())) {
      throw Error(ErrorCode::kCorruptAdvice, "segment " + std::to_string(segment) + " out of range");
    }
    const Vertex exit = segments[static_cast<std::size_t>(segment)].exit;
    run.online_cost += dm(state.at[s], exit);
    state.at[s] = exit;
    state.label[s] = tree;
    return tree;
  };

  for (int i = 0; i < k; ++i) {
    const auto s = static_cast<std::size_t>(i);
    read_parking(s, init.positions[s]);
    run.initial_parking.push_back(state.at[s]);
    run.initial_labels.push_back(state.label[s]);
  }
  for (std::size_t t = 0; t < sigma.size(); ++t) {
    const Vertex y = sigma[t];
    if (y < 0 || y >= dm.size()) throw Error(ErrorCode::kVertexOutOfRange, "request " + std::to_string(t));
    const int label = static_cast<int>(tape.read_uint(p.tree_bits));
    if (label >= p.mu) throw Error(ErrorCode::kCorruptAdvice, "tree index " + std::to_string(label) + " out of range");
    auto candidates = retrieval_candidates(system, state, label, y);
    if (candidates.empty()) {
      throw Error(ErrorCode::kNoLabeledServerOnRootPath,
                  "request " + std::to_string(t) + ": no server labeled " + std::to_string(label) + " above vertex " + std::to_string(y));
    }
    const auto rank = tape.read_uint(p.rank_bits(candidates.size()));
    if (rank >= candidates.size()) throw Error(ErrorCode::kCorruptAdvice, "rank " + std::to_string(rank) + " out of range");
    const auto s = static_cast<std::size_t>(candidates[static_cast<std::size_t>(rank)]);

    const Vertex from = state.last_served[s];
    const Vertex via = state.at[s];
    const SpannerTree& tree = system.tree(label);
    SpannerStep step;
    step.t = t;
    step.request = y;
    step.server = static_cast<int>(s);
    step.retrieval_tree = label;
    step.retrieved_from = via;
    step.tree_cost = tree.distance(from, via) + tree.distance(via, y);
    step.graph_distance = dm(from, y);

    Move move{t, static_cast<int>(s), from, via, y, dm(from, via) + dm(via, y)};
    run.schedule.moves.push_back(move);
    run.schedule.total_cost += move.cost;
    run.tree_path_cost += step.tree_cost;
    run.online_cost += dm(via, y);
    state.at[s] = y;
    state.last_served[s] = y;

    step.parking_tree = read_parking(s, y);
    step.parked_at = state.at[s];
    run.steps.push_back(step);
  }
  run.bits_read = tape.bits_read() - start;
  return run;
}

nlohmann::json spanner_system_to_json(const SpannerSystem& system) {
  nlohmann::json trees = nlohmann::json::array();
  for (int i = 0; i < system.mu(); ++i) {
    trees.push_back({{"root", system.tree(i).root()}, {"parent", system.tree(i).parents()}});
  }
  return {{"mu", system.mu()}, {"q", system.q()}, {"r", system.r()}, {"trees", std::move(trees)}};
}

SpannerSystem spanner_system_from_json(const Graph& g, const nlohmann::json& j) {
  std::vector<SpannerTree> trees;
  int mu = 0;
  double q = 1;
  double r = 0;
  try {
    mu = j.at("mu").get<int>();
    q = j.at("q").get<double>();
    r = j.at("r").get<double>();
    for (const auto& t : j.at("trees")) {
      trees.emplace_back(g, t.at("root").get<Vertex>(), t.at("parent").get<std::vector<Vertex>>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("spanner JSON: ") + e.what());
  }
  if (mu != static_cast<int>(trees.size())) {
    malformed("mu is " + std::to_string(mu) + " but " + std::to_string(trees.size()) + " trees are listed");
  }
  return SpannerSystem(std::move(trees), q, r);
}

}  // namespace ksl
