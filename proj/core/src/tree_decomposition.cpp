#include "ksl/tree_decomposition.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>
#include <set>

#include <nlohmann/json.hpp>

#include "ksl/advice_tape.hpp"
#include "ksl/error.hpp"

namespace ksl {
namespace {

[[noreturn]] void malformed(const std::string& why) { throw Error(ErrorCode::kMalformedDecomposition, why); }

std::string edge_name(Vertex u, Vertex v) { return "(" + std::to_string(u) + "," + std::to_string(v) + ")"; }

std::vector<Vertex> intersection(const std::vector<Vertex>& a, const std::vector<Vertex>& b) {
  std::vector<Vertex> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool subset(const std::vector<Vertex>& a, const std::vector<Vertex>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// Undirected bag tree with no bag contained in a neighbour. Such a tree has
// at most N bags.
struct CompressedTree {
  std::vector<std::vector<Vertex>> bags;
  std::vector<std::vector<int>> adj;
};

CompressedTree compress(const TreeDecomposition& td) {
  const int m = td.bag_count();
  std::vector<std::vector<Vertex>> bags = td.bags();
  std::vector<std::set<int>> adj(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    if (td.parent(i) >= 0) {
      adj[static_cast<std::size_t>(i)].insert(td.parent(i));
      adj[static_cast<std::size_t>(td.parent(i))].insert(i);
    }
  }
  std::vector<char> alive(static_cast<std::size_t>(m), 1);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int a = 0; a < m; ++a) {
      if (!alive[static_cast<std::size_t>(a)]) continue;
      for (int b : adj[static_cast<std::size_t>(a)]) {
        if (!subset(bags[static_cast<std::size_t>(a)], bags[static_cast<std::size_t>(b)])) continue;
        // Fold a into b.
        for (int c : adj[static_cast<std::size_t>(a)]) {
          if (c == b) continue;
          adj[static_cast<std::size_t>(c)].erase(a);
          adj[static_cast<std::size_t>(c)].insert(b);
          adj[static_cast<std::size_t>(b)].insert(c);
        }
        adj[static_cast<std::size_t>(b)].erase(a);
        adj[static_cast<std::size_t>(a)].clear();
        alive[static_cast<std::size_t>(a)] = 0;
        changed = true;
        break;
      }
    }
  }
  std::vector<int> new_id(static_cast<std::size_t>(m), -1);
  CompressedTree out;
  for (int i = 0; i < m; ++i) {
    if (alive[static_cast<std::size_t>(i)]) {
      new_id[static_cast<std::size_t>(i)] = static_cast<int>(out.bags.size());
      out.bags.push_back(bags[static_cast<std::size_t>(i)]);
    }
  }
  out.adj.resize(out.bags.size());
  for (int i = 0; i < m; ++i) {
    if (!alive[static_cast<std::size_t>(i)]) continue;
    for (int j : adj[static_cast<std::size_t>(i)]) {
      out.adj[static_cast<std::size_t>(new_id[static_cast<std::size_t>(i)])].push_back(new_id[static_cast<std::size_t>(j)]);
    }
  }
  return out;
}

class HeightReducer {
 public:
  explicit HeightReducer(const CompressedTree& tree)
      : tree_(tree), removed_(tree.bags.size(), 0), stamp_(tree.bags.size(), 0) {}

  TreeDecomposition run(int n_vertices) {
    std::vector<int> all(tree_.bags.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    build(all, -1);
    return TreeDecomposition(std::move(bags_), std::move(parent_), n_vertices);
  }

 private:
  std::size_t idx(int v) const { return static_cast<std::size_t>(v); }

  // Component of `start` among non-removed nodes carrying stamp `mark`.
  std::vector<int> component(int start, int mark) const {
    std::vector<int> out{start};
    std::deque<int> queue{start};
    std::set<int> seen{start};
    while (!queue.empty()) {
      int a = queue.front();
      queue.pop_front();
      for (int b : tree_.adj[idx(a)]) {
        if (removed_[idx(b)] || stamp_[idx(b)] != mark || seen.count(b)) continue;
        seen.insert(b);
        out.push_back(b);
        queue.push_back(b);
      }
    }
    return out;
  }

  // BFS parents inside the current component, rooted at `source`.
  std::vector<int> bfs_order(int source, int mark, std::vector<int>& parent_out) const {
    std::vector<int> order{source};
    parent_out.assign(tree_.bags.size(), -2);
    parent_out[idx(source)] = -1;
    for (std::size_t head = 0; head < order.size(); ++head) {
      int a = order[head];
      for (int b : tree_.adj[idx(a)]) {
        if (removed_[idx(b)] || stamp_[idx(b)] != mark || parent_out[idx(b)] != -2) continue;
        parent_out[idx(b)] = a;
        order.push_back(b);
      }
    }
    return order;
  }

  int centroid(const std::vector<int>& comp, int mark) const {
    std::vector<int> parent;
    auto order = bfs_order(comp.front(), mark, parent);
    std::vector<int> size(tree_.bags.size(), 1);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      if (parent[idx(*it)] >= 0) size[idx(parent[idx(*it)])] += size[idx(*it)];
    }
    const int total = static_cast<int>(comp.size());
    int best = comp.front();
    int best_load = total;
    for (int a : order) {
      int load = total - size[idx(a)];
      for (int b : tree_.adj[idx(a)]) {
        if (!removed_[idx(b)] && stamp_[idx(b)] == mark && parent[idx(b)] == a) load = std::max(load, size[idx(b)]);
      }
      if (load < best_load) {
        best_load = load;
        best = a;
      }
    }
    return best;
  }

  void build(const std::vector<int>& comp, int new_parent) {
    const int mark = ++next_mark_;
    for (int a : comp) stamp_[idx(a)] = mark;

    std::vector<std::pair<int, int>> boundary;
    for (int a : comp) {
      for (int b : tree_.adj[idx(a)]) {
        if (stamp_[idx(b)] != mark || removed_[idx(b)]) boundary.push_back({a, b});
      }
    }
    if (boundary.size() > 2) throw Error(ErrorCode::kMalformedDecomposition, "height reduction lost its boundary invariant");

    int split = centroid(comp, mark);
    if (boundary.size() == 2) {
      std::vector<int> parent;
      bfs_order(boundary[0].first, mark, parent);
      std::set<int> path;
      for (int a = boundary[1].first; a != -1; a = parent[idx(a)]) path.insert(a);
      if (!path.count(split)) {
        std::vector<int> from_centroid;
        for (int a : bfs_order(split, mark, from_centroid)) {
          if (path.count(a)) {
            split = a;
            break;
          }
        }
      }
    }

    std::vector<Vertex> bag = tree_.bags[idx(split)];
    for (auto [a, b] : boundary) {
      auto shared = intersection(tree_.bags[idx(a)], tree_.bags[idx(b)]);
      bag.insert(bag.end(), shared.begin(), shared.end());
    }
    std::sort(bag.begin(), bag.end());
    bag.erase(std::unique(bag.begin(), bag.end()), bag.end());
    const int self = static_cast<int>(bags_.size());
    bags_.push_back(std::move(bag));
    parent_.push_back(new_parent);

    removed_[idx(split)] = 1;
    std::vector<std::vector<int>> parts;
    for (int b : tree_.adj[idx(split)]) {
      if (!removed_[idx(b)] && stamp_[idx(b)] == mark) parts.push_back(component(b, mark));
    }
    for (const auto& part : parts) build(part, self);
  }

  const CompressedTree& tree_;
  std::vector<char> removed_;
  std::vector<int> stamp_;
  int next_mark_ = 0;
  std::vector<std::vector<Vertex>> bags_;
  std::vector<int> parent_;
};

}  // namespace

TreeDecomposition::TreeDecomposition(std::vector<std::vector<Vertex>> bags, std::vector<int> parent, int n_vertices)
    : bags_(std::move(bags)), parent_(std::move(parent)), n_vertices_(n_vertices) {
  const int m = static_cast<int>(bags_.size());
  if (m == 0) malformed("no bags");
  if (static_cast<int>(parent_.size()) != m) malformed("parent list has wrong length");
  for (int i = 0; i < m; ++i) {
    auto& b = bags_[static_cast<std::size_t>(i)];
    std::sort(b.begin(), b.end());
    if (std::adjacent_find(b.begin(), b.end()) != b.end()) malformed("bag " + std::to_string(i) + " repeats a vertex");
    for (Vertex v : b) {
      if (v < 0 || v >= n_vertices_) malformed("bag " + std::to_string(i) + " holds unknown vertex " + std::to_string(v));
    }
    width_ = std::max(width_, static_cast<int>(b.size()) - 1);
  }
  children_.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    int p = parent_[static_cast<std::size_t>(i)];
    if (p == -1) {
      if (root_ != -1) malformed("bags " + std::to_string(root_) + " and " + std::to_string(i) + " are both roots");
      root_ = i;
    } else if (p < 0 || p >= m || p == i) {
      malformed("bag " + std::to_string(i) + " has invalid parent " + std::to_string(p));
    } else {
      children_[static_cast<std::size_t>(p)].push_back(i);
    }
  }
  if (root_ == -1) malformed("no root bag");

  depth_.assign(static_cast<std::size_t>(m), -1);
  depth_[static_cast<std::size_t>(root_)] = 0;
  std::vector<int> order{root_};
  for (std::size_t head = 0; head < order.size(); ++head) {
    int a = order[head];
    for (int c : children_[static_cast<std::size_t>(a)]) {
      depth_[static_cast<std::size_t>(c)] = depth_[static_cast<std::size_t>(a)] + 1;
      height_ = std::max(height_, depth_[static_cast<std::size_t>(c)]);
      order.push_back(c);
    }
  }
  if (static_cast<int>(order.size()) != m) malformed("parent links contain a cycle");

  const int levels = std::max(1, static_cast<int>(std::bit_width(static_cast<unsigned>(m))));
  up_.assign(static_cast<std::size_t>(levels), std::vector<int>(static_cast<std::size_t>(m)));
  for (int i = 0; i < m; ++i) {
    int p = parent_[static_cast<std::size_t>(i)];
    up_[0][static_cast<std::size_t>(i)] = p < 0 ? i : p;
  }
  for (int j = 1; j < levels; ++j) {
    for (int i = 0; i < m; ++i) {
      up_[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
          up_[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(up_[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(i)])];
    }
  }

  representative_.assign(static_cast<std::size_t>(n_vertices_), -1);
  for (int i = m - 1; i >= 0; --i) {
    for (Vertex v : bags_[static_cast<std::size_t>(i)]) representative_[static_cast<std::size_t>(v)] = i;
  }
}

int TreeDecomposition::representative_bag(Vertex v) const {
  if (v < 0 || v >= n_vertices_) throw Error(ErrorCode::kVertexOutOfRange, "vertex " + std::to_string(v));
  int r = representative_[static_cast<std::size_t>(v)];
  if (r < 0) malformed("vertex " + std::to_string(v) + " is in no bag");
  return r;
}

bool TreeDecomposition::contains(int bag, Vertex v) const {
  const auto& b = this->bag(bag);
  return std::binary_search(b.begin(), b.end(), v);
}

int TreeDecomposition::in_bag_index(int bag, Vertex v) const {
  const auto& b = this->bag(bag);
  auto it = std::lower_bound(b.begin(), b.end(), v);
  if (it == b.end() || *it != v) {
    throw Error(ErrorCode::kCorruptAdvice, "vertex " + std::to_string(v) + " is not in bag " + std::to_string(bag));
  }
  return static_cast<int>(it - b.begin());
}

Vertex TreeDecomposition::vertex_at(int bag, int index) const {
  const auto& b = this->bag(bag);
  if (index < 0 || index >= static_cast<int>(b.size())) {
    throw Error(ErrorCode::kCorruptAdvice, "index " + std::to_string(index) + " outside bag " + std::to_string(bag));
  }
  return b[static_cast<std::size_t>(index)];
}

int TreeDecomposition::ancestor_at_depth(int bag, int target) const {
  int d = depth(bag);
  if (target < 0 || target > d) {
    throw Error(ErrorCode::kCorruptAdvice, "depth " + std::to_string(target) + " is not above bag " + std::to_string(bag));
  }
  int lift = d - target;
  for (std::size_t j = 0; lift > 0; ++j, lift >>= 1) {
    if (lift & 1) bag = up_[j][static_cast<std::size_t>(bag)];
  }
  return bag;
}

bool TreeDecomposition::is_ancestor(int ancestor, int bag) const {
  return depth(ancestor) <= depth(bag) && ancestor_at_depth(bag, depth(ancestor)) == ancestor;
}

int TreeDecomposition::lca(int a, int b) const {
  if (depth(a) < depth(b)) std::swap(a, b);
  a = ancestor_at_depth(a, depth(b));
  if (a == b) return a;
  for (int j = static_cast<int>(up_.size()) - 1; j >= 0; --j) {
    const auto& level = up_[static_cast<std::size_t>(j)];
    if (level[static_cast<std::size_t>(a)] != level[static_cast<std::size_t>(b)]) {
      a = level[static_cast<std::size_t>(a)];
      b = level[static_cast<std::size_t>(b)];
    }
  }
  return parent(a);
}

std::optional<DecompositionViolation> verify_decomposition(const Graph& g, const TreeDecomposition& td) {
  const int n = g.vertex_count();
  if (td.vertex_count() != n) {
    return DecompositionViolation{1, {}, "decomposition is over " + std::to_string(td.vertex_count()) +
                                             " vertices, graph has " + std::to_string(n)};
  }
  std::vector<int> count(static_cast<std::size_t>(n), 0);
  for (const auto& b : td.bags()) {
    for (Vertex v : b) ++count[static_cast<std::size_t>(v)];
  }
  for (Vertex v = 0; v < n; ++v) {
    if (count[static_cast<std::size_t>(v)] == 0) return DecompositionViolation{1, {v}, "vertex " + std::to_string(v) + " is in no bag"};
  }
  for (const Edge& e : g.edges()) {
    bool covered = false;
    for (int i = 0; i < td.bag_count() && !covered; ++i) covered = td.contains(i, e.u) && td.contains(i, e.v);
    if (!covered) return DecompositionViolation{2, {e.u, e.v}, "edge " + edge_name(e.u, e.v) + " is in no bag"};
  }
  // A vertex's bags are connected iff exactly one of them has a parent without it.
  for (Vertex v = 0; v < n; ++v) {
    int tops = 0;
    for (int i = 0; i < td.bag_count(); ++i) {
      if (td.contains(i, v) && (td.parent(i) < 0 || !td.contains(td.parent(i), v))) ++tops;
    }
    if (tops != 1) {
      return DecompositionViolation{3, {v}, "bags holding vertex " + std::to_string(v) + " form " +
                                                std::to_string(tops) + " disconnected subtrees"};
    }
  }
  return std::nullopt;
}

TreeDecomposition decomposition_from_elimination(const Graph& g, const std::vector<Vertex>& order) {
  const int n = g.vertex_count();
  if (static_cast<int>(order.size()) != n) throw Error(ErrorCode::kInvalidArgument, "elimination order must list every vertex");
  std::vector<int> position(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    Vertex v = order[static_cast<std::size_t>(i)];
    if (v < 0 || v >= n || position[static_cast<std::size_t>(v)] != -1) {
      throw Error(ErrorCode::kInvalidArgument, "elimination order is not a permutation");
    }
    position[static_cast<std::size_t>(v)] = i;
  }
  std::vector<std::set<Vertex>> adj(static_cast<std::size_t>(n));
  for (const Edge& e : g.edges()) {
    adj[static_cast<std::size_t>(e.u)].insert(e.v);
    adj[static_cast<std::size_t>(e.v)].insert(e.u);
  }
  std::vector<std::vector<Vertex>> bags(static_cast<std::size_t>(n));
  std::vector<int> parent(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    Vertex v = order[static_cast<std::size_t>(i)];
    std::vector<Vertex> later(adj[static_cast<std::size_t>(v)].begin(), adj[static_cast<std::size_t>(v)].end());
    for (Vertex a : later) {
      adj[static_cast<std::size_t>(a)].erase(v);
      for (Vertex b : later) {
        if (a != b) adj[static_cast<std::size_t>(a)].insert(b);
      }
    }
    bags[static_cast<std::size_t>(i)] = later;
    bags[static_cast<std::size_t>(i)].push_back(v);
    if (!later.empty()) {
      Vertex next = *std::min_element(later.begin(), later.end(), [&](Vertex a, Vertex b) {
        return position[static_cast<std::size_t>(a)] < position[static_cast<std::size_t>(b)];
      });
      parent[static_cast<std::size_t>(i)] = position[static_cast<std::size_t>(next)];
    } else if (i != n - 1) {
      parent[static_cast<std::size_t>(i)] = n - 1;
    }
  }
  return TreeDecomposition(std::move(bags), std::move(parent), n);
}

TreewidthResult exact_treewidth(const Graph& g) {
  const int n = g.vertex_count();
  if (n > kExactTreewidthMaxVertices) {
    throw Error(ErrorCode::kInstanceTooLarge, "exact treewidth is limited to " +
                                                  std::to_string(kExactTreewidthMaxVertices) + " vertices");
  }
  using Mask = std::uint32_t;
  std::vector<Mask> adj(static_cast<std::size_t>(n), 0);
  for (const Edge& e : g.edges()) {
    adj[static_cast<std::size_t>(e.u)] |= Mask{1} << e.v;
    adj[static_cast<std::size_t>(e.v)] |= Mask{1} << e.u;
  }
  // Vertices outside S + v reachable from v through S: v's degree when the
  // vertices of S are eliminated first.
  auto q_size = [&](Mask s, Vertex v) {
    Mask reached = Mask{1} << v;
    Mask frontier = reached;
    Mask seen_s = 0;
    while (frontier) {
      Mask next = 0;
      for (Mask f = frontier; f; f &= f - 1) next |= adj[static_cast<std::size_t>(std::countr_zero(f))];
      Mask into_s = next & s & ~seen_s;
      seen_s |= into_s;
      reached |= next;
      frontier = into_s;
    }
    return std::popcount(reached & ~s & ~(Mask{1} << v));
  };

  const Mask full = n == 32 ? ~Mask{0} : (Mask{1} << n) - 1;
  std::vector<std::int8_t> tw(static_cast<std::size_t>(full) + 1, 0);
  tw[0] = -1;
  for (Mask s = 1; s <= full; ++s) {
    int best = n;
    for (Mask rest = s; rest; rest &= rest - 1) {
      Vertex v = std::countr_zero(rest);
      Mask without = s & ~(Mask{1} << v);
      best = std::min(best, std::max<int>(tw[without], q_size(without, v)));
    }
    tw[s] = static_cast<std::int8_t>(best);
  }

  std::vector<Vertex> order(static_cast<std::size_t>(n));
  Mask s = full;
  for (int i = n - 1; i >= 0; --i) {
    for (Mask rest = s; rest; rest &= rest - 1) {
      Vertex v = std::countr_zero(rest);
      Mask without = s & ~(Mask{1} << v);
      if (std::max<int>(tw[without], q_size(without, v)) == tw[s]) {
        order[static_cast<std::size_t>(i)] = v;
        s = without;
        break;
      }
    }
  }
  TreewidthResult result;
  result.width = tw[full];
  result.decomposition = decomposition_from_elimination(g, order);
  result.elimination_order = std::move(order);
  return result;
}

int height_bound(int n_vertices) { return 4 * ceil_log2(static_cast<std::uint64_t>(n_vertices)); }

TreeDecomposition reduce_height(const TreeDecomposition& td) {
  CompressedTree tree = compress(td);
  return HeightReducer(tree).run(td.vertex_count());
}

Vertex intersect_shortest_path(const DistanceMatrix& dm, const TreeDecomposition& td, Vertex x, Vertex y, int bag) {
  const int rx = td.representative_bag(x);
  const int ry = td.representative_bag(y);
  const int top = td.lca(rx, ry);
  if (!td.is_ancestor(top, bag) || !(td.is_ancestor(bag, rx) || td.is_ancestor(bag, ry))) {
    throw Error(ErrorCode::kInvalidArgument,
                "bag " + std::to_string(bag) + " is not between the bags of " + std::to_string(x) + " and " + std::to_string(y));
  }
  for (Vertex p : shortest_path_vertices(dm, x, y)) {
    if (td.contains(bag, p)) return p;
  }
  throw Error(ErrorCode::kNoIntersection,
              "shortest " + edge_name(x, y) + " path misses bag " + std::to_string(bag));
}

nlohmann::json decomposition_to_json(const TreeDecomposition& td) {
  return {{"root", td.root()}, {"bags", td.bags()}, {"parent", td.parents()}};
}

TreeDecomposition decomposition_from_json(const nlohmann::json& j, int n_vertices) {
  std::vector<std::vector<Vertex>> bags;
  std::vector<int> parent;
  int root = -1;
  try {
    bags = j.at("bags").get<std::vector<std::vector<Vertex>>>();
    parent = j.at("parent").get<std::vector<int>>();
    root = j.at("root").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("decomposition JSON: ") + e.what());
  }
  TreeDecomposition td(std::move(bags), std::move(parent), n_vertices);
  if (td.root() != root) malformed("root field says " + std::to_string(root) + " but parent links root at " + std::to_string(td.root()));
  return td;
}

}  // namespace ksl
