#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ksl/metric.hpp"

namespace ksl {

/// Rooted tree of bags. Bags are kept sorted ascending, which fixes the
/// in-bag index of every vertex. parent[root] == -1.
class TreeDecomposition {
 public:
  TreeDecomposition() = default;
  /// Throws MalformedDecomposition unless `parent` describes a single rooted
  /// tree over the bags and every bag entry is a valid vertex id.
  TreeDecomposition(std::vector<std::vector<Vertex>> bags, std::vector<int> parent, int n_vertices);

  int bag_count() const noexcept { return static_cast<int>(bags_.size()); }
  int vertex_count() const noexcept { return n_vertices_; }
  int root() const noexcept { return root_; }
  const std::vector<Vertex>& bag(int i) const { return bags_.at(static_cast<std::size_t>(i)); }
  const std::vector<std::vector<Vertex>>& bags() const noexcept { return bags_; }
  int parent(int i) const { return parent_.at(static_cast<std::size_t>(i)); }
  const std::vector<int>& parents() const noexcept { return parent_; }
  const std::vector<int>& children(int i) const { return children_.at(static_cast<std::size_t>(i)); }
  int depth(int i) const { return depth_.at(static_cast<std::size_t>(i)); }

  /// max |bag| - 1.
  int width() const noexcept { return width_; }
  /// Depth of the deepest bag, in edges.
  int height() const noexcept { return height_; }

  /// Lowest-index bag containing v. Throws MalformedDecomposition if none does.
  int representative_bag(Vertex v) const;
  bool contains(int bag, Vertex v) const;
  /// Position of v in the sorted bag; throws CorruptAdvice if absent.
  int in_bag_index(int bag, Vertex v) const;
  Vertex vertex_at(int bag, int index) const;

  int lca(int a, int b) const;
  bool is_ancestor(int ancestor, int bag) const;
  /// Ancestor of `bag` at the given depth (0 = root).
  int ancestor_at_depth(int bag, int depth) const;

 private:
  std::vector<std::vector<Vertex>> bags_;
  std::vector<int> parent_;
  std::vector<std::vector<int>> children_;
  std::vector<int> depth_;
  std::vector<std::vector<int>> up_;  // up_[j][i] = 2^j-th ancestor
  std::vector<int> representative_;
  int n_vertices_ = 0;
  int root_ = -1;
  int width_ = -1;
  int height_ = 0;
};

struct DecompositionViolation {
  int axiom = 0;  // 1 cover, 2 edge, 3 connectivity
  std::vector<Vertex> elements;  // the uncovered vertex or edge, or the split vertex
  std::string witness;
};

/// Checks vertex cover, edge cover and running intersection, in that order,
/// and returns the first failure.
std::optional<DecompositionViolation> verify_decomposition(const Graph& g, const TreeDecomposition& td);

inline constexpr int kExactTreewidthMaxVertices = 20;

struct TreewidthResult {
  int width = 0;
  TreeDecomposition decomposition;
  std::vector<Vertex> elimination_order;
};

/// Minimum-width elimination ordering by subset DP. Throws InstanceTooLarge
/// above kExactTreewidthMaxVertices.
TreewidthResult exact_treewidth(const Graph& g);

/// Decomposition induced by eliminating vertices in the given order.
TreeDecomposition decomposition_from_elimination(const Graph& g, const std::vector<Vertex>& order);

/// Height bound guaranteed by reduce_height: 4 * ceil(log2 N).
int height_bound(int n_vertices);

/// Rebalances `td` by recursive centroid splitting. Output has width at most
/// 3*width(td)+2 and height at most height_bound(N).
TreeDecomposition reduce_height(const TreeDecomposition& td);

/// Lowest common ancestor of the two bags.
inline int lca_bag(const TreeDecomposition& td, int i, int j) { return td.lca(i, j); }

/// First vertex of the next-hop shortest x-y path that lies in `bag`. The bag
/// must sit on the tree path between the representative bags of x and y.
/// Throws NoIntersection if the path misses the bag.
Vertex intersect_shortest_path(const DistanceMatrix& dm, const TreeDecomposition& td, Vertex x, Vertex y, int bag);

// JSON: {"root": r, "bags": [[v, ...], ...], "parent": [p, ...]}.
nlohmann::json decomposition_to_json(const TreeDecomposition& td);
TreeDecomposition decomposition_from_json(const nlohmann::json& j, int n_vertices);

}  // namespace ksl
