#pragma once

// Competitive service over a system of collective tree spanners. Servers move
// along tree paths; each one carries the index of the tree it last parked in.

#include <cstdint>
#include <optional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ksl/advice_tape.hpp"
#include "ksl/metric.hpp"
#include "ksl/offline.hpp"

namespace ksl {

/// Rooted spanning tree whose edges are graph edges, weighted as in the graph.
class SpannerTree {
 public:
  /// Throws MalformedSpanner unless parent[] is a spanning tree of g rooted at
  /// `root` that uses only graph edges.
  SpannerTree(const Graph& g, Vertex root, std::vector<Vertex> parent);

  Vertex root() const noexcept { return root_; }
  int size() const noexcept { return static_cast<int>(parent_.size()); }
  Vertex parent(Vertex v) const { return parent_.at(static_cast<std::size_t>(v)); }
  const std::vector<Vertex>& parents() const noexcept { return parent_; }
  const std::vector<Vertex>& children(Vertex v) const { return children_.at(static_cast<std::size_t>(v)); }
  int depth(Vertex v) const { return depth_.at(static_cast<std::size_t>(v)); }
  Weight root_distance(Vertex v) const { return root_distance_.at(static_cast<std::size_t>(v)); }
  /// Vertices ordered so that parents precede children.
  const std::vector<Vertex>& top_down() const noexcept { return order_; }

  Vertex lca(Vertex a, Vertex b) const;
  Weight distance(Vertex a, Vertex b) const { return root_distance(a) + root_distance(b) - 2 * root_distance(lca(a, b)); }
  bool is_ancestor(Vertex ancestor, Vertex v) const;

 private:
  Vertex root_ = 0;
  std::vector<Vertex> parent_;
  std::vector<std::vector<Vertex>> children_;
  std::vector<int> depth_;
  std::vector<Weight> root_distance_;
  std::vector<Vertex> order_;
  std::vector<std::vector<Vertex>> up_;
};

/// Decomposition of a rooted tree into heavy paths (heavy child = largest
/// subtree, ties to the smaller id).
struct HeavyPathIndex {
  struct Segment {
    int path = 0;
    Vertex exit = 0;  // deepest vertex of the path on the root-to-v path
  };

  std::vector<int> path_of;                // per vertex
  std::vector<int> position;               // per vertex, 0 at the path head
  std::vector<std::vector<Vertex>> paths;  // head first
  std::vector<std::vector<Segment>> root_segments;  // per vertex, root first

  int segment_count(Vertex v) const { return static_cast<int>(root_segments.at(static_cast<std::size_t>(v)).size()); }
  int max_segments() const;
};

HeavyPathIndex build_heavy_paths(const SpannerTree& tree);

/// Segment slots reserved per address: max(1, ceil(log2 N)).
int segment_slots(int n_vertices);

class SpannerSystem {
 public:
  SpannerSystem(std::vector<SpannerTree> trees, double q, double r);

  int mu() const noexcept { return static_cast<int>(trees_.size()); }
  double q() const noexcept { return q_; }
  double r() const noexcept { return r_; }
  const SpannerTree& tree(int i) const { return trees_.at(static_cast<std::size_t>(i)); }
  const HeavyPathIndex& heavy_paths(int i) const { return heavy_.at(static_cast<std::size_t>(i)); }

  /// Tree with the smallest tree distance between a and b; lowest index on ties.
  int best_tree(Vertex a, Vertex b) const;

 private:
  std::vector<SpannerTree> trees_;
  std::vector<HeavyPathIndex> heavy_;
  double q_ = 1;
  double r_ = 0;
};

/// Tree of shortest paths towards `root`, following next_hop.
SpannerTree shortest_path_tree(const Graph& g, const DistanceMatrix& dm, Vertex root);

struct StretchReport {
  bool ok = true;
  Vertex worst_x = 0;
  Vertex worst_y = 0;
  Weight worst_tree_distance = 0;
  Weight worst_graph_distance = 0;
  double worst_excess = 0;  // max of d_T - (q d_G + r) over pairs, best tree per pair
  // Smallest q that certifies the system with r = 0, as an exact fraction.
  Weight measured_q_num = 1;
  Weight measured_q_den = 1;

  double measured_q() const noexcept { return static_cast<double>(measured_q_num) / static_cast<double>(measured_q_den); }
};

/// Exhaustive check of d_T(x, y) <= q d_G(x, y) + r using the best tree per pair.
StretchReport verify_stretch(const DistanceMatrix& dm, const SpannerSystem& system, double q, double r);

struct SpannerParameters {
  int mu = 1;
  int n_vertices = 1;
  int k = 0;
  std::size_t n = 0;
  int tree_bits = 0;     // ceil(log2 mu)
  int segment_bits = 0;  // ceil(log2 segment_slots(N))

  int record_bits() const noexcept { return tree_bits + segment_bits; }
  std::size_t bit_budget() const noexcept {
    return n * 2 * static_cast<std::size_t>(record_bits()) + static_cast<std::size_t>(k * record_bits());
  }
  /// Width of a retrieval rank among `candidates` labeled servers.
  int rank_bits(std::size_t candidates) const;
};

SpannerParameters spanner_parameters(const SpannerSystem& system, int k, std::size_t n);

struct SpannerStep {
  std::size_t t = 0;
  Vertex request = 0;
  int server = 0;
  int retrieval_tree = 0;
  Vertex retrieved_from = 0;
  int parking_tree = 0;
  Vertex parked_at = 0;
  Weight tree_cost = 0;  // tree length of the covered trajectory edge
  Weight graph_distance = 0;
};

struct SpannerRun {
  SpannerParameters params;
  Weight online_cost = 0;
  Weight tree_path_cost = 0;
  std::size_t bits_read = 0;
  std::vector<Vertex> initial_parking;
  std::vector<int> initial_labels;
  Schedule schedule;
  std::vector<SpannerStep> steps;
};

/// k initial parking records, then per request a retrieval record (tree
/// label, rank among that label's servers on the heavy paths above the
/// request) and a parking record (tree, heavy-path segment on the root path).
AdviceTape generate_advice_spanner(const DistanceMatrix& dm, const SpannerSystem& system, const Configuration& init,
                                   std::span<const Vertex> sigma, const Schedule& opt);

/// Throws TapeExhausted, CorruptAdvice or NoLabeledServerOnRootPath on a tape
/// that does not fit the instance.
SpannerRun run_online_spanner(const DistanceMatrix& dm, const SpannerSystem& system, const Configuration& init,
                              std::span<const Vertex> sigma, AdviceTape& tape);

// JSON: {"mu": m, "q": q, "r": r, "trees": [{"root": v, "parent": [...]}, ...]}; parent of the root is -1.
nlohmann::json spanner_system_to_json(const SpannerSystem& system);
SpannerSystem spanner_system_from_json(const Graph& g, const nlohmann::json& j);

}  // namespace ksl
