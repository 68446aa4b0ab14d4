#pragma once

// Weighted undirected graphs and the shortest-path metric they induce.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace ksl {

using Vertex = int;
using Weight = std::int64_t;

struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  Weight weight = 1;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Connected, simple, undirected graph with integer weights >= 1.
/// Edges are stored once with u < v, sorted; adjacency lists are ascending.
class Graph {
 public:
  Graph() = default;

  int vertex_count() const noexcept { return n_; }
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::span<const Vertex> neighbors(Vertex v) const { return adjacency_[v]; }
  /// Weight of edge (u, v), or 0 if the vertices are not adjacent.
  Weight edge_weight(Vertex u, Vertex v) const;
  bool has_edge(Vertex u, Vertex v) const { return edge_weight(u, v) > 0; }

 private:
  friend Graph build_graph(std::span<const Edge> edges, int n);

  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<Vertex>> adjacency_;
  std::vector<std::vector<Weight>> adjacency_weight_;
};

/// Validates and builds a graph. Throws SelfLoop, NonPositiveWeight,
/// VertexOutOfRange, DuplicateEdge or DisconnectedGraph.
Graph build_graph(std::span<const Edge> edges, int n);

class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(int n);

  int size() const noexcept { return n_; }
  Weight operator()(Vertex u, Vertex v) const { return dist_[index(u, v)]; }
  /// First vertex after u on the lexicographically smallest shortest u-v path.
  Vertex next_hop(Vertex u, Vertex v) const { return next_[index(u, v)]; }
  Weight diameter() const;

 private:
  friend DistanceMatrix all_pairs_shortest_paths(const Graph& g);

  std::size_t index(Vertex u, Vertex v) const {
    return static_cast<std::size_t>(u) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(v);
  }

  int n_ = 0;
  std::vector<Weight> dist_;
  std::vector<Vertex> next_;
};

/// Exact all-pairs distances. Among equal-length continuations next_hop picks
/// the smallest neighbour id, so reconstructed paths are reproducible.
DistanceMatrix all_pairs_shortest_paths(const Graph& g);

/// Shortest path x = p_0, ..., p_l = y following next_hop.
std::vector<Vertex> shortest_path_vertices(const DistanceMatrix& dm, Vertex x, Vertex y);

/// Sum of edge weights along a vertex walk; throws InvalidArgument if two
/// consecutive vertices are not adjacent.
Weight walk_weight(const Graph& g, std::span<const Vertex> walk);

// Text format: first line "N M", then M lines "u v w". Blank lines and lines
// starting with '#' are ignored. Errors name the offending line.
Graph parse_graph_text(std::string_view text);
std::string graph_to_text(const Graph& g);

// JSON mirror: {"n": N, "edges": [[u, v, w], ...]}.
Graph graph_from_json(const nlohmann::json& j);
nlohmann::json graph_to_json(const Graph& g);

/// Reads either format, chosen by the first non-space character.
Graph load_graph_file(const std::string& path);

}  // namespace ksl
