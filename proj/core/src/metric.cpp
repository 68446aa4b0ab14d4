#include "ksl/metric.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <queue>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ksl/error.hpp"

namespace ksl {
namespace {

constexpr Weight kInfinity = std::numeric_limits<Weight>::max() / 4;

// Validation shared by both parsers; `where(i)` describes the i-th edge.
template <typename Where>
Graph build_checked(std::vector<Edge> edges, int n, Where where) {
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge& e = edges[i];
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n) {
      throw Error(ErrorCode::kVertexOutOfRange, where(i) + ": vertex index outside [0, " + std::to_string(n) + ")");
    }
    if (e.u == e.v) throw Error(ErrorCode::kSelfLoop, where(i) + ": self-loop at " + std::to_string(e.u));
    if (e.weight < 1) throw Error(ErrorCode::kNonPositiveWeight, where(i) + ": weight must be >= 1");
  }
  return build_graph(edges, n);
}

}  // namespace

Weight Graph::edge_weight(Vertex u, Vertex v) const {
  const auto& adj = adjacency_[u];
  auto it = std::lower_bound(adj.begin(), adj.end(), v);
  if (it == adj.end() || *it != v) return 0;
  return adjacency_weight_[u][static_cast<std::size_t>(it - adj.begin())];
}

Graph build_graph(std::span<const Edge> edges, int n) {
  if (n <= 0) throw Error(ErrorCode::kInvalidArgument, "vertex count must be positive");
  Graph g;
  g.n_ = n;
  g.edges_.reserve(edges.size());
  for (const Edge& e : edges) {
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n) {
      throw Error(ErrorCode::kVertexOutOfRange,
                  "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") outside [0, " + std::to_string(n) + ")");
    }
    if (e.u == e.v) throw Error(ErrorCode::kSelfLoop, "self-loop at vertex " + std::to_string(e.u));
    if (e.weight < 1) {
      throw Error(ErrorCode::kNonPositiveWeight,
                  "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") has weight " + std::to_string(e.weight));
    }
    g.edges_.push_back({std::min(e.u, e.v), std::max(e.u, e.v), e.weight});
  }
  std::sort(g.edges_.begin(), g.edges_.end(),
            [](const Edge& a, const Edge& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });
  for (std::size_t i = 1; i < g.edges_.size(); ++i) {
    if (g.edges_[i].u == g.edges_[i - 1].u && g.edges_[i].v == g.edges_[i - 1].v) {
      throw Error(ErrorCode::kDuplicateEdge,
                  "edge (" + std::to_string(g.edges_[i].u) + "," + std::to_string(g.edges_[i].v) + ") listed twice");
    }
  }

  std::vector<std::vector<std::pair<Vertex, Weight>>> adj(static_cast<std::size_t>(n));
  for (const Edge& e : g.edges_) {
    adj[e.u].push_back({e.v, e.weight});
    adj[e.v].push_back({e.u, e.weight});
  }
  g.adjacency_.resize(static_cast<std::size_t>(n));
  g.adjacency_weight_.resize(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    std::sort(adj[v].begin(), adj[v].end());
    for (auto [w, weight] : adj[v]) {
      g.adjacency_[v].push_back(w);
      g.adjacency_weight_[v].push_back(weight);
    }
  }

  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<Vertex> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    for (Vertex w : g.adjacency_[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  if (reached != n) {
    auto missing = std::find(seen.begin(), seen.end(), 0) - seen.begin();
    throw Error(ErrorCode::kDisconnectedGraph, "vertex " + std::to_string(missing) + " is unreachable from vertex 0");
  }
  return g;
}

DistanceMatrix::DistanceMatrix(int n)
    : n_(n),
      dist_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), kInfinity),
      next_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), -1) {}

Weight DistanceMatrix::diameter() const {
  return dist_.empty() ? 0 : *std::max_element(dist_.begin(), dist_.end());
}

DistanceMatrix all_pairs_shortest_paths(const Graph& g) {
  const int n = g.vertex_count();
  DistanceMatrix dm(n);
  // Dijkstra from every source; N is at most a few hundred.
  using Item = std::pair<Weight, Vertex>;
  for (Vertex s = 0; s < n; ++s) {
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dm.dist_[dm.index(s, s)] = 0;
    queue.push({0, s});
    while (!queue.empty()) {
      auto [d, v] = queue.top();
      queue.pop();
      if (d != dm.dist_[dm.index(s, v)]) continue;
      auto nbrs = g.neighbors(v);
      for (Vertex w : nbrs) {
        Weight nd = d + g.edge_weight(v, w);
        if (nd < dm.dist_[dm.index(s, w)]) {
          dm.dist_[dm.index(s, w)] = nd;
          queue.push({nd, w});
        }
      }
    }
  }
  for (Vertex u = 0; u < n; ++u) {
    dm.next_[dm.index(u, u)] = u;
    for (Vertex v = 0; v < n; ++v) {
      if (u == v) continue;
      for (Vertex w : g.neighbors(u)) {  // ascending, so the first match is the smallest
        if (g.edge_weight(u, w) + dm(w, v) == dm(u, v)) {
          dm.next_[dm.index(u, v)] = w;
          break;
        }
      }
    }
  }
  return dm;
}

std::vector<Vertex> shortest_path_vertices(const DistanceMatrix& dm, Vertex x, Vertex y) {
  if (x < 0 || x >= dm.size() || y < 0 || y >= dm.size()) {
    throw Error(ErrorCode::kVertexOutOfRange, "shortest_path_vertices endpoint out of range");
  }
  std::vector<Vertex> path{x};
  while (path.back() != y) path.push_back(dm.next_hop(path.back(), y));
  return path;
}

Weight walk_weight(const Graph& g, std::span<const Vertex> walk) {
  Weight total = 0;
  for (std::size_t i = 1; i < walk.size(); ++i) {
    if (walk[i] == walk[i - 1]) continue;
    Weight w = g.edge_weight(walk[i - 1], walk[i]);
    if (w == 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "walk step " + std::to_string(walk[i - 1]) + "->" + std::to_string(walk[i]) + " is not an edge");
    }
    total += w;
  }
  return total;
}

Graph parse_graph_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  int n = -1;
  long long m = -1;
  std::vector<Edge> edges;
  std::vector<int> edge_lines;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    auto fail = [&](const std::string& why) {
      throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": " + why);
    };
    if (n < 0) {
      if (!(fields >> n >> m) || n <= 0 || m < 0) fail("expected header 'N M' with N > 0, M >= 0");
      std::string rest;
      if (fields >> rest) fail("trailing token '" + rest + "'");
    } else {
      long long u = 0, v = 0, w = 0;
      if (!(fields >> u >> v >> w)) fail("expected 'u v w'");
      std::string rest;
      if (fields >> rest) fail("trailing token '" + rest + "' (weights must be integers)");
      edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v), w});
      edge_lines.push_back(line_no);
    }
  }
  if (n < 0) throw Error(ErrorCode::kParseError, "empty graph file");
  if (static_cast<long long>(edges.size()) != m) {
    throw Error(ErrorCode::kParseError,
                "line " + std::to_string(line_no) + ": header announces " + std::to_string(m) + " edges, found " +
                    std::to_string(edges.size()));
  }
  return build_checked(std::move(edges), n, [&](std::size_t i) { return "line " + std::to_string(edge_lines[i]); });
}

std::string graph_to_text(const Graph& g) {
  std::ostringstream out;
  out << g.vertex_count() << ' ' << g.edges().size() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << ' ' << e.weight << '\n';
  return out.str();
}

Graph graph_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("edges") || !j["n"].is_number_integer() ||
      !j["edges"].is_array()) {
    throw Error(ErrorCode::kParseError, "graph JSON must be {\"n\": int, \"edges\": [[u,v,w],...]}");
  }
  const int n = j["n"].get<int>();
  std::vector<Edge> edges;
  const auto& list = j["edges"];
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto& e = list[i];
    if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || !e[1].is_number_integer() ||
        !e[2].is_number_integer()) {
      throw Error(ErrorCode::kParseError, "edges[" + std::to_string(i) + "]: expected [u, v, w] of integers");
    }
    edges.push_back({e[0].get<Vertex>(), e[1].get<Vertex>(), e[2].get<Weight>()});
  }
  if (n <= 0) throw Error(ErrorCode::kParseError, "n must be positive");
  return build_checked(std::move(edges), n, [](std::size_t i) { return "edges[" + std::to_string(i) + "]"; });
}

nlohmann::json graph_to_json(const Graph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.u, e.v, e.weight});
  return {{"n", g.vertex_count()}, {"edges", std::move(edges)}};
}

Graph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParseError, "cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(std::min(e.byte, text.size())), '\n');
      throw Error(ErrorCode::kParseError, path + " line " + std::to_string(line) + ": " + e.what());
    }
    return graph_from_json(j);
  }
  return parse_graph_text(text);
}

}  // namespace ksl
