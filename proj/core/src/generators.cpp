#include "ksl/generators.hpp"

#include <algorithm>

#include "ksl/error.hpp"

namespace ksl {

std::uint64_t SplitMix64::next() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::int64_t SplitMix64::uniform(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw Error(ErrorCode::kInvalidArgument, "empty range");
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(next() % span);
}

GraphWithDecomposition random_partial_ktree(SplitMix64& rng, int n, int k, Weight max_weight) {
  if (n < 1 || k < 1) throw Error(ErrorCode::kInvalidArgument, "partial k-tree needs n >= 1 and k >= 1");
  auto weight = [&] { return static_cast<Weight>(rng.uniform(1, max_weight)); };
  const int base = std::min(n, k + 1);
  std::vector<Edge> edges;
  for (Vertex u = 0; u < base; ++u) {
    for (Vertex v = u + 1; v < base; ++v) {
      if (v == u + 1 || rng.chance(1, 2)) edges.push_back({u, v, weight()});
    }
  }
  std::vector<std::vector<Vertex>> bags;
  std::vector<int> parent;
  std::vector<Vertex> root(static_cast<std::size_t>(base));
  for (int i = 0; i < base; ++i) root[static_cast<std::size_t>(i)] = i;
  bags.push_back(root);
  parent.push_back(-1);
  for (Vertex v = base; v < n; ++v) {
    const int host = static_cast<int>(rng.uniform(0, static_cast<std::int64_t>(bags.size()) - 1));
    std::vector<Vertex> clique = bags[static_cast<std::size_t>(host)];
    if (static_cast<int>(clique.size()) == k + 1) {
      clique.erase(clique.begin() + rng.uniform(0, static_cast<std::int64_t>(clique.size()) - 1));
    }
    const auto forced = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(clique.size()) - 1));
    for (std::size_t i = 0; i < clique.size(); ++i) {
      if (i == forced || rng.chance(1, 2)) edges.push_back({clique[i], v, weight()});
    }
    clique.push_back(v);
    bags.push_back(std::move(clique));
    parent.push_back(host);
  }
  Graph g = build_graph(edges, n);
  return {std::move(g), TreeDecomposition(std::move(bags), std::move(parent), n)};
}

Graph random_tree(SplitMix64& rng, int n, Weight max_weight) {
  std::vector<Edge> edges;
  for (Vertex v = 1; v < n; ++v) {
    edges.push_back({static_cast<Vertex>(rng.uniform(0, v - 1)), v, static_cast<Weight>(rng.uniform(1, max_weight))});
  }
  return build_graph(edges, n);
}

Graph grid_graph(int rows, int cols) {
  std::vector<Edge> edges;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const Vertex v = r * cols + c;
      if (c + 1 < cols) edges.push_back({v, v + 1, 1});
      if (r + 1 < rows) edges.push_back({v, v + cols, 1});
    }
  }
  return build_graph(edges, rows * cols);
}

std::vector<Vertex> random_sequence(SplitMix64& rng, int n_vertices, std::size_t length) {
  std::vector<Vertex> sigma(length);
  for (auto& v : sigma) v = static_cast<Vertex>(rng.uniform(0, n_vertices - 1));
  return sigma;
}

Configuration random_configuration(SplitMix64& rng, int n_vertices, int k) {
  Configuration c;
  for (int i = 0; i < k; ++i) c.positions.push_back(static_cast<Vertex>(rng.uniform(0, n_vertices - 1)));
  return c;
}

}  // namespace ksl
