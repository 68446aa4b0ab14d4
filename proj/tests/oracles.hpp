#pragma once

// Slow, obviously-correct reference computations used to cross-check the
// library. Nothing here shares code with core/.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <vector>

#include "ksl/metric.hpp"

namespace oracle {

using ksl::Vertex;
using ksl::Weight;

inline constexpr Weight kUnreached = std::numeric_limits<Weight>::max() / 4;

inline std::vector<std::vector<Weight>> bellman_ford(const ksl::Graph& g) {
  const int n = g.vertex_count();
  std::vector<std::vector<Weight>> d(n, std::vector<Weight>(n, kUnreached));
  for (int s = 0; s < n; ++s) {
    d[s][s] = 0;
    for (int round = 0; round < n; ++round) {
      for (const auto& e : g.edges()) {
        if (d[s][e.u] + e.weight < d[s][e.v]) d[s][e.v] = d[s][e.u] + e.weight;
        if (d[s][e.v] + e.weight < d[s][e.u]) d[s][e.u] = d[s][e.v] + e.weight;
      }
    }
  }
  return d;
}

inline std::vector<int> bfs_hops(const ksl::Graph& g, Vertex s) {
  std::vector<int> d(static_cast<std::size_t>(g.vertex_count()), -1);
  std::queue<Vertex> q;
  d[s] = 0;
  q.push(s);
  while (!q.empty()) {
    Vertex v = q.front();
    q.pop();
    for (Vertex w : g.neighbors(v)) {
      if (d[w] < 0) {
        d[w] = d[v] + 1;
        q.push(w);
      }
    }
  }
  return d;
}

/// Minimum over every assignment of requests to servers (each request moves
/// the chosen server, possibly by zero). Exponential in the sequence length.
inline Weight brute_force_opt(const std::vector<std::vector<Weight>>& d, std::vector<Vertex> pos,
                              const std::vector<Vertex>& sigma) {
  Weight best = kUnreached;
  std::function<void(std::size_t, Weight)> go = [&](std::size_t t, Weight cost) {
    if (cost >= best) return;
    if (t == sigma.size()) {
      best = cost;
      return;
    }
    for (std::size_t s = 0; s < pos.size(); ++s) {
      const Vertex before = pos[s];
      pos[s] = sigma[t];
      go(t + 1, cost + d[before][sigma[t]]);
      pos[s] = before;
    }
  };
  go(0, 0);
  return best;
}

/// Treewidth as the best elimination order over all N! permutations.
inline int brute_force_treewidth(const ksl::Graph& g) {
  const int n = g.vertex_count();
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  int best = n - 1;
  do {
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    for (const auto& e : g.edges()) adj[e.u][e.v] = adj[e.v][e.u] = 1;
    std::vector<char> gone(n, 0);
    int width = 0;
    for (int v : order) {
      std::vector<int> later;
      for (int w = 0; w < n; ++w) {
        if (!gone[w] && adj[v][w]) later.push_back(w);
      }
      width = std::max(width, static_cast<int>(later.size()));
      if (width >= best) break;
      for (int a : later) {
        for (int b : later) {
          if (a != b) adj[a][b] = 1;
        }
      }
      gone[v] = 1;
    }
    best = std::min(best, width);
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

inline int naive_lca(const std::vector<int>& parent, int a, int b) {
  std::vector<int> up;
  for (int x = a; x != -1; x = parent[x]) up.push_back(x);
  for (int y = b; y != -1; y = parent[y]) {
    if (std::find(up.begin(), up.end(), y) != up.end()) return y;
  }
  return -1;
}

/// Distances inside a tree given by parent pointers (root has parent -1),
/// by graph search over the tree edges.
inline std::vector<std::vector<Weight>> tree_distances(const ksl::Graph& g, const std::vector<Vertex>& parent) {
  const int n = static_cast<int>(parent.size());
  std::vector<std::vector<std::pair<Vertex, Weight>>> adj(n);
  for (int v = 0; v < n; ++v) {
    if (parent[v] >= 0) {
      adj[v].push_back({parent[v], g.edge_weight(v, parent[v])});
      adj[parent[v]].push_back({v, g.edge_weight(v, parent[v])});
    }
  }
  std::vector<std::vector<Weight>> d(n, std::vector<Weight>(n, kUnreached));
  for (int s = 0; s < n; ++s) {
    std::vector<Vertex> stack{s};
    d[s][s] = 0;
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      for (auto [w, wt] : adj[v]) {
        if (d[s][w] == kUnreached) {
          d[s][w] = d[s][v] + wt;
          stack.push_back(w);
        }
      }
    }
  }
  return d;
}

}  // namespace oracle
