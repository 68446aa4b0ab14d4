#pragma once

// Seeded instance generators. All randomness flows through SplitMix64 so a
// seed reproduces an instance bit for bit on any platform.

#include <cstdint>
#include <vector>

#include "ksl/metric.hpp"
#include "ksl/offline.hpp"
#include "ksl/tree_decomposition.hpp"

namespace ksl {

/// state += 0x9e3779b97f4a7c15; z = state;
/// z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9; z = (z ^ (z >> 27)) * 0x94d049bb133111eb;
/// return z ^ (z >> 31).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  /// lo + next() % (hi - lo + 1).
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);
  /// True with probability num/den.
  bool chance(std::uint64_t num, std::uint64_t den) { return next() % den < num; }

 private:
  std::uint64_t state_;
};

struct GraphWithDecomposition {
  Graph graph;
  TreeDecomposition decomposition;
};

/// Random k-tree on n vertices with each non-forced edge kept with
/// probability 1/2 and weights uniform in [1, max_weight]. The k-tree's bags
/// are returned as a width-min(k, n-1) decomposition. Connectivity is kept by
/// forcing one edge from every new vertex into its clique.
GraphWithDecomposition random_partial_ktree(SplitMix64& rng, int n, int k, Weight max_weight = 1);

/// Vertex v > 0 hangs from a uniform vertex in [0, v).
Graph random_tree(SplitMix64& rng, int n, Weight max_weight = 1);

/// rows x cols lattice with unit weights, vertex r * cols + c.
Graph grid_graph(int rows, int cols);

std::vector<Vertex> random_sequence(SplitMix64& rng, int n_vertices, std::size_t length);

/// k positions drawn independently (co-location allowed).
Configuration random_configuration(SplitMix64& rng, int n_vertices, int k);

}  // namespace ksl
