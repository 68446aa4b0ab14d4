#pragma once

// Optimal online service from advice over a tree decomposition. Every server
// follows its trajectory in a given optimal schedule; between two requests it
// waits at a vertex of the shortest path that lies in the lowest common
// ancestor of the two representative bags.

#include <cstddef>
#include <vector>

#include "ksl/advice_tape.hpp"
#include "ksl/metric.hpp"
#include "ksl/offline.hpp"
#include "ksl/tree_decomposition.hpp"

namespace ksl {

struct GpcParameters {
  int height = 0;
  int width = 0;
  int k = 0;
  std::size_t n = 0;
  int depth_bits = 0;  // ceil(log2(height + 1))
  int index_bits = 0;  // ceil(log2(width + 1))

  int record_bits() const noexcept { return depth_bits + index_bits; }
  /// (2n + k) records.
  std::size_t bit_budget() const noexcept { return (2 * n + static_cast<std::size_t>(k)) * static_cast<std::size_t>(record_bits()); }
  /// Same count with ceil(log2 h) + ceil(log2 width) bits per record.
  std::size_t alternative_budget() const noexcept;
};

GpcParameters gpc_parameters(const TreeDecomposition& td, int k, std::size_t n);

struct GpcStep {
  std::size_t t = 0;
  Vertex request = 0;
  int server = 0;
  Vertex retrieved_from = 0;
  Vertex parked_at = 0;
  int depth_bits = 0;
  int index_bits = 0;
};

struct GpcRun {
  GpcParameters params;
  Weight online_cost = 0;
  std::size_t bits_read = 0;
  std::vector<Vertex> initial_parking;
  Schedule schedule;
  std::vector<GpcStep> steps;
};

/// Writes k initial records (server-id order), then for each request a
/// retrieval record followed by a parking record. A record is the depth of a
/// bag on the root path of the reference vertex's representative bag plus a
/// vertex index in that bag. The last request of a trajectory parks on itself.
AdviceTape generate_advice(const DistanceMatrix& dm, const TreeDecomposition& td, const Configuration& init,
                           std::span<const Vertex> sigma, const Schedule& opt);

/// Consumes the tape. Throws TapeExhausted, CorruptAdvice, or
/// NoServerAtAddress when the tape does not match the instance.
GpcRun run_online(const DistanceMatrix& dm, const TreeDecomposition& td, const Configuration& init,
                  std::span<const Vertex> sigma, AdviceTape& tape);

}  // namespace ksl
