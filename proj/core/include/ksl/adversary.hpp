#pragma once

// Adversarial instance families and the bound formulas attached to them.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ksl/metric.hpp"
#include "ksl/offline.hpp"
#include "ksl/tree_decomposition.hpp"

namespace ksl {

// ---------------------------------------------------------------------------
// Two servers on a path, rounds of seven requests.

/// One entry per round: false puts the far-left vertex second, true the far-right.
using RoundBits = std::vector<bool>;

/// Parses a string of '0'/'1'; throws InvalidArgument otherwise or when empty.
RoundBits parse_round_bits(std::string_view text);

inline constexpr int kRoundLength = 7;

Graph path_graph(int n_vertices);

/// Servers on the second and fourth vertex of the path.
Configuration path_round_start();

/// Requests (2, 0|4, 2, 1, 3, 1, 3) per round, 0-based. Throws PathTooShort
/// for paths with fewer than five vertices.
std::vector<Vertex> path_round_sequence(const RoundBits& bits, int n_vertices);

struct RoundCostSplit {
  Weight matched = 0;     // cheapest lazy service when the first move fits the round type
  Weight mismatched = 0;  // cheapest when it does not
};

/// Exhaustive over lazy two-server schedules of a single round on P5.
RoundCostSplit round_cost_split(bool round_type);

/// Round guess implied by a schedule: 0 when the right-hand server serves the
/// first request of the round, 1 otherwise. One entry per round.
std::vector<int> round_guesses(const Configuration& init, const Schedule& schedule, std::size_t rounds);

/// Advice lower bound in bits for ratio tau in [1, 5/4]:
/// (1 + (2t-2) log2(2t-2) + (3-2t) log2(3-2t)) n / 7 with 0 log 0 = 0.
/// Throws TauOutOfRange.
double sgkh_advice_bound(double tau, double n);

// ---------------------------------------------------------------------------
// Unit, module and joined-module graphs. Every edge has weight 1.

/// Vertex numbering of `modules` copies of a two-sided module graph, plus an
/// optional source joined to the first element vertex of each module.
/// Within a side: element vertices 0..gamma-1, then one vertex per proper
/// subset of the elements (by bit mask, full mask excluded).
class ModuleFamily {
 public:
  enum class Kind { kElement, kSubset, kSource };
  struct Role {
    Kind kind = Kind::kElement;
    int module = 0;
    int side = 0;
    int element = 0;     // kElement
    unsigned mask = 0;   // kSubset
  };

  ModuleFamily(int gamma, int modules, bool with_source);

  int gamma() const noexcept { return gamma_; }
  int modules() const noexcept { return modules_; }
  bool with_source() const noexcept { return with_source_; }
  int side_size() const noexcept { return gamma_ + (1 << gamma_) - 1; }
  int module_size() const noexcept { return 2 * side_size(); }
  int vertex_count() const noexcept { return modules_ * module_size() + (with_source_ ? 1 : 0); }
  int k() const noexcept { return gamma_ * modules_; }

  Vertex element(int module, int side, int index) const;
  Vertex subset(int module, int side, unsigned mask) const;
  Vertex source() const;
  Role classify(Vertex v) const;

  Graph graph() const;
  /// Star of 2(2^gamma - 1) bags per module, each holding both element sets
  /// and one subset vertex; with a source, a chain of {source, attachment}
  /// bags links the modules.
  TreeDecomposition decomposition() const;
  /// One server per element vertex of the first side, ids module-major.
  Configuration start() const;

 private:
  int gamma_;
  int modules_;
  bool with_source_;
};

/// One side of a module on its own: gamma + 2^gamma - 1 vertices.
struct UnitGraph {
  Graph graph;
  std::vector<std::string> labels;  // "u<i>" or "w{...}"
};
UnitGraph unit_graph(int gamma);
Graph module_graph(int gamma);
Graph gb_graph(int modules, int gamma);
TreeDecomposition module_graph_decomposition(int gamma);
TreeDecomposition gb_decomposition(int modules, int gamma);

/// Permutation of 0..gamma-1: the order in which elements join the subset.
using Permutation = std::vector<int>;

struct RoundPermutations {
  std::vector<Permutation> first;   // per module, side 0
  std::vector<Permutation> second;  // per module, side 1
};

struct ValidSequence {
  ModuleFamily family;
  std::vector<RoundPermutations> rounds;
  std::vector<Vertex> requests;
};

/// Builds rounds of 4 gamma m requests: the growing subsets of side 0
/// interleaved across modules, the side-1 elements in ascending order, the
/// growing subsets of side 1, the side-0 elements. Throws BadPermutation.
ValidSequence valid_sequence(const ModuleFamily& family, const std::vector<RoundPermutations>& rounds);

/// Every valid sequence with the given number of rounds, in lexicographic
/// order of the permutation choices.
std::vector<ValidSequence> all_valid_sequences(const ModuleFamily& family, int rounds);

/// Checks that the requests of each module and side form growing subset
/// chains that start at the empty set. Returns an empty string when valid.
std::string projection_violation(const ModuleFamily& family, std::span<const Vertex> requests);

/// Serves a valid sequence at cost 1 per request without moving servers
/// between modules. Throws InvalidSequence when the requests or the server
/// positions do not fit that pattern.
Schedule perm_algorithm(const DistanceMatrix& dm, const ModuleFamily& family, const Configuration& init,
                        std::span<const Vertex> requests);

/// (gamma!)^(n / (2 gamma)); throws InvalidArgument unless 2 gamma divides n.
boost::multiprecision::cpp_int count_valid_sequences(int gamma, std::uint64_t n);

struct TreewidthAdviceBound {
  double exact_bits = 0;        // (n / 2 gamma) log2(gamma!), gamma = alpha / 2
  double stirling_bits = 0;     // (n / 2) log2(gamma / e)
  double closed_form_bits = 0;  // (n / 2)(log2 alpha - 1.22)
};

/// Throws InvalidArgument for odd alpha or alpha < 4.
TreewidthAdviceBound treewidth_advice_bound(int alpha, double n);

}  // namespace ksl
