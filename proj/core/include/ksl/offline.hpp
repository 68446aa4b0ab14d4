#pragma once

// Exact offline k-server optimum, used as the oracle for every online run.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ksl/metric.hpp"

namespace ksl {

/// Server positions indexed by server id.
struct Configuration {
  std::vector<Vertex> positions;

  int k() const noexcept { return static_cast<int>(positions.size()); }
  /// Positions as a sorted multiset.
  std::vector<Vertex> sorted() const;

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

/// One served request. The server travels from -> via -> to, where `via` is
/// an optional parking vertex; cost is the metric length of that route.
struct Move {
  std::size_t t = 0;
  int server = 0;
  Vertex from = 0;
  std::optional<Vertex> via;
  Vertex to = 0;
  Weight cost = 0;

  friend bool operator==(const Move&, const Move&) = default;
};

struct Schedule {
  std::vector<Move> moves;  // exactly one per request, ordered by t
  Weight total_cost = 0;

  friend bool operator==(const Schedule&, const Schedule&) = default;
};

/// Replays a schedule against the metric and returns its cost. Throws
/// ScheduleMismatch if a move starts where its server is not, misses its
/// request, misreports a cost, or the total is inconsistent.
Weight replay_schedule(const DistanceMatrix& dm, const Configuration& init, std::span<const Vertex> sigma,
                       const Schedule& schedule);

/// Drops parking detours: every move goes straight from -> to.
Schedule make_lazy(const DistanceMatrix& dm, const Schedule& schedule);

/// Sorted-multiset configuration after each request (index 0 = initial).
std::vector<std::vector<Vertex>> configuration_trace(const Configuration& init, const Schedule& schedule);

struct OptResult {
  Weight cost = 0;
  Schedule schedule;
};

inline constexpr double kDpStateGuard = 1e7;
inline constexpr double kEnumerationStateGuard = 1e6;

/// Dynamic program over (request index, sorted configuration); transitions are
/// lazy. Throws InstanceTooLarge when N^k * n exceeds kDpStateGuard.
OptResult opt_cost_dp(const DistanceMatrix& dm, const Configuration& init, std::span<const Vertex> sigma);

/// Every cost-minimal lazy schedule, distinguished by configuration sequence.
/// Co-located servers are interchangeable; the lowest id is reported.
/// Throws InstanceTooLarge past kEnumerationStateGuard or if more than
/// `limit` schedules exist.
std::vector<Schedule> opt_all_schedules(const DistanceMatrix& dm, const Configuration& init,
                                        std::span<const Vertex> sigma, std::size_t limit = 1 << 16);

/// Min-cost-flow formulation: one unit of flow per server through a chain of
/// request gadgets, each gadget carrying a large negative reward so every
/// request is covered. Solved by successive shortest paths.
OptResult opt_cost_flow(const DistanceMatrix& dm, const Configuration& init, std::span<const Vertex> sigma);

// Schedule JSON: {"total_cost": c, "moves": [{"t","server","from","via"?,"to","cost"}, ...]}.
nlohmann::json schedule_to_json(const Schedule& s);
Schedule schedule_from_json(const nlohmann::json& j);

}  // namespace ksl
