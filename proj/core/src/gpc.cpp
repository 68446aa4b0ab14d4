#include "ksl/gpc.hpp"

#include "ksl/error.hpp"

namespace ksl {
namespace {

struct Address {
  int depth = 0;
  int index = 0;
};

// Parking spot for the trajectory edge x -> y.
Address park_address(const DistanceMatrix& dm, const TreeDecomposition& td, Vertex x, Vertex y) {
  int top = td.lca(td.representative_bag(x), td.representative_bag(y));
  Vertex z = intersect_shortest_path(dm, td, x, y, top);
  return {td.depth(top), td.in_bag_index(top, z)};
}

void write_address(AdviceTape& tape, const GpcParameters& p, Address a) {
  tape.write_uint(static_cast<std::uint64_t>(a.depth), p.depth_bits);
  tape.write_uint(static_cast<std::uint64_t>(a.index), p.index_bits);
}

Vertex read_address(AdviceTape& tape, const GpcParameters& p, const TreeDecomposition& td, Vertex reference) {
  int depth = static_cast<int>(tape.read_uint(p.depth_bits));
  int index = static_cast<int>(tape.read_uint(p.index_bits));
  int bag = td.ancestor_at_depth(td.representative_bag(reference), depth);
  return td.vertex_at(bag, index);
}

}  // namespace

std::size_t GpcParameters::alternative_budget() const noexcept {
  std::size_t per = static_cast<std::size_t>(ceil_log2(static_cast<std::uint64_t>(height)) +
                                             ceil_log2(static_cast<std::uint64_t>(width)));
  return (2 * n + static_cast<std::size_t>(k)) * per;
}

GpcParameters gpc_parameters(const TreeDecomposition& td, int k, std::size_t n) {
  GpcParameters p;
  p.height = td.height();
  p.width = td.width();
  p.k = k;
  p.n = n;
  p.depth_bits = ceil_log2(static_cast<std::uint64_t>(p.height) + 1);
  p.index_bits = ceil_log2(static_cast<std::uint64_t>(p.width) + 1);
  return p;
}

AdviceTape generate_advice(const DistanceMatrix& dm, const TreeDecomposition& td, const Configuration& init,
                           std::span<const Vertex> sigma, const Schedule& opt) {
  const int k = init.k();
  if (opt.moves.size() != sigma.size()) {
    throw Error(ErrorCode::kScheduleMismatch, "schedule does not cover the request sequence");
  }
  // next_use[t]: next request index served by the same server, or t itself.
  std::vector<std::size_t> next_use(sigma.size());
  std::vector<std::ptrdiff_t> first_use(static_cast<std::size_t>(k), -1);
  std::vector<std::ptrdiff_t> last_seen(static_cast<std::size_t>(k), -1);
  for (std::size_t t = 0; t < sigma.size(); ++t) {
    const Move& m = opt.moves[t];
    if (m.server < 0 || m.server >= k || m.to != sigma[t]) {
      throw Error(ErrorCode::kScheduleMismatch, "move " + std::to_string(t) + " does not serve its request");
    }
    next_use[t] = t;
    auto s = static_cast<std::size_t>(m.server);
    if (last_seen[s] >= 0) next_use[static_cast<std::size_t>(last_seen[s])] = t;
    else first_use[s] = static_cast<std::ptrdiff_t>(t);
    last_seen[s] = static_cast<std::ptrdiff_t>(t);
  }

  const GpcParameters p = gpc_parameters(td, k, sigma.size());
  AdviceTape tape;
  std::vector<Vertex> last_served = init.positions;
  for (int i = 0; i < k; ++i) {
    Vertex x0 = init.positions[static_cast<std::size_t>(i)];
    Vertex target = first_use[static_cast<std::size_t>(i)] >= 0 ? sigma[static_cast<std::size_t>(first_use[static_cast<std::size_t>(i)])] : x0;
    write_address(tape, p, park_address(dm, td, x0, target));
  }
  for (std::size_t t = 0; t < sigma.size(); ++t) {
    const auto s = static_cast<std::size_t>(opt.moves[t].server);
    const Vertex y = sigma[t];
    write_address(tape, p, park_address(dm, td, last_served[s], y));
    write_address(tape, p, park_address(dm, td, y, sigma[next_use[t]]));
    last_served[s] = y;
  }
  return tape;
}

GpcRun run_online(const DistanceMatrix& dm, const TreeDecomposition& td, const Configuration& init,
                  std::span<const Vertex> sigma, AdviceTape& tape) {
  const int k = init.k();
  GpcRun run;
  run.params = gpc_parameters(td, k, sigma.size());
  const std::size_t start = tape.bits_read();

  std::vector<Vertex> at = init.positions;           // current vertex
  std::vector<Vertex> last_served = init.positions;  // vertex before parking
  Weight physical = 0;
  for (int i = 0; i < k; ++i) {
    Vertex z = read_address(tape, run.params, td, init.positions[static_cast<std::size_t>(i)]);
    physical += dm(init.positions[static_cast<std::size_t>(i)], z);
    at[static_cast<std::size_t>(i)] = z;
    run.initial_parking.push_back(z);
  }
  for (std::size_t t = 0; t < sigma.size(); ++t) {
    const Vertex y = sigma[t];
    if (y < 0 || y >= dm.size()) throw Error(ErrorCode::kVertexOutOfRange, "request " + std::to_string(t));
    const Vertex z = read_address(tape, run.params, td, y);
    // Among co-located servers, prefer one that parked here after a serve.
    int server = -1;
    for (int i = 0; i < k; ++i) {
      const auto s = static_cast<std::size_t>(i);
      if (at[s] != z) continue;
      if (server < 0) server = i;
      if (last_served[s] != z) {
        server = i;
        break;
      }
    }
    if (server < 0) {
      throw Error(ErrorCode::kNoServerAtAddress, "request " + std::to_string(t) + ": no server at vertex " + std::to_string(z));
    }
    const auto s = static_cast<std::size_t>(server);
    Move move{t, server, last_served[s], z, y, dm(last_served[s], z) + dm(z, y)};
    const Vertex park = read_address(tape, run.params, td, y);
    physical += dm(z, y) + dm(y, park);
    at[s] = park;
    last_served[s] = y;
    run.schedule.moves.push_back(move);
    run.schedule.total_cost += move.cost;
    run.steps.push_back({t, y, server, z, park, run.params.depth_bits * 2, run.params.index_bits * 2});
  }
  run.online_cost = physical;
  run.bits_read = tape.bits_read() - start;
  return run;
}

}  // namespace ksl
