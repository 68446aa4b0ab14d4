#include "ksl/adversary.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "ksl/error.hpp"

namespace ksl {
namespace {

double xlog2x(double x) { return x <= 0 ? 0.0 : x * std::log2(x); }

unsigned full_mask(int gamma) { return (1U << gamma) - 1; }

unsigned prefix_mask(const Permutation& perm, int length) {
  unsigned mask = 0;
  for (int i = 0; i < length; ++i) mask |= 1U << perm[static_cast<std::size_t>(i)];
  return mask;
}

void check_permutation(const Permutation& perm, int gamma) {
  std::vector<int> sorted = perm;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> expected(static_cast<std::size_t>(gamma));
  std::iota(expected.begin(), expected.end(), 0);
  if (sorted != expected) {
    std::string text;
    for (int v : perm) text += (text.empty() ? "" : ",") + std::to_string(v);
    throw Error(ErrorCode::kBadPermutation, "(" + text + ") is not a permutation of 0.." + std::to_string(gamma - 1));
  }
}

std::vector<Permutation> all_permutations(int gamma) {
  Permutation p(static_cast<std::size_t>(gamma));
  std::iota(p.begin(), p.end(), 0);
  std::vector<Permutation> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

}  // namespace

RoundBits parse_round_bits(std::string_view text) {
  if (text.empty()) throw Error(ErrorCode::kInvalidArgument, "round bits must not be empty");
  RoundBits bits;
  for (char c : text) {
    if (c != '0' && c != '1') throw Error(ErrorCode::kInvalidArgument, std::string("round bit '") + c + "' is not 0 or 1");
    bits.push_back(c == '1');
  }
  return bits;
}

Graph path_graph(int n_vertices) {
  std::vector<Edge> edges;
  for (Vertex v = 0; v + 1 < n_vertices; ++v) edges.push_back({v, v + 1, 1});
  return build_graph(edges, n_vertices);
}

Configuration path_round_start() { return Configuration{{1, 3}}; }

std::vector<Vertex> path_round_sequence(const RoundBits& bits, int n_vertices) {
  if (n_vertices < 5) throw Error(ErrorCode::kPathTooShort, "rounds need at least 5 vertices, got " + std::to_string(n_vertices));
  if (bits.empty()) throw Error(ErrorCode::kInvalidArgument, "at least one round is required");
  std::vector<Vertex> sigma;
  for (bool type : bits) {
    for (Vertex v : {2, type ? 4 : 0, 2, 1, 3, 1, 3}) sigma.push_back(v);
  }
  return sigma;
}

RoundCostSplit round_cost_split(bool round_type) {
  const Graph g = path_graph(5);
  const DistanceMatrix dm = all_pairs_shortest_paths(g);
  const std::vector<Vertex> sigma = path_round_sequence({round_type}, 5);
  const Configuration start = path_round_start();
  // Server 1 starts on the right. Type 0 is matched by moving it first.
  const int matched_server = round_type ? 0 : 1;

  RoundCostSplit best{std::numeric_limits<Weight>::max(), std::numeric_limits<Weight>::max()};
  std::vector<Vertex> pos = start.positions;
  std::function<void(std::size_t, Weight, int)> walk = [&](std::size_t t, Weight cost, int first) {
    if (t == sigma.size()) {
      Weight& slot = first == matched_server ? best.matched : best.mismatched;
      slot = std::min(slot, cost);
      return;
    }
    const Vertex r = sigma[t];
    if (pos[0] == r || pos[1] == r) {
      walk(t + 1, cost, first);
      return;
    }
    for (int s = 0; s < 2; ++s) {
      const Vertex before = pos[static_cast<std::size_t>(s)];
      pos[static_cast<std::size_t>(s)] = r;
      walk(t + 1, cost + dm(before, r), t == 0 ? s : first);
      pos[static_cast<std::size_t>(s)] = before;
    }
  };
  walk(0, 0, -1);
  return best;
}

std::vector<int> round_guesses(const Configuration& init, const Schedule& schedule, std::size_t rounds) {
  if (init.k() != 2) throw Error(ErrorCode::kInvalidArgument, "round guesses need exactly two servers");
  if (schedule.moves.size() < rounds * kRoundLength) {
    throw Error(ErrorCode::kInvalidArgument, "schedule is shorter than the requested rounds");
  }
  std::vector<Vertex> pos = init.positions;
  std::vector<int> guesses;
  for (std::size_t t = 0; t < rounds * kRoundLength; ++t) {
    const Move& m = schedule.moves[t];
    if (t % kRoundLength == 0) {
      const Vertex self = pos[static_cast<std::size_t>(m.server)];
      const Vertex other = pos[static_cast<std::size_t>(1 - m.server)];
      guesses.push_back(self > other ? 0 : 1);
    }
    pos[static_cast<std::size_t>(m.server)] = m.to;
  }
  return guesses;
}

double sgkh_advice_bound(double tau, double n) {
  if (!(tau >= 1.0 && tau <= 1.25)) {
    throw Error(ErrorCode::kTauOutOfRange, "ratio " + std::to_string(tau) + " outside [1, 5/4]");
  }
  const double a = 2 * tau - 2;
  const double b = 3 - 2 * tau;
  return (1 + xlog2x(a) + xlog2x(b)) * n / 7;
}

ModuleFamily::ModuleFamily(int gamma, int modules, bool with_source)
    : gamma_(gamma), modules_(modules), with_source_(with_source) {
  if (gamma < 2 || gamma > 16) throw Error(ErrorCode::kInvalidArgument, "gamma must lie in [2, 16]");
  if (modules < 1) throw Error(ErrorCode::kInvalidArgument, "at least one module is required");
  if (modules > 1 && !with_source) throw Error(ErrorCode::kInvalidArgument, "several modules need a source to stay connected");
}

Vertex ModuleFamily::element(int module, int side, int index) const {
  return module * module_size() + side * side_size() + index;
}

Vertex ModuleFamily::subset(int module, int side, unsigned mask) const {
  return module * module_size() + side * side_size() + gamma_ + static_cast<int>(mask);
}

Vertex ModuleFamily::source() const {
  if (!with_source_) throw Error(ErrorCode::kInvalidArgument, "family has no source");
  return modules_ * module_size();
}

ModuleFamily::Role ModuleFamily::classify(Vertex v) const {
  if (v < 0 || v >= vertex_count()) throw Error(ErrorCode::kVertexOutOfRange, "vertex " + std::to_string(v));
  Role role;
  if (with_source_ && v == source()) {
    role.kind = Kind::kSource;
    return role;
  }
  role.module = v / module_size();
  int rest = v % module_size();
  role.side = rest / side_size();
  rest %= side_size();
  if (rest < gamma_) {
    role.kind = Kind::kElement;
    role.element = rest;
  } else {
    role.kind = Kind::kSubset;
    role.mask = static_cast<unsigned>(rest - gamma_);
  }
  return role;
}

Graph ModuleFamily::graph() const {
  std::vector<Edge> edges;
  for (int m = 0; m < modules_; ++m) {
    for (int side = 0; side < 2; ++side) {
      for (unsigned mask = 0; mask < full_mask(gamma_); ++mask) {
        const Vertex w = subset(m, side, mask);
        for (int i = 0; i < gamma_; ++i) {
          if (!((mask >> i) & 1U)) edges.push_back({element(m, side, i), w, 1});
        }
        edges.push_back({w, element(m, 1 - side, std::popcount(mask)), 1});
      }
    }
    if (with_source_) edges.push_back({source(), element(m, 0, 0), 1});
  }
  return build_graph(edges, vertex_count());
}

TreeDecomposition ModuleFamily::decomposition() const {
  std::vector<std::vector<Vertex>> bags;
  std::vector<int> parent;
  std::vector<int> module_root;
  for (int m = 0; m < modules_; ++m) {
    std::vector<Vertex> elements;
    for (int side = 0; side < 2; ++side) {
      for (int i = 0; i < gamma_; ++i) elements.push_back(element(m, side, i));
    }
    const int center = static_cast<int>(bags.size());
    module_root.push_back(center);
    for (int side = 0; side < 2; ++side) {
      for (unsigned mask = 0; mask < full_mask(gamma_); ++mask) {
        auto bag = elements;
        bag.push_back(subset(m, side, mask));
        parent.push_back(static_cast<int>(bags.size()) == center ? -1 : center);
        bags.push_back(std::move(bag));
      }
    }
  }
  if (with_source_) {
    for (int m = 0; m < modules_; ++m) {
      const int link = static_cast<int>(bags.size());
      bags.push_back({source(), element(m, 0, 0)});
      parent.push_back(m == 0 ? -1 : link - 1);
      parent[static_cast<std::size_t>(module_root[static_cast<std::size_t>(m)])] = link;
    }
  }
  return TreeDecomposition(std::move(bags), std::move(parent), vertex_count());
}

Configuration ModuleFamily::start() const {
  Configuration c;
  for (int m = 0; m < modules_; ++m) {
    for (int i = 0; i < gamma_; ++i) c.positions.push_back(element(m, 0, i));
  }
  return c;
}

UnitGraph unit_graph(int gamma) {
  if (gamma < 2 || gamma > 16) throw Error(ErrorCode::kInvalidArgument, "gamma must lie in [2, 16]");
  UnitGraph unit;
  std::vector<Edge> edges;
  for (int i = 0; i < gamma; ++i) unit.labels.push_back("u" + std::to_string(i));
  for (unsigned mask = 0; mask < full_mask(gamma); ++mask) {
    std::string label = "w{";
    for (int i = 0; i < gamma; ++i) {
      if ((mask >> i) & 1U) label += (label.size() > 2 ? "," : "") + std::to_string(i);
      else edges.push_back({i, gamma + static_cast<int>(mask), 1});
    }
    unit.labels.push_back(label + "}");
  }
  unit.graph = build_graph(edges, gamma + static_cast<int>(full_mask(gamma)));
  return unit;
}

Graph module_graph(int gamma) { return ModuleFamily(gamma, 1, false).graph(); }
Graph gb_graph(int modules, int gamma) { return ModuleFamily(gamma, modules, true).graph(); }
TreeDecomposition module_graph_decomposition(int gamma) { return ModuleFamily(gamma, 1, false).decomposition(); }
TreeDecomposition gb_decomposition(int modules, int gamma) { return ModuleFamily(gamma, modules, true).decomposition(); }

ValidSequence valid_sequence(const ModuleFamily& family, const std::vector<RoundPermutations>& rounds) {
  const int gamma = family.gamma();
  const int modules = family.modules();
  ValidSequence seq{family, rounds, {}};
  for (const auto& round : rounds) {
    if (static_cast<int>(round.first.size()) != modules || static_cast<int>(round.second.size()) != modules) {
      throw Error(ErrorCode::kBadPermutation, "each round needs one permutation per module and side");
    }
    for (const auto& p : round.first) check_permutation(p, gamma);
    for (const auto& p : round.second) check_permutation(p, gamma);
    for (int side = 0; side < 2; ++side) {
      const auto& perms = side == 0 ? round.first : round.second;
      for (int j = 0; j < gamma; ++j) {
        for (int m = 0; m < modules; ++m) {
          seq.requests.push_back(family.subset(m, side, prefix_mask(perms[static_cast<std::size_t>(m)], j)));
        }
      }
      for (int j = 0; j < gamma; ++j) {
        for (int m = 0; m < modules; ++m) seq.requests.push_back(family.element(m, 1 - side, j));
      }
    }
  }
  return seq;
}

std::vector<ValidSequence> all_valid_sequences(const ModuleFamily& family, int rounds) {
  const auto perms = all_permutations(family.gamma());
  const std::size_t slots = static_cast<std::size_t>(rounds) * 2 * static_cast<std::size_t>(family.modules());
  std::vector<std::size_t> choice(slots, 0);
  std::vector<ValidSequence> out;
  while (true) {
    std::vector<RoundPermutations> plan(static_cast<std::size_t>(rounds));
    std::size_t slot = 0;
    for (auto& round : plan) {
      for (int m = 0; m < family.modules(); ++m) round.first.push_back(perms[choice[slot++]]);
      for (int m = 0; m < family.modules(); ++m) round.second.push_back(perms[choice[slot++]]);
    }
    out.push_back(valid_sequence(family, plan));
    std::size_t i = slots;
    while (i > 0 && ++choice[i - 1] == perms.size()) choice[--i] = 0;
    if (i == 0) break;
  }
  return out;
}

std::string projection_violation(const ModuleFamily& family, std::span<const Vertex> requests) {
  const int gamma = family.gamma();
  const auto chains = static_cast<std::size_t>(family.modules() * 2);
  std::vector<int> expected_size(chains, 0);
  std::vector<unsigned> previous(chains, 0);
  for (std::size_t t = 0; t < requests.size(); ++t) {
    const auto role = family.classify(requests[t]);
    if (role.kind != ModuleFamily::Kind::kSubset) continue;
    const auto c = static_cast<std::size_t>(role.module * 2 + role.side);
    const int size = std::popcount(role.mask);
    if (size != expected_size[c]) {
      return "request " + std::to_string(t) + ": subset of size " + std::to_string(size) + " where size " +
             std::to_string(expected_size[c]) + " was due";
    }
    if (size > 0 && (previous[c] & ~role.mask) != 0) {
      return "request " + std::to_string(t) + ": subset does not extend its predecessor";
    }
    previous[c] = role.mask;
    expected_size[c] = (size + 1) % gamma;
  }
  return {};
}

Schedule perm_algorithm(const DistanceMatrix& dm, const ModuleFamily& family, const Configuration& init,
                        std::span<const Vertex> requests) {
  const int gamma = family.gamma();
  std::vector<Vertex> pos = init.positions;
  auto server_at = [&](auto predicate) {
    int found = -1;
    for (std::size_t s = 0; s < pos.size(); ++s) {
      if (predicate(pos[s])) {
        if (found >= 0) return -2;
        found = static_cast<int>(s);
      }
    }
    return found;
  };
  auto invalid = [](std::size_t t, const std::string& why) {
    throw Error(ErrorCode::kInvalidSequence, "request " + std::to_string(t) + ": " + why);
  };

  Schedule schedule;
  for (std::size_t t = 0; t < requests.size(); ++t) {
    const Vertex r = requests[t];
    const auto role = family.classify(r);
    if (server_at([&](Vertex v) { return v == r; }) != -1) invalid(t, "vertex already holds a server");
    int server = -1;
    if (role.kind == ModuleFamily::Kind::kSource) {
      invalid(t, "the source is never requested");
    } else if (role.kind == ModuleFamily::Kind::kSubset) {
      // Pull the element that the next subset on this side adds.
      unsigned added = full_mask(gamma) & ~role.mask;
      if (std::popcount(role.mask) < gamma - 1) {
        std::size_t u = t + 1;
        for (; u < requests.size(); ++u) {
          const auto next = family.classify(requests[u]);
          if (next.kind == ModuleFamily::Kind::kSubset && next.module == role.module && next.side == role.side) break;
        }
        if (u == requests.size()) invalid(t, "subset chain is cut short");
        const unsigned next_mask = family.classify(requests[u]).mask;
        added = next_mask & ~role.mask;
        if ((role.mask & ~next_mask) != 0 || std::popcount(added) != 1) invalid(t, "next subset does not add one element");
      }
      const Vertex from = family.element(role.module, role.side, std::countr_zero(added));
      server = server_at([&](Vertex v) { return v == from; });
    } else {
      // An element is fed by the subset vertex on the other side whose size is its index.
      server = server_at([&](Vertex v) {
        const auto where = family.classify(v);
        return where.kind == ModuleFamily::Kind::kSubset && where.module == role.module && where.side != role.side &&
               std::popcount(where.mask) == role.element;
      });
    }
    if (server < 0) invalid(t, server == -2 ? "more than one server could serve" : "no server in position");
    const Vertex from = pos[static_cast<std::size_t>(server)];
    if (dm(from, r) != 1) invalid(t, "serving move is not a single edge");
    schedule.moves.push_back(Move{t, server, from, std::nullopt, r, 1});
    schedule.total_cost += 1;
    pos[static_cast<std::size_t>(server)] = r;
  }
  return schedule;
}

boost::multiprecision::cpp_int count_valid_sequences(int gamma, std::uint64_t n) {
  if (gamma < 1) throw Error(ErrorCode::kInvalidArgument, "gamma must be positive");
  const auto block = static_cast<std::uint64_t>(2 * gamma);
  if (n % block != 0) throw Error(ErrorCode::kInvalidArgument, "2*gamma must divide the sequence length");
  boost::multiprecision::cpp_int factorial = 1;
  for (int i = 2; i <= gamma; ++i) factorial *= i;
  return boost::multiprecision::pow(factorial, static_cast<unsigned>(n / block));
}

TreewidthAdviceBound treewidth_advice_bound(int alpha, double n) {
  if (alpha < 4 || alpha % 2 != 0) throw Error(ErrorCode::kInvalidArgument, "alpha must be even and at least 4");
  const int gamma = alpha / 2;
  double log_factorial = 0;
  for (int i = 2; i <= gamma; ++i) log_factorial += std::log2(static_cast<double>(i));
  TreewidthAdviceBound b;
  b.exact_bits = n / (2.0 * gamma) * log_factorial;
  b.stirling_bits = n / 2 * std::log2(gamma / std::exp(1.0));
  b.closed_form_bits = n / 2 * (std::log2(static_cast<double>(alpha)) - 1.22);
  return b;
}

}  // namespace ksl
