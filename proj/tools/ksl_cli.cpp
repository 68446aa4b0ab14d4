#include "ksl_cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "ksl/adversary.hpp"
#include "ksl/error.hpp"
#include "ksl/generators.hpp"
#include "ksl/gpc.hpp"
#include "ksl/metric.hpp"
#include "ksl/offline.hpp"
#include "ksl/spanner.hpp"
#include "ksl/tree_decomposition.hpp"

namespace ksl::cli {
namespace {

using nlohmann::json;

// 0 errors only, 1 info, 2 debug. Set through KSL_LOG.
int log_level() {
  static const int level = [] {
    const char* env = std::getenv("KSL_LOG");
    if (env == nullptr) return 0;
    const std::string v(env);
    if (v == "debug" || v == "2") return 2;
    if (v == "info" || v == "1") return 1;
    return 0;
  }();
  return level;
}

void log(int level, const std::string& message) {
  if (level <= log_level()) std::cerr << "[ksl] " << message << '\n';
}

struct Instance {
  std::string family;
  json params = json::object();
  Graph graph;
  std::optional<TreeDecomposition> td;
  std::optional<SpannerSystem> spanners;
  std::optional<ModuleFamily> modules;
  Configuration init;
  std::vector<Vertex> sigma;
};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParseError, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError, path + ": " + e.what());
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot write " + path);
  out << text;
}

std::string digest(const json& j) { return fnv1a_hex(j.dump()); }

Permutation random_permutation(SplitMix64& rng, int gamma) {
  Permutation p(static_cast<std::size_t>(gamma));
  std::iota(p.begin(), p.end(), 0);
  for (int i = gamma - 1; i > 0; --i) std::swap(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(rng.uniform(0, i))]);
  return p;
}

TreeDecomposition path_decomposition(int n) {
  std::vector<std::vector<Vertex>> bags;
  std::vector<int> parent;
  for (int i = 0; i + 1 < n; ++i) {
    bags.push_back({i, i + 1});
    parent.push_back(i - 1);
  }
  if (bags.empty()) {
    bags.push_back({0});
    parent.push_back(-1);
  }
  return TreeDecomposition(std::move(bags), std::move(parent), n);
}

int family_vertices(const RunSpec& spec, int fallback) { return spec.vertices > 0 ? spec.vertices : fallback; }

Instance generate(const RunSpec& spec, SplitMix64& rng) {
  Instance in;
  in.family = spec.family;
  if (spec.family == "path-rounds") {
    const int n_vertices = family_vertices(spec, 5);
    RoundBits bits;
    if (!spec.bits.empty()) {
      bits = parse_round_bits(spec.bits);
    } else {
      for (int i = 0; i < spec.rounds; ++i) bits.push_back(rng.chance(1, 2));
    }
    std::string text;
    for (bool b : bits) text += b ? '1' : '0';
    in.params = {{"bits", text}, {"vertices", n_vertices}};
    in.graph = path_graph(n_vertices);
    in.td = path_decomposition(n_vertices);
    in.init = path_round_start();
    in.sigma = path_round_sequence(bits, n_vertices);
  } else if (spec.family == "module" || spec.family == "gb") {
    const bool with_source = spec.family == "gb" || spec.modules > 1;
    ModuleFamily f(spec.gamma, spec.modules, with_source);
    std::vector<RoundPermutations> rounds(static_cast<std::size_t>(spec.rounds));
    for (auto& r : rounds) {
      for (int m = 0; m < spec.modules; ++m) r.first.push_back(random_permutation(rng, spec.gamma));
      for (int m = 0; m < spec.modules; ++m) r.second.push_back(random_permutation(rng, spec.gamma));
    }
    ValidSequence vs = valid_sequence(f, rounds);
    in.params = {{"gamma", spec.gamma}, {"modules", spec.modules}, {"rounds", spec.rounds}, {"source", with_source}};
    in.graph = f.graph();
    in.td = f.decomposition();
    in.init = f.start();
    in.sigma = vs.requests;
    in.modules = f;
  } else if (spec.family == "ktree" || spec.family == "grid" || spec.family == "tree") {
    if (spec.family == "ktree") {
      const int n_vertices = family_vertices(spec, 12);
      auto [g, td] = random_partial_ktree(rng, n_vertices, spec.width, spec.max_weight);
      in.graph = std::move(g);
      in.td = std::move(td);
      in.params = {{"vertices", n_vertices}, {"width", spec.width}, {"max_weight", spec.max_weight}};
    } else if (spec.family == "grid") {
      in.graph = grid_graph(spec.rows, spec.cols);
      std::vector<Vertex> order(static_cast<std::size_t>(spec.rows * spec.cols));
      std::iota(order.begin(), order.end(), 0);
      in.td = decomposition_from_elimination(in.graph, order);
      in.params = {{"rows", spec.rows}, {"cols", spec.cols}};
    } else {
      const int n_vertices = family_vertices(spec, 12);
      in.graph = random_tree(rng, n_vertices, spec.max_weight);
      std::vector<Vertex> order(static_cast<std::size_t>(n_vertices));
      std::iota(order.rbegin(), order.rend(), 0);
      in.td = decomposition_from_elimination(in.graph, order);
      in.params = {{"vertices", n_vertices}, {"max_weight", spec.max_weight}};
    }
    const int n_vertices = in.graph.vertex_count();
    in.params["k"] = spec.k;
    in.params["n"] = spec.n;
    in.init = random_configuration(rng, n_vertices, spec.k);
    in.sigma = random_sequence(rng, n_vertices, static_cast<std::size_t>(spec.n));
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown family '" + spec.family + "'");
  }
  return in;
}

Instance load(const RunSpec& spec) {
  if (spec.seq_path.empty()) throw Error(ErrorCode::kInvalidArgument, "--graph needs --seq with init_config and sequence");
  Instance in;
  in.graph = load_graph_file(spec.graph_path);
  const json side = read_json_file(spec.seq_path);
  try {
    in.family = side.value("family", std::string("file"));
    in.params = side.value("params", json::object());
    in.init.positions = side.at("init_config").get<std::vector<Vertex>>();
    in.sigma = side.at("sequence").get<std::vector<Vertex>>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, spec.seq_path + ": " + e.what());
  }
  if (!spec.td_path.empty()) in.td = decomposition_from_json(read_json_file(spec.td_path), in.graph.vertex_count());
  if (!spec.spanners_path.empty()) in.spanners = spanner_system_from_json(in.graph, read_json_file(spec.spanners_path));
  if ((in.family == "module" || in.family == "gb") && in.params.contains("gamma")) {
    in.modules = ModuleFamily(in.params.at("gamma").get<int>(), in.params.value("modules", 1),
                              in.params.value("source", in.family == "gb"));
  }
  for (Vertex v : in.init.positions) {
    if (v < 0 || v >= in.graph.vertex_count()) throw Error(ErrorCode::kVertexOutOfRange, "init_config vertex " + std::to_string(v));
  }
  return in;
}

// Roots 0 and N-1, then random roots from a per-instance seed.
SpannerSystem bfs_spanners(const Instance& in, const DistanceMatrix& dm, int mu, std::uint64_t seed) {
  SplitMix64 rng(seed);
  const int n = in.graph.vertex_count();
  std::vector<Vertex> roots{0};
  if (mu > 1 && n > 1) roots.push_back(n - 1);
  while (static_cast<int>(roots.size()) < std::min(mu, n)) {
    const auto r = static_cast<Vertex>(rng.uniform(0, n - 1));
    if (std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
  }
  std::vector<SpannerTree> trees;
  for (Vertex r : roots) trees.push_back(shortest_path_tree(in.graph, dm, r));
  const StretchReport rep = verify_stretch(dm, SpannerSystem(trees, 1, 0), 1, 0);
  return SpannerSystem(std::move(trees), rep.measured_q(), 0);
}

json ratio_value(Weight online, Weight opt) {
  if (opt == 0) return online == 0 ? json(1.0) : json(nullptr);
  return static_cast<double>(online) / static_cast<double>(opt);
}

std::string csv_number(const json& v) {
  if (v.is_null()) return "inf";
  if (v.is_number_float()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v.get<double>());
    return buf;
  }
  return v.dump();
}

json run_instance(const RunSpec& spec, Instance& in, std::size_t id) {
  const DistanceMatrix dm = all_pairs_shortest_paths(in.graph);
  json r;
  r["instance_id"] = id;
  r["family"] = in.family;
  r["params"] = in.params;
  r["N"] = in.graph.vertex_count();
  r["k"] = in.init.k();
  r["n"] = in.sigma.size();
  r["algo"] = spec.algo;
  r["init_config"] = in.init.positions;
  r["sequence"] = in.sigma;
  json digests = {{"graph", digest(graph_to_json(in.graph))}};
  json checks = json::object();

  const OptResult opt = opt_cost_dp(dm, in.init, in.sigma);
  Weight online = opt.cost;
  std::size_t bits_read = 0;
  std::size_t budget = 0;
  bool pass = true;
  Schedule schedule = opt.schedule;

  if (spec.algo == "opt") {
    const Weight flow = opt_cost_flow(dm, in.init, in.sigma).cost;
    checks["flow_cost"] = flow;
    pass = flow == opt.cost;
  } else if (spec.algo == "gpc") {
    if (!in.td) {
      if (in.graph.vertex_count() > kExactTreewidthMaxVertices) {
        throw Error(ErrorCode::kInvalidArgument, "gpc needs --td for graphs above " + std::to_string(kExactTreewidthMaxVertices) + " vertices");
      }
      in.td = exact_treewidth(in.graph).decomposition;
    }
    digests["decomposition"] = digest(decomposition_to_json(*in.td));
    const TreeDecomposition reduced = reduce_height(*in.td);
    AdviceTape tape = generate_advice(dm, reduced, in.init, in.sigma, opt.schedule);
    r["tape_hex"] = tape.to_hex();
    r["tape_bits"] = tape.bits_written();
    digests["tape"] = fnv1a_hex(tape.to_hex());
    const GpcRun run = run_online(dm, reduced, in.init, in.sigma, tape);
    online = run.online_cost;
    bits_read = run.bits_read;
    budget = run.params.bit_budget();
    schedule = run.schedule;
    checks["width"] = reduced.width();
    checks["height"] = reduced.height();
    checks["depth_bits"] = run.params.depth_bits;
    checks["index_bits"] = run.params.index_bits;
    checks["alternative_budget"] = run.params.alternative_budget();
    checks["optimal"] = online == opt.cost;
    checks["within_budget"] = bits_read <= budget;
    pass = online == opt.cost && bits_read <= budget;
  } else if (spec.algo == "spanner") {
    if (!in.spanners) in.spanners = bfs_spanners(in, dm, spec.mu, spec.seed + id);
    const SpannerSystem& sys = *in.spanners;
    const StretchReport stretch = verify_stretch(dm, sys, sys.q(), sys.r());
    digests["spanners"] = digest(spanner_system_to_json(sys));
    AdviceTape tape = generate_advice_spanner(dm, sys, in.init, in.sigma, opt.schedule);
    r["tape_hex"] = tape.to_hex();
    r["tape_bits"] = tape.bits_written();
    digests["tape"] = fnv1a_hex(tape.to_hex());
    const SpannerRun run = run_online_spanner(dm, sys, in.init, in.sigma, tape);
    online = run.online_cost;
    bits_read = run.bits_read;
    budget = run.params.bit_budget();
    schedule = run.schedule;
    const double bound = (sys.q() + sys.r()) * static_cast<double>(opt.cost);
    checks["mu"] = sys.mu();
    checks["q"] = sys.q();
    checks["r"] = sys.r();
    checks["stretch_ok"] = stretch.ok;
    checks["tree_path_cost"] = run.tree_path_cost;
    checks["competitive"] = static_cast<double>(online) <= bound + 1e-9;
    checks["within_budget"] = bits_read <= budget;
    pass = stretch.ok && static_cast<double>(online) <= bound + 1e-9 && bits_read <= budget;
  } else if (spec.algo == "perm") {
    if (!in.modules) throw Error(ErrorCode::kInvalidArgument, "perm needs a module or gb instance");
    schedule = perm_algorithm(dm, *in.modules, in.init, in.sigma);
    online = schedule.total_cost;
    const bool unit_cost = online == static_cast<Weight>(in.sigma.size());
    checks["unit_cost"] = unit_cost;
    bool unique = false;
    try {
      const auto all = opt_all_schedules(dm, in.init, in.sigma, 2);
      unique = all.size() == 1 && all.front() == schedule;
      checks["unique_opt"] = unique;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kInstanceTooLarge) throw;
      checks["unique_opt"] = nullptr;
      unique = true;
    }
    pass = unit_cost && online == opt.cost && unique;
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown algorithm '" + spec.algo + "'");
  }

  replay_schedule(dm, in.init, in.sigma, schedule);
  r["online_cost"] = online;
  r["opt_cost"] = opt.cost;
  r["ratio"] = ratio_value(online, opt.cost);
  r["bits_read"] = bits_read;
  r["bit_budget"] = budget;
  r["checks"] = checks;
  r["digests"] = digests;
  r["moves"] = schedule_to_json(schedule);
  r["pass"] = pass;
  log(1, "instance " + std::to_string(id) + " " + spec.algo + " online=" + std::to_string(online) +
             " opt=" + std::to_string(opt.cost) + (pass ? " pass" : " FAIL"));
  return r;
}

json spec_json(const RunSpec& s) {
  return {{"command", s.command},   {"graph", s.graph_path}, {"td", s.td_path},       {"spanners", s.spanners_path},
          {"seq", s.seq_path},      {"family", s.family},    {"gamma", s.gamma},       {"modules", s.modules},
          {"rounds", s.rounds},     {"bits", s.bits},        {"k", s.k},               {"n", s.n},
          {"vertices", s.vertices}, {"width", s.width},      {"rows", s.rows},         {"cols", s.cols},
          {"mu", s.mu},             {"max_weight", s.max_weight}, {"instances", s.instances}, {"seed", s.seed},
          {"algo", s.algo},         {"format", s.format},    {"tau", s.tau},           {"alpha", s.alpha}};
}

std::vector<Instance> instances_for(const RunSpec& spec, SplitMix64& rng) {
  std::vector<Instance> out;
  if (!spec.graph_path.empty()) {
    out.push_back(load(spec));
    return out;
  }
  if (spec.family.empty()) throw Error(ErrorCode::kInvalidArgument, "give --graph or --family");
  for (int i = 0; i < spec.instances; ++i) out.push_back(generate(spec, rng));
  return out;
}

CommandResult cmd_run(const RunSpec& spec) {
  SplitMix64 rng(spec.seed);
  auto instances = instances_for(spec, rng);
  json rows = json::array();
  bool all_pass = true;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    json r = run_instance(spec, instances[i], i);
    all_pass = all_pass && r["pass"].get<bool>();
    rows.push_back(std::move(r));
  }
  CommandResult res;
  res.exit_code = all_pass ? 0 : 1;
  if (spec.format == "csv") {
    std::ostringstream os;
    os << "instance_id,N,k,n,algo,online_cost,opt_cost,ratio,bits_read,bit_budget,pass\n";
    for (const auto& r : rows) {
      os << r["instance_id"] << ',' << r["N"] << ',' << r["k"] << ',' << r["n"] << ',' << r["algo"].get<std::string>()
         << ',' << r["online_cost"] << ',' << r["opt_cost"] << ',' << csv_number(r["ratio"]) << ',' << r["bits_read"]
         << ',' << r["bit_budget"] << ',' << (r["pass"].get<bool>() ? "true" : "false") << '\n';
    }
    res.output = os.str();
  } else {
    json report = {{"format", kReportFormat}, {"run_spec", spec_json(spec)}, {"instances", rows}, {"pass", all_pass}};
    res.output = report.dump(2) + "\n";
  }
  return res;
}

CommandResult cmd_bounds(const RunSpec& spec) {
  std::vector<std::string> taus = spec.tau;
  std::vector<int> alphas = spec.alpha;
  if (taus.empty() && alphas.empty()) {
    taus = {"6/5", "7/6", "5/4"};
    alphas = {4, 8, 16};
  }
  const double n = spec.n;
  json rows = json::array();
  for (const auto& t : taus) {
    const double bits = sgkh_advice_bound(parse_ratio(t), n);
    rows.push_back({{"bound", "path-rounds"}, {"parameter", t}, {"n", n}, {"bits", bits}, {"per_request", bits / n}});
  }
  for (int a : alphas) {
    const TreewidthAdviceBound b = treewidth_advice_bound(a, n);
    rows.push_back({{"bound", "treewidth"},
                    {"parameter", std::to_string(a)},
                    {"n", n},
                    {"bits", b.exact_bits},
                    {"per_request", b.exact_bits / n},
                    {"stirling_bits", b.stirling_bits},
                    {"closed_form_bits", b.closed_form_bits}});
  }
  CommandResult res;
  if (spec.format == "json") {
    res.output = json({{"format", kReportFormat}, {"run_spec", spec_json(spec)}, {"rows", rows}}).dump(2) + "\n";
    return res;
  }
  std::ostringstream os;
  os << "bound,parameter,n,bits,per_request,stirling_bits,closed_form_bits\n";
  for (const auto& r : rows) {
    os << r["bound"].get<std::string>() << ',' << r["parameter"].get<std::string>() << ',' << csv_number(r["n"]) << ','
       << csv_number(r["bits"]) << ',' << csv_number(r["per_request"]) << ','
       << (r.contains("stirling_bits") ? csv_number(r["stirling_bits"]) : "") << ','
       << (r.contains("closed_form_bits") ? csv_number(r["closed_form_bits"]) : "") << '\n';
  }
  res.output = os.str();
  return res;
}

CommandResult cmd_verify(const RunSpec& spec) {
  if (spec.graph_path.empty()) throw Error(ErrorCode::kInvalidArgument, "verify needs --graph");
  if (spec.td_path.empty() && spec.spanners_path.empty()) throw Error(ErrorCode::kInvalidArgument, "verify needs --td or --spanners");
  const Graph g = load_graph_file(spec.graph_path);
  json checks = json::array();
  bool all_ok = true;
  if (!spec.td_path.empty()) {
    const TreeDecomposition td = decomposition_from_json(read_json_file(spec.td_path), g.vertex_count());
    const auto v = verify_decomposition(g, td);
    json c = {{"kind", "decomposition"}, {"ok", !v}, {"width", td.width()}, {"height", td.height()}};
    if (v) {
      c["axiom"] = v->axiom;
      c["elements"] = v->elements;
      c["witness"] = v->witness;
    }
    all_ok = all_ok && !v;
    checks.push_back(c);
  }
  if (!spec.spanners_path.empty()) {
    const SpannerSystem sys = spanner_system_from_json(g, read_json_file(spec.spanners_path));
    const DistanceMatrix dm = all_pairs_shortest_paths(g);
    const StretchReport rep = verify_stretch(dm, sys, sys.q(), sys.r());
    checks.push_back({{"kind", "stretch"},
                      {"ok", rep.ok},
                      {"q", sys.q()},
                      {"r", sys.r()},
                      {"measured_q", rep.measured_q()},
                      {"worst_pair", {rep.worst_x, rep.worst_y}},
                      {"worst_tree_distance", rep.worst_tree_distance},
                      {"worst_graph_distance", rep.worst_graph_distance}});
    all_ok = all_ok && rep.ok;
  }
  CommandResult res;
  res.exit_code = all_ok ? 0 : 1;
  if (spec.format == "csv") {
    std::ostringstream os;
    os << "kind,ok,detail\n";
    for (const auto& c : checks) {
      std::string detail = c.contains("witness") ? c["witness"].get<std::string>() : "";
      if (c["kind"] == "stretch") detail = "worst pair " + c["worst_pair"].dump();
      std::replace(detail.begin(), detail.end(), ',', ';');
      os << c["kind"].get<std::string>() << ',' << (c["ok"].get<bool>() ? "true" : "false") << ',' << detail << '\n';
    }
    res.output = os.str();
  } else {
    res.output = json({{"format", kReportFormat}, {"run_spec", spec_json(spec)}, {"checks", checks}, {"pass", all_ok}}).dump(2) + "\n";
  }
  return res;
}

CommandResult cmd_gen(const RunSpec& spec) {
  if (spec.out.empty()) throw Error(ErrorCode::kInvalidArgument, "gen needs --out as a file prefix");
  SplitMix64 rng(spec.seed);
  json written = json::array();
  for (int i = 0; i < spec.instances; ++i) {
    Instance in = generate(spec, rng);
    const std::string prefix = spec.instances == 1 ? spec.out : spec.out + "-" + std::to_string(i);
    const json graph = graph_to_json(in.graph);
    write_file(prefix + ".graph.json", graph.dump(2) + "\n");
    json entry = {{"graph", prefix + ".graph.json"}, {"graph_digest", digest(graph)}};
    if (in.td) {
      const json td = decomposition_to_json(*in.td);
      write_file(prefix + ".td.json", td.dump(2) + "\n");
      entry["td"] = prefix + ".td.json";
    }
    const json spanners = spanner_system_to_json(bfs_spanners(in, all_pairs_shortest_paths(in.graph), spec.mu, spec.seed + static_cast<std::uint64_t>(i)));
    write_file(prefix + ".spanners.json", spanners.dump(2) + "\n");
    entry["spanners"] = prefix + ".spanners.json";
    const json side = {{"family", in.family}, {"params", in.params}, {"init_config", in.init.positions}, {"sequence", in.sigma}};
    write_file(prefix + ".instance.json", side.dump(2) + "\n");
    entry["instance"] = prefix + ".instance.json";
    written.push_back(entry);
  }
  CommandResult res;
  res.output = json({{"format", kReportFormat}, {"run_spec", spec_json(spec)}, {"files", written}}).dump(2) + "\n";
  return res;
}

}  // namespace

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

double parse_ratio(const std::string& text) {
  try {
    std::size_t used = 0;
    const auto slash = text.find('/');
    if (slash == std::string::npos) {
      const double v = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return v;
    }
    const std::string num = text.substr(0, slash);
    const std::string den = text.substr(slash + 1);
    const double a = std::stod(num, &used);
    if (used != num.size()) throw std::invalid_argument(text);
    const double b = std::stod(den, &used);
    if (used != den.size() || b == 0) throw std::invalid_argument(text);
    return a / b;
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::kInvalidArgument, "cannot read ratio '" + text + "'");
  }
}

CommandResult execute(const RunSpec& spec) {
  try {
    if (spec.format != "json" && spec.format != "csv") throw Error(ErrorCode::kInvalidArgument, "format must be json or csv");
    CommandResult res;
    if (spec.command == "run") {
      res = cmd_run(spec);
    } else if (spec.command == "bounds") {
      res = cmd_bounds(spec);
    } else if (spec.command == "verify") {
      res = cmd_verify(spec);
    } else if (spec.command == "gen") {
      return cmd_gen(spec);
    } else {
      throw Error(ErrorCode::kInvalidArgument, "unknown command '" + spec.command + "'");
    }
    if (!spec.out.empty()) write_file(spec.out, res.output);
    return res;
  } catch (const Error& e) {
    return {2, "", e.what()};
  }
}

int main_entry(int argc, char** argv) {
  CLI::App app{"k-server advice experiments"};
  app.require_subcommand(1);
  RunSpec spec;

  auto add_instance_flags = [&spec](CLI::App* sub) {
    sub->add_option("--graph", spec.graph_path, "graph file (text or JSON)");
    sub->add_option("--td", spec.td_path, "tree decomposition JSON");
    sub->add_option("--spanners", spec.spanners_path, "spanner system JSON");
    sub->add_option("--seq", spec.seq_path, "instance sidecar JSON");
    sub->add_option("--family", spec.family, "path-rounds | module | gb | ktree | grid | tree");
    sub->add_option("--gamma", spec.gamma);
    sub->add_option("--modules", spec.modules);
    sub->add_option("--rounds", spec.rounds);
    sub->add_option("--bits", spec.bits, "round types for path-rounds, e.g. 101");
    sub->add_option("--k", spec.k, "servers");
    sub->add_option("--n", spec.n, "requests");
    sub->add_option("--vertices", spec.vertices);
    sub->add_option("--width", spec.width, "k of the random partial k-tree");
    sub->add_option("--rows", spec.rows);
    sub->add_option("--cols", spec.cols);
    sub->add_option("--mu", spec.mu, "spanner trees to build");
    sub->add_option("--max-weight", spec.max_weight);
    sub->add_option("--instances", spec.instances);
    sub->add_option("--seed", spec.seed);
    sub->add_option("--out", spec.out);
    sub->add_option("--format", spec.format)->check(CLI::IsMember({"json", "csv"}));
  };

  CLI::App* run = app.add_subcommand("run", "advice, online run and offline comparison");
  add_instance_flags(run);
  run->add_option("--algo", spec.algo)->check(CLI::IsMember({"gpc", "spanner", "perm", "opt"}));

  CLI::App* bounds = app.add_subcommand("bounds", "advice lower bound table");
  bounds->add_option("--tau", spec.tau, "ratios, e.g. 6/5");
  bounds->add_option("--alpha", spec.alpha, "treewidths (even, >= 4)");
  bounds->add_option("--n", spec.n, "request count");
  bounds->add_option("--out", spec.out);
  bounds->add_option("--format", spec.format)->check(CLI::IsMember({"json", "csv"}));

  CLI::App* verify = app.add_subcommand("verify", "check a decomposition or spanner system");
  verify->add_option("--graph", spec.graph_path)->required();
  verify->add_option("--td", spec.td_path);
  verify->add_option("--spanners", spec.spanners_path);
  verify->add_option("--format", spec.format)->check(CLI::IsMember({"json", "csv"}));
  verify->add_option("--out", spec.out);

  CLI::App* gen = app.add_subcommand("gen", "write generated instances to files");
  add_instance_flags(gen);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  if (run->parsed()) spec.command = "run";
  if (bounds->parsed()) {
    spec.command = "bounds";
    if (bounds->count("--format") == 0) spec.format = "csv";
  }
  if (verify->parsed()) spec.command = "verify";
  if (gen->parsed()) spec.command = "gen";

  const CommandResult res = execute(spec);
  if (!res.error.empty()) std::cerr << "error: " << res.error << '\n';
  if (spec.out.empty() || spec.command == "gen") std::cout << res.output;
  return res.exit_code;
}

}  // namespace ksl::cli
