#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "ksl_cli.hpp"

using ksl::cli::CommandResult;
using ksl::cli::execute;
using ksl::cli::RunSpec;
using nlohmann::json;

namespace {

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "ksl_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

RunSpec run_spec(const std::string& family, const std::string& algo) {
  RunSpec s;
  s.command = "run";
  s.family = family;
  s.algo = algo;
  return s;
}

}  // namespace

TEST(Cli, PathRoundsOptReport) {
  RunSpec s = run_spec("path-rounds", "opt");
  s.bits = "101";
  CommandResult r = execute(s);
  ASSERT_EQ(r.exit_code, 0) << r.error;
  json j = json::parse(r.output);
  EXPECT_EQ(j["format"], ksl::cli::kReportFormat);
  EXPECT_EQ(j["instances"][0]["opt_cost"], 12);
  EXPECT_EQ(j["run_spec"]["bits"], "101");
}

TEST(Cli, PermReportsUniqueOptimum) {
  RunSpec s = run_spec("module", "perm");
  CommandResult r = execute(s);
  ASSERT_EQ(r.exit_code, 0) << r.error;
  json inst = json::parse(r.output)["instances"][0];
  EXPECT_EQ(inst["online_cost"], 8);
  EXPECT_EQ(inst["checks"]["unique_opt"], true);
}

TEST(Cli, GeneratedFilesRunGpcWithRatioOne) {
  RunSpec g = run_spec("ktree", "gpc");
  g.command = "gen";
  g.vertices = 14;
  g.width = 3;
  g.n = 12;
  g.seed = 9;
  g.out = scratch("inst").string();
  ASSERT_EQ(execute(g).exit_code, 0);

  RunSpec s;
  s.command = "run";
  s.algo = "gpc";
  s.graph_path = g.out + ".graph.json";
  s.td_path = g.out + ".td.json";
  s.seq_path = g.out + ".instance.json";
  CommandResult r = execute(s);
  ASSERT_EQ(r.exit_code, 0) << r.error;
  json inst = json::parse(r.output)["instances"][0];
  EXPECT_EQ(inst["ratio"], 1.0);
  EXPECT_LE(inst["bits_read"].get<int>(), inst["bit_budget"].get<int>());
  EXPECT_EQ(inst["tape_bits"], inst["bits_read"]);
}

TEST(Cli, SameSeedSameBytes) {
  for (const char* algo : {"gpc", "spanner", "opt"}) {
    RunSpec s = run_spec("ktree", algo);
    s.instances = 4;
    s.seed = 77;
    EXPECT_EQ(execute(s).output, execute(s).output) << algo;
    RunSpec other = s;
    other.seed = 78;
    EXPECT_NE(execute(s).output, execute(other).output) << algo;
  }
}

TEST(Cli, CsvHasFixedColumns) {
  RunSpec s = run_spec("grid", "spanner");
  s.format = "csv";
  s.instances = 3;
  CommandResult r = execute(s);
  ASSERT_EQ(r.exit_code, 0) << r.error;
  std::istringstream lines(r.output);
  std::string header;
  std::getline(lines, header);
  EXPECT_EQ(header, "instance_id,N,k,n,algo,online_cost,opt_cost,ratio,bits_read,bit_budget,pass");
  int rows = 0;
  for (std::string line; std::getline(lines, line);) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 10);
  }
  EXPECT_EQ(rows, 3);
}

TEST(Cli, BoundsTable) {
  RunSpec s;
  s.command = "bounds";
  s.format = "csv";
  s.tau = {"5/4"};
  s.alpha = {8};
  s.n = 1000;
  CommandResult r = execute(s);
  ASSERT_EQ(r.exit_code, 0) << r.error;
  EXPECT_NE(r.output.find("path-rounds,5/4,1000.000000,0.000000"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find(",890.000000"), std::string::npos) << r.output;
  s.tau = {"3/2"};
  EXPECT_EQ(execute(s).exit_code, 2);
}

TEST(Cli, VerifyReportsTamperedBag) {
  auto graph = scratch("p5.txt");
  std::ofstream(graph) << "5 4\n0 1 1\n1 2 1\n2 3 1\n3 4 1\n";
  auto good = scratch("p5.td.json");
  std::ofstream(good) << R"({"root":0,"bags":[[0,1],[1,2],[2,3],[3,4]],"parent":[-1,0,1,2]})";
  auto bad = scratch("p5.bad.json");
  std::ofstream(bad) << R"({"root":0,"bags":[[0,1],[1],[2,3],[3,4]],"parent":[-1,0,1,2]})";

  RunSpec s;
  s.command = "verify";
  s.graph_path = graph.string();
  s.td_path = good.string();
  EXPECT_EQ(execute(s).exit_code, 0);
  s.td_path = bad.string();
  CommandResult r = execute(s);
  EXPECT_EQ(r.exit_code, 1);
  json check = json::parse(r.output)["checks"][0];
  EXPECT_EQ(check["axiom"], 2);
  EXPECT_EQ(check["elements"], json::array({1, 2}));
}

TEST(Cli, VerifyStretchClaimFailsWithWorstPair) {
  RunSpec g = run_spec("grid", "spanner");
  g.command = "gen";
  g.out = scratch("grid").string();
  ASSERT_EQ(execute(g).exit_code, 0);
  json sys = json::parse(std::ifstream(g.out + ".spanners.json"));
  sys["mu"] = 1;
  sys["trees"] = json::array({sys["trees"][0]});
  sys["q"] = 1;
  sys["r"] = 0;
  std::ofstream(g.out + ".claim.json") << sys.dump();
  RunSpec v;
  v.command = "verify";
  v.graph_path = g.out + ".graph.json";
  v.spanners_path = g.out + ".claim.json";
  CommandResult r = execute(v);
  EXPECT_EQ(r.exit_code, 1);
  json check = json::parse(r.output)["checks"][0];
  EXPECT_GT(check["worst_tree_distance"].get<int>(), check["worst_graph_distance"].get<int>());
}

TEST(Cli, BadInputsExitWithTwo) {
  EXPECT_EQ(execute(run_spec("nope", "opt")).exit_code, 2);
  RunSpec s = run_spec("ktree", "perm");
  EXPECT_EQ(execute(s).exit_code, 2);
  RunSpec missing;
  missing.command = "run";
  missing.graph_path = scratch("absent.json").string();
  missing.seq_path = scratch("absent.instance.json").string();
  CommandResult r = execute(missing);
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_FALSE(r.error.empty());
}

TEST(Cli, Helpers) {
  EXPECT_EQ(ksl::cli::fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(ksl::cli::fnv1a_hex("a"), "af63dc4c8601ec8c");
  EXPECT_DOUBLE_EQ(ksl::cli::parse_ratio("6/5"), 1.2);
  EXPECT_DOUBLE_EQ(ksl::cli::parse_ratio("1.25"), 1.25);
}
