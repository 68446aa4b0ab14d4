#pragma once

// Experiment runner behind the `ksl` executable. Kept as a library so tests
// can drive commands without spawning processes.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ksl::cli {

inline constexpr const char* kReportFormat = "ksl-report/1";

struct RunSpec {
  std::string command;  // run | bounds | verify | gen

  std::string graph_path;
  std::string td_path;
  std::string spanners_path;
  std::string seq_path;

  std::string family;  // path-rounds | module | gb | ktree | grid | tree
  int gamma = 2;
  int modules = 1;
  int rounds = 1;
  std::string bits;  // path-rounds types; random when empty
  int k = 2;
  int n = 10;
  int vertices = 0;   // 0 picks the family default (5 for path-rounds, 12 otherwise)
  int width = 2;      // ktree parameter
  int rows = 4;
  int cols = 4;
  int mu = 2;
  int max_weight = 1;
  int instances = 1;
  std::uint64_t seed = 1;

  std::string algo = "opt";  // gpc | spanner | perm | opt
  std::string out;
  std::string format = "json";  // json | csv

  std::vector<std::string> tau;
  std::vector<int> alpha;
};

struct CommandResult {
  int exit_code = 0;   // 0 pass, 1 property failure, 2 bad input
  std::string output;  // report text (also written to spec.out when set)
  std::string error;
};

CommandResult execute(const RunSpec& spec);

/// Parses argv, runs, writes output; returns the process exit code.
int main_entry(int argc, char** argv);

/// 64-bit FNV-1a, hex encoded.
std::string fnv1a_hex(const std::string& data);

/// Accepts "6/5" or a decimal.
double parse_ratio(const std::string& text);

}  // namespace ksl::cli
