#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace sinr::cli {

/// Parsed command line. One of solve | sweep | tv-solve | verify plus its
/// options; see README for the grammar.
struct RunConfig {
  std::string command;
  std::string input_path;
  std::string output_path;            // empty: stdout
  std::vector<double> mu;             // --mu v1,v2,...
  std::string mu_file;                // --mu-file
  std::string directions_file;        // sweep with explicit directions
  int points = 181;                   // sweep sample count (n = 2)
  bool per_constraint = false;        // sweep: emit per-constraint curves too
  std::string format = "";            // csv | json; per-command default
  bool has_seed = false;
  unsigned long long seed = 0;        // verify: extra random directions
  double tol_override = -1.0;         // verify gate; <0 means unset
  bool corrupt_gamma = false;         // verify: negative-control debug flag
};

/// Parses argv-style arguments (without argv[0]) and runs the command.
/// Returns the process exit code: 0 success, 1 error, 2 unbounded problem
/// (solve/tv-solve) or verification gap breach (verify).
int run(const std::vector<std::string>& args, std::ostream& out = std::cout,
        std::ostream& err = std::cerr);

/// Executes an already-parsed configuration.
int run_config(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Fixed-width numeric formatting used for all emitted numbers:
/// 12 significant digits, lowercase exponent.
std::string fmt_num(double x);

}  // namespace sinr::cli
