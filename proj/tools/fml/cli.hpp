#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fml::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitUsage = 2;

/// Everything one invocation needs, filled from the command line.
struct RunConfig {
  std::string subcommand;
  std::string ifs_path;

  // verify
  std::string suite = "all";
  std::vector<double> rhos;
  std::vector<double> ps;
  int trials = 500;
  int depth = 0;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  int grid_points = 20;
  std::optional<std::string> distribution;
  double tolerance = 1e-9;

  // content / choquet / select
  double rho = 1.0;
  double p = 1.0;
  double sigma = 1.0;
  std::string order = "input";
  std::string cells_path;
  std::string function_path;
  bool brute_force = false;

  // maximal
  std::optional<std::string> closed_form_word;
  std::optional<std::string> trace_leaf;

  // outputs
  std::string csv_path;
  std::string svg_path;
};

/// Runs one command line (argv without the program name). Returns 0 on
/// success, 1 when an asserted inequality fails, 2 on usage or input errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fml::cli
