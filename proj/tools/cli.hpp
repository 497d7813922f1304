#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "oamepr/aperture.hpp"

namespace oamepr::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitComputation = 1;
inline constexpr int kExitUsage = 2;

struct RunConfig {
  std::string command;
  ApertureSpec family1 = ApertureSpec::rect(kPi / 4.0);
  ApertureSpec family2 = ApertureSpec::rect(kPi / 64.0);
  std::size_t grid_n = 512;
  std::vector<int> m_max; // empty: command default
  int tau_grid = 8;
  std::string model = "perfect";
  std::string out;    // empty: stdout
  std::string format; // empty: csv, or json for criterion
  std::vector<double> gammas{1.0, 3.0, 5.0, 20.0, 80.0};
  std::string source = "numeric";
};

/// Accepts a plain real or a multiple of pi: "0.785", "0.25pi", "pi".
/// Throws ValidationError naming `field` otherwise.
double parse_width(std::string_view text, const char* field);

/// "dir/name.csv" + "_analytic" -> "dir/name_analytic.csv".
std::string companion_path(const std::string& path, std::string_view suffix);

/// Full parameter record written into every output header.
std::string param_record(const RunConfig& cfg, std::string_view role);

/// Parses `args` (without the program name) and runs the command. Files go to
/// cfg.out and its companions, or in sequence to `out` when no path is given.
/// Returns kExitOk, kExitUsage for invalid flags or preconditions, and
/// kExitComputation for numeric or I/O failures.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace oamepr::cli
