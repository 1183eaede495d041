#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace fracplate::cli {

/// Bad flags, bad config files or values outside an operation's domain; exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;    ///< ml, modes, fracops, solve, identities, probe, report
  std::string operation;  ///< ml: eval; fracops: power-rule
  std::string domain = "interval:pi";
  double alpha = 1.5;
  double beta = 0.25;
  double horizon = 1.0;
  double gamma = 1.0;  ///< exponent of t in the power rule
  double grading = 0.0;  ///< 0 selects the default for the command
  double tau = 0.5;
  std::size_t count = 8;
  std::vector<double> z;
  std::vector<double> times;
  std::vector<std::size_t> modes;
  std::vector<std::size_t> nodes;
  std::string data;
  std::string family;
  std::uint64_t seed = 42;
  std::string output;
  std::map<std::string, double> tolerances;

  /// Keys accepted for this command, in the config file and as flags.
  static const std::vector<std::string>& keys(const std::string& command);

  /// Every key of the command; round-trips through from_json byte-identically.
  nlohmann::json to_json() const;
  /// Defaults for `command` overlaid with `j`. Rejects unknown keys and invalid values.
  static RunConfig from_json(const std::string& command, const nlohmann::json& j);
};

/// Tolerance keys a command reports, with their default bounds.
const std::map<std::string, double>& default_tolerances(const std::string& command);

/// Parses argv: subcommand, optional --config FILE, then flags overriding file values.
/// Returns nullopt-like empty command when help was printed. Throws UsageError.
RunConfig parse_config(int argc, const char* const* argv, std::string& help_text, bool& print_config);

}  // namespace fracplate::cli
