#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace fracplate {

/// One-sided acceptance bound attached to a metric.
struct Tolerance {
  enum class Kind { AtMost, AtLeast };
  Kind kind = Kind::AtMost;
  double bound = 0.0;

  static Tolerance at_most(double b) { return {Kind::AtMost, b}; }
  static Tolerance at_least(double b) { return {Kind::AtLeast, b}; }
  bool accepts(double value) const;
};

/// Residuals, empirical constants and ratio tables produced by a probe.
///
/// Every metric that has a tolerance gets an explicit verdict; metrics
/// without one are informational.
struct VerificationReport {
  std::string name;
  std::map<std::string, double> inputs;
  std::map<std::string, double> metrics;
  std::map<std::string, Tolerance> tolerances;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> notes;
  nlohmann::json extra;  ///< probe-specific structured output, omitted when null

  void set_metric(const std::string& key, double value) { metrics[key] = value; }
  void set_metric(const std::string& key, double value, Tolerance tol) {
    metrics[key] = value;
    tolerances[key] = tol;
  }
  double metric(const std::string& key) const;

  /// Verdict per toleranced metric; a toleranced metric that is missing fails.
  std::map<std::string, bool> verdicts() const;
  bool passed() const;

  nlohmann::json to_json() const;
};

/// Serializes with sorted keys and every double printed as %.17g, so equal
/// values always produce byte-identical text.
std::string canonical_json(const nlohmann::json& value, int indent = 2);

/// %.17g formatting shared by JSON and CSV writers.
std::string format_double(double x);

}  // namespace fracplate
