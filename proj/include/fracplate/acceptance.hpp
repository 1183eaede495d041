#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fracplate/report.hpp"

namespace fracplate {

struct AcceptanceOptions {
  std::uint64_t seed = 42;
};

struct CriterionOutcome {
  int id = 0;
  std::string title;
  VerificationReport report;
  double seconds = 0.0;        ///< wall time; kept out of every serialized form
  double runtime_limit = 0.0;  ///< 0 when the criterion has no runtime bound

  bool runtime_ok() const { return runtime_limit <= 0.0 || seconds < runtime_limit; }
  bool passed() const { return report.passed() && runtime_ok(); }
};

/// Titles of criteria 1..7.
std::string criterion_title(int id);

/// Runs one criterion (1..7). Criterion 7 runs the whole 1..6 bundle twice.
CriterionOutcome run_criterion(int id, const AcceptanceOptions& opt = {});

/// Criteria 1..6 as one canonical document (no timings).
nlohmann::json acceptance_bundle(const AcceptanceOptions& opt = {});

/// The u1 sweep of criterion 6: ratio for u1 = e_n, n = 1..count, on the interval (0, pi), alpha = 1.5, T = 1.
std::vector<double> u1_sweep_ratios(std::size_t count);

}  // namespace fracplate
