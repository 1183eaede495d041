#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fracplate {

/// Ordered sample times 0 = t_0 < t_1 < ... < t_M = T.
///
/// Graded grids place t_i = T (i/M)^grading so that the algebraic
/// singularities t^{alpha-1}, t^{alpha-2} at the origin are resolved.
class TimeGrid {
 public:
  /// `nodes` counts sample points (M + 1), so it must be at least 2.
  static TimeGrid graded(double horizon, std::size_t nodes, double grading);
  static TimeGrid uniform(double horizon, std::size_t nodes) { return graded(horizon, nodes, 1.0); }
  /// Arbitrary nodes; must start at 0 and be strictly increasing.
  static TimeGrid from_nodes(std::vector<double> nodes);

  double horizon() const noexcept { return nodes_.back(); }
  double grading() const noexcept { return grading_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  std::size_t intervals() const noexcept { return nodes_.size() - 1; }
  double operator[](std::size_t i) const noexcept { return nodes_[i]; }
  std::span<const double> nodes() const noexcept { return nodes_; }
  double min_spacing() const noexcept;
  double max_spacing() const noexcept;

  /// Halves every interval. Graded grids stay graded with the same exponent,
  /// so node i of this grid is node 2i of the refined one.
  TimeGrid refined() const;

 private:
  TimeGrid(std::vector<double> nodes, double grading);

  std::vector<double> nodes_;
  double grading_ = 1.0;
};

/// Grading exponent 2/(alpha-1) clamped to [1, 4].
double default_grading(double alpha);

/// Graded samples on [t0, T] with t0 > 0, for checks that must avoid the origin.
std::vector<double> graded_samples(double t0, double horizon, std::size_t count, double grading);

}  // namespace fracplate
