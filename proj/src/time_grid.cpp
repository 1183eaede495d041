#include "fracplate/time_grid.hpp"

#include <algorithm>
#include <cmath>

#include "fracplate/errors.hpp"

namespace fracplate {

TimeGrid::TimeGrid(std::vector<double> nodes, double grading) : nodes_(std::move(nodes)), grading_(grading) {}

TimeGrid TimeGrid::graded(double horizon, std::size_t nodes, double grading) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("time horizon must be positive");
  if (nodes < 2) throw PreconditionError("a time grid needs at least two nodes");
  if (!(grading >= 1.0)) throw DomainError("grading exponent must be >= 1");
  std::vector<double> t(nodes);
  const double m = static_cast<double>(nodes - 1);
  for (std::size_t i = 0; i < nodes; ++i) t[i] = horizon * std::pow(static_cast<double>(i) / m, grading);
  t.back() = horizon;
  return TimeGrid(std::move(t), grading);
}

TimeGrid TimeGrid::from_nodes(std::vector<double> nodes) {
  if (nodes.size() < 2) throw PreconditionError("a time grid needs at least two nodes");
  if (nodes.front() != 0.0) throw PreconditionError("time grids start at t = 0");
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (!(nodes[i] > nodes[i - 1])) throw PreconditionError("time grid nodes must be strictly increasing");
  }
  return TimeGrid(std::move(nodes), 1.0);
}

double TimeGrid::min_spacing() const noexcept {
  double h = nodes_[1] - nodes_[0];
  for (std::size_t i = 2; i < nodes_.size(); ++i) h = std::min(h, nodes_[i] - nodes_[i - 1]);
  return h;
}

double TimeGrid::max_spacing() const noexcept {
  double h = 0.0;
  for (std::size_t i = 1; i < nodes_.size(); ++i) h = std::max(h, nodes_[i] - nodes_[i - 1]);
  return h;
}

TimeGrid TimeGrid::refined() const {
  // Recompute graded nodes from the formula so refinement nests exactly.
  const std::size_t n = 2 * intervals() + 1;
  std::vector<double> t(n);
  const double m = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 2 == 0) {
      t[i] = nodes_[i / 2];
    } else {
      t[i] = horizon() * std::pow(static_cast<double>(i) / m, grading_);
      // Arbitrary-node grids have no formula; bisect instead.
      if (!(t[i] > nodes_[i / 2] && t[i] < nodes_[i / 2 + 1])) t[i] = 0.5 * (nodes_[i / 2] + nodes_[i / 2 + 1]);
    }
  }
  return TimeGrid(std::move(t), grading_);
}

double default_grading(double alpha) {
  if (!(alpha > 1.0)) return 4.0;
  return std::clamp(2.0 / (alpha - 1.0), 1.0, 4.0);
}

std::vector<double> graded_samples(double t0, double horizon, std::size_t count, double grading) {
  if (!(t0 > 0.0 && horizon > t0)) throw PreconditionError("graded samples need 0 < t0 < T");
  if (count < 2) throw PreconditionError("need at least two samples");
  std::vector<double> t(count);
  const double m = static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) t[i] = t0 + (horizon - t0) * std::pow(static_cast<double>(i) / m, grading);
  t.back() = horizon;
  return t;
}

}  // namespace fracplate
