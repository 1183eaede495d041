#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "fracplate/report.hpp"
#include "fracplate/time_grid.hpp"

namespace fracplate {

/// Space in which the values of a TimeSeries live.
///  Scalar:     one real per node.
///  L2Omega:    eigen-coefficients; the Euclidean norm is the L2(Omega) norm.
///  BoundaryL2: samples at boundary quadrature nodes; callers supply the weighted norm.
enum class ValueSpace { Scalar, L2Omega, BoundaryL2 };

/// A function of time sampled at every node of a grid, each value a vector of `width` reals.
class TimeSeries {
 public:
  TimeSeries(TimeGrid grid, std::vector<double> scalar_values);
  TimeSeries(TimeGrid grid, std::size_t width, std::vector<double> data, ValueSpace space);

  static TimeSeries sample(const TimeGrid& grid, const std::function<double(double)>& f);

  const TimeGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return grid_.size(); }
  std::size_t width() const noexcept { return width_; }
  ValueSpace space() const noexcept { return space_; }

  std::span<const double> at(std::size_t node) const noexcept { return {data_.data() + node * width_, width_}; }
  std::span<double> at(std::size_t node) noexcept { return {data_.data() + node * width_, width_}; }
  double scalar(std::size_t node) const noexcept { return data_[node * width_]; }
  /// Component k across all nodes.
  std::vector<double> component(std::size_t k) const;
  std::span<const double> data() const noexcept { return data_; }

 private:
  TimeGrid grid_;
  std::size_t width_;
  ValueSpace space_;
  std::vector<double> data_;
};

/// Norm of one value (or of a difference of two values) of a TimeSeries.
using NormCallback = std::function<double(std::span<const double>)>;

double euclidean_norm(std::span<const double> v);

/// Riemann-Liouville integral I^beta f at every node, beta in (0, 1].
///
/// Product trapezoidal rule: f is interpolated linearly on each subinterval
/// and the kernel moments of (t - s)^{beta-1} are integrated exactly.
/// Vector values are integrated componentwise with the same weights.
TimeSeries rl_integral(const TimeSeries& f, double beta);

/// Weights w with (I^beta f)(t_k) = sum_i w_i f_i for the product trapezoidal rule.
std::vector<double> rl_weights(std::span<const double> nodes, std::size_t k, double beta);

/// Finite-difference weights for the m-th derivative at x0 from the given stencil (Fornberg).
std::vector<double> fd_weights(double x0, std::span<const double> stencil, int m);

/// First derivative at every node from five-point stencils (shifted near the ends).
TimeSeries fd_derivative(const TimeSeries& f);

/// Caputo derivative of order alpha in (1, 2) as d/dt I^{2-alpha}(f' - f'(0)).
///
/// f1_0 is the exact initial slope, one entry per component. The leading
/// singular term a t^alpha of f - f(0) - f'(0) t is read off an early sample
/// and differentiated exactly; the remainder goes through five-point
/// differences and the product trapezoidal integral. Constants do not matter,
/// so passing samples of f - f(0) avoids cancellation on strongly graded grids.
/// Values at the two end nodes come from one-sided stencils and are less accurate.
TimeSeries caputo_derivative(const TimeSeries& f, double alpha, std::span<const double> f1_0);
TimeSeries caputo_derivative(const TimeSeries& f, double alpha, double f1_0);

/// d/dt I^{2-alpha}(f' - f'(0)) from samples of the rate f' itself. The
/// leading t^{alpha-1} term of f' - f'(0) is read off an early sample and
/// handled exactly, as in caputo_derivative.
TimeSeries caputo_from_rate(const TimeSeries& rate, double alpha, std::span<const double> f1_0);

/// Gagliardo seminorm [f]_{H^beta(0,T;H)}, beta in (0, 1).
///
/// Cells between consecutive nodes carry the mean of their end values; every
/// pair of cells at least two apart contributes its exact kernel mass times
/// the squared norm of the value difference. Same and adjacent cells are
/// dropped, so the estimate approaches the true seminorm from below.
double gagliardo_seminorm(const TimeSeries& f, double beta, const NormCallback& norm);
double gagliardo_seminorm(const TimeSeries& f, double beta);

/// Trapezoidal L2(0, T; H) norm.
double l2_time_norm(const TimeSeries& f, const NormCallback& norm);
double l2_time_norm(const TimeSeries& f);

/// l2_time_norm + gagliardo_seminorm.
double hbeta_norm(const TimeSeries& f, double beta, const NormCallback& norm);
double hbeta_norm(const TimeSeries& f, double beta);

/// Ratios ||I^beta f_i||_{H^beta} / ||f_i||_{L2} over a family; zero members are skipped.
/// Metrics: ratio_min, ratio_max, spread (= max / min), members_used.
VerificationReport norm_equivalence_probe(double beta, std::span<const TimeSeries> family);

/// The probe on `grid` and on grid.refined() for a family of scalar functions;
/// adds spread_change = |spread_fine / spread_coarse - 1| with tolerance 0.1.
VerificationReport norm_equivalence_refinement(double beta, std::span<const std::function<double(double)>> family,
                                               const TimeGrid& grid);

}  // namespace fracplate
