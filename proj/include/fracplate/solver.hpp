#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "fracplate/fractional_calculus.hpp"
#include "fracplate/report.hpp"
#include "fracplate/spectral_domain.hpp"
#include "fracplate/time_grid.hpp"

namespace fracplate {

/// Regularity class of the initial data (u0, u1):
///  H1:     u0 in H^1_0,          u1 in H^{-1}
///  H2:     u0 in H^2 cap H^1_0,  u1 in L^2
///  H3:     u0 in D(A^{3/4}),     u1 in H^1_0
///  Strong: u0 in D(A),           u1 in H^2 cap H^1_0
enum class DataClass { H1, H2, H3, Strong };

std::string_view to_string(DataClass c);
DataClass parse_data_class(std::string_view s);

/// Norm orders (theta for u0, theta for u1) that define a class.
std::pair<double, double> class_orders(DataClass c);

struct InitialData {
  SpectralCoefficients u0;
  SpectralCoefficients u1;
  DataClass declared_class = DataClass::H2;
};

/// Data from plain coefficient lists on the first modes of d; the shorter list is zero padded.
InitialData make_initial_data(const Domain& d, std::vector<double> u0, std::vector<double> u1,
                              DataClass declared = DataClass::H2);

/// Norms of the data dropped by truncating to the retained modes, in the declared class.
struct TailReport {
  double theta_u0 = 0.0;
  double theta_u1 = 0.0;
  double retained_u0 = 0.0;
  double retained_u1 = 0.0;
  double tail_u0 = 0.0;  ///< (sum_{n > N} lambda_n^{2 theta} u0_n^2)^{1/2}
  double tail_u1 = 0.0;
  std::size_t dropped = 0;
};

/// Truncated Mittag-Leffler series solution of d^alpha_t u + Delta^2 u = 0 with
/// hinged boundary conditions:
///   c_n(t) = u0_n E_alpha(-lambda_n t^alpha) + u1_n t E_{alpha,2}(-lambda_n t^alpha).
class SpectralSolution {
 public:
  SpectralSolution(Domain domain, std::vector<EigenMode> modes, double alpha, std::vector<double> u0,
                   std::vector<double> u1, double horizon);

  const Domain& domain() const noexcept { return domain_; }
  const std::vector<EigenMode>& modes() const noexcept { return modes_; }
  std::size_t mode_count() const noexcept { return modes_.size(); }
  double alpha() const noexcept { return alpha_; }
  double horizon() const noexcept { return horizon_; }
  const std::vector<double>& u0() const noexcept { return u0_; }
  const std::vector<double>& u1() const noexcept { return u1_; }
  const TailReport& tail() const noexcept { return tail_; }
  void set_tail(TailReport t) { tail_ = t; }

  /// c_n(t).
  double coefficient(std::size_t n, double t) const;
  /// c_n(t) - c_n(0), computed without cancellation.
  double coefficient_increment(std::size_t n, double t) const;
  /// c_n'(t) = -u0_n lambda_n t^{alpha-1} E_{alpha,alpha}(-lambda_n t^alpha) + u1_n E_alpha(-lambda_n t^alpha).
  double coefficient_rate(std::size_t n, double t) const;
  /// (I^beta c_n)(t) in closed form: u0_n t^beta E_{alpha,1+beta} + u1_n t^{1+beta} E_{alpha,2+beta}.
  double coefficient_rl_integral(std::size_t n, double beta, double t) const;

  /// All c_n(t) as spectral coefficients.
  SpectralCoefficients state(double t) const;

  /// c_n sampled on a grid (one component per mode).
  TimeSeries coefficient_series(const TimeGrid& grid) const;

 private:
  void check_time(double t) const;

  Domain domain_;
  std::vector<EigenMode> modes_;
  double alpha_;
  std::vector<double> u0_;
  std::vector<double> u1_;
  double horizon_;
  TailReport tail_;
};

/// Solution with coefficient n multiplied by lambda_n^power (power = -1/2 maps
/// an H^1 solution u to the strong solution w = A^{-1/2} u).
struct LiftedSolution {
  SpectralSolution base;
  double power = -0.5;

  double coefficient(std::size_t n, double t) const;
  SpectralCoefficients state(double t) const;
  /// The lifted solution as an ordinary solution with lifted data.
  SpectralSolution as_solution() const;
};

LiftedSolution lift(const SpectralSolution& s, double power);

/// Series solution on the first N modes. alpha must lie in (1, 2).
/// Data coefficients beyond N are dropped and reported in the tail.
SpectralSolution solve(const Domain& d, std::size_t N, double alpha, const InitialData& data, double horizon);

double eval_u(const SpectralSolution& s, double t, const Point& x);
/// The u0 part of the rate behaves like t^{alpha-1} and vanishes at t = 0.
double eval_ut(const SpectralSolution& s, double t, const Point& x);
/// -sum_n lambda_n c_n(t) e_n(x).
double eval_caputo(const SpectralSolution& s, double t, const Point& x);
/// sum_n c_n(t) (-mu_n) grad e_n(x).
Point eval_grad_laplacian(const SpectralSolution& s, double t, const Point& x);

/// A residual together with the scale its tolerance is relative to.
struct ScaledResidual {
  double residual = 0.0;
  double scale = 1.0;  ///< max(1, lambda_n max_t |c_n|) or the analogue for a test function
  double relative() const { return residual / scale; }
};

/// max over interior nodes of |d^alpha_t c_n + lambda_n c_n| with the
/// Caputo derivative taken numerically from samples of c_n.
ScaledResidual mode_ode_residual(const SpectralSolution& s, std::size_t n, const TimeGrid& grid);

/// max over interior nodes of
///   | sum_n v_n [ d/dt I^{2-alpha}(c_n' - c_n'(0)) + lambda_n c_n ] |
/// with c_n' sampled exactly and the fractional integral and time derivative discrete.
ScaledResidual weak_form_residual(const SpectralSolution& s, const SpectralCoefficients& v, const TimeGrid& grid);

struct ClassTable {
  DataClass declared = DataClass::H2;
  std::map<std::string, double> u0_norms;  ///< keyed by theta
  std::map<std::string, double> u1_norms;
  std::vector<DataClass> satisfied;         ///< every class whose norms are finite
  nlohmann::json to_json() const;
};

/// Fractional norms of u0 at theta in {1/4, 1/2, 3/4, 1} and of u1 at {-1/4, 0, 1/4, 1/2}.
ClassTable classify(const InitialData& data, const Domain& d);

/// Default theta for the gradient-Laplacian estimate: 1/(4 alpha).
double default_estimate_theta(double alpha);

/// Empirical ratios for the a priori estimates
///   ||d^alpha_t u||_{L2(0,T;L2)}          <= C (||grad Lap u0|| + ||grad u1||)
///   ||grad Lap u||_{L2(0,T;D(A^theta))}   <= C (same)
/// with the time integrals done by the trapezoidal rule on the grid.
VerificationReport apriori_estimate_check(const SpectralSolution& s, const TimeGrid& grid, double theta);
VerificationReport apriori_estimate_check(const SpectralSolution& s, const TimeGrid& grid);

}  // namespace fracplate
