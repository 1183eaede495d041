#pragma once

#include <span>
#include <string_view>

#include "fracplate/report.hpp"

namespace fracplate {

/// Parameters of the two-parameter Mittag-Leffler function E_{alpha,beta}.
struct MLParams {
  double alpha = 1.0;
  double beta = 1.0;

  /// Throws DomainError unless alpha > 0 and beta > 0 (both finite).
  void validate() const;
};

enum class MLMethod { TaylorSeries, AsymptoticExpansion, IntegralRepresentation };

std::string_view to_string(MLMethod m);

struct MLEvaluation {
  double value = 0.0;
  double est_abs_error = 0.0;  ///< bound on the truncation/quadrature error of `method`
  MLMethod method = MLMethod::TaylorSeries;
};

/// Euler Gamma function, Lanczos sum with reflection below 1/2.
/// Throws DomainError at 0, -1, -2, ...
double gamma_fn(double x);

/// 1/Gamma(x); entire, so it returns 0 at the poles of Gamma.
double rgamma(double x);

/// sin(pi x) with exact argument reduction.
double sinpi(double x);
double cospi(double x);

/// E_{alpha,beta}(z) for real z.
///
/// Accurate to max(1e-12, 1e-12 |E|) for z in [-1e8, 10] and alpha in (0, 2].
/// The strategy depends on r = |z|^{1/alpha} for z < 0: a long-double Taylor
/// sum for small r, the spectral (Laplace-contour) integral plus the residues of
/// the two complex poles in the middle, and the algebraic asymptotic expansion
/// plus the same residues for large r.
MLEvaluation ml_eval(const MLParams& p, double z);

/// Shorthand for ml_eval(p, z).value.
double mittag_leffler(double alpha, double beta, double z);

/// Exact partial sum sum_{k < n_terms} z^k / Gamma(alpha k + beta) accumulated
/// in 50-digit arithmetic. Brute-force reference for moderate |z|.
/// Throws std::range_error when a term leaves the double range.
double ml_series_oracle(const MLParams& p, double z, int n_terms);

/// Finite-difference check of the three derivative identities
///   d/dt E_a(-l t^a)               = -l t^{a-1} E_{a,a}(-l t^a)
///   d/dt [t E_{a,2}(-l t^a)]       = E_{a,1}(-l t^a)
///   d/dt [t^{a-1} E_{a,a}(-l t^a)] = t^{a-2} E_{a,a-1}(-l t^a)
/// at every sample time (all must be > 0). lambda = 0 is allowed.
VerificationReport ml_derivative_identity_residuals(double alpha, double lambda,
                                                    std::span<const double> times);

/// |int_0^inf e^{-zt} t^{beta-1} E_{alpha,beta}(-lambda t^alpha) dt - z^{alpha-beta}/(z^alpha+lambda)|.
/// Requires z > lambda^{1/alpha}.
double ml_laplace_check(const MLParams& p, double lambda, double z);

struct DecayBound {
  double c_hat = 0.0;      ///< max |E(z)| (1 + |z|) over the samples
  double argmax_z = 0.0;
  bool saturated = true;   ///< false when the maximum keeps growing in the top decade
};

/// Empirical constant for |E_{alpha,beta}(z)| <= C / (1 + |z|) on z in [-1e8, 0],
/// sampled log-uniformly (stratified, deterministic).
DecayBound ml_decay_bound_estimate(const MLParams& p, int sample_count);

struct MaxBeta {
  double argmax = 0.0;
  double maxval = 0.0;
};

/// Maximum of x^beta / (1 + x) over x >= 0, for beta in (0, 1).
MaxBeta max_beta(double beta);

}  // namespace fracplate
