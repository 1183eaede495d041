#include "fracplate/special_functions.hpp"

#include <algorithm>
#include <array>
#include <cfloat>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <quadmath.h>

#include "fracplate/errors.hpp"

namespace fracplate {

namespace {

constexpr double kPi = std::numbers::pi;

// Lanczos sum with g = 671/128 and 14 terms; good to a few ulp for x >= 1/2.
constexpr double kLanczosG = 5.24218750000000000;
constexpr double kLanczosSer0 = 0.999999999999997092;
constexpr std::array<double, 14> kLanczosCoef = {
    57.1562356658629235,     -59.5979603554754912,    14.1360979747417471,
    -0.491913816097620199,   .339946499848118887e-4,  .465236289270485756e-4,
    -.983744753048795646e-4, .158088703224912494e-3,  -.210264441724104883e-3,
    .217439618115212643e-3,  -.164318106536763890e-3, .844182239838527433e-4,
    -.261908384015814087e-4, .368991826595316234e-5};
constexpr double kSqrtTwoPi = 2.5066282746310005;

double lanczos_gamma(double x) {
  double ser = kLanczosSer0;
  double y = x;
  for (double c : kLanczosCoef) ser += c / ++y;
  // t = x + g carried as t_hi + t_lo (two-sum) so its rounding does not get
  // amplified by the exponent x + 1/2.
  const double t = x + kLanczosG;
  const double bv = t - x;
  const double t_lo = (x - (t - bv)) + (kLanczosG - bv);
  const double p = x + 0.5;
  const double correction = std::exp(p * std::log1p(t_lo / t) - t_lo);
  // t^{x+1/2} = t^{x/2} t^{x/2} sqrt(t): x/2 is exact while x + 1/2 may round,
  // and the split keeps the power from overflowing before Gamma does.
  const double half_power = std::pow(t, 0.5 * x);
  return (half_power * std::exp(-t)) * half_power * std::sqrt(t) * (kSqrtTwoPi * ser / x) * correction;
}

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

// Regions for z < 0, measured by r = |z|^{1/alpha}. The largest Taylor term is
// about e^r, so long-double accumulation keeps ~1e-15 absolute accuracy up to
// r = 8; the asymptotic remainder decays like e^{-r} and is negligible past 40.
constexpr double kTaylorRadius = 8.0;
constexpr double kAsymptoticRadius = 40.0;

MLEvaluation taylor_series(double alpha, double beta, double z) {
  using ld = long double;
  const ld zl = z;
  ld sum = 0.0L;
  ld max_term = 0.0L;
  ld zk = 1.0L;
  int small_run = 0;
  int k = 0;
  ld next_term = 0.0L;
  constexpr int kMaxTerms = 20000;
  for (; k < kMaxTerms; ++k) {
    const ld term = zk / std::tgamma(static_cast<ld>(alpha) * k + static_cast<ld>(beta));
    if (!std::isfinite(static_cast<double>(term))) {
      throw EvaluationError("Mittag-Leffler Taylor series overflowed", static_cast<double>(sum),
                            std::numeric_limits<double>::infinity());
    }
    sum += term;
    max_term = std::max(max_term, std::fabs(term));
    // Past the largest term (alpha k + beta well beyond |z|^{1/alpha}) the
    // terms decay monotonically; stop after two consecutive negligible ones.
    const bool past_peak = std::pow(static_cast<double>(alpha * k + beta), alpha) > std::fabs(z);
    if (past_peak && std::fabs(term) <= 1e-21L * std::max(std::fabs(sum), 1e-300L)) {
      if (++small_run >= 2) {
        ++k;
        next_term = zk * zl / std::tgamma(static_cast<ld>(alpha) * k + static_cast<ld>(beta));
        break;
      }
    } else {
      small_run = 0;
    }
    zk *= zl;
  }
  if (k >= kMaxTerms) {
    throw EvaluationError("Mittag-Leffler Taylor series did not converge", static_cast<double>(sum),
                          static_cast<double>(max_term));
  }
  MLEvaluation out;
  out.value = static_cast<double>(sum);
  out.method = MLMethod::TaylorSeries;
  out.est_abs_error = static_cast<double>(2.0L * std::fabs(next_term) +
                                          4.0L * k * LDBL_EPSILON * max_term) +
                      0.5 * DBL_EPSILON * std::fabs(out.value);
  return out;
}

// E_{1,beta}(-x) = e^{-x} 1F1(beta-1; beta; x) / Gamma(beta) (Kummer transform):
// every term after the first has one sign, so no cancellation.
MLEvaluation kummer_unit_alpha(double beta, double x) {
  using ld = long double;
  const ld b = beta;
  const ld xl = x;
  ld term = 1.0L;
  ld sum = 1.0L;
  int k = 0;
  for (; k < 20000; ++k) {
    term *= (b - 1.0L + k) / (b + k) * xl / (k + 1);
    sum += term;
    if (k > x && std::fabs(term) <= 1e-21L * std::fabs(sum)) break;
  }
  MLEvaluation out;
  out.value = static_cast<double>(std::exp(-xl) * sum / std::tgamma(b));
  out.method = MLMethod::TaylorSeries;
  out.est_abs_error = (8.0 * k * LDBL_EPSILON + DBL_EPSILON) * std::fabs(out.value);
  return out;
}

struct PoleTerm {
  double value = 0.0;
  double rounding = 0.0;  // phase error r * eps scaled by the amplitude
};

// Residues of e^s s^{alpha-beta} / (s^alpha + x) at s = x^{1/alpha} e^{+-i pi/alpha}.
// Only these two poles lie on the principal sheet when 1 < alpha <= 2.
PoleTerm pole_contribution(double alpha, double beta, double x) {
  if (alpha <= 1.0) return {};
  const double r = std::pow(x, 1.0 / alpha);
  const double amplitude = (2.0 / alpha) * std::pow(r, 1.0 - beta) * std::exp(r * cospi(1.0 / alpha));
  if (amplitude == 0.0) return {};
  return {amplitude * std::cos(r * sinpi(1.0 / alpha) + kPi * (1.0 - beta) / alpha),
          8.0 * DBL_EPSILON * amplitude * (1.0 + r)};
}

MLEvaluation asymptotic_expansion(double alpha, double beta, double x) {
  const PoleTerm pole_term = pole_contribution(alpha, beta, x);
  const double pole = pole_term.value;
  const double log_x = std::log(x);
  double sum = 0.0;
  double prev_envelope = std::numeric_limits<double>::infinity();
  double omitted = 0.0;
  for (int k = 1; k < 2000; ++k) {
    const double y = beta - alpha * k;
    double magnitude = 0.0;
    double envelope = 0.0;
    if (y > 0.0) {
      magnitude = rgamma(y) * std::exp(-k * log_x);
      envelope = std::fabs(magnitude);
    } else {
      envelope = std::exp(-k * log_x + std::lgamma(1.0 - y)) / kPi;
      magnitude = envelope * sinpi(y);
    }
    const double scale = std::max(std::fabs(sum) + std::fabs(pole), 1e-300);
    if (envelope > prev_envelope || envelope <= 1e-18 * scale) {
      omitted = envelope;
      break;
    }
    // -(z^{-k}) with z = -x.
    sum += (k % 2 == 0 ? -magnitude : magnitude);
    prev_envelope = envelope;
  }
  MLEvaluation out;
  out.value = pole + sum;
  out.method = MLMethod::AsymptoticExpansion;
  out.est_abs_error = omitted + 16.0 * DBL_EPSILON * (std::fabs(sum) + std::fabs(pole)) + pole_term.rounding;
  return out;
}

// E_{alpha,beta}(-x) = (1/pi) int_0^inf s^{alpha-beta} e^{-s} [s^alpha A + x B] /
//   ((s^alpha + x C)^2 + (x S)^2) ds + poles,
// A = sin pi(1-beta), B = sin pi(1-beta+alpha), C = cos pi alpha, S = sin pi alpha.
// Valid for beta < 1 + alpha; callers reduce to beta <= alpha so the
// integrand is bounded at s = 0.
MLEvaluation integral_representation_reduced(double alpha, double beta, double x) {
  const double a_coef = sinpi(1.0 - beta);
  const double b_coef = sinpi(1.0 - beta + alpha);
  const double c_coef = cospi(alpha);
  const double s_coef = sinpi(alpha);
  auto integrand = [=](double s) {
    if (s <= 0.0) return alpha == beta ? x * b_coef / (x * x) : 0.0;
    const double sa = std::pow(s, alpha);
    const double shifted = sa + x * c_coef;
    const double den = shifted * shifted + (x * s_coef) * (x * s_coef);
    return std::pow(s, alpha - beta) * std::exp(-s) * (sa * a_coef + x * b_coef) / den;
  };
  // Split at the peak of the rational factor when it lies on the positive axis.
  const double split = c_coef < 0.0 ? std::max(std::pow(-x * c_coef, 1.0 / alpha), 1e-3) : 1.0;

  static thread_local boost::math::quadrature::tanh_sinh<double> finite_rule;
  static thread_local boost::math::quadrature::exp_sinh<double> tail_rule;
  constexpr double kTol = 1e-14;
  double err_head = 0.0, err_tail = 0.0, l1_head = 0.0, l1_tail = 0.0;
  const double head = finite_rule.integrate(integrand, 0.0, split, kTol, &err_head, &l1_head);
  const double tail = tail_rule.integrate(integrand, split, std::numeric_limits<double>::infinity(),
                                          kTol, &err_tail, &l1_tail);
  const PoleTerm pole = pole_contribution(alpha, beta, x);
  MLEvaluation out;
  out.value = (head + tail) / kPi + pole.value;
  out.method = MLMethod::IntegralRepresentation;
  out.est_abs_error = (err_head + err_tail) / kPi + pole.rounding +
                      16.0 * DBL_EPSILON * ((l1_head + l1_tail) / kPi + std::fabs(pole.value));
  return out;
}

MLEvaluation integral_representation(double alpha, double beta, double x) {
  // E_{a,b}(z) = (E_{a,b-a}(z) - 1/Gamma(b-a)) / z lowers beta without
  // amplifying errors because |z| > 1 here.
  if (beta > alpha) {
    MLEvaluation inner = integral_representation(alpha, beta - alpha, x);
    inner.value = (inner.value - rgamma(beta - alpha)) / (-x);
    inner.est_abs_error = (inner.est_abs_error + 2.0 * DBL_EPSILON * std::fabs(rgamma(beta - alpha))) / x +
                          2.0 * DBL_EPSILON * std::fabs(inner.value);
    return inner;
  }
  return integral_representation_reduced(alpha, beta, x);
}

double contract_bound(double value) { return std::max(1e-12, 1e-12 * std::fabs(value)); }

}  // namespace

void MLParams::validate() const {
  if (!(std::isfinite(alpha) && alpha > 0.0)) {
    throw DomainError("Mittag-Leffler alpha must be positive and finite");
  }
  if (!(std::isfinite(beta) && beta > 0.0)) {
    throw DomainError("Mittag-Leffler beta must be positive and finite");
  }
}

std::string_view to_string(MLMethod m) {
  switch (m) {
    case MLMethod::TaylorSeries: return "TaylorSeries";
    case MLMethod::AsymptoticExpansion: return "AsymptoticExpansion";
    case MLMethod::IntegralRepresentation: return "IntegralRepresentation";
  }
  return "unknown";
}

double sinpi(double x) {
  if (!std::isfinite(x)) return std::numeric_limits<double>::quiet_NaN();
  double r = std::fmod(x, 2.0);  // exact
  if (r < -1.0) r += 2.0;
  if (r > 1.0) r -= 2.0;
  // r in [-1, 1]; fold into [-1/2, 1/2] using sin(pi r) = sin(pi (1 - r)).
  if (r > 0.5) r = 1.0 - r;
  if (r < -0.5) r = -1.0 - r;
  if (r == 0.0) return 0.0 * x;  // keeps the sign of zero
  return std::sin(kPi * r);
}

double cospi(double x) {
  if (!std::isfinite(x)) return std::numeric_limits<double>::quiet_NaN();
  double r = std::fabs(std::fmod(x, 2.0));  // [0, 2)
  if (r > 1.0) r = 2.0 - r;                 // cos is even about 1
  if (r == 0.5) return 0.0;
  if (r < 0.5) return std::cos(kPi * r);
  return -std::cos(kPi * (1.0 - r));
}

// (x-1)! for integer x in [1, 23], where it is exact in double; 0 otherwise.
static double exact_factorial(double x) {
  if (!(x >= 1.0 && x <= 23.0) || x != std::floor(x)) return 0.0;
  double f = 1.0;
  for (int k = 2; k < static_cast<int>(x); ++k) f *= k;
  return f;
}

double gamma_fn(double x) {
  if (std::isnan(x)) return x;
  if (is_nonpositive_integer(x)) {
    std::ostringstream os;
    os << "Gamma has a pole at " << x;
    throw DomainError(os.str());
  }
  if (x < 0.5) return kPi / (sinpi(x) * lanczos_gamma(1.0 - x));
  if (const double f = exact_factorial(x); f > 0.0) return f;
  return lanczos_gamma(x);
}

double rgamma(double x) {
  if (is_nonpositive_integer(x)) return 0.0;
  if (x > 171.0) return 0.0;  // Gamma overflows; 1/Gamma underflows to zero
  if (x < 0.5) return sinpi(x) * lanczos_gamma(1.0 - x) / kPi;
  if (const double f = exact_factorial(x); f > 0.0) return 1.0 / f;
  return 1.0 / lanczos_gamma(x);
}

MLEvaluation ml_eval(const MLParams& p, double z) {
  p.validate();
  if (!std::isfinite(z)) throw DomainError("Mittag-Leffler argument must be finite");
  const double alpha = p.alpha;
  const double beta = p.beta;
  if (z == 0.0) return {rgamma(beta), DBL_EPSILON * std::fabs(rgamma(beta)), MLMethod::TaylorSeries};
  if (z > 0.0) return taylor_series(alpha, beta, z);

  const double x = -z;
  const double r = std::pow(x, 1.0 / alpha);
  if (r <= kTaylorRadius) return taylor_series(alpha, beta, z);
  // For alpha = 1 the exponentially small part is e^{-x} itself; keep it
  // until it underflows.
  if (alpha == 1.0 && x < 700.0) return kummer_unit_alpha(beta, x);
  if (r >= kAsymptoticRadius) return asymptotic_expansion(alpha, beta, x);

  MLEvaluation primary = integral_representation(alpha, beta, x);
  if (primary.est_abs_error <= contract_bound(primary.value)) return primary;

  // Quadrature struggled (alpha very close to an integer); try the others and
  // keep whichever reports the smallest error.
  MLEvaluation best = primary;
  try {
    MLEvaluation alt = asymptotic_expansion(alpha, beta, x);
    if (alt.est_abs_error < best.est_abs_error) best = alt;
  } catch (const EvaluationError&) {
  }
  if (best.est_abs_error > 1e-6 * std::max(1.0, std::fabs(best.value))) {
    throw EvaluationError("Mittag-Leffler evaluation did not converge", best.value, best.est_abs_error);
  }
  return best;
}

double mittag_leffler(double alpha, double beta, double z) { return ml_eval({alpha, beta}, z).value; }

double ml_series_oracle(const MLParams& p, double z, int n_terms) {
  p.validate();
  if (n_terms < 1) throw PreconditionError("ml_series_oracle needs at least one term");
  // Quad precision (113-bit significand) absorbs the e^{|z|^{1/alpha}}
  // cancellation of the alternating sum for the |z| <= 50 range it serves.
  const __float128 zz = z;
  const __float128 a = p.alpha;
  const __float128 b = p.beta;
  const __float128 limit = std::numeric_limits<double>::max();
  __float128 sum = 0;
  __float128 log_abs_z = z == 0.0 ? 0 : logq(fabsq(zz));
  for (int k = 0; k < n_terms; ++k) {
    const __float128 arg = a * k + b;
    __float128 term = 0;
    if (k == 0) {
      term = 1 / tgammaq(arg);
    } else if (z != 0.0) {
      // |z|^k / Gamma(ak+b) in log form; z^k alone leaves the quad range for large k.
      const __float128 magnitude = expq(k * log_abs_z - lgammaq(arg));
      term = (z < 0.0 && (k % 2 == 1)) ? -magnitude : magnitude;
    }
    if (!(fabsq(term) <= limit)) {
      std::ostringstream os;
      os << "term " << k << " of the Mittag-Leffler series exceeds the double range";
      throw std::range_error(os.str());
    }
    sum += term;
  }
  return static_cast<double>(sum);
}

VerificationReport ml_derivative_identity_residuals(double alpha, double lambda,
                                                    std::span<const double> times) {
  if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
  if (!(lambda >= 0.0)) throw DomainError("lambda must be non-negative");
  if (times.empty()) throw PreconditionError("no sample times supplied");
  for (double t : times) {
    if (!(t > 0.0)) throw PreconditionError("derivative identities are sampled at t > 0 only");
  }
  auto ml = [alpha](double b, double z) { return mittag_leffler(alpha, b, z); };
  auto arg = [&](double t) { return -lambda * std::pow(t, alpha); };
  auto lhs_a = [&](double t) { return ml(1.0, arg(t)); };
  auto lhs_b = [&](double t) { return t * ml(2.0, arg(t)); };
  auto lhs_c = [&](double t) { return std::pow(t, alpha - 1.0) * ml(alpha, arg(t)); };
  auto rhs_a = [&](double t) { return -lambda * std::pow(t, alpha - 1.0) * ml(alpha, arg(t)); };
  auto rhs_b = [&](double t) { return ml(1.0, arg(t)); };
  auto rhs_c = [&](double t) { return std::pow(t, alpha - 2.0) * ml(alpha - 1.0, arg(t)); };

  // The variation length of E(-lambda t^alpha) is lambda^{-1/alpha}.
  const double scale = lambda > 0.0 ? std::pow(lambda, -1.0 / alpha) : 1.0;
  auto centered = [](auto&& f, double t, double h) {
    return (f(t - 2 * h) - 8 * f(t - h) + 8 * f(t + h) - f(t + 2 * h)) / (12 * h);
  };

  VerificationReport rep;
  rep.name = "ml_derivative_identities";
  rep.inputs = {{"alpha", alpha}, {"lambda", lambda}, {"samples", static_cast<double>(times.size())}};
  rep.columns = {"t", "residual_Ea1", "residual_Eaa1_k1", "residual_Eaaa"};
  double max_a = 0.0, max_b = 0.0, max_c = 0.0;
  for (double t : times) {
    const double h = 2e-3 * std::min(0.25 * t, scale);
    const double ra = std::fabs(centered(lhs_a, t, h) - rhs_a(t));
    const double rb = std::fabs(centered(lhs_b, t, h) - rhs_b(t));
    const double rc = std::fabs(centered(lhs_c, t, h) - rhs_c(t));
    max_a = std::max(max_a, ra);
    max_b = std::max(max_b, rb);
    max_c = std::max(max_c, rc);
    rep.rows.push_back({t, ra, rb, rc});
  }
  rep.set_metric("max_residual_Ea1", max_a);
  rep.set_metric("max_residual_Eaa1_k1", max_b);
  rep.set_metric("max_residual_Eaaa", max_c);
  rep.set_metric("max_residual", std::max({max_a, max_b, max_c}));
  return rep;
}

double ml_laplace_check(const MLParams& p, double lambda, double z) {
  p.validate();
  if (!(lambda > 0.0)) throw DomainError("lambda must be positive");
  if (!(z > std::pow(lambda, 1.0 / p.alpha))) {
    throw PreconditionError("Laplace identity holds only for z > lambda^{1/alpha}");
  }
  const double alpha = p.alpha;
  const double beta = p.beta;
  // Truncate where e^{-z t} <= 1e-14.
  const double t_cut = 14.0 * std::log(10.0) / z;
  auto integrand = [&](double t) {
    if (t <= 0.0) return beta == 1.0 ? 1.0 : 0.0;
    return std::exp(-z * t) * std::pow(t, beta - 1.0) * mittag_leffler(alpha, beta, -lambda * std::pow(t, alpha));
  };
  static thread_local boost::math::quadrature::tanh_sinh<double> rule;
  double err = 0.0;
  const double numeric = rule.integrate(integrand, 0.0, t_cut, 1e-13, &err);
  const double exact = std::pow(z, alpha - beta) / (std::pow(z, alpha) + lambda);
  return std::fabs(numeric - exact);
}

DecayBound ml_decay_bound_estimate(const MLParams& p, int sample_count) {
  p.validate();
  if (sample_count < 1) throw PreconditionError("sample_count must be positive");
  // Stratified log-uniform |z| in [1e-6, 1e8], plus z = 0.
  constexpr double kLogLo = -6.0;
  constexpr double kLogHi = 8.0;
  DecayBound out;
  out.c_hat = std::fabs(rgamma(p.beta));
  out.argmax_z = 0.0;
  double top_decade = 0.0;
  double previous_decade = 0.0;
  for (int i = 0; i < sample_count; ++i) {
    const double u = kLogLo + (kLogHi - kLogLo) * (i + 0.5) / sample_count;
    const double x = std::pow(10.0, u);
    const double c = std::fabs(ml_eval(p, -x).value) * (1.0 + x);
    if (c > out.c_hat) {
      out.c_hat = c;
      out.argmax_z = -x;
    }
    if (u >= kLogHi - 1.0) {
      top_decade = std::max(top_decade, c);
    } else if (u >= kLogHi - 2.0) {
      previous_decade = std::max(previous_decade, c);
    }
  }
  // A decaying bound levels off; |E|(1+|z|) still climbing by half an order
  // of magnitude per decade means the sup is not attained on the sample range.
  out.saturated = !(top_decade > 1.5 * previous_decade && top_decade >= out.c_hat);
  return out;
}

MaxBeta max_beta(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("max_beta needs beta in (0, 1)");
  return {beta / (1.0 - beta), std::pow(beta, beta) * std::pow(1.0 - beta, 1.0 - beta)};
}

}  // namespace fracplate
