#include "fracplate/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fracplate/errors.hpp"
#include "fracplate/parallel.hpp"
#include "fracplate/special_functions.hpp"

namespace fracplate {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 1.0 && alpha < 2.0)) throw DomainError("alpha must lie in (1, 2)");
}

std::string theta_key(double theta) { return format_double(theta); }

// c_n'(t) - c_n'(0) without cancellation.
double rate_increment(const SpectralSolution& s, std::size_t n, double t) {
  if (t == 0.0) return 0.0;
  const double a = s.alpha();
  const double lambda = s.modes()[n].lambda;
  const double z = -lambda * std::pow(t, a);
  double out = 0.0;
  if (s.u0()[n] != 0.0) out -= s.u0()[n] * lambda * std::pow(t, a - 1.0) * mittag_leffler(a, a, z);
  if (s.u1()[n] != 0.0) out += s.u1()[n] * z * mittag_leffler(a, a + 1.0, z);
  return out;
}

double trapezoid(std::span<const double> t, std::span<const double> f) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) acc += 0.5 * (t[i + 1] - t[i]) * (f[i] + f[i + 1]);
  return acc;
}

}  // namespace

std::string_view to_string(DataClass c) {
  switch (c) {
    case DataClass::H1: return "H1";
    case DataClass::H2: return "H2";
    case DataClass::H3: return "H3";
    case DataClass::Strong: return "Strong";
  }
  return "H2";
}

DataClass parse_data_class(std::string_view s) {
  if (s == "H1" || s == "h1") return DataClass::H1;
  if (s == "H2" || s == "h2") return DataClass::H2;
  if (s == "H3" || s == "h3") return DataClass::H3;
  if (s == "Strong" || s == "strong") return DataClass::Strong;
  throw PreconditionError("unknown data class '" + std::string(s) + "' (expected H1, H2, H3 or Strong)");
}

std::pair<double, double> class_orders(DataClass c) {
  switch (c) {
    case DataClass::H1: return {0.25, -0.25};
    case DataClass::H2: return {0.5, 0.0};
    case DataClass::H3: return {0.75, 0.25};
    case DataClass::Strong: return {1.0, 0.5};
  }
  return {0.5, 0.0};
}

InitialData make_initial_data(const Domain& d, std::vector<double> u0, std::vector<double> u1, DataClass declared) {
  const std::size_t n = std::max({u0.size(), u1.size(), std::size_t{1}});
  u0.resize(n, 0.0);
  u1.resize(n, 0.0);
  const auto modes = eigenmodes(d, n);
  InitialData data;
  data.u0.modes = modes;
  data.u0.values = std::move(u0);
  data.u1.modes = modes;
  data.u1.values = std::move(u1);
  data.declared_class = declared;
  return data;
}

SpectralSolution::SpectralSolution(Domain domain, std::vector<EigenMode> modes, double alpha, std::vector<double> u0,
                                   std::vector<double> u1, double horizon)
    : domain_(std::move(domain)),
      modes_(std::move(modes)),
      alpha_(alpha),
      u0_(std::move(u0)),
      u1_(std::move(u1)),
      horizon_(horizon) {
  check_alpha(alpha_);
  if (!(horizon_ > 0.0) || !std::isfinite(horizon_)) throw DomainError("time horizon must be positive");
  if (u0_.size() != modes_.size() || u1_.size() != modes_.size()) {
    throw PreconditionError("initial data must have one coefficient per mode");
  }
}

void SpectralSolution::check_time(double t) const {
  if (!(t >= 0.0 && t <= horizon_ * (1.0 + 1e-12))) throw DomainError("time outside [0, T]");
}

double SpectralSolution::coefficient(std::size_t n, double t) const {
  check_time(t);
  if (t == 0.0) return u0_[n];
  const double z = -modes_[n].lambda * std::pow(t, alpha_);
  double out = 0.0;
  if (u0_[n] != 0.0) out += u0_[n] * mittag_leffler(alpha_, 1.0, z);
  if (u1_[n] != 0.0) out += u1_[n] * t * mittag_leffler(alpha_, 2.0, z);
  return out;
}

double SpectralSolution::coefficient_increment(std::size_t n, double t) const {
  check_time(t);
  if (t == 0.0) return 0.0;
  const double z = -modes_[n].lambda * std::pow(t, alpha_);
  double out = 0.0;
  if (u0_[n] != 0.0) out += u0_[n] * z * mittag_leffler(alpha_, alpha_ + 1.0, z);
  if (u1_[n] != 0.0) out += u1_[n] * t * mittag_leffler(alpha_, 2.0, z);
  return out;
}

double SpectralSolution::coefficient_rate(std::size_t n, double t) const {
  check_time(t);
  const double lambda = modes_[n].lambda;
  const double z = -lambda * std::pow(t, alpha_);
  double out = 0.0;
  if (u0_[n] != 0.0 && t > 0.0) out -= u0_[n] * lambda * std::pow(t, alpha_ - 1.0) * mittag_leffler(alpha_, alpha_, z);
  if (u1_[n] != 0.0) out += u1_[n] * mittag_leffler(alpha_, 1.0, z);
  return out;
}

double SpectralSolution::coefficient_rl_integral(std::size_t n, double beta, double t) const {
  check_time(t);
  if (!(beta > 0.0)) throw DomainError("beta must be positive");
  if (t == 0.0) return 0.0;
  const double z = -modes_[n].lambda * std::pow(t, alpha_);
  double out = 0.0;
  if (u0_[n] != 0.0) out += u0_[n] * std::pow(t, beta) * mittag_leffler(alpha_, 1.0 + beta, z);
  if (u1_[n] != 0.0) out += u1_[n] * std::pow(t, 1.0 + beta) * mittag_leffler(alpha_, 2.0 + beta, z);
  return out;
}

SpectralCoefficients SpectralSolution::state(double t) const {
  SpectralCoefficients c = zero_coefficients(modes_);
  for (std::size_t n = 0; n < modes_.size(); ++n) c.values[n] = coefficient(n, t);
  return c;
}

TimeSeries SpectralSolution::coefficient_series(const TimeGrid& grid) const {
  const std::size_t width = modes_.size();
  std::vector<double> data(grid.size() * width);
  parallel_for(grid.size(), [&](std::size_t i) {
    for (std::size_t n = 0; n < width; ++n) data[i * width + n] = coefficient(n, grid[i]);
  });
  return TimeSeries(grid, width, std::move(data), ValueSpace::L2Omega);
}

double LiftedSolution::coefficient(std::size_t n, double t) const {
  return lambda_power(base.modes()[n], power) * base.coefficient(n, t);
}

SpectralCoefficients LiftedSolution::state(double t) const { return apply_power(base.state(t), power); }

SpectralSolution LiftedSolution::as_solution() const {
  std::vector<double> u0 = base.u0();
  std::vector<double> u1 = base.u1();
  for (std::size_t n = 0; n < u0.size(); ++n) {
    const double w = lambda_power(base.modes()[n], power);
    u0[n] *= w;
    u1[n] *= w;
  }
  return SpectralSolution(base.domain(), base.modes(), base.alpha(), std::move(u0), std::move(u1), base.horizon());
}

LiftedSolution lift(const SpectralSolution& s, double power) { return LiftedSolution{s, power}; }

SpectralSolution solve(const Domain& d, std::size_t N, double alpha, const InitialData& data, double horizon) {
  check_alpha(alpha);
  if (N == 0) throw PreconditionError("at least one mode is required");
  data.u0.validate();
  data.u1.validate();
  auto modes = eigenmodes(d, N);
  std::vector<double> u0(N, 0.0);
  std::vector<double> u1(N, 0.0);
  TailReport tail;
  std::tie(tail.theta_u0, tail.theta_u1) = class_orders(data.declared_class);
  double kept0 = 0.0, kept1 = 0.0, drop0 = 0.0, drop1 = 0.0;
  auto absorb = [&](const SpectralCoefficients& c, std::vector<double>& dst, double theta, double& kept, double& drop) {
    for (std::size_t n = 0; n < c.size(); ++n) {
      const double w = lambda_power(c.modes[n], theta) * c.values[n];
      if (n < N) {
        if (c.modes[n].index != modes[n].index) throw PreconditionError("data coefficients must follow the mode order of the domain");
        dst[n] = c.values[n];
        kept += w * w;
      } else {
        drop += w * w;
        if (c.values[n] != 0.0) ++tail.dropped;
      }
    }
  };
  absorb(data.u0, u0, tail.theta_u0, kept0, drop0);
  absorb(data.u1, u1, tail.theta_u1, kept1, drop1);
  tail.retained_u0 = std::sqrt(kept0);
  tail.retained_u1 = std::sqrt(kept1);
  tail.tail_u0 = std::sqrt(drop0);
  tail.tail_u1 = std::sqrt(drop1);
  SpectralSolution s(d, std::move(modes), alpha, std::move(u0), std::move(u1), horizon);
  s.set_tail(tail);
  return s;
}

double eval_u(const SpectralSolution& s, double t, const Point& x) {
  double acc = 0.0;
  for (std::size_t n = 0; n < s.mode_count(); ++n) {
    const double c = s.coefficient(n, t);
    if (c != 0.0) acc += c * eval_mode(s.modes()[n], s.domain(), x).value;
  }
  return acc;
}

double eval_ut(const SpectralSolution& s, double t, const Point& x) {
  double acc = 0.0;
  for (std::size_t n = 0; n < s.mode_count(); ++n) {
    const double c = s.coefficient_rate(n, t);
    if (c != 0.0) acc += c * eval_mode(s.modes()[n], s.domain(), x).value;
  }
  return acc;
}

double eval_caputo(const SpectralSolution& s, double t, const Point& x) {
  double acc = 0.0;
  for (std::size_t n = 0; n < s.mode_count(); ++n) {
    const double c = s.coefficient(n, t);
    if (c != 0.0) acc -= s.modes()[n].lambda * c * eval_mode(s.modes()[n], s.domain(), x).value;
  }
  return acc;
}

Point eval_grad_laplacian(const SpectralSolution& s, double t, const Point& x) {
  Point acc{0.0, 0.0};
  for (std::size_t n = 0; n < s.mode_count(); ++n) {
    const double c = s.coefficient(n, t);
    if (c == 0.0) continue;
    const ModeValue v = eval_mode(s.modes()[n], s.domain(), x);
    acc[0] -= s.modes()[n].mu * c * v.gradient[0];
    acc[1] -= s.modes()[n].mu * c * v.gradient[1];
  }
  return acc;
}

ScaledResidual mode_ode_residual(const SpectralSolution& s, std::size_t n, const TimeGrid& grid) {
  if (n >= s.mode_count()) throw PreconditionError("mode index out of range");
  if (grid.horizon() > s.horizon() * (1.0 + 1e-12)) throw DomainError("grid extends past the solution horizon");
  ScaledResidual out;
  if (s.u0()[n] == 0.0 && s.u1()[n] == 0.0) return out;
  const std::size_t m = grid.size();
  std::vector<double> inc(m), c(m);
  parallel_for(m, [&](std::size_t i) {
    inc[i] = s.coefficient_increment(n, grid[i]);
    c[i] = s.coefficient(n, grid[i]);
  });
  const TimeSeries d = caputo_derivative(TimeSeries(grid, std::move(inc)), s.alpha(), s.u1()[n]);
  const double lambda = s.modes()[n].lambda;
  double cmax = 0.0;
  for (double v : c) cmax = std::max(cmax, std::fabs(v));
  for (std::size_t i = 1; i + 1 < m; ++i) out.residual = std::max(out.residual, std::fabs(d.scalar(i) + lambda * c[i]));
  out.scale = std::max(1.0, lambda * cmax);
  return out;
}

ScaledResidual weak_form_residual(const SpectralSolution& s, const SpectralCoefficients& v, const TimeGrid& grid) {
  v.validate();
  if (grid.horizon() > s.horizon() * (1.0 + 1e-12)) throw DomainError("grid extends past the solution horizon");
  // Pair test-function coefficients with solution modes; modes the solution
  // does not carry have c_n = 0 and drop out.
  std::vector<std::size_t> active;
  std::vector<double> weight;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v.values[k] == 0.0) continue;
    for (std::size_t n = 0; n < s.mode_count(); ++n) {
      if (s.modes()[n].index == v.modes[k].index) {
        if (s.u0()[n] != 0.0 || s.u1()[n] != 0.0) {
          active.push_back(n);
          weight.push_back(v.values[k]);
        }
        break;
      }
    }
  }
  ScaledResidual out;
  if (active.empty()) return out;
  const std::size_t m = grid.size();
  const std::size_t width = active.size();
  std::vector<double> rate(m * width), c(m * width);
  parallel_for(m, [&](std::size_t i) {
    for (std::size_t a = 0; a < width; ++a) {
      rate[i * width + a] = rate_increment(s, active[a], grid[i]);
      c[i * width + a] = s.coefficient(active[a], grid[i]);
    }
  });
  const std::vector<double> zero(width, 0.0);
  const TimeSeries first = caputo_from_rate(TimeSeries(grid, width, std::move(rate), ValueSpace::L2Omega), s.alpha(), zero);
  double scale = 0.0;
  for (std::size_t a = 0; a < width; ++a) {
    double cmax = 0.0;
    for (std::size_t i = 0; i < m; ++i) cmax = std::max(cmax, std::fabs(c[i * width + a]));
    scale += std::fabs(weight[a]) * s.modes()[active[a]].lambda * cmax;
  }
  for (std::size_t i = 1; i + 1 < m; ++i) {
    double r = 0.0;
    for (std::size_t a = 0; a < width; ++a) {
      r += weight[a] * (first.at(i)[a] + s.modes()[active[a]].lambda * c[i * width + a]);
    }
    out.residual = std::max(out.residual, std::fabs(r));
  }
  out.scale = std::max(1.0, scale);
  return out;
}

nlohmann::json ClassTable::to_json() const {
  nlohmann::json j;
  j["declared"] = std::string(to_string(declared));
  j["u0_norms"] = u0_norms;
  j["u1_norms"] = u1_norms;
  std::vector<std::string> names;
  for (auto c : satisfied) names.emplace_back(to_string(c));
  j["satisfied"] = names;
  return j;
}

ClassTable classify(const InitialData& data, const Domain& d) {
  (void)d;
  ClassTable table;
  table.declared = data.declared_class;
  for (double theta : {0.25, 0.5, 0.75, 1.0}) table.u0_norms[theta_key(theta)] = fractional_norm(data.u0, theta);
  for (double theta : {-0.25, 0.0, 0.25, 0.5}) table.u1_norms[theta_key(theta)] = fractional_norm(data.u1, theta);
  for (DataClass c : {DataClass::H1, DataClass::H2, DataClass::H3, DataClass::Strong}) {
    const auto [t0, t1] = class_orders(c);
    if (std::isfinite(table.u0_norms[theta_key(t0)]) && std::isfinite(table.u1_norms[theta_key(t1)])) {
      table.satisfied.push_back(c);
    }
  }
  return table;
}

double default_estimate_theta(double alpha) { return 1.0 / (4.0 * alpha); }

VerificationReport apriori_estimate_check(const SpectralSolution& s, const TimeGrid& grid, double theta) {
  if (!(theta > 0.0 && theta < 1.0 / (2.0 * s.alpha()))) throw DomainError("theta must lie in (0, 1/(2 alpha))");
  VerificationReport report;
  report.name = "apriori_estimate";
  report.inputs = {{"alpha", s.alpha()},
                   {"horizon", grid.horizon()},
                   {"modes", static_cast<double>(s.mode_count())},
                   {"nodes", static_cast<double>(grid.size())},
                   {"theta", theta}};
  const TimeSeries c = s.coefficient_series(grid);
  const std::size_t m = grid.size();
  std::vector<double> caputo_sq(m, 0.0), gradlap_sq(m, 0.0);
  for (std::size_t n = 0; n < s.mode_count(); ++n) {
    const double lam2 = s.modes()[n].lambda * s.modes()[n].lambda;
    const double wgl = lambda_power(s.modes()[n], 1.5 + 2.0 * theta);
    for (std::size_t i = 0; i < m; ++i) {
      const double v = c.at(i)[n];
      caputo_sq[i] += lam2 * v * v;
      gradlap_sq[i] += wgl * v * v;
    }
  }
  const double lhs1 = std::sqrt(trapezoid(grid.nodes(), caputo_sq));
  const double lhs2 = std::sqrt(trapezoid(grid.nodes(), gradlap_sq));
  SpectralCoefficients u0 = zero_coefficients(s.modes());
  u0.values = s.u0();
  SpectralCoefficients u1 = zero_coefficients(s.modes());
  u1.values = s.u1();
  const double rhs = fractional_norm(u0, 0.75) + fractional_norm(u1, 0.25);
  report.set_metric("caputo_l2", lhs1);
  report.set_metric("grad_laplacian_l2_theta", lhs2);
  report.set_metric("data_norm", rhs);
  if (rhs == 0.0) {
    report.set_metric("vacuous", 1.0);
    report.set_metric("ratio_caputo", std::numeric_limits<double>::quiet_NaN());
    report.set_metric("ratio_grad_laplacian", std::numeric_limits<double>::quiet_NaN());
    report.notes.push_back("zero data: both sides vanish, the estimate is vacuous");
    return report;
  }
  report.set_metric("vacuous", 0.0);
  report.set_metric("ratio_caputo", lhs1 / rhs);
  report.set_metric("ratio_grad_laplacian", lhs2 / rhs);
  report.notes.push_back("ratios are empirical; the constants of the estimates are not specified");
  return report;
}

VerificationReport apriori_estimate_check(const SpectralSolution& s, const TimeGrid& grid) {
  return apriori_estimate_check(s, grid, default_estimate_theta(s.alpha()));
}

}  // namespace fracplate
