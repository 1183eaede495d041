#include "fracplate/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fracplate/errors.hpp"
#include "fracplate/fractional_calculus.hpp"
#include "fracplate/hidden_regularity.hpp"
#include "fracplate/solver.hpp"
#include "fracplate/special_functions.hpp"
#include "fracplate/spectral_domain.hpp"
#include "fracplate/time_grid.hpp"

namespace fracplate {

namespace {

constexpr double kPi = std::numbers::pi;

// Smallest log2(r_k / r_{k+1}) over a refinement sequence.
double min_order(const std::vector<double>& r) {
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < r.size(); ++k) worst = std::min(worst, std::log2(r[k] / r[k + 1]));
  return worst;
}

std::vector<TimeGrid> refinement_ladder(double horizon, std::size_t coarse_nodes, double grading, int levels) {
  std::vector<TimeGrid> out{TimeGrid::graded(horizon, coarse_nodes, grading)};
  for (int l = 1; l < levels; ++l) out.push_back(out.back().refined());
  return out;
}

VerificationReport criterion1() {
  VerificationReport rep;
  rep.name = "mittag_leffler_correctness";
  const double alphas[] = {1.1, 1.3, 1.5, 1.7, 1.9};
  double worst = 0.0;
  std::size_t points = 0;
  for (double a : alphas) {
    const double betas[] = {1.0, 2.0, a, a - 1.0, 3.0};
    for (double b : betas) {
      double worst_ab = 0.0;
      for (int j = 0; j < 40; ++j) {
        const double z = -50.0 * j / 39.0;
        const double err = std::fabs(mittag_leffler(a, b, z) - ml_series_oracle({a, b}, z, 700));
        worst_ab = std::max(worst_ab, err);
        ++points;
      }
      rep.rows.push_back({a, b, worst_ab});
      worst = std::max(worst, worst_ab);
    }
  }
  rep.columns = {"alpha", "beta", "max_abs_error"};
  rep.inputs["grid_points"] = static_cast<double>(points);
  rep.set_metric("series_max_abs_error", worst, Tolerance::at_most(1e-10));

  double cos_err = 0.0;
  for (int j = 0; j <= 200; ++j) {
    const double x = 10.0 * j / 200.0;
    cos_err = std::max(cos_err, std::fabs(mittag_leffler(2.0, 1.0, -x * x) - std::cos(x)));
  }
  double exp_err = 0.0;
  for (int j = 0; j <= 200; ++j) {
    const double x = -20.0 + 22.0 * j / 200.0;
    const double e = std::exp(x);
    exp_err = std::max(exp_err, std::fabs(mittag_leffler(1.0, 1.0, x) - e) / std::max(1.0, e));
  }
  rep.set_metric("cos_max_abs_error", cos_err, Tolerance::at_most(1e-12));
  rep.set_metric("exp_max_scaled_error", exp_err, Tolerance::at_most(1e-12));
  rep.notes.push_back("E_{2,1}(-x^2) vs cos x on [0, 10]; E_{1,1}(x) vs e^x on [-20, 2], error relative to max(1, e^x)");
  return rep;
}

VerificationReport criterion2() {
  VerificationReport rep;
  rep.name = "mittag_leffler_identities";
  const double alphas[] = {1.2, 1.5, 1.8};
  const double lambdas[] = {1.0, 10.0, 100.0};
  const auto times = graded_samples(0.05, 1.0, 64, 2.0);
  double worst = 0.0;
  for (double a : alphas) {
    for (double l : lambdas) {
      const double r = ml_derivative_identity_residuals(a, l, times).metric("max_residual");
      worst = std::max(worst, r);
      rep.rows.push_back({0.0, a, l, r});
    }
  }
  rep.set_metric("derivative_identity_max_residual", worst, Tolerance::at_most(1e-5));

  const double betas[] = {1.0, 1.5, 2.0};
  double worst_lt = 0.0;
  for (double a : alphas) {
    for (double b : betas) {
      for (double l : lambdas) {
        const double z = 1.5 * std::pow(l, 1.0 / a) + 1.0;
        const double r = ml_laplace_check({a, b}, l, z);
        worst_lt = std::max(worst_lt, r);
        rep.rows.push_back({1.0, a, l, r});
      }
    }
  }
  rep.columns = {"check", "alpha", "lambda", "residual"};
  rep.set_metric("laplace_max_residual", worst_lt, Tolerance::at_most(1e-8));
  rep.notes.push_back("check 0: derivative identities on 64 graded samples of [0.05, 1]; check 1: Laplace transform, beta in {1, 1.5, 2}, z = 1.5 lambda^{1/alpha} + 1");
  return rep;
}

VerificationReport criterion3() {
  VerificationReport rep;
  rep.name = "fractional_operators";
  const TimeGrid g = TimeGrid::graded(1.0, 2049, 2.0);
  double worst = 0.0;
  for (int gamma = 0; gamma <= 2; ++gamma) {
    const TimeSeries f = TimeSeries::sample(g, [gamma](double t) { return std::pow(t, gamma); });
    for (double beta : {0.25, 0.5, 0.75}) {
      const double exact = gamma_fn(gamma + 1.0) / gamma_fn(gamma + 1.0 + beta);
      const double got = rl_integral(f, beta).scalar(g.size() - 1);
      worst = std::max(worst, std::fabs(got - exact) / exact);
    }
  }
  rep.set_metric("power_rule_max_rel_error", worst, Tolerance::at_most(1e-6));

  std::vector<double> errs;
  for (const TimeGrid& gg : refinement_ladder(1.0, 257, 2.0, 4)) {
    const TimeSeries f = TimeSeries::sample(gg, [](double t) { return std::cos(t); });
    const TimeSeries lhs = rl_integral(rl_integral(f, 0.4), 0.3);
    const TimeSeries rhs = rl_integral(f, 0.7);
    double e = 0.0;
    for (std::size_t i = 0; i < gg.size(); ++i) e = std::max(e, std::fabs(lhs.scalar(i) - rhs.scalar(i)));
    errs.push_back(e);
  }
  double factor = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < errs.size(); ++k) factor = std::min(factor, errs[k] / errs[k + 1]);
  for (std::size_t k = 0; k < errs.size(); ++k) rep.rows.push_back({static_cast<double>(256 << k), errs[k]});
  rep.columns = {"intervals", "semigroup_error"};
  rep.set_metric("semigroup_min_factor", factor, Tolerance::at_least(1.8));

  const TimeGrid u = TimeGrid::uniform(1.0, 4097);
  const double gs = gagliardo_seminorm(TimeSeries::sample(u, [](double t) { return t; }), 0.5);
  rep.set_metric("gagliardo_t_half", gs);
  rep.set_metric("gagliardo_rel_error", std::fabs(gs - 1.0), Tolerance::at_most(0.02));
  rep.notes.push_back("power rule for t^0, t^1, t^2 and beta in {1/4, 1/2, 3/4} at T = 1; semigroup I^0.3 I^0.4 cos = I^0.7 cos");
  return rep;
}

VerificationReport criterion4() {
  VerificationReport rep;
  rep.name = "solver_residuals";
  const Domain d = Domain::interval(kPi);
  const std::size_t N = 5;  // lambda_5 = 625; lambda_6 > 1e3
  double worst_mode = 0.0, worst_weak = 0.0;
  double order_mode = std::numeric_limits<double>::infinity();
  double order_weak = std::numeric_limits<double>::infinity();
  for (double alpha : {1.2, 1.5, 1.8}) {
    std::vector<double> u0(N), u1(N), v(N);
    for (std::size_t n = 0; n < N; ++n) {
      u0[n] = 1.0 / (n + 1.0);
      u1[n] = 1.0 - 0.3 * n;
      v[n] = 1.0 / ((n + 1.0) * (n + 1.0));
    }
    const SpectralSolution s = solve(d, N, alpha, make_initial_data(d, u0, u1), 1.0);
    const auto ladder = refinement_ladder(1.0, 513, default_grading(alpha), 3);
    const SpectralCoefficients vc = coefficients_from_values(d, v);
    for (std::size_t n = 0; n < N; ++n) {
      std::vector<double> r;
      for (const auto& g : ladder) r.push_back(mode_ode_residual(s, n, g).relative());
      worst_mode = std::max(worst_mode, r.back());
      order_mode = std::min(order_mode, min_order(r));
      rep.rows.push_back({alpha, static_cast<double>(n + 1), r[0], r[1], r[2]});
    }
    std::vector<double> r;
    for (const auto& g : ladder) r.push_back(weak_form_residual(s, vc, g).relative());
    worst_weak = std::max(worst_weak, r.back());
    order_weak = std::min(order_weak, min_order(r));
    rep.rows.push_back({alpha, 0.0, r[0], r[1], r[2]});
  }
  rep.columns = {"alpha", "mode", "residual_512", "residual_1024", "residual_2048"};
  rep.set_metric("mode_residual_max", worst_mode, Tolerance::at_most(5e-3));
  rep.set_metric("mode_residual_min_order", order_mode, Tolerance::at_least(1.0));
  rep.set_metric("weak_residual_max", worst_weak, Tolerance::at_most(5e-3));
  rep.set_metric("weak_residual_min_order", order_weak, Tolerance::at_least(1.0));

  const std::vector<double> u0{0.7, -1.3, 0.25, 2.0, -0.01, 3.5, 1e-3, -0.6};
  const std::vector<double> u1{-0.2, 0.9, 1.7, -4.0, 0.33, 0.0, 2.5, 1.1};
  const SpectralSolution s = solve(d, u0.size(), 1.5, make_initial_data(d, u0, u1), 1.0);
  double ic = 0.0;
  for (std::size_t n = 0; n < u0.size(); ++n) {
    ic = std::max(ic, std::fabs(s.coefficient(n, 0.0) - u0[n]));
    ic = std::max(ic, std::fabs(s.coefficient_rate(n, 0.0) - u1[n]));
  }
  rep.set_metric("initial_condition_max_error", ic, Tolerance::at_most(1e-12));

  std::vector<double> p0(8), p1(8);
  for (std::size_t n = 0; n < 8; ++n) {
    p0[n] = 1.0 / (n + 1.0);
    p1[n] = 0.5 + n;
  }
  const SpectralSolution sp = solve(d, 8, 1.5, make_initial_data(d, p0, p1), 1.0);
  const LiftedSolution w = lift(sp, -0.5);
  const SpectralSolution ws = w.as_solution();
  double lift_err = 0.0;
  for (double t : {0.0, 0.01, 0.1, 0.5, 1.0}) {
    for (std::size_t n = 0; n < 8; ++n) {
      const double a = w.coefficient(n, t);
      const double b = ws.coefficient(n, t);
      if (a != 0.0 || b != 0.0) lift_err = std::max(lift_err, std::fabs(a - b) / std::max(std::fabs(a), std::fabs(b)));
    }
  }
  rep.set_metric("lifting_max_rel_error", lift_err, Tolerance::at_most(1e-14));
  rep.notes.push_back("modes 1..5 of the interval (0, pi); grids of 512, 1024, 2048 graded intervals");
  return rep;
}

VerificationReport criterion5() {
  VerificationReport rep;
  rep.name = "multiplier_identities";
  const Domain line = Domain::interval(kPi);
  const Domain square = Domain::rectangle(kPi, kPi);
  double static_worst = 0.0;
  for (const Domain& d : {line, square}) {
    std::vector<double> w(16);
    for (std::size_t n = 0; n < 16; ++n) w[n] = (n % 2 == 0 ? 1.0 : -1.0) / (n + 1.0);
    static_worst = std::max(static_worst,
                            static_multiplier_identity(coefficients_from_values(d, w), MultiplierField(d)).relative);
  }
  rep.set_metric("static_max_relative", static_worst, Tolerance::at_most(1e-8));

  const double beta = 0.25;
  const double alpha = 1.5;
  double worst1 = 0.0, worst2 = 0.0;
  double order1 = std::numeric_limits<double>::infinity(), order2 = order1;
  double algebraic = 0.0;
  for (const Domain& d : {line, square}) {
    std::vector<double> u0(8), u1(8);
    for (std::size_t n = 0; n < 8; ++n) {
      u0[n] = 1.0 / ((n + 1.0) * (n + 1.0));
      u1[n] = 0.5 / (n + 1.0);
    }
    const SpectralSolution s = solve(d, 8, alpha, make_initial_data(d, u0, u1), 1.0);
    const MultiplierField h(d);
    const auto ladder = refinement_ladder(1.0, 513, default_grading(alpha), 3);
    std::size_t tau = 0;
    for (std::size_t i = 0; i < ladder[0].size(); ++i) {
      if (std::fabs(ladder[0][i] - 0.5) < std::fabs(ladder[0][tau] - 0.5)) tau = i;
    }
    std::vector<double> r1, r2;
    for (std::size_t l = 0; l < ladder.size(); ++l) {
      const auto& g = ladder[l];
      const FilteredIdentity a = filtered_identity(s, h, beta, g, g.size() - 1);
      const FilteredIdentity b = filtered_identity2(s, h, beta, g, g.size() - 1, tau << l);
      r1.push_back(a.relative);
      r2.push_back(b.relative);
      algebraic = std::max({algebraic, a.algebraic_residual / a.boundary, b.algebraic_residual / b.boundary});
    }
    worst1 = std::max(worst1, r1.back());
    worst2 = std::max(worst2, r2.back());
    order1 = std::min(order1, min_order(r1));
    order2 = std::min(order2, min_order(r2));
    const double dim = d.dimension();
    rep.rows.push_back({dim, 1.0, r1[0], r1[1], r1[2]});
    rep.rows.push_back({dim, 2.0, r2[0], r2[1], r2[2]});
  }
  rep.columns = {"dimension", "identity", "relative_512", "relative_1024", "relative_2048"};
  rep.set_metric("filtered_max_relative", worst1, Tolerance::at_most(1e-3));
  rep.set_metric("filtered_min_order", order1, Tolerance::at_least(1.0));
  rep.set_metric("filtered2_max_relative", worst2, Tolerance::at_most(1e-3));
  rep.set_metric("filtered2_min_order", order2, Tolerance::at_least(1.0));
  rep.set_metric("algebraic_max_relative", algebraic);
  rep.notes.push_back("16-mode eigen-sums for the static identity; 8 modes, alpha = 1.5, beta = 1/4, t = 1, tau = node nearest 0.5");
  return rep;
}

VerificationReport criterion6(const AcceptanceOptions& opt) {
  VerificationReport rep;
  rep.name = "hidden_regularity_probe";
  const auto sweep = u1_sweep_ratios(64);
  bool finite = true;
  for (std::size_t n = 0; n < sweep.size(); ++n) {
    finite = finite && std::isfinite(sweep[n]) && sweep[n] > 0.0;
    rep.rows.push_back({static_cast<double>(n + 1), sweep[n]});
  }
  rep.columns = {"n", "u1_ratio"};
  rep.set_metric("u1_sweep_finite", finite ? 1.0 : 0.0, Tolerance::at_least(1.0));
  rep.set_metric("u1_sweep_max", *std::max_element(sweep.begin(), sweep.end()));

  const FamilySpec fam = FamilySpec::parse("decay:1.5", opt.seed);
  const std::vector<std::size_t> schedule{16, 32, 64, 128, 256};
  const VerificationReport probe = direct_inequality_probe(Domain::interval(kPi), 1.5, 1.0, fam, schedule, 2049);
  rep.set_metric("growth_max", probe.metric("growth_max"), Tolerance::at_most(1.25));
  for (const auto& [k, v] : probe.metrics) {
    if (k.rfind("R_N", 0) == 0) rep.set_metric(k, v);
  }
  rep.inputs["seed"] = static_cast<double>(opt.seed);
  rep.extra = probe.extra;
  rep.notes = probe.notes;
  return rep;
}

VerificationReport criterion_report(int id, const AcceptanceOptions& opt) {
  switch (id) {
    case 1:
      return criterion1();
    case 2:
      return criterion2();
    case 3:
      return criterion3();
    case 4:
      return criterion4();
    case 5:
      return criterion5();
    case 6:
      return criterion6(opt);
  }
  throw PreconditionError("criteria 1 to 6 produce reports");
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::string criterion_title(int id) {
  switch (id) {
    case 1:
      return "Mittag-Leffler correctness";
    case 2:
      return "Mittag-Leffler identity suite";
    case 3:
      return "Fractional-operator suite";
    case 4:
      return "Solver residuals";
    case 5:
      return "Multiplier identities";
    case 6:
      return "Hidden-regularity probe";
    case 7:
      return "Determinism";
  }
  throw PreconditionError("acceptance criteria are numbered 1 to 7");
}

std::vector<double> u1_sweep_ratios(std::size_t count) {
  const FamilySpec fam = FamilySpec::parse("single:u1", 0);
  const std::vector<std::size_t> schedule{count};
  const VerificationReport probe = direct_inequality_probe(Domain::interval(kPi), 1.5, 1.0, fam, schedule, 4097);
  std::vector<double> out(count, std::numeric_limits<double>::quiet_NaN());
  for (const auto& row : probe.rows) out[static_cast<std::size_t>(row[1])] = row[2];
  return out;
}

CriterionOutcome run_criterion(int id, const AcceptanceOptions& opt) {
  CriterionOutcome out;
  out.id = id;
  out.title = criterion_title(id);
  const auto t0 = std::chrono::steady_clock::now();
  if (id >= 1 && id <= 6) {
    out.report = criterion_report(id, opt);
    const double limits[] = {10.0, 60.0, 0.0, 0.0, 300.0, 0.0};
    out.runtime_limit = limits[id - 1];
  } else if (id == 7) {
    const std::string first = canonical_json(acceptance_bundle(opt));
    const std::string second = canonical_json(acceptance_bundle(opt));
    out.report.name = "determinism";
    out.report.set_metric("bytes", static_cast<double>(first.size()));
    out.report.set_metric("identical", first == second ? 1.0 : 0.0, Tolerance::at_least(1.0));
  } else {
    throw PreconditionError("acceptance criteria are numbered 1 to 7");
  }
  out.seconds = elapsed(t0);
  return out;
}

nlohmann::json acceptance_bundle(const AcceptanceOptions& opt) {
  nlohmann::json criteria = nlohmann::json::array();
  bool all = true;
  for (int id = 1; id <= 6; ++id) {
    const VerificationReport rep = criterion_report(id, opt);
    all = all && rep.passed();
    criteria.push_back({{"id", id}, {"title", criterion_title(id)}, {"report", rep.to_json()}});
  }
  return {{"seed", opt.seed}, {"criteria", criteria}, {"passed", all}};
}

}  // namespace fracplate
