#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "fracplate/errors.hpp"
#include "fracplate/solver.hpp"
#include "fracplate/special_functions.hpp"

using namespace fracplate;
using std::numbers::pi;

namespace {

const Domain kLine = Domain::interval(pi);

SpectralSolution single(std::size_t n, double u0, double u1, std::size_t N = 4, double alpha = 1.5) {
  std::vector<double> a(N, 0.0), b(N, 0.0);
  a[n] = u0;
  b[n] = u1;
  return solve(kLine, N, alpha, make_initial_data(kLine, a, b), 1.0);
}

}  // namespace

TEST(Solve, SingleModeCollapse) {
  const auto s = single(0, 1.0, 0.0);
  for (double t : {0.0, 0.1, 0.5, 1.0}) {
    const double x = 0.7;
    EXPECT_NEAR(eval_u(s, t, {x, 0}), mittag_leffler(1.5, 1.0, -std::pow(t, 1.5)) * std::sqrt(2 / pi) * std::sin(x),
                1e-14);
  }
  const auto v = single(1, 0.0, 1.0);
  for (double t : {0.2, 1.0}) {
    const double x = 1.1;
    EXPECT_NEAR(eval_u(v, t, {x, 0}),
                t * mittag_leffler(1.5, 2.0, -16 * std::pow(t, 1.5)) * std::sqrt(2 / pi) * std::sin(2 * x), 1e-14);
  }
}

TEST(Solve, ZeroData) {
  const auto s = solve(kLine, 6, 1.5, make_initial_data(kLine, {}, {}), 1.0);
  EXPECT_EQ(eval_u(s, 0.5, {1.0, 0}), 0.0);
  EXPECT_EQ(eval_ut(s, 0.5, {1.0, 0}), 0.0);
}

TEST(Solve, RejectsAlpha) {
  const auto d = make_initial_data(kLine, {1.0}, {0.0});
  EXPECT_THROW(solve(kLine, 1, 2.5, d, 1.0), DomainError);
  EXPECT_THROW(solve(kLine, 1, 1.0, d, 1.0), DomainError);
  const auto s = single(0, 1.0, 0.0);
  EXPECT_THROW(eval_u(s, 1.5, {1.0, 0}), DomainError);
  EXPECT_THROW(eval_u(s, -0.1, {1.0, 0}), DomainError);
}

TEST(Solve, TailReport) {
  std::vector<double> u0(20);
  for (std::size_t n = 0; n < 20; ++n) u0[n] = 1.0 / ((n + 1.0) * (n + 1.0) * (n + 1.0));
  const auto s = solve(kLine, 8, 1.5, make_initial_data(kLine, u0, {}, DataClass::H2), 1.0);
  EXPECT_EQ(s.tail().dropped, 12u);
  double tail = 0.0;
  for (std::size_t n = 8; n < 20; ++n) tail += std::pow(n + 1.0, 4) * u0[n] * u0[n];  // lambda^{2 * 1/2}
  EXPECT_NEAR(s.tail().tail_u0, std::sqrt(tail), 1e-14);
}

TEST(Eval, InitialConditions) {
  std::vector<double> u0{0.5, -0.2, 0.1}, u1{0.3, 0.7, -0.4};
  const auto s = solve(kLine, 3, 1.7, make_initial_data(kLine, u0, u1), 1.0);
  for (std::size_t n = 0; n < 3; ++n) EXPECT_EQ(s.coefficient(n, 0.0), u0[n]);
  const auto v = solve(kLine, 3, 1.7, make_initial_data(kLine, {}, u1), 1.0);
  for (std::size_t n = 0; n < 3; ++n) EXPECT_EQ(v.coefficient_rate(n, 0.0), u1[n]);
  const double x = 0.9;
  EXPECT_NEAR(eval_ut(v, 0.0, {x, 0}), reconstruct(coefficients_from_values(kLine, u1), kLine, {x, 0}), 1e-15);
}

TEST(Eval, CaputoOfFirstMode) {
  const auto s = single(0, 1.0, 0.0);
  for (double t : {0.1, 0.6}) EXPECT_DOUBLE_EQ(eval_caputo(s, t, {1.2, 0}), -eval_u(s, t, {1.2, 0}));
}

TEST(Eval, GradLaplacian) {
  const auto s = single(2, 1.0, 0.0);
  const double t = 0.3, x = 0.4;
  const double c = s.coefficient(2, t);
  EXPECT_NEAR(eval_grad_laplacian(s, t, {x, 0})[0], c * -9.0 * std::sqrt(2 / pi) * 3 * std::cos(3 * x), 1e-14);
}

TEST(Coefficients, RateMatchesDifferences) {
  const auto s = solve(kLine, 3, 1.4, make_initial_data(kLine, {1.0, 0.5, 0.2}, {0.3, -0.4, 1.0}), 1.0);
  const double h = 1e-5;
  for (std::size_t n = 0; n < 3; ++n) {
    for (double t : {0.2, 0.7}) {
      const double fd = (s.coefficient(n, t + h) - s.coefficient(n, t - h)) / (2 * h);
      EXPECT_NEAR(s.coefficient_rate(n, t), fd, 1e-7);
    }
  }
}

TEST(Coefficients, IncrementAndRlIntegral) {
  const auto s = single(1, 2.0, -1.0);
  for (double t : {1e-6, 0.3, 1.0}) EXPECT_NEAR(s.coefficient_increment(1, t), s.coefficient(1, t) - 2.0, 1e-14);
  // I^beta c_n against the discrete integral on a fine graded grid
  const auto g = TimeGrid::graded(1.0, 4097, 4.0);
  const auto c = s.coefficient_series(g);
  const auto r = rl_integral(TimeSeries(g, c.component(1)), 0.25);
  EXPECT_NEAR(r.scalar(g.size() - 1), s.coefficient_rl_integral(1, 0.25, 1.0), 1e-6);
}

TEST(Linearity, DataSuperposition) {
  const std::vector<double> a0{1.0, 0.5}, a1{0.0, 2.0}, b0{-0.3, 0.2}, b1{1.0, 1.0};
  std::vector<double> c0(2), c1(2);
  for (int n = 0; n < 2; ++n) {
    c0[n] = 2 * a0[n] + 3 * b0[n];
    c1[n] = 2 * a1[n] + 3 * b1[n];
  }
  const auto A = solve(kLine, 2, 1.5, make_initial_data(kLine, a0, a1), 1.0);
  const auto B = solve(kLine, 2, 1.5, make_initial_data(kLine, b0, b1), 1.0);
  const auto C = solve(kLine, 2, 1.5, make_initial_data(kLine, c0, c1), 1.0);
  for (double t : {0.1, 0.9})
    for (std::size_t n = 0; n < 2; ++n)
      EXPECT_NEAR(C.coefficient(n, t), 2 * A.coefficient(n, t) + 3 * B.coefficient(n, t), 1e-14);
}

TEST(Lifting, MatchesSolveWithLiftedData) {
  const auto d = Domain::rectangle(1.0, 2.0);
  std::vector<double> u0(6), u1(6);
  for (int n = 0; n < 6; ++n) {
    u0[n] = std::cos(n + 0.5);
    u1[n] = std::sin(n + 0.5);
  }
  const auto s = solve(d, 6, 1.5, make_initial_data(d, u0, u1), 1.0);
  const auto lifted = lift(s, -0.5);
  const auto direct = lifted.as_solution();
  const auto back = lift(direct, 0.5);
  for (double t : {0.0, 0.25, 1.0}) {
    for (std::size_t n = 0; n < 6; ++n) {
      const double a = lifted.coefficient(n, t), b = direct.coefficient(n, t);
      EXPECT_LE(std::fabs(a - b), 1e-14 * std::fabs(b)) << n << ' ' << t;
      EXPECT_NEAR(back.coefficient(n, t), s.coefficient(n, t), 1e-14 * std::fabs(s.coefficient(n, t)) + 1e-300);
    }
  }
}

TEST(ModeResidual, Zero) {
  const auto s = single(0, 0.0, 0.0);
  EXPECT_EQ(mode_ode_residual(s, 0, TimeGrid::graded(1.0, 513, 4.0)).residual, 0.0);
}

TEST(ModeResidual, ContractAndOrder) {
  for (std::size_t n : {0u, 1u}) {
    const auto s = single(n, 1.0, 0.0);
    double prev = 0.0;
    for (std::size_t m : {513u, 1025u, 2049u}) {
      const auto r = mode_ode_residual(s, n, TimeGrid::graded(1.0, m, default_grading(1.5)));
      if (m == 2049) EXPECT_LE(r.relative(), 5e-3);
      if (prev > 0.0) EXPECT_GE(std::log2(prev / r.residual), 1.0);
      prev = r.residual;
    }
  }
}

TEST(WeakResidual, Cases) {
  const auto g = TimeGrid::graded(1.0, 2049, default_grading(1.5));
  const auto zero = single(0, 0.0, 0.0);
  EXPECT_EQ(weak_form_residual(zero, coefficients_from_values(kLine, {1.0, 0, 0, 0}), g).residual, 0.0);
  const auto s = single(0, 1.0, 0.5);
  EXPECT_LE(weak_form_residual(s, coefficients_from_values(kLine, {1.0, 0, 0, 0}), g).residual, 1e-2);
  EXPECT_LE(weak_form_residual(s, coefficients_from_values(kLine, {0, 1.0, 0, 0}), g).residual, 1e-14);
}

TEST(Classify, Examples) {
  const auto a = classify(make_initial_data(kLine, {1.0}, {0.0}), kLine);
  for (const auto& [k, v] : a.u0_norms) EXPECT_DOUBLE_EQ(v, 1.0) << k;
  const auto b = classify(make_initial_data(kLine, {0.0, 0.0}, {0.0, 1.0}), kLine);
  bool found = false;
  for (const auto& [k, v] : b.u1_norms) {
    if (std::stod(k) == -0.25) {
      EXPECT_DOUBLE_EQ(v, 0.5);
      found = true;
    }
  }
  EXPECT_TRUE(found);
  std::vector<double> r(50);
  for (std::size_t n = 0; n < 50; ++n) r[n] = std::sin(3.0 * n) / std::pow(n + 1.0, 3);
  const auto c = classify(make_initial_data(kLine, r, r, DataClass::H3), kLine);
  for (const auto& [k, v] : c.u0_norms) EXPECT_TRUE(std::isfinite(v));
  EXPECT_EQ(c.satisfied.size(), 4u);
  EXPECT_EQ(parse_data_class("Strong"), DataClass::Strong);
  EXPECT_THROW(parse_data_class("H7"), PreconditionError);
}

TEST(Apriori, Cases) {
  const auto g = TimeGrid::graded(1.0, 1025, default_grading(1.5));
  const auto z = apriori_estimate_check(single(0, 0.0, 0.0), g);
  EXPECT_EQ(z.metric("vacuous"), 1.0);
  const auto one = apriori_estimate_check(single(0, 1.0, 0.0), g);
  EXPECT_TRUE(std::isfinite(one.metric("ratio_caputo")));
  EXPECT_GT(one.metric("ratio_caputo"), 0.0);
  EXPECT_NEAR(default_estimate_theta(1.5), 1.0 / 6.0, 1e-16);

  // lambda = n^4 here, so the data norm grows like N^{3/2} and the Caputo
  // norm like N^{7/6}: the ratio falls by 2^{-1/3} per doubling
  std::vector<double> ratios;
  for (std::size_t N : {16u, 32u, 64u}) {
    std::vector<double> u0(N);
    for (std::size_t n = 0; n < N; ++n) u0[n] = 1.0 / ((n + 1.0) * (n + 1.0));
    const auto s = solve(kLine, N, 1.5, make_initial_data(kLine, u0, {}), 1.0);
    ratios.push_back(apriori_estimate_check(s, g).metric("ratio_caputo"));
  }
  const double frozen[] = {0.39068317316960993, 0.3117514684476867, 0.24810858475463382};
  for (std::size_t k = 0; k < ratios.size(); ++k) {
    EXPECT_NEAR(ratios[k] / frozen[k], 1.0, 1e-9);
    if (k > 0) EXPECT_NEAR(ratios[k] / ratios[k - 1], std::cbrt(0.5), 0.01);
  }
}

TEST(EnergySanity, SingleModeBound) {
  double sup = 0.0;
  for (int i = 0; i <= 400; ++i) sup = std::max(sup, std::fabs(mittag_leffler(1.5, 2.0, -16.0 * i / 400.0)));
  const auto s = single(1, 0.7, -1.3);
  for (int i = 0; i <= 100; ++i) {
    const double t = i / 100.0;
    EXPECT_LE(std::fabs(s.coefficient(1, t)), 0.7 + t * 1.3 * sup + 1e-14);
  }
}
