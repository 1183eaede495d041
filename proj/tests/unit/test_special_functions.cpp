#include <cmath>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <gtest/gtest.h>

#include "fracplate/errors.hpp"
#include "fracplate/special_functions.hpp"
#include "fracplate/time_grid.hpp"

using namespace fracplate;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

double big_gamma(double x) { return static_cast<double>(boost::math::tgamma(Big(x))); }

// Straight Taylor sum in 50 digits, independent of the library oracle.
double big_series(double a, double b, double z, int terms) {
  Big s = 0, zk = 1;
  for (int k = 0; k < terms; ++k) {
    s += zk / boost::math::tgamma(Big(a) * k + Big(b));
    zk *= Big(z);
  }
  return static_cast<double>(s);
}

struct RefPoint {
  double a, b, z, value;
};

std::vector<RefPoint> load_reference() {
  std::ifstream in(std::string(FRACPLATE_TEST_DATA) + "/ml_reference.txt");
  std::vector<RefPoint> out;
  RefPoint p{};
  while (in >> p.a >> p.b >> p.z >> p.value) out.push_back(p);
  return out;
}

}  // namespace

TEST(Gamma, MatchesHighPrecision) {
  double worst = 0.0;
  for (int i = 0; i <= 400; ++i) {
    const double x = 1e-3 * std::pow(170e3, i / 400.0);
    const double ref = big_gamma(x);
    worst = std::max(worst, std::fabs(gamma_fn(x) - ref) / ref);
  }
  EXPECT_LE(worst, 1e-13);
  EXPECT_NEAR(gamma_fn(7.3) / big_gamma(7.3), 1.0, 1e-14);
}

TEST(Gamma, SimpleValues) {
  EXPECT_EQ(gamma_fn(1.0), 1.0);
  EXPECT_EQ(gamma_fn(5.0), 24.0);
  EXPECT_NEAR(gamma_fn(0.5), std::sqrt(std::numbers::pi), 1e-15);
  EXPECT_NEAR(gamma_fn(-0.5), -2.0 * std::sqrt(std::numbers::pi), 1e-14);
}

TEST(Gamma, PolesThrow) {
  EXPECT_THROW(gamma_fn(0.0), DomainError);
  EXPECT_THROW(gamma_fn(-3.0), DomainError);
  EXPECT_EQ(rgamma(-2.0), 0.0);
}

TEST(MittagLeffler, SimpleValues) {
  EXPECT_EQ(mittag_leffler(1.5, 1.0, 0.0), 1.0);
  EXPECT_NEAR(mittag_leffler(1.0, 1.0, 1.0), std::exp(1.0), 1e-14);
  EXPECT_NEAR(mittag_leffler(2.0, 1.0, -std::numbers::pi * std::numbers::pi), -1.0, 1e-12);
}

TEST(MittagLeffler, StiffArgumentAgainstLongSeries) {
  const double ref = big_series(1.8, 2.0, -50.0, 400);
  const auto e = ml_eval({1.8, 2.0}, -50.0);
  EXPECT_NEAR(e.value, ref, 1e-12);
  EXPECT_GE(e.est_abs_error, 0.0);
}

TEST(MittagLeffler, ReferenceTable) {
  const auto ref = load_reference();
  ASSERT_GT(ref.size(), 800u);
  int checked = 0;
  for (const auto& p : ref) {
    const auto e = ml_eval({p.a, p.b}, p.z);
    const double err = std::fabs(e.value - p.value);
    EXPECT_LE(err, std::max(1e-12, 1e-12 * std::fabs(p.value))) << p.a << ' ' << p.b << ' ' << p.z;
    EXPECT_GE(e.est_abs_error, err) << p.a << ' ' << p.b << ' ' << p.z;
    ++checked;
  }
  EXPECT_EQ(checked, static_cast<int>(ref.size()));
}

TEST(MittagLeffler, ConstantTerm) {
  for (double a : {0.5, 1.2, 1.9})
    for (double b : {0.3, 1.0, 2.5, 4.0}) EXPECT_NEAR(mittag_leffler(a, b, 0.0) * gamma_fn(b), 1.0, 1e-15);
}

TEST(MittagLeffler, BoundedOnNegativeAxis) {
  for (double a : {1.1, 1.5, 1.9}) {
    for (int i = 0; i <= 200; ++i) {
      const double z = -std::pow(10.0, -2.0 + 8.0 * i / 200.0);
      EXPECT_LE(std::fabs(mittag_leffler(a, 1.0, z)), 1.0 + 1e-14);
    }
  }
}

TEST(MittagLeffler, MethodsAgreeOnOverlap) {
  // The three strategies meet somewhere in here; the value must not jump.
  for (double a : {1.2, 1.7}) {
    for (double z = -20.0; z >= -200.0; z -= 7.5) {
      EXPECT_NEAR(ml_eval({a, 1.0}, z).value, big_series(a, 1.0, z, 1500), 1e-11) << a << ' ' << z;
    }
  }
}

TEST(MittagLeffler, InvalidParameters) {
  EXPECT_THROW(ml_eval({0.0, 1.0}, -1.0), DomainError);
  EXPECT_THROW(ml_eval({1.5, -1.0}, -1.0), DomainError);
}

TEST(SeriesOracle, Values) {
  EXPECT_EQ(ml_series_oracle({1.0, 1.0}, 0.0, 1), 1.0);
  EXPECT_NEAR(ml_series_oracle({1.0, 1.0}, 1.0, 30), std::exp(1.0), 1e-15);
  const double a = ml_series_oracle({1.5, 1.5}, -4.0, 200);
  EXPECT_NEAR(a, ml_series_oracle({1.5, 1.5}, -4.0, 400), 1e-16);
  EXPECT_NEAR(a, big_series(1.5, 1.5, -4.0, 200), 1e-15);
}

TEST(SeriesOracle, Overflow) { EXPECT_THROW(ml_series_oracle({1.0, 1.0}, -1e200, 10), std::range_error); }

TEST(DerivativeIdentities, DegenerateLambda) {
  const auto t = graded_samples(0.1, 2.0, 32, 1.0);
  const auto rep = ml_derivative_identity_residuals(1.5, 0.0, t);
  for (const auto& [k, v] : rep.metrics) {
    if (k.find("residual") != std::string::npos) EXPECT_LE(v, 1e-8) << k;
  }
}

TEST(DerivativeIdentities, Contract) {
  const auto a = ml_derivative_identity_residuals(1.5, 1.0, graded_samples(0.1, 2.0, 64, 1.0));
  EXPECT_LE(a.metric("max_residual"), 1e-6);
  const auto b = ml_derivative_identity_residuals(1.2, 100.0, graded_samples(0.05, 1.0, 64, 2.0));
  EXPECT_LE(b.metric("max_residual"), 1e-5);
}

TEST(DerivativeIdentities, RejectsOrigin) {
  const std::vector<double> t{0.0, 0.5, 1.0};
  EXPECT_THROW(ml_derivative_identity_residuals(1.5, 1.0, t), PreconditionError);
}

TEST(LaplaceCheck, Examples) {
  EXPECT_LE(ml_laplace_check({1.0, 1.0}, 1.0, 2.0), 1e-12);
  EXPECT_LE(ml_laplace_check({1.5, 1.0}, 1.0, 2.0), 1e-8);
  EXPECT_LE(ml_laplace_check({1.5, 2.0}, 4.0, 3.0), 1e-8);
  EXPECT_THROW(ml_laplace_check({1.5, 1.0}, 4.0, 2.0), PreconditionError);
}

TEST(DecayBound, CosineIsNotSaturated) {
  const auto c = ml_decay_bound_estimate({2.0, 1.0}, 4000);
  EXPECT_FALSE(c.saturated);
}

TEST(DecayBound, StableUnderDoubling) {
  for (double b : {1.0, 2.0}) {
    const auto c1 = ml_decay_bound_estimate({1.5, b}, 5000);
    const auto c2 = ml_decay_bound_estimate({1.5, b}, 10000);
    EXPECT_TRUE(std::isfinite(c2.c_hat));
    EXPECT_TRUE(c2.saturated);
    EXPECT_LT(std::fabs(c2.c_hat / c1.c_hat - 1.0), 0.05);
  }
}

TEST(MaxBeta, Values) {
  const auto h = max_beta(0.5);
  EXPECT_DOUBLE_EQ(h.argmax, 1.0);
  EXPECT_DOUBLE_EQ(h.maxval, 0.5);
  const auto q = max_beta(0.75);
  EXPECT_DOUBLE_EQ(q.argmax, 3.0);
  // grid search on [0, 100]
  double best = 0.0;
  for (int i = 0; i <= 1000000; ++i) {
    const double x = 1e-4 * i;
    best = std::max(best, std::pow(x, 0.75) / (1.0 + x));
  }
  EXPECT_NEAR(q.maxval, best, 1e-9);
  EXPECT_NEAR(q.maxval, 0.5698, 1e-4);
  EXPECT_NEAR(max_beta(1e-9).maxval, 1.0, 1e-7);
  EXPECT_THROW(max_beta(1.0), DomainError);
  EXPECT_THROW(max_beta(0.0), DomainError);
}

TEST(MaxBeta, BoundsSweep) {
  for (double b : {0.1, 0.25, 0.5, 0.75, 0.9}) {
    const double m = max_beta(b).maxval;
    for (int i = 0; i < 10000; ++i) {
      const double x = 1e4 * i / 9999.0;
      EXPECT_LE(std::pow(x, b) / (1.0 + x), m * (1.0 + 1e-15));
    }
  }
}
