#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "fracplate/parallel.hpp"
#include "fracplate/quadrature.hpp"
#include "fracplate/report.hpp"
#include "fracplate/rng.hpp"

using namespace fracplate;

TEST(Report, FormatDouble) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(-2.5e-20), "-2.4999999999999999e-20");
}

TEST(Report, CanonicalJsonIsSortedAndStable) {
  nlohmann::json a = {{"zeta", 0.1}, {"alpha", {{"b", 1}, {"a", 2.0 / 3.0}}}};
  nlohmann::json b;
  b["alpha"]["a"] = 2.0 / 3.0;
  b["alpha"]["b"] = 1;
  b["zeta"] = 0.1;
  const auto ta = canonical_json(a), tb = canonical_json(b);
  EXPECT_EQ(ta, tb);
  EXPECT_NE(ta.find("0.66666666666666663"), std::string::npos);
  EXPECT_LT(ta.find("alpha"), ta.find("zeta"));
  EXPECT_EQ(nlohmann::json::parse(ta)["alpha"]["a"].get<double>(), 2.0 / 3.0);
}

TEST(Report, Verdicts) {
  VerificationReport r;
  r.set_metric("a", 1e-4, Tolerance::at_most(1e-3));
  r.set_metric("b", 2.0, Tolerance::at_least(1.0));
  r.set_metric("info", 1e9);
  EXPECT_TRUE(r.passed());
  r.tolerances["missing"] = Tolerance::at_most(1.0);
  EXPECT_FALSE(r.passed());
  EXPECT_FALSE(r.verdicts().at("missing"));
  r.tolerances.erase("missing");
  r.set_metric("a", std::nan(""));
  EXPECT_FALSE(r.passed());
  EXPECT_THROW(r.metric("nope"), std::out_of_range);
}

TEST(Rng, CounterBasedReference) {
  // splitmix64 of key + (counter + 1) * golden gamma, seed 0 stream 0 counter 0
  std::uint64_t x = 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  x = x ^ (x >> 31);
  EXPECT_EQ(counter_bits(0, 0, 0), x);
  EXPECT_EQ(counter_bits(0, 0, 0), 0xE220A8397B1DCDAFull);
}

TEST(Rng, IndependentOfOrder) {
  std::vector<double> forward, backward(100);
  for (std::uint64_t k = 0; k < 100; ++k) forward.push_back(standard_normal(42, 3, k));
  for (std::uint64_t k = 100; k-- > 0;) backward[k] = standard_normal(42, 3, k);
  EXPECT_EQ(forward, backward);
  EXPECT_NE(standard_normal(42, 3, 0), standard_normal(42, 4, 0));
  EXPECT_NE(standard_normal(42, 3, 0), standard_normal(43, 3, 0));
}

TEST(Rng, NormalMoments) {
  double m1 = 0.0, m2 = 0.0;
  const int n = 200000;
  for (int k = 0; k < n; ++k) {
    const double z = standard_normal(7, 0, k);
    m1 += z;
    m2 += z * z;
  }
  EXPECT_NEAR(m1 / n, 0.0, 0.01);
  EXPECT_NEAR(m2 / n, 1.0, 0.01);
  for (int k = 0; k < 1000; ++k) {
    const double u = uniform01(1, 2, k);
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(Parallel, CoversEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  EXPECT_GE(thread_count(), 1u);
}

TEST(Parallel, RethrowsAndHonoursEnvironment) {
  EXPECT_THROW(parallel_for(50, [](std::size_t i) {
                 if (i == 17) throw std::runtime_error("boom");
               }),
               std::runtime_error);
  setenv("FRACPLATE_THREADS", "1", 1);
  EXPECT_EQ(thread_count(), 1u);
  setenv("FRACPLATE_THREADS", "3", 1);
  EXPECT_EQ(thread_count(), 3u);
  unsetenv("FRACPLATE_THREADS");
}

TEST(Quadrature, GaussLegendreExactness) {
  const auto r = gauss_legendre(10, 0.0, 2.0);
  double s = 0.0;
  for (std::size_t i = 0; i < 10; ++i) s += r.weights[i] * std::pow(r.nodes[i], 19);
  EXPECT_NEAR(s, std::pow(2.0, 20) / 20.0, 1e-9);
  const auto u = gauss_legendre(64);
  double c = 0.0;
  for (std::size_t i = 0; i < 64; ++i) c += u.weights[i] * std::cos(u.nodes[i]);
  EXPECT_NEAR(c, 2 * std::sin(1.0), 1e-15);
}
