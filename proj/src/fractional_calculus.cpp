#include "fracplate/fractional_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fracplate/errors.hpp"
#include "fracplate/parallel.hpp"
#include "fracplate/special_functions.hpp"

namespace fracplate {

TimeSeries::TimeSeries(TimeGrid grid, std::vector<double> scalar_values)
    : TimeSeries(std::move(grid), 1, std::move(scalar_values), ValueSpace::Scalar) {}

TimeSeries::TimeSeries(TimeGrid grid, std::size_t width, std::vector<double> data, ValueSpace space)
    : grid_(std::move(grid)), width_(width), space_(space), data_(std::move(data)) {
  if (width_ == 0) throw PreconditionError("time series values need at least one component");
  if (data_.size() != grid_.size() * width_) throw PreconditionError("time series needs one value per grid node");
}

TimeSeries TimeSeries::sample(const TimeGrid& grid, const std::function<double(double)>& f) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = f(grid[i]);
  return TimeSeries(grid, std::move(v));
}

std::vector<double> TimeSeries::component(std::size_t k) const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = data_[i * width_ + k];
  return out;
}

double euclidean_norm(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

namespace {

void check_beta_open(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("beta must lie in (0, 1)");
}

// 1 - (1 - x)^p without cancellation.
double one_minus_power(double p, double x) { return -std::expm1(p * std::log1p(-x)); }

// Moments of the product trapezoid on one subinterval, scaled so that
// weight = b^{beta-1} h * moment. With u = (t_k - s)/b in [0, x], x = h/b:
//   next: int_0^x u (1-u)^{beta-1} du / x^2
//   prev: int_0^x (x-u) (1-u)^{beta-1} du / x^2
struct Moments {
  double prev;
  double next;
};

Moments interval_moments(double beta, double x) {
  if (x > 0.1) {
    const double g0 = one_minus_power(beta, x) / beta;
    const double g1 = one_minus_power(beta + 1.0, x) / (beta + 1.0);
    const double x2 = x * x;
    return {(g1 - (1.0 - x) * g0) / x2, (g0 - g1) / x2};
  }
  double c = 1.0;
  double xm = 1.0;
  double prev = 0.0;
  double next = 0.0;
  for (int m = 0; m < 200; ++m) {
    const double term = c * xm;
    next += term / (m + 2.0);
    prev += term / ((m + 1.0) * (m + 2.0));
    if (term < 1e-18 * next) break;
    c *= (m + 1.0 - beta) / (m + 1.0);
    xm *= x;
  }
  return {prev, next};
}

// (x^e - y^e)/e, tending to log(x/y) as e -> 0.
double power_difference(double x, double y, double e) {
  const double l = std::log(x / y);
  if (e == 0.0) return l;
  return std::pow(y, e) * std::expm1(e * l) / e;
}

// int_{a2}^{b2} int_{a1}^{b1} (t - s)^{-1-2 beta} ds dt for b1 < a2.
double cell_kernel(double a1, double b1, double a2, double b2, double beta) {
  const double gap = a2 - b1;
  const double h1 = b1 - a1;
  const double h2 = b2 - a2;
  if (std::max(h1, h2) >= 0.02 * gap) {
    const double e = 1.0 - 2.0 * beta;
    return (power_difference(b2 - b1, a2 - b1, e) - power_difference(b2 - a1, a2 - a1, e)) / (2.0 * beta);
  }
  // Far cells: the kernel is smooth, two-point Gauss per axis.
  const double d = 0.5 / std::sqrt(3.0);
  const double s[2] = {a1 + h1 * (0.5 - d), a1 + h1 * (0.5 + d)};
  const double t[2] = {a2 + h2 * (0.5 - d), a2 + h2 * (0.5 + d)};
  double acc = 0.0;
  for (double ti : t) {
    for (double si : s) acc += std::pow(ti - si, -1.0 - 2.0 * beta);
  }
  return acc * 0.25 * h1 * h2;
}

// Node used to read off the coefficient of the leading singular term: late
// enough for rounding, early enough that the next term is negligible.
std::size_t fit_node(const TimeGrid& grid, double alpha) {
  const double t_fit = grid.horizon() * std::pow(std::numeric_limits<double>::epsilon(), 1.0 / (1.0 + alpha));
  std::size_t j = 1;
  while (j + 2 < grid.size() && grid[j] < t_fit) ++j;
  return j;
}

}  // namespace

std::vector<double> rl_weights(std::span<const double> nodes, std::size_t k, double beta) {
  std::vector<double> w(k + 1, 0.0);
  if (k == 0) return w;
  const double scale = rgamma(beta);
  const double tk = nodes[k];
  for (std::size_t i = 0; i < k; ++i) {
    const double b = tk - nodes[i];
    const double h = nodes[i + 1] - nodes[i];
    const Moments m = interval_moments(beta, h / b);
    const double f = (beta == 1.0 ? 1.0 : std::pow(b, beta - 1.0)) * h * scale;
    w[i] += f * m.prev;
    w[i + 1] += f * m.next;
  }
  return w;
}

TimeSeries rl_integral(const TimeSeries& f, double beta) {
  if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("beta must lie in (0, 1]");
  const std::size_t n = f.size();
  const std::size_t width = f.width();
  std::vector<double> out(n * width, 0.0);
  const auto nodes = f.grid().nodes();
  parallel_for(n, [&](std::size_t k) {
    if (k == 0) return;
    const std::vector<double> w = rl_weights(nodes, k, beta);
    double* dst = out.data() + k * width;
    for (std::size_t i = 0; i <= k; ++i) {
      const auto src = f.at(i);
      for (std::size_t c = 0; c < width; ++c) dst[c] += w[i] * src[c];
    }
  });
  return TimeSeries(f.grid(), width, std::move(out), f.space());
}

std::vector<double> fd_weights(double x0, std::span<const double> stencil, int m) {
  const std::size_t n = stencil.size();
  if (n == 0 || m < 0 || static_cast<std::size_t>(m) >= n) throw PreconditionError("stencil too small for derivative order");
  const auto mm = static_cast<std::size_t>(m);
  std::vector<std::vector<double>> c(n, std::vector<double>(mm + 1, 0.0));
  double c1 = 1.0;
  double c4 = stencil[0] - x0;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t mn = std::min(i, mm);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = stencil[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = stencil[i] - stencil[j];
      c2 *= c3;
      if (j == i - 1) {
        for (std::size_t k = mn; k >= 1; --k) {
          c[i][k] = c1 * (static_cast<double>(k) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        }
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (std::size_t k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - static_cast<double>(k) * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = c[i][mm];
  return w;
}

TimeSeries fd_derivative(const TimeSeries& f) {
  const std::size_t n = f.size();
  if (n < 5) throw PreconditionError("five-point differences need at least five nodes");
  const std::size_t width = f.width();
  const auto nodes = f.grid().nodes();
  std::vector<double> out(n * width, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t s = std::min(k < 2 ? 0 : k - 2, n - 5);
    const std::vector<double> w = fd_weights(nodes[k], nodes.subspan(s, 5), 1);
    for (std::size_t j = 0; j < 5; ++j) {
      const auto src = f.at(s + j);
      for (std::size_t c = 0; c < width; ++c) out[k * width + c] += w[j] * src[c];
    }
  }
  return TimeSeries(f.grid(), width, std::move(out), f.space());
}

TimeSeries caputo_derivative(const TimeSeries& f, double alpha, std::span<const double> f1_0) {
  if (!(alpha > 1.0 && alpha < 2.0)) throw DomainError("Caputo order must lie in (1, 2)");
  if (f.size() < 7) throw PreconditionError("the Caputo derivative needs at least seven nodes");
  if (f1_0.size() != f.width()) throw PreconditionError("initial slope must have one entry per component");
  const std::size_t n = f.size();
  const std::size_t width = f.width();
  const auto t = f.grid().nodes();
  const std::size_t j = fit_node(f.grid(), alpha);
  std::vector<double> tpow(n);
  for (std::size_t i = 0; i < n; ++i) tpow[i] = std::pow(t[i], alpha);
  std::vector<double> lead(width);
  std::vector<double> rest(n * width);
  for (std::size_t c = 0; c < width; ++c) {
    const double f0 = f.at(0)[c];
    lead[c] = (f.at(j)[c] - f0 - f1_0[c] * t[j]) / tpow[j];
    for (std::size_t i = 0; i < n; ++i) rest[i * width + c] = f.at(i)[c] - f0 - lead[c] * tpow[i];
  }
  TimeSeries g = fd_derivative(TimeSeries(f.grid(), width, std::move(rest), f.space()));
  for (std::size_t i = 0; i < n; ++i) {
    auto v = g.at(i);
    for (std::size_t c = 0; c < width; ++c) v[c] = i == 0 ? 0.0 : v[c] - f1_0[c];
  }
  TimeSeries out = fd_derivative(rl_integral(g, 2.0 - alpha));
  const double lead_derivative = gamma_fn(alpha + 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto v = out.at(i);
    for (std::size_t c = 0; c < width; ++c) v[c] += lead[c] * lead_derivative;
  }
  return out;
}

TimeSeries caputo_from_rate(const TimeSeries& rate, double alpha, std::span<const double> f1_0) {
  if (!(alpha > 1.0 && alpha < 2.0)) throw DomainError("Caputo order must lie in (1, 2)");
  if (rate.size() < 7) throw PreconditionError("the Caputo derivative needs at least seven nodes");
  if (f1_0.size() != rate.width()) throw PreconditionError("initial slope must have one entry per component");
  const std::size_t n = rate.size();
  const std::size_t width = rate.width();
  const auto t = rate.grid().nodes();
  const std::size_t j = fit_node(rate.grid(), alpha);
  const double tj = std::pow(t[j], alpha - 1.0);
  std::vector<double> lead(width);
  std::vector<double> rest(n * width);
  for (std::size_t c = 0; c < width; ++c) {
    lead[c] = (rate.at(j)[c] - f1_0[c]) / tj;
    rest[c] = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
      rest[i * width + c] = rate.at(i)[c] - f1_0[c] - lead[c] * std::pow(t[i], alpha - 1.0);
    }
  }
  TimeSeries out = fd_derivative(rl_integral(TimeSeries(rate.grid(), width, std::move(rest), rate.space()), 2.0 - alpha));
  const double lead_derivative = gamma_fn(alpha);
  for (std::size_t i = 0; i < n; ++i) {
    auto v = out.at(i);
    for (std::size_t c = 0; c < width; ++c) v[c] += lead[c] * lead_derivative;
  }
  return out;
}

TimeSeries caputo_derivative(const TimeSeries& f, double alpha, double f1_0) {
  const double slope[1] = {f1_0};
  if (f.width() != 1) throw PreconditionError("scalar initial slope given for a vector series");
  return caputo_derivative(f, alpha, slope);
}

double gagliardo_seminorm(const TimeSeries& f, double beta, const NormCallback& norm) {
  check_beta_open(beta);
  const std::size_t cells = f.size() - 1;
  if (cells < 3) return 0.0;
  const std::size_t width = f.width();
  const auto t = f.grid().nodes();
  std::vector<double> mean(cells * width);
  for (std::size_t c = 0; c < cells; ++c) {
    const auto lo = f.at(c);
    const auto hi = f.at(c + 1);
    for (std::size_t k = 0; k < width; ++k) mean[c * width + k] = 0.5 * (lo[k] + hi[k]);
  }
  std::vector<double> row_sum(cells, 0.0);
  parallel_for(cells, [&](std::size_t c) {
    std::vector<double> diff(width);
    double acc = 0.0;
    for (std::size_t d = c + 2; d < cells; ++d) {
      double nrm;
      if (width == 1 && !norm) {
        nrm = mean[c] - mean[d];
      } else {
        for (std::size_t k = 0; k < width; ++k) diff[k] = mean[c * width + k] - mean[d * width + k];
        nrm = norm ? norm(diff) : euclidean_norm(diff);
      }
      if (nrm == 0.0) continue;
      acc += cell_kernel(t[c], t[c + 1], t[d], t[d + 1], beta) * nrm * nrm;
    }
    row_sum[c] = acc;
  });
  double total = 0.0;
  for (double r : row_sum) total += r;
  return std::sqrt(2.0 * total);
}

double gagliardo_seminorm(const TimeSeries& f, double beta) { return gagliardo_seminorm(f, beta, nullptr); }

double l2_time_norm(const TimeSeries& f, const NormCallback& norm) {
  const auto t = f.grid().nodes();
  std::vector<double> sq(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double v = norm ? norm(f.at(i)) : euclidean_norm(f.at(i));
    sq[i] = v * v;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < f.size(); ++i) acc += 0.5 * (t[i + 1] - t[i]) * (sq[i] + sq[i + 1]);
  return std::sqrt(acc);
}

double l2_time_norm(const TimeSeries& f) { return l2_time_norm(f, nullptr); }

double hbeta_norm(const TimeSeries& f, double beta, const NormCallback& norm) {
  return l2_time_norm(f, norm) + gagliardo_seminorm(f, beta, norm);
}

double hbeta_norm(const TimeSeries& f, double beta) { return hbeta_norm(f, beta, nullptr); }

VerificationReport norm_equivalence_probe(double beta, std::span<const TimeSeries> family) {
  check_beta_open(beta);
  VerificationReport report;
  report.name = "norm_equivalence";
  report.inputs["beta"] = beta;
  report.inputs["members"] = static_cast<double>(family.size());
  report.columns = {"member", "ratio"};
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const double base = l2_time_norm(family[i]);
    if (base == 0.0) {
      report.notes.push_back("member " + std::to_string(i) + " has zero L2 norm and was skipped");
      continue;
    }
    const double r = hbeta_norm(rl_integral(family[i], beta), beta) / base;
    report.rows.push_back({static_cast<double>(i), r});
    lo = std::min(lo, r);
    hi = std::max(hi, r);
    ++used;
  }
  report.set_metric("members_used", static_cast<double>(used));
  if (used > 0) {
    report.set_metric("ratio_min", lo);
    report.set_metric("ratio_max", hi);
    report.set_metric("spread", hi / lo);
  }
  return report;
}

VerificationReport norm_equivalence_refinement(double beta, std::span<const std::function<double(double)>> family,
                                               const TimeGrid& grid) {
  auto sample_all = [&](const TimeGrid& g) {
    std::vector<TimeSeries> out;
    out.reserve(family.size());
    for (const auto& f : family) out.push_back(TimeSeries::sample(g, f));
    return out;
  };
  const auto coarse_family = sample_all(grid);
  const auto fine_family = sample_all(grid.refined());
  VerificationReport coarse = norm_equivalence_probe(beta, coarse_family);
  const VerificationReport fine = norm_equivalence_probe(beta, fine_family);
  coarse.inputs["nodes"] = static_cast<double>(grid.size());
  if (fine.metrics.count("spread") && coarse.metrics.count("spread")) {
    coarse.set_metric("spread_fine", fine.metric("spread"));
    coarse.set_metric("spread_change", std::fabs(fine.metric("spread") / coarse.metric("spread") - 1.0),
                      Tolerance::at_most(0.1));
  }
  return coarse;
}

}  // namespace fracplate
