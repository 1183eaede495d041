#include "fracplate/spectral_domain.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <numbers>
#include <sstream>

#include "fracplate/errors.hpp"
#include "fracplate/quadrature.hpp"
#include "fracplate/report.hpp"

namespace fracplate {

namespace {

constexpr double kPi = std::numbers::pi;

double parse_number(std::string_view s, std::string_view whole) {
  double v = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw PreconditionError("malformed length '" + std::string(whole) + "'");
  return v;
}

// Accepts "3.5", "pi", "2pi", "2*pi", "pi/2", "3pi/4" and the Unicode pi sign.
double parse_length(std::string_view text) {
  std::string s(text);
  for (std::size_t pos; (pos = s.find("\xCF\x80")) != std::string::npos;) s.replace(pos, 2, "pi");
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  const auto pi_pos = s.find("pi");
  if (pi_pos == std::string::npos) return parse_number(s, text);
  std::string_view sv(s);
  std::string_view coef = sv.substr(0, pi_pos);
  std::string_view rest = sv.substr(pi_pos + 2);
  if (!coef.empty() && coef.back() == '*') coef.remove_suffix(1);
  double value = kPi * (coef.empty() ? 1.0 : parse_number(coef, text));
  if (!rest.empty()) {
    if (rest.front() != '/') throw PreconditionError("malformed length '" + std::string(text) + "'");
    value /= parse_number(rest.substr(1), text);
  }
  return value;
}

void check_side(double v) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("domain side lengths must be positive and finite");
}

double boundary_tolerance(const Domain& d) { return 1e-12 * std::max(d.side(0), d.dimension() == 2 ? d.side(1) : 0.0); }

EigenMode build_mode(const Domain& d, int j, int k) {
  EigenMode m;
  if (d.kind() == Domain::Kind::Interval) {
    m.index = {j, 0};
    m.wavenumber = {static_cast<double>(j) * (kPi / d.side(0)), 0.0};
    m.mu = m.wavenumber[0] * m.wavenumber[0];
    m.norm_const = std::sqrt(2.0 / d.side(0));
  } else {
    m.index = {j, k};
    m.wavenumber = {static_cast<double>(j) * (kPi / d.side(0)), static_cast<double>(k) * (kPi / d.side(1))};
    m.mu = m.wavenumber[0] * m.wavenumber[0] + m.wavenumber[1] * m.wavenumber[1];
    m.norm_const = 2.0 / std::sqrt(d.side(0) * d.side(1));
  }
  m.lambda = m.mu * m.mu;
  return m;
}

bool mode_less(const EigenMode& a, const EigenMode& b) {
  if (a.lambda != b.lambda) return a.lambda < b.lambda;
  return a.index < b.index;
}

}  // namespace

Domain Domain::interval(double length) {
  check_side(length);
  return Domain(Kind::Interval, length, 0.0);
}

Domain Domain::rectangle(double a, double b) {
  check_side(a);
  check_side(b);
  return Domain(Kind::Rectangle, a, b);
}

Domain Domain::parse(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw PreconditionError("domain spec must look like interval:L or rectangle:a,b (got '" + std::string(spec) + "')");
  }
  const std::string_view kind = spec.substr(0, colon);
  const std::string_view args = spec.substr(colon + 1);
  if (kind == "interval") return interval(parse_length(args));
  if (kind == "rectangle" || kind == "rect") {
    const auto comma = args.find(',');
    if (comma == std::string_view::npos) throw PreconditionError("rectangle spec needs two sides: rectangle:a,b");
    return rectangle(parse_length(args.substr(0, comma)), parse_length(args.substr(comma + 1)));
  }
  if (kind == "square") {
    const double a = parse_length(args);
    return rectangle(a, a);
  }
  throw PreconditionError("unknown domain kind '" + std::string(kind) + "'");
}

double Domain::measure() const noexcept { return kind_ == Kind::Interval ? sides_[0] : sides_[0] * sides_[1]; }

bool Domain::contains(const Point& x) const noexcept {
  const double tol = boundary_tolerance(*this);
  for (int axis = 0; axis < dimension(); ++axis) {
    const double v = x[static_cast<std::size_t>(axis)];
    if (!(v >= -tol && v <= side(axis) + tol)) return false;
  }
  return true;
}

std::string Domain::to_string() const {
  if (kind_ == Kind::Interval) return "interval:" + format_double(sides_[0]);
  return "rectangle:" + format_double(sides_[0]) + "," + format_double(sides_[1]);
}

std::string EigenMode::label() const {
  if (index[1] == 0) return std::to_string(index[0]);
  return "(" + std::to_string(index[0]) + "," + std::to_string(index[1]) + ")";
}

EigenMode make_mode(const Domain& d, int j, int k) {
  if (j < 1 || (d.kind() == Domain::Kind::Rectangle && k < 1)) throw PreconditionError("mode indices start at 1");
  return build_mode(d, j, d.kind() == Domain::Kind::Interval ? 0 : k);
}

std::vector<EigenMode> eigenmodes(const Domain& d, std::size_t count) {
  if (count == 0) throw PreconditionError("at least one mode is required");
  std::vector<EigenMode> modes;
  if (d.kind() == Domain::Kind::Interval) {
    modes.reserve(count);
    for (std::size_t n = 1; n <= count; ++n) modes.push_back(build_mode(d, static_cast<int>(n), 0));
    return modes;
  }
  // Any of the first `count` modes has j, k <= count, so this candidate set suffices;
  // it is trimmed per row once mu exceeds the count-th smallest row-1 value.
  const int limit = static_cast<int>(count);
  std::vector<EigenMode> first_column;
  for (int j = 1; j <= limit; ++j) first_column.push_back(build_mode(d, j, 1));
  std::vector<EigenMode> first_row;
  for (int k = 1; k <= limit; ++k) first_row.push_back(build_mode(d, 1, k));
  const double bound = std::min(first_column.back().lambda, first_row.back().lambda);
  for (int j = 1; j <= limit; ++j) {
    for (int k = 1; k <= limit; ++k) {
      EigenMode m = build_mode(d, j, k);
      if (m.lambda > bound) break;
      modes.push_back(m);
    }
  }
  std::sort(modes.begin(), modes.end(), mode_less);
  modes.resize(std::min(modes.size(), count));
  return modes;
}

ModeValue eval_mode(const EigenMode& m, const Domain& d, const Point& x) {
  if (!d.contains(x)) throw DomainError("point lies outside the domain");
  ModeValue out;
  const double kx = m.wavenumber[0];
  const double sx = std::sin(kx * x[0]);
  const double cx = std::cos(kx * x[0]);
  if (d.kind() == Domain::Kind::Interval) {
    out.value = m.norm_const * sx;
    out.gradient = {m.norm_const * kx * cx, 0.0};
  } else {
    const double ky = m.wavenumber[1];
    const double sy = std::sin(ky * x[1]);
    const double cy = std::cos(ky * x[1]);
    out.value = m.norm_const * sx * sy;
    out.gradient = {m.norm_const * kx * cx * sy, m.norm_const * ky * sx * cy};
  }
  out.laplacian = -m.mu * out.value;
  return out;
}

Point outward_normal(const Domain& d, const Point& s) {
  const double tol = boundary_tolerance(d);
  if (d.kind() == Domain::Kind::Interval) {
    if (std::fabs(s[0]) <= tol) return {-1.0, 0.0};
    if (std::fabs(s[0] - d.side(0)) <= tol) return {1.0, 0.0};
    throw PreconditionError("point is not an endpoint of the interval");
  }
  const bool left = std::fabs(s[0]) <= tol;
  const bool right = std::fabs(s[0] - d.side(0)) <= tol;
  const bool bottom = std::fabs(s[1]) <= tol;
  const bool top = std::fabs(s[1] - d.side(1)) <= tol;
  const bool inside_x = s[0] >= -tol && s[0] <= d.side(0) + tol;
  const bool inside_y = s[1] >= -tol && s[1] <= d.side(1) + tol;
  const bool on_vertical = (left || right) && inside_y;
  const bool on_horizontal = (bottom || top) && inside_x;
  if (on_vertical && on_horizontal) return {0.0, 0.0};
  if (on_vertical) return {left ? -1.0 : 1.0, 0.0};
  if (on_horizontal) return {0.0, bottom ? -1.0 : 1.0};
  throw PreconditionError("point is not on the rectangle boundary");
}

NormalDerivative normal_derivative_on_boundary(const EigenMode& m, const Domain& d, const Point& s) {
  const Point nu = outward_normal(d, s);
  NormalDerivative out;
  if (nu[0] == 0.0 && nu[1] == 0.0) {
    out.corner = true;
    return out;
  }
  // Snap to the exact boundary coordinate so the sine factor across the edge is exactly 1 or -1.
  Point p = s;
  if (nu[0] != 0.0) p[0] = nu[0] < 0.0 ? 0.0 : d.side(0);
  if (nu[1] != 0.0) p[1] = nu[1] < 0.0 ? 0.0 : d.side(1);
  const ModeValue v = eval_mode(m, d, p);
  out.value = v.gradient[0] * nu[0] + v.gradient[1] * nu[1];
  return out;
}

std::vector<BoundaryNode> boundary_quadrature(const Domain& d, int max_index) {
  if (d.kind() == Domain::Kind::Interval) {
    return {BoundaryNode{{0.0, 0.0}, {-1.0, 0.0}, 1.0}, BoundaryNode{{d.side(0), 0.0}, {1.0, 0.0}, 1.0}};
  }
  const std::size_t order = static_cast<std::size_t>(4 * std::max(max_index, 1) + 16);
  std::vector<BoundaryNode> nodes;
  nodes.reserve(4 * order);
  const double a = d.side(0);
  const double b = d.side(1);
  const GaussLegendreRule rx = gauss_legendre(order, 0.0, a);
  const GaussLegendreRule ry = gauss_legendre(order, 0.0, b);
  for (std::size_t i = 0; i < order; ++i) nodes.push_back({{rx.nodes[i], 0.0}, {0.0, -1.0}, rx.weights[i]});
  for (std::size_t i = 0; i < order; ++i) nodes.push_back({{a, ry.nodes[i]}, {1.0, 0.0}, ry.weights[i]});
  for (std::size_t i = 0; i < order; ++i) nodes.push_back({{rx.nodes[i], b}, {0.0, 1.0}, rx.weights[i]});
  for (std::size_t i = 0; i < order; ++i) nodes.push_back({{0.0, ry.nodes[i]}, {-1.0, 0.0}, ry.weights[i]});
  return nodes;
}

std::vector<VolumeNode> volume_quadrature(const Domain& d, std::size_t order) {
  if (order == 0) throw PreconditionError("quadrature order must be positive");
  std::vector<VolumeNode> nodes;
  const GaussLegendreRule rx = gauss_legendre(order, 0.0, d.side(0));
  if (d.kind() == Domain::Kind::Interval) {
    nodes.reserve(order);
    for (std::size_t i = 0; i < order; ++i) nodes.push_back({{rx.nodes[i], 0.0}, rx.weights[i]});
    return nodes;
  }
  const GaussLegendreRule ry = gauss_legendre(order, 0.0, d.side(1));
  nodes.reserve(order * order);
  for (std::size_t i = 0; i < order; ++i) {
    for (std::size_t j = 0; j < order; ++j) {
      nodes.push_back({{rx.nodes[i], ry.nodes[j]}, rx.weights[i] * ry.weights[j]});
    }
  }
  return nodes;
}

std::size_t recommended_quad_order(std::span<const EigenMode> modes) {
  int top = 1;
  for (const auto& m : modes) top = std::max({top, m.index[0], m.index[1]});
  return static_cast<std::size_t>(4 * top + 16);
}

void SpectralCoefficients::validate() const {
  if (modes.size() != values.size()) throw PreconditionError("coefficient and mode counts differ");
}

SpectralCoefficients zero_coefficients(std::span<const EigenMode> modes) {
  SpectralCoefficients c;
  c.modes.assign(modes.begin(), modes.end());
  c.values.assign(modes.size(), 0.0);
  return c;
}

SpectralCoefficients coefficients_from_values(const Domain& d, std::vector<double> values) {
  if (values.empty()) throw PreconditionError("coefficient list is empty");
  SpectralCoefficients c;
  c.modes = eigenmodes(d, values.size());
  c.values = std::move(values);
  return c;
}

SpectralCoefficients project(const std::function<double(const Point&)>& f, const Domain& d,
                             std::span<const EigenMode> modes, std::size_t quad_order) {
  int top = 1;
  for (const auto& m : modes) top = std::max({top, m.index[0], m.index[1]});
  if (quad_order < static_cast<std::size_t>(2 * top)) {
    throw PreconditionError("quad_order " + std::to_string(quad_order) + " cannot resolve mode index " +
                            std::to_string(top) + "; use at least " + std::to_string(2 * top) + " (" +
                            std::to_string(4 * top + 16) + " recommended)");
  }
  const auto nodes = volume_quadrature(d, quad_order);
  std::vector<double> fv(nodes.size());
  for (std::size_t q = 0; q < nodes.size(); ++q) fv[q] = f(nodes[q].point) * nodes[q].weight;
  SpectralCoefficients c = zero_coefficients(modes);
  for (std::size_t n = 0; n < modes.size(); ++n) {
    double acc = 0.0;
    for (std::size_t q = 0; q < nodes.size(); ++q) acc += fv[q] * eval_mode(modes[n], d, nodes[q].point).value;
    c.values[n] = acc;
  }
  return c;
}

double reconstruct(const SpectralCoefficients& c, const Domain& d, const Point& x) {
  c.validate();
  double acc = 0.0;
  for (std::size_t n = 0; n < c.size(); ++n) {
    if (c.values[n] != 0.0) acc += c.values[n] * eval_mode(c.modes[n], d, x).value;
  }
  return acc;
}

double lambda_power(const EigenMode& m, double p) {
  if (p == 0.0) return 1.0;
  if (p == 0.5) return m.mu;
  if (p == -0.5) return 1.0 / m.mu;
  if (p == 1.0) return m.lambda;
  if (p == -1.0) return 1.0 / m.lambda;
  if (p == 1.5) return m.lambda * m.mu;
  if (p == -1.5) return 1.0 / (m.lambda * m.mu);
  if (p == 2.0) return m.lambda * m.lambda;
  if (p == -2.0) return 1.0 / (m.lambda * m.lambda);
  if (p == 0.25) return std::sqrt(m.mu);
  if (p == -0.25) return 1.0 / std::sqrt(m.mu);
  return std::exp(p * std::log(m.lambda));
}

double fractional_norm(const SpectralCoefficients& c, double theta) {
  c.validate();
  double acc = 0.0;
  for (std::size_t n = 0; n < c.size(); ++n) {
    const double w = lambda_power(c.modes[n], theta) * c.values[n];
    acc += w * w;
  }
  return std::sqrt(acc);
}

SpectralCoefficients apply_power(const SpectralCoefficients& c, double theta) {
  c.validate();
  SpectralCoefficients out = c;
  for (std::size_t n = 0; n < c.size(); ++n) out.values[n] = c.values[n] * lambda_power(c.modes[n], theta);
  if (out.interpretation == SpectralCoefficients::Interpretation::Functional) out.theta += theta;
  return out;
}

}  // namespace fracplate
