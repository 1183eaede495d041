#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fracplate {

/// Point in the closure of the domain; the second coordinate is ignored on intervals.
using Point = std::array<double, 2>;

/// Interval [0, L] or rectangle [0, a] x [0, b] with hinged boundary conditions.
class Domain {
 public:
  enum class Kind { Interval, Rectangle };

  static Domain interval(double length);
  static Domain rectangle(double a, double b);
  /// Parses "interval:L" or "rectangle:a,b"; lengths may be numbers, "pi",
  /// or simple multiples such as "2pi" and "pi/2".
  static Domain parse(std::string_view spec);

  Kind kind() const noexcept { return kind_; }
  int dimension() const noexcept { return kind_ == Kind::Interval ? 1 : 2; }
  double side(int axis) const noexcept { return sides_[static_cast<std::size_t>(axis)]; }
  double measure() const noexcept;
  bool contains(const Point& x) const noexcept;
  std::string to_string() const;

 private:
  Domain(Kind kind, double a, double b) : kind_(kind), sides_{a, b} {}

  Kind kind_;
  std::array<double, 2> sides_;
};

/// One eigenpair of the hinged biharmonic operator.
///
/// The eigenfunction is norm_const * prod_axis sin(index[axis] pi x_axis / side);
/// on intervals index[1] is 0 and the second factor is absent.
struct EigenMode {
  std::array<int, 2> index{1, 0};
  double mu = 0.0;      ///< Dirichlet Laplacian eigenvalue
  double lambda = 0.0;  ///< mu * mu
  double norm_const = 0.0;
  std::array<double, 2> wavenumber{0.0, 0.0};  ///< index * pi / side per axis

  std::string label() const;
};

/// First `count` modes by ascending lambda, ties broken by the multi-index.
std::vector<EigenMode> eigenmodes(const Domain& d, std::size_t count);

/// The mode with the given multi-index (k ignored on intervals).
EigenMode make_mode(const Domain& d, int j, int k = 0);

struct ModeValue {
  double value = 0.0;
  Point gradient{0.0, 0.0};
  double laplacian = 0.0;
};

/// Value, gradient and Laplacian of e_n at x. Throws DomainError outside the closure.
ModeValue eval_mode(const EigenMode& m, const Domain& d, const Point& x);

struct NormalDerivative {
  double value = 0.0;
  bool corner = false;  ///< rectangle corner: value is 0 by convention
};

/// d e_n / d nu at a boundary point. Throws PreconditionError off the boundary.
NormalDerivative normal_derivative_on_boundary(const EigenMode& m, const Domain& d, const Point& s);

/// Outward unit normal at a boundary point (zero vector at rectangle corners).
Point outward_normal(const Domain& d, const Point& s);

struct BoundaryNode {
  Point point{0.0, 0.0};
  Point normal{0.0, 0.0};
  double weight = 1.0;  ///< arclength weight; 1 at interval endpoints
};

/// Quadrature on the boundary: both endpoints of an interval, or a
/// Gauss-Legendre rule on each rectangle edge with at least four points per
/// half-wave of the highest mode index along that edge.
std::vector<BoundaryNode> boundary_quadrature(const Domain& d, int max_index);

struct VolumeNode {
  Point point{0.0, 0.0};
  double weight = 0.0;
};

/// Tensor Gauss-Legendre rule with `order` points per axis.
std::vector<VolumeNode> volume_quadrature(const Domain& d, std::size_t order);

/// Smallest tensor order resolving the given modes with four points per half-wave.
std::size_t recommended_quad_order(std::span<const EigenMode> modes);

/// Coefficients <u, e_n>, or duality pairings for a functional in D(A^{-theta}).
struct SpectralCoefficients {
  enum class Interpretation { Function, Functional };

  std::vector<EigenMode> modes;
  std::vector<double> values;
  Interpretation interpretation = Interpretation::Function;
  double theta = 0.0;  ///< order of the dual space for functionals

  std::size_t size() const noexcept { return values.size(); }
  /// Throws PreconditionError when modes and values differ in length.
  void validate() const;
};

/// Zero coefficients on the given modes.
SpectralCoefficients zero_coefficients(std::span<const EigenMode> modes);

/// Coefficients from explicit values on the first values.size() modes of d.
SpectralCoefficients coefficients_from_values(const Domain& d, std::vector<double> values);

/// <f, e_n> by tensor Gauss-Legendre quadrature. Refuses quad_order below two
/// points per half-wave of the highest requested mode.
SpectralCoefficients project(const std::function<double(const Point&)>& f, const Domain& d,
                             std::span<const EigenMode> modes, std::size_t quad_order);

/// sum_n c_n e_n(x).
double reconstruct(const SpectralCoefficients& c, const Domain& d, const Point& x);

/// lambda^p. Exact for the half-integer exponents used by the norm scale
/// (sqrt and products of lambda = mu^2), exp(p log lambda) otherwise.
double lambda_power(const EigenMode& m, double p);

/// (sum_n lambda_n^{2 theta} c_n^2)^{1/2}.
double fractional_norm(const SpectralCoefficients& c, double theta);

/// Multiplies coefficient n by lambda_n^theta.
SpectralCoefficients apply_power(const SpectralCoefficients& c, double theta);

}  // namespace fracplate
