#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fracplate/fractional_calculus.hpp"
#include "fracplate/report.hpp"
#include "fracplate/solver.hpp"
#include "fracplate/spectral_domain.hpp"

namespace fracplate {

/// Polynomial vector field with h = nu on the boundary:
/// (2x - L)/L on an interval, ((2x - a)/a, (2y - b)/b) on a rectangle.
/// On the rectangle h . nu = 1 holds on every edge.
class MultiplierField {
 public:
  explicit MultiplierField(Domain d) : domain_(std::move(d)) {}

  const Domain& domain() const noexcept { return domain_; }
  Point value(const Point& x) const;
  /// J[i][j] = d_i h_j.
  std::array<std::array<double, 2>, 2> jacobian(const Point& x) const;
  double divergence(const Point& x) const;

  /// max |h . nu - 1| over the boundary quadrature nodes.
  double boundary_defect(int max_index) const;

 private:
  Domain domain_;
};

enum class TraceKind {
  U,            ///< d_nu u
  DeltaLifted,  ///< d_nu Delta w with w = A^{-1/2} u
};

/// Boundary samples of a normal derivative at every grid node, laid out like boundary_quadrature.
struct TraceSeries {
  TimeSeries series;
  std::vector<BoundaryNode> nodes;
};

TraceSeries normal_trace(const SpectralSolution& s, const TimeGrid& grid, TraceKind which);

/// Same, from coefficient series (one component per mode) on the given modes.
TraceSeries normal_trace(const Domain& d, std::span<const EigenMode> modes, const TimeSeries& coefficients,
                         TraceKind which);

/// int_0^T int_{boundary} |trace|^2 dsigma dt (boundary quadrature, then trapezoid in time).
double trace_energy(const TraceSeries& tr);

/// The four integrals of the static multiplier identity for w = sum_n w_n e_n:
///   lhs = 2 int Delta^2 w (h . grad Delta w)
///   boundary - 2 jacobian + divergence = rhs with
///   boundary   = int_{dOmega} h . nu |d_nu Delta w|^2
///   jacobian   = sum_ij int d_i h_j d_i Delta w d_j Delta w
///   divergence = int div h |grad Delta w|^2
struct StaticIdentity {
  double lhs = 0.0;
  double boundary = 0.0;
  double jacobian = 0.0;
  double divergence = 0.0;
  double residual = 0.0;  ///< |lhs - rhs|
  double relative = 0.0;  ///< residual / max(|lhs|, |boundary|, tiny)
};

/// quad_order 0 picks recommended_quad_order for the modes of w.
StaticIdentity static_multiplier_identity(const SpectralCoefficients& w, const MultiplierField& h,
                                          std::size_t quad_order = 0);
double static_multiplier_identity_residual(const SpectralCoefficients& w, const MultiplierField& h,
                                           std::size_t quad_order = 0);

/// Terms of the R-L filtered multiplier identity at a grid node (or between two nodes):
///   boundary = int_{dOmega} h . nu |I^beta(d_nu Delta u)|^2
///   rhs = -2 int I^beta(d^alpha_t u) h . I^beta(grad Delta u)
///         + 2 sum_ij int d_i h_j I^beta(d_i Delta u) I^beta(d_j Delta u)
///         - int div h |I^beta(grad Delta u)|^2
/// The boundary side uses the closed-form I^beta of each Mittag-Leffler
/// kernel; the interior side uses the discrete R-L integral of the sampled
/// coefficients, with I^beta(d^alpha_t u) = -lambda_n I^beta c_n from the
/// equation. Their mismatch therefore measures the time discretization.
struct FilteredIdentity {
  double boundary = 0.0;
  double equation_term = 0.0;
  double jacobian_term = 0.0;
  double divergence_term = 0.0;
  double residual = 0.0;            ///< |boundary - rhs|
  double relative = 0.0;            ///< residual / boundary (0 when both vanish)
  double algebraic_residual = 0.0;  ///< same identity with the discrete boundary side; round-off only
};

FilteredIdentity filtered_identity(const SpectralSolution& s, const MultiplierField& h, double beta,
                                   const TimeGrid& grid, std::size_t t_index);
FilteredIdentity filtered_identity2(const SpectralSolution& s, const MultiplierField& h, double beta,
                                    const TimeGrid& grid, std::size_t t_index, std::size_t tau_index);
double filtered_identity_residual(const SpectralSolution& s, const MultiplierField& h, double beta,
                                  const TimeGrid& grid, std::size_t t_index);
double filtered_identity2_residual(const SpectralSolution& s, const MultiplierField& h, double beta,
                                   const TimeGrid& grid, std::size_t t_index, std::size_t tau_index);

/// Data families for the direct inequality probe.
///   single:u0     u0 = e_n for every retained mode n
///   single:u1     u1 = e_n for every retained mode n
///   decay:P       one random member
///   worst:K:P     K random members
/// Random members draw xi, eta ~ N(0, 1) from the counter-based generator
/// (stream = member, k = 2(n-1) for xi and 2(n-1)+1 for eta) and set
///   u0_n = xi n^{-P} mu_n^{-1/2},   u1_n = eta n^{-P} mu_n^{1/2},
/// so the energy norm ||u0||^2_{H^1_0} + ||u1||^2_{H^-1} is sum (xi^2 + eta^2) n^{-2P}.
struct FamilySpec {
  enum class Kind { SingleU0, SingleU1, Decay, WorstOf };
  Kind kind = Kind::Decay;
  double decay = 1.5;
  std::size_t members = 1;
  std::uint64_t seed = 42;

  static FamilySpec parse(std::string_view text, std::uint64_t seed);
  std::string to_string() const;
};

/// Member m of a family restricted to the first N modes (u0, u1 coefficient lists).
std::pair<std::vector<double>, std::vector<double>> family_member(const FamilySpec& f, std::span<const EigenMode> modes,
                                                                  std::size_t member);

/// R(N) = max over the family of trace_energy / (||u0||^2_{H^1_0} + ||u1||^2_{H^-1})
/// for every N in the schedule, plus growth factors R(N_{k+1}) / R(N_k).
/// grid_nodes sets the graded time grid used for the energy integrals.
VerificationReport direct_inequality_probe(const Domain& d, double alpha, double horizon, const FamilySpec& family,
                                           std::span<const std::size_t> n_schedule, std::size_t grid_nodes = 1024,
                                           double growth_bound = 1.25);

}  // namespace fracplate
