#pragma once

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gupdirac/params.hpp"
#include "gupdirac/spectrum.hpp"

namespace gupdirac {

/// Momentum-space radial profile
///   f(p) = p^power (1 + beta p^2)^(-algebraic) 2F1(-n, hyp_b; hyp_c; beta p^2 / (1 + beta p^2))
/// in natural units (p in units of Mc, beta = 2 / rho*). The angular factor is exp(i angular theta).
struct RadialProfile {
  int n = 0;
  int m = 0;
  int component = 1;
  SolutionClass cls = SolutionClass::A;
  int angular = 0;
  double power = 0.0;
  double algebraic = 0.0;
  double hyp_b = 0.0;
  double hyp_c = 1.0;
  double beta = 0.0;

  [[nodiscard]] double value(double p) const;
  [[nodiscard]] double derivative(double p) const;
  /// g(p) = f(p) / p^power and its derivative; used for exact operator application at small p.
  [[nodiscard]] double envelope(double p) const;
  [[nodiscard]] double envelope_derivative(double p) const;
  /// f(p) ~ p^(-decay_exponent()) as p -> infinity.
  [[nodiscard]] double decay_exponent() const { return 2.0 * algebraic - power; }
};

/// Profile of the class selected by classify_solution.
[[nodiscard]] RadialProfile radial_profile(int n, int m, int component, const DimensionlessConfig& d);
/// Profile for an explicit class; throws InadmissibleError naming the violated predicate.
[[nodiscard]] RadialProfile radial_profile(int n, int m, int component, SolutionClass cls,
                                           const DimensionlessConfig& d);

/// The same solution written in the trigonometric variable q (p = tan q / sqrt(beta)):
///   phi(q) = s^A c^B 2F1(-n, n + A + B; A + 1/2; s^2),  s = sin q, c = cos q,
/// with (A, B) read from zeta and xi of the component tables.
struct TrigProfile {
  int n = 0;
  double A = 0.0;
  double B = 0.0;
  double beta = 0.0;

  [[nodiscard]] double value(double q) const;
  /// beta^(-A/2) p^(-1/2) phi(q(p)); equals RadialProfile::value(p).
  [[nodiscard]] double momentum_value(double p) const;
};

[[nodiscard]] TrigProfile trig_profile(int n, int m, int component, SolutionClass cls, const DimensionlessConfig& d);

/// Radial function paired with its angular index: psi(p, theta) = radial(p) exp(i angular theta).
struct AngularFunction {
  int angular = 0;
  std::function<double(double)> radial;
};

/// P+ (sign = +1) or P- (sign = -1) applied to scale * profile(p) exp(i profile.angular theta):
///   P+- = exp(+-i theta) [p -+ lambda (1 + beta p^2)(d/dp -+ angular / p)].
/// Derivatives are exact. Evaluating at p = 0 throws DomainError when the 1/p term diverges.
[[nodiscard]] AngularFunction apply_P(int sign, const RadialProfile& profile, double scale,
                                      const DimensionlessConfig& d);

enum class CoefficientSource { Printed, Rederived, None };

struct SpinorState {
  int n = 0;
  int m = 0;
  Branch branch = Branch::Positive;
  Family family = Family::I;
  int N = 0;
  double energy = 0.0; ///< E / Mc^2
  DimensionlessConfig params{};
  std::optional<RadialProfile> upper;
  std::optional<RadialProfile> lower;
  /// lower component = normalization * coefficient * lower profile
  double coefficient = 0.0;
  /// Closed-form relative coefficient before validation (NaN for single-component states).
  double printed_coefficient = 0.0;
  CoefficientSource coefficient_source = CoefficientSource::None;
  std::string note;
  double normalization = 1.0;

  [[nodiscard]] double epsilon_plus() const { return energy + 1.0; }
  [[nodiscard]] double epsilon_minus() const { return energy - 1.0; }
  [[nodiscard]] double upper_value(double p) const;
  [[nodiscard]] double lower_value(double p) const;
  [[nodiscard]] int upper_angular() const { return m; }
  [[nodiscard]] int lower_angular() const { return m + 1; }
};

struct QuadratureSpec {
  double p_max = 0.0;      ///< 0 selects 10 / sqrt(beta); a user value must leave a negligible tail
  double tolerance = 1e-10;
  unsigned max_depth = 18;
};

struct IntegralReport {
  double value = 0.0;
  double error_estimate = 0.0;
  double tail_estimate = 0.0; ///< contribution beyond p_max, included in value
  double p_max = 0.0;
};

struct SpinorOptions {
  bool normalize = true;
  QuadratureSpec quadrature{};
  int validation_points = 1000;
  double residual_tolerance = 1e-10;
};

/// Spinor (n, m) of the given branch. The closed-form relative coefficient is tried
/// first; if it fails the intertwining residual it is re-derived from P+ psi1 = eps+ psi2 and
/// the discrepancy recorded in `note`.
[[nodiscard]] SpinorState assemble_spinor(int n, int m, const DimensionlessConfig& d, Branch b,
                                          const SpinorOptions& opts = {});

/// Closed-form relative coefficient of the two components, natural units.
[[nodiscard]] std::optional<double> printed_coefficient(const SpinorLayout& layout, const DimensionlessConfig& d);

struct IntertwiningResidual {
  double plus = 0.0;  ///< ||P+ psi1 - eps+ psi2|| / ||eps+ psi2||
  double minus = 0.0; ///< ||P- psi2 - eps- psi1|| / ||eps- psi1||
  [[nodiscard]] double max() const { return plus > minus ? plus : minus; }
};

/// Residual of the off-diagonal eigenvalue relations on a `points`-point momentum grid.
/// Single-component states are measured relative to ||p psi||.
[[nodiscard]] IntertwiningResidual intertwining_residual(const SpinorState& s, int points = 1000);

/// Grid p_i = sqrt(u_i / (beta (1 - u_i))) with u_i = (i + 1/2) / points.
[[nodiscard]] std::vector<double> momentum_grid(double beta, int points);

/// Weight of the scalar product d^2p / (1 + beta p^2).
[[nodiscard]] double measure_weight(double beta, double p);

/// 2 pi sum_components int |psi|^2 p dp / (1 + beta p^2).
[[nodiscard]] IntegralReport norm_squared(const SpinorState& s, const QuadratureSpec& spec = {});

/// Scalar product of two spinors under the deformed measure; zero unless angular indices agree.
[[nodiscard]] IntegralReport overlap(const SpinorState& a, const SpinorState& b, const QuadratureSpec& spec = {});

/// 2 pi int f g p dp / (1 + beta p^2) for two component profiles with equal angular index.
[[nodiscard]] IntegralReport profile_overlap(const RadialProfile& f, const RadialProfile& g,
                                             const QuadratureSpec& spec = {});

/// Copy scaled to unit norm (C real positive).
[[nodiscard]] SpinorState normalized(SpinorState s, const QuadratureSpec& spec = {});

struct ProfileSample {
  double p = 0.0;
  std::complex<double> upper;
  std::complex<double> lower;
};

/// Spinor components at angle theta along the given momenta.
[[nodiscard]] std::vector<ProfileSample> sample_spinor(const SpinorState& s, const std::vector<double>& momenta,
                                                       double theta = 0.0);

// Cartesian representation x_i = i hbar (1 + beta p^2) d/dp_i, p_i = p_i.

struct MomentumFunction {
  std::function<std::complex<double>(double, double)> value;
  std::function<std::array<std::complex<double>, 2>(double, double)> gradient;
};

/// (x_axis f)(px, py).
[[nodiscard]] std::complex<double> apply_position(int axis, const MomentumFunction& f, double beta, double px,
                                                  double py, double hbar = 1.0);

/// p_axis f with its gradient by the product rule.
[[nodiscard]] MomentumFunction multiply_by_momentum(int axis, const MomentumFunction& f);

/// ([x_i, p_j] f)(px, py), computed by applying both operator orderings.
[[nodiscard]] std::complex<double> commutator(int i, int j, const MomentumFunction& f, double beta, double px,
                                              double py, double hbar = 1.0);

/// exp(-|p - p0|^2 / (2 sigma^2)) exp(i k.p) with its analytic gradient.
[[nodiscard]] MomentumFunction gaussian_packet(double px0, double py0, double sigma, double kx = 0.0,
                                               double ky = 0.0);

} // namespace gupdirac
