#pragma once

#include <optional>
#include <string_view>

namespace gupdirac {

// Physical inputs. Internally everything runs in natural units hbar = c = M = 1,
// where the whole spectrum depends only on (rho, rho*, n, m).

struct PhysicalConstants {
  double hbar = 1.0;
  double c = 1.0;
  double e = 1.0;
};

struct PhysicalConfig {
  double mass = 1.0;  ///< M, in energy / c^2 units
  double omega = 0.0; ///< Dirac-oscillator frequency
  double field = 0.0; ///< B0
  double beta = 0.0;  ///< minimal-length parameter, 1 / momentum^2
  PhysicalConstants constants{};

  /// omega~_c = e B0 / (2 M c)
  [[nodiscard]] double reduced_cyclotron_frequency() const;
  /// Delta x0 = hbar sqrt(beta)
  [[nodiscard]] double minimal_length() const;
};

/// Throws DomainError unless M > 0, omega >= 0, beta >= 0 and all constants are positive.
void validate(const PhysicalConfig& cfg);

/// The (rho, rho*) pair driving every closed form.
struct DimensionlessConfig {
  double rho = 0.0;
  double rho_star = 0.0;

  /// lambda / (M^2 c^2); equals rho.
  [[nodiscard]] double lambda() const { return rho; }
  /// beta M^2 c^2 = 2 / rho*.
  [[nodiscard]] double beta() const { return 2.0 / rho_star; }
  /// 1 / (beta lambda) = rho* / (2 rho). Infinite at rho = 0.
  [[nodiscard]] double inv_beta_lambda() const;
};

/// Throws DomainError for rho* <= 0 or non-finite values. Does not reject rho = 0.
void validate(const DimensionlessConfig& d);

/// Physical lambda = hbar M (omega~_c - omega) = rho M^2 c^2.
[[nodiscard]] double physical_lambda(const PhysicalConfig& cfg);

[[nodiscard]] DimensionlessConfig dimensionless_from_physical(const PhysicalConfig& cfg);

/// Ordinary critical field B_cr = 2 M c omega / e.
[[nodiscard]] double critical_field(const PhysicalConfig& cfg);

enum class Regime {
  ExternalPositive, ///< rho > rho*
  InternalPositive, ///< 0 < rho < rho*
  InternalNegative, ///< -rho* < rho < 0
  ExternalNegative, ///< rho < -rho*
  BoundaryPositive, ///< rho = rho*
  BoundaryNegative, ///< rho = -rho*
};

[[nodiscard]] std::string_view to_string(Regime r);
[[nodiscard]] bool is_boundary(Regime r);
[[nodiscard]] bool is_external(Regime r);

/// Classifies rho against +-rho*. `boundary_tolerance` is an absolute width in rho units:
/// |rho| <= tol is the critical point (error), ||rho| - rho*| <= tol is a boundary.
[[nodiscard]] Regime classify_regime(const DimensionlessConfig& d, double boundary_tolerance = 0.0);

/// tau = -1/2 - rho*/(2 rho). Throws CriticalPointError at rho = 0.
[[nodiscard]] double tau_of(const DimensionlessConfig& d);

struct CharacteristicLengths {
  std::optional<double> landau;  ///< sqrt(hbar / (M omega~_c)); empty unless omega~_c > 0
  std::optional<double> dirac;   ///< sqrt(hbar / (M omega)); empty unless omega > 0
  double minimal_length = 0.0;   ///< hbar sqrt(beta)
  double inv_beta_lambda = 0.0;  ///< [dx0^2 (1/lL^2 - 1/lD^2)]^-1, +-inf when lL = lD
  bool inv_beta_lambda_infinite = false;
  std::optional<double> minimal_over_landau;
  std::optional<double> minimal_over_dirac;
};

[[nodiscard]] CharacteristicLengths characteristic_lengths(const PhysicalConfig& cfg);

} // namespace gupdirac
