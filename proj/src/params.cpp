#include "gupdirac/params.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "gupdirac/errors.hpp"

namespace gupdirac {

double PhysicalConfig::reduced_cyclotron_frequency() const {
  return constants.e * field / (2.0 * mass * constants.c);
}

double PhysicalConfig::minimal_length() const { return constants.hbar * std::sqrt(beta); }

void validate(const PhysicalConfig& cfg) {
  const auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(cfg.mass) || cfg.mass <= 0.0) {
    throw DomainError(fmt::format("mass must be positive, got {}", cfg.mass));
  }
  if (!finite(cfg.omega) || cfg.omega < 0.0) {
    throw DomainError(fmt::format("oscillator frequency must be non-negative, got {}", cfg.omega));
  }
  if (!finite(cfg.beta) || cfg.beta < 0.0) {
    throw DomainError(fmt::format("minimal-length parameter must be non-negative, got {}", cfg.beta));
  }
  if (!finite(cfg.field)) {
    throw DomainError("magnetic field must be finite");
  }
  const auto& k = cfg.constants;
  if (!(finite(k.hbar) && finite(k.c) && finite(k.e)) || k.hbar <= 0.0 || k.c <= 0.0 || k.e <= 0.0) {
    throw DomainError("physical constants hbar, c, e must be positive");
  }
}

double DimensionlessConfig::inv_beta_lambda() const {
  if (rho == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return rho_star / (2.0 * rho);
}

void validate(const DimensionlessConfig& d) {
  if (!std::isfinite(d.rho)) {
    throw DomainError(fmt::format("rho must be finite, got {}", d.rho));
  }
  if (!std::isfinite(d.rho_star) || d.rho_star <= 0.0) {
    throw DomainError(fmt::format("rho* must be positive and finite, got {}", d.rho_star));
  }
}

double physical_lambda(const PhysicalConfig& cfg) {
  validate(cfg);
  return cfg.constants.hbar * cfg.mass * (cfg.reduced_cyclotron_frequency() - cfg.omega);
}

DimensionlessConfig dimensionless_from_physical(const PhysicalConfig& cfg) {
  validate(cfg);
  if (cfg.beta == 0.0) {
    throw NoMinimalLengthError("beta = 0: no minimal length, rho* is infinite; use the ordinary-limit formulas");
  }
  const double mc = cfg.mass * cfg.constants.c;
  const double mc2 = mc * cfg.constants.c;
  DimensionlessConfig d;
  d.rho = cfg.constants.hbar * (cfg.reduced_cyclotron_frequency() - cfg.omega) / mc2;
  d.rho_star = 2.0 / (cfg.beta * mc * mc);
  return d;
}

double critical_field(const PhysicalConfig& cfg) {
  validate(cfg);
  return 2.0 * cfg.mass * cfg.constants.c * cfg.omega / cfg.constants.e;
}

std::string_view to_string(Regime r) {
  switch (r) {
  case Regime::ExternalPositive: return "ExternalPositive";
  case Regime::InternalPositive: return "InternalPositive";
  case Regime::InternalNegative: return "InternalNegative";
  case Regime::ExternalNegative: return "ExternalNegative";
  case Regime::BoundaryPositive: return "BoundaryPositive";
  case Regime::BoundaryNegative: return "BoundaryNegative";
  }
  return "?";
}

bool is_boundary(Regime r) { return r == Regime::BoundaryPositive || r == Regime::BoundaryNegative; }

bool is_external(Regime r) { return r == Regime::ExternalPositive || r == Regime::ExternalNegative; }

Regime classify_regime(const DimensionlessConfig& d, double boundary_tolerance) {
  validate(d);
  if (boundary_tolerance < 0.0) {
    throw DomainError("boundary tolerance must be non-negative");
  }
  if (std::abs(d.rho) <= boundary_tolerance) {
    throw CriticalPointError(fmt::format("rho = {} is the critical point lambda = 0", d.rho));
  }
  if (std::abs(std::abs(d.rho) - d.rho_star) <= boundary_tolerance) {
    return d.rho > 0.0 ? Regime::BoundaryPositive : Regime::BoundaryNegative;
  }
  if (d.rho > 0.0) {
    return d.rho > d.rho_star ? Regime::ExternalPositive : Regime::InternalPositive;
  }
  return d.rho < -d.rho_star ? Regime::ExternalNegative : Regime::InternalNegative;
}

double tau_of(const DimensionlessConfig& d) {
  validate(d);
  if (d.rho == 0.0) {
    throw CriticalPointError("tau is undefined at the critical point rho = 0");
  }
  return -0.5 - d.rho_star / (2.0 * d.rho);
}

CharacteristicLengths characteristic_lengths(const PhysicalConfig& cfg) {
  validate(cfg);
  const double hbar = cfg.constants.hbar;
  const double wc = cfg.reduced_cyclotron_frequency();
  CharacteristicLengths out;
  out.minimal_length = cfg.minimal_length();

  // Inverse squares stay meaningful even when omega~_c <= 0.
  const double inv_l2 = cfg.mass * wc / hbar;
  const double inv_d2 = cfg.mass * cfg.omega / hbar;
  if (wc > 0.0) {
    out.landau = std::sqrt(hbar / (cfg.mass * wc));
  }
  if (cfg.omega > 0.0) {
    out.dirac = std::sqrt(hbar / (cfg.mass * cfg.omega));
  }
  const double bracket = out.minimal_length * out.minimal_length * (inv_l2 - inv_d2);
  if (bracket == 0.0) {
    out.inv_beta_lambda_infinite = true;
    out.inv_beta_lambda = std::numeric_limits<double>::infinity();
  } else {
    out.inv_beta_lambda = 1.0 / bracket;
  }
  if (out.landau) {
    out.minimal_over_landau = out.minimal_length / *out.landau;
  }
  if (out.dirac) {
    out.minimal_over_dirac = out.minimal_length / *out.dirac;
  }
  return out;
}

} // namespace gupdirac
