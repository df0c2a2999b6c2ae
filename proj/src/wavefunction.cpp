#include "gupdirac/wavefunction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <fmt/format.h>

#include "gupdirac/errors.hpp"
#include "gupdirac/hypergeometric.hpp"

namespace gupdirac {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// ln(1 + beta p^2) without overflow for huge p
double log_weight(double beta, double p) {
  const double x = beta * p * p;
  if (x < 1e300) {
    return std::log1p(x);
  }
  return 2.0 * std::log(p) + std::log(beta);
}

double z_of(double beta, double p) {
  const double x = beta * p * p;
  if (!(x < 1e300)) {
    return std::nextafter(1.0, 0.0);
  }
  return std::min(x / (1.0 + x), std::nextafter(1.0, 0.0));
}

// p^e, with 0^0 = 1
double ipow(double p, double e) {
  if (e == 0.0) {
    return 1.0;
  }
  return std::pow(p, e);
}

struct IntegralParts {
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;
};

// int_0^P h(p) p dp / (1 + beta p^2) in u = beta p^2 / (1 + beta p^2)
IntegralParts body_integral(const std::function<double(double)>& h, double beta, double P, const QuadratureSpec& spec) {
  const double x = beta * P * P;
  const double u_max = x / (1.0 + x);
  auto f = [&](double u) {
    const double p = std::sqrt(u / (beta * (1.0 - u)));
    return h(p) / (2.0 * beta * (1.0 - u));
  };
  IntegralParts out;
  out.value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, u_max, spec.max_depth,
                                                                             spec.tolerance * 1e-2, &out.error,
                                                                             &out.l1);
  return out;
}

// int_P^inf h(p) p dp / (1 + beta p^2) with p = P / t
IntegralParts tail_integral(const std::function<double(double)>& h, double beta, double P, const QuadratureSpec& spec) {
  auto f = [&](double t) {
    if (t <= 0.0) {
      return 0.0;
    }
    const double p = P / t;
    if (!std::isfinite(p)) {
      return 0.0;
    }
    const double v = h(p) * P * P / (t * (t * t + beta * P * P));
    return std::isfinite(v) ? v : 0.0;
  };
  boost::math::quadrature::tanh_sinh<double> integrator;
  IntegralParts out;
  out.value = integrator.integrate(f, 0.0, 1.0, spec.tolerance * 1e-2, &out.error, &out.l1);
  return out;
}

IntegralReport radial_integral(const std::function<double(double)>& h, double beta, const QuadratureSpec& spec) {
  if (!(spec.tolerance > 0.0)) {
    throw DomainError(fmt::format("quadrature tolerance must be positive, got {}", spec.tolerance));
  }
  const bool automatic = spec.p_max == 0.0;
  if (!automatic && !(spec.p_max > 0.0)) {
    throw DomainError(fmt::format("P_max must be positive, got {}", spec.p_max));
  }
  // The tail is integrated to infinity, so the automatic cut-off stays where the body is still
  // smooth in u. Pushing P out makes u_max approach 1, where slowly decaying profiles leave an
  // integrable endpoint singularity the body rule resolves poorly.
  const double P = automatic ? 10.0 / std::sqrt(beta) : spec.p_max;
  const auto body = body_integral(h, beta, P, spec);
  const auto tail = tail_integral(h, beta, P, spec);
  const double scale = body.l1 + tail.l1;
  if (!automatic && scale > 0.0 && std::abs(tail.value) > spec.tolerance * scale) {
    throw NumericError(fmt::format("tail beyond P_max = {} is {:.3g} of the integral; use a larger P_max", P,
                                   std::abs(tail.value) / scale));
  }
  IntegralReport r;
  r.value = kTwoPi * (body.value + tail.value);
  r.error_estimate = kTwoPi * (body.error + tail.error);
  r.tail_estimate = kTwoPi * std::abs(tail.value);
  r.p_max = P;
  if (!std::isfinite(r.value)) {
    throw NumericError("quadrature produced a non-finite value");
  }
  return r;
}

double discrete_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) {
    s += x * x;
  }
  return std::sqrt(s);
}

void require_same_params(const SpinorState& a, const SpinorState& b) {
  if (a.params.rho != b.params.rho || a.params.rho_star != b.params.rho_star) {
    throw DomainError("overlap of states computed at different (rho, rho*)");
  }
}

} // namespace

double RadialProfile::envelope(double p) const {
  if (p < 0.0) {
    throw DomainError(fmt::format("momentum magnitude must be non-negative, got {}", p));
  }
  return std::exp(-algebraic * log_weight(beta, p)) * hyp2f1_terminating(n, hyp_b, hyp_c, z_of(beta, p));
}

double RadialProfile::envelope_derivative(double p) const {
  if (p < 0.0) {
    throw DomainError(fmt::format("momentum magnitude must be non-negative, got {}", p));
  }
  const double lw = log_weight(beta, p);
  const double w_inv = 1.0 + beta * p * p;
  const double z = z_of(beta, p);
  const double F = hyp2f1_terminating(n, hyp_b, hyp_c, z);
  const double dF = hyp2f1_terminating_derivative(n, hyp_b, hyp_c, z);
  const double dz = 2.0 * beta * p / (w_inv * w_inv);
  return std::exp(-algebraic * lw) * (-algebraic * 2.0 * beta * p / w_inv * F + dF * dz);
}

double RadialProfile::value(double p) const {
  if (p < 0.0) {
    throw DomainError(fmt::format("momentum magnitude must be non-negative, got {}", p));
  }
  if (p == 0.0) {
    return power == 0.0 ? envelope(0.0) : 0.0;
  }
  const double F = hyp2f1_terminating(n, hyp_b, hyp_c, z_of(beta, p));
  return std::exp(power * std::log(p) - algebraic * log_weight(beta, p)) * F;
}

double RadialProfile::derivative(double p) const {
  const double g = envelope(p);
  const double dg = envelope_derivative(p);
  if (p == 0.0) {
    if (power == 0.0) {
      return dg;
    }
    return power == 1.0 ? g : 0.0;
  }
  return power * ipow(p, power - 1.0) * g + ipow(p, power) * dg;
}

RadialProfile radial_profile(int n, int m, int component, SolutionClass cls, const DimensionlessConfig& d) {
  if (n < 0) {
    throw DomainError(fmt::format("n must be non-negative, got {}", n));
  }
  const auto adm = admissible_classes(m, component, d);
  if (std::find(adm.begin(), adm.end(), cls) == adm.end()) {
    throw InadmissibleError(fmt::format("class ({}) at m = {}, component {} violates {}", label(cls), m, component,
                                        predicate_text(cls, component)));
  }
  const PTParameters pt = pt_parameters(m, component, d);
  const double nu = pt.nu_for(cls);
  const double mu = pt.mu_for(cls);
  RadialProfile f;
  f.n = n;
  f.m = m;
  f.component = component;
  f.cls = cls;
  f.angular = component == 1 ? m : m + 1;
  f.power = nu;
  f.algebraic = 0.5 * (1.0 + nu + mu);
  f.hyp_b = n + 1.0 + nu + mu;
  f.hyp_c = 1.0 + nu;
  f.beta = d.beta();
  return f;
}

RadialProfile radial_profile(int n, int m, int component, const DimensionlessConfig& d) {
  return radial_profile(n, m, component, classify_solution(m, component, d), d);
}

double TrigProfile::value(double q) const {
  if (!(q >= 0.0 && q < 0.5 * std::numbers::pi)) {
    throw DomainError(fmt::format("trigonometric variable must lie in [0, pi/2), got {}", q));
  }
  const double s = std::sin(q);
  const double c = std::cos(q);
  return ipow(s, A) * std::pow(c, B) * hyp2f1_terminating(n, n + A + B, A + 0.5, s * s);
}

double TrigProfile::momentum_value(double p) const {
  if (!(p > 0.0)) {
    throw DomainError(fmt::format("momentum_value needs p > 0, got {}", p));
  }
  const double q = std::atan(std::sqrt(beta) * p);
  return std::pow(beta, -0.5 * A) * value(q) / std::sqrt(p);
}

TrigProfile trig_profile(int n, int m, int component, SolutionClass cls, const DimensionlessConfig& d) {
  const auto f = radial_profile(n, m, component, cls, d);
  const PTParameters pt = pt_parameters(m, component, d);
  TrigProfile t;
  t.n = f.n;
  t.A = 0.5 + pt.nu_for(cls);
  t.B = 0.5 + pt.mu_for(cls);
  t.beta = d.beta();
  return t;
}

AngularFunction apply_P(int sign, const RadialProfile& profile, double scale, const DimensionlessConfig& d) {
  if (sign != 1 && sign != -1) {
    throw DomainError(fmt::format("apply_P sign must be +1 or -1, got {}", sign));
  }
  const double lambda = d.lambda();
  const double beta = d.beta();
  AngularFunction out;
  out.angular = profile.angular + sign;
  out.radial = [profile, scale, lambda, beta, sign](double p) {
    const double alpha = profile.power;
    const double g = profile.envelope(p);
    const double dg = profile.envelope_derivative(p);
    // f' -+ l f / p = p^(alpha-1) [(alpha -+ l) g + p g']
    const double coef = alpha - sign * profile.angular;
    double singular = 0.0;
    if (coef != 0.0) {
      if (p == 0.0) {
        if (alpha < 1.0) {
          throw DomainError(fmt::format("P applied to angular index {} diverges at p = 0", profile.angular));
        }
        singular = alpha == 1.0 ? coef * g : 0.0;
      } else {
        singular = coef * ipow(p, alpha - 1.0) * g;
      }
    }
    const double pa = ipow(p, alpha);
    const double bracket = singular + pa * dg;
    const double f = pa * g;
    return scale * (p * f - sign * lambda * (1.0 + beta * p * p) * bracket);
  };
  return out;
}

double SpinorState::upper_value(double p) const {
  return upper ? normalization * upper->value(p) : 0.0;
}

double SpinorState::lower_value(double p) const {
  if (!lower) {
    return 0.0;
  }
  return normalization * (upper ? coefficient : 1.0) * lower->value(p);
}

std::optional<double> printed_coefficient(const SpinorLayout& layout, const DimensionlessConfig& d) {
  if (!layout.upper || !layout.lower) {
    return std::nullopt;
  }
  const double E = layout.energy;
  const double rho = d.rho;
  const double m = layout.m;
  switch (layout.upper->cls) {
  case SolutionClass::A: return (E - 1.0) / (2.0 * rho * (m + 1.0));
  case SolutionClass::B: return (E + 1.0) / (2.0 * rho * m);
  case SolutionClass::C:
  case SolutionClass::D: return 2.0 * m * rho;
  }
  return std::nullopt;
}

std::vector<double> momentum_grid(double beta, int points) {
  if (points < 1) {
    throw DomainError(fmt::format("grid needs at least one point, got {}", points));
  }
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double u = (i + 0.5) / points;
    grid[static_cast<std::size_t>(i)] = std::sqrt(u / (beta * (1.0 - u)));
  }
  return grid;
}

double measure_weight(double beta, double p) { return 1.0 / (1.0 + beta * p * p); }

IntertwiningResidual intertwining_residual(const SpinorState& s, int points) {
  const auto grid = momentum_grid(s.params.beta(), points);
  IntertwiningResidual r;
  const double eps_p = s.epsilon_plus();
  const double eps_m = s.epsilon_minus();
  std::vector<double> diff(grid.size());
  std::vector<double> ref(grid.size());

  if (s.upper) {
    const auto P = apply_P(+1, *s.upper, s.normalization, s.params);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      diff[i] = P.radial(grid[i]) - eps_p * s.lower_value(grid[i]);
      ref[i] = s.lower ? eps_p * s.lower_value(grid[i]) : grid[i] * s.upper_value(grid[i]);
    }
    r.plus = discrete_norm(diff) / discrete_norm(ref);
  }
  if (s.lower) {
    const double scale = s.normalization * (s.upper ? s.coefficient : 1.0);
    const auto P = apply_P(-1, *s.lower, scale, s.params);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      diff[i] = P.radial(grid[i]) - eps_m * s.upper_value(grid[i]);
      ref[i] = s.upper ? eps_m * s.upper_value(grid[i]) : grid[i] * s.lower_value(grid[i]);
    }
    r.minus = discrete_norm(diff) / discrete_norm(ref);
  }
  return r;
}

SpinorState assemble_spinor(int n, int m, const DimensionlessConfig& d, Branch b, const SpinorOptions& opts) {
  const SpinorLayout layout = spinor_layout(n, m, d, b);
  SpinorState s;
  s.n = n;
  s.m = m;
  s.branch = b;
  s.family = layout.family;
  s.N = layout.N;
  s.energy = layout.energy;
  s.params = d;
  if (layout.upper) {
    s.upper = radial_profile(layout.upper->n, m, 1, layout.upper->cls, d);
  }
  if (layout.lower) {
    s.lower = radial_profile(layout.lower->n, m, 2, layout.lower->cls, d);
  }
  s.printed_coefficient = std::numeric_limits<double>::quiet_NaN();

  if (s.upper && s.lower) {
    const double printed = *printed_coefficient(layout, d);
    s.printed_coefficient = printed;
    s.coefficient = printed;
    s.coefficient_source = CoefficientSource::Printed;
    const double printed_residual = intertwining_residual(s, opts.validation_points).max();
    if (!(printed_residual <= opts.residual_tolerance)) {
      // project P+ psi1 onto psi2 on the validation grid
      const auto grid = momentum_grid(d.beta(), opts.validation_points);
      const auto P = apply_P(+1, *s.upper, 1.0, d);
      double num = 0.0;
      double den = 0.0;
      for (double p : grid) {
        const double f2 = s.lower->value(p);
        num += P.radial(p) * f2;
        den += f2 * f2;
      }
      s.coefficient = num / (s.epsilon_plus() * den);
      s.coefficient_source = CoefficientSource::Rederived;
      const double res = intertwining_residual(s, opts.validation_points).max();
      s.note = fmt::format("printed coefficient {:.12g} fails the eigenvalue relations (residual {:.3g}); "
                           "re-derived {:.12g} (residual {:.3g})",
                           printed, printed_residual, s.coefficient, res);
      if (!(res <= opts.residual_tolerance)) {
        throw InternalConsistencyError(fmt::format("spinor (n = {}, m = {}) fails the eigenvalue relations: {}", n,
                                                   m, s.note));
      }
    }
  } else {
    s.coefficient = 1.0;
    const double res = intertwining_residual(s, opts.validation_points).max();
    if (!(res <= opts.residual_tolerance)) {
      throw InternalConsistencyError(
          fmt::format("single-component state (m = {}) is not annihilated by its ladder operator: {:.3g}", m, res));
    }
  }
  if (opts.normalize) {
    s = normalized(std::move(s), opts.quadrature);
  }
  return s;
}

IntegralReport profile_overlap(const RadialProfile& f, const RadialProfile& g, const QuadratureSpec& spec) {
  if (f.angular != g.angular) {
    return {};
  }
  if (f.beta != g.beta) {
    throw DomainError("profiles computed at different beta");
  }
  return radial_integral([&](double p) { return f.value(p) * g.value(p); }, f.beta, spec);
}

IntegralReport overlap(const SpinorState& a, const SpinorState& b, const QuadratureSpec& spec) {
  require_same_params(a, b);
  IntegralReport total;
  if (a.m != b.m) {
    return total;
  }
  auto add = [&](const IntegralReport& r, double scale) {
    total.value += scale * r.value;
    total.error_estimate += std::abs(scale) * r.error_estimate;
    total.tail_estimate += std::abs(scale) * r.tail_estimate;
    total.p_max = std::max(total.p_max, r.p_max);
  };
  if (a.upper && b.upper) {
    add(profile_overlap(*a.upper, *b.upper, spec), a.normalization * b.normalization);
  }
  if (a.lower && b.lower) {
    const double ca = a.normalization * (a.upper ? a.coefficient : 1.0);
    const double cb = b.normalization * (b.upper ? b.coefficient : 1.0);
    add(profile_overlap(*a.lower, *b.lower, spec), ca * cb);
  }
  return total;
}

IntegralReport norm_squared(const SpinorState& s, const QuadratureSpec& spec) { return overlap(s, s, spec); }

SpinorState normalized(SpinorState s, const QuadratureSpec& spec) {
  const auto r = norm_squared(s, spec);
  if (!(r.value > 0.0)) {
    throw NumericError(fmt::format("state (n = {}, m = {}) has non-positive norm {}", s.n, s.m, r.value));
  }
  s.normalization /= std::sqrt(r.value);
  return s;
}

std::vector<ProfileSample> sample_spinor(const SpinorState& s, const std::vector<double>& momenta, double theta) {
  std::vector<ProfileSample> out;
  out.reserve(momenta.size());
  const auto up = std::polar(1.0, s.upper_angular() * theta);
  const auto lo = std::polar(1.0, s.lower_angular() * theta);
  for (double p : momenta) {
    out.push_back({p, s.upper_value(p) * up, s.lower_value(p) * lo});
  }
  return out;
}

std::complex<double> apply_position(int axis, const MomentumFunction& f, double beta, double px, double py,
                                    double hbar) {
  if (axis != 0 && axis != 1) {
    throw DomainError(fmt::format("axis must be 0 or 1, got {}", axis));
  }
  const auto grad = f.gradient(px, py);
  return std::complex<double>(0.0, hbar) * (1.0 + beta * (px * px + py * py)) * grad[static_cast<std::size_t>(axis)];
}

MomentumFunction multiply_by_momentum(int axis, const MomentumFunction& f) {
  if (axis != 0 && axis != 1) {
    throw DomainError(fmt::format("axis must be 0 or 1, got {}", axis));
  }
  MomentumFunction g;
  g.value = [f, axis](double px, double py) { return (axis == 0 ? px : py) * f.value(px, py); };
  g.gradient = [f, axis](double px, double py) {
    const double pj = axis == 0 ? px : py;
    auto grad = f.gradient(px, py);
    const auto v = f.value(px, py);
    grad[0] *= pj;
    grad[1] *= pj;
    grad[static_cast<std::size_t>(axis)] += v;
    return grad;
  };
  return g;
}

std::complex<double> commutator(int i, int j, const MomentumFunction& f, double beta, double px, double py,
                                double hbar) {
  const double pj = j == 0 ? px : py;
  const auto p_x_f = pj * apply_position(i, f, beta, px, py, hbar);
  const auto x_p_f = apply_position(i, multiply_by_momentum(j, f), beta, px, py, hbar);
  return x_p_f - p_x_f;
}

MomentumFunction gaussian_packet(double px0, double py0, double sigma, double kx, double ky) {
  if (!(sigma > 0.0)) {
    throw DomainError(fmt::format("packet width must be positive, got {}", sigma));
  }
  MomentumFunction f;
  f.value = [=](double px, double py) {
    const double dx = px - px0;
    const double dy = py - py0;
    return std::exp(std::complex<double>(-(dx * dx + dy * dy) / (2.0 * sigma * sigma), kx * px + ky * py));
  };
  f.gradient = [=](double px, double py) {
    const double dx = px - px0;
    const double dy = py - py0;
    const auto v = std::exp(std::complex<double>(-(dx * dx + dy * dy) / (2.0 * sigma * sigma), kx * px + ky * py));
    return std::array<std::complex<double>, 2>{v * std::complex<double>(-dx / (sigma * sigma), kx),
                                               v * std::complex<double>(-dy / (sigma * sigma), ky)};
  };
  return f;
}

} // namespace gupdirac
