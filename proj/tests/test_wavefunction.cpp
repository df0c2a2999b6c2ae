#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "gupdirac/errors.hpp"
#include "gupdirac/wavefunction.hpp"

using namespace gupdirac;

namespace {

const std::vector<DimensionlessConfig> kRegimes = {{25, 20}, {5, 20}, {-5, 20}, {-25, 20}};

double series(int n, double b, double c, double z) {
  double term = 1, sum = 1;
  for (int k = 0; k < n; ++k) {
    term *= (k - n) * (b + k) / ((c + k) * (k + 1)) * z;
    sum += term;
  }
  return sum;
}

// (A, B) exponents of s = sin q and c = cos q for each solution class.
std::pair<double, double> trig_exponents(char cls, int comp, int m, const DimensionlessConfig& d) {
  const double zeta = m - 0.5 + comp;
  const double xi = m + 2.5 - comp + d.rho_star / (2 * d.rho);
  switch (cls) {
  case 'a': return {zeta, xi};
  case 'b': return {1 - zeta, 1 - xi};
  case 'c': return {1 - zeta, xi};
  default: return {zeta, 1 - xi};
  }
}

// beta^(-A/2) p^(-1/2) phi(q) with p = tan q / sqrt(beta).
double from_trig(int n, char cls, int comp, int m, const DimensionlessConfig& d, double p) {
  const auto [A, B] = trig_exponents(cls, comp, m, d);
  const double beta = 2 / d.rho_star;
  const double q = std::atan(std::sqrt(beta) * p);
  const double s = std::sin(q), c = std::cos(q);
  const double phi = std::pow(s, A) * std::pow(c, B) * series(n, n + A + B, A + 0.5, s * s);
  return std::pow(beta, -A / 2) * phi / std::sqrt(p);
}

std::vector<SpinorState> all_states(const DimensionlessConfig& d, int n_max) {
  std::vector<SpinorState> out;
  for (int m = -5; m <= 5; ++m) {
    for (int n = 0; n <= n_max; ++n) {
      for (auto b : {Branch::Positive, Branch::Negative}) {
        try {
          out.push_back(assemble_spinor(n, m, d, b, {.normalize = false}));
        } catch (const NotPermissibleError&) {
        } catch (const DiscardedSolutionError&) {
        }
      }
    }
  }
  return out;
}

} // namespace

TEST_CASE("profile shape") {
  const DimensionlessConfig d{5, 20};
  auto f = radial_profile(0, 2, 1, d);
  CHECK(f.value(0.0) == 0.0);
  CHECK(f.power == 2.0);
  for (double p : {0.1, 1.0, 7.0}) {
    CHECK(f.value(p) == doctest::Approx(std::pow(p, f.power) * std::pow(1 + 0.1 * p * p, -f.algebraic)));
  }
  auto g = radial_profile(1, 0, 1, d);
  CHECK(g.value(0.0) == doctest::Approx(1.0));
  CHECK(g.hyp_c == 1.0);

  // n = 1, m = 0, component 1 at p = 1 against the q form
  CHECK(g.value(1.0) == doctest::Approx(from_trig(1, 'a', 1, 0, d, 1.0)).epsilon(1e-12));
  auto t = trig_profile(1, 0, 1, SolutionClass::A, d);
  CHECK(t.momentum_value(1.0) == doctest::Approx(g.value(1.0)).epsilon(1e-12));
  CHECK(t.value(std::atan(std::sqrt(0.1))) * std::pow(0.1, -t.A / 2) == doctest::Approx(g.value(1.0)).epsilon(1e-12));

  CHECK_THROWS_AS((void)radial_profile(0, 3, 1, SolutionClass::B, d), InadmissibleError);
}

TEST_CASE("q form and momentum form agree") {
  std::mt19937 gen(17);
  std::uniform_real_distribution<double> rsd(5.0, 60.0), fr(0.05, 2.5), pd(0.01, 30.0);
  std::uniform_int_distribution<int> nd(0, 5), md(-6, 6), sd(0, 1);
  int checked = 0;
  while (checked < 20) {
    const double rs = rsd(gen);
    const DimensionlessConfig d{fr(gen) * rs * (sd(gen) ? 1 : -1), rs};
    if (std::abs(std::abs(d.rho) - rs) < 1e-3) continue;
    const int n = nd(gen), m = md(gen), comp = 1 + sd(gen);
    const auto cls = classify_solution(m, comp, d);
    const auto f = radial_profile(n, m, comp, cls, d);
    const auto t = trig_profile(n, m, comp, cls, d);
    for (int i = 0; i < 10; ++i) {
      const double p = pd(gen);
      const double ref = from_trig(n, label(cls), comp, m, d, p);
      const double scale = std::abs(std::pow(p, f.power) * std::pow(1 + d.beta() * p * p, -f.algebraic)) *
                           (1 + std::abs(series(n, f.hyp_b, f.hyp_c, 0.5)));
      CHECK(std::abs(f.value(p) - ref) <= 1e-12 * std::max(std::abs(ref), scale));
      CHECK(std::abs(t.momentum_value(p) - ref) <= 1e-12 * std::max(std::abs(ref), scale));
    }
    ++checked;
  }
}

TEST_CASE("endpoint behaviour of the selected classes") {
  for (const auto& d : kRegimes) {
    for (int comp : {1, 2}) {
      for (int m = -8; m <= 8; ++m) {
        const auto cls = classify_solution(m, comp, d);
        const auto [A, B] = trig_exponents(label(cls), comp, m, d);
        CHECK(A > 0);
        CHECK(B > 0);
        const auto f = radial_profile(0, m, comp, d);
        CHECK(f.power >= 0);
        CHECK(f.decay_exponent() > 0);
        CHECK(std::abs(f.value(1e9)) < std::abs(f.value(1e6)));
      }
    }
  }
}

TEST_CASE("derivatives are exact") {
  for (const auto& d : kRegimes) {
    for (int m = -3; m <= 3; ++m) {
      for (int n = 0; n < 4; ++n) {
        const auto f = radial_profile(n, m, 2, d);
        for (double p : {0.3, 1.1, 4.0}) {
          const double h = 1e-5 * p;
          const double fd = (f.value(p + h) - f.value(p - h)) / (2 * h);
          CHECK(f.derivative(p) == doctest::Approx(fd).epsilon(1e-6).scale(std::abs(f.value(p)) / p));
          CHECK(f.envelope(p) * std::pow(p, f.power) == doctest::Approx(f.value(p)).epsilon(1e-13));
        }
      }
    }
  }
}

TEST_CASE("P operators") {
  const DimensionlessConfig d{5, 20};
  const auto f = radial_profile(1, 2, 1, d);
  for (int sign : {+1, -1}) {
    const auto g = apply_P(sign, f, 1.5, d);
    CHECK(g.angular == f.angular + sign);
    for (double p : {0.2, 1.0, 3.0}) {
      const double h = 1e-5 * p;
      const double fd = (f.value(p + h) - f.value(p - h)) / (2 * h);
      const double ref =
          1.5 * (p * f.value(p) - sign * d.rho * (1 + d.beta() * p * p) * (fd - sign * f.angular * f.value(p) / p));
      CHECK(g.radial(p) == doctest::Approx(ref).epsilon(1e-6));
    }
  }

  // 1/p term diverges at the origin for a profile that does not vanish there
  RadialProfile bad;
  bad.angular = 2;
  bad.beta = d.beta();
  const auto gb = apply_P(+1, bad, 1.0, d);
  CHECK_THROWS_AS((void)gb.radial(0.0), DomainError);
  CHECK(std::isfinite(gb.radial(0.5)));
}

TEST_CASE("P+ and P- are adjoint under the deformed measure") {
  namespace q = boost::math::quadrature;
  q::exp_sinh<double> integrator;
  for (const auto& d : kRegimes) {
    const double beta = d.beta();
    for (int m = -2; m <= 2; ++m) {
      const auto f = radial_profile(1, m, 1, d);
      // a partner taken at another rho is not an image of f, so the pairing is generic
      const auto g = radial_profile(1, m, 2, {d.rho * 1.07, d.rho_star});
      const auto pf = apply_P(+1, f, 1.0, d);
      const auto mg = apply_P(-1, g, 1.0, d);
      auto finite = [](double v) { return std::isfinite(v) ? v : 0.0; };
      double l1 = 0;
      auto lhs = integrator.integrate(
          [&](double p) { return finite(pf.radial(p) * g.value(p) * p / (1 + beta * p * p)); }, 1e-12, nullptr, &l1);
      auto rhs = integrator.integrate(
          [&](double p) { return finite(f.value(p) * mg.radial(p) * p / (1 + beta * p * p)); });
      CHECK(std::abs(lhs) > 1e-6 * l1);
      CHECK(std::abs(lhs - rhs) <= 1e-9 * l1);
    }
  }
}

TEST_CASE("assembled spinors satisfy the off-diagonal equations") {
  int total = 0;
  for (const auto& d : kRegimes) {
    for (const auto& s : all_states(d, 3)) {
      const auto r = intertwining_residual(s, 1000);
      INFO("rho = ", d.rho, " n = ", s.n, " m = ", s.m, " branch = ", to_string(s.branch));
      CHECK(r.plus <= 1e-10);
      CHECK(r.minus <= 1e-10);
      CHECK(s.energy == doctest::Approx(level_energy(s.family, s.N, d, s.branch)).epsilon(1e-14));
      ++total;
    }
  }
  CHECK(total > 200);
}

TEST_CASE("spinor examples") {
  auto singlet = assemble_spinor(0, 0, {-5, 20}, Branch::Positive);
  CHECK(singlet.energy == 1.0);
  CHECK(singlet.upper);
  CHECK_FALSE(singlet.lower);
  CHECK(singlet.lower_value(0.7) == 0.0);
  // P+ annihilates the surviving component
  const auto kill = apply_P(+1, *singlet.upper, 1.0, singlet.params);
  for (double p : {0.1, 1.0, 10.0}) {
    CHECK(std::abs(kill.radial(p)) <= 1e-12 * p * std::abs(singlet.upper->value(p)));
  }

  auto low = assemble_spinor(0, -2, {5, 20}, Branch::Negative);
  CHECK(low.energy == -1.0);
  CHECK_FALSE(low.upper);
  CHECK(low.lower);
  CHECK(low.upper_value(0.7) == 0.0);
  const auto kill2 = apply_P(-1, *low.lower, 1.0, low.params);
  for (double p : {0.1, 1.0, 10.0}) {
    CHECK(std::abs(kill2.radial(p)) <= 1e-12 * p * std::abs(low.lower->value(p)));
  }

  auto ext = assemble_spinor(0, 0, {25, 20}, Branch::Positive);
  CHECK(ext.energy == doctest::Approx(std::sqrt(351.0)));
  CHECK(ext.upper);
  CHECK(ext.lower);
  CHECK(ext.coefficient_source == CoefficientSource::Printed);
  CHECK(intertwining_residual(ext).max() <= 1e-10);

  // (b)/(b) rows: printed coefficient fails and is re-derived
  auto bb = assemble_spinor(0, -2, {25, 20}, Branch::Positive);
  CHECK(bb.coefficient_source == CoefficientSource::Rederived);
  CHECK_FALSE(bb.note.empty());
  CHECK(intertwining_residual(bb).max() <= 1e-10);

  CHECK_THROWS_AS((void)assemble_spinor(0, -1, {5, 20}, Branch::Positive), NotPermissibleError);
}

TEST_CASE("normalization and orthogonality") {
  for (const auto& d : kRegimes) {
    for (int m : {-2, 0, 1}) {
      std::vector<SpinorState> states;
      for (int n = 0; n <= 3; ++n) {
        try {
          states.push_back(assemble_spinor(n, m, d, Branch::Positive));
        } catch (const NotPermissibleError&) {
        }
      }
      for (const auto& s : states) {
        const auto nn = norm_squared(s);
        CHECK(nn.value == doctest::Approx(1.0).epsilon(1e-10));
      }
      for (std::size_t i = 0; i < states.size(); ++i) {
        for (std::size_t j = i + 1; j < states.size(); ++j) {
          if (std::abs(states[i].energy - states[j].energy) < 1e-9) continue;
          INFO("rho = ", d.rho, " m = ", m, " n = ", states[i].n, ", ", states[j].n);
          CHECK(std::abs(overlap(states[i], states[j]).value) <= 1e-8);
        }
      }
    }
  }
  // positive and negative branch partners are orthogonal too
  auto up = assemble_spinor(1, 1, {5, 20}, Branch::Positive);
  auto dn = assemble_spinor(1, 1, {5, 20}, Branch::Negative);
  CHECK(std::abs(overlap(up, dn).value) <= 1e-8);
  // different angular content
  auto other = assemble_spinor(1, 2, {5, 20}, Branch::Positive);
  CHECK(overlap(up, other).value == 0.0);
}

TEST_CASE("normalization is idempotent and scales") {
  auto raw = assemble_spinor(2, 1, {5, 20}, Branch::Positive, {.normalize = false});
  const double n0 = norm_squared(raw).value;
  auto unit = normalized(raw);
  CHECK(norm_squared(unit).value == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(unit.normalization == doctest::Approx(raw.normalization / std::sqrt(n0)).epsilon(1e-10));
  CHECK(norm_squared(normalized(unit)).value == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("measure and quadrature") {
  CHECK(measure_weight(0.0, 123.0) == 1.0);
  CHECK(measure_weight(0.1, 3.0) == doctest::Approx(1 / 1.9));
  const auto grid = momentum_grid(0.1, 100);
  CHECK(grid.size() == 100);
  for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);

  auto s = assemble_spinor(1, 0, {5, 20}, Branch::Positive, {.normalize = false});
  // a cut-off far too short leaves a large tail
  CHECK_THROWS_AS((void)norm_squared(s, {.p_max = 0.5}), NumericError);
  auto full = norm_squared(s);
  auto wide = norm_squared(s, {.p_max = 1e4});
  CHECK(full.value == doctest::Approx(wide.value).epsilon(1e-10));

  // flat measure when beta -> 0 only changes the weight
  const auto f = radial_profile(0, 0, 1, {5, 20});
  const auto pr = profile_overlap(f, f);
  namespace q = boost::math::quadrature;
  q::exp_sinh<double> integ;
  const double ref = 2 * M_PI * integ.integrate([&](double p) { return f.value(p) * f.value(p) * p / (1 + 0.1 * p * p); });
  CHECK(pr.value == doctest::Approx(ref).epsilon(1e-9));
}

TEST_CASE("samples") {
  auto s = assemble_spinor(0, 1, {5, 20}, Branch::Positive);
  const auto pts = sample_spinor(s, {0.5, 1.0}, 0.3);
  REQUIRE(pts.size() == 2);
  CHECK(pts[0].upper == std::polar(s.upper_value(0.5), 0.3 * 1));
  CHECK(std::abs(pts[1].lower - std::polar(1.0, 0.3 * 2) * s.lower_value(1.0)) < 1e-15);
}

TEST_CASE("commutator of position and momentum") {
  std::mt19937 gen(23);
  std::uniform_real_distribution<double> c(-3.0, 3.0), sg(0.3, 2.0);
  for (int t = 0; t < 20; ++t) {
    const auto f = gaussian_packet(c(gen), c(gen), sg(gen), c(gen), c(gen));
    const double beta = t % 2 ? 0.1 : 0.013;
    for (int k = 0; k < 5; ++k) {
      const double px = c(gen), py = c(gen);
      const auto v = f.value(px, py);
      const double w = 1 + beta * (px * px + py * py);
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          const auto got = commutator(i, j, f, beta, px, py);
          const std::complex<double> want = i == j ? std::complex<double>(0, 1) * w * v : 0.0;
          CHECK(std::abs(got - want) <= 1e-10 * std::max(std::abs(v), 1e-300) + 1e-300);
        }
      }
    }
  }
}
