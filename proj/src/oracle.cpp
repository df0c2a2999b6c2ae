#include "gupdirac/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "gupdirac/errors.hpp"
#include "gupdirac/parallel.hpp"

namespace gupdirac {

namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;

double relative_error(double numeric, double exact) {
  return std::abs(numeric - exact) / std::max(std::abs(exact), std::numeric_limits<double>::min());
}

// Fills numerics, Richardson extrapolation and status; analytic_k2, mu, nu set by the caller.
void run_ladder(EigenReport& r, const VerifyOptions& opts) {
  validate(opts.grid);
  const int count = static_cast<int>(r.analytic_k2.size());
  r.grid_points = opts.grid.ladder;
  r.numeric_k2.clear();
  for (int points : r.grid_points) {
    r.numeric_k2.push_back(fd_eigenvalues(r.mu, r.nu, points, count));
  }

  const std::size_t g = r.numeric_k2.size();
  r.extrapolated_k2.assign(static_cast<std::size_t>(count), 0.0);
  r.observed_order.assign(static_cast<std::size_t>(count), 2.0);
  r.relative_error.assign(static_cast<std::size_t>(count), 0.0);
  r.raw_relative_error.assign(static_cast<std::size_t>(count), 0.0);
  r.max_relative_error = 0.0;
  r.max_raw_relative_error = 0.0;
  bool order_fallback = false;
  for (std::size_t n = 0; n < static_cast<std::size_t>(count); ++n) {
    const double fine = r.numeric_k2[g - 1][n];
    double p = 2.0;
    double extrapolated = fine;
    if (g >= 2) {
      const double mid = r.numeric_k2[g - 2][n];
      if (g >= 3) {
        const double coarse = r.numeric_k2[g - 3][n];
        const double ratio = std::abs(coarse - mid) / std::abs(mid - fine);
        const double observed = std::log2(ratio);
        if (std::isfinite(observed) && observed >= 0.5 && observed <= 6.0) {
          p = observed;
        } else {
          order_fallback = true;
        }
      }
      extrapolated = fine + (fine - mid) / (std::pow(2.0, p) - 1.0);
    }
    r.observed_order[n] = p;
    r.extrapolated_k2[n] = extrapolated;
    r.relative_error[n] = relative_error(extrapolated, r.analytic_k2[n]);
    r.raw_relative_error[n] = relative_error(fine, r.analytic_k2[n]);
    r.max_relative_error = std::max(r.max_relative_error, r.relative_error[n]);
    r.max_raw_relative_error = std::max(r.max_raw_relative_error, r.raw_relative_error[n]);
  }

  const bool in_window = std::min(r.mu, r.nu) >= opts.exponent_floor;
  const bool ok = r.max_relative_error <= opts.tolerance && r.max_raw_relative_error <= opts.raw_tolerance;
  if (!in_window) {
    r.status = VerifyStatus::Flagged;
    r.note = fmt::format("exponent below {} (mu = {:.6g}, nu = {:.6g}): endpoint behaviour not fixed by the "
                         "discretisation; selected analytically (max rel. error {:.3g})",
                         opts.exponent_floor, r.mu, r.nu, r.max_relative_error);
  } else if (ok) {
    r.status = VerifyStatus::Pass;
  } else {
    r.status = VerifyStatus::Fail;
    r.note = fmt::format("max rel. error {:.3g} (extrapolated), {:.3g} (finest grid)", r.max_relative_error,
                         r.max_raw_relative_error);
  }
  if (order_fallback) {
    if (!r.note.empty()) {
      r.note += "; ";
    }
    r.note += "observed order outside [0.5, 6], extrapolated with order 2";
  }
}

} // namespace

double potential(double mu, double nu, double x) {
  if (!(std::abs(x) < kHalfPi)) {
    throw DomainError(fmt::format("potential needs |x| < pi/2, got {}", x));
  }
  const double c2 = std::cos(x) * std::cos(x);
  return ((mu * mu + nu * nu) / 2.0 - 0.25) / c2 + ((mu * mu - nu * nu) / 2.0) * std::sin(x) / c2;
}

void validate(const GridSpec& g) {
  if (g.ladder.empty()) {
    throw DomainError("grid ladder is empty");
  }
  for (std::size_t i = 0; i < g.ladder.size(); ++i) {
    if (g.ladder[i] < 64) {
      throw DomainError(fmt::format("grid needs at least 64 points, got {}", g.ladder[i]));
    }
    if (i > 0 && g.ladder[i] != 2 * g.ladder[i - 1]) {
      throw DomainError(fmt::format("grid ladder must double at each level: {} after {}", g.ladder[i],
                                    g.ladder[i - 1]));
    }
  }
}

std::vector<double> grid_nodes(int points) {
  if (points < 1) {
    throw DomainError(fmt::format("grid needs at least one point, got {}", points));
  }
  const double h = std::numbers::pi / points;
  std::vector<double> x(static_cast<std::size_t>(points));
  for (int j = 0; j < points; ++j) {
    x[static_cast<std::size_t>(j)] = -kHalfPi + (j + 0.5) * h;
  }
  return x;
}

Tridiagonal fd_matrix(double mu, double nu, int points) {
  if (points < 2) {
    throw DomainError(fmt::format("finite differences need at least 2 points, got {}", points));
  }
  const double h = std::numbers::pi / points;
  const double ih2 = 1.0 / (h * h);
  const auto x = grid_nodes(points);
  Tridiagonal t;
  t.diag.resize(x.size());
  t.off.assign(x.size() - 1, -ih2);
  for (std::size_t j = 0; j < x.size(); ++j) {
    t.diag[j] = 2.0 * ih2 + potential(mu, nu, x[j]);
  }
  // ghost node mirrors the end node with opposite sign
  t.diag.front() += ih2;
  t.diag.back() += ih2;
  return t;
}

int sturm_count(const Tridiagonal& t, double lambda) {
  const double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
  int negatives = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < t.diag.size(); ++i) {
    const double e2 = i == 0 ? 0.0 : t.off[i - 1] * t.off[i - 1];
    q = t.diag[i] - lambda - (i == 0 ? 0.0 : e2 / q);
    if (q == 0.0) {
      q = -tiny;
    }
    if (q < 0.0) {
      ++negatives;
    }
  }
  return negatives;
}

std::vector<double> tridiagonal_eigenvalues(const Tridiagonal& t, int count) {
  const std::size_t size = t.diag.size();
  if (t.off.size() + 1 != size) {
    throw DomainError("tridiagonal off-diagonal must have one entry less than the diagonal");
  }
  if (count < 0 || static_cast<std::size_t>(count) > size) {
    throw DomainError(fmt::format("cannot extract {} eigenvalues from a {}x{} matrix", count, size, size));
  }
  // Gershgorin bounds
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < size; ++i) {
    double radius = 0.0;
    if (i > 0) radius += std::abs(t.off[i - 1]);
    if (i + 1 < size) radius += std::abs(t.off[i]);
    lo = std::min(lo, t.diag[i] - radius);
    hi = std::max(hi, t.diag[i] + radius);
  }
  const double eps = std::numeric_limits<double>::epsilon();
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  double floor = lo;
  for (int k = 0; k < count; ++k) {
    double a = floor;
    double b = hi;
    int iter = 0;
    while (b - a > 2.0 * eps * std::max(std::abs(a), std::abs(b)) + std::numeric_limits<double>::min()) {
      if (++iter > 400) {
        throw NumericError(fmt::format("bisection for eigenvalue {} did not converge: bracket [{:.17g}, {:.17g}]",
                                       k, a, b));
      }
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) {
        break;
      }
      if (sturm_count(t, mid) > k) {
        b = mid;
      } else {
        a = mid;
      }
    }
    if (sturm_count(t, b) <= k && b < hi) {
      throw NumericError(fmt::format("eigenvalue {} not bracketed: count({:.17g}) = {}", k, b, sturm_count(t, b)));
    }
    const double value = 0.5 * (a + b);
    out.push_back(value);
    floor = a;
  }
  return out;
}

std::vector<double> fd_eigenvalues(double mu, double nu, int points, int count) {
  if (count < 0 || count > points / 4) {
    throw DomainError(fmt::format("requested {} eigenvalues from {} points; at most points/4 allowed", count, points));
  }
  return tridiagonal_eigenvalues(fd_matrix(mu, nu, points), count);
}

std::string_view to_string(VerifyStatus s) {
  switch (s) {
  case VerifyStatus::Pass: return "PASS";
  case VerifyStatus::Fail: return "FAIL";
  case VerifyStatus::Flagged: return "FLAGGED";
  }
  return "?";
}

EigenReport verify_spectrum(int m, int component, SolutionClass cls, const DimensionlessConfig& d, int n_max,
                            const VerifyOptions& opts) {
  if (n_max < 0) {
    throw DomainError(fmt::format("n_max must be non-negative, got {}", n_max));
  }
  const auto adm = admissible_classes(m, component, d);
  if (std::find(adm.begin(), adm.end(), cls) == adm.end()) {
    throw InadmissibleError(fmt::format("class ({}) at m = {}, component {} violates {}", label(cls), m, component,
                                        predicate_text(cls, component)));
  }
  const PTParameters pt = pt_parameters(m, component, d);
  EigenReport r;
  r.m = m;
  r.component = component;
  r.cls = cls;
  r.mu = pt.mu_for(cls);
  r.nu = pt.nu_for(cls);
  for (int n = 0; n <= n_max; ++n) {
    r.analytic_k2.push_back(k_squared(cls, n, pt));
  }
  run_ladder(r, opts);
  return r;
}

EigenReport verify_spectrum(int m, int component, const DimensionlessConfig& d, int n_max,
                            const VerifyOptions& opts) {
  return verify_spectrum(m, component, classify_solution(m, component, d), d, n_max, opts);
}

EigenReport verify_exponents(double mu, double nu, int n_max, const VerifyOptions& opts) {
  if (n_max < 0) {
    throw DomainError(fmt::format("n_max must be non-negative, got {}", n_max));
  }
  if (!(mu > -0.5 && nu > -0.5)) {
    throw InadmissibleError(fmt::format("exponents must exceed -1/2, got mu = {}, nu = {}", mu, nu));
  }
  EigenReport r;
  r.synthetic = true;
  r.mu = mu;
  r.nu = nu;
  for (int n = 0; n <= n_max; ++n) {
    const double k = n + (mu + nu + 1.0) / 2.0;
    r.analytic_k2.push_back(k * k);
  }
  run_ladder(r, opts);
  return r;
}

std::vector<EigenReport> verify_sweep(const DimensionlessConfig& d, int m_lo, int m_hi, int n_max,
                                      const VerifyOptions& opts, unsigned threads) {
  if (m_lo > m_hi) {
    throw DomainError(fmt::format("empty m range [{}, {}]", m_lo, m_hi));
  }
  validate(opts.grid);
  struct Job {
    int m;
    int component;
    SolutionClass cls;
  };
  std::vector<Job> jobs;
  for (int m = m_lo; m <= m_hi; ++m) {
    for (int component : {1, 2}) {
      for (SolutionClass c : admissible_classes(m, component, d)) {
        jobs.push_back({m, component, c});
      }
    }
  }
  std::vector<EigenReport> out(jobs.size());
  parallel_for(
      jobs.size(),
      [&](std::size_t i) { out[i] = verify_spectrum(jobs[i].m, jobs[i].component, jobs[i].cls, d, n_max, opts); },
      threads);
  return out;
}

} // namespace gupdirac
