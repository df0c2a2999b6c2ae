#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gupdirac/params.hpp"
#include "gupdirac/spectrum.hpp"

namespace gupdirac {

// Finite-difference check of the one-dimensional problem
//   -u'' + V(x) u = k^2 u,  |x| < pi/2,
// independent of the closed-form solutions: only the potential and a tridiagonal
// Sturm-sequence bisection are used.

/// ((mu^2 + nu^2)/2 - 1/4) / cos^2 x + ((mu^2 - nu^2)/2) sin x / cos^2 x. Throws DomainError for |x| >= pi/2.
[[nodiscard]] double potential(double mu, double nu, double x);

/// Staggered nodes x_j = -pi/2 + (j + 1/2) h, h = pi / points, so the first and last nodes sit
/// delta = h/2 inside the singular endpoints. `ladder` lists the refinement levels.
struct GridSpec {
  std::vector<int> ladder{512, 1024, 2048};
};

/// Throws DomainError unless every count is >= 64 and each level doubles the previous one.
void validate(const GridSpec& g);

[[nodiscard]] std::vector<double> grid_nodes(int points);

/// Symmetric tridiagonal matrix: diagonal d, off-diagonal e (size d.size() - 1).
struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;
};

/// Second-order central differences on `points` nodes. The wall condition is imposed half a
/// step outside the end nodes (u = 0 at x = +-pi/2, antisymmetric ghost value).
[[nodiscard]] Tridiagonal fd_matrix(double mu, double nu, int points);

/// Number of eigenvalues strictly below `lambda`.
[[nodiscard]] int sturm_count(const Tridiagonal& t, double lambda);

/// The `count` lowest eigenvalues, ascending, by bisection on the Sturm count.
/// Throws NumericError when bisection fails to bracket an eigenvalue.
[[nodiscard]] std::vector<double> tridiagonal_eigenvalues(const Tridiagonal& t, int count);

/// Lowest `count` eigenvalues k^2 of the discretised problem; needs count <= points / 4.
[[nodiscard]] std::vector<double> fd_eigenvalues(double mu, double nu, int points, int count);

enum class VerifyStatus { Pass, Fail, Flagged };

[[nodiscard]] std::string_view to_string(VerifyStatus s);

struct VerifyOptions {
  GridSpec grid{};
  double tolerance = 1e-4;       ///< relative error of the extrapolated k^2
  double raw_tolerance = 1e-3;   ///< relative error on the finest grid
  double exponent_floor = 0.5;   ///< mu, nu below this are reported as Flagged
};

struct EigenReport {
  int m = 0;
  int component = 1;
  SolutionClass cls = SolutionClass::A;
  bool synthetic = false; ///< built from raw (mu, nu) rather than (m, component)
  double mu = 0.0;        ///< sign-resolved exponents
  double nu = 0.0;
  std::vector<double> analytic_k2;
  std::vector<int> grid_points;
  std::vector<std::vector<double>> numeric_k2; ///< [grid][n]
  std::vector<double> extrapolated_k2;
  std::vector<double> observed_order;
  std::vector<double> relative_error;     ///< extrapolated vs analytic
  std::vector<double> raw_relative_error; ///< finest grid vs analytic
  double max_relative_error = 0.0;
  double max_raw_relative_error = 0.0;
  VerifyStatus status = VerifyStatus::Pass;
  std::string note;
};

/// Compares k^2 of the selected class of (m, component) with the extrapolated numerics, n <= n_max.
[[nodiscard]] EigenReport verify_spectrum(int m, int component, const DimensionlessConfig& d, int n_max,
                                          const VerifyOptions& opts = {});
/// Explicit class; throws InadmissibleError when its predicate fails.
[[nodiscard]] EigenReport verify_spectrum(int m, int component, SolutionClass cls, const DimensionlessConfig& d,
                                          int n_max, const VerifyOptions& opts = {});

/// Same check for raw exponents with k_n = n + (mu + nu + 1)/2.
[[nodiscard]] EigenReport verify_exponents(double mu, double nu, int n_max, const VerifyOptions& opts = {});

/// Every admissible (m, component, class) with m in [m_lo, m_hi], in that order, run in parallel.
[[nodiscard]] std::vector<EigenReport> verify_sweep(const DimensionlessConfig& d, int m_lo, int m_hi, int n_max,
                                                    const VerifyOptions& opts = {}, unsigned threads = 0);

} // namespace gupdirac
