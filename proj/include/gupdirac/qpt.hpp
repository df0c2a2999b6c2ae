#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gupdirac/params.hpp"
#include "gupdirac/spectrum.hpp"

namespace gupdirac {

enum class CriticalKind { Threshold, Crossing }; ///< odd / even index

[[nodiscard]] std::string_view to_string(CriticalKind k);

struct CriticalPoint {
  int index = 1;  ///< curly N
  double rho = 0.0;
  CriticalKind kind = CriticalKind::Threshold;
  int sign = 1;
};

/// rho_N = +-rho*/N for N = 1..N_max, ordered by N then sign (+ first).
[[nodiscard]] std::vector<CriticalPoint> critical_rhos(double rho_star, int N_max);

struct CriticalField {
  int index = 1;
  double field = 0.0;      ///< B_cr^N = B_cr + 4c / (N beta e hbar)
  double base_field = 0.0; ///< B_cr = 2 M c omega / e
};

/// Throws NoMinimalLengthError for beta = 0 (every B_cr^N is infinite).
[[nodiscard]] std::vector<CriticalField> critical_fields(const PhysicalConfig& cfg, int N_max);

enum class CurveFlag { Solid, Dashed, Both };

[[nodiscard]] std::string_view to_string(CurveFlag f);
[[nodiscard]] CurveFlag curve_flag_from_string(std::string_view s);

/// Family whose closed form continues `f` across |rho| = rho* on the same side of rho = 0:
/// ext_plus is i for rho > 0 and iii for rho < 0; ext_minus is ii for rho > 0 and v for rho < 0.
[[nodiscard]] Family continuation_key(Family f, double rho);

struct CurveValue {
  double energy = 0.0;
  CurveFlag flag = CurveFlag::Solid;
  std::vector<FamilyIndex> families; ///< empty when read back from CSV
  int degeneracy = 0;
  std::vector<Member> members;
};

struct LevelCurvePoint {
  double rho = 0.0;
  std::vector<CurveValue> curves; ///< rank order (ascending |E|)
};

struct SkippedPoint {
  double rho = 0.0;
  std::string reason;
};

struct Figure1Dataset {
  double rho_star = 20.0;
  Branch branch = Branch::Positive;
  int curves = 0;
  std::optional<double> step; ///< set when the grid is uniform
  std::vector<LevelCurvePoint> points;
  std::vector<SkippedPoint> skipped;
};

/// lo, lo + step, ... up to hi (inclusive within step * 1e-9), each point computed as lo + i * step.
[[nodiscard]] std::vector<double> uniform_grid(double lo, double hi, double step);

/// Points closer than this to rho = 0 or |rho| = rho* are skipped.
[[nodiscard]] double excluded_locus_tolerance(double rho_star);

/// The `curves` lowest levels of the branch at every grid point, with persistence flags.
[[nodiscard]] Figure1Dataset figure1_dataset(double rho_star, const std::vector<double>& rho_grid, int curves,
                                             Branch b = Branch::Positive, unsigned threads = 0);

struct KinkOptions {
  double tolerance = 5e-3; ///< threshold on |E(rho-h) - 2E(rho) + E(rho+h)|
  int catalog_N = 0;       ///< largest index matched against; 0 picks the largest one the grid resolves
  std::size_t max_curves = 0; ///< 0 = all curves in the dataset
};

struct Kink {
  double rho = 0.0;
  int curve = 0; ///< 1-based rank
  std::string reason; ///< "slope" or "members"
  std::optional<CriticalPoint> match;
  double distance = 0.0;
  bool accumulation = false; ///< inside |rho| < rho*/catalog_N + step, where the catalog is not resolved
};

struct KinkReport {
  double step = 0.0;
  int catalog_N = 0;
  double accumulation_radius = 0.0;
  std::vector<Kink> kinks;

  /// Kinks outside the accumulation zone without a critical point within one step.
  [[nodiscard]] std::vector<Kink> unmatched() const;
};

/// Largest N whose neighbours rho*/N, rho*/(N+1) are more than two steps apart.
[[nodiscard]] int resolvable_catalog_index(double rho_star, double step);

/// Slope changes and member-set changes along each rank curve, matched to critical_rhos.
/// Needs a uniform dataset; throws ResolutionError when catalog_N asks for points closer than
/// two grid steps (the offending pairs are listed).
[[nodiscard]] KinkReport detect_kinks(const Figure1Dataset& ds, const KinkOptions& opts = {});

struct Event {
  double rho = 0.0;
  std::string description;
  std::optional<CriticalPoint> match;
  double distance = 0.0;
};

/// Places where a dashed level shown in the dataset does not exist at the neighbouring grid
/// point nearer rho = 0. Requires family provenance.
[[nodiscard]] std::vector<Event> dashed_onsets(const Figure1Dataset& ds, int catalog_N = 0);

/// Solid/dashed coincidences: merged levels carrying both flags at a grid point, or a solid and
/// a dashed level swapping order between neighbouring points (located by linear interpolation).
[[nodiscard]] std::vector<Event> coincidences(const Figure1Dataset& ds, int catalog_N = 0);

/// CSV with columns rho, E_1..E_k, flag_1..flag_k; numbers with 15 significant digits.
void write_csv(std::ostream& out, const Figure1Dataset& ds);
/// Inverse of write_csv (energies and flags only). Throws DomainError on malformed input.
[[nodiscard]] Figure1Dataset read_csv(std::istream& in, double rho_star);

} // namespace gupdirac
