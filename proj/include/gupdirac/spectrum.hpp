#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gupdirac/params.hpp"

namespace gupdirac {

// Component-level Poschl-Teller data, spinor pairing and level enumeration.
//
// Component 1 is the upper spinor entry (angular index m), component 2 the lower one
// (angular index m + 1). Both are labelled by the spinor's m.

enum class SolutionClass { A, B, C, D };

[[nodiscard]] char label(SolutionClass c);
[[nodiscard]] SolutionClass solution_class_from_label(char c);

/// Classes (b) and (d) use -mu; classes (b) and (c) use -nu.
[[nodiscard]] bool flips_mu(SolutionClass c);
[[nodiscard]] bool flips_nu(SolutionClass c);

struct PTParameters {
  int m = 0;
  int component = 1;
  double zeta = 0.0;
  double xi = 0.0;
  double mu = 0.0;
  double nu = 0.0;

  /// Sign-resolved exponents for a class.
  [[nodiscard]] double mu_for(SolutionClass c) const { return flips_mu(c) ? -mu : mu; }
  [[nodiscard]] double nu_for(SolutionClass c) const { return flips_nu(c) ? -nu : nu; }
};

[[nodiscard]] PTParameters pt_parameters(int m, int component, const DimensionlessConfig& d);

/// Human-readable form of the m-range predicate of a class.
[[nodiscard]] std::string predicate_text(SolutionClass c, int component);

/// Every class whose endpoint predicate holds for (m, component), after removing the
/// coincident duplicates at nu = 0. One or two entries; two only inside the window
/// where both signs of mu vanish at the endpoint.
[[nodiscard]] std::vector<SolutionClass> admissible_classes(int m, int component, const DimensionlessConfig& d);

/// The class that takes part in spinor solutions. mu is flipped for m < tau
/// (component 1) or m <= tau (component 2); nu is flipped for m <= -1.
[[nodiscard]] SolutionClass classify_solution(int m, int component, const DimensionlessConfig& d);

/// Quarter-square k^2 of the component table for quantum number n.
[[nodiscard]] double k_squared(SolutionClass c, int n, const PTParameters& p);

enum class Branch { Positive, Negative };

[[nodiscard]] std::string_view to_string(Branch b);
[[nodiscard]] double sign(Branch b);

/// E / Mc^2 = +-sqrt(1 + (8 rho^2 / rho*) k^2 - rho*/2). Negative radicand throws UnphysicalStateError.
[[nodiscard]] double energy_from_k(double k2, const DimensionlessConfig& d, Branch b);

enum class Family { ExtPlus, ExtMinus, I, II, III, IVZero, V };

[[nodiscard]] std::string_view to_string(Family f);
[[nodiscard]] Family family_from_string(std::string_view s);

/// Families that occur in a regime (boundary regimes have none).
[[nodiscard]] std::vector<Family> families_in(Regime r);

/// +1 for ext_plus / i / iii, -1 for ext_minus / ii / v, 0 for zero modes.
[[nodiscard]] int bracket_sign(Family f);

enum class Persistence { Solid, Dashed };

/// Whether a family survives beta -> 0. External families inherit the status of the
/// internal family they continue on the same side of rho = 0.
[[nodiscard]] Persistence persistence(Family f, double rho);

struct FamilyIndex {
  Family family = Family::I;
  int N = 0; ///< 0 for zero modes

  friend bool operator==(const FamilyIndex&, const FamilyIndex&) = default;
};

struct Member {
  int n = 0;
  int m = 0;
  Family family = Family::I;
  int N = 0;

  friend bool operator==(const Member&, const Member&) = default;
};

struct Level {
  double energy = 0.0; ///< E / Mc^2
  Branch branch = Branch::Positive;
  std::vector<FamilyIndex> families;
  std::vector<Member> members;

  [[nodiscard]] int degeneracy() const { return static_cast<int>(members.size()); }
  [[nodiscard]] Family family() const { return families.front().family; }
  [[nodiscard]] int N() const { return families.front().N; }

  friend bool operator==(const Level&, const Level&) = default;
};

/// Closed-form energy E / Mc^2 of a family level. Zero modes return +-1 exactly.
/// Throws NotPermissibleError if the level has no members (or a zero mode is requested
/// on the wrong branch), RegimeBoundaryError / CriticalPointError outside the tables.
[[nodiscard]] double level_energy(Family f, int N, const DimensionlessConfig& d, Branch b);

/// All (n, m) of a family level, by direct enumeration of the admissible m interval.
[[nodiscard]] std::vector<Member> family_members(Family f, int N, const DimensionlessConfig& d);

/// Member count; 0 means the level is absent.
[[nodiscard]] int degeneracy(Family f, int N, const DimensionlessConfig& d);

/// Distinct levels of all families with N <= N_max, sorted by ascending energy, with
/// coincident energies merged.
[[nodiscard]] std::vector<Level> enumerate_levels(const DimensionlessConfig& d, Branch b, int N_max);

/// The `count` levels of smallest |E| on a branch, sorted by |E|.
[[nodiscard]] std::vector<Level> lowest_levels(const DimensionlessConfig& d, Branch b, std::size_t count);

/// Relative tolerance used to merge coincident levels.
inline constexpr double kLevelMergeTolerance = 1e-12;

struct ComponentSlot {
  SolutionClass cls = SolutionClass::A;
  int n = 0;
};

/// Which component solutions build the spinor (n, m), and at which energy.
struct SpinorLayout {
  int n = 0;
  int m = 0;
  Branch branch = Branch::Positive;
  Family family = Family::I;
  int N = 0;
  double energy = 0.0;
  std::optional<ComponentSlot> upper;
  std::optional<ComponentSlot> lower;
};

[[nodiscard]] SpinorLayout spinor_layout(int n, int m, const DimensionlessConfig& d, Branch b);

/// Same as spinor_layout but with explicitly chosen component classes; throws
/// InadmissibleError for a class whose predicate fails and DiscardedSolutionError when
/// the two classes cannot be paired.
[[nodiscard]] SpinorLayout spinor_layout(int n, int m, SolutionClass upper, SolutionClass lower,
                                         const DimensionlessConfig& d, Branch b);

} // namespace gupdirac
