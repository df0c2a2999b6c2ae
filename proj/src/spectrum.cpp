#include "gupdirac/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include <fmt/format.h>

#include "gupdirac/errors.hpp"

namespace gupdirac {

namespace {

// Upper bound on members materialised for one level. Near rho = 0 the zero-mode and
// shifted-row sectors grow like rho*/(2|rho|).
constexpr std::int64_t kMaxMembers = 5'000'000;

void require_nonzero_rho(const DimensionlessConfig& d) {
  validate(d);
  if (d.rho == 0.0) {
    throw CriticalPointError("rho = 0 (lambda = 0): the component tables do not apply");
  }
}

void check_component(int component) {
  if (component != 1 && component != 2) {
    throw DomainError(fmt::format("component must be 1 or 2, got {}", component));
  }
}

// Smallest integer strictly above x / largest integer strictly below x.
std::int64_t first_int_above(double x) { return static_cast<std::int64_t>(std::floor(x)) + 1; }
std::int64_t last_int_below(double x) { return static_cast<std::int64_t>(std::ceil(x)) - 1; }

void check_span(std::int64_t lo, std::int64_t hi) {
  if (hi - lo + 1 > kMaxMembers) {
    throw DomainError(fmt::format("level has {} members; rho is too close to the critical point", hi - lo + 1));
  }
}

// Closed form E^2 = 1 + 4 rho K [2 (rho/rho*) K + s].
double radicand(int K, int s, const DimensionlessConfig& d) {
  const double k = K;
  return 1.0 + 4.0 * d.rho * k * (2.0 * (d.rho / d.rho_star) * k + s);
}

double closed_form(int K, int s, const DimensionlessConfig& d, Branch b) {
  if (K == 0) {
    return sign(b);
  }
  const double r = radicand(K, s, d);
  if (r < 0.0) {
    throw UnphysicalStateError(fmt::format("negative radicand {} for K = {}", r, K));
  }
  return sign(b) * std::sqrt(r);
}

bool contains(const std::vector<SolutionClass>& v, SolutionClass c) {
  return std::find(v.begin(), v.end(), c) != v.end();
}

Regime checked_regime(const DimensionlessConfig& d) {
  require_nonzero_rho(d);
  const Regime r = classify_regime(d);
  if (is_boundary(r)) {
    throw RegimeBoundaryError(fmt::format("|rho| = rho* = {} is a regime boundary", d.rho_star));
  }
  return r;
}

Family upper_family(Regime r) {
  switch (r) {
  case Regime::InternalPositive: return Family::I;
  case Regime::InternalNegative: return Family::III;
  default: return Family::ExtPlus;
  }
}

Family lower_family(Regime r) {
  switch (r) {
  case Regime::InternalPositive: return Family::II;
  case Regime::InternalNegative: return Family::V;
  default: return Family::ExtMinus;
  }
}

void sort_and_merge(std::vector<Level>& levels) {
  std::stable_sort(levels.begin(), levels.end(),
                   [](const Level& a, const Level& b) { return a.energy < b.energy; });
  std::vector<Level> merged;
  for (auto& lvl : levels) {
    if (!merged.empty()) {
      Level& last = merged.back();
      const double scale = std::max(1.0, std::abs(last.energy));
      if (std::abs(lvl.energy - last.energy) <= kLevelMergeTolerance * scale) {
        last.families.insert(last.families.end(), lvl.families.begin(), lvl.families.end());
        last.members.insert(last.members.end(), lvl.members.begin(), lvl.members.end());
        continue;
      }
    }
    merged.push_back(std::move(lvl));
  }
  levels = std::move(merged);
}

Level make_level(Family f, int N, const DimensionlessConfig& d, Branch b, std::vector<Member> members) {
  Level lvl;
  lvl.branch = b;
  lvl.energy = closed_form(N, bracket_sign(f), d, b);
  lvl.families.push_back({f, N});
  lvl.members = std::move(members);
  return lvl;
}

bool zero_mode_on_branch(Regime r, Branch b) {
  return (r == Regime::InternalPositive && b == Branch::Negative) ||
         (r == Regime::InternalNegative && b == Branch::Positive);
}

} // namespace

char label(SolutionClass c) {
  switch (c) {
  case SolutionClass::A: return 'a';
  case SolutionClass::B: return 'b';
  case SolutionClass::C: return 'c';
  case SolutionClass::D: return 'd';
  }
  return '?';
}

SolutionClass solution_class_from_label(char c) {
  switch (c) {
  case 'a': case 'A': return SolutionClass::A;
  case 'b': case 'B': return SolutionClass::B;
  case 'c': case 'C': return SolutionClass::C;
  case 'd': case 'D': return SolutionClass::D;
  default: throw DomainError(fmt::format("unknown solution class '{}'", c));
  }
}

bool flips_mu(SolutionClass c) { return c == SolutionClass::B || c == SolutionClass::D; }
bool flips_nu(SolutionClass c) { return c == SolutionClass::B || c == SolutionClass::C; }

PTParameters pt_parameters(int m, int component, const DimensionlessConfig& d) {
  require_nonzero_rho(d);
  check_component(component);
  const double ibl = d.inv_beta_lambda();
  PTParameters p;
  p.m = m;
  p.component = component;
  p.zeta = m - 0.5 + component;
  p.xi = m + 2.5 - component + ibl;
  p.mu = p.xi - 0.5;
  p.nu = p.zeta - 0.5;
  return p;
}

std::string predicate_text(SolutionClass c, int component) {
  check_component(component);
  if (component == 1) {
    switch (c) {
    case SolutionClass::A: return "m >= 0 and m > -3/2 - 1/(beta lambda)";
    case SolutionClass::B: return "m <= -1 and m < -1/2 - 1/(beta lambda)";
    case SolutionClass::C: return "-3/2 - 1/(beta lambda) < m <= -1";
    case SolutionClass::D: return "0 <= m < -1/2 - 1/(beta lambda)";
    }
  }
  switch (c) {
  case SolutionClass::A: return "m >= 0 and m > -1/2 - 1/(beta lambda)";
  case SolutionClass::B: return "m <= -1 and m < 1/2 - 1/(beta lambda)";
  case SolutionClass::C: return "-1/2 - 1/(beta lambda) < m <= -1";
  case SolutionClass::D: return "0 <= m < 1/2 - 1/(beta lambda)";
  }
  return {};
}

std::vector<SolutionClass> admissible_classes(int m, int component, const DimensionlessConfig& d) {
  check_component(component);
  const double tau = tau_of(d);
  const double md = m;
  std::vector<SolutionClass> out;
  if (component == 1) {
    if (m >= 0 && md > tau - 1.0) out.push_back(SolutionClass::A);
    if (m <= -1 && md < tau) out.push_back(SolutionClass::B);
    if (md > tau - 1.0 && m <= -1) out.push_back(SolutionClass::C);
    if (m >= 0 && md < tau) out.push_back(SolutionClass::D);
  } else {
    if (m >= 0 && md > tau) out.push_back(SolutionClass::A);
    if (m <= -1 && md < tau + 1.0) out.push_back(SolutionClass::B);
    if (md > tau && m <= -1) out.push_back(SolutionClass::C);
    // At m = -1 (nu = 0) class (d) coincides with (b).
    if (m >= 0 && md < tau + 1.0) out.push_back(SolutionClass::D);
  }
  return out;
}

SolutionClass classify_solution(int m, int component, const DimensionlessConfig& d) {
  check_component(component);
  const double tau = tau_of(d);
  const double md = m;
  const bool flip_mu = component == 1 ? md < tau : !(md > tau);
  const bool flip_nu = m <= -1;
  SolutionClass c;
  if (flip_mu) {
    c = flip_nu ? SolutionClass::B : SolutionClass::D;
  } else {
    c = flip_nu ? SolutionClass::C : SolutionClass::A;
  }
  if (!contains(admissible_classes(m, component, d), c)) {
    throw InternalConsistencyError(
        fmt::format("class ({}) selected for m = {}, component {} fails its predicate", label(c), m, component));
  }
  return c;
}

double k_squared(SolutionClass c, int n, const PTParameters& p) {
  if (n < 0) {
    throw DomainError(fmt::format("n must be non-negative, got {}", n));
  }
  const double two_n = 2.0 * n;
  double s = 0.0;
  switch (c) {
  case SolutionClass::A: s = two_n + p.zeta + p.xi; break;
  case SolutionClass::B: s = two_n + 2.0 - p.zeta - p.xi; break;
  case SolutionClass::C: s = two_n + 1.0 - p.zeta + p.xi; break;
  case SolutionClass::D: s = two_n + 1.0 + p.zeta - p.xi; break;
  }
  return 0.25 * s * s;
}

std::string_view to_string(Branch b) { return b == Branch::Positive ? "+" : "-"; }

double sign(Branch b) { return b == Branch::Positive ? 1.0 : -1.0; }

double energy_from_k(double k2, const DimensionlessConfig& d, Branch b) {
  require_nonzero_rho(d);
  const double r = 1.0 + (8.0 * d.rho * d.rho / d.rho_star) * k2 - 0.5 * d.rho_star;
  if (r < 0.0) {
    throw UnphysicalStateError(
        fmt::format("unphysical (n, m) for this regime: k^2 = {} gives E^2 = {} < 0", k2, r));
  }
  return sign(b) * std::sqrt(r);
}

std::string_view to_string(Family f) {
  switch (f) {
  case Family::ExtPlus: return "ext_plus";
  case Family::ExtMinus: return "ext_minus";
  case Family::I: return "i";
  case Family::II: return "ii";
  case Family::III: return "iii";
  case Family::IVZero: return "iv_zero";
  case Family::V: return "v";
  }
  return "?";
}

Family family_from_string(std::string_view s) {
  for (Family f : {Family::ExtPlus, Family::ExtMinus, Family::I, Family::II, Family::III, Family::IVZero,
                   Family::V}) {
    if (to_string(f) == s) {
      return f;
    }
  }
  throw DomainError(fmt::format("unknown level family '{}'", s));
}

std::vector<Family> families_in(Regime r) {
  switch (r) {
  case Regime::ExternalPositive:
  case Regime::ExternalNegative: return {Family::ExtPlus, Family::ExtMinus};
  case Regime::InternalPositive: return {Family::I, Family::II, Family::IVZero};
  case Regime::InternalNegative: return {Family::III, Family::IVZero, Family::V};
  default: return {};
  }
}

int bracket_sign(Family f) {
  switch (f) {
  case Family::ExtPlus:
  case Family::I:
  case Family::III: return 1;
  case Family::ExtMinus:
  case Family::II:
  case Family::V: return -1;
  case Family::IVZero: return 0;
  }
  return 0;
}

Persistence persistence(Family f, double rho) {
  switch (f) {
  case Family::I:
  case Family::IVZero:
  case Family::V: return Persistence::Solid;
  case Family::II:
  case Family::III: return Persistence::Dashed;
  case Family::ExtPlus: return rho > 0.0 ? Persistence::Solid : Persistence::Dashed;
  case Family::ExtMinus: return rho > 0.0 ? Persistence::Dashed : Persistence::Solid;
  }
  return Persistence::Solid;
}

std::vector<Member> family_members(Family f, int N, const DimensionlessConfig& d) {
  const Regime r = checked_regime(d);
  const auto present = families_in(r);
  if (std::find(present.begin(), present.end(), f) == present.end()) {
    return {};
  }
  const double tau = tau_of(d);
  std::vector<Member> out;

  if (f == Family::IVZero) {
    if (N != 0) {
      return {};
    }
    // Single-component states at n = 0 of the shifted (c)/(c) or (d)/(d) rows.
    std::int64_t lo = 0;
    std::int64_t hi = -1;
    if (r == Regime::InternalPositive) {
      lo = first_int_above(tau);
      hi = -1;
    } else {
      lo = 0;
      hi = last_int_below(tau);
    }
    check_span(lo, hi);
    for (std::int64_t m = lo; m <= hi; ++m) {
      out.push_back({0, static_cast<int>(m), f, 0});
    }
    return out;
  }
  if (N < 1) {
    return {};
  }

  if (bracket_sign(f) > 0) {
    // (a)/(a) pairs: N = n + m + 1.
    std::int64_t lo = 0;
    if (f == Family::III) {
      lo = std::max<std::int64_t>(0, first_int_above(tau));
    }
    for (std::int64_t m = lo; m <= N - 1; ++m) {
      out.push_back({static_cast<int>(N - 1 - m), static_cast<int>(m), f, N});
    }
    if (f == Family::I) {
      // (c)/(c) pairs with shifted index: N = n for tau < m <= -1.
      const std::int64_t m_lo = first_int_above(tau);
      check_span(m_lo, -1);
      for (std::int64_t m = m_lo; m <= -1; ++m) {
        out.push_back({N, static_cast<int>(m), f, N});
      }
    }
  } else {
    // (b)/(b) pairs: N = n + |m|.
    std::int64_t hi = -1;
    if (f == Family::II) {
      hi = std::min<std::int64_t>(-1, last_int_below(tau));
    }
    for (std::int64_t m = -N; m <= hi; ++m) {
      out.push_back({static_cast<int>(N + m), static_cast<int>(m), f, N});
    }
    if (f == Family::V) {
      // (d)/(d) pairs with shifted index: N = n for 0 <= m < tau.
      const std::int64_t m_hi = last_int_below(tau);
      check_span(0, m_hi);
      for (std::int64_t m = 0; m <= m_hi; ++m) {
        out.push_back({N, static_cast<int>(m), f, N});
      }
    }
  }
  return out;
}

int degeneracy(Family f, int N, const DimensionlessConfig& d) {
  return static_cast<int>(family_members(f, N, d).size());
}

double level_energy(Family f, int N, const DimensionlessConfig& d, Branch b) {
  const Regime r = checked_regime(d);
  if (f == Family::IVZero) {
    if (N != 0) {
      throw NotPermissibleError("zero modes carry N = 0");
    }
    if (!zero_mode_on_branch(r, b)) {
      throw NotPermissibleError(
          fmt::format("no zero mode on the {} branch in regime {}", to_string(b), to_string(r)));
    }
  } else if (N < 1) {
    throw NotPermissibleError(fmt::format("family {} needs N >= 1, got {}", to_string(f), N));
  }
  if (degeneracy(f, N, d) == 0) {
    throw NotPermissibleError(fmt::format("level not permissible: family {} with N = {} has degeneracy 0 at rho = {}",
                                          to_string(f), N, d.rho));
  }
  return closed_form(N, bracket_sign(f), d, b);
}

std::vector<Level> enumerate_levels(const DimensionlessConfig& d, Branch b, int N_max) {
  const Regime r = checked_regime(d);
  if (N_max < 1) {
    throw DomainError(fmt::format("N_max must be >= 1, got {}", N_max));
  }
  std::vector<Level> levels;
  for (Family f : families_in(r)) {
    if (f == Family::IVZero) {
      if (zero_mode_on_branch(r, b)) {
        auto members = family_members(f, 0, d);
        if (!members.empty()) {
          levels.push_back(make_level(f, 0, d, b, std::move(members)));
        }
      }
      continue;
    }
    for (int N = 1; N <= N_max; ++N) {
      auto members = family_members(f, N, d);
      if (!members.empty()) {
        levels.push_back(make_level(f, N, d, b, std::move(members)));
      }
    }
  }
  sort_and_merge(levels);
  return levels;
}

std::vector<Level> lowest_levels(const DimensionlessConfig& d, Branch b, std::size_t count) {
  const Regime r = checked_regime(d);
  std::vector<Level> levels;
  if (count == 0) {
    return levels;
  }
  const double tau = tau_of(d);
  for (Family f : families_in(r)) {
    if (f == Family::IVZero) {
      if (zero_mode_on_branch(r, b)) {
        auto members = family_members(f, 0, d);
        if (!members.empty()) {
          levels.push_back(make_level(f, 0, d, b, std::move(members)));
        }
      }
      continue;
    }
    // Existing levels of one family form a contiguous N range with |E| increasing in N.
    std::int64_t start = 1;
    if (f == Family::II) {
      start = std::max<std::int64_t>(1, first_int_above(-tau));
    } else if (f == Family::III) {
      start = std::max<std::int64_t>(1, first_int_above(tau) + 1);
    }
    for (std::int64_t N = start; N < start + static_cast<std::int64_t>(count); ++N) {
      auto members = family_members(f, static_cast<int>(N), d);
      if (members.empty()) {
        throw InternalConsistencyError(
            fmt::format("family {} level N = {} unexpectedly empty at rho = {}", to_string(f), N, d.rho));
      }
      levels.push_back(make_level(f, static_cast<int>(N), d, b, std::move(members)));
    }
  }
  sort_and_merge(levels);
  std::stable_sort(levels.begin(), levels.end(),
                   [](const Level& a, const Level& c) { return std::abs(a.energy) < std::abs(c.energy); });
  if (levels.size() > count) {
    levels.resize(count);
  }
  return levels;
}

SpinorLayout spinor_layout(int n, int m, SolutionClass upper, SolutionClass lower, const DimensionlessConfig& d,
                           Branch b) {
  const Regime r = checked_regime(d);
  if (n < 0) {
    throw DomainError(fmt::format("n must be non-negative, got {}", n));
  }
  if (!contains(admissible_classes(m, 1, d), upper)) {
    throw InadmissibleError(fmt::format("upper component class ({}) at m = {} violates {}", label(upper), m,
                                        predicate_text(upper, 1)));
  }
  if (!contains(admissible_classes(m, 2, d), lower)) {
    throw InadmissibleError(fmt::format("lower component class ({}) at m = {} violates {}", label(lower), m,
                                        predicate_text(lower, 2)));
  }

  SpinorLayout out;
  out.n = n;
  out.m = m;
  out.branch = b;
  using SC = SolutionClass;
  if (upper == SC::A && lower == SC::A) {
    out.family = upper_family(r);
    out.N = n + m + 1;
    out.upper = ComponentSlot{SC::A, n};
    out.lower = ComponentSlot{SC::A, n};
  } else if (upper == SC::B && lower == SC::B) {
    out.family = lower_family(r);
    out.N = n - m;
    out.upper = ComponentSlot{SC::B, n};
    out.lower = ComponentSlot{SC::B, n};
  } else if (upper == SC::C && lower == SC::C) {
    if (n == 0) {
      out.family = Family::IVZero;
      out.N = 0;
      out.lower = ComponentSlot{SC::C, 0};
    } else {
      out.family = Family::I;
      out.N = n;
      out.upper = ComponentSlot{SC::C, n - 1};
      out.lower = ComponentSlot{SC::C, n};
    }
  } else if (upper == SC::D && lower == SC::D) {
    if (n == 0) {
      out.family = Family::IVZero;
      out.N = 0;
      out.upper = ComponentSlot{SC::D, 0};
    } else {
      out.family = Family::V;
      out.N = n;
      out.upper = ComponentSlot{SC::D, n};
      out.lower = ComponentSlot{SC::D, n - 1};
    }
  } else {
    throw DiscardedSolutionError(
        fmt::format("discarded solution: upper class ({}) and lower class ({}) at m = {} have no common energy",
                    label(upper), label(lower), m));
  }
  if (out.family == Family::IVZero && !zero_mode_on_branch(r, b)) {
    throw NotPermissibleError(fmt::format("the zero mode at m = {} has no {} branch partner", m, to_string(b)));
  }
  out.energy = closed_form(out.N, bracket_sign(out.family), d, b);
  return out;
}

SpinorLayout spinor_layout(int n, int m, const DimensionlessConfig& d, Branch b) {
  return spinor_layout(n, m, classify_solution(m, 1, d), classify_solution(m, 2, d), d, b);
}

} // namespace gupdirac
