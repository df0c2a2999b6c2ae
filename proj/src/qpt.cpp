#include "gupdirac/qpt.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <tuple>

#include <fmt/format.h>

#include "gupdirac/errors.hpp"
#include "gupdirac/format.hpp"
#include "gupdirac/parallel.hpp"

namespace gupdirac {

namespace {

constexpr double kStepSlack = 1e-6;

// (continuation family, N) of every family on a curve, plus the member count
using Identity = std::tuple<std::vector<std::pair<int, int>>, int, int>;

Identity identity_of(const CurveValue& c, double rho) {
  std::vector<std::pair<int, int>> keys;
  for (const auto& f : c.families) {
    keys.emplace_back(static_cast<int>(continuation_key(f.family, rho)), f.N);
  }
  std::sort(keys.begin(), keys.end());
  return {keys, c.degeneracy, static_cast<int>(c.flag)};
}

// Common spacing of an increasing grid. With allow_gaps, single missing points (spacing of
// two steps) are tolerated, as left by skipped loci.
std::optional<double> detect_step(const std::vector<double>& grid, bool allow_gaps = false) {
  if (grid.size() < 2) {
    return std::nullopt;
  }
  double step = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < grid.size(); ++i) {
    step = std::min(step, grid[i] - grid[i - 1]);
  }
  if (!(step > 0.0)) {
    return std::nullopt;
  }
  double covered = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double g = (grid[i] - grid[i - 1]) / step;
    const double k = std::round(g);
    if (std::abs(g - k) > 1e-6 || k > (allow_gaps ? 2.0 : 1.0)) {
      return std::nullopt;
    }
    covered += k;
  }
  // refine with the full span
  return (grid.back() - grid.front()) / covered;
}

bool same_side(double a, double b) { return (a > 0.0) == (b > 0.0); }

// Separation of neighbouring points in units of the step, or 0 if not on the same side.
double gap_in_steps(double a, double b, double step) {
  if (!same_side(a, b)) {
    return 0.0;
  }
  return std::abs(b - a) / step;
}

bool is_one_step(double a, double b, double step) { return std::abs(gap_in_steps(a, b, step) - 1.0) <= kStepSlack; }

// Up to two steps: neighbours across a single skipped point.
bool is_adjacent(double a, double b, double step) {
  const double g = gap_in_steps(a, b, step);
  return g > 1.0 - kStepSlack && g <= 2.0 + kStepSlack;
}

std::pair<std::optional<CriticalPoint>, double> nearest_critical(double rho, const std::vector<CriticalPoint>& catalog,
                                                                 double max_distance) {
  std::optional<CriticalPoint> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto& c : catalog) {
    const double d = std::abs(c.rho - rho);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  if (best && best_d <= max_distance * (1.0 + kStepSlack)) {
    return {best, best_d};
  }
  return {std::nullopt, best_d};
}

int auto_catalog(const Figure1Dataset& ds, int requested) {
  if (requested > 0) {
    return requested;
  }
  return ds.step ? resolvable_catalog_index(ds.rho_star, *ds.step) : 64;
}

double match_window(const Figure1Dataset& ds) { return ds.step ? *ds.step : 0.0; }

// Family in effect at rho for a continuation key.
Family family_at(Family key, double rho, double rho_star) {
  const bool external = std::abs(rho) > rho_star;
  switch (key) {
  case Family::I: return external ? Family::ExtPlus : Family::I;
  case Family::III: return external ? Family::ExtPlus : Family::III;
  case Family::II: return external ? Family::ExtMinus : Family::II;
  case Family::V: return external ? Family::ExtMinus : Family::V;
  default: return key;
  }
}

} // namespace

std::string_view to_string(CriticalKind k) { return k == CriticalKind::Threshold ? "threshold" : "crossing"; }

std::vector<CriticalPoint> critical_rhos(double rho_star, int N_max) {
  if (!(rho_star > 0.0) || !std::isfinite(rho_star)) {
    throw DomainError(fmt::format("rho* must be positive and finite, got {}", rho_star));
  }
  if (N_max < 1) {
    throw DomainError(fmt::format("N_max must be at least 1, got {}", N_max));
  }
  std::vector<CriticalPoint> out;
  out.reserve(2 * static_cast<std::size_t>(N_max));
  for (int N = 1; N <= N_max; ++N) {
    const auto kind = N % 2 == 1 ? CriticalKind::Threshold : CriticalKind::Crossing;
    out.push_back({N, rho_star / N, kind, 1});
    out.push_back({N, -rho_star / N, kind, -1});
  }
  return out;
}

std::vector<CriticalField> critical_fields(const PhysicalConfig& cfg, int N_max) {
  validate(cfg);
  if (N_max < 1) {
    throw DomainError(fmt::format("N_max must be at least 1, got {}", N_max));
  }
  if (cfg.beta == 0.0) {
    throw NoMinimalLengthError("beta = 0: all B_cr^N are infinite (they diverge as beta -> 0)");
  }
  const double base = critical_field(cfg);
  const auto& k = cfg.constants;
  std::vector<CriticalField> out;
  for (int N = 1; N <= N_max; ++N) {
    out.push_back({N, base + 4.0 * k.c / (N * cfg.beta * k.e * k.hbar), base});
  }
  return out;
}

std::string_view to_string(CurveFlag f) {
  switch (f) {
  case CurveFlag::Solid: return "solid";
  case CurveFlag::Dashed: return "dashed";
  case CurveFlag::Both: return "both";
  }
  return "?";
}

CurveFlag curve_flag_from_string(std::string_view s) {
  for (CurveFlag f : {CurveFlag::Solid, CurveFlag::Dashed, CurveFlag::Both}) {
    if (to_string(f) == s) {
      return f;
    }
  }
  throw DomainError(fmt::format("unknown curve flag '{}'", s));
}

Family continuation_key(Family f, double rho) {
  if (f == Family::ExtPlus) {
    return rho > 0.0 ? Family::I : Family::III;
  }
  if (f == Family::ExtMinus) {
    return rho > 0.0 ? Family::II : Family::V;
  }
  return f;
}

std::vector<double> uniform_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !std::isfinite(lo) || !std::isfinite(hi) || hi < lo) {
    throw DomainError(fmt::format("bad grid [{}, {}] with step {}", lo, hi, step));
  }
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  if (count > 10'000'000) {
    throw DomainError(fmt::format("grid of {} points is too large", count));
  }
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = lo + static_cast<double>(i) * step;
  }
  return out;
}

double excluded_locus_tolerance(double rho_star) { return 1e-9 * rho_star; }

Figure1Dataset figure1_dataset(double rho_star, const std::vector<double>& rho_grid, int curves, Branch b,
                               unsigned threads) {
  validate(DimensionlessConfig{1.0, rho_star});
  if (curves < 1) {
    throw DomainError(fmt::format("curves must be at least 1, got {}", curves));
  }
  Figure1Dataset ds;
  ds.rho_star = rho_star;
  ds.branch = b;
  ds.curves = curves;
  ds.step = detect_step(rho_grid);

  const double tol = excluded_locus_tolerance(rho_star);
  std::vector<std::optional<LevelCurvePoint>> computed(rho_grid.size());
  std::vector<std::string> reasons(rho_grid.size());
  parallel_for(
      rho_grid.size(),
      [&](std::size_t i) {
        const double rho = rho_grid[i];
        if (!std::isfinite(rho)) {
          reasons[i] = "non-finite rho";
          return;
        }
        if (std::abs(rho) <= tol) {
          reasons[i] = "rho = 0 is the critical point";
          return;
        }
        if (std::abs(std::abs(rho) - rho_star) <= tol) {
          reasons[i] = "|rho| = rho* is a regime boundary";
          return;
        }
        const DimensionlessConfig d{rho, rho_star};
        LevelCurvePoint pt;
        pt.rho = rho;
        for (auto& lvl : lowest_levels(d, b, static_cast<std::size_t>(curves))) {
          CurveValue c;
          c.energy = lvl.energy;
          bool solid = false;
          bool dashed = false;
          for (const auto& f : lvl.families) {
            (persistence(f.family, rho) == Persistence::Solid ? solid : dashed) = true;
          }
          c.flag = solid && dashed ? CurveFlag::Both : (solid ? CurveFlag::Solid : CurveFlag::Dashed);
          c.families = std::move(lvl.families);
          c.degeneracy = lvl.degeneracy();
          c.members = std::move(lvl.members);
          pt.curves.push_back(std::move(c));
        }
        computed[i] = std::move(pt);
      },
      threads);
  for (std::size_t i = 0; i < rho_grid.size(); ++i) {
    if (computed[i]) {
      ds.points.push_back(std::move(*computed[i]));
    } else {
      ds.skipped.push_back({rho_grid[i], reasons[i]});
    }
  }
  return ds;
}

std::vector<Kink> KinkReport::unmatched() const {
  std::vector<Kink> out;
  for (const auto& k : kinks) {
    if (!k.accumulation && !k.match) {
      out.push_back(k);
    }
  }
  return out;
}

int resolvable_catalog_index(double rho_star, double step) {
  if (!(step > 0.0)) {
    throw DomainError(fmt::format("grid step must be positive, got {}", step));
  }
  int N = 1;
  while (N < 100000 && rho_star / (static_cast<double>(N + 1) * (N + 2)) > 2.0 * step) {
    ++N;
  }
  return N;
}

KinkReport detect_kinks(const Figure1Dataset& ds, const KinkOptions& opts) {
  if (!ds.step) {
    throw DomainError("kink detection needs a uniform rho grid");
  }
  const double step = *ds.step;
  KinkReport rep;
  rep.step = step;
  const int resolvable = resolvable_catalog_index(ds.rho_star, step);
  rep.catalog_N = opts.catalog_N > 0 ? opts.catalog_N : resolvable;
  if (rep.catalog_N > resolvable) {
    std::string pairs;
    for (int N = resolvable; N < rep.catalog_N; ++N) {
      pairs += fmt::format("{}(rho*/{} = {:.6g}, rho*/{} = {:.6g}, gap {:.3g})", pairs.empty() ? "" : "; ", N,
                           ds.rho_star / N, N + 1, ds.rho_star / (N + 1), ds.rho_star / N - ds.rho_star / (N + 1));
    }
    throw ResolutionError(fmt::format("grid step {} cannot separate critical points closer than two steps: {}", step,
                                      pairs));
  }
  rep.accumulation_radius = ds.rho_star / rep.catalog_N + step;
  const auto catalog = critical_rhos(ds.rho_star, rep.catalog_N);

  std::size_t n_curves = static_cast<std::size_t>(ds.curves);
  if (opts.max_curves > 0) {
    n_curves = std::min(n_curves, opts.max_curves);
  }
  const auto& pts = ds.points;
  struct Candidate {
    double rho;
    double strength;
    bool members;
  };
  for (std::size_t c = 0; c < n_curves; ++c) {
    std::vector<Candidate> cand;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (c >= pts[i].curves.size()) {
        continue;
      }
      if (i > 0 && i + 1 < pts.size() && is_one_step(pts[i - 1].rho, pts[i].rho, step) &&
          is_one_step(pts[i].rho, pts[i + 1].rho, step) && c < pts[i - 1].curves.size() &&
          c < pts[i + 1].curves.size()) {
        const double d2 =
            pts[i - 1].curves[c].energy - 2.0 * pts[i].curves[c].energy + pts[i + 1].curves[c].energy;
        if (std::abs(d2) > opts.tolerance) {
          cand.push_back({pts[i].rho, std::abs(d2), false});
        }
      }
      if (i + 1 < pts.size() && is_adjacent(pts[i].rho, pts[i + 1].rho, step) && c < pts[i + 1].curves.size()) {
        if (identity_of(pts[i].curves[c], pts[i].rho) != identity_of(pts[i + 1].curves[c], pts[i + 1].rho)) {
          cand.push_back({0.5 * (pts[i].rho + pts[i + 1].rho), 0.0, true});
        }
      }
    }
    std::sort(cand.begin(), cand.end(), [](const Candidate& a, const Candidate& b) { return a.rho < b.rho; });
    // one kink per cluster of candidates closer than two steps
    std::size_t i = 0;
    while (i < cand.size()) {
      std::size_t j = i;
      while (j + 1 < cand.size() && cand[j + 1].rho - cand[j].rho <= 1.5 * step) {
        ++j;
      }
      const Candidate* best = nullptr;
      for (std::size_t k = i; k <= j; ++k) {
        if (cand[k].members) {
          if (!best || !best->members) {
            best = &cand[k];
          }
        } else if (!best || (!best->members && cand[k].strength > best->strength)) {
          best = &cand[k];
        }
      }
      Kink kink;
      kink.rho = best->rho;
      kink.curve = static_cast<int>(c) + 1;
      kink.reason = best->members ? "members" : "slope";
      auto [match, dist] = nearest_critical(kink.rho, catalog, step);
      kink.match = match;
      kink.distance = dist;
      kink.accumulation = std::abs(kink.rho) < rep.accumulation_radius;
      rep.kinks.push_back(std::move(kink));
      i = j + 1;
    }
  }
  std::stable_sort(rep.kinks.begin(), rep.kinks.end(), [](const Kink& a, const Kink& b) {
    return std::tie(a.rho, a.curve) < std::tie(b.rho, b.curve);
  });
  return rep;
}

std::vector<Event> dashed_onsets(const Figure1Dataset& ds, int catalog_N) {
  if (!ds.step) {
    throw DomainError("dashed-onset detection needs a uniform rho grid");
  }
  const double step = *ds.step;
  const auto catalog = critical_rhos(ds.rho_star, auto_catalog(ds, catalog_N));
  const auto& pts = ds.points;
  std::vector<Event> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double rho = pts[i].rho;
    // neighbour nearer rho = 0
    std::optional<std::size_t> j;
    if (rho > 0.0 && i > 0 && is_adjacent(pts[i - 1].rho, rho, step)) {
      j = i - 1;
    } else if (rho < 0.0 && i + 1 < pts.size() && is_adjacent(pts[i + 1].rho, rho, step)) {
      j = i + 1;
    }
    if (!j) {
      continue;
    }
    const double rho_j = pts[*j].rho;
    const DimensionlessConfig dj{rho_j, ds.rho_star};
    for (const auto& c : pts[i].curves) {
      if (c.families.empty() && c.flag != CurveFlag::Solid) {
        throw DomainError("dashed-onset detection needs family provenance (not available from CSV)");
      }
      for (const auto& f : c.families) {
        if (persistence(f.family, rho) != Persistence::Dashed) {
          continue;
        }
        const Family key = continuation_key(f.family, rho);
        if (degeneracy(family_at(key, rho_j, ds.rho_star), f.N, dj) > 0) {
          continue;
        }
        Event e;
        e.rho = 0.5 * (rho + rho_j);
        e.description = fmt::format("{} N={} appears", to_string(key), f.N);
        auto [match, dist] = nearest_critical(e.rho, catalog, step);
        e.match = match;
        e.distance = dist;
        out.push_back(std::move(e));
      }
    }
  }
  return out;
}

std::vector<Event> coincidences(const Figure1Dataset& ds, int catalog_N) {
  const auto catalog = critical_rhos(ds.rho_star, auto_catalog(ds, catalog_N));
  const double window = match_window(ds);
  const auto& pts = ds.points;
  std::vector<Event> out;
  auto add = [&](double rho, std::string what) {
    Event e;
    e.rho = rho;
    e.description = std::move(what);
    auto [match, dist] = nearest_critical(rho, catalog, window);
    e.match = match;
    e.distance = dist;
    out.push_back(std::move(e));
  };

  struct Entry {
    Family key;
    int N;
    Persistence p;
    double energy;
  };
  auto entries = [&](const LevelCurvePoint& pt) {
    std::vector<Entry> v;
    for (const auto& c : pt.curves) {
      for (const auto& f : c.families) {
        v.push_back({continuation_key(f.family, pt.rho), f.N, persistence(f.family, pt.rho), c.energy});
      }
    }
    return v;
  };

  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (const auto& c : pts[i].curves) {
      if (c.flag == CurveFlag::Both) {
        add(pts[i].rho, fmt::format("merged solid/dashed level at E = {:.15g}", c.energy));
      }
    }
    if (i + 1 >= pts.size() || !ds.step || !is_adjacent(pts[i].rho, pts[i + 1].rho, *ds.step)) {
      continue;
    }
    const auto a = entries(pts[i]);
    const auto b = entries(pts[i + 1]);
    auto find = [](const std::vector<Entry>& v, Family key, int N) -> const Entry* {
      for (const auto& e : v) {
        if (e.key == key && e.N == N) {
          return &e;
        }
      }
      return nullptr;
    };
    for (const auto& s : a) {
      if (s.p != Persistence::Solid) {
        continue;
      }
      const Entry* s2 = find(b, s.key, s.N);
      if (!s2) {
        continue;
      }
      for (const auto& t : a) {
        if (t.p != Persistence::Dashed) {
          continue;
        }
        const Entry* t2 = find(b, t.key, t.N);
        if (!t2) {
          continue;
        }
        const double d1 = s.energy - t.energy;
        const double d2 = s2->energy - t2->energy;
        if ((d1 < 0.0 && d2 > 0.0) || (d1 > 0.0 && d2 < 0.0)) {
          const double x = pts[i].rho + (pts[i + 1].rho - pts[i].rho) * d1 / (d1 - d2);
          add(x, fmt::format("{} N={} crosses {} N={}", to_string(s.key), s.N, to_string(t.key), t.N));
        }
      }
    }
  }
  return out;
}

void write_csv(std::ostream& out, const Figure1Dataset& ds) {
  out << "rho";
  for (int k = 1; k <= ds.curves; ++k) {
    out << ",E_" << k;
  }
  for (int k = 1; k <= ds.curves; ++k) {
    out << ",flag_" << k;
  }
  out << '\n';
  for (const auto& pt : ds.points) {
    out << format_number(pt.rho);
    for (const auto& c : pt.curves) {
      out << ',' << format_number(c.energy);
    }
    for (const auto& c : pt.curves) {
      out << ',' << to_string(c.flag);
    }
    out << '\n';
  }
}

Figure1Dataset read_csv(std::istream& in, double rho_star) {
  Figure1Dataset ds;
  ds.rho_star = rho_star;
  std::string line;
  if (!std::getline(in, line)) {
    throw DomainError("empty CSV");
  }
  const auto header_fields = std::count(line.begin(), line.end(), ',');
  if (line.rfind("rho", 0) != 0 || header_fields % 2 != 0) {
    throw DomainError(fmt::format("unexpected CSV header '{}'", line));
  }
  ds.curves = static_cast<int>(header_fields / 2);
  std::vector<double> grid;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      fields.push_back(field);
    }
    if (fields.size() != static_cast<std::size_t>(2 * ds.curves + 1)) {
      throw DomainError(fmt::format("line {}: expected {} fields, got {}", line_no, 2 * ds.curves + 1, fields.size()));
    }
    LevelCurvePoint pt;
    try {
      pt.rho = std::stod(fields[0]);
      for (int k = 0; k < ds.curves; ++k) {
        CurveValue c;
        c.energy = std::stod(fields[static_cast<std::size_t>(1 + k)]);
        c.flag = curve_flag_from_string(fields[static_cast<std::size_t>(1 + ds.curves + k)]);
        pt.curves.push_back(std::move(c));
      }
    } catch (const std::logic_error&) {
      throw DomainError(fmt::format("line {}: malformed number", line_no));
    }
    grid.push_back(pt.rho);
    ds.points.push_back(std::move(pt));
  }
  ds.step = detect_step(grid, true);
  return ds;
}

} // namespace gupdirac
