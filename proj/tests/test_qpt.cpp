#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "gupdirac/errors.hpp"
#include "gupdirac/qpt.hpp"

using namespace gupdirac;

namespace {

const Figure1Dataset& reference_dataset() {
  static const Figure1Dataset ds = figure1_dataset(20, uniform_grid(-30, 30, 0.05), 6);
  return ds;
}

bool near_catalog(double rho, double step, int odd_even) {
  for (int N = 1; N <= 40; ++N) {
    if (odd_even >= 0 && N % 2 != odd_even) continue;
    if (std::abs(std::abs(rho) - 20.0 / N) <= step) return true;
  }
  return false;
}

} // namespace

TEST_CASE("critical points") {
  const auto cps = critical_rhos(20, 5);
  REQUIRE(cps.size() == 10);
  const double want[] = {20, 10, 20.0 / 3, 5, 4};
  for (int N = 1; N <= 5; ++N) {
    const auto& p = cps[2 * (N - 1)];
    const auto& m = cps[2 * (N - 1) + 1];
    CHECK(p.index == N);
    CHECK(p.sign == 1);
    CHECK(m.sign == -1);
    CHECK(p.rho == doctest::Approx(want[N - 1]));
    CHECK(m.rho == -p.rho);
    CHECK(p.kind == (N % 2 ? CriticalKind::Threshold : CriticalKind::Crossing));
  }
  CHECK(cps[0].rho == 20.0);

  const auto many = critical_rhos(20, 1000);
  for (std::size_t i = 2; i < many.size(); i += 2) CHECK(many[i].rho < many[i - 2].rho);
  CHECK(many[many.size() - 2].rho == doctest::Approx(0.02));
  CHECK_THROWS_AS((void)critical_rhos(20, 0), DomainError);
}

TEST_CASE("critical fields") {
  PhysicalConfig cfg;
  cfg.omega = 1;
  cfg.beta = 0.1;
  const auto f = critical_fields(cfg, 100);
  CHECK(f[0].base_field == doctest::Approx(2.0));
  CHECK(f[0].field == doctest::Approx(42.0));
  CHECK(f[1].field - f[1].base_field == doctest::Approx(0.5 * (f[0].field - f[0].base_field)).epsilon(1e-14));
  for (std::size_t i = 0; i < f.size(); ++i) {
    CHECK(f[i].index == static_cast<int>(i) + 1);
    CHECK((f[i].field - f[i].base_field) * f[i].index ==
          doctest::Approx(f[0].field - f[0].base_field).epsilon(1e-13));
    if (i) CHECK(f[i].field < f[i - 1].field);
    CHECK(f[i].field > f[i].base_field);
  }
  CHECK(f.back().field - f.back().base_field < 0.41);

  // at B_cr^N the detuning is rho*/N
  PhysicalConfig gen;
  gen.mass = 1.7;
  gen.omega = 0.4;
  gen.beta = 0.02;
  gen.constants = {0.9, 2.5, 1.3};
  for (const auto& c : critical_fields(gen, 12)) {
    gen.field = c.field;
    const auto d = dimensionless_from_physical(gen);
    CHECK(d.rho == doctest::Approx(d.rho_star / c.index).epsilon(1e-12));
  }

  cfg.beta = 0.0;
  CHECK_THROWS_AS((void)critical_fields(cfg, 3), NoMinimalLengthError);
}

TEST_CASE("uniform grid") {
  const auto g = uniform_grid(-1, 1, 0.1);
  REQUIRE(g.size() == 21);
  CHECK(g[10] == doctest::Approx(0.0).scale(1e-15));
  CHECK(g.back() == doctest::Approx(1.0));
  CHECK(g[7] == -1 + 7 * 0.1);
  CHECK_THROWS_AS((void)uniform_grid(1, -1, 0.1), DomainError);
  CHECK_THROWS_AS((void)uniform_grid(0, 1, 0.0), DomainError);
}

TEST_CASE("figure 1 samples") {
  const auto ds = figure1_dataset(20, {-5.0, 5.0}, 3);
  REQUIRE(ds.points.size() == 2);
  const auto& neg = ds.points[0].curves;
  CHECK(neg[0].energy == 1.0);
  CHECK(neg[0].flag == CurveFlag::Solid);
  CHECK(neg[0].degeneracy == 2);
  const auto& pos = ds.points[1].curves;
  CHECK(pos[0].energy == doctest::Approx(std::sqrt(31.0)).epsilon(1e-14));
  CHECK(pos[0].flag == CurveFlag::Both);
  CHECK(pos[0].degeneracy == 4);

  for (const auto& pt : reference_dataset().points) {
    REQUIRE(pt.curves.size() == 6);
    for (std::size_t k = 1; k < pt.curves.size(); ++k) {
      CHECK(pt.curves[k - 1].energy < pt.curves[k].energy);
    }
  }
}

TEST_CASE("excluded loci are skipped") {
  const auto ds = figure1_dataset(20, uniform_grid(-25, 25, 5), 2);
  CHECK(ds.points.size() == 8);
  REQUIRE(ds.skipped.size() == 3);
  CHECK(ds.skipped[0].rho == -20);
  CHECK(ds.skipped[1].rho == doctest::Approx(0.0).scale(1e-12));
  CHECK(ds.skipped[2].rho == 20);
  CHECK(ds.skipped[1].reason.find("critical") != std::string::npos);
  CHECK(ds.step);
}

TEST_CASE("dashed levels of fixed index leave a fixed window as beta -> 0") {
  for (double rs : {20.0, 1e3, 1e6}) {
    int present = 0;
    for (double rho : uniform_grid(-30, 30, 0.5)) {
      if (std::abs(rho) < 1e-9 || std::abs(std::abs(rho) - rs) < 1e-9) continue;
      for (int N = 1; N <= 6; ++N) {
        present += degeneracy(rho > 0 ? Family::II : Family::III, N, {rho, rs}) > 0;
      }
    }
    if (rs == 20.0) CHECK(present > 0);
    else CHECK(present == 0);
  }
  // ranked curves still meet dashed levels, now with N ~ rho*/(2 rho) and large |m|
  const auto ds = figure1_dataset(1e3, {25.0}, 6);
  for (const auto& c : ds.points[0].curves) {
    if (c.flag == CurveFlag::Solid) continue;
    for (const auto& f : c.families) {
      if (f.family == Family::II) CHECK(f.N >= 20);
    }
  }
}

TEST_CASE("kinks sit on the critical points") {
  const auto& ds = reference_dataset();
  const auto rep = detect_kinks(ds);
  CHECK(rep.catalog_N == 13);
  CHECK(rep.accumulation_radius == doctest::Approx(20.0 / 13 + 0.05));
  CHECK(rep.unmatched().empty());
  for (const auto& k : rep.kinks) {
    if (k.accumulation) continue;
    REQUIRE(k.match);
    CHECK(k.distance <= 0.05 + 1e-12);
    CHECK(std::abs(k.rho - k.match->rho) == doctest::Approx(k.distance));
  }
  for (double target : {4.0, 5.0, 20.0 / 3, 10.0, 20.0}) {
    for (int s : {-1, 1}) {
      const bool hit = std::any_of(rep.kinks.begin(), rep.kinks.end(), [&](const Kink& k) {
        return std::abs(k.rho - s * target) <= 0.05 + 1e-12;
      });
      INFO("rho = ", s * target);
      CHECK(hit);
    }
  }
  // restricting to the first two curves still hits the boundary
  KinkOptions two;
  two.max_curves = 2;
  const auto r2 = detect_kinks(ds, two);
  CHECK(std::all_of(r2.kinks.begin(), r2.kinks.end(), [](const Kink& k) { return k.curve <= 2; }));
  CHECK(r2.unmatched().empty());
}

TEST_CASE("onsets at odd and coincidences at even critical points") {
  const auto& ds = reference_dataset();
  const double zone = 20.0 / resolvable_catalog_index(20, 0.05) + 0.05;
  const auto on = dashed_onsets(ds);
  const auto co = coincidences(ds);
  CHECK(!on.empty());
  CHECK(!co.empty());
  for (const auto& e : on) {
    if (std::abs(e.rho) < zone) continue;
    INFO(e.description, " at ", e.rho);
    REQUIRE(e.match);
    CHECK(e.match->index % 2 == 1);
    CHECK(near_catalog(e.rho, 0.05, 1));
  }
  for (const auto& e : co) {
    if (std::abs(e.rho) < zone) continue;
    INFO(e.description, " at ", e.rho);
    REQUIRE(e.match);
    CHECK(e.match->index % 2 == 0);
    CHECK(near_catalog(e.rho, 0.05, 0));
  }
  // the first dashed level appears at rho*/3 and meets a solid one at rho*/4
  CHECK(std::any_of(on.begin(), on.end(), [](const Event& e) { return e.match && e.match->index == 3; }));
  CHECK(std::any_of(co.begin(), co.end(), [](const Event& e) { return e.match && e.match->index == 4; }));
}

TEST_CASE("resolution limits") {
  const auto& ds = reference_dataset();
  KinkOptions too_fine;
  too_fine.catalog_N = 40;
  CHECK_THROWS_AS((void)detect_kinks(ds, too_fine), ResolutionError);
  try {
    (void)detect_kinks(ds, too_fine);
  } catch (const ResolutionError& e) {
    CHECK(std::string(e.what()).find("rho*/13") != std::string::npos);
  }
  CHECK(resolvable_catalog_index(20, 0.05) == 13);
  CHECK(resolvable_catalog_index(20, 1.0) == 2);

  auto ragged = figure1_dataset(20, {1.0, 1.1, 1.3}, 2);
  CHECK_THROWS_AS((void)detect_kinks(ragged), DomainError);
}

TEST_CASE("smooth curves have no kinks") {
  // a single internal family curve
  Figure1Dataset one;
  one.rho_star = 20;
  one.curves = 1;
  one.step = 0.05;
  for (double rho : uniform_grid(0.5, 19.5, 0.05)) {
    CurveValue c;
    c.energy = level_energy(Family::I, 1, {rho, 20}, Branch::Positive);
    c.families = {{Family::I, 1}};
    c.degeneracy = degeneracy(Family::I, 1, {rho, 20});
    one.points.push_back({rho, {c}});
  }
  // degeneracy of family (i) grows with tau but the energy is analytic; only the member set changes
  const auto rep = detect_kinks(one);
  for (const auto& k : rep.kinks) CHECK(k.reason != "slope");

  // the zero mode on -rho* < rho < 0
  const auto ds = figure1_dataset(20, uniform_grid(-19.5, -0.5, 0.05), 1);
  for (const auto& pt : ds.points) CHECK(pt.curves[0].energy == 1.0);
  const auto z = detect_kinks(ds);
  for (const auto& k : z.kinks) CHECK(k.reason != "slope");
}

TEST_CASE("CSV round trip") {
  const auto& ds = reference_dataset();
  std::stringstream ss;
  write_csv(ss, ds);
  const std::string text = ss.str();
  CHECK(text.rfind("rho,E_1,E_2,E_3,E_4,E_5,E_6,flag_1,", 0) == 0);
  CHECK(text.find('\r') == std::string::npos);
  CHECK(text.find("-0,") == std::string::npos);

  const auto back = read_csv(ss, 20);
  REQUIRE(back.points.size() == ds.points.size());
  REQUIRE(back.step);
  CHECK(*back.step == doctest::Approx(0.05));
  for (std::size_t i = 0; i < ds.points.size(); ++i) {
    CHECK(back.points[i].rho == doctest::Approx(ds.points[i].rho).epsilon(1e-14));
    for (std::size_t k = 0; k < 6; ++k) {
      CHECK(back.points[i].curves[k].energy == doctest::Approx(ds.points[i].curves[k].energy).epsilon(1e-14));
      CHECK(back.points[i].curves[k].flag == ds.points[i].curves[k].flag);
    }
  }
  // writing again is byte-identical
  std::stringstream again;
  write_csv(again, back);
  CHECK(again.str() == text);

  const auto rep = detect_kinks(back);
  CHECK(rep.unmatched().empty());
  std::set<int> hit;
  for (const auto& k : rep.kinks) {
    if (k.match && !k.accumulation) hit.insert(k.match->index);
  }
  for (int N : {1, 3, 4, 5, 2}) CHECK(hit.count(N));

  // onsets need family provenance
  CHECK_THROWS_AS((void)dashed_onsets(back), DomainError);

  std::istringstream bad("rho,E_1,flag_1\n1.0,2.0\n");
  CHECK_THROWS_AS((void)read_csv(bad, 20), DomainError);
  std::istringstream bad2("x,y\n");
  CHECK_THROWS_AS((void)read_csv(bad2, 20), DomainError);
}

TEST_CASE("flags and keys") {
  CHECK(to_string(CurveFlag::Both) == "both");
  CHECK(curve_flag_from_string("dashed") == CurveFlag::Dashed);
  CHECK_THROWS_AS((void)curve_flag_from_string("dotted"), DomainError);
  CHECK(continuation_key(Family::ExtPlus, 25) == Family::I);
  CHECK(continuation_key(Family::ExtPlus, -25) == Family::III);
  CHECK(continuation_key(Family::ExtMinus, 25) == Family::II);
  CHECK(continuation_key(Family::ExtMinus, -25) == Family::V);
  CHECK(continuation_key(Family::II, 5) == Family::II);
}
