#include "doctest.h"

#include <cmath>
#include <limits>

#include "gupdirac/errors.hpp"
#include "gupdirac/serialize.hpp"

using namespace gupdirac;
using nlohmann::json;

namespace {

// parse(dump(x)) must reproduce x; records carry no operator== so compare their JSON
template <class T> void round_trip(const T& x) {
  const json j = x;
  const T back = json::parse(j.dump()).get<T>();
  CHECK(json(back) == j);
}

} // namespace

TEST_CASE("levels") {
  for (const DimensionlessConfig d : {DimensionlessConfig{5, 20}, {-5, 20}, {25, 20}, {20.0 / 7, 20}}) {
    for (Branch b : {Branch::Positive, Branch::Negative}) {
      for (const auto& l : enumerate_levels(d, b, 6)) {
        round_trip(l);
        const Level back = json::parse(json(l).dump()).get<Level>();
        CHECK(back.energy == l.energy); // bit for bit
        CHECK(back.degeneracy() == l.degeneracy());
      }
    }
  }
  const json j = lowest_levels({5, 20}, Branch::Positive, 1).front();
  // rho = rho*/4 is a coincidence: (ii) N = 3 sits on (i) N = 1
  CHECK(j.at("degeneracy") == 4);
  CHECK(j.at("families").size() == 2);
  CHECK(j.at("branch") == "+");
  CHECK(j.at("families")[0].at("family") == "i");
}

TEST_CASE("eigen reports") {
  const auto r = verify_spectrum(-2, 1, {5, 20}, 2);
  round_trip(r);
  const auto back = json::parse(json(r).dump()).get<EigenReport>();
  CHECK(back.extrapolated_k2 == r.extrapolated_k2);
  CHECK(back.cls == r.cls);

  json bad = r;
  bad["status"] = "MAYBE";
  CHECK_THROWS_AS((void)bad.get<EigenReport>(), DomainError);
  bad = r;
  bad["class"] = "ab";
  CHECK_THROWS_AS((void)bad.get<EigenReport>(), DomainError);
}

TEST_CASE("critical points and fields") {
  for (const auto& c : critical_rhos(20, 30)) round_trip(c);
  PhysicalConfig cfg;
  cfg.omega = 1;
  cfg.beta = 0.1;
  for (const auto& f : critical_fields(cfg, 30)) {
    round_trip(f);
    CHECK(json::parse(json(f).dump()).get<CriticalField>().field == f.field);
  }
  const auto c = critical_rhos(20, 3)[4];
  CHECK(json::parse(json(c).dump()).get<CriticalPoint>().rho == 20.0 / 3);
}

TEST_CASE("figure 1 dataset") {
  const auto ds = figure1_dataset(20, uniform_grid(-8, 8, 0.25), 4);
  REQUIRE(!ds.skipped.empty());
  round_trip(ds);
  const auto back = json::parse(json(ds).dump()).get<Figure1Dataset>();
  CHECK(back.step == ds.step);
  REQUIRE(back.points.size() == ds.points.size());
  for (std::size_t i = 0; i < ds.points.size(); ++i) {
    for (std::size_t k = 0; k < ds.points[i].curves.size(); ++k) {
      CHECK(back.points[i].curves[k].energy == ds.points[i].curves[k].energy);
    }
  }

  auto ragged = figure1_dataset(20, {1.0, 1.5, 3.0}, 2);
  REQUIRE_FALSE(ragged.step);
  const json j = ragged;
  CHECK(j.at("step").is_null());
  round_trip(ragged);
}

TEST_CASE("write-only records") {
  const auto& ds = figure1_dataset(20, uniform_grid(-12, 12, 0.05), 4);
  const auto rep = detect_kinks(ds);
  REQUIRE(!rep.kinks.empty());
  for (const auto& k : rep.kinks) {
    const json j = k;
    CHECK(j.at("match").is_null() == !k.match.has_value());
    CHECK(j.at("rho") == k.rho);
  }
  for (const auto& e : dashed_onsets(ds)) {
    const json j = e;
    CHECK(j.contains("description"));
  }

  Kink k;
  k.distance = std::numeric_limits<double>::quiet_NaN();
  CHECK(json(k).at("distance").is_null());
  // NaN never reaches the text
  CHECK(json(k).dump().find("nan") == std::string::npos);

  PhysicalConfig same;
  same.omega = 1;
  same.beta = 0.1;
  same.field = 2; // l_L = l_D, 1/(beta lambda) diverges
  const json cl = characteristic_lengths(same);
  CHECK(cl.at("inv_beta_lambda_infinite") == true);
  CHECK(cl.at("inv_beta_lambda").is_null());

  const auto s = assemble_spinor(1, -2, {5, 20}, Branch::Positive);
  const json js = s;
  CHECK(js.at("n") == 1);
  CHECK(js.at("m") == -2);
  CHECK(js.at("rho") == 5.0);
  CHECK(!js.contains("samples"));
  CHECK((js.at("upper").is_null() || js.at("upper").contains("power")));
}
