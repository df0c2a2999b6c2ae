#include "gupdirac/serialize.hpp"

#include <cmath>

#include <fmt/format.h>

#include "gupdirac/errors.hpp"

namespace gupdirac {

namespace {

using nlohmann::json;

Branch branch_from(const std::string& s) {
  if (s == "+") return Branch::Positive;
  if (s == "-") return Branch::Negative;
  throw DomainError(fmt::format("unknown branch '{}'", s));
}

VerifyStatus status_from(const std::string& s) {
  for (auto v : {VerifyStatus::Pass, VerifyStatus::Fail, VerifyStatus::Flagged}) {
    if (to_string(v) == s) return v;
  }
  throw DomainError(fmt::format("unknown status '{}'", s));
}

CriticalKind kind_from(const std::string& s) {
  for (auto v : {CriticalKind::Threshold, CriticalKind::Crossing}) {
    if (to_string(v) == s) return v;
  }
  throw DomainError(fmt::format("unknown critical kind '{}'", s));
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

} // namespace

std::string format_number(double x) {
  // no negative zero in tables
  return fmt::format("{:.15g}", x == 0.0 ? 0.0 : x);
}

void to_json(json& j, const FamilyIndex& f) { j = json{{"family", to_string(f.family)}, {"N", f.N}}; }

void from_json(const json& j, FamilyIndex& f) {
  f.family = family_from_string(j.at("family").get<std::string>());
  f.N = j.at("N").get<int>();
}

void to_json(json& j, const Member& m) {
  j = json{{"n", m.n}, {"m", m.m}, {"family", to_string(m.family)}, {"N", m.N}};
}

void from_json(const json& j, Member& m) {
  m.n = j.at("n").get<int>();
  m.m = j.at("m").get<int>();
  m.family = family_from_string(j.at("family").get<std::string>());
  m.N = j.at("N").get<int>();
}

void to_json(json& j, const Level& l) {
  j = json{{"energy", l.energy},
           {"branch", to_string(l.branch)},
           {"degeneracy", l.degeneracy()},
           {"families", l.families},
           {"members", l.members}};
}

void from_json(const json& j, Level& l) {
  l.energy = j.at("energy").get<double>();
  l.branch = branch_from(j.at("branch").get<std::string>());
  l.families = j.at("families").get<std::vector<FamilyIndex>>();
  l.members = j.at("members").get<std::vector<Member>>();
}

void to_json(json& j, const EigenReport& r) {
  j = json{{"m", r.m},
           {"component", r.component},
           {"class", std::string(1, label(r.cls))},
           {"synthetic", r.synthetic},
           {"mu", r.mu},
           {"nu", r.nu},
           {"analytic_k2", r.analytic_k2},
           {"grid_points", r.grid_points},
           {"numeric_k2", r.numeric_k2},
           {"extrapolated_k2", r.extrapolated_k2},
           {"observed_order", r.observed_order},
           {"relative_error", r.relative_error},
           {"raw_relative_error", r.raw_relative_error},
           {"max_relative_error", r.max_relative_error},
           {"max_raw_relative_error", r.max_raw_relative_error},
           {"status", to_string(r.status)},
           {"note", r.note}};
}

void from_json(const json& j, EigenReport& r) {
  r.m = j.at("m").get<int>();
  r.component = j.at("component").get<int>();
  const auto cls = j.at("class").get<std::string>();
  if (cls.size() != 1) {
    throw DomainError(fmt::format("bad solution class '{}'", cls));
  }
  r.cls = solution_class_from_label(cls[0]);
  r.synthetic = j.at("synthetic").get<bool>();
  r.mu = j.at("mu").get<double>();
  r.nu = j.at("nu").get<double>();
  r.analytic_k2 = j.at("analytic_k2").get<std::vector<double>>();
  r.grid_points = j.at("grid_points").get<std::vector<int>>();
  r.numeric_k2 = j.at("numeric_k2").get<std::vector<std::vector<double>>>();
  r.extrapolated_k2 = j.at("extrapolated_k2").get<std::vector<double>>();
  r.observed_order = j.at("observed_order").get<std::vector<double>>();
  r.relative_error = j.at("relative_error").get<std::vector<double>>();
  r.raw_relative_error = j.at("raw_relative_error").get<std::vector<double>>();
  r.max_relative_error = j.at("max_relative_error").get<double>();
  r.max_raw_relative_error = j.at("max_raw_relative_error").get<double>();
  r.status = status_from(j.at("status").get<std::string>());
  r.note = j.at("note").get<std::string>();
}

void to_json(json& j, const CriticalPoint& c) {
  j = json{{"index", c.index}, {"rho", c.rho}, {"kind", to_string(c.kind)}, {"sign", c.sign}};
}

void from_json(const json& j, CriticalPoint& c) {
  c.index = j.at("index").get<int>();
  c.rho = j.at("rho").get<double>();
  c.kind = kind_from(j.at("kind").get<std::string>());
  c.sign = j.at("sign").get<int>();
}

void to_json(json& j, const CriticalField& c) {
  j = json{{"index", c.index}, {"field", c.field}, {"base_field", c.base_field}};
}

void from_json(const json& j, CriticalField& c) {
  c.index = j.at("index").get<int>();
  c.field = j.at("field").get<double>();
  c.base_field = j.at("base_field").get<double>();
}

void to_json(json& j, const CurveValue& c) {
  j = json{{"energy", c.energy},
           {"flag", to_string(c.flag)},
           {"degeneracy", c.degeneracy},
           {"families", c.families},
           {"members", c.members}};
}

void from_json(const json& j, CurveValue& c) {
  c.energy = j.at("energy").get<double>();
  c.flag = curve_flag_from_string(j.at("flag").get<std::string>());
  c.degeneracy = j.at("degeneracy").get<int>();
  c.families = j.at("families").get<std::vector<FamilyIndex>>();
  c.members = j.at("members").get<std::vector<Member>>();
}

void to_json(json& j, const LevelCurvePoint& p) { j = json{{"rho", p.rho}, {"curves", p.curves}}; }

void from_json(const json& j, LevelCurvePoint& p) {
  p.rho = j.at("rho").get<double>();
  p.curves = j.at("curves").get<std::vector<CurveValue>>();
}

void to_json(json& j, const Figure1Dataset& ds) {
  json skipped = json::array();
  for (const auto& s : ds.skipped) {
    skipped.push_back({{"rho", s.rho}, {"reason", s.reason}});
  }
  j = json{{"rho_star", ds.rho_star},
           {"branch", to_string(ds.branch)},
           {"curves", ds.curves},
           {"step", optional_number(ds.step)},
           {"points", ds.points},
           {"skipped", skipped}};
}

void from_json(const json& j, Figure1Dataset& ds) {
  ds.rho_star = j.at("rho_star").get<double>();
  ds.branch = branch_from(j.at("branch").get<std::string>());
  ds.curves = j.at("curves").get<int>();
  const auto& step = j.at("step");
  ds.step = step.is_null() ? std::nullopt : std::optional<double>(step.get<double>());
  ds.points = j.at("points").get<std::vector<LevelCurvePoint>>();
  ds.skipped.clear();
  for (const auto& s : j.at("skipped")) {
    ds.skipped.push_back({s.at("rho").get<double>(), s.at("reason").get<std::string>()});
  }
}

void to_json(json& j, const Kink& k) {
  j = json{{"rho", k.rho},
           {"curve", k.curve},
           {"reason", k.reason},
           {"match", k.match ? json(*k.match) : json(nullptr)},
           {"distance", number_or_null(k.distance)},
           {"accumulation", k.accumulation}};
}

void to_json(json& j, const Event& e) {
  j = json{{"rho", e.rho},
           {"description", e.description},
           {"match", e.match ? json(*e.match) : json(nullptr)},
           {"distance", number_or_null(e.distance)}};
}

void to_json(json& j, const CharacteristicLengths& c) {
  j = json{{"landau", optional_number(c.landau)},
           {"dirac", optional_number(c.dirac)},
           {"minimal_length", c.minimal_length},
           {"inv_beta_lambda", number_or_null(c.inv_beta_lambda)},
           {"inv_beta_lambda_infinite", c.inv_beta_lambda_infinite},
           {"minimal_over_landau", optional_number(c.minimal_over_landau)},
           {"minimal_over_dirac", optional_number(c.minimal_over_dirac)}};
}

void to_json(json& j, const RadialProfile& f) {
  j = json{{"n", f.n},
           {"m", f.m},
           {"component", f.component},
           {"class", std::string(1, label(f.cls))},
           {"angular", f.angular},
           {"power", f.power},
           {"algebraic", f.algebraic},
           {"hyp_b", f.hyp_b},
           {"hyp_c", f.hyp_c},
           {"beta", f.beta}};
}

void to_json(json& j, const SpinorState& s) {
  const char* source = s.coefficient_source == CoefficientSource::Printed     ? "printed"
                       : s.coefficient_source == CoefficientSource::Rederived ? "rederived"
                                                                              : "none";
  j = json{{"n", s.n},
           {"m", s.m},
           {"branch", to_string(s.branch)},
           {"family", to_string(s.family)},
           {"N", s.N},
           {"energy", s.energy},
           {"rho", s.params.rho},
           {"rho_star", s.params.rho_star},
           {"upper", s.upper ? json(*s.upper) : json(nullptr)},
           {"lower", s.lower ? json(*s.lower) : json(nullptr)},
           {"coefficient", s.coefficient},
           {"printed_coefficient", number_or_null(s.printed_coefficient)},
           {"coefficient_source", source},
           {"normalization", s.normalization},
           {"note", s.note}};
}

} // namespace gupdirac
