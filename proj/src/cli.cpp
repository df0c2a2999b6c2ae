#include "gupdirac/cli.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include <fmt/format.h>

#include "gupdirac/errors.hpp"
#include "gupdirac/oracle.hpp"
#include "gupdirac/qpt.hpp"
#include "gupdirac/serialize.hpp"
#include "gupdirac/spectrum.hpp"
#include "gupdirac/wavefunction.hpp"

namespace gupdirac {

namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParamFlags {
  double rho = 0.0;
  double rho_star = 20.0;
  double mass = 1.0;
  double omega = 0.0;
  double field = 0.0;
  double beta = 0.0;
  double hbar = 1.0;
  double c = 1.0;
  double charge = 1.0;
  std::vector<CLI::Option*> dimensionless;
  std::vector<CLI::Option*> physical;

  void add(CLI::App* app) {
    dimensionless.push_back(app->add_option("--rho", rho, "rho = lambda / (M c)^2"));
    dimensionless.push_back(app->add_option("--rho-star", rho_star, "rho* = 2 / (beta M^2 c^2)"));
    physical.push_back(app->add_option("--mass", mass, "M"));
    physical.push_back(app->add_option("--omega", omega, "oscillator frequency"));
    physical.push_back(app->add_option("--field", field, "magnetic field B0"));
    physical.push_back(app->add_option("--beta", beta, "minimal-length parameter"));
    physical.push_back(app->add_option("--hbar", hbar, "hbar (default 1)"));
    physical.push_back(app->add_option("--c", c, "speed of light (default 1)"));
    physical.push_back(app->add_option("--charge", charge, "e (default 1)"));
  }

  [[nodiscard]] static bool any(const std::vector<CLI::Option*>& v) {
    for (auto* o : v) {
      if (o->count() > 0) return true;
    }
    return false;
  }

  [[nodiscard]] PhysicalConfig physical_config() const {
    PhysicalConfig cfg;
    cfg.mass = mass;
    cfg.omega = omega;
    cfg.field = field;
    cfg.beta = beta;
    cfg.constants = {hbar, c, charge};
    return cfg;
  }
};

struct Params {
  DimensionlessConfig d;
  std::optional<PhysicalConfig> physical;
};

// Exactly one parameter set: (--rho, --rho-star) or (--mass, --omega, --field, --beta [+ constants]).
Params resolve(const ParamFlags& f) {
  const bool dim = ParamFlags::any(f.dimensionless);
  const bool phys = ParamFlags::any(f.physical);
  if (dim && phys) {
    throw UsageError("give either --rho/--rho-star or the physical set --mass/--omega/--field/--beta, not both");
  }
  Params p;
  if (phys) {
    for (std::size_t i = 0; i < 4; ++i) {
      if (f.physical[i]->count() == 0) {
        throw UsageError(fmt::format("physical parameters need {}", f.physical[i]->get_name()));
      }
    }
    p.physical = f.physical_config();
    p.d = dimensionless_from_physical(*p.physical);
    return p;
  }
  if (f.dimensionless[0]->count() == 0 || f.dimensionless[1]->count() == 0) {
    throw UsageError("need --rho and --rho-star (or the physical set)");
  }
  p.d = {f.rho, f.rho_star};
  validate(p.d);
  return p;
}

std::vector<Branch> branches_from(const std::string& s) {
  if (s == "positive") return {Branch::Positive};
  if (s == "negative") return {Branch::Negative};
  return {Branch::Positive, Branch::Negative};
}

std::string branch_name(Branch b) { return b == Branch::Positive ? "positive" : "negative"; }

std::pair<int, int> parse_range(const std::string& s) {
  const auto pos = s.find("..");
  try {
    if (pos == std::string::npos) {
      const int v = std::stoi(s);
      return {v, v};
    }
    return {std::stoi(s.substr(0, pos)), std::stoi(s.substr(pos + 2))};
  } catch (const std::logic_error&) {
    throw UsageError(fmt::format("bad range '{}', expected LO..HI", s));
  }
}

std::vector<int> parse_ladder(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  try {
    while (std::getline(ss, item, ',')) {
      out.push_back(std::stoi(item));
    }
  } catch (const std::logic_error&) {
    throw UsageError(fmt::format("bad grid ladder '{}', expected comma-separated counts", s));
  }
  return out;
}

std::string join_families(const std::vector<FamilyIndex>& fs) {
  std::string s;
  for (const auto& f : fs) {
    s += fmt::format("{}{}:{}", s.empty() ? "" : ";", to_string(f.family), f.N);
  }
  return s;
}

std::string join_members(const std::vector<Member>& ms) {
  std::string s;
  for (const auto& m : ms) {
    s += fmt::format("{}{}:{}", s.empty() ? "" : ";", m.n, m.m);
  }
  return s;
}

std::string num(double x) { return format_number(x); }

void emit_json(std::ostream& o, const json& j) { o << j.dump(2) << '\n'; }

// classify

void do_classify(std::ostream& o, const Params& p, int n_max, bool as_json) {
  const Regime r = classify_regime(p.d);
  const double tau = tau_of(p.d);
  const auto crit = critical_rhos(p.d.rho_star, n_max);
  std::optional<CharacteristicLengths> lengths;
  std::optional<double> b_cr;
  if (p.physical) {
    lengths = characteristic_lengths(*p.physical);
    b_cr = critical_field(*p.physical);
  }
  if (as_json) {
    json j{{"regime", to_string(r)},
           {"rho", p.d.rho},
           {"rho_star", p.d.rho_star},
           {"tau", tau},
           {"inv_beta_lambda", p.d.inv_beta_lambda()},
           {"critical_rhos", crit}};
    if (lengths) {
      j["lengths"] = *lengths;
      j["critical_field"] = *b_cr;
    }
    emit_json(o, j);
    return;
  }
  o << "key,value\n";
  o << "regime," << to_string(r) << '\n';
  o << "rho," << num(p.d.rho) << '\n';
  o << "rho_star," << num(p.d.rho_star) << '\n';
  o << "tau," << num(tau) << '\n';
  o << "inv_beta_lambda," << num(p.d.inv_beta_lambda()) << '\n';
  for (const auto& c : crit) {
    o << "critical_rho[" << c.sign * c.index << "]," << num(c.rho) << '\n';
  }
  if (lengths) {
    auto opt = [&](const char* key, const std::optional<double>& v) {
      o << key << ',' << (v ? num(*v) : std::string("none")) << '\n';
    };
    opt("landau_length", lengths->landau);
    opt("dirac_length", lengths->dirac);
    o << "minimal_length," << num(lengths->minimal_length) << '\n';
    o << "inv_beta_lambda_physical,"
      << (lengths->inv_beta_lambda_infinite ? std::string("inf") : num(lengths->inv_beta_lambda)) << '\n';
    opt("minimal_over_landau", lengths->minimal_over_landau);
    opt("minimal_over_dirac", lengths->minimal_over_dirac);
    o << "critical_field," << num(*b_cr) << '\n';
  }
}

// levels

void do_levels(std::ostream& o, const Params& p, const std::vector<Branch>& branches, int n_max, bool as_json) {
  std::vector<Level> all;
  for (Branch b : branches) {
    auto lv = enumerate_levels(p.d, b, n_max);
    all.insert(all.end(), lv.begin(), lv.end());
  }
  if (as_json) {
    emit_json(o, json{{"rho", p.d.rho}, {"rho_star", p.d.rho_star}, {"n_max", n_max}, {"levels", all}});
    return;
  }
  o << "branch,energy,degeneracy,families,members\n";
  for (const auto& l : all) {
    o << branch_name(l.branch) << ',' << num(l.energy) << ',' << l.degeneracy() << ',' << join_families(l.families)
      << ',' << join_members(l.members) << '\n';
  }
}

// wavefunction

void do_wavefunction(std::ostream& o, std::ostream& err, const Params& p, int n, int m, Branch b, double p_max,
                     int points, double theta, bool as_json) {
  if (points < 2) {
    throw UsageError("--points must be at least 2");
  }
  const SpinorState s = assemble_spinor(n, m, p.d, b);
  if (!s.note.empty()) {
    err << "note: " << s.note << '\n';
  }
  if (p_max <= 0.0) {
    p_max = 10.0 / std::sqrt(p.d.beta());
  }
  std::vector<double> momenta(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    momenta[static_cast<std::size_t>(i)] = p_max * i / (points - 1);
  }
  const auto samples = sample_spinor(s, momenta, theta);
  if (as_json) {
    json js = json::array();
    for (const auto& x : samples) {
      js.push_back({{"p", x.p},
                    {"upper", {x.upper.real(), x.upper.imag()}},
                    {"lower", {x.lower.real(), x.lower.imag()}}});
    }
    const auto res = intertwining_residual(s);
    emit_json(o, json{{"state", s},
                      {"theta", theta},
                      {"residual", {{"plus", res.plus}, {"minus", res.minus}}},
                      {"samples", js}});
    return;
  }
  o << "p,upper_re,upper_im,lower_re,lower_im\n";
  for (const auto& x : samples) {
    o << num(x.p) << ',' << num(x.upper.real()) << ',' << num(x.upper.imag()) << ',' << num(x.lower.real()) << ','
      << num(x.lower.imag()) << '\n';
  }
}

// qpt

void do_qpt(std::ostream& o, const Params& p, int n_max, bool as_json) {
  const auto crit = critical_rhos(p.d.rho_star, n_max);
  std::vector<CriticalField> fields;
  if (p.physical) {
    fields = critical_fields(*p.physical, n_max);
  }
  if (as_json) {
    json j{{"rho_star", p.d.rho_star}, {"critical_rhos", crit}};
    if (p.physical) {
      j["critical_fields"] = fields;
    }
    emit_json(o, j);
    return;
  }
  o << "index,sign,rho,kind";
  if (p.physical) {
    o << ",field,base_field";
  }
  o << '\n';
  for (const auto& c : crit) {
    o << c.index << ',' << (c.sign > 0 ? '+' : '-') << ',' << num(c.rho) << ',' << to_string(c.kind);
    if (p.physical) {
      const auto& f = fields[static_cast<std::size_t>(c.index - 1)];
      // the negative branch mirrors the offset below B_cr
      const double value = c.sign > 0 ? f.field : 2.0 * f.base_field - f.field;
      o << ',' << num(value) << ',' << num(f.base_field);
    }
    o << '\n';
  }
}

// figure1

void emit_kinks(std::ostream& o, const KinkReport& rep, bool as_json) {
  if (as_json) {
    emit_json(o, json{{"step", rep.step},
                      {"catalog_N", rep.catalog_N},
                      {"accumulation_radius", rep.accumulation_radius},
                      {"kinks", rep.kinks}});
    return;
  }
  o << "rho,curve,reason,match_index,match_rho,distance,accumulation\n";
  for (const auto& k : rep.kinks) {
    o << num(k.rho) << ',' << k.curve << ',' << k.reason << ',';
    if (k.match) {
      o << k.match->sign * k.match->index << ',' << num(k.match->rho);
    } else {
      o << ',';
    }
    o << ',' << num(k.distance) << ',' << (k.accumulation ? "true" : "false") << '\n';
  }
}

// verify

void do_verify_output(std::ostream& o, const std::vector<EigenReport>& reports, bool as_json) {
  if (as_json) {
    emit_json(o, json(reports));
    return;
  }
  o << "m,component,class,mu,nu,n,analytic_k2,extrapolated_k2,relative_error,raw_relative_error,order,status\n";
  for (const auto& r : reports) {
    for (std::size_t n = 0; n < r.analytic_k2.size(); ++n) {
      o << r.m << ',' << r.component << ',' << label(r.cls) << ',' << num(r.mu) << ',' << num(r.nu) << ',' << n << ','
        << num(r.analytic_k2[n]) << ',' << num(r.extrapolated_k2[n]) << ',' << num(r.relative_error[n]) << ','
        << num(r.raw_relative_error[n]) << ',' << num(r.observed_order[n]) << ',' << to_string(r.status) << '\n';
    }
  }
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dirac oscillator in a magnetic field with a minimal length: spectrum, states, critical points"};
  app.name(args.empty() ? "gupdirac" : args.front());
  app.require_subcommand(1);

  std::string format = "csv";
  std::string output;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("-o,--output", output, "write to file instead of stdout");
  };

  // classify
  ParamFlags classify_p;
  int classify_nmax = 6;
  auto* classify = app.add_subcommand("classify", "regime, tau and critical rho list");
  classify_p.add(classify);
  classify->add_option("--n-max", classify_nmax, "largest critical index listed");
  add_common(classify);

  // levels
  ParamFlags levels_p;
  int levels_nmax = 5;
  std::string levels_branch = "positive";
  auto* levels = app.add_subcommand("levels", "energy levels with degeneracies and members");
  levels_p.add(levels);
  levels->add_option("--n-max", levels_nmax, "largest family index N");
  levels->add_option("--branch", levels_branch)->check(CLI::IsMember({"positive", "negative", "both"}));
  add_common(levels);

  // wavefunction
  ParamFlags wf_p;
  int wf_n = 0;
  int wf_m = 0;
  std::string wf_branch = "positive";
  double wf_pmax = 0.0;
  int wf_points = 201;
  double wf_theta = 0.0;
  auto* wavefunction = app.add_subcommand("wavefunction", "momentum-space spinor profile");
  wf_p.add(wavefunction);
  wavefunction->add_option("--n", wf_n, "radial quantum number")->required();
  wavefunction->add_option("--m", wf_m, "angular quantum number")->required();
  wavefunction->add_option("--branch", wf_branch)->check(CLI::IsMember({"positive", "negative"}));
  wavefunction->add_option("--p-max", wf_pmax, "largest momentum (default 10/sqrt(beta))");
  wavefunction->add_option("--points", wf_points, "number of samples");
  wavefunction->add_option("--theta", wf_theta, "polar angle of the samples");
  add_common(wavefunction);

  // qpt
  ParamFlags qpt_p;
  int qpt_nmax = 10;
  auto* qpt = app.add_subcommand("qpt", "critical points rho*/N and, for physical input, critical fields");
  qpt_p.add(qpt);
  qpt->add_option("--n-max", qpt_nmax, "largest index N");
  add_common(qpt);

  // figure1
  double f_rho_star = 20.0;
  double f_min = -30.0;
  double f_max = 30.0;
  double f_step = 0.05;
  int f_curves = 6;
  std::string f_branch = "positive";
  bool f_kinks = false;
  double f_tol = KinkOptions{}.tolerance;
  std::string f_from;
  auto* figure1 = app.add_subcommand("figure1", "lowest level curves on a rho grid");
  figure1->add_option("--rho-star", f_rho_star, "rho* (default 20)");
  figure1->add_option("--rho-min", f_min);
  figure1->add_option("--rho-max", f_max);
  figure1->add_option("--step", f_step);
  figure1->add_option("--curves", f_curves);
  figure1->add_option("--branch", f_branch)->check(CLI::IsMember({"positive", "negative"}));
  figure1->add_flag("--kinks", f_kinks, "report kinks instead of the dataset");
  figure1->add_option("--kink-tolerance", f_tol, "second-difference threshold");
  figure1->add_option("--kinks-from", f_from, "detect kinks in a previously written CSV");
  add_common(figure1);

  // verify
  ParamFlags v_p;
  std::string v_m = "-5..5";
  int v_nmax = 3;
  std::string v_grid = "512,1024,2048";
  VerifyOptions v_opts;
  auto* verify = app.add_subcommand("verify", "finite-difference check of k^2 for every admissible class");
  v_p.add(verify);
  verify->add_option("--m", v_m, "m range LO..HI");
  verify->add_option("--n-max", v_nmax);
  verify->add_option("--grid", v_grid, "refinement ladder, comma-separated");
  verify->add_option("--tolerance", v_opts.tolerance, "relative tolerance after extrapolation");
  verify->add_option("--raw-tolerance", v_opts.raw_tolerance, "relative tolerance on the finest grid");
  add_common(verify);

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  if (!argv_rev.empty()) {
    argv_rev.pop_back();
  }
  try {
    app.parse(argv_rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  std::ofstream file;
  std::ostream* o = &out;
  try {
    if (!output.empty()) {
      file.open(output, std::ios::binary);
      if (!file) {
        err << "error: cannot open " << output << " for writing\n";
        return 1;
      }
      o = &file;
    }
    const bool as_json = format == "json";

    if (classify->parsed()) {
      do_classify(*o, resolve(classify_p), classify_nmax, as_json);
    } else if (levels->parsed()) {
      do_levels(*o, resolve(levels_p), branches_from(levels_branch), levels_nmax, as_json);
    } else if (wavefunction->parsed()) {
      do_wavefunction(*o, err, resolve(wf_p), wf_n, wf_m, branches_from(wf_branch).front(), wf_pmax, wf_points,
                      wf_theta, as_json);
    } else if (qpt->parsed()) {
      do_qpt(*o, resolve(qpt_p), qpt_nmax, as_json);
    } else if (figure1->parsed()) {
      KinkOptions ko;
      ko.tolerance = f_tol;
      if (!f_from.empty()) {
        std::ifstream in(f_from);
        if (!in) {
          err << "error: cannot read " << f_from << '\n';
          return 1;
        }
        emit_kinks(*o, detect_kinks(read_csv(in, f_rho_star), ko), as_json);
      } else {
        const auto ds = figure1_dataset(f_rho_star, uniform_grid(f_min, f_max, f_step), f_curves,
                                        branches_from(f_branch).front());
        for (const auto& s : ds.skipped) {
          err << "warning: skipped rho = " << num(s.rho) << ": " << s.reason << '\n';
        }
        if (f_kinks) {
          emit_kinks(*o, detect_kinks(ds, ko), as_json);
        } else if (as_json) {
          emit_json(*o, json(ds));
        } else {
          write_csv(*o, ds);
        }
      }
    } else if (verify->parsed()) {
      const Params p = resolve(v_p);
      const auto [lo, hi] = parse_range(v_m);
      v_opts.grid.ladder = parse_ladder(v_grid);
      const auto reports = verify_sweep(p.d, lo, hi, v_nmax, v_opts);
      do_verify_output(*o, reports, as_json);
      int pass = 0;
      int fail = 0;
      int flagged = 0;
      for (const auto& r : reports) {
        switch (r.status) {
        case VerifyStatus::Pass: ++pass; break;
        case VerifyStatus::Fail: ++fail; break;
        case VerifyStatus::Flagged: ++flagged; break;
        }
        if (r.status != VerifyStatus::Pass) {
          err << fmt::format("{} m={} component={} class={}: {}\n", to_string(r.status), r.m, r.component,
                             label(r.cls), r.note);
        }
      }
      err << fmt::format("{} reports: {} pass, {} fail, {} flagged\n", reports.size(), pass, fail, flagged);
      o->flush();
      return fail == 0 ? 0 : 1;
    }
    o->flush();
    return 0;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv, argv + argc);
  return run(args, out, err);
}

} // namespace gupdirac
