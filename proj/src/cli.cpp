#include "reebfol/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "reebfol/cylinders.hpp"
#include "reebfol/error.hpp"
#include "reebfol/foliation.hpp"
#include "reebfol/orbits.hpp"
#include "reebfol/profile_io.hpp"
#include "reebfol/surgery.hpp"

namespace reebfol::cli {

namespace {

constexpr int kReportSchemaVersion = 1;

class Diagnostics {
 public:
  Diagnostics(std::ostream& err, bool quiet) : err_(err), quiet_(quiet) {}
  void info(const std::string& message) {
    if (!quiet_) emit("info", std::nullopt, message);
  }
  void warn(const std::string& message) {
    if (!quiet_) emit("warning", std::nullopt, message);
  }
  void error(std::optional<std::string> code, const std::string& message) {
    emit("error", std::move(code), message);
  }
  void set_quiet(bool q) { quiet_ = q; }

 private:
  void emit(const char* level, std::optional<std::string> code, const std::string& message) {
    Json j{{"level", level}, {"message", message}};
    if (code) j["code"] = *code;
    err_ << j.dump() << '\n';
  }
  std::ostream& err_;
  bool quiet_;
};

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json torus_json(const OrbitTorus& t) {
  Json j{{"r", t.r}, {"p", t.p}, {"q", t.q}, {"period", t.T}, {"morse_bott", t.morse_bott}};
  if (t.homology_note) j["homology_note"] = {t.homology_note->first, t.homology_note->second};
  return j;
}

Json central_json(const CentralOrbit& c) {
  return {{"k", c.k},
          {"period", c.period},
          {"rotation", c.rotation},
          {"degenerate", c.degenerate},
          {"borderline", c.borderline},
          {"cz", c.cz ? Json(*c.cz) : Json(nullptr)}};
}

Json contact_json(const ContactReport& rep) {
  Json v = Json::array();
  for (const auto& x : rep.violations)
    v.push_back({{"rho", optional_number(x.rho)}, {"condition", x.condition}, {"value", x.value}});
  return {{"valid", rep.valid}, {"d_prime_at_zero", optional_number(rep.d_prime_at_zero)}, {"violations", v}};
}

Json puncture_json(const Puncture& p) {
  return {{"end", p.end},       {"sign", p.sign},         {"target", to_string(p.target)},
          {"r", p.r},           {"cover", p.cover},       {"resolved", p.resolved},
          {"gap", p.gap},       {"rate", p.rate}};
}

Json leaf_json(const CylinderLeaf& leaf, const Profile& profile, bool with_energy) {
  Json j{{"p", leaf.p},
         {"q", leaf.q},
         {"theta0", leaf.theta0},
         {"phi0", leaf.phi0},
         {"rho_minus", leaf.rho_minus},
         {"rho_plus", leaf.rho_plus},
         {"plane", leaf.plane},
         {"certifiable", leaf.certifiable},
         {"index", leaf.index ? Json(*leaf.index) : Json(nullptr)},
         {"punctures", {puncture_json(leaf.minus), puncture_json(leaf.plus)}},
         {"topology",
          {{"genus", leaf.topology.genus},
           {"punctures", leaf.topology.punctures},
           {"boundary", leaf.topology.boundary},
           {"euler", leaf.topology.euler()}}},
         {"samples", leaf.samples.size()},
         {"s_range", {leaf.samples.front().s, leaf.samples.back().s}},
         {"cr_residual", cr_residual(leaf, profile)},
         {"warnings", leaf.warnings}};
  if (with_energy) {
    const EnergyReport e = dlambda_energy(leaf, profile, true);
    j["energy"] = {{"numeric", e.numeric},
                   {"boundary_term", e.boundary_term},
                   {"tail", e.tail},
                   {"period_plus", optional_number(e.period_plus)},
                   {"period_minus", optional_number(e.period_minus)}};
  }
  return j;
}

std::string leaf_csv(const CylinderLeaf& leaf) {
  std::string s = "s,a,rho\n";
  for (const auto& x : leaf.samples) s += fmt17(x.s) + "," + fmt17(x.a) + "," + fmt17(x.rho) + "\n";
  return s;
}

void emit(const Json& j, const std::string& path, std::ostream& out) {
  const std::string text = dump_json(j) + "\n";
  if (path.empty() || path == "-") out << text;
  else write_text_file(path, text);
}

Json header(const std::string& schema, std::uint64_t seed) {
  return {{"schema", schema}, {"schema_version", kReportSchemaVersion}, {"seed", seed}};
}

std::vector<double> parse_list(const std::string& text, std::size_t expected, const char* what) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::Input, std::string("cannot parse ") + what + ": " + text);
    }
  }
  if (expected && v.size() != expected)
    throw Error(ErrorCode::Input, std::string(what) + " needs " + std::to_string(expected) + " values");
  return v;
}

struct Tolerances {
  IntegrationOptions integration;
  ContactOptions contact;
};

Tolerances parse_tolerances(const std::vector<std::string>& items) {
  Tolerances t;
  const std::map<std::string, double*> keys{
      {"asymptote_tol", &t.integration.asymptote_tol}, {"s_max", &t.integration.s_max},
      {"rtol", &t.integration.rtol},                   {"atol", &t.integration.atol},
      {"max_drho", &t.integration.max_drho},           {"max_ds", &t.integration.max_ds},
      {"target_drho", &t.integration.target_drho},
      {"max_rate_step", &t.integration.max_rate_step}};
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::Input, "--tol expects KEY=VAL, got " + item);
    const std::string key = item.substr(0, eq);
    const double value = parse_list(item.substr(eq + 1), 1, "tolerance value").front();
    if (!(value > 0.0) || !std::isfinite(value))
      throw Error(ErrorCode::Input, "tolerance " + key + " must be positive");
    if (key == "grid_points") {
      t.contact.grid_points = static_cast<int>(value);
      continue;
    }
    const auto it = keys.find(key);
    if (it == keys.end()) throw Error(ErrorCode::Input, "unknown tolerance key " + key);
    *it->second = value;
  }
  return t;
}

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::Input:
    case ErrorCode::Structural:
      return kExitInput;
    default:
      return kExitFailed;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rotationally symmetric contact forms, Reeb orbits, surgeries and holomorphic leaves",
               "reebfol"};
  app.require_subcommand(1);
  app.fallthrough();
  std::uint64_t seed = 0;
  std::vector<std::string> tol_items;
  bool quiet = false;
  app.add_option("--seed", seed, "Seed for sampling checks");
  app.add_option("--tol", tol_items, "Tolerance override KEY=VAL")->take_all();
  app.add_flag("--quiet", quiet, "Only report errors");

  std::string profile_path, out_path;
  int p = 1, q = 0;

  auto* validate = app.add_subcommand("validate", "Check the positive contact condition");
  validate->add_option("--profile", profile_path)->required();
  validate->add_option("--out", out_path);

  auto* orbits = app.add_subcommand("orbits", "List orbit tori of a slope");
  std::string interval;
  bool as_json = false;
  orbits->add_option("--profile", profile_path)->required();
  orbits->add_option("--p", p)->required();
  orbits->add_option("--q", q)->required();
  orbits->add_option("--interval", interval, "a,b");
  orbits->add_flag("--json", as_json);
  int cz_offset = 0;
  orbits->add_option("--cz-offset", cz_offset,
                     "Integer added to coordinate CZ indices to express them in another trivialization");
  orbits->add_option("--out", out_path);

  auto* twist = app.add_subcommand("twist", "Half or full Lutz twist near the axis");
  std::string kind = "half";
  double delta = 0.0;
  std::optional<double> epsilon;
  std::string report_path;
  twist->add_option("--profile", profile_path)->required();
  twist->add_option("--kind", kind)->check(CLI::IsMember({"half", "full"}));
  twist->add_option("--delta", delta)->required();
  twist->add_option("--epsilon", epsilon);
  twist->add_option("--out", out_path, "Output profile");
  twist->add_option("--report", report_path, "Conditions report");

  auto* surgery = app.add_subcommand("surgery", "Twist surgery by a matrix (n q; m p)");
  std::string matrix_text, twist_text = "half";
  double gap = 1e-2;
  surgery->add_option("--profile", profile_path)->required();
  surgery->add_option("--matrix", matrix_text, "n,q,m,p")->required();
  surgery->add_option("--delta", delta)->required();
  surgery->add_option("--epsilon", epsilon)->required();
  surgery->add_option("--twist", twist_text)->check(CLI::IsMember({"none", "half", "full"}));
  surgery->add_option("--gap", gap);
  surgery->add_option("--out", out_path, "Output profile");
  surgery->add_option("--report", report_path, "Conditions report");

  auto* integrate = app.add_subcommand("integrate", "Integrate one leaf");
  double rho0 = 0.0, theta0 = 0.0, phi0 = 0.0;
  std::string csv_path;
  integrate->add_option("--profile", profile_path)->required();
  integrate->add_option("--p", p)->required();
  integrate->add_option("--q", q)->required();
  integrate->add_option("--rho0", rho0)->required();
  integrate->add_option("--theta0", theta0);
  integrate->add_option("--phi0", phi0);
  integrate->add_option("--csv", csv_path)->required();

  auto* foliate = app.add_subcommand("foliate", "Build and certify the foliation");
  int density = kDefaultDensity, pairs = 500;
  std::string csv_dir;
  foliate->add_option("--profile", profile_path)->required();
  foliate->add_option("--p", p)->required();
  foliate->add_option("--q", q)->required();
  foliate->add_option("--density", density);
  foliate->add_option("--pairs", pairs, "Random leaf pairs for the disjointness check");
  foliate->add_option("--out", out_path)->required();
  foliate->add_option("--csv-dir", csv_dir);

  auto* lift = app.add_subcommand("lift", "Lift arithmetic of a branched cover");
  std::string linking;
  lift->add_option("--linking", linking, "l1,l2,...")->required();
  lift->add_option("--out", out_path);

  auto* trajectory = app.add_subcommand("trajectory", "Sample rho, f, g, D");
  int points = 1000;
  trajectory->add_option("--profile", profile_path)->required();
  trajectory->add_option("--points", points);
  trajectory->add_option("--out", out_path);

  Diagnostics diag(err, false);
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    diag.error("input", e.what());
    return kExitInput;
  }
  diag.set_quiet(quiet);

  try {
    const Tolerances tol = parse_tolerances(tol_items);

    if (validate->parsed()) {
      const Profile profile = load_profile(profile_path);
      const ContactReport rep = validate_contact(profile, tol.contact);
      Json j = header("reebfol.validate", seed);
      j["report"] = contact_json(rep);
      emit(j, out_path, out);
      if (!rep.valid) diag.warn("contact condition violated");
      return rep.valid ? kExitOk : kExitFailed;
    }

    if (orbits->parsed()) {
      const Profile profile = load_profile(profile_path);
      double a = std::max(profile.rho_min(), 1e-12), b = profile.rho_max();
      if (!interval.empty()) {
        const auto v = parse_list(interval, 2, "--interval");
        a = v[0];
        b = v[1];
      }
      const auto tori = scan_tori(profile, p, q, a, b);
      if (as_json || !out_path.empty()) {
        Json j = header("reebfol.orbits", seed);
        j["p"] = p;
        j["q"] = q;
        j["tori"] = Json::array();
        for (const auto& t : tori) j["tori"].push_back(torus_json(t));
        if (profile.reaches_axis()) {
          j["central"] = Json::array();
          for (int k = 1; k <= std::max(1, std::abs(q)); ++k) {
            const CentralOrbit c = central_cz(profile, k);
            Json entry = central_json(c);
            entry["cz_offset"] = cz_offset;
            entry["cz_shifted"] = c.cz ? Json(*c.cz + cz_offset) : Json(nullptr);
            j["central"].push_back(entry);
          }
        }
        emit(j, out_path, out);
      } else {
        for (const auto& t : tori)
          out << "r=" << fmt17(t.r) << " (p,q)=(" << t.p << "," << t.q << ") T=" << fmt17(t.T)
              << (t.morse_bott ? " morse-bott" : " degenerate") << '\n';
      }
      return kExitOk;
    }

    if (twist->parsed()) {
      const Profile profile = load_profile(profile_path);
      const TwistKind k = twist_from_string(kind);
      const Profile twisted = lutz_twist(profile, k, delta, epsilon);
      const ContactReport contact = validate_contact(twisted, tol.contact);
      Json rep = header("reebfol.twist", seed);
      rep["kind"] = kind;
      rep["delta"] = delta;
      rep["contact"] = contact_json(contact);
      rep["tori_1_0"] = Json::array();
      for (const auto& t : scan_tori(twisted, 1, 0, 1e-12, twisted.rho_max())) rep["tori_1_0"].push_back(torus_json(t));
      rep["central"] = central_json(central_cz(twisted, 1));
      if (!out_path.empty()) save_profile(out_path, twisted);
      else out << dump_json(profile_to_json(twisted)) << '\n';
      emit(rep, report_path.empty() ? (out_path.empty() ? std::string() : out_path + ".report.json") : report_path, out);
      return contact.valid ? kExitOk : kExitFailed;
    }

    if (surgery->parsed()) {
      const Profile profile = load_profile(profile_path);
      const auto m = parse_list(matrix_text, 4, "--matrix");
      SurgeryPlan plan;
      for (double x : m)
        if (x != std::round(x)) throw Error(ErrorCode::Input, "matrix entries must be integers");
      plan.matrix = {static_cast<int>(m[0]), static_cast<int>(m[1]), static_cast<int>(m[2]), static_cast<int>(m[3])};
      plan.delta = delta;
      plan.epsilon = *epsilon;
      plan.twist = twist_from_string(twist_text);
      plan.gap = gap;
      const SurgeryResult res = perform_surgery(profile, plan);
      const CoreReport& c = res.core;
      Json rep = header("reebfol.surgery", seed);
      rep["matrix"] = {plan.matrix.n, plan.matrix.q, plan.matrix.m, plan.matrix.p};
      rep["twist"] = twist_text;
      rep["lutz_radius"] = optional_number(res.lutz_radius);
      rep["core"] = {{"trivial", c.trivial},
                     {"rho1", optional_number(c.rho1)},
                     {"contact", c.contact},
                     {"inward_acceleration", c.inward_acceleration},
                     {"no_core_torus", c.no_core_torus},
                     {"slope_gap", optional_number(c.slope_gap)},
                     {"central_nondegenerate", c.central_nondegenerate},
                     {"layout", c.layout}};
      rep["contact"] = contact_json(validate_contact(res.profile, tol.contact));
      if (!out_path.empty()) save_profile(out_path, res.profile);
      else out << dump_json(profile_to_json(res.profile)) << '\n';
      emit(rep, report_path.empty() ? (out_path.empty() ? std::string() : out_path + ".report.json") : report_path, out);
      return kExitOk;
    }

    if (integrate->parsed()) {
      const Profile profile = load_profile(profile_path);
      const CylinderLeaf leaf = integrate_cylinder(profile, p, q, rho0, 0.0, theta0, phi0, tol.integration);
      for (const auto& w : leaf.warnings) diag.warn(w);
      write_text_file(csv_path, leaf_csv(leaf));
      Json j = header("reebfol.leaf", seed);
      j["leaf"] = leaf_json(leaf, profile, true);
      write_text_file(csv_path + ".json", dump_json(j) + "\n");
      return kExitOk;
    }

    if (foliate->parsed()) {
      const Profile profile = load_profile(profile_path);
      const FoliationReport rep = build_foliation(profile, p, q, density, tol.integration);
      const DisjointnessReport dis = disjointness_check(rep, pairs, seed);
      Json j = header("reebfol.foliation", seed);
      j["p"] = rep.p;
      j["q"] = rep.q;
      j["density"] = rep.density;
      j["regions"] = Json::array();
      for (const auto& r : rep.regions) {
        Json tori = Json::array();
        for (const auto& t : r.boundary_tori) tori.push_back(torus_json(t));
        j["regions"].push_back({{"kind", to_string(r.kind)}, {"lo", r.lo}, {"hi", r.hi}, {"p", r.p}, {"q", r.q},
                                {"boundary_tori", tori}});
      }
      j["leaves"] = Json::array();
      for (std::size_t i = 0; i < rep.leaves.size(); ++i) {
        Json l = leaf_json(rep.leaves[i], profile, true);
        l["region"] = rep.leaf_region[i];
        j["leaves"].push_back(l);
      }
      j["stability"] = {{"stable", rep.stability.stable}, {"reasons", rep.stability.reasons}};
      j["open_leaves"] = rep.open_leaves;
      j["census"] = {{"tori", Json::array()}, {"central", Json::array()}};
      for (const auto& t : rep.census.tori) j["census"]["tori"].push_back(torus_json(t));
      for (const auto& c : rep.census.central) j["census"]["central"].push_back(central_json(c));
      j["disjointness"] = {{"disjoint", dis.disjoint},
                           {"pairs_checked", dis.pairs_checked},
                           {"min_separation", dis.pairs_checked ? Json(dis.min_separation) : Json(nullptr)},
                           {"seed", dis.seed}};
      emit(j, out_path, out);
      if (!csv_dir.empty()) {
        std::filesystem::create_directories(csv_dir);
        for (std::size_t i = 0; i < rep.leaves.size(); ++i)
          write_text_file(std::filesystem::path(csv_dir) / ("leaf_" + std::to_string(i) + ".csv"),
                          leaf_csv(rep.leaves[i]));
      }
      for (const auto& r : rep.stability.reasons) diag.warn(r);
      return rep.stability.stable && dis.disjoint ? kExitOk : kExitFailed;
    }

    if (lift->parsed()) {
      std::vector<long long> ls;
      for (double x : parse_list(linking, 0, "--linking")) {
        if (x != std::round(x)) throw Error(ErrorCode::Input, "linking numbers must be integers");
        ls.push_back(static_cast<long long>(x));
      }
      const LiftArithmetic res = cover_lift(ls);
      Json j = header("reebfol.lift", seed);
      j["linking_numbers"] = res.linking_numbers;
      j["n"] = res.n;
      j["components"] = Json::array();
      for (const auto& c : res.components) j["components"].push_back({{"count", c.count}, {"lk_each", c.lk_each}});
      emit(j, out_path, out);
      return kExitOk;
    }

    if (trajectory->parsed()) {
      const Profile profile = load_profile(profile_path);
      if (points < 2) throw Error(ErrorCode::Input, "--points must be at least 2");
      std::string csv = "rho,f,g,D\n";
      for (int i = 0; i < points; ++i) {
        const double r = profile.rho_min() + (profile.rho_max() - profile.rho_min()) * i / (points - 1);
        csv += fmt17(r) + "," + fmt17(profile.eval(r, Channel::F, 0)) + "," + fmt17(profile.eval(r, Channel::G, 0)) +
               "," + fmt17(wronskian(profile, r)) + "\n";
      }
      if (out_path.empty()) out << csv;
      else write_text_file(out_path, csv);
      return kExitOk;
    }
  } catch (const Error& e) {
    diag.error(std::string(to_string(e.code())), e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    diag.error(std::nullopt, e.what());
    return kExitFailed;
  }
  return kExitInput;
}

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace reebfol::cli
