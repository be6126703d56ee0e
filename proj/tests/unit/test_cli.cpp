#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include <sys/wait.h>

#include <json.hpp>

#include "reebfol/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kData = REEBFOL_DATA_DIR;

struct Result {
  int code = 0;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Result r;
  r.code = reebfol::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "reebfol_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::vector<json> diagnostics(const std::string& err) {
  std::vector<json> out;
  std::istringstream in(err);
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) out.push_back(json::parse(line));
  return out;
}

}  // namespace

TEST_CASE("validate exit codes") {
  const Result ok = run({"validate", "--profile", kData + "/lambda0.json"});
  CHECK(ok.code == reebfol::cli::kExitOk);
  const json rep = json::parse(ok.out);
  CHECK(rep["schema"] == "reebfol.validate");
  CHECK(rep["schema_version"] == 1);
  CHECK(rep["report"]["valid"] == true);
  CHECK(rep["report"]["d_prime_at_zero"] == 2.0);

  const Result bad = run({"validate", "--profile", kData + "/mirrored.json"});
  CHECK(bad.code == reebfol::cli::kExitFailed);
  CHECK(json::parse(bad.out)["report"]["valid"] == false);

  const Result missing = run({"validate", "--profile", kData + "/nope.json"});
  CHECK(missing.code == reebfol::cli::kExitInput);
  const auto diag = diagnostics(missing.err);
  REQUIRE_FALSE(diag.empty());
  CHECK(diag.back()["level"] == "error");
  CHECK(diag.back()["code"] == "input");
}

TEST_CASE("argument errors") {
  CHECK(run({}).code == reebfol::cli::kExitInput);
  CHECK(run({"frobnicate"}).code == reebfol::cli::kExitInput);
  CHECK(run({"orbits", "--profile", kData + "/lambda0.json"}).code == reebfol::cli::kExitInput);
  CHECK(run({"--tol", "bogus=1", "validate", "--profile", kData + "/lambda0.json"}).code ==
        reebfol::cli::kExitInput);
  CHECK(run({"--tol", "rtol=-1", "validate", "--profile", kData + "/lambda0.json"}).code ==
        reebfol::cli::kExitInput);
  CHECK(run({"--tol", "grid_points=500", "validate", "--profile", kData + "/lambda0.json"}).code ==
        reebfol::cli::kExitOk);
}

TEST_CASE("orbits report") {
  const Result r = run({"orbits", "--profile", kData + "/half_lutz.json", "--p", "1", "--q", "0", "--json"});
  REQUIRE(r.code == 0);
  const json rep = json::parse(r.out);
  REQUIRE(rep["tori"].size() == 1);
  CHECK(rep["tori"][0]["morse_bott"] == true);
  CHECK(rep["tori"][0]["period"].get<double>() > 0.0);
  const Result shifted = run({"orbits", "--profile", kData + "/surgery_q1.json", "--p", "1", "--q", "1", "--json",
                              "--cz-offset", "2"});
  REQUIRE(shifted.code == 0);
  const json central = json::parse(shifted.out)["central"][0];
  REQUIRE(central["cz"].is_number_integer());
  CHECK(central["cz_shifted"] == central["cz"].get<int>() + 2);
  const Result cont = run({"orbits", "--profile", kData + "/lambda0.json", "--p", "0", "--q", "1"});
  CHECK(cont.code == reebfol::cli::kExitFailed);
  CHECK(diagnostics(cont.err).back()["code"] == "continuum_of_tori");
}

TEST_CASE("twist and surgery write valid profiles") {
  const fs::path twisted = scratch("twisted.json"), report = scratch("twist_report.json");
  REQUIRE(run({"twist", "--profile", kData + "/lambda0.json", "--kind", "half", "--delta", "0.5", "--out",
               twisted.string(), "--report", report.string()})
              .code == 0);
  CHECK(slurp(twisted) == slurp(kData + "/half_lutz.json"));
  CHECK(json::parse(slurp(report))["contact"]["valid"] == true);
  CHECK(run({"validate", "--profile", twisted.string()}).code == 0);

  const fs::path surgered = scratch("surgery.json");
  REQUIRE(run({"surgery", "--profile", kData + "/lambda0.json", "--matrix", "1,1,0,1", "--delta", "0.3",
               "--epsilon", "0.8", "--twist", "half", "--out", surgered.string()})
              .code == 0);
  CHECK(slurp(surgered) == slurp(kData + "/surgery_q1.json"));
  CHECK(run({"surgery", "--profile", kData + "/lambda0.json", "--matrix", "2,1,1,2", "--delta", "0.3",
             "--epsilon", "0.8"})
            .code == reebfol::cli::kExitFailed);
}

TEST_CASE("integrate writes the csv and its sidecar") {
  const fs::path csv = scratch("leaf.csv");
  REQUIRE(run({"integrate", "--profile", kData + "/half_lutz.json", "--p", "1", "--q", "0", "--rho0", "0.1",
               "--csv", csv.string()})
              .code == 0);
  std::istringstream in(slurp(csv));
  std::string header;
  std::getline(in, header);
  CHECK(header == "s,a,rho");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  const json side = json::parse(slurp(csv.string() + ".json"));
  CHECK(side["schema"] == "reebfol.leaf");
  CHECK(side["leaf"]["samples"] == rows);
  CHECK(side["leaf"]["plane"] == true);
  CHECK(side["leaf"]["cr_residual"].get<double>() < 1e-8);
}

TEST_CASE("foliate on the half Lutz fixture") {
  const fs::path out = scratch("foliation.json"), dir = scratch("leaves");
  const Result r = run({"--seed", "3", "foliate", "--profile", kData + "/half_lutz.json", "--p", "1", "--q", "0",
                        "--out", out.string(), "--csv-dir", dir.string()});
  CHECK(r.code == 0);
  const json rep = json::parse(slurp(out));
  CHECK(rep["stability"]["stable"] == true);
  CHECK(rep["seed"] == 3);
  CHECK(rep["disjointness"]["disjoint"] == true);
  CHECK(rep["disjointness"]["pairs_checked"] == 500);
  CHECK(rep["regions"].size() == 2);
  CHECK(fs::exists(dir / "leaf_0.csv"));

  const Result degenerate = run({"foliate", "--profile", kData + "/lambda0.json", "--p", "1", "--q", "0",
                                 "--density", "2", "--out", scratch("deg.json").string()});
  CHECK(degenerate.code == reebfol::cli::kExitFailed);
}

TEST_CASE("lift arithmetic") {
  const Result r = run({"lift", "--linking", "2,3"});
  REQUIRE(r.code == 0);
  const json rep = json::parse(r.out);
  CHECK(rep["n"] == 6);
  CHECK(rep["components"][0]["count"] == 2);
  CHECK(rep["components"][1]["count"] == 3);
  CHECK(run({"lift", "--linking", "0"}).code == reebfol::cli::kExitInput);
  CHECK(run({"lift", "--linking", "1.5"}).code == reebfol::cli::kExitInput);
}

TEST_CASE("trajectory columns") {
  const Result std_form = run({"trajectory", "--profile", kData + "/lambda0.json", "--points", "11"});
  REQUIRE(std_form.code == 0);
  std::istringstream in(std_form.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "rho,f,g,D");
  int rows = 0;
  while (std::getline(in, line)) {
    double rho, f, g, d;
    char c;
    std::istringstream row(line);
    row >> rho >> c >> f >> c >> g >> c >> d;
    CHECK(f == 1.0);
    CHECK(g == doctest::Approx(rho * rho));
    ++rows;
  }
  CHECK(rows == 11);

  auto g_sign_changes = [](const std::string& csv) {
    std::istringstream s(csv);
    std::string l;
    std::getline(s, l);
    int changes = 0;
    double prev = 0.0;
    bool first = true, f_positive_at_end = false;
    while (std::getline(s, l)) {
      double rho, f, g, d;
      char c;
      std::istringstream row(l);
      row >> rho >> c >> f >> c >> g >> c >> d;
      if (rho > 0.0) {
        if (!first && (g > 0.0) != (prev > 0.0)) ++changes;
        prev = g;
        first = false;
      }
      f_positive_at_end = f > 0.0;
    }
    return std::pair{changes, f_positive_at_end};
  };
  const auto half = g_sign_changes(run({"trajectory", "--profile", kData + "/half_lutz.json"}).out);
  CHECK(half.first == 1);
  const auto full = g_sign_changes(run({"trajectory", "--profile", kData + "/full_lutz.json"}).out);
  CHECK(full.first == 2);
  CHECK(full.second);
}

TEST_CASE("the installed binary agrees with the library entry point") {
  const std::string cmd = std::string("\"") + REEBFOL_CLI_PATH + "\" validate --profile \"" + kData +
                          "/mirrored.json\" > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  CHECK(WEXITSTATUS(status) == reebfol::cli::kExitFailed);
}
