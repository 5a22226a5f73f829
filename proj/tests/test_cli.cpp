#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli_app.hpp"
#include "helpers/test_oracles.hpp"
#include "sinr/oracle.hpp"
#include "sinr/spec_io.hpp"

using nlohmann::json;
using namespace sinr;

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code = 0;
  std::string out;
  std::string err;
};

RunResult run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / "sinr_region_cli_tests";
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const std::string& name, const std::string& text) {
  const fs::path p = temp_dir() / name;
  std::ofstream(p) << text;
  return p;
}

std::string fixture(const char* name) {
  return std::string(TEST_DATA_DIR) + "/" + name;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (char c : line) {
      if (c == '"') {
        quoted = !quoted;
      } else if (c == ',' && !quoted) {
        fields.push_back(field);
        field.clear();
      } else {
        field += c;
      }
    }
    fields.push_back(field);
    rows.push_back(std::move(fields));
  }
  return rows;
}

int column_of(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

}  // namespace

TEST_CASE("solve emits a report whose gamma matches the bisection oracle") {
  const RunResult r = run_cli({"solve", "--input", fixture("paper_example1.json")});
  REQUIRE(r.exit_code == 0);
  const json rep = json::parse(r.out);
  const LoadedSpec spec = load_channel_spec(fixture("paper_example1.json"));
  const double oracle =
      bisect_max_sinr(spec.channel, Direction{Vector::Ones(2)}, spec.constraints);
  const double gamma = rep["gamma_star"].get<double>();
  CHECK(std::abs(gamma - oracle) <= 1e-7 * oracle);
  CHECK(rep["unbounded"] == false);
  CHECK(rep["binding"].is_string());
  CHECK(rep["power"].size() == 2);
  CHECK(rep["sinr"].size() == 2);
  CHECK(rep["rate"].size() == 2);
}

TEST_CASE("csv and json solves carry equal numeric values") {
  const RunResult js =
      run_cli({"solve", "--input", fixture("paper_example1.json"), "--format", "json"});
  const RunResult cs =
      run_cli({"solve", "--input", fixture("paper_example1.json"), "--format", "csv"});
  REQUIRE(js.exit_code == 0);
  REQUIRE(cs.exit_code == 0);
  const json rep = json::parse(js.out);
  const auto rows = parse_csv(cs.out);
  REQUIRE(rows.size() == 2);
  const int gcol = column_of(rows[0], "gamma_star");
  REQUIRE(gcol >= 0);
  CHECK(std::stod(rows[1][gcol]) == rep["gamma_star"].get<double>());
  const int p1 = column_of(rows[0], "power1");
  REQUIRE(p1 >= 0);
  CHECK(std::stod(rows[1][p1]) == rep["power"][0].get<double>());
}

TEST_CASE("an interference-free spec without constraints exits 2") {
  const fs::path spec = write_file("diag.json", R"({
    "gains": [[1.0, 0.0], [0.0, 2.0]],
    "noise": [0.1, 0.1]
  })");
  const RunResult r = run_cli({"solve", "--input", spec.string()});
  CHECK(r.exit_code == 2);
  const json rep = json::parse(r.out);
  CHECK(rep["unbounded"] == true);
  CHECK(rep["gamma_star"].is_null());
}

TEST_CASE("a malformed spec exits 1 with the field path on stderr") {
  const fs::path spec = write_file("bad.json", R"({
    "gains": [[1.0, 0.2], [0.3, 0.0]],
    "noise": [0.1, 0.1]
  })");
  const RunResult r = run_cli({"solve", "--input", spec.string()});
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("gains[1][1]") != std::string::npos);

  const RunResult missing = run_cli({"solve", "--input", "/nonexistent.json"});
  CHECK(missing.exit_code == 1);
}

TEST_CASE("wrong-length mu exits 1") {
  const RunResult r = run_cli(
      {"solve", "--input", fixture("paper_example1.json"), "--mu", "1,2,3"});
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("mu") != std::string::npos);
}

TEST_CASE("per-constraint sweep: combined curve is the rowwise minimum") {
  const int points = 181;
  const RunResult r = run_cli({"sweep", "--input", fixture("paper_example1.json"),
                               "--points", std::to_string(points),
                               "--per-constraint"});
  REQUIRE(r.exit_code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 1 + 5 * points);  // header + 5 curves
  const int curve_col = column_of(rows[0], "curve");
  const int gamma_col = column_of(rows[0], "gamma_star");
  const int theta_col = column_of(rows[0], "theta");
  REQUIRE(curve_col == 0);
  REQUIRE(gamma_col > 0);

  std::map<std::string, std::vector<double>> gammas;
  std::map<std::string, std::vector<std::string>> thetas;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    gammas[rows[i][curve_col]].push_back(std::stod(rows[i][gamma_col]));
    thetas[rows[i][curve_col]].push_back(rows[i][theta_col]);
  }
  REQUIRE(gammas.count("combined"));
  REQUIRE(gammas.count("unconstrained"));
  REQUIRE(gammas.count("c1"));
  REQUIRE(gammas.count("c2"));
  REQUIRE(gammas.count("c3"));
  for (int k = 0; k < points; ++k) {
    const double expect = std::min(
        {gammas["c1"][k], gammas["c2"][k], gammas["c3"][k]});
    CHECK(gammas["combined"][k] == expect);
    CHECK(gammas["unconstrained"][k] >= expect);
    CHECK(thetas["combined"][k] == thetas["c1"][k]);  // same direction grid
  }
}

TEST_CASE("sweep output is deterministic byte for byte") {
  const fs::path out1 = temp_dir() / "sweep1.csv";
  const fs::path out2 = temp_dir() / "sweep2.csv";
  for (const auto& p : {out1, out2}) {
    const RunResult r =
        run_cli({"sweep", "--input", fixture("paper_example1.json"), "--points",
                 "41", "--per-constraint", "--output", p.string()});
    REQUIRE(r.exit_code == 0);
  }
  std::ifstream f1(out1), f2(out2);
  std::stringstream s1, s2;
  s1 << f1.rdbuf();
  s2 << f2.rdbuf();
  CHECK(s1.str() == s2.str());
  CHECK(!s1.str().empty());
}

TEST_CASE("sweep json mirrors the csv numbers") {
  const RunResult cs = run_cli(
      {"sweep", "--input", fixture("paper_example1.json"), "--points", "5"});
  const RunResult js = run_cli({"sweep", "--input", fixture("paper_example1.json"),
                                "--points", "5", "--format", "json"});
  REQUIRE(cs.exit_code == 0);
  REQUIRE(js.exit_code == 0);
  const auto rows = parse_csv(cs.out);
  const json doc = json::parse(js.out);
  REQUIRE(doc["points"].size() == 5);
  const int gamma_col = column_of(rows[0], "gamma_star");
  for (int k = 0; k < 5; ++k)
    CHECK(std::stod(rows[k + 1][gamma_col]) ==
          doc["points"][k]["gamma_star"].get<double>());
}

TEST_CASE("weak-cross-gain axis intercepts approach the single-link rates") {
  const RunResult r = run_cli({"sweep", "--input", fixture("paper_example2.json"),
                               "--points", "181"});
  REQUIRE(r.exit_code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 182);
  const int r1 = column_of(rows[0], "rate1");
  const int r2 = column_of(rows[0], "rate2");
  const double budget1 = std::log2(1.0 + 1.0 * 2.0430 / 0.1);
  const double budget2 = std::log2(1.0 + 1.0 * 1.3313 / 0.1);
  CHECK(std::abs(std::stod(rows[1][r1]) - budget1) <= 0.02 * budget1);
  CHECK(std::abs(std::stod(rows[181][r2]) - budget2) <= 0.02 * budget2);
}

TEST_CASE("sweep on n!=2 requires a directions file and accepts one") {
  const fs::path spec = write_file("three_user.json", R"({
    "gains": [[1.0, 0.05, 0.02], [0.03, 1.2, 0.04], [0.02, 0.05, 0.9]],
    "noise": [0.1, 0.1, 0.1],
    "constraints": [{"users": [1, 2, 3], "bound": 2.0}]
  })");
  const RunResult bare = run_cli({"sweep", "--input", spec.string()});
  CHECK(bare.exit_code == 1);

  const fs::path dirs = write_file("dirs.txt", "1,1,1\n2,1,0.5\n0.5,0.5,2\n");
  const RunResult r =
      run_cli({"sweep", "--input", spec.string(), "--directions", dirs.string()});
  REQUIRE(r.exit_code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 4);
  CHECK(column_of(rows[0], "mu3") >= 0);
  CHECK(rows[1][column_of(rows[0], "theta")].empty());  // no angle for explicit dirs
}

TEST_CASE("a failed sweep direction fills only the error column") {
  const fs::path dirs = write_file("dirs_with_axis.txt", "1,1\n1,0\n1,2\n");
  const RunResult r = run_cli({"sweep", "--input", fixture("paper_example1.json"),
                               "--directions", dirs.string()});
  REQUIRE(r.exit_code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 4);
  const int err_col = column_of(rows[0], "error");
  const int bind_col = column_of(rows[0], "binding");
  const int gamma_col = column_of(rows[0], "gamma_star");
  REQUIRE(err_col == static_cast<int>(rows[0].size()) - 1);
  for (const auto& row : rows) REQUIRE(row.size() == rows[0].size());
  CHECK(rows[1][err_col].empty());
  CHECK(rows[2][err_col].find("mu") != std::string::npos);  // zero-weight direction
  CHECK(rows[2][bind_col].empty());
  CHECK(rows[2][gamma_col].empty());
  CHECK(!rows[3][gamma_col].empty());  // later rows unaffected
}

TEST_CASE("tv-solve on one state equals the static solve") {
  const fs::path tv_spec = write_file("tv_one_state.json", R"({
    "states": [{"gains": [[0.6791, 0.0999], [0.0411, 0.6864]], "prob": 1.0}],
    "noise": [0.1, 0.1],
    "constraints": [
      {"users": [1], "bound": 0.8},
      {"users": [2], "bound": 1.0},
      {"users": [1, 2], "bound": 1.4}
    ]
  })");
  const RunResult tv = run_cli({"tv-solve", "--input", tv_spec.string()});
  const RunResult st = run_cli({"solve", "--input", fixture("paper_example1.json")});
  REQUIRE(tv.exit_code == 0);
  REQUIRE(st.exit_code == 0);
  const json tv_rep = json::parse(tv.out);
  const json st_rep = json::parse(st.out);
  const double a = tv_rep["gamma_star"].get<double>();
  const double b = st_rep["gamma_star"].get<double>();
  CHECK(std::abs(a - b) <= 1e-10 * b);
  CHECK(tv_rep["average_power"].size() == 2);

  // solve refuses time-varying input, tv-solve refuses static input
  CHECK(run_cli({"solve", "--input", tv_spec.string()}).exit_code == 1);
  CHECK(run_cli({"tv-solve", "--input", fixture("paper_example1.json")}).exit_code == 1);
}

TEST_CASE("tv-solve rejects mismatched state dimensions") {
  const fs::path spec = write_file("tv_mismatch.json", R"({
    "states": [
      {"gains": [[1.0, 0.1], [0.1, 1.0]], "prob": 0.5},
      {"gains": [[1.0]], "prob": 0.5}
    ],
    "noise": [0.1, 0.1]
  })");
  const RunResult r = run_cli({"tv-solve", "--input", spec.string()});
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("states[1]") != std::string::npos);
}

TEST_CASE("tv-solve matches its bisection oracle through verify") {
  const fs::path spec = write_file("tv_two_state.json", R"({
    "states": [
      {"gains": [[1.1, 0.15], [0.08, 0.9]], "prob": 0.3},
      {"gains": [[0.8, 0.05], [0.2, 1.4]], "prob": 0.7}
    ],
    "noise": [0.1, 0.1],
    "constraints": [{"users": [1, 2], "bound": 1.0}]
  })");
  const RunResult r = run_cli({"verify", "--input", spec.string()});
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("pass") != std::string::npos);
}

TEST_CASE("verify passes on a seeded randomly generated spec") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 3; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 4);
    LoadedSpec spec;
    spec.channel = testutil::random_channel(rng, n);
    spec.constraints = {testutil::random_constraint(rng, n),
                        testutil::random_constraint(rng, n)};
    const fs::path path = write_file("random_spec.json", serialize_channel_spec(spec));
    const RunResult r =
        run_cli({"verify", "--input", path.string(), "--seed", "11"});
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
  }
}

TEST_CASE("verify passes on the fixtures and fails when corrupted") {
  for (const char* name : {"paper_example1.json", "paper_example2.json"}) {
    const RunResult ok = run_cli({"verify", "--input", fixture(name), "--seed", "7"});
    CHECK(ok.exit_code == 0);
    CHECK(ok.out.find("FAIL") == std::string::npos);
  }
  const RunResult bad = run_cli(
      {"verify", "--input", fixture("paper_example1.json"), "--corrupt-gamma"});
  CHECK(bad.exit_code == 2);
  CHECK(bad.out.find("FAIL") != std::string::npos);
}

TEST_CASE("verify agrees with the oracle on unbounded one-directional specs") {
  const fs::path spec = write_file("triangular.json", R"({
    "gains": [[1.0, 0.4], [0.0, 2.0]],
    "noise": [0.1, 0.1]
  })");
  const RunResult r = run_cli({"verify", "--input", spec.string()});
  CHECK(r.exit_code == 0);  // closed form and bisection both report unbounded
  CHECK(r.out.find("inf") != std::string::npos);
}

TEST_CASE("the verify gate honors SINR_REGION_TOL and --tol") {
  ::setenv("SINR_REGION_TOL", "0.1", 1);
  const RunResult loose = run_cli(
      {"verify", "--input", fixture("paper_example1.json"), "--corrupt-gamma"});
  CHECK(loose.exit_code == 0);  // 0.1% corruption passes a 10% gate
  ::unsetenv("SINR_REGION_TOL");

  const RunResult strict =
      run_cli({"verify", "--input", fixture("paper_example1.json"),
               "--corrupt-gamma", "--tol", "1e-9"});
  CHECK(strict.exit_code == 2);
}

TEST_CASE("verify emits json when asked") {
  const RunResult r = run_cli({"verify", "--input", fixture("paper_example1.json"),
                               "--format", "json"});
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["pass"] == true);
  REQUIRE(doc["results"].size() == 1);
  const double closed = doc["results"][0]["closed"].get<double>();
  const double bisect = doc["results"][0]["bisect"].get<double>();
  CHECK(std::abs(closed - bisect) <= 1e-7 * bisect);
}
