#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tmres/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("tmres_test_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string write_reference_config(const fs::path& dir, int n, double eps, double omega) {
  json entries = json::array();
  for (int i = 1; i <= n; ++i) {
    entries.push_back({{"eps", eps}, {"phi", 3.141592653589793 / i}});
  }
  const json doc = {
      {"physical", {{"rho_out", 1.0}, {"rho_in", 1e-4}, {"kappa_out", 1.0}, {"kappa_in", 1e-4}}},
      {"geometry", {{"uniform", {{"n", n}, {"length", 2.0}, {"gap", 10.0}, {"origin", 0.0}}}}},
      {"modulation", {{"omega", 0.03}, {"entries", entries}}},
      {"truncation", {{"K", 4}, {"M", 1}}},
      {"incident", {{"direction", "left"}, {"amplitude", 1.0}, {"omega", omega}}}};
  const fs::path file = dir / "config.json";
  std::ofstream out(file);
  out << doc.dump(2);
  return file.string();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_lines(const std::string& text) {
  std::size_t n = 0;
  for (char c : text) {
    if (c == '\n') ++n;
  }
  return n;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("quasifreq command emits one row per branch and method") {
  TempDir tmp;
  const std::string config = write_reference_config(tmp.path, 1, 0.0, 0.0);
  const int code = tmres::run_cli({"quasifreq", "--config", config, "--method", "all", "--out",
                                   (tmp.path / "out").string()});
  CHECK(code == tmres::kExitOk);

  const std::string csv = slurp(tmp.path / "out" / "quasifreq.csv");
  CHECK(csv.find("# config_hash=") == 0);
  CHECK(csv.find("axis,axis_value,method,branch,re_omega,im_omega,residual,cross_dev") !=
        std::string::npos);
  CHECK(csv.find("floquet") != std::string::npos);
  CHECK(csv.find("closed_form") != std::string::npos);
  CHECK(csv.find("det_root") != std::string::npos);

  const std::string manifest = slurp(tmp.path / "out" / "manifest.json");
  const json doc = json::parse(manifest);
  CHECK(doc["outputs"].size() == 1);
  CHECK(doc["version"] == tmres::kToolVersion);
}

TEST_CASE("csv output is byte-deterministic") {
  TempDir tmp;
  const std::string config = write_reference_config(tmp.path, 2, 0.6, 0.0048);
  const std::vector<std::string> args = {"energy", "--config", config, "--axis", "eps",
                                         "--grid", "0:0.6:4"};
  auto run = [&](const std::string& out) {
    std::vector<std::string> full = args;
    full.push_back("--out");
    full.push_back((tmp.path / out).string());
    return tmres::run_cli(full);
  };
  CHECK(run("a") == tmres::kExitOk);
  CHECK(run("b") == tmres::kExitOk);
  CHECK(slurp(tmp.path / "a" / "energy.csv") == slurp(tmp.path / "b" / "energy.csv"));
  CHECK(!slurp(tmp.path / "a" / "energy.csv").empty());
}

TEST_CASE("scatter command writes the field table and the solution document") {
  TempDir tmp;
  const std::string config = write_reference_config(tmp.path, 2, 0.6, 0.0071);
  const int code = tmres::run_cli({"scatter", "--config", config, "--grid", "-5:19:25", "--times",
                                   "0,104.7", "--out", (tmp.path / "out").string()});
  CHECK(code == tmres::kExitOk);

  const std::string csv = slurp(tmp.path / "out" / "scatter_field.csv");
  CHECK(count_lines(csv) == 2 + 2 * 25);  // comment + header + rows

  const json sol = json::parse(slurp(tmp.path / "out" / "scatter_solution.json"));
  CHECK(sol["modes"].size() == 9);
  CHECK(sol["energy"].get<double>() > 0.0);
  CHECK(sol["interior"].size() == 2);
}

TEST_CASE("scatter with the pole-pencil flag adds comparison columns") {
  TempDir tmp;
  const std::string config = write_reference_config(tmp.path, 2, 0.4, 0.0);
  // operating frequency 10*delta above the broadest resonance (close to it)
  const int code =
      tmres::run_cli({"scatter", "--config", config, "--omega", "1e-3-5.45e-5i", "--grid",
                      "24:24:1", "--times", "0", "--pole-pencil", "--out",
                      (tmp.path / "out").string()});
  CHECK(code == tmres::kExitOk);
  const std::string csv = slurp(tmp.path / "out" / "scatter_field.csv");
  CHECK(csv.find("re_approx,im_approx,rel_diff") != std::string::npos);
  const json sol = json::parse(slurp(tmp.path / "out" / "scatter_solution.json"));
  CHECK(sol.contains("poles"));
}

TEST_CASE("energy command records failures in-row and returns the partial code") {
  TempDir tmp;
  const std::string config = write_reference_config(tmp.path, 2, 0.4, 0.0);
  // omega = 0 is the degenerate zero quasifrequency; the other points solve
  const int code = tmres::run_cli({"energy", "--config", config, "--axis", "omega", "--grid",
                                   "0:0.0142:3", "--out", (tmp.path / "out").string()});
  CHECK(code == tmres::kExitPartialSweep);
  const std::string csv = slurp(tmp.path / "out" / "energy.csv");
  CHECK(csv.find("error") != std::string::npos);
  CHECK(csv.find("ok") != std::string::npos);
}

TEST_CASE("converge command tracks one branch across cutoffs") {
  TempDir tmp;
  const std::string config = write_reference_config(tmp.path, 1, 0.6, 0.005);
  const int code = tmres::run_cli({"converge", "--config", config, "--K", "2,3,4", "--out",
                                   (tmp.path / "out").string()});
  CHECK(code == tmres::kExitOk);
  const std::string csv = slurp(tmp.path / "out" / "converge.csv");
  CHECK(count_lines(csv) == 2 + 3);
  CHECK(csv.find("d_omega1") != std::string::npos);
}

TEST_CASE("config errors exit with code 1") {
  TempDir tmp;
  const int missing = tmres::run_cli({"energy", "--config", (tmp.path / "nope.json").string(),
                                      "--axis", "eps", "--grid", "0:0.5:2"});
  CHECK(missing == tmres::kExitConfigError);

  const fs::path bad = tmp.path / "bad.json";
  std::ofstream(bad) << "{\"physical\": {}}";
  const int malformed = tmres::run_cli(
      {"energy", "--config", bad.string(), "--axis", "eps", "--grid", "0:0.5:2"});
  CHECK(malformed == tmres::kExitConfigError);

  const std::string config = write_reference_config(tmp.path, 1, 0.0, 0.005);
  const int bad_grid = tmres::run_cli({"energy", "--config", config, "--axis", "eps", "--grid",
                                       "oops"});
  CHECK(bad_grid == tmres::kExitConfigError);

  const int bad_k = tmres::run_cli(
      {"converge", "--config", config, "--K", "4,2", "--out", (tmp.path / "out").string()});
  CHECK(bad_k == tmres::kExitConfigError);
}

TEST_CASE("unknown config keys are rejected end to end") {
  TempDir tmp;
  const std::string config = write_reference_config(tmp.path, 1, 0.0, 0.005);
  json doc = json::parse(slurp(config));
  doc["surprise"] = true;
  std::ofstream(config) << doc.dump();
  const int code = tmres::run_cli({"quasifreq", "--config", config});
  CHECK(code == tmres::kExitConfigError);
}

}  // TEST_SUITE
