#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "catenoid/config.hpp"
#include "catenoid/experiments.hpp"

using namespace catenoid;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config round-trips through serialization unchanged") {
  ExperimentConfig cfg;
  cfg.rho_max = 42.0;
  cfg.sectors = {0, 2};
  cfg.data.push_back(DataSpec{1, 0.5, -2.0, 1.25, 0.1});
  SourceConfig sc;
  sc.sector = 0;
  sc.radial_type = "bump";
  cfg.sources.push_back(sc);
  const std::string text1 = cfg.to_json_text();
  ExperimentConfig back = ExperimentConfig::from_json_text(text1);
  CHECK(back.to_json_text() == text1);
  CHECK(back.hash() == cfg.hash());
}

TEST_CASE("unknown fields are a load error") {
  CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({"grid": {"rho_maxx": 10}})"),
                  ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({"grids": {}})"), ConfigError);
  CHECK_THROWS_AS(
      ExperimentConfig::from_json_text(R"({"evolution": {"data": [{"sektor": 0}]}})"),
      ConfigError);
}

TEST_CASE("ranges are validated on load") {
  CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({"grid": {"n_points": 400}})"),
                  ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({"grid": {"rho_max": -3}})"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({"tails": {"a": 5}})"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({"modulation": {"r_ctf": 1.0}})"),
                  ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({"shooting": {"bracket": [2, -2]}})"),
                  ConfigError);
  // malformed json
  CHECK_THROWS_AS(ExperimentConfig::from_json_text("{nope"), ConfigError);
}

TEST_CASE("hash changes when any field changes") {
  ExperimentConfig a, b;
  b.seed = a.seed + 1;
  CHECK(a.hash() != b.hash());
  ExperimentConfig c;
  c.alpha = 0.2;
  CHECK(a.hash() != c.hash());
}

TEST_CASE("reruns with the same config reproduce data products byte for byte") {
  ExperimentConfig cfg;
  cfg.rho_max = 20.0;
  cfg.n_points = 401;
  cfg.t_final = 2.0;
  cfg.sectors = {1};
  cfg.data.push_back(DataSpec{1, 1.0, 2.0, 1.0, 0.0});
  const auto tmp = std::filesystem::temp_directory_path() / "catlab_det";
  std::filesystem::remove_all(tmp);

  cfg.output_dir = (tmp / "a").string();
  run_profile(cfg);
  EvolveProducts e1 = run_evolve(cfg, false);
  cfg.output_dir = (tmp / "b").string();
  run_profile(cfg);
  EvolveProducts e2 = run_evolve(cfg, false);

  CHECK(slurp((tmp / "a" / "profile.csv").string()) ==
        slurp((tmp / "b" / "profile.csv").string()));
  CHECK(slurp(e1.norms_csv) == slurp(e2.norms_csv));
  CHECK(slurp(e1.probes_csv) == slurp(e2.probes_csv));
  CHECK(!slurp(e1.norms_csv).empty());
  std::filesystem::remove_all(tmp);
}

TEST_CASE("profile CSV carries the documented header and row count") {
  ExperimentConfig cfg;
  cfg.rho_max = 10.0;
  cfg.n_points = 101;
  const auto tmp = std::filesystem::temp_directory_path() / "catlab_profile";
  std::filesystem::remove_all(tmp);
  cfg.output_dir = tmp.string();
  const std::string path = run_profile(cfg);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "rho,f,z,weight,flux,V,nu0,phi_odd,phi_even");
  int rows = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == cfg.n_points);
  std::filesystem::remove_all(tmp);
}

TEST_CASE("report schema: ids, verdicts, measured values") {
  std::vector<CriterionResult> res = run_acceptance({1, 2}, 1234);
  const auto tmp = std::filesystem::temp_directory_path() / "catlab_report.json";
  write_report_json(res, tmp.string());
  nlohmann::json j = nlohmann::json::parse(slurp(tmp.string()));
  REQUIRE(j.contains("criteria"));
  REQUIRE(j.contains("all_pass"));
  CHECK(j["criteria"].size() == 2);
  for (const auto& c : j["criteria"]) {
    CHECK(c.contains("id"));
    CHECK(c.contains("name"));
    CHECK(c.contains("pass"));
    CHECK(c.contains("measured"));
    CHECK(c.contains("runtime_s"));
    CHECK(c["measured"].is_object());
  }
  CHECK(j["criteria"][0]["id"] == 1);
  CHECK(j["criteria"][0]["pass"].is_boolean());
  std::filesystem::remove(tmp);
}

#ifdef CATENOID_LAB_BIN
TEST_CASE("binary exit codes: success and config failure") {
  const auto tmp = std::filesystem::temp_directory_path() / "catlab_cli";
  std::filesystem::create_directories(tmp);
  const std::string good = (tmp / "good.json").string();
  std::ofstream(good) << R"({"grid": {"rho_max": 10.0, "n_points": 101}, "output_dir": ")"
                      << (tmp / "out").string() << R"("})";
  const std::string bad = (tmp / "bad.json").string();
  std::ofstream(bad) << R"({"grid": {"oops": 1}})";

  std::string cmd_ok = std::string(CATENOID_LAB_BIN) + " --config " + good +
                       " profile > /dev/null 2>&1";
  std::string cmd_bad = std::string(CATENOID_LAB_BIN) + " --config " + bad +
                        " profile > /dev/null 2>&1";
  CHECK(std::system(cmd_ok.c_str()) == 0);
  const int rc = std::system(cmd_bad.c_str());
  CHECK(WEXITSTATUS(rc) == 1);
  // manifest written next to the outputs
  CHECK(std::filesystem::exists(tmp / "out" / "manifest.json"));
  std::filesystem::remove_all(tmp);
}
#endif
