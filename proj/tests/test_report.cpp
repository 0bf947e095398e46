#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "abp/config.hpp"
#include "abp/report.hpp"

using namespace abp;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string body_after_headers(const std::string& text) {
  std::istringstream in(text);
  std::string line, body;
  while (std::getline(in, line))
    if (line.empty() || line[0] != '#') body += line + "\n";
  return body;
}

ExperimentConfig small_config() {
  return ExperimentConfig::parse(
      "[model]\npotential = cosine\ncoefficients = 2.0\n"
      "[sim]\nt_final = 2\nseed = 31\ncheckpoints = 1, 2\n"
      "[grid]\nsize = 64\n");
}

} // namespace

TEST_CASE("equal seeds give byte-identical CSV bodies") {
  ExperimentConfig cfg = small_config();
  EngineSettings s = cfg.make_engine_settings();
  RunReport r1 = run_abp(s), r2 = run_abp(s);
  std::string p1 = "ts_a.csv", p2 = "ts_b.csv";
  write_timeseries_csv(p1, r1, cfg.echo());
  write_timeseries_csv(p2, r2, cfg.echo());
  CHECK(slurp(p1) == slurp(p2));
  std::remove(p1.c_str());
  std::remove(p2.c_str());
}

TEST_CASE("time series embeds the resolved config and ends with the final row") {
  ExperimentConfig cfg = small_config();
  RunReport r = run_abp(cfg.make_engine_settings());
  write_timeseries_csv("ts.csv", r, cfg.echo());
  std::string text = slurp("ts.csv");
  CHECK(text.find("# schema: abp.timeseries.v1") == 0);
  CHECK(text.find("# sim.seed = 31") != std::string::npos);
  CHECK(text.find("t,theta,mu[cos1],rho[cos1],sup_a_err") != std::string::npos);
  std::string body = body_after_headers(text);
  int rows = 0;
  for (char ch : body)
    if (ch == '\n') ++rows;
  CHECK(rows == 3); // header + checkpoints at t=1,2 (t=2 is final)
  std::remove("ts.csv");
}

TEST_CASE("bias CSV has the documented columns") {
  ExperimentConfig cfg = small_config();
  RunReport r = run_abp(cfg.make_engine_settings());
  write_bias_csv("bias.csv", r, cfg.echo());
  std::string text = slurp("bias.csv");
  CHECK(text.find("z_1,h,F,A,dA_1") != std::string::npos);
  std::string body = body_after_headers(text);
  int rows = -1; // header
  for (char ch : body)
    if (ch == '\n') ++rows;
  CHECK(rows == 64);
  std::remove("bias.csv");
}

TEST_CASE("json summary parses and echoes the config") {
  ExperimentConfig cfg = small_config();
  RunReport r = run_abp(cfg.make_engine_settings());
  write_json_summary("sum.json", r, cfg.echo());
  auto j = nlohmann::json::parse(slurp("sum.json"));
  CHECK(j["config"]["sim.seed"] == "31");
  CHECK(j["mu_bar"].contains("cos1"));
  CHECK(j["theta"].get<double>() > 0.0);
  std::remove("sum.json");
}

#ifdef ABP_CLI_PATH
TEST_CASE("cli round trip: run, rerun, config error exit code") {
  std::string cli = ABP_CLI_PATH;
  std::string cfg_path = "cli_cfg.ini";
  {
    std::ofstream out(cfg_path);
    out << "[model]\npotential = cosine\ncoefficients = 2.0\n"
           "[sim]\nt_final = 1\nseed = 7\n[grid]\nsize = 64\n"
           "[output]\nprefix = clitest\n";
  }
  std::string cmd = cli + " run -c " + cfg_path + " -o . > /dev/null 2>&1";
  REQUIRE(std::system(cmd.c_str()) == 0);
  std::string first = body_after_headers(slurp("clitest_timeseries.csv"));
  REQUIRE(std::system(cmd.c_str()) == 0);
  std::string second = body_after_headers(slurp("clitest_timeseries.csv"));
  CHECK(first == second);

  {
    std::ofstream out(cfg_path);
    out << "[kernel]\nalpha = 1.5\n";
  }
  int rc = std::system(cmd.c_str());
  CHECK(WEXITSTATUS(rc) == 2);

  std::remove(cfg_path.c_str());
  std::remove("clitest_timeseries.csv");
  std::remove("clitest_bias.csv");
  std::remove("clitest_summary.json");
}
#endif
