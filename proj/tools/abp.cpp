// Command-line harness: single runs, fixed-bias baselines, replica variance
// tables, oracle dumps, SPDE runs and the built-in verification suite.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "abp/checks.hpp"
#include "abp/config.hpp"
#include "abp/errors.hpp"
#include "abp/oracle.hpp"
#include "abp/report.hpp"

namespace {

using namespace abp;

std::string output_dir(const ExperimentConfig& cfg, const std::string& cli_dir) {
  if (!cli_dir.empty()) return cli_dir;
  if (!cfg.output_dir.empty()) return cfg.output_dir;
  if (const char* env = std::getenv("ABP_OUT_DIR"); env && *env) return env;
  return ".";
}

std::string out_path(const ExperimentConfig& cfg, const std::string& cli_dir,
                     const std::string& suffix) {
  std::filesystem::path dir = output_dir(cfg, cli_dir);
  std::filesystem::create_directories(dir);
  return (dir / (cfg.output_prefix + suffix)).string();
}

GridFunction read_bias_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open bias file '" + path + "'");
  std::string line;
  int a_col = -1;
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (a_col < 0) {
      std::stringstream header(line);
      std::string col;
      int idx = 0;
      while (std::getline(header, col, ',')) {
        if (col == "A") a_col = idx;
        ++idx;
      }
      if (a_col < 0) throw ConfigError("", "bias file has no 'A' column");
      continue;
    }
    std::stringstream row(line);
    std::string cell;
    for (int idx = 0; std::getline(row, cell, ','); ++idx)
      if (idx == a_col) values.push_back(std::stod(cell));
  }
  if (values.size() < 4) throw ConfigError("", "bias file too short");
  GridFunction a(1, static_cast<int>(values.size()));
  a.v = values;
  return a;
}

GridFunction resolve_bias(const ExperimentConfig& cfg, const std::string& kind,
                          const std::string& file) {
  if (!file.empty()) return read_bias_csv(file);
  if (kind == "zero") return GridFunction(cfg.xi_m, cfg.grid_size, 0.0);
  EngineSettings s = cfg.make_engine_settings();
  if (kind == "a-star")
    return free_energy_profile(s.dyn.potential, cfg.grid_size, 4096);
  if (kind == "a-inf")
    return smoothed_free_energy(s.dyn.potential, s.kernel, cfg.grid_size, 4096);
  throw ConfigError("", "unknown bias '" + kind + "' (zero, a-star, a-inf)");
}

// Built-in presets for oracle dumps.
std::string preset_text(const std::string& name) {
  if (name == "bessel1")
    return "[model]\npotential = cosine\ncoefficients = 1.0\n"
           "[observables]\nnames = cos1, sin1\n";
  if (name == "well1")
    return "[model]\npotential = cosine\ncoefficients = 2.0\n"
           "[observables]\nnames = cos1, sin1\n";
  if (name == "flat1")
    return "[model]\npotential = cosine\ncoefficients = 0.0\n"
           "[observables]\nnames = cos1\n";
  if (name == "t2")
    return "[model]\npotential = coupled2d\ncoefficients = 2.0, 0.0, 0.5\n"
           "dimension = 2\n[observables]\nnames = cos1\n";
  throw ConfigError("", "unknown preset '" + name + "' (bessel1, well1, flat1, t2)");
}

int command_run(const ExperimentConfig& cfg, const std::string& dir, bool fixed,
                const std::string& bias_kind, const std::string& bias_file) {
  EngineSettings s = cfg.make_engine_settings();
  RunReport report;
  if (fixed) {
    GridFunction a = resolve_bias(cfg, bias_kind, bias_file);
    report = run_fixed_bias(s, a);
  } else {
    report = run_abp(s);
  }
  auto echo = cfg.echo();
  write_timeseries_csv(out_path(cfg, dir, "_timeseries.csv"), report, echo);
  write_bias_csv(out_path(cfg, dir, "_bias.csv"), report, echo);
  write_json_summary(out_path(cfg, dir, "_summary.json"), report, echo);
  std::cout << "wrote " << out_path(cfg, dir, "_{timeseries,bias}.csv and _summary.json")
            << "\n";
  return 0;
}

int command_variance(const ExperimentConfig& cfg, const std::string& dir, bool fixed,
                     const std::string& bias_kind, const std::string& bias_file) {
  EngineSettings s = cfg.make_engine_settings();
  std::vector<double> oracle_values;
  try {
    for (const auto& obs : s.observables)
      oracle_values.push_back(equilibrium_average(s.dyn.potential, obs, 2048));
  } catch (const DomainError&) {
    oracle_values.clear(); // no quadrature reference for this preset
  }
  VarianceTable table;
  if (fixed) {
    GridFunction a = resolve_bias(cfg, bias_kind, bias_file);
    table = replica_variance(s, cfg.replicas, oracle_values, &a);
  } else {
    table = replica_variance(s, cfg.replicas, oracle_values);
  }
  auto echo = cfg.echo();
  write_variance_csv(out_path(cfg, dir, "_variance.csv"), table, echo);
  write_variance_json(out_path(cfg, dir, "_variance.json"), table, echo);
  for (int r : table.failed_replicas)
    std::cerr << "warning: replica " << r << " failed and was skipped\n";
  std::cout << "wrote " << out_path(cfg, dir, "_variance.{csv,json}") << "\n";
  return 0;
}

int command_oracle(const ExperimentConfig& cfg, const std::string& dir) {
  EngineSettings s = cfg.make_engine_settings();
  OracleTables tables =
      build_oracle_tables(s.dyn.potential, s.kernel, s.observables, cfg.grid_size, 4096);
  write_oracle_csv(out_path(cfg, dir, "_oracle.csv"), tables, cfg.echo());
  std::cout << "wrote " << out_path(cfg, dir, "_oracle.csv") << "\n";
  return 0;
}

int command_spde(const ExperimentConfig& cfg, const std::string& dir) {
  SpdeSettings s = cfg.make_spde_settings();
  if (cfg.spde_nonlinearity == "allen-cahn")
    std::cerr << "warning: allen-cahn violates the dissipativity condition "
                 "(sup|V''| < pi^2); running under the override flag\n";
  RunReport report = run_spde_abp(s);
  auto echo = cfg.echo();
  write_timeseries_csv(out_path(cfg, dir, "_timeseries.csv"), report, echo);
  write_bias_csv(out_path(cfg, dir, "_bias.csv"), report, echo);
  write_json_summary(out_path(cfg, dir, "_summary.json"), report, echo);
  std::cout << "wrote " << out_path(cfg, dir, "_{timeseries,bias}.csv and _summary.json")
            << "\n";
  return 0;
}

int command_check(const std::vector<int>& only) {
  CheckOptions opts;
  opts.progress = &std::cout;
  opts.only = only;
  auto results = run_acceptance(opts);
  if (!all_passed(results)) {
    std::cout << "verification suite FAILED\n";
    return 4;
  }
  std::cout << "verification suite passed (" << results.size() << " criteria)\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive biasing potential sampler for metastable diffusions"};
  app.require_subcommand(1);

  std::string config_path, out_dir, bias_kind = "zero", bias_file, preset;
  std::vector<int> only;

  auto add_config = [&](CLI::App* cmd, bool required = true) {
    auto* opt = cmd->add_option("-c,--config", config_path, "experiment config file");
    if (required) opt->required();
    cmd->add_option("-o,--out", out_dir, "output directory (default: output.dir or $ABP_OUT_DIR)");
  };

  CLI::App* run = app.add_subcommand("run", "adaptive run: time series, bias, summary");
  add_config(run);

  CLI::App* fixed = app.add_subcommand("run-fixed-bias", "non-adaptive baseline run");
  add_config(fixed);
  fixed->add_option("--bias", bias_kind, "zero | a-star | a-inf");
  fixed->add_option("--bias-file", bias_file, "bias CSV (column A) instead of --bias");

  CLI::App* var = app.add_subcommand("variance", "replica ensemble t*Var table");
  add_config(var);
  var->add_option("--bias", bias_kind, "run non-adaptively with zero | a-star | a-inf");
  var->add_option("--bias-file", bias_file, "bias CSV for the non-adaptive ensemble");
  bool var_fixed = false;
  var->add_flag("--fixed", var_fixed, "freeze the bias (non-adaptive ensemble)");

  CLI::App* oracle = app.add_subcommand("oracle", "dump quadrature tables for a preset");
  oracle->add_option("-p,--preset", preset, "bessel1 | well1 | flat1 | t2");
  add_config(oracle, /*required=*/false);

  CLI::App* spde = app.add_subcommand("spde-run", "adaptive SPDE run");
  add_config(spde);

  CLI::App* check = app.add_subcommand("check", "run the built-in verification suite");
  check->add_option("--only", only, "criterion ids to run (default: all)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (check->parsed()) return command_check(only);

    ExperimentConfig cfg;
    if (oracle->parsed() && config_path.empty()) {
      if (preset.empty())
        throw ConfigError("", "oracle needs --preset or --config");
      cfg = ExperimentConfig::parse(preset_text(preset));
      cfg.output_prefix = preset;
    } else {
      cfg = ExperimentConfig::load(config_path);
    }

    if (run->parsed()) return command_run(cfg, out_dir, false, bias_kind, bias_file);
    if (fixed->parsed()) return command_run(cfg, out_dir, true, bias_kind, bias_file);
    if (var->parsed()) return command_variance(cfg, out_dir, var_fixed, bias_kind, bias_file);
    if (oracle->parsed()) return command_oracle(cfg, out_dir);
    if (spde->parsed()) return command_spde(cfg, out_dir);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const BlowupError& e) {
    std::cerr << "numerical blowup: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
