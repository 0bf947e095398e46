#ifndef ABP_CONFIG_HPP
#define ABP_CONFIG_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "abp/engine.hpp"
#include "abp/spde.hpp"

namespace abp {

/// Fully resolved experiment description, parsed from an INI-style document:
///
///   [model]
///   dynamics = brownian            # brownian | langevin | extended
///   potential = cosine             # cosine | coupled2d | quadratic | tabulated
///   coefficients = 2.0
///   beta = 1.0
///   dimension = 1                  # quadratic preset only
///   gamma = 1.0                    # langevin friction
///   epsilon = 0.1                  # extended coupling width
///   xi_m = 1
///   x0 = 0.5
///   mu0 = atom                     # atom | uniform
///
///   [kernel]                       # family = gaussian | constant
///   epsilon = 0.05
///   alpha = 0.9
///   wraps = 5
///
///   [norm]                         # kind = l1 | lq:<q> | point:<z0> | min | max
///   kind = l1
///   k = 0
///
///   [grid]
///   size = 256
///   refresh_stride = 1
///   track_mean_force = false
///
///   [sim]
///   dt = 1e-3
///   t_final = 100
///   scheme = auto                  # auto | em | baoab
///   seed = 0
///   replicas = 1
///   checkpoints =
///   step_cap = 100000000
///
///   [observables]
///   names = cos1
///
///   [spde]                         # optional block
///   modes = 32
///   grid = 128
///   nonlinearity = cosine          # cosine | allen-cahn
///   c = 1.0
///   allow_allen_cahn = false
///
///   [output]
///   dir = .
///   prefix = run
///
/// Dotted keys ("kernel.alpha = 0.9") are accepted outside sections. Unknown
/// keys, type mismatches and constraint violations are reported with their
/// key path.
struct ExperimentConfig {
  // model
  std::string dynamics = "brownian";
  std::string potential = "cosine";
  std::vector<double> coefficients = {1.0};
  double beta = 1.0;
  int dimension = 1;
  double gamma = 1.0;
  double model_epsilon = 0.1;
  int xi_m = 1;
  std::vector<double> x0;
  std::string mu0 = "atom";

  // kernel
  std::string kernel_family = "gaussian";
  double kernel_epsilon = 0.05;
  double kernel_alpha = 0.9;
  int kernel_wraps = 5;

  // norm
  std::string norm_kind = "l1";
  int norm_k = 0;

  // grid
  int grid_size = 256;
  int refresh_stride = 1;
  bool track_mean_force = false;

  // sim
  double dt = 1e-3;
  double t_final = 100.0;
  std::string scheme = "auto";
  std::uint64_t seed = 0;
  int replicas = 1;
  std::vector<double> checkpoints;
  long step_cap = 100000000;

  // observables
  std::vector<std::string> observable_names = {"cos1"};

  // spde
  bool has_spde = false;
  int spde_modes = 32;
  int spde_grid = 128;
  std::string spde_nonlinearity = "cosine";
  double spde_c = 1.0;
  bool spde_allow_allen_cahn = false;

  // output
  std::string output_dir;
  std::string output_prefix = "run";

  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load(const std::string& path);

  /// Assemble the runnable pieces (validates everything again).
  DynamicsSpec make_dynamics() const;
  KernelSpec make_kernel() const;
  NormalizationSpec make_norm() const;
  std::vector<Observable> make_observables() const;
  EngineSettings make_engine_settings() const;
  SpdeSettings make_spde_settings() const;

  /// Resolved (key, value) pairs for reproducibility headers.
  std::vector<std::pair<std::string, std::string>> echo() const;
};

} // namespace abp

#endif
