#ifndef ABP_ENGINE_HPP
#define ABP_ENGINE_HPP

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "abp/bias.hpp"
#include "abp/integrators.hpp"
#include "abp/model.hpp"

namespace abp {

/// Named observables. Finite-dimensional kinds act on the configuration part
/// of the state (q for Langevin, x for the extended dynamics); Spde* kinds
/// act on the spectral state.
struct Observable {
  enum class Kind {
    One,
    CosProduct,  // prod over axes with freq k_i >= 1 of cos(2 pi k_i x_i)
    Sin,         // sin(2 pi k x_1)
    Bump,        // exp((cos(2pi(x1 - c)) - 1) / (2 pi^2 w^2)): smooth bump at c
    SpdeMode,    // u_n
    SpdeModeSq,  // u_n^2
    SpdeUbar,    // integral of u
    SpdeUbarSq,
    SpdeXi       // xi(u)
  };

  Kind kind = Kind::One;
  std::vector<int> freqs;  // CosProduct: per-axis frequencies (0 = absent)
  int k = 1;               // Sin / SpdeMode*
  double center = 0.5, width = 0.1;
  std::string name = "one";

  double eval_config(std::span<const double> x) const;

  /// Parse "one", "cos1", "cos2", "cos1cos2", "sin1", "bump:<c>:<w>",
  /// "u<n>", "u<n>sq", "ubar", "ubarsq", "xi".
  static Observable parse(const std::string& name);
};

/// Time-weighted histogram of the colvar trajectory (one row per colvar axis).
struct Histogram {
  int bins = 50;
  std::vector<std::vector<double>> mass;
  double total = 0.0;

  void init(int colvar_dim, int bins);
  void add(std::span<const double> z, double dt);
  double max_min_ratio(int axis = 0) const;
};

/// Running sums behind the weighted and unweighted empirical averages.
struct EstimatorAccumulators {
  double S_w = 0.0;    // integral of the weights (theta)
  double elapsed = 0.0;
  std::vector<double> S_wphi, S_phi, mu0_phi;
  Histogram hist;

  double mu_bar(std::size_t i) const { return (mu0_phi[i] + S_wphi[i]) / (1.0 + S_w); }
  double rho_bar(std::size_t i) const { return (mu0_phi[i] + S_phi[i]) / (1.0 + elapsed); }
};

struct CheckpointRecord {
  double t = 0.0;
  double theta = 0.0;
  std::vector<double> mu_bar, rho_bar;
  double bias_sup_err = std::numeric_limits<double>::quiet_NaN();
};

struct RunReport {
  std::vector<std::string> observable_names;
  std::vector<double> mu_bar, rho_bar;
  EstimatorAccumulators acc;
  GridFunction bias_A, bias_F, bias_h;
  double theta = 0.0;
  double t_final = 0.0;
  long steps = 0;
  std::vector<CheckpointRecord> series;
  double mean_kinetic = std::numeric_limits<double>::quiet_NaN();
  double max_norm2 = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t seed = 0, stream = 0;
  double wall_seconds = 0.0;
  std::string error; // nonempty if the replica blew up

  bool failed() const { return !error.empty(); }
};

/// One trajectory coupled to a bias grid; implemented by the finite-
/// dimensional dynamics and by the spectral SPDE state.
class TrajectorySystem {
public:
  virtual ~TrajectorySystem() = default;
  virtual int colvar_dim() const = 0;
  virtual void colvar(std::span<double> z) const = 0;
  virtual double observe(const Observable& obs) const = 0;
  /// One time step using the *current* bias state (left-point rule).
  virtual void advance(const BiasGrid& bias, double dt, RngStream& rng, long step,
                       double time) = 0;
  virtual double kinetic() const { return std::numeric_limits<double>::quiet_NaN(); }
  virtual double norm2() const { return std::numeric_limits<double>::quiet_NaN(); }
};

/// Finite-dimensional trajectory for the Brownian / Langevin / extended
/// families, stepped by Euler-Maruyama or BAOAB.
class FiniteDimSystem : public TrajectorySystem {
public:
  FiniteDimSystem(DynamicsSpec dyn, StepperConfig::Scheme scheme,
                  std::span<const double> x0);

  int colvar_dim() const override { return dyn_.xi.m; }
  void colvar(std::span<double> z) const override { dyn_.xi_state(state_, z); }
  double observe(const Observable& obs) const override;
  void advance(const BiasGrid& bias, double dt, RngStream& rng, long step,
               double time) override;
  double kinetic() const override;

  const std::vector<double>& state() const { return state_; }
  const DynamicsSpec& dynamics() const { return dyn_; }

private:
  DynamicsSpec dyn_;
  StepperConfig::Scheme scheme_;
  std::vector<double> state_;
  std::vector<std::uint8_t> periodic_;
  std::vector<double> drift_buf_, force_buf_;
};

struct LoopSettings {
  double dt = 1e-3;
  long n_steps = 0;
  std::vector<long> checkpoint_steps;
  const GridFunction* reference_bias = nullptr;
  int histogram_bins = 50;
};

/// The coupled loop. Per step: (1) z = xi_S(X), w = F(z); (2) accumulate
/// S_w, S_wphi, S_phi and the histogram; (3) advance X with the pre-deposit
/// bias; (4) deposit w at z (adaptive mode only).
RunReport run_trajectory(TrajectorySystem& system, BiasGrid& grid, bool adaptive,
                         const LoopSettings& settings,
                         const std::vector<Observable>& observables,
                         std::span<const double> mu0_phi, RngStream& rng);

/// Everything needed to assemble and run one experiment.
struct EngineSettings {
  DynamicsSpec dyn;
  KernelSpec kernel;
  NormalizationSpec norm;
  int grid_size = 256;
  int refresh_stride = 1;
  bool track_mean_force = false;
  double dt = 1e-3;
  double t_final = 100.0;
  StepperConfig::Scheme scheme = StepperConfig::Scheme::EulerMaruyama;
  std::uint64_t seed = 0;
  std::vector<double> checkpoints;
  std::vector<Observable> observables;
  std::vector<double> x0;
  bool mu0_uniform = false;
  const GridFunction* reference_bias = nullptr;
  int histogram_bins = 50;
  long max_steps_cap = 100000000;

  long n_steps() const;
};

RunReport run_abp(const EngineSettings& s, std::uint64_t stream = 0);

/// Same accumulators with F frozen at N(exp(-a_fixed)) and no deposits.
RunReport run_fixed_bias(const EngineSettings& s, const GridFunction& a_fixed,
                         std::uint64_t stream = 0);

/// Mean-force estimate -(d_z h)/h at z (1-d colvar; the grid must track the
/// derivative accumulation).
double mean_force(const BiasGrid& grid, double z);

/// Replica ensemble statistics: t * Var(mu_bar_t(phi)) and mean bias against
/// optional oracle values, at each checkpoint. Failed replicas are reported
/// and skipped in the statistics.
struct VarianceTable {
  std::vector<double> times;
  std::vector<std::string> observable_names;
  std::vector<std::vector<double>> t_var;      // [checkpoint][observable]
  std::vector<std::vector<double>> mean_bias;  // vs oracle (NaN without one)
  std::vector<std::vector<double>> mean_value;
  int replicas = 0;
  std::vector<int> failed_replicas;
};

VarianceTable replica_variance(const EngineSettings& s, int replicas,
                               const std::vector<double>& oracle_values = {},
                               const GridFunction* a_fixed = nullptr);

/// Run a replica ensemble, returning all reports (stream = replica index).
std::vector<RunReport> run_replicas(const EngineSettings& s, int replicas,
                                    const GridFunction* a_fixed = nullptr);

} // namespace abp

#endif
