#include "abp/engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numbers>
#include <thread>

#include "abp/errors.hpp"
#include "abp/geometry.hpp"

namespace abp {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double Observable::eval_config(std::span<const double> x) const {
  switch (kind) {
    case Kind::One:
      return 1.0;
    case Kind::CosProduct: {
      double v = 1.0;
      for (std::size_t i = 0; i < freqs.size(); ++i) {
        if (freqs[i] == 0) continue;
        if (i >= x.size()) throw DomainError("observable " + name + ": state too small");
        v *= std::cos(kTwoPi * freqs[i] * x[i]);
      }
      return v;
    }
    case Kind::Sin:
      return std::sin(kTwoPi * k * x[0]);
    case Kind::Bump: {
      double c = std::cos(kTwoPi * (x[0] - center)) - 1.0;
      return std::exp(c / (2.0 * std::numbers::pi * std::numbers::pi * width * width));
    }
    default:
      throw DomainError("observable " + name + ": not defined on finite-dimensional states");
  }
}

Observable Observable::parse(const std::string& text) {
  Observable o;
  o.name = text;
  if (text == "one") {
    o.kind = Kind::One;
    return o;
  }
  if (text == "cos1") {
    o.kind = Kind::CosProduct;
    o.freqs = {1};
    return o;
  }
  if (text == "cos2") {
    o.kind = Kind::CosProduct;
    o.freqs = {0, 1};
    return o;
  }
  if (text == "cos1cos2") {
    o.kind = Kind::CosProduct;
    o.freqs = {1, 1};
    return o;
  }
  if (text == "sin1") {
    o.kind = Kind::Sin;
    o.k = 1;
    return o;
  }
  if (text.rfind("bump:", 0) == 0) {
    std::size_t sep = text.find(':', 5);
    if (sep == std::string::npos)
      throw ConfigError("observables", "bump needs bump:<center>:<width>");
    try {
      o.center = std::stod(text.substr(5, sep - 5));
      o.width = std::stod(text.substr(sep + 1));
    } catch (const std::invalid_argument&) {
      throw ConfigError("observables", "cannot parse bump parameters in '" + text + "'");
    }
    if (!(o.width > 0)) throw ConfigError("observables", "bump width must be positive");
    o.kind = Kind::Bump;
    return o;
  }
  if (text == "ubar") {
    o.kind = Kind::SpdeUbar;
    return o;
  }
  if (text == "ubarsq") {
    o.kind = Kind::SpdeUbarSq;
    return o;
  }
  if (text == "xi") {
    o.kind = Kind::SpdeXi;
    return o;
  }
  if (text.size() >= 2 && text[0] == 'u' && std::isdigit(static_cast<unsigned char>(text[1]))) {
    bool sq = text.size() > 2 && text.substr(text.size() - 2) == "sq";
    std::string num = sq ? text.substr(1, text.size() - 3) : text.substr(1);
    try {
      o.k = std::stoi(num);
    } catch (const std::invalid_argument&) {
      throw ConfigError("observables", "cannot parse mode index in '" + text + "'");
    }
    if (o.k < 1) throw ConfigError("observables", "mode index must be >= 1");
    o.kind = sq ? Kind::SpdeModeSq : Kind::SpdeMode;
    return o;
  }
  throw ConfigError("observables", "unknown observable '" + text + "'");
}

void Histogram::init(int colvar_dim, int b) {
  bins = b;
  mass.assign(colvar_dim, std::vector<double>(b, 0.0));
  total = 0.0;
}

void Histogram::add(std::span<const double> z, double dt) {
  for (std::size_t a = 0; a < mass.size(); ++a) {
    int b = static_cast<int>(wrap1(z[a]) * bins);
    if (b >= bins) b = bins - 1;
    mass[a][b] += dt;
  }
  total += dt;
}

double Histogram::max_min_ratio(int axis) const {
  const auto& row = mass.at(axis);
  double lo = *std::min_element(row.begin(), row.end());
  double hi = *std::max_element(row.begin(), row.end());
  return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
}

FiniteDimSystem::FiniteDimSystem(DynamicsSpec dyn, StepperConfig::Scheme scheme,
                                 std::span<const double> x0)
    : dyn_(std::move(dyn)), scheme_(scheme) {
  if (scheme_ == StepperConfig::Scheme::BAOAB &&
      dyn_.family != DynamicsSpec::Family::Langevin)
    throw ConfigError("sim.scheme", "baoab applies to the langevin family only");
  if (scheme_ == StepperConfig::Scheme::EulerMaruyama &&
      dyn_.family == DynamicsSpec::Family::Langevin)
    throw ConfigError("sim.scheme", "the langevin family is stepped with baoab");
  state_ = dyn_.initial_state(x0);
  periodic_ = dyn_.periodic_flags();
  drift_buf_.resize(state_.size());
  force_buf_.resize(dyn_.config_dim());
}

double FiniteDimSystem::observe(const Observable& obs) const {
  return obs.eval_config(std::span<const double>(state_.data(), dyn_.config_dim()));
}

double FiniteDimSystem::kinetic() const {
  if (dyn_.family != DynamicsSpec::Family::Langevin)
    return std::numeric_limits<double>::quiet_NaN();
  int d = dyn_.config_dim();
  double s = 0.0;
  for (int i = 0; i < d; ++i) s += state_[d + i] * state_[d + i];
  return s / d;
}

void FiniteDimSystem::advance(const BiasGrid& bias, double dt, RngStream& rng,
                              long step, double time) {
  if (scheme_ == StepperConfig::Scheme::EulerMaruyama) {
    dyn_.drift(state_, bias, drift_buf_);
    em_step(state_, drift_buf_, periodic_, dt, rng, step, time);
  } else {
    int d = dyn_.config_dim();
    std::span<double> q(state_.data(), d), p(state_.data() + d, d);
    auto force = [&](std::span<const double> qq, std::span<double> f) {
      dyn_.config_force(qq, bias, f);
    };
    baoab_step(q, p, force, std::span<const std::uint8_t>(periodic_.data(), d),
               dyn_.gamma, dt, rng, force_buf_, step, time);
  }
}

RunReport run_trajectory(TrajectorySystem& system, BiasGrid& grid, bool adaptive,
                         const LoopSettings& settings,
                         const std::vector<Observable>& observables,
                         std::span<const double> mu0_phi, RngStream& rng) {
  auto t0 = std::chrono::steady_clock::now();
  const double dt = settings.dt;
  const int m = system.colvar_dim();
  const std::size_t n_obs = observables.size();
  if (mu0_phi.size() != n_obs) throw DomainError("run_trajectory: mu0_phi size mismatch");
  if (grid.colvar_dim() != m) throw DomainError("run_trajectory: colvar dimension mismatch");

  RunReport report;
  report.seed = rng.seed();
  report.stream = rng.stream_id();
  for (const auto& o : observables) report.observable_names.push_back(o.name);

  EstimatorAccumulators& acc = report.acc;
  acc.S_wphi.assign(n_obs, 0.0);
  acc.S_phi.assign(n_obs, 0.0);
  acc.mu0_phi.assign(mu0_phi.begin(), mu0_phi.end());
  acc.hist.init(m, settings.histogram_bins);

  double kinetic_sum = 0.0;
  bool track_kinetic = false;
  double max_norm2 = -1.0;

  std::vector<double> z(m), phi(n_obs);
  auto checkpoint_it = settings.checkpoint_steps.begin();

  for (long step = 0; step < settings.n_steps; ++step) {
    double time = step * dt;

    system.colvar(z);
    double w = grid.weight(z);

    acc.S_w += w * dt;
    for (std::size_t i = 0; i < n_obs; ++i) {
      double v = system.observe(observables[i]);
      acc.S_wphi[i] += w * v * dt;
      acc.S_phi[i] += v * dt;
    }
    acc.hist.add(z, dt);
    acc.elapsed += dt;

    double kin = system.kinetic();
    if (std::isfinite(kin)) {
      kinetic_sum += kin * dt;
      track_kinetic = true;
    }
    double n2 = system.norm2();
    if (std::isfinite(n2)) max_norm2 = std::max(max_norm2, n2);

    // Move with the pre-deposit bias, then deposit at the pre-move colvar.
    system.advance(grid, dt, rng, step, time);
    if (adaptive) grid.deposit(z, w, dt);

    if (checkpoint_it != settings.checkpoint_steps.end() && step + 1 == *checkpoint_it) {
      ++checkpoint_it;
      CheckpointRecord rec;
      rec.t = (step + 1) * dt;
      rec.theta = acc.S_w;
      rec.mu_bar.resize(n_obs);
      rec.rho_bar.resize(n_obs);
      for (std::size_t i = 0; i < n_obs; ++i) {
        rec.mu_bar[i] = acc.mu_bar(i);
        rec.rho_bar[i] = acc.rho_bar(i);
      }
      if (settings.reference_bias)
        rec.bias_sup_err = sup_distance(grid.A(), *settings.reference_bias);
      report.series.push_back(std::move(rec));
    }
  }

  report.steps = settings.n_steps;
  report.t_final = settings.n_steps * dt;
  report.theta = acc.S_w;
  report.mu_bar.resize(n_obs);
  report.rho_bar.resize(n_obs);
  for (std::size_t i = 0; i < n_obs; ++i) {
    report.mu_bar[i] = acc.mu_bar(i);
    report.rho_bar[i] = acc.rho_bar(i);
  }
  report.bias_A = grid.A();
  report.bias_F = grid.F();
  report.bias_h = grid.h();
  if (track_kinetic && acc.elapsed > 0) report.mean_kinetic = kinetic_sum / acc.elapsed;
  if (max_norm2 >= 0.0) report.max_norm2 = max_norm2;
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

long EngineSettings::n_steps() const {
  if (!(dt > 0)) throw ConfigError("sim.dt", "dt must be positive");
  if (!(t_final > 0)) throw ConfigError("sim.t_final", "t_final must be positive");
  long n = std::llround(t_final / dt);
  if (n < 1) n = 1;
  if (n > max_steps_cap)
    throw ConfigError("sim.t_final", "step count exceeds the configured cap");
  return n;
}

namespace {

std::vector<long> checkpoint_steps(const EngineSettings& s) {
  std::vector<long> steps;
  for (double t : s.checkpoints) {
    long k = std::llround(t / s.dt);
    if (k >= 1 && k <= s.n_steps()) steps.push_back(k);
  }
  std::sort(steps.begin(), steps.end());
  steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
  return steps;
}

// Prior averages mu_0(phi) from the same atom/uniform descriptor that seeds
// the accumulation grid.
std::vector<double> prior_values(const EngineSettings& s) {
  std::vector<double> out;
  out.reserve(s.observables.size());
  if (!s.mu0_uniform) {
    for (const auto& o : s.observables) out.push_back(o.eval_config(s.x0));
    return out;
  }
  if (!s.dyn.potential.periodic_domain || s.dyn.potential.dim > 2)
    throw ConfigError("model", "uniform initial measure needs a torus with d <= 2");
  int d = s.dyn.potential.dim;
  const int R = 512;
  for (const auto& o : s.observables) {
    double acc = 0.0;
    if (d == 1) {
      double x[1];
      for (int i = 0; i < R; ++i) {
        x[0] = static_cast<double>(i) / R;
        acc += o.eval_config(std::span<const double>(x, 1));
      }
      acc /= R;
    } else {
      double x[2];
      for (int i = 0; i < R; ++i)
        for (int j = 0; j < R; ++j) {
          x[0] = static_cast<double>(i) / R;
          x[1] = static_cast<double>(j) / R;
          acc += o.eval_config(std::span<const double>(x, 2));
        }
      acc /= static_cast<double>(R) * R;
    }
    out.push_back(acc);
  }
  return out;
}

InitialMeasure initial_measure(const EngineSettings& s) {
  if (s.mu0_uniform) return InitialMeasure::uniform_measure();
  FiniteDimSystem probe(s.dyn, s.scheme, s.x0);
  std::vector<double> z(s.dyn.xi.m);
  probe.colvar(z);
  return InitialMeasure::single_atom(z);
}

RunReport run_impl(const EngineSettings& s, const GridFunction* a_fixed,
                   std::uint64_t stream) {
  if (s.x0.empty() || static_cast<int>(s.x0.size()) != s.dyn.potential.dim)
    throw ConfigError("model.x0", "x0 must have the configuration dimension");
  LoopSettings loop;
  loop.dt = s.dt;
  loop.n_steps = s.n_steps();
  loop.checkpoint_steps = checkpoint_steps(s);
  loop.reference_bias = s.reference_bias;
  loop.histogram_bins = s.histogram_bins;

  FiniteDimSystem system(s.dyn, s.scheme, s.x0);
  RngStream rng(s.seed, stream);
  std::vector<double> mu0_phi = prior_values(s);

  if (a_fixed) {
    BiasGrid grid = BiasGrid::frozen(*a_fixed, s.norm);
    return run_trajectory(system, grid, /*adaptive=*/false, loop, s.observables,
                          mu0_phi, rng);
  }
  BiasGrid grid(s.kernel, s.norm, initial_measure(s), s.grid_size, s.refresh_stride,
                s.track_mean_force);
  return run_trajectory(system, grid, /*adaptive=*/true, loop, s.observables,
                        mu0_phi, rng);
}

} // namespace

RunReport run_abp(const EngineSettings& s, std::uint64_t stream) {
  return run_impl(s, nullptr, stream);
}

RunReport run_fixed_bias(const EngineSettings& s, const GridFunction& a_fixed,
                         std::uint64_t stream) {
  if (a_fixed.m != s.dyn.xi.m)
    throw ConfigError("model", "fixed bias dimension mismatch");
  return run_impl(s, &a_fixed, stream);
}

double mean_force(const BiasGrid& grid, double z) {
  double zz[1] = {z};
  return grid.mean_force_at(std::span<const double>(zz, 1));
}

std::vector<RunReport> run_replicas(const EngineSettings& s, int replicas,
                                    const GridFunction* a_fixed) {
  std::vector<RunReport> reports(replicas);
  unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                     static_cast<unsigned>(replicas)));
  std::atomic<int> next{0};
  auto body = [&]() {
    for (;;) {
      int r = next.fetch_add(1);
      if (r >= replicas) return;
      try {
        reports[r] = run_impl(s, a_fixed, static_cast<std::uint64_t>(r));
      } catch (const std::exception& e) {
        reports[r].error = e.what();
        reports[r].stream = static_cast<std::uint64_t>(r);
      }
    }
  };
  if (workers <= 1) {
    body();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(body);
    for (auto& t : pool) t.join();
  }
  return reports;
}

VarianceTable replica_variance(const EngineSettings& s, int replicas,
                               const std::vector<double>& oracle_values,
                               const GridFunction* a_fixed) {
  if (replicas < 8) throw ConfigError("sim.replicas", "replica variance needs >= 8 replicas");
  std::vector<RunReport> reports = run_replicas(s, replicas, a_fixed);

  VarianceTable table;
  table.replicas = replicas;
  for (const auto& o : s.observables) table.observable_names.push_back(o.name);
  for (int r = 0; r < replicas; ++r)
    if (reports[r].failed()) table.failed_replicas.push_back(r);

  std::vector<const RunReport*> alive;
  for (const auto& rep : reports)
    if (!rep.failed()) alive.push_back(&rep);
  if (alive.size() < 2) throw DomainError("replica_variance: fewer than two surviving replicas");

  std::size_t n_ck = alive.front()->series.size();
  std::size_t n_obs = s.observables.size();
  for (std::size_t c = 0; c < n_ck; ++c) {
    double t = alive.front()->series[c].t;
    table.times.push_back(t);
    std::vector<double> tv(n_obs), mb(n_obs), mv(n_obs);
    for (std::size_t i = 0; i < n_obs; ++i) {
      double mean = 0.0;
      for (const auto* rep : alive) mean += rep->series[c].mu_bar[i];
      mean /= alive.size();
      double var = 0.0;
      for (const auto* rep : alive) {
        double d = rep->series[c].mu_bar[i] - mean;
        var += d * d;
      }
      var /= (alive.size() - 1);
      tv[i] = t * var;
      mv[i] = mean;
      mb[i] = (i < oracle_values.size()) ? mean - oracle_values[i]
                                         : std::numeric_limits<double>::quiet_NaN();
    }
    table.t_var.push_back(std::move(tv));
    table.mean_bias.push_back(std::move(mb));
    table.mean_value.push_back(std::move(mv));
  }
  return table;
}

} // namespace abp
