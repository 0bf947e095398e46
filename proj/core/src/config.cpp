#include "abp/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "abp/errors.hpp"

namespace abp {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t next = s.find(',', pos);
    std::string tok = trim(s.substr(pos, next == std::string::npos ? next : next - pos));
    if (!tok.empty()) out.push_back(tok);
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

class KeyMap {
public:
  void insert(const std::string& key, const std::string& value, int line) {
    if (entries_.count(key))
      throw ConfigError(key, "duplicate key (line " + std::to_string(line) + ")");
    entries_[key] = value;
  }

  bool has(const std::string& key) const { return entries_.count(key) > 0; }

  std::string take_string(const std::string& key, const std::string& fallback) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    std::string v = it->second;
    entries_.erase(it);
    return v;
  }

  double take_double(const std::string& key, double fallback) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    std::string v = it->second;
    entries_.erase(it);
    try {
      std::size_t used = 0;
      double x = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument("");
      return x;
    } catch (const std::exception&) {
      throw ConfigError(key, "expected a number, got '" + v + "'");
    }
  }

  long take_long(const std::string& key, long fallback) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    std::string v = it->second;
    entries_.erase(it);
    try {
      std::size_t used = 0;
      long x = std::stol(v, &used);
      if (used != v.size()) throw std::invalid_argument("");
      return x;
    } catch (const std::exception&) {
      throw ConfigError(key, "expected an integer, got '" + v + "'");
    }
  }

  std::uint64_t take_u64(const std::string& key, std::uint64_t fallback) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    std::string v = it->second;
    entries_.erase(it);
    try {
      std::size_t used = 0;
      unsigned long long x = std::stoull(v, &used);
      if (used != v.size()) throw std::invalid_argument("");
      return static_cast<std::uint64_t>(x);
    } catch (const std::exception&) {
      throw ConfigError(key, "expected a nonnegative integer, got '" + v + "'");
    }
  }

  bool take_bool(const std::string& key, bool fallback) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    std::string v = it->second;
    entries_.erase(it);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(key, "expected a boolean, got '" + v + "'");
  }

  std::vector<double> take_doubles(const std::string& key, std::vector<double> fallback) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    std::string v = it->second;
    entries_.erase(it);
    std::vector<double> out;
    for (const std::string& tok : split_list(v)) {
      try {
        out.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw ConfigError(key, "expected numbers, got '" + tok + "'");
      }
    }
    return out;
  }

  std::vector<std::string> take_strings(const std::string& key,
                                        std::vector<std::string> fallback) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    std::string v = it->second;
    entries_.erase(it);
    return split_list(v);
  }

  void finish() const {
    if (!entries_.empty()) throw ConfigError(entries_.begin()->first, "unknown key");
  }

  bool section_present(const std::string& prefix) const {
    auto it = entries_.lower_bound(prefix);
    return it != entries_.end() && it->first.rfind(prefix, 0) == 0;
  }

private:
  std::map<std::string, std::string> entries_;
};

KeyMap tokenize(const std::string& text) {
  KeyMap map;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t cut = line.find_first_of("#;");
    if (cut != std::string::npos) line = line.substr(0, cut);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("", "malformed section header on line " + std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("", "expected key = value on line " + std::to_string(lineno));
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("", "empty key on line " + std::to_string(lineno));
    if (!section.empty() && key.find('.') == std::string::npos) key = section + "." + key;
    map.insert(key, value, lineno);
  }
  return map;
}

} // namespace

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  KeyMap map = tokenize(text);
  ExperimentConfig c;

  c.has_spde = map.section_present("spde.");

  c.dynamics = map.take_string("model.dynamics", c.dynamics);
  c.potential = map.take_string("model.potential", c.potential);
  c.coefficients = map.take_doubles("model.coefficients", c.coefficients);
  c.beta = map.take_double("model.beta", c.beta);
  c.dimension = static_cast<int>(map.take_long("model.dimension", c.dimension));
  c.gamma = map.take_double("model.gamma", c.gamma);
  c.model_epsilon = map.take_double("model.epsilon", c.model_epsilon);
  c.xi_m = static_cast<int>(map.take_long("model.xi_m", c.xi_m));
  c.x0 = map.take_doubles("model.x0", c.x0);
  c.mu0 = map.take_string("model.mu0", c.mu0);

  c.kernel_family = map.take_string("kernel.family", c.kernel_family);
  c.kernel_epsilon = map.take_double("kernel.epsilon", c.kernel_epsilon);
  c.kernel_alpha = map.take_double("kernel.alpha", c.kernel_alpha);
  c.kernel_wraps = static_cast<int>(map.take_long("kernel.wraps", c.kernel_wraps));

  c.norm_kind = map.take_string("norm.kind", c.norm_kind);
  c.norm_k = static_cast<int>(map.take_long("norm.k", c.norm_k));

  c.grid_size = static_cast<int>(map.take_long("grid.size", c.grid_size));
  c.refresh_stride = static_cast<int>(map.take_long("grid.refresh_stride", c.refresh_stride));
  c.track_mean_force = map.take_bool("grid.track_mean_force", c.track_mean_force);

  c.dt = map.take_double("sim.dt", c.dt);
  c.t_final = map.take_double("sim.t_final", c.t_final);
  c.scheme = map.take_string("sim.scheme", c.scheme);
  c.seed = map.take_u64("sim.seed", c.seed);
  c.replicas = static_cast<int>(map.take_long("sim.replicas", c.replicas));
  c.checkpoints = map.take_doubles("sim.checkpoints", c.checkpoints);
  c.step_cap = map.take_long("sim.step_cap", c.step_cap);

  c.observable_names = map.take_strings("observables.names", c.observable_names);

  c.spde_modes = static_cast<int>(map.take_long("spde.modes", c.spde_modes));
  c.spde_grid = static_cast<int>(map.take_long("spde.grid", c.spde_grid));
  c.spde_nonlinearity = map.take_string("spde.nonlinearity", c.spde_nonlinearity);
  c.spde_c = map.take_double("spde.c", c.spde_c);
  c.spde_allow_allen_cahn = map.take_bool("spde.allow_allen_cahn", c.spde_allow_allen_cahn);

  c.output_dir = map.take_string("output.dir", c.output_dir);
  c.output_prefix = map.take_string("output.prefix", c.output_prefix);

  map.finish();

  // Eager validation so config errors surface at parse time with key paths.
  c.make_kernel();
  c.make_norm();
  c.make_observables();
  if (c.has_spde)
    c.make_spde_settings();
  else
    c.make_dynamics();
  if (!(c.dt > 0)) throw ConfigError("sim.dt", "dt must be positive");
  if (!(c.t_final > 0)) throw ConfigError("sim.t_final", "t_final must be positive");
  if (c.replicas < 1) throw ConfigError("sim.replicas", "replicas must be >= 1");
  if (std::llround(c.t_final / c.dt) > c.step_cap)
    throw ConfigError("sim.t_final", "step count exceeds sim.step_cap");
  if (c.grid_size < 4) throw ConfigError("grid.size", "grid size must be >= 4");
  if (c.refresh_stride < 1)
    throw ConfigError("grid.refresh_stride", "refresh stride must be >= 1");
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

DynamicsSpec ExperimentConfig::make_dynamics() const {
  Potential pot;
  if (potential == "cosine") {
    pot = Potential::cosine1(coefficients, beta);
  } else if (potential == "coupled2d") {
    if (coefficients.size() != 3)
      throw ConfigError("model.coefficients",
                        "coupled2d needs exactly 3 coefficients (a, b, c)");
    pot = Potential::cosine2(coefficients[0], coefficients[1], coefficients[2], beta);
  } else if (potential == "quadratic") {
    if (coefficients.size() != 2)
      throw ConfigError("model.coefficients", "quadratic needs 2 coefficients (a, c)");
    pot = Potential::quadratic_cosine(dimension, coefficients[0], coefficients[1], beta);
  } else if (potential == "tabulated") {
    pot = Potential::tabulated(coefficients, beta);
  } else {
    throw ConfigError("model.potential", "unknown preset '" + potential + "'");
  }

  DynamicsSpec dyn;
  dyn.potential = std::move(pot);
  if (dynamics == "brownian") {
    dyn.family = DynamicsSpec::Family::Brownian;
  } else if (dynamics == "langevin") {
    dyn.family = DynamicsSpec::Family::Langevin;
    if (!(gamma > 0)) throw ConfigError("model.gamma", "gamma must be positive");
    dyn.gamma = gamma;
  } else if (dynamics == "extended") {
    dyn.family = DynamicsSpec::Family::Extended;
    if (!(model_epsilon > 0)) throw ConfigError("model.epsilon", "epsilon must be positive");
    dyn.eps_ext = model_epsilon;
    if (!dyn.potential.periodic_domain)
      throw ConfigError("model.dynamics", "extended dynamics needs a torus potential");
  } else {
    throw ConfigError("model.dynamics", "unknown family '" + dynamics + "'");
  }
  if (xi_m < 1 || xi_m > dyn.potential.dim)
    throw ConfigError("model.xi_m", "xi_m must lie in [1, d]");
  if (xi_m > 2) throw ConfigError("model.xi_m", "bias grids support m <= 2");
  dyn.xi.m = xi_m;
  if (mu0 != "atom" && mu0 != "uniform")
    throw ConfigError("model.mu0", "mu0 must be atom or uniform");
  return dyn;
}

KernelSpec ExperimentConfig::make_kernel() const {
  int m = has_spde ? 1 : xi_m;
  if (kernel_family == "gaussian")
    return KernelSpec::wrapped_gaussian(m, kernel_epsilon, kernel_alpha, kernel_wraps);
  if (kernel_family == "constant") return KernelSpec::constant(m);
  throw ConfigError("kernel.family", "unknown family '" + kernel_family +
                                         "' (expected gaussian or constant)");
}

NormalizationSpec ExperimentConfig::make_norm() const {
  NormalizationSpec n = NormalizationSpec::parse(norm_kind);
  if (norm_k < 0) throw ConfigError("norm.k", "smoothing index must be >= 0");
  if (norm_k > 0) {
    if (n.kind != NormalizationSpec::Kind::Min && n.kind != NormalizationSpec::Kind::Max)
      throw ConfigError("norm.k", "smoothing index applies to min/max only");
    n.smoothing_index = norm_k;
  }
  return n;
}

std::vector<Observable> ExperimentConfig::make_observables() const {
  std::vector<Observable> out;
  for (const auto& name : observable_names) out.push_back(Observable::parse(name));
  if (out.empty()) throw ConfigError("observables.names", "need at least one observable");
  return out;
}

EngineSettings ExperimentConfig::make_engine_settings() const {
  EngineSettings s;
  s.dyn = make_dynamics();
  s.kernel = make_kernel();
  s.norm = make_norm();
  s.grid_size = grid_size;
  s.refresh_stride = refresh_stride;
  s.track_mean_force = track_mean_force;
  s.dt = dt;
  s.t_final = t_final;
  if (scheme == "auto") {
    s.scheme = (s.dyn.family == DynamicsSpec::Family::Langevin)
                   ? StepperConfig::Scheme::BAOAB
                   : StepperConfig::Scheme::EulerMaruyama;
  } else {
    s.scheme = StepperConfig::parse_scheme(scheme);
  }
  s.seed = seed;
  s.checkpoints = checkpoints;
  s.observables = make_observables();
  s.x0 = x0.empty() ? std::vector<double>(s.dyn.potential.dim, 0.5) : x0;
  if (static_cast<int>(s.x0.size()) != s.dyn.potential.dim)
    throw ConfigError("model.x0", "x0 must have the configuration dimension");
  s.mu0_uniform = (mu0 == "uniform");
  s.max_steps_cap = step_cap;
  return s;
}

SpdeSettings ExperimentConfig::make_spde_settings() const {
  SpdeSettings s;
  if (spde_nonlinearity == "cosine") {
    s.model = SpdeModel::cosine(spde_c);
  } else if (spde_nonlinearity == "allen-cahn") {
    s.model = SpdeModel::allen_cahn(spde_allow_allen_cahn);
  } else {
    throw ConfigError("spde.nonlinearity",
                      "unknown nonlinearity '" + spde_nonlinearity + "'");
  }
  s.n_modes = spde_modes;
  s.grid_points = spde_grid;
  SpectralState probe(spde_modes, spde_grid); // validates modes/grid
  s.kernel = make_kernel();
  if (norm_kind != "l1")
    throw ConfigError("norm.kind", "the spde system uses the l1 normalization");
  s.grid_size = grid_size;
  s.refresh_stride = refresh_stride;
  s.dt = dt;
  s.t_final = t_final;
  s.seed = seed;
  s.checkpoints = checkpoints;
  s.observables = make_observables();
  s.max_steps_cap = step_cap;
  return s;
}

namespace {
std::string fmt_doubles(const std::vector<double>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ",";
    os << v[i];
  }
  return os.str();
}
std::string fmt_strings(const std::vector<std::string>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += v[i];
  }
  return s;
}
} // namespace

std::vector<std::pair<std::string, std::string>> ExperimentConfig::echo() const {
  std::vector<std::pair<std::string, std::string>> e;
  e.emplace_back("model.dynamics", dynamics);
  e.emplace_back("model.potential", potential);
  e.emplace_back("model.coefficients", fmt_doubles(coefficients));
  e.emplace_back("model.beta", std::to_string(beta));
  e.emplace_back("model.dimension", std::to_string(dimension));
  e.emplace_back("model.gamma", std::to_string(gamma));
  e.emplace_back("model.epsilon", std::to_string(model_epsilon));
  e.emplace_back("model.xi_m", std::to_string(xi_m));
  e.emplace_back("model.x0", fmt_doubles(x0));
  e.emplace_back("model.mu0", mu0);
  e.emplace_back("kernel.family", kernel_family);
  e.emplace_back("kernel.epsilon", std::to_string(kernel_epsilon));
  e.emplace_back("kernel.alpha", std::to_string(kernel_alpha));
  e.emplace_back("kernel.wraps", std::to_string(kernel_wraps));
  e.emplace_back("norm.kind", norm_kind);
  e.emplace_back("norm.k", std::to_string(norm_k));
  e.emplace_back("grid.size", std::to_string(grid_size));
  e.emplace_back("grid.refresh_stride", std::to_string(refresh_stride));
  e.emplace_back("grid.track_mean_force", track_mean_force ? "true" : "false");
  e.emplace_back("sim.dt", std::to_string(dt));
  e.emplace_back("sim.t_final", std::to_string(t_final));
  e.emplace_back("sim.scheme", scheme);
  e.emplace_back("sim.seed", std::to_string(seed));
  e.emplace_back("sim.replicas", std::to_string(replicas));
  e.emplace_back("sim.checkpoints", fmt_doubles(checkpoints));
  e.emplace_back("sim.step_cap", std::to_string(step_cap));
  e.emplace_back("observables.names", fmt_strings(observable_names));
  if (has_spde) {
    e.emplace_back("spde.modes", std::to_string(spde_modes));
    e.emplace_back("spde.grid", std::to_string(spde_grid));
    e.emplace_back("spde.nonlinearity", spde_nonlinearity);
    e.emplace_back("spde.c", std::to_string(spde_c));
    e.emplace_back("spde.allow_allen_cahn", spde_allow_allen_cahn ? "true" : "false");
  }
  e.emplace_back("output.dir", output_dir);
  e.emplace_back("output.prefix", output_prefix);
  return e;
}

} // namespace abp
