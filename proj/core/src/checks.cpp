#include "abp/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>

#include "abp/bias.hpp"
#include "abp/engine.hpp"
#include "abp/errors.hpp"
#include "abp/geometry.hpp"
#include "abp/oracle.hpp"
#include "abp/rng.hpp"
#include "abp/spde.hpp"

namespace abp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::uint64_t kSuiteSeed = 1234571;

// Modified Bessel function of the first kind by series summation.
double bessel_i(int nu, double x) {
  double term = std::pow(0.5 * x, nu);
  for (int k = 1; k <= nu; ++k) term /= k;
  double sum = term;
  for (int k = 1; k < 60; ++k) {
    term *= 0.25 * x * x / (static_cast<double>(k) * (k + nu));
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

struct Stats {
  double mean = 0.0, var = 0.0, stderr_mean = 0.0;
  int n = 0;
};

Stats sample_stats(const std::vector<double>& xs) {
  Stats s;
  s.n = static_cast<int>(xs.size());
  for (double x : xs) s.mean += x;
  s.mean /= s.n;
  for (double x : xs) s.var += (x - s.mean) * (x - s.mean);
  s.var = (s.n > 1) ? s.var / (s.n - 1) : 0.0;
  s.stderr_mean = std::sqrt(s.var / s.n);
  return s;
}

// Wilson-Hilferty chi-square quantile, for variance confidence intervals.
double chi2_quantile(double p, int df) {
  double z = (p > 0.5) ? 1.959963984540054 : -1.959963984540054;
  double a = 2.0 / (9.0 * df);
  double c = 1.0 - a + z * std::sqrt(a);
  return df * c * c * c;
}

struct VarCI {
  double lo = 0.0, hi = 0.0;
};

VarCI variance_ci(double sample_var, int n) {
  int df = n - 1;
  return {df * sample_var / chi2_quantile(0.975, df),
          df * sample_var / chi2_quantile(0.025, df)};
}

// Shared presets -----------------------------------------------------------

EngineSettings t2_settings() {
  EngineSettings s;
  s.dyn.family = DynamicsSpec::Family::Brownian;
  s.dyn.potential = Potential::cosine2(2.0, 0.0, 0.5);
  s.dyn.xi.m = 1;
  s.kernel = KernelSpec::wrapped_gaussian(1, 0.05, 0.9);
  s.norm = NormalizationSpec::l1();
  s.grid_size = 256;
  s.dt = 1e-3;
  s.t_final = 2000.0;
  s.seed = kSuiteSeed;
  s.checkpoints = {200.0, 500.0, 2000.0};
  s.observables = {Observable::parse("cos1")};
  s.x0 = {0.5, 0.5};
  return s;
}

EngineSettings well1d_settings() {
  EngineSettings s;
  s.dyn.family = DynamicsSpec::Family::Brownian;
  s.dyn.potential = Potential::cosine1({2.0});
  s.dyn.xi.m = 1;
  s.kernel = KernelSpec::wrapped_gaussian(1, 0.05, 0.9);
  s.norm = NormalizationSpec::l1();
  s.grid_size = 256;
  s.dt = 1e-3;
  s.t_final = 2000.0;
  s.seed = kSuiteSeed + 1;
  s.observables = {Observable::parse("cos1")};
  s.x0 = {0.5};
  return s;
}

// Lazily computed shared state across criteria.
struct SuiteContext {
  // T^2 benchmark ensemble (criteria 2-5)
  bool t2_ready = false;
  EngineSettings t2;
  GridFunction t2_a_inf;
  double t2_mu_star = 0.0;
  double t2_mu_star_biased = 0.0;
  std::vector<RunReport> t2_reports;

  void ensure_t2() {
    if (t2_ready) return;
    t2 = t2_settings();
    t2_mu_star = equilibrium_average(t2.dyn.potential, t2.observables[0], 1024);
    t2_a_inf = smoothed_free_energy(t2.dyn.potential, t2.kernel, t2.grid_size, 2048);
    t2_mu_star_biased =
        biased_average(t2.dyn.potential, t2_a_inf, t2.observables[0], 1024).value;
    t2.reference_bias = &t2_a_inf;
    t2_reports = run_replicas(t2, 16);
    for (const auto& r : t2_reports)
      if (r.failed()) throw DomainError("t2 ensemble replica failed: " + r.error);
    t2_ready = true;
  }
};

using Criterion = std::function<CriterionResult(SuiteContext&)>;

CriterionResult make_result(int id, const std::string& name, bool passed,
                            const std::string& details) {
  return {id, name, passed, details};
}

// 1. Oracle self-consistency ------------------------------------------------

CriterionResult criterion_oracle(SuiteContext&) {
  Potential v = Potential::cosine1({1.0});
  const int G = 256, R = 4096;
  GridFunction a_star = free_energy_profile(v, G, R);
  double log_i0 = std::log(bessel_i(0, 1.0));
  double sup_err = 0.0;
  for (int g = 0; g < G; ++g) {
    double expected = std::cos(kTwoPi * a_star.node(g)) + log_i0;
    sup_err = std::max(sup_err, std::abs(a_star.v[g] - expected));
  }
  GridFunction dens = exp_of(a_star, -1.0);
  double norm_err = std::abs(dens.mean() - 1.0);

  // Radon-Nikodym identity against 20 random smooth test functions.
  GridFunction a_fine = free_energy_profile(v, R, R);
  RngStream rng(kSuiteSeed, 901);
  double worst_identity = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    double c1 = 2.0 * rng.uniform() - 1.0, s1 = 2.0 * rng.uniform() - 1.0;
    double c2 = 2.0 * rng.uniform() - 1.0, c3 = 2.0 * rng.uniform() - 1.0;
    auto phi = [&](double z) {
      return c1 * std::cos(kTwoPi * z) + s1 * std::sin(kTwoPi * z) +
             c2 * std::cos(2 * kTwoPi * z) + c3 * std::sin(3 * kTwoPi * z);
    };
    std::vector<double> lhs_terms(R), num_terms(R), den_terms(R);
    for (int j = 0; j < R; ++j) {
      double z = static_cast<double>(j) / R;
      lhs_terms[j] = phi(z) * std::exp(-a_fine.v[j]);
      double w = std::exp(-v.value(std::span<const double>(&z, 1)));
      num_terms[j] = phi(z) * w;
      den_terms[j] = w;
    }
    double lhs = pairwise_mean(lhs_terms);
    double rhs = pairwise_mean(num_terms) / pairwise_mean(den_terms);
    worst_identity = std::max(worst_identity, std::abs(lhs - rhs));
  }

  bool ok = sup_err <= 1e-6 && norm_err <= 1e-10 && worst_identity <= 1e-9;
  return make_result(1, "oracle self-consistency",
                     ok,
                     "sup|A*-analytic|=" + fmt(sup_err) + " (<=1e-6), |int e^-A* - 1|=" +
                         fmt(norm_err) + " (<=1e-10), RN identity err=" +
                         fmt(worst_identity) + " (<=1e-9)");
}

// 2. Consistency on the T^2 benchmark ---------------------------------------

CriterionResult criterion_consistency(SuiteContext& ctx) {
  ctx.ensure_t2();
  std::vector<double> finals;
  for (const auto& r : ctx.t2_reports) finals.push_back(r.mu_bar[0]);
  Stats st = sample_stats(finals);
  double err = std::abs(st.mean - ctx.t2_mu_star);
  double rmse = 0.0;
  for (double x : finals) rmse += (x - ctx.t2_mu_star) * (x - ctx.t2_mu_star);
  rmse = std::sqrt(rmse / finals.size());
  bool ok = err <= 3.0 * st.stderr_mean && rmse <= 0.05;
  return make_result(2, "weighted-estimator consistency (T^2)", ok,
                     "|mean-mu*|=" + fmt(err) + " vs 3*stderr=" + fmt(3 * st.stderr_mean) +
                         ", RMSE=" + fmt(rmse) + " (<=0.05), mu*=" + fmt(ctx.t2_mu_star));
}

// 3. Mean-square rate trend ---------------------------------------------------

CriterionResult criterion_mse_trend(SuiteContext& ctx) {
  ctx.ensure_t2();
  auto mse_at = [&](std::size_t ck) {
    double mse = 0.0;
    for (const auto& r : ctx.t2_reports) {
      double d = r.series[ck].mu_bar[0] - ctx.t2_mu_star;
      mse += d * d;
    }
    return mse / ctx.t2_reports.size();
  };
  double mse500 = mse_at(1), mse2000 = mse_at(2);
  double ratio = mse500 / mse2000;
  bool ok = ratio >= 2.0;
  return make_result(3, "mean-square error trend", ok,
                     "MSE(500)/MSE(2000)=" + fmt(ratio) + " (>=2)");
}

// 4. Free-energy convergence --------------------------------------------------

CriterionResult criterion_free_energy(SuiteContext& ctx) {
  ctx.ensure_t2();
  double mean_sup = 0.0;
  int improved = 0;
  for (const auto& r : ctx.t2_reports) {
    double e200 = r.series[0].bias_sup_err;
    double e2000 = r.series[2].bias_sup_err;
    mean_sup += e2000;
    if (e2000 < e200) ++improved;
  }
  mean_sup /= ctx.t2_reports.size();
  bool ok = mean_sup <= 0.1 && improved >= 14;
  return make_result(4, "free-energy convergence to the smoothed profile", ok,
                     "mean sup|A_T - A_inf|=" + fmt(mean_sup) + " (<=0.1), improved " +
                         std::to_string(improved) + "/16 (>=14)");
}

// 5. Occupation measure and flat histogram -----------------------------------

CriterionResult criterion_occupation(SuiteContext& ctx) {
  ctx.ensure_t2();
  std::vector<double> rhos;
  for (const auto& r : ctx.t2_reports) rhos.push_back(r.rho_bar[0]);
  Stats st = sample_stats(rhos);
  double rho_err = std::abs(st.mean - ctx.t2_mu_star_biased);

  // The floor (1 - alpha) caps how deep A_inf can follow the profile at the
  // barrier, where exp(-A*) ~ 0.06; a light floor keeps the equilibrium
  // colvar density genuinely flat.
  EngineSettings s = well1d_settings();
  s.kernel = KernelSpec::wrapped_gaussian(1, 0.05, 0.98);
  RunReport adaptive = run_abp(s, 0);
  GridFunction zero(1, s.grid_size, 0.0);
  RunReport unbiased = run_fixed_bias(s, zero, 0);
  double ratio_adaptive = adaptive.acc.hist.max_min_ratio();
  double ratio_unbiased = unbiased.acc.hist.max_min_ratio();

  bool ok = rho_err <= 0.05 && ratio_adaptive <= 3.0 && ratio_unbiased >= 10.0;
  return make_result(5, "occupation-measure limit and flat histogram", ok,
                     "|rho - mu*^Ainf|=" + fmt(rho_err) + " (<=0.05), hist ratio adaptive=" +
                         fmt(ratio_adaptive) + " (<=3), unbiased=" + fmt(ratio_unbiased) +
                         " (>=10)");
}

// 6. Asymptotic variance -------------------------------------------------------

CriterionResult criterion_variance(SuiteContext&) {
  EngineSettings s = well1d_settings();
  s.t_final = 500.0;
  s.checkpoints = {100.0, 250.0, 500.0};
  s.seed = kSuiteSeed + 6;
  const Observable& phi = s.observables[0];

  GridFunction a_inf = smoothed_free_energy(s.dyn.potential, s.kernel, s.grid_size, 4096);
  double target = asymptotic_variance(s.dyn.potential, &a_inf, phi, 4096);
  double mu_star = equilibrium_average(s.dyn.potential, phi, 4096);

  (void)mu_star;
  auto plateau = [&](const std::vector<RunReport>& reps, double t) {
    std::vector<double> finals;
    for (const auto& r : reps) {
      if (r.failed()) throw DomainError("variance replica failed: " + r.error);
      finals.push_back(r.series.back().mu_bar[0]);
    }
    Stats st = sample_stats(finals);
    return std::pair<double, double>(t * st.var, st.var);
  };

  std::vector<RunReport> adaptive = run_replicas(s, 64);
  auto [tvar_adaptive, var_a] = plateau(adaptive, 500.0);

  std::vector<RunReport> fixed = run_replicas(s, 64, &a_inf);
  auto [tvar_fixed, var_f] = plateau(fixed, 500.0);
  (void)tvar_fixed;

  VarCI ci_a = variance_ci(var_a, 64), ci_f = variance_ci(var_f, 64);
  bool overlap = ci_a.lo <= ci_f.hi && ci_f.lo <= ci_a.hi;
  double rel = std::abs(tvar_adaptive - target) / target;

  // Closed-form anchor: free diffusion, no bias, t*Var -> 1/(4 pi^2).
  EngineSettings flat = well1d_settings();
  flat.dyn.potential = Potential::cosine1({});
  flat.t_final = 200.0;
  flat.checkpoints = {50.0, 100.0, 200.0};
  flat.seed = kSuiteSeed + 7;
  GridFunction zero(1, flat.grid_size, 0.0);
  std::vector<RunReport> anchor = run_replicas(flat, 192, &zero);
  auto [tvar_anchor, var_anchor] = plateau(anchor, 200.0);
  (void)var_anchor;
  double anchor_target = 1.0 / (4.0 * std::numbers::pi * std::numbers::pi);
  double anchor_rel = std::abs(tvar_anchor - anchor_target) / anchor_target;

  bool ok = rel <= 0.25 && overlap && anchor_rel <= 0.25;
  return make_result(6, "asymptotic variance plateau", ok,
                     "t*Var=" + fmt(tvar_adaptive) + " vs oracle " + fmt(target) +
                         " (rel " + fmt(rel) + ", <=0.25); fixed-bias CI overlap=" +
                         (overlap ? "yes" : "no") + "; anchor rel=" + fmt(anchor_rel) +
                         " (<=0.25)");
}

// 7. Hard invariants -----------------------------------------------------------

CriterionResult criterion_invariants(SuiteContext&) {
  std::ostringstream detail;
  bool ok = true;

  // Normalization axioms on 1000 random grid-function pairs.
  RngStream rng(kSuiteSeed, 700);
  std::vector<NormalizationSpec> kinds = {
      NormalizationSpec::l1(), NormalizationSpec::lq(2.0), NormalizationSpec::lq(7.0),
      NormalizationSpec::point({0.3}), NormalizationSpec::min(), NormalizationSpec::max()};
  auto random_f = [&](int G) {
    GridFunction f(1, G);
    double a = 3.0 * rng.uniform() - 1.5, b = 3.0 * rng.uniform() - 1.5;
    double c = 2.0 * rng.uniform() - 1.0, phase = rng.uniform();
    for (int g = 0; g < G; ++g) {
      double z = static_cast<double>(g) / G;
      f.v[g] = std::exp(a * std::sin(kTwoPi * (z + phase)) + b * std::cos(2 * kTwoPi * z) + c);
    }
    return f;
  };
  double worst_axiom = 0.0;
  for (int trial = 0; trial < 1000 && ok; ++trial) {
    GridFunction f1 = random_f(64), f2 = random_f(64);
    double alpha = 10.0 * rng.uniform();
    if (alpha <= 0) alpha = 0.5;
    const auto& spec = kinds[trial % kinds.size()];
    double n1 = n_value(spec, f1);
    GridFunction f1s = f1;
    for (double& x : f1s.v) x *= alpha;
    double hom = std::abs(n_value(spec, f1s) - alpha * n1) /
                 std::max(1.0, std::abs(alpha * n1));
    double sandwich_lo = f1.min() - n1, sandwich_hi = n1 - f1.max();
    double diff = 0.0;
    for (int g = 0; g < 64; ++g) diff = std::max(diff, std::abs(f1.v[g] - f2.v[g]));
    double lip = std::abs(n1 - n_value(spec, f2)) - diff;
    worst_axiom = std::max({worst_axiom, hom, sandwich_lo, sandwich_hi, lip});
    if (hom > 1e-12 || sandwich_lo > 1e-12 || sandwich_hi > 1e-12 || lip > 1e-12) {
      ok = false;
      detail << "normalization axiom violated (kind " << spec.to_string() << ", trial "
             << trial << "); ";
    }
  }
  if (ok) detail << "normalization axioms worst residual " << fmt(worst_axiom) << "; ";

  // Constant-kernel degeneracy, bitwise, plus seed determinism.
  EngineSettings s = well1d_settings();
  s.kernel = KernelSpec::constant(1);
  s.t_final = 5.0;
  BiasGrid probe(s.kernel, s.norm, InitialMeasure::single_atom({0.5}), s.grid_size);
  GridFunction a0 = probe.A();
  RunReport adaptive = run_abp(s, 0);
  bool bitwise = adaptive.bias_A.v.size() == a0.v.size() &&
                 std::memcmp(adaptive.bias_A.v.data(), a0.v.data(),
                             a0.v.size() * sizeof(double)) == 0;
  if (!bitwise) {
    ok = false;
    detail << "constant-kernel degeneracy not bitwise; ";
  } else {
    detail << "constant-kernel degeneracy bitwise; ";
  }
  GridFunction zero(1, s.grid_size, 0.0);
  RunReport fixed = run_fixed_bias(s, zero, 0);
  bool coupled = std::memcmp(adaptive.mu_bar.data(), fixed.mu_bar.data(),
                             sizeof(double) * adaptive.mu_bar.size()) == 0 &&
                 adaptive.theta == fixed.theta;
  if (!coupled) {
    ok = false;
    detail << "adaptive/fixed path equality (same seed) failed; ";
  } else {
    detail << "adaptive == fixed-zero-bias path bitwise; ";
  }

  EngineSettings s2 = well1d_settings();
  s2.t_final = 5.0;
  RunReport r1 = run_abp(s2, 3), r2 = run_abp(s2, 3);
  bool deterministic =
      r1.mu_bar == r2.mu_bar && r1.rho_bar == r2.rho_bar && r1.theta == r2.theta &&
      std::memcmp(r1.bias_A.v.data(), r2.bias_A.v.data(),
                  r1.bias_A.v.size() * sizeof(double)) == 0;
  if (!deterministic) {
    ok = false;
    detail << "seed determinism failed; ";
  } else {
    detail << "seed determinism bitwise; ";
  }
  detail << "a-priori bias bounds asserted on every deposit of every run";
  return make_result(7, "hard invariants", ok, detail.str());
}

// 8. Langevin/Brownian agreement ------------------------------------------------

CriterionResult criterion_dynamics_agreement(SuiteContext&) {
  EngineSettings brown = well1d_settings();
  brown.t_final = 1000.0;
  brown.seed = kSuiteSeed + 8;

  EngineSettings lang = brown;
  lang.dyn.family = DynamicsSpec::Family::Langevin;
  lang.dyn.gamma = 1.0;
  lang.scheme = StepperConfig::Scheme::BAOAB;
  lang.seed = kSuiteSeed + 9;

  std::vector<RunReport> rb = run_replicas(brown, 16);
  std::vector<RunReport> rl = run_replicas(lang, 16);
  std::vector<double> xb, xl, kin;
  for (const auto& r : rb) {
    if (r.failed()) throw DomainError("brownian replica failed: " + r.error);
    xb.push_back(r.mu_bar[0]);
  }
  for (const auto& r : rl) {
    if (r.failed()) throw DomainError("langevin replica failed: " + r.error);
    xl.push_back(r.mu_bar[0]);
    kin.push_back(r.mean_kinetic);
  }
  Stats sb = sample_stats(xb), sl = sample_stats(xl), sk = sample_stats(kin);
  double gap = std::abs(sb.mean - sl.mean);
  double mutual = 3.0 * std::sqrt(sb.stderr_mean * sb.stderr_mean +
                                  sl.stderr_mean * sl.stderr_mean);
  double kin_err = std::abs(sk.mean - 1.0);
  bool ok = gap <= mutual && kin_err <= 0.05;
  return make_result(8, "langevin/brownian agreement", ok,
                     "|mean_L - mean_B|=" + fmt(gap) + " vs " + fmt(mutual) +
                         "; E[p^2]=" + fmt(sk.mean) + " (within 5% of 1)");
}

// 9. Extended-dynamics limit ------------------------------------------------------

CriterionResult criterion_extended(SuiteContext&) {
  Potential v = Potential::cosine1({2.0});
  KernelSpec kernel = KernelSpec::wrapped_gaussian(1, 0.05, 0.9);
  GridFunction a_ref = free_energy_profile(v, 256, 2048);
  std::vector<double> eps = {0.5, 0.1, 0.02};
  std::vector<double> errs;
  for (double e : eps) {
    GridFunction a_inf = smoothed_free_energy_extended(v, kernel, e, 256, 2048);
    errs.push_back(sup_distance(a_inf, a_ref));
  }
  bool monotone = errs[0] > errs[1] && errs[1] > errs[2];

  EngineSettings s = well1d_settings();
  s.dyn.family = DynamicsSpec::Family::Extended;
  s.dyn.eps_ext = 0.1;
  s.seed = kSuiteSeed + 10;
  RunReport r = run_abp(s, 0);
  double mu_ref = equilibrium_average(v, s.observables[0], 4096);
  double err = std::abs(r.mu_bar[0] - mu_ref);
  bool ok = monotone && err <= 0.05;
  return make_result(9, "extended-dynamics limit", ok,
                     "sup|A_inf(eps)-A*| = {" + fmt(errs[0]) + ", " + fmt(errs[1]) + ", " +
                         fmt(errs[2]) + "} (decreasing=" + (monotone ? "yes" : "no") +
                         "); |mu - mu*_ref|=" + fmt(err) + " (<=0.05)");
}

// 10. SPDE suite --------------------------------------------------------------------

CriterionResult criterion_spde(SuiteContext&) {
  std::ostringstream detail;
  bool ok = true;
  constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

  SpdeSettings s;
  s.model = SpdeModel::cosine(0.0);
  s.n_modes = 32;
  s.grid_points = 128;
  s.kernel = KernelSpec::wrapped_gaussian(1, 0.05, 0.9);
  s.grid_size = 256;
  s.dt = 1e-3;
  s.t_final = 500.0;
  s.seed = kSuiteSeed + 11;
  s.observables = {Observable::parse("u1"),     Observable::parse("u2"),
                   Observable::parse("u3"),     Observable::parse("u4"),
                   Observable::parse("u1sq"),   Observable::parse("u2sq"),
                   Observable::parse("u3sq"),   Observable::parse("u4sq"),
                   Observable::parse("ubar"),   Observable::parse("ubarsq")};

  GridFunction zero(1, s.grid_size, 0.0);
  RunReport flat = run_spde_fixed_bias(s, zero, 0);
  double worst_mode = 0.0;
  for (int n = 1; n <= 4; ++n) {
    double mean = flat.rho_bar[n - 1];
    double var = flat.rho_bar[4 + n - 1] - mean * mean;
    double rel = std::abs(var * n * n * kPi2 - 1.0);
    worst_mode = std::max(worst_mode, rel);
  }
  double ubar_mean = flat.rho_bar[8];
  double ubar_var = flat.rho_bar[9] - ubar_mean * ubar_mean;
  double ubar_rel = std::abs(ubar_var * 12.0 - 1.0);
  if (worst_mode > 0.10 || ubar_rel > 0.10) ok = false;
  detail << "mode-variance worst rel err " << fmt(worst_mode) << " (<=0.1), Var(ubar) rel "
         << fmt(ubar_rel) << " (<=0.1); ";

  // Gaussian-quadrature reference for the adaptive flat run.
  GridFunction a_inf(1, s.grid_size, 0.0);
  {
    const int Q = 4001;
    double sigma = std::sqrt(1.0 / 12.0);
    double lo = -8.0 * sigma, hi = 8.0 * sigma;
    double step = (hi - lo) / (Q - 1);
    std::vector<double> weights(Q), xis(Q);
    for (int q = 0; q < Q; ++q) {
      double u = lo + q * step;
      double w = std::exp(-0.5 * u * u / (sigma * sigma));
      if (q == 0 || q == Q - 1) w *= 0.5;
      weights[q] = w;
      xis[q] = 0.5 + std::atan(0.5 * u) / std::numbers::pi;
    }
    double wsum = 0.0;
    for (double w : weights) wsum += w;
    for (int g = 0; g < s.grid_size; ++g) {
      double z[1] = {static_cast<double>(g) / s.grid_size};
      double acc = 0.0;
      for (int q = 0; q < Q; ++q) {
        double zeta[1] = {xis[q]};
        acc += weights[q] * kernel_eval(s.kernel, z, zeta);
      }
      a_inf.v[g] = -std::log(acc / wsum);
    }
    GridFunction dens = exp_of(a_inf, -1.0);
    double shift = std::log(dens.mean());
    for (double& x : a_inf.v) x += shift;
  }
  s.reference_bias = &a_inf;
  s.checkpoints = {500.0};
  RunReport adaptive = run_spde_abp(s, 1);
  double sup_err = adaptive.series.back().bias_sup_err;
  if (sup_err > 0.15) ok = false;
  detail << "sup|A_T - A_inf(gauss)|=" << fmt(sup_err) << " (<=0.15); ";

  // Cosine nonlinearity within the dissipativity range: bounds hold throughout.
  SpdeSettings sc = s;
  sc.model = SpdeModel::cosine(1.0);
  sc.reference_bias = nullptr;
  sc.checkpoints.clear();
  sc.t_final = 200.0;
  sc.seed = kSuiteSeed + 12;
  try {
    RunReport r = run_spde_abp(sc, 0);
    detail << "cosine c=1 run complete (max |u|^2 = " << fmt(r.max_norm2) << ")";
  } catch (const std::exception& e) {
    ok = false;
    detail << "cosine c=1 run failed: " << e.what();
  }
  return make_result(10, "spde suite", ok, detail.str());
}

} // namespace

bool all_passed(const std::vector<CriterionResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CriterionResult& r) { return r.passed; });
}

std::vector<CriterionResult> run_acceptance(const CheckOptions& options) {
  std::vector<std::pair<int, Criterion>> criteria = {
      {1, criterion_oracle},        {2, criterion_consistency},
      {3, criterion_mse_trend},     {4, criterion_free_energy},
      {5, criterion_occupation},    {6, criterion_variance},
      {7, criterion_invariants},    {8, criterion_dynamics_agreement},
      {9, criterion_extended},      {10, criterion_spde}};

  SuiteContext ctx;
  std::vector<CriterionResult> results;
  for (auto& [id, fn] : criteria) {
    if (!options.only.empty() &&
        std::find(options.only.begin(), options.only.end(), id) == options.only.end())
      continue;
    CriterionResult res;
    try {
      res = fn(ctx);
    } catch (const std::exception& e) {
      res = make_result(id, "criterion " + std::to_string(id), false,
                        std::string("exception: ") + e.what());
    }
    if (options.progress) {
      (*options.progress) << (res.passed ? "PASS" : "FAIL") << "  [" << res.id << "] "
                          << res.name << ": " << res.details << "\n";
      options.progress->flush();
    }
    results.push_back(std::move(res));
  }
  return results;
}

} // namespace abp
