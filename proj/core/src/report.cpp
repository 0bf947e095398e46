#include "abp/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "abp/errors.hpp"

namespace abp {

using nlohmann::json;

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_text_atomic(const std::string& path, const std::string& body) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DomainError("cannot open '" + tmp + "' for writing");
    out << body;
    if (!out) throw DomainError("write failed for '" + tmp + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw DomainError("cannot rename '" + tmp + "' to '" + path + "'");
}

namespace {

void emit_header(std::ostringstream& os, const std::string& schema,
                 const ConfigEcho& config) {
  os << "# schema: " << schema << "\n";
  for (const auto& [k, v] : config) os << "# " << k << " = " << v << "\n";
}

void emit_seed(std::ostringstream& os, const RunReport& report) {
  os << "# seed = " << report.seed << ", stream = " << report.stream << "\n";
}

} // namespace

void write_timeseries_csv(const std::string& path, const RunReport& report,
                          const ConfigEcho& config) {
  std::ostringstream os;
  emit_header(os, "abp.timeseries.v1", config);
  emit_seed(os, report);
  os << "t,theta";
  for (const auto& n : report.observable_names) os << ",mu[" << n << "]";
  for (const auto& n : report.observable_names) os << ",rho[" << n << "]";
  os << ",sup_a_err\n";
  auto emit_row = [&](double t, double theta, const std::vector<double>& mu,
                      const std::vector<double>& rho, double err) {
    os << format_double(t) << "," << format_double(theta);
    for (double v : mu) os << "," << format_double(v);
    for (double v : rho) os << "," << format_double(v);
    os << "," << format_double(err) << "\n";
  };
  bool final_in_series = false;
  for (const auto& rec : report.series) {
    emit_row(rec.t, rec.theta, rec.mu_bar, rec.rho_bar, rec.bias_sup_err);
    if (rec.t == report.t_final) final_in_series = true;
  }
  if (!final_in_series)
    emit_row(report.t_final, report.theta, report.mu_bar, report.rho_bar,
             std::numeric_limits<double>::quiet_NaN());
  write_text_atomic(path, os.str());
}

void write_bias_csv(const std::string& path, const RunReport& report,
                    const ConfigEcho& config) {
  const GridFunction& A = report.bias_A;
  std::ostringstream os;
  emit_header(os, "abp.bias.v1", config);
  emit_seed(os, report);
  int m = A.m, G = A.size;
  // Recompute the centered-difference gradient from the exported A so the
  // file is self-contained.
  for (int i = 0; i < m; ++i) os << "z_" << (i + 1) << ",";
  os << "h,F,A";
  for (int i = 0; i < m; ++i) os << ",dA_" << (i + 1);
  os << "\n";
  double inv2h = 0.5 * G;
  if (m == 1) {
    for (int g = 0; g < G; ++g) {
      int gp = (g + 1) % G, gm = (g + G - 1) % G;
      os << format_double(A.node(g)) << "," << format_double(report.bias_h.v[g]) << ","
         << format_double(report.bias_F.v[g]) << "," << format_double(A.v[g]) << ","
         << format_double((A.v[gp] - A.v[gm]) * inv2h) << "\n";
    }
  } else {
    for (int i = 0; i < G; ++i)
      for (int j = 0; j < G; ++j) {
        int ip = (i + 1) % G, im = (i + G - 1) % G;
        int jp = (j + 1) % G, jm = (j + G - 1) % G;
        std::size_t idx = A.index(i, j);
        os << format_double(A.node(i)) << "," << format_double(A.node(j)) << ","
           << format_double(report.bias_h.v[idx]) << ","
           << format_double(report.bias_F.v[idx]) << "," << format_double(A.v[idx]) << ","
           << format_double((A.v[A.index(ip, j)] - A.v[A.index(im, j)]) * inv2h) << ","
           << format_double((A.v[A.index(i, jp)] - A.v[A.index(i, jm)]) * inv2h) << "\n";
      }
  }
  write_text_atomic(path, os.str());
}

void write_variance_csv(const std::string& path, const VarianceTable& table,
                        const ConfigEcho& config) {
  std::ostringstream os;
  emit_header(os, "abp.variance.v1", config);
  os << "# replicas = " << table.replicas
     << ", failed = " << table.failed_replicas.size() << "\n";
  os << "t";
  for (const auto& n : table.observable_names)
    os << ",tvar[" << n << "],mean[" << n << "],bias[" << n << "]";
  os << "\n";
  for (std::size_t c = 0; c < table.times.size(); ++c) {
    os << format_double(table.times[c]);
    for (std::size_t i = 0; i < table.observable_names.size(); ++i)
      os << "," << format_double(table.t_var[c][i]) << ","
         << format_double(table.mean_value[c][i]) << ","
         << format_double(table.mean_bias[c][i]);
    os << "\n";
  }
  write_text_atomic(path, os.str());
}

void write_oracle_csv(const std::string& path, const OracleTables& tables,
                      const ConfigEcho& config) {
  std::ostringstream os;
  emit_header(os, "abp.oracle.v1", config);
  os << "observable,mu_star,mu_star_biased";
  bool have_v = !tables.v_inf_unbiased.empty();
  if (have_v) os << ",v_inf_unbiased,v_inf_ainf";
  os << "\n";
  for (std::size_t i = 0; i < tables.observable_names.size(); ++i) {
    os << tables.observable_names[i] << "," << format_double(tables.mu_star[i]) << ","
       << format_double(tables.mu_star_biased[i]);
    if (have_v)
      os << "," << format_double(tables.v_inf_unbiased[i]) << ","
         << format_double(tables.v_inf_ainf[i]);
    os << "\n";
  }
  os << "\nz,a_star,exp_neg_a_star,a_inf,exp_neg_a_inf";
  if (tables.psi) os << ",psi";
  os << "\n";
  const GridFunction& a_star = tables.a_star;
  for (int g = 0; g < a_star.size; ++g) {
    os << format_double(a_star.node(g)) << "," << format_double(a_star.v[g]) << ","
       << format_double(std::exp(-a_star.v[g])) << "," << format_double(tables.a_inf.v[g])
       << "," << format_double(std::exp(-tables.a_inf.v[g]));
    if (tables.psi) {
      // psi lives on its own (finer) grid; resample by index stride
      const GridFunction& psi = *tables.psi;
      int stride = psi.size / a_star.size;
      os << "," << format_double(psi.v[static_cast<std::size_t>(g) * stride]);
    }
    os << "\n";
  }
  write_text_atomic(path, os.str());
}

namespace {

json echo_to_json(const ConfigEcho& config) {
  json j = json::object();
  for (const auto& [k, v] : config) j[k] = v;
  return j;
}

json report_to_json(const RunReport& report) {
  json j;
  j["seed"] = report.seed;
  j["stream"] = report.stream;
  j["steps"] = report.steps;
  j["t_final"] = report.t_final;
  j["theta"] = report.theta;
  j["wall_seconds"] = report.wall_seconds;
  json mu = json::object(), rho = json::object();
  for (std::size_t i = 0; i < report.observable_names.size(); ++i) {
    mu[report.observable_names[i]] = report.mu_bar[i];
    rho[report.observable_names[i]] = report.rho_bar[i];
  }
  j["mu_bar"] = mu;
  j["rho_bar"] = rho;
  if (std::isfinite(report.mean_kinetic)) j["mean_kinetic"] = report.mean_kinetic;
  if (std::isfinite(report.max_norm2)) j["max_norm2"] = report.max_norm2;
  if (!report.error.empty()) j["error"] = report.error;
  if (!report.acc.hist.mass.empty()) {
    j["histogram"] = report.acc.hist.mass;
    j["histogram_total"] = report.acc.hist.total;
  }
  return j;
}

} // namespace

void write_json_summary(const std::string& path, const RunReport& report,
                        const ConfigEcho& config) {
  json j = report_to_json(report);
  j["config"] = echo_to_json(config);
  write_text_atomic(path, j.dump(2) + "\n");
}

void write_variance_json(const std::string& path, const VarianceTable& table,
                         const ConfigEcho& config) {
  json j;
  j["replicas"] = table.replicas;
  j["failed_replicas"] = table.failed_replicas;
  j["times"] = table.times;
  j["observables"] = table.observable_names;
  j["t_var"] = table.t_var;
  j["mean"] = table.mean_value;
  j["bias"] = table.mean_bias;
  j["config"] = echo_to_json(config);
  write_text_atomic(path, j.dump(2) + "\n");
}

} // namespace abp
