#ifndef ABP_REPORT_HPP
#define ABP_REPORT_HPP

#include <string>
#include <utility>
#include <vector>

#include "abp/engine.hpp"
#include "abp/oracle.hpp"

namespace abp {

using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

/// Checkpoint time series: one row per checkpoint plus the final state.
/// Columns: t, theta, mu[<obs>]..., rho[<obs>]..., sup_a_err. Every file
/// starts with '#'-prefixed reproducibility headers (schema, resolved config,
/// seed/stream); numeric cells are written with 17 significant digits so
/// equal runs give byte-identical bodies.
void write_timeseries_csv(const std::string& path, const RunReport& report,
                          const ConfigEcho& config);

/// Bias snapshot: z_1..z_m, h, F, A, dA_1..dA_m.
void write_bias_csv(const std::string& path, const RunReport& report,
                    const ConfigEcho& config);

/// Replica-variance table: t, then per observable t*Var, mean, bias.
void write_variance_csv(const std::string& path, const VarianceTable& table,
                        const ConfigEcho& config);

/// Oracle tables for a preset: scalar table plus the A*/A_inf/Psi profiles.
void write_oracle_csv(const std::string& path, const OracleTables& tables,
                      const ConfigEcho& config);

/// JSON run summary: final averages, config echo, seed, timing.
void write_json_summary(const std::string& path, const RunReport& report,
                        const ConfigEcho& config);

void write_variance_json(const std::string& path, const VarianceTable& table,
                         const ConfigEcho& config);

/// Atomic text write (temp file + rename).
void write_text_atomic(const std::string& path, const std::string& body);

std::string format_double(double x);

} // namespace abp

#endif
