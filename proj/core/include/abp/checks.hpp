#ifndef ABP_CHECKS_HPP
#define ABP_CHECKS_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace abp {

/// One verification criterion of the built-in suite.
struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string details;
};

struct CheckOptions {
  std::ostream* progress = nullptr;   // per-criterion pass/fail lines
  std::vector<int> only;              // run a subset (empty = all)
};

/// Run the built-in verification suite (consistency, free-energy convergence,
/// occupation-measure limit, asymptotic variance, invariants, dynamics
/// agreement, extended-dynamics limit, SPDE checks). Every tolerance is fixed
/// here; results report measured values.
std::vector<CriterionResult> run_acceptance(const CheckOptions& options = {});

bool all_passed(const std::vector<CriterionResult>& results);

} // namespace abp

#endif
