#pragma once

#include <functional>
#include <string>
#include <vector>

namespace zkpos::cli {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;  ///< the check held and finished within its time budget
  bool within_budget = true;
  double seconds = 0;
  double budget_seconds = 0;
  std::string detail;
};

struct AcceptanceOptions {
  /// Criterion ids to run; empty runs all twelve.
  std::vector<int> only;
  /// Directory of bundled scenarios for the determinism audit.
  std::string scenario_dir;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

/// "PASS  3  <name>  (12.3 s / 60 s)  <detail>"
std::string format_line(const CriterionResult& r);

}  // namespace zkpos::cli
