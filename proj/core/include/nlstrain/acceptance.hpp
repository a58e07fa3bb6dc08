#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace nlstrain {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Mass drifts of every accepted evolution run, collected while criteria execute.
struct AcceptanceContext {
  std::vector<std::pair<std::string, double>> mass_drifts;
};

/// Criterion ids in execution order; the conservation criterion runs last so it sees every run.
std::vector<int> acceptance_order();

/// Runs one criterion. Numerical exceptions become a failed result.
CriterionResult run_criterion(int id, AcceptanceContext& context);

/// Runs every criterion in acceptance_order(), reporting each as it finishes.
std::vector<CriterionResult> run_acceptance(const std::function<void(const CriterionResult&)>& on_result = {});

/// "[PASS] 7 source decay (12.3 s): detail".
std::string format_result(const CriterionResult& result);

}  // namespace nlstrain
