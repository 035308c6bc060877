#pragma once

// Acceptance suite shared by the test binary and `mimetic verify`.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace mimetic {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  /// One-line summary of the measured quantities.
  std::string detail;
  /// Extra non-gating observations, printed below the result line.
  std::vector<std::string> notes;
  double seconds = 0.0;
};

CriterionResult check_topology(std::uint64_t seed = 1);
CriterionResult check_basis_duality();
CriterionResult check_commuting(std::uint64_t seed = 3);
CriterionResult check_conservation();
CriterionResult check_h_convergence();
CriterionResult check_p_convergence();
CriterionResult check_method_difference();
CriterionResult check_metric_separation();

/// Runs criterion 1..8; exceptions become failed results.
CriterionResult run_criterion(int id);

/// Runs criteria in order; `report` is called after each one.
std::vector<CriterionResult> run_acceptance(
    const std::function<void(const CriterionResult&)>& report = {});

/// "PASS 3 commuting diagrams: ... (1.2 s)" plus indented notes.
std::string format_result(const CriterionResult& r);

}  // namespace mimetic
