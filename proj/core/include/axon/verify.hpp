#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace axon {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::vector<std::string> details;  ///< deterministic lines, no timings
};

struct VerifyReport {
  std::uint64_t seed = 0;
  std::vector<CriterionResult> results;

  [[nodiscard]] bool all_pass() const;
  /// One "PASS|FAIL <id> <name>" line per criterion followed by its
  /// indented details. Identical for identical seeds.
  [[nodiscard]] std::string text() const;
};

struct VerifyOptions {
  std::uint64_t seed = 20260101;
  /// Rerun the suite and compare the reports byte by byte.
  bool check_determinism = true;
  /// Empty selects every criterion.
  std::vector<int> only;
};

// Individual acceptance checks, each deterministic in its seed.
[[nodiscard]] CriterionResult verify_kernel_convergence(std::uint64_t seed);
[[nodiscard]] CriterionResult verify_series_bound();
[[nodiscard]] CriterionResult verify_reciprocity(std::uint64_t seed);
[[nodiscard]] CriterionResult verify_pure_diffusion();
/// Criteria 5 and 6 share one closed-loop run of the reference scenario.
[[nodiscard]] std::vector<CriterionResult> verify_reference_scenario();
[[nodiscard]] CriterionResult verify_linear_observer(std::uint64_t seed);
[[nodiscard]] CriterionResult verify_gain_conditions(std::uint64_t seed);

/// Runs the selected checks. Elapsed times go to the log, never into the
/// report.
[[nodiscard]] VerifyReport run_verification(const VerifyOptions& opt = {});

}  // namespace axon
