#pragma once

// Acceptance criteria 1-10 and the module invariants as runnable checks.

#include <cstdint>
#include <string>
#include <vector>

namespace opobs::verify {

struct CheckResult {
  std::string id;  // "1".."10" for acceptance criteria, "inv.<name>" otherwise
  std::string name;
  bool passed = false;
  double deviation = 0.0;
  double tolerance = 0.0;
  double seconds = 0.0;
  std::string detail;
};

struct VerifyOptions {
  double max_spin = 5.0;
  int n_max = 48;
  int trials = 100;
  int sample_count = 100000;
  std::uint64_t seed = 20240601;
};

/// Acceptance criterion `id` in 1..10.
CheckResult run_criterion(int id, const VerifyOptions& options = {});
std::vector<CheckResult> run_acceptance(const VerifyOptions& options = {});
std::vector<CheckResult> run_invariants(const VerifyOptions& options = {});

/// "PASS"/"FAIL" line with id, name, deviation, tolerance and runtime.
std::string format_line(const CheckResult& r);

}  // namespace opobs::verify
