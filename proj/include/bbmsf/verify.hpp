#pragma once

#include <string>
#include <vector>

#include "bbmsf/config.hpp"

namespace bbmsf {

// One analytic-vs-simulation or reference-value comparison. Ungated rows
// are informational and never affect the verdict.
struct CheckRow {
  std::string id;
  std::string name;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  std::string tolerance_kind;  // "rel", "abs", "max", "min", "bool", "info"
  bool pass = true;
  bool gated = true;
  std::string note;
};

struct VerifyReport {
  std::vector<CheckRow> rows;

  bool all_pass() const;
};

/// Full cross-check suite. Converter-level checks run at the configured
/// operating point; case-study checks use the reference design.
VerifyReport run_verification(const RunConfig& cfg, unsigned max_threads = 0);

std::string format_verify_table(const VerifyReport& report);

}  // namespace bbmsf
