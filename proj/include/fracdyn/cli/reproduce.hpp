#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fracdyn/cli/config.hpp"

namespace fracdyn::cli {

struct SummaryRow {
  std::string quantity;
  double expected = 0.0;
  double computed = 0.0;
  double tolerance = 0.0;
  /// Tolerance is relative to |expected| rather than absolute.
  bool relative = false;

  [[nodiscard]] bool ok() const noexcept;
};

/// Tabulated reference values against the library's results for the reference parameter set.
[[nodiscard]] std::vector<SummaryRow> reproduction_summary();

/// Writes every reference dataset plus summary.csv into a fresh timestamped directory
/// under cfg.output (default "reproduce"). Returns 0, or 4 if the directory is unwritable.
/// Mismatches in the summary are reported but do not change the exit status.
int run_reproduce(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace fracdyn::cli
