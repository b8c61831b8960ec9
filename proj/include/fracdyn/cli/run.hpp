#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fracdyn/cli/config.hpp"
#include "fracdyn/dataset.hpp"

namespace fracdyn::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_numerical = 3;
inline constexpr int exit_output = 4;

/// One row of a `name,value` report.
struct NameValue {
  std::string name;
  std::string value;
};

using Report = std::vector<NameValue>;

[[nodiscard]] Report equilibria_report(const RunConfig& cfg);
[[nodiscard]] Report stability_report(const RunConfig& cfg);
[[nodiscard]] Report thresholds_report(const RunConfig& cfg);
[[nodiscard]] Report normal_form_report(const RunConfig& cfg);

[[nodiscard]] Dataset simulate_dataset(const RunConfig& cfg);
/// Orbit rows; `escaped` tells whether the orbit left the bounded region.
[[nodiscard]] Dataset discrete_dataset(const RunConfig& cfg, bool& escaped);
[[nodiscard]] Dataset sweep_dataset(const RunConfig& cfg, std::vector<std::string>& notes);
[[nodiscard]] Dataset region_dataset(const RunConfig& cfg, std::vector<std::string>& notes);

void write_report(std::ostream& os, const Report& report);

/// Executes one resolved configuration. CSV goes to cfg.output, or to `out` when no output
/// path is set; diagnostics go to `err`. Returns 0, 2 (configuration), 3 (numerical escape)
/// or 4 (unwritable output).
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Command-line entry point: `fracdyn [mode] [--config FILE] [--key value ...]`.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fracdyn::cli
