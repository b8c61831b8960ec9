#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fracdyn/bifurcation.hpp"
#include "fracdyn/model.hpp"

namespace fracdyn::cli {

enum class Mode { simulate, equilibria, stability, thresholds, discrete, normal_form, sweep, region, reproduce };

[[nodiscard]] std::string to_string(Mode mode);
[[nodiscard]] std::optional<Mode> parse_mode(std::string_view name);

enum class ConfigErrorKind { syntax, unknown_key, out_of_range, missing_key };

/// Exit status for every configuration problem.
inline constexpr int exit_config_error = 2;

class ConfigError : public std::runtime_error {
 public:
  ConfigError(ConfigErrorKind kind, std::string key, const std::string& message)
      : std::runtime_error(message), kind_(kind), key_(std::move(key)) {}

  [[nodiscard]] ConfigErrorKind kind() const noexcept { return kind_; }
  [[nodiscard]] const std::string& key() const noexcept { return key_; }

 private:
  ConfigErrorKind kind_;
  std::string key_;
};

/// One `key = value` assignment and where it came from ("run.cfg:12" or "--m").
struct ConfigEntry {
  std::string key;
  std::string value;
  std::string origin;
  /// Mode section the entry appeared under; empty for top-level entries and flags.
  std::string section;
};

struct RunConfig {
  ModelParams params;
  Mode mode = Mode::stability;

  std::optional<double> m;
  std::optional<double> s;
  State x0{10.0, 5.0};

  // simulate
  double horizon = 100.0;
  double step = 0.05;
  int corrector_sweeps = 1;
  std::optional<std::size_t> memory_window;

  // discrete
  std::size_t iterations = 10000;
  std::size_t transient = 2000;

  // sweep
  std::string param = "s";
  double s_min = 0.1;
  double s_max = 0.6;
  double m_min = 0.8;
  double m_max = 1.0;
  std::size_t n_points = 101;
  std::size_t samples = 200;
  SweepMode sweep_mode = SweepMode::follow_attractor;
  unsigned threads = 0;

  // region
  double c_min = 0.005;
  double c_max = 0.12;
  std::size_t c_points = 24;
  double tolerance = 1e-3;

  /// Output file (directory for reproduce); empty writes CSV to standard output.
  std::string output;
  /// Optional PPM scatter plot rendered from the emitted dataset.
  std::string plot;
};

/// Names of every recognised key, in documentation order.
[[nodiscard]] const std::vector<std::string>& known_keys();

/// Splits config text into entries. Grammar: one `key = value` per line, `#` starts a comment,
/// `[name]` opens a section whose entries apply only when `name` is the active mode.
[[nodiscard]] std::vector<ConfigEntry> parse_config_entries(std::string_view text, const std::string& source_name);

/// Layers entries (file first, then flags, later entries win), applies the mode
/// (positional > `mode` key), and validates ranges. `preset = reference` seeds the model
/// parameters with r=2.65, K=898, alpha=0.045, h=0.0437, d=1.06, theta=0.215, c=0.86.
[[nodiscard]] RunConfig resolve_config(const std::vector<ConfigEntry>& file_entries,
                                       const std::vector<ConfigEntry>& flag_entries,
                                       std::optional<Mode> positional_mode = std::nullopt);

/// Config text alone (no flags).
[[nodiscard]] RunConfig parse_config(std::string_view text, const std::string& source_name = "config");

}  // namespace fracdyn::cli
