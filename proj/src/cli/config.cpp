#include "fracdyn/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <system_error>

namespace fracdyn::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(ConfigErrorKind kind, const std::string& key, const std::string& origin, const std::string& what) {
  throw ConfigError(kind, key, origin + ": " + what);
}

double to_double(const ConfigEntry& e) {
  double v = 0.0;
  const char* begin = e.value.data();
  const char* end = begin + e.value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    fail(ConfigErrorKind::syntax, e.key, e.origin, "key '" + e.key + "': '" + e.value + "' is not a finite number");
  }
  return v;
}

std::size_t to_count(const ConfigEntry& e) {
  std::size_t v = 0;
  const char* begin = e.value.data();
  const char* end = begin + e.value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) {
    fail(ConfigErrorKind::syntax, e.key, e.origin, "key '" + e.key + "': '" + e.value + "' is not a non-negative integer");
  }
  return v;
}

void require(bool ok, const ConfigEntry& e, const char* constraint) {
  if (!ok) {
    fail(ConfigErrorKind::out_of_range, e.key, e.origin,
         "key '" + e.key + "' = " + e.value + " is out of range (requires " + constraint + ")");
  }
}

using Setter = std::function<void(const ConfigEntry&, RunConfig&)>;

// Positive finite real into a field.
Setter positive(double RunConfig::*field, const char* constraint) {
  return [field, constraint](const ConfigEntry& e, RunConfig& cfg) {
    const double v = to_double(e);
    require(v > 0.0, e, constraint);
    cfg.*field = v;
  };
}

Setter model_positive(double ModelParams::*field, const char* constraint) {
  return [field, constraint](const ConfigEntry& e, RunConfig& cfg) {
    const double v = to_double(e);
    require(v > 0.0, e, constraint);
    cfg.params.*field = v;
  };
}

Setter order_field(double RunConfig::*field, const char* constraint) {
  return [field, constraint](const ConfigEntry& e, RunConfig& cfg) {
    const double v = to_double(e);
    require(v > 0.0 && v <= 1.0, e, constraint);
    cfg.*field = v;
  };
}

Setter count(std::size_t RunConfig::*field, std::size_t min_value, const char* constraint) {
  return [field, min_value, constraint](const ConfigEntry& e, RunConfig& cfg) {
    const std::size_t v = to_count(e);
    require(v >= min_value, e, constraint);
    cfg.*field = v;
  };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    t["mode"] = [](const ConfigEntry&, RunConfig&) {};    // resolved separately
    t["preset"] = [](const ConfigEntry&, RunConfig&) {};  // resolved separately
    t["r"] = model_positive(&ModelParams::r, "r > 0");
    t["K"] = model_positive(&ModelParams::K, "K > 0");
    t["alpha"] = model_positive(&ModelParams::alpha, "alpha > 0");
    t["h"] = model_positive(&ModelParams::h, "h > 0");
    t["d"] = model_positive(&ModelParams::d, "d > 0");
    t["theta"] = [](const ConfigEntry& e, RunConfig& cfg) {
      const double v = to_double(e);
      require(v > 0.0 && v < 1.0, e, "0 < theta < 1");
      cfg.params.theta = v;
    };
    t["c"] = [](const ConfigEntry& e, RunConfig& cfg) {
      const double v = to_double(e);
      require(v >= 0.0 && v < 1.0, e, "0 <= c < 1");
      cfg.params.c = v;
    };
    t["m"] = [](const ConfigEntry& e, RunConfig& cfg) {
      const double v = to_double(e);
      require(v > 0.0 && v <= 1.0, e, "0 < m <= 1");
      cfg.m = v;
    };
    t["s"] = [](const ConfigEntry& e, RunConfig& cfg) {
      const double v = to_double(e);
      require(v > 0.0, e, "s > 0");
      cfg.s = v;
    };
    t["x0"] = [](const ConfigEntry& e, RunConfig& cfg) {
      const double v = to_double(e);
      require(v >= 0.0, e, "x0 >= 0");
      cfg.x0.x = v;
    };
    t["y0"] = [](const ConfigEntry& e, RunConfig& cfg) {
      const double v = to_double(e);
      require(v >= 0.0, e, "y0 >= 0");
      cfg.x0.y = v;
    };
    t["horizon"] = positive(&RunConfig::horizon, "horizon > 0");
    t["step"] = positive(&RunConfig::step, "step > 0");
    t["corrector_sweeps"] = [](const ConfigEntry& e, RunConfig& cfg) {
      const std::size_t v = to_count(e);
      require(v >= 1 && v <= 100, e, "1 <= corrector_sweeps <= 100");
      cfg.corrector_sweeps = static_cast<int>(v);
    };
    t["memory_window"] = [](const ConfigEntry& e, RunConfig& cfg) {
      const std::size_t v = to_count(e);
      require(v >= 1, e, "memory_window >= 1");
      cfg.memory_window = v;
    };
    t["iterations"] = count(&RunConfig::iterations, 1, "iterations >= 1");
    t["transient"] = count(&RunConfig::transient, 0, "transient >= 0");
    t["param"] = [](const ConfigEntry& e, RunConfig& cfg) {
      require(e.value == "s" || e.value == "m", e, "param = s or param = m");
      cfg.param = e.value;
    };
    t["s_min"] = positive(&RunConfig::s_min, "s_min > 0");
    t["s_max"] = positive(&RunConfig::s_max, "s_max > 0");
    t["m_min"] = order_field(&RunConfig::m_min, "0 < m_min <= 1");
    t["m_max"] = order_field(&RunConfig::m_max, "0 < m_max <= 1");
    t["n_points"] = count(&RunConfig::n_points, 2, "n_points >= 2");
    t["samples"] = count(&RunConfig::samples, 1, "samples >= 1");
    t["sweep_mode"] = [](const ConfigEntry& e, RunConfig& cfg) {
      require(e.value == "follow" || e.value == "fixed", e, "sweep_mode = follow or sweep_mode = fixed");
      cfg.sweep_mode = e.value == "fixed" ? SweepMode::fixed_initial : SweepMode::follow_attractor;
    };
    t["threads"] = [](const ConfigEntry& e, RunConfig& cfg) {
      const std::size_t v = to_count(e);
      require(v <= 1024, e, "0 <= threads <= 1024");
      cfg.threads = static_cast<unsigned>(v);
    };
    t["c_min"] = [](const ConfigEntry& e, RunConfig& cfg) {
      const double v = to_double(e);
      require(v >= 0.0 && v < 1.0, e, "0 <= c_min < 1");
      cfg.c_min = v;
    };
    t["c_max"] = [](const ConfigEntry& e, RunConfig& cfg) {
      const double v = to_double(e);
      require(v >= 0.0 && v < 1.0, e, "0 <= c_max < 1");
      cfg.c_max = v;
    };
    t["c_points"] = count(&RunConfig::c_points, 1, "c_points >= 1");
    t["tolerance"] = positive(&RunConfig::tolerance, "tolerance > 0");
    t["output"] = [](const ConfigEntry& e, RunConfig& cfg) { cfg.output = e.value; };
    t["plot"] = [](const ConfigEntry& e, RunConfig& cfg) { cfg.plot = e.value; };
    return t;
  }();
  return table;
}

const char* const model_keys[] = {"r", "K", "alpha", "h", "theta", "c", "d"};

void check_known(const ConfigEntry& e) {
  if (!setters().count(e.key)) {
    fail(ConfigErrorKind::unknown_key, e.key, e.origin, "unknown key '" + e.key + "'");
  }
}

void cross_check(const RunConfig& cfg, const std::map<std::string, ConfigEntry>& eff) {
  auto origin = [&](const char* key) {
    const auto it = eff.find(key);
    return it != eff.end() ? it->second.origin : std::string("defaults");
  };
  auto need = [&](bool present, const char* key, const std::string& why) {
    if (!present) {
      fail(ConfigErrorKind::missing_key, key, "config", "missing required key '" + std::string(key) + "' (" + why + ")");
    }
  };
  const std::string mode = to_string(cfg.mode);
  switch (cfg.mode) {
    case Mode::simulate:
    case Mode::stability:
    case Mode::normal_form:
      need(cfg.m.has_value(), "m", "mode " + mode);
      break;
    case Mode::discrete:
      need(cfg.m.has_value(), "m", "mode " + mode);
      need(cfg.s.has_value(), "s", "mode " + mode);
      break;
    case Mode::sweep:
      if (cfg.param == "s") {
        need(cfg.m.has_value(), "m", "sweep over s");
      } else {
        need(cfg.s.has_value(), "s", "sweep over m");
      }
      break;
    default:
      break;
  }
  auto bad = [&](const char* key, const std::string& what) {
    fail(ConfigErrorKind::out_of_range, key, origin(key), what);
  };
  if (cfg.mode == Mode::simulate && cfg.horizon < cfg.step) bad("horizon", "horizon must be >= step");
  if (cfg.mode == Mode::discrete && cfg.transient >= cfg.iterations) {
    bad("transient", "transient must be smaller than iterations");
  }
  if (cfg.mode == Mode::sweep && cfg.param == "s" && !(cfg.s_min < cfg.s_max)) bad("s_max", "requires s_min < s_max");
  if (cfg.mode == Mode::sweep && cfg.param == "m" && !(cfg.m_min < cfg.m_max)) bad("m_max", "requires m_min < m_max");
  if (cfg.mode == Mode::region && !(cfg.c_min <= cfg.c_max)) bad("c_max", "requires c_min <= c_max");
}

}  // namespace

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::simulate:
      return "simulate";
    case Mode::equilibria:
      return "equilibria";
    case Mode::stability:
      return "stability";
    case Mode::thresholds:
      return "thresholds";
    case Mode::discrete:
      return "discrete";
    case Mode::normal_form:
      return "normal-form";
    case Mode::sweep:
      return "sweep";
    case Mode::region:
      return "region";
    case Mode::reproduce:
      return "reproduce";
  }
  return "unknown";
}

std::optional<Mode> parse_mode(std::string_view name) {
  for (Mode m : {Mode::simulate, Mode::equilibria, Mode::stability, Mode::thresholds, Mode::discrete,
                 Mode::normal_form, Mode::sweep, Mode::region, Mode::reproduce}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, setter] : setters()) k.push_back(name);
    return k;
  }();
  return keys;
}

std::vector<ConfigEntry> parse_config_entries(std::string_view text, const std::string& source_name) {
  std::vector<ConfigEntry> out;
  std::string section;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    const std::string origin = source_name + ":" + std::to_string(line_no);

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(ConfigErrorKind::syntax, "", origin, "unterminated section header");
      const std::string name(trim(line.substr(1, line.size() - 2)));
      if (!parse_mode(name)) fail(ConfigErrorKind::syntax, "", origin, "section [" + name + "] is not a mode");
      section = name;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(ConfigErrorKind::syntax, "", origin, "expected 'key = value'");
    ConfigEntry e{std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))), origin, section};
    if (e.key.empty()) fail(ConfigErrorKind::syntax, "", origin, "empty key");
    if (e.value.empty()) fail(ConfigErrorKind::syntax, e.key, origin, "key '" + e.key + "' has no value");
    out.push_back(std::move(e));
  }
  return out;
}

RunConfig resolve_config(const std::vector<ConfigEntry>& file_entries, const std::vector<ConfigEntry>& flag_entries,
                         std::optional<Mode> positional_mode) {
  std::vector<ConfigEntry> all = file_entries;
  all.insert(all.end(), flag_entries.begin(), flag_entries.end());
  for (const auto& e : all) check_known(e);

  RunConfig cfg;
  if (positional_mode) {
    cfg.mode = *positional_mode;
  } else {
    const ConfigEntry* last = nullptr;
    for (const auto& e : all) {
      if (e.key == "mode" && e.section.empty()) last = &e;
    }
    if (!last) fail(ConfigErrorKind::missing_key, "mode", "config", "missing required key 'mode'");
    const auto m = parse_mode(last->value);
    if (!m) {
      fail(ConfigErrorKind::out_of_range, "mode", last->origin,
           "key 'mode' = " + last->value +
               " is out of range (requires one of simulate, equilibria, stability, thresholds, discrete, "
               "normal-form, sweep, region, reproduce)");
    }
    cfg.mode = *m;
  }
  const std::string active = to_string(cfg.mode);

  // Effective entries: later wins; sections for other modes are ignored.
  std::map<std::string, ConfigEntry> eff;
  for (const auto& e : all) {
    if (!e.section.empty() && e.section != active) continue;
    eff[e.key] = e;
  }

  if (const auto it = eff.find("preset"); it != eff.end()) {
    require(it->second.value == "reference", it->second, "preset = reference");
    cfg.params = ModelParams::reference();
  } else if (cfg.mode == Mode::reproduce) {
    // The reference study fixes its own parameter sets.
    cfg.params = ModelParams::reference();
  } else {
    for (const char* key : model_keys) {
      if (!eff.count(key)) {
        fail(ConfigErrorKind::missing_key, key, "config",
             "missing required key '" + std::string(key) + "' (model parameter; or set preset = reference)");
      }
    }
  }
  for (const auto& [key, entry] : eff) setters().at(key)(entry, cfg);
  cross_check(cfg, eff);
  return cfg;
}

RunConfig parse_config(std::string_view text, const std::string& source_name) {
  return resolve_config(parse_config_entries(text, source_name), {});
}

}  // namespace fracdyn::cli
