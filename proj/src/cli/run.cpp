#include "fracdyn/cli/run.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "fracdyn/bifurcation.hpp"
#include "fracdyn/cli/plot.hpp"
#include "fracdyn/cli/reproduce.hpp"
#include "fracdyn/discrete_map.hpp"
#include "fracdyn/errors.hpp"
#include "fracdyn/pece.hpp"
#include "fracdyn/stability.hpp"

namespace fracdyn::cli {

namespace {

std::string num(double v) { return format_number(v); }

std::string flag(bool b) { return b ? "true" : "false"; }

void add(Report& r, std::string name, double v) { r.push_back({std::move(name), num(v)}); }

void add(Report& r, std::string name, const std::optional<double>& v) {
  r.push_back({std::move(name), v ? num(*v) : std::string("undefined")});
}

void add_complex(Report& r, const std::string& name, std::complex<double> z) {
  add(r, name + "_re", z.real());
  add(r, name + "_im", z.imag());
}

FractionalOrder order_of(const RunConfig& cfg) { return FractionalOrder(*cfg.m); }

// Emits `text` to cfg.output (or `out`). Returns exit_output on failure.
int emit(const RunConfig& cfg, const std::string& text, std::ostream& out, std::ostream& err) {
  if (cfg.output.empty()) {
    out << text;
    return exit_ok;
  }
  std::ofstream os(cfg.output, std::ios::binary | std::ios::trunc);
  if (!os) {
    err << "error: cannot write output file '" << cfg.output << "'\n";
    return exit_output;
  }
  os << text;
  os.close();
  if (!os) {
    err << "error: failed while writing output file '" << cfg.output << "'\n";
    return exit_output;
  }
  return exit_ok;
}

int emit_dataset(const RunConfig& cfg, const Dataset& data, std::ostream& out, std::ostream& err) {
  const int code = emit(cfg, to_csv(data), out, err);
  if (code != exit_ok) return code;
  if (!cfg.plot.empty() && !write_ppm_scatter(cfg.plot, data)) {
    err << "error: cannot write plot file '" << cfg.plot << "'\n";
    return exit_output;
  }
  return exit_ok;
}

std::string report_text(const Report& r) {
  std::ostringstream os;
  write_report(os, r);
  return os.str();
}

}  // namespace

void write_report(std::ostream& os, const Report& report) {
  os << "name,value\n";
  for (const auto& [name, value] : report) os << name << ',' << value << '\n';
}

Report equilibria_report(const RunConfig& cfg) {
  Report r;
  for (const Equilibrium& e : equilibria(cfg.params)) {
    const std::string n = to_string(e.kind);
    add(r, n + "_x", e.point.x);
    add(r, n + "_y", e.point.y);
    r.push_back({n + "_exists", flag(e.exists)});
  }
  return r;
}

Report stability_report(const RunConfig& cfg) {
  const FractionalOrder m = order_of(cfg);
  Report r;
  add(r, "m", m.value());
  bool interior = false;
  for (const StabilityReport& rep : classify_equilibria(cfg.params, m)) {
    const std::string n = to_string(rep.equilibrium.kind);
    interior = interior || rep.equilibrium.kind == EquilibriumKind::interior;
    add(r, n + "_x", rep.equilibrium.point.x);
    add(r, n + "_y", rep.equilibrium.point.y);
    add_complex(r, n + "_eig1", rep.eigenvalues[0]);
    add_complex(r, n + "_eig2", rep.eigenvalues[1]);
    r.push_back({n + "_class", to_string(rep.classification)});
    add(r, n + "_orders_lo", rep.valid_orders.lo);
    add(r, n + "_orders_hi", rep.valid_orders.hi);
  }
  if (interior) {
    const CriticalOrder co = critical_order(cfg.params);
    add(r, "trace_Estar", co.trace);
    add(r, "det_Estar", co.det);
    add(r, "m_star", co.m_star);
  } else {
    r.push_back({"Estar_exists", "false"});
  }
  const GlobalStabilityFlags g = global_stability_check(cfg.params);
  r.push_back({"E1_global_sufficient", flag(g.predator_free_global)});
  r.push_back({"Estar_global_sufficient", flag(g.interior_global)});
  return r;
}

Report thresholds_report(const RunConfig& cfg) {
  const Thresholds t = thresholds(cfg.params);
  Report r;
  add(r, "c1", t.c1);
  add(r, "c2", t.c2);
  add(r, "theta1", t.theta1);
  add(r, "theta2", t.theta2);
  if (cfg.m) {
    const StepThresholds st = step_thresholds(cfg.params, order_of(cfg));
    add(r, "m", *cfg.m);
    add(r, "s1", st.s1);
    add(r, "s2", st.s2);
    add(r, "s3", st.s3);
    add(r, "s4", st.s4);
    add(r, "s5", st.s5);
    add(r, "G", st.G);
    add(r, "H", st.H);
  }
  return r;
}

Report normal_form_report(const RunConfig& cfg) {
  const NormalFormData nf = hopf_normal_form(cfg.params, order_of(cfg));
  Report r;
  add(r, "s4", nf.s4);
  add(r, "S1", nf.S1);
  add(r, "c11", nf.c11);
  add(r, "c12", nf.c12);
  add(r, "c21", nf.c21);
  add(r, "c22", nf.c22);
  add(r, "c13", nf.c13);
  add(r, "c23", nf.c23);
  add(r, "delta", nf.delta);
  add(r, "beta", nf.beta);
  add_complex(r, "lambda1", nf.lambda[0]);
  add_complex(r, "lambda2", nf.lambda[1]);
  add(r, "modulus", std::abs(nf.lambda[0]));
  add(r, "transversality", nf.transversality);
  r.push_back({"nonresonance_ok", flag(nf.nonresonance_ok)});
  add(r, "P_uu", nf.partials.p_uu);
  add(r, "P_uv", nf.partials.p_uv);
  add(r, "P_vv", nf.partials.p_vv);
  add(r, "Q_uu", nf.partials.q_uu);
  add(r, "Q_uv", nf.partials.q_uv);
  add(r, "Q_vv", nf.partials.q_vv);
  add_complex(r, "xi11", nf.xi11);
  add_complex(r, "xi20", nf.xi20);
  add_complex(r, "xi02", nf.xi02);
  add_complex(r, "xi21", nf.xi21);
  add(r, "gamma", nf.gamma);
  return r;
}

Dataset simulate_dataset(const RunConfig& cfg) {
  SolverConfig sc;
  sc.step = cfg.step;
  sc.horizon = cfg.horizon;
  sc.corrector_sweeps = cfg.corrector_sweeps;
  sc.memory_window = cfg.memory_window;
  const ModelParams p = cfg.params;
  const Trajectory traj = pece_solve(
      [p](State s) {
        const Rates f = rhs(p, s);
        return State{f.dx, f.dy};
      },
      cfg.x0, order_of(cfg), sc);
  return export_series(traj);
}

Dataset discrete_dataset(const RunConfig& cfg, bool& escaped) {
  const DiscreteConfig dc{.s = *cfg.s, .m = order_of(cfg), .iterations = cfg.iterations, .transient = cfg.transient};
  const DiscreteOrbit orbit = iterate_orbit(cfg.params, dc, cfg.x0);
  escaped = orbit.escaped;
  return export_series(orbit);
}

Dataset sweep_dataset(const RunConfig& cfg, std::vector<std::string>& notes) {
  SweepOptions opt;
  opt.mode = cfg.sweep_mode;
  opt.transient = cfg.transient;
  opt.n_samples = cfg.samples;
  opt.threads = cfg.threads;
  const SweepResult res = cfg.param == "s"
                              ? sweep_step_size(cfg.params, order_of(cfg), cfg.s_min, cfg.s_max, cfg.n_points, cfg.x0, opt)
                              : sweep_order(cfg.params, *cfg.s, cfg.m_min, cfg.m_max, cfg.n_points, cfg.x0, opt);
  Dataset out;
  out.header = {"param", "x", "y"};
  for (const SweepPoint& pt : res.points) {
    if (pt.escaped) notes.push_back("orbit escaped at " + res.parameter_name + " = " + num(pt.value));
    for (const State& s : pt.samples) out.rows.push_back({pt.value, s.x, s.y});
  }
  for (const BifurcationEvent& e : res.events) {
    notes.push_back(to_string(e.kind) + " of " + to_string(e.fixed_point) + " at c = " + num(e.c) +
                    (std::isnan(e.s) ? std::string() : ", s = " + num(e.s)));
  }
  return out;
}

Dataset region_dataset(const RunConfig& cfg, std::vector<std::string>& notes) {
  std::vector<double> grid;
  for (std::size_t i = 0; i < cfg.c_points; ++i) {
    grid.push_back(cfg.c_points == 1 ? cfg.c_min
                                     : cfg.c_min + (cfg.c_max - cfg.c_min) * static_cast<double>(i) /
                                                       static_cast<double>(cfg.c_points - 1));
  }
  const StabilityRegion region = stability_region_cm(cfg.params, grid, cfg.tolerance);
  Dataset out;
  out.header = {"c", "m_star"};
  for (const RegionPoint& pt : region.boundary) out.rows.push_back({pt.c, pt.m_star});
  for (const RegionSkip& s : region.skipped) notes.push_back("skipped c = " + num(s.c) + ": " + s.reason);
  return out;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    std::vector<std::string> notes;
    int code = exit_ok;
    switch (cfg.mode) {
      case Mode::equilibria:
        return emit(cfg, report_text(equilibria_report(cfg)), out, err);
      case Mode::stability:
        return emit(cfg, report_text(stability_report(cfg)), out, err);
      case Mode::thresholds:
        return emit(cfg, report_text(thresholds_report(cfg)), out, err);
      case Mode::normal_form:
        return emit(cfg, report_text(normal_form_report(cfg)), out, err);
      case Mode::simulate:
        return emit_dataset(cfg, simulate_dataset(cfg), out, err);
      case Mode::discrete: {
        bool escaped = false;
        const Dataset data = discrete_dataset(cfg, escaped);
        code = emit_dataset(cfg, data, out, err);
        if (code == exit_ok && escaped) {
          err << "error: orbit escaped after " << data.rows.size() - 1 << " iterations\n";
          return exit_numerical;
        }
        return code;
      }
      case Mode::sweep:
        code = emit_dataset(cfg, sweep_dataset(cfg, notes), out, err);
        break;
      case Mode::region:
        code = emit_dataset(cfg, region_dataset(cfg, notes), out, err);
        break;
      case Mode::reproduce:
        return run_reproduce(cfg, out, err);
    }
    for (const auto& n : notes) err << "note: " << n << '\n';
    return code;
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << '\n';
    return exit_numerical;
  } catch (const NonConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return exit_numerical;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return exit_config_error;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return exit_config_error;
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fractional-order predator-prey model with habitat complexity: continuous and discrete analysis"};
  // "-h" would collide with the handling-time key "--h".
  app.set_help_flag("--help", "print this help and exit");
  app.name(argc > 0 ? argv[0] : "fracdyn");
  std::string command;
  std::string config_path;
  std::map<std::string, std::string> flag_values;
  app.add_option("command", command,
                 "simulate | equilibria | stability | thresholds | discrete | normal-form | sweep | region | reproduce");
  app.add_option("--config", config_path, "key = value configuration file");
  for (const std::string& key : known_keys()) {
    app.add_option("--" + key, flag_values[key], "override config key '" + key + "'");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return exit_config_error;
  }

  try {
    std::optional<Mode> mode;
    if (!command.empty()) {
      mode = parse_mode(command);
      if (!mode) {
        err << "error: unknown command '" << command << "'\n";
        return exit_config_error;
      }
    }
    std::vector<ConfigEntry> file_entries;
    if (!config_path.empty()) {
      std::ifstream in(config_path, std::ios::binary);
      if (!in) {
        err << "error: cannot read config file '" << config_path << "'\n";
        return exit_config_error;
      }
      std::ostringstream text;
      text << in.rdbuf();
      file_entries = parse_config_entries(text.str(), config_path);
    }
    std::vector<ConfigEntry> flag_entries;
    for (const std::string& key : known_keys()) {
      if (app.count("--" + key) > 0) flag_entries.push_back({key, flag_values[key], "--" + key, ""});
    }
    return run(resolve_config(file_entries, flag_entries, mode), out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return exit_config_error;
  }
}

}  // namespace fracdyn::cli
