#include "fracdyn/cli/reproduce.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <system_error>

#include "fracdyn/bifurcation.hpp"
#include "fracdyn/cli/run.hpp"
#include "fracdyn/dataset.hpp"
#include "fracdyn/discrete_map.hpp"
#include "fracdyn/pece.hpp"
#include "fracdyn/stability.hpp"

namespace fracdyn::cli {

namespace fs = std::filesystem;

bool SummaryRow::ok() const noexcept {
  const double diff = std::fabs(computed - expected);
  return std::isfinite(computed) && diff <= (relative ? tolerance * std::fabs(expected) : tolerance);
}

std::vector<SummaryRow> reproduction_summary() {
  std::vector<SummaryRow> rows;
  auto abs_row = [&](std::string q, double expected, double computed, double tol) {
    rows.push_back({std::move(q), expected, computed, tol, false});
  };
  auto rel_row = [&](std::string q, double expected, double computed, double tol) {
    rows.push_back({std::move(q), expected, computed, tol, true});
  };

  const ModelParams e1_set = ModelParams::reference(0.86);
  const ModelParams star_set = ModelParams::reference(0.45);
  const ModelParams hopf_set = ModelParams::reference(0.05);

  const Thresholds t = thresholds(e1_set);
  abs_row("c1", 0.8445, *t.c1, 5e-4);
  abs_row("theta1", 0.0726, *t.theta1, 5e-4);
  abs_row("c2", 0.1227, *t.c2, 5e-4);
  abs_row("theta2", 0.1673, *t.theta2, 5e-4);

  const Equilibrium star = interior_equilibrium(star_set);
  abs_row("Estar_x(c=0.45)", 253.9056, star.point.x, 1e-3);
  abs_row("Estar_y(c=0.45)", 97.8867, star.point.y, 1e-3);

  const Jacobian2 j45 = equilibrium_jacobian(star_set, star);
  abs_row("trace_Estar(c=0.45)", -0.3398, j45.trace(), 1e-3);
  const CriticalOrder co = critical_order(hopf_set);
  abs_row("trace_Estar(c=0.05)", 0.0437, co.trace, 1e-3);
  abs_row("2sqrt_det_Estar(c=0.05)", 2.7152, 2.0 * std::sqrt(co.det), 1e-3);
  abs_row("m_star(c=0.05)", 0.9898, co.m_star.value_or(std::nan("")), 5e-4);

  struct TableRow {
    double m, s2, s3, s4, s5;
  };
  const TableRow table[] = {{0.3, 0.2729, 26269.0, 0.0041, 256.7923},
                            {0.4, 0.3669, 2005.2, 0.0159, 62.3401},
                            {0.6, 0.5186, 160.8894, 0.0639, 15.9072},
                            {0.8, 0.6436, 47.5805, 0.1339, 8.3894},
                            {0.95, 0.7279, 27.2757, 0.1940, 6.3253}};
  for (const TableRow& row : table) {
    const FractionalOrder m(row.m);
    const StepThresholds a = step_thresholds(e1_set, m);
    const StepThresholds b = step_thresholds(star_set, m);
    const std::string tag = "(m=" + format_number(row.m) + ")";
    rel_row("s2" + tag, row.s2, a.s2.value_or(std::nan("")), 5e-3);
    rel_row("s3" + tag, row.s3, a.s3.value_or(std::nan("")), 5e-3);
    rel_row("s4" + tag, row.s4, b.s4.value_or(std::nan("")), 5e-3);
    rel_row("s5" + tag, row.s5, b.s5.value_or(std::nan("")), 5e-3);
  }

  const NormalFormData nf = hopf_normal_form(star_set, FractionalOrder(0.95));
  abs_row("lambda_re", 0.9635, nf.lambda[0].real(), 1e-3);
  abs_row("lambda_im", 0.2678, nf.lambda[0].imag(), 1e-3);
  abs_row("lambda_modulus", 1.0, std::abs(nf.lambda[0]), 1e-8);
  abs_row("transversality", 0.1699, nf.transversality, 1e-3);
  rel_row("gamma", -1.9961e-8, nf.gamma, 0.1);

  const ModelParams at_c1 = e1_set.with_c(*t.c1);
  const FractionalOrder m95(0.95);
  const double s5 = *step_thresholds(at_c1, m95).s5;
  abs_row("flip_s5", 0.7279, s5, 5e-3);
  const Equilibrium e1{.kind = EquilibriumKind::predator_free, .point = State{at_c1.K, 0.0}, .exists = true};
  const EigenPair flip = discrete_jacobian(at_c1, s5, m95, e1).eigenvalues();
  abs_row("flip_eig_low", -1.0, std::min(flip[0].real(), flip[1].real()), 1e-6);
  abs_row("flip_eig_high", 1.0, std::max(flip[0].real(), flip[1].real()), 1e-6);
  return rows;
}

namespace {

bool save(const fs::path& path, const Dataset& data) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) return false;
  write_csv(os, data);
  return static_cast<bool>(os);
}

Dataset trajectory(const ModelParams& p, double m, double horizon) {
  SolverConfig sc;
  sc.step = 0.05;
  sc.horizon = horizon;
  return export_series(pece_solve(
      [p](State s) {
        const Rates f = rhs(p, s);
        return State{f.dx, f.dy};
      },
      State{10.0, 5.0}, FractionalOrder(m), sc));
}

Dataset orbit(const ModelParams& p, double m, double s, std::size_t n, SeriesFormat format) {
  const DiscreteConfig dc{.s = s, .m = FractionalOrder(m), .iterations = n, .transient = 0};
  return export_series(iterate_orbit(p, dc, State{10.0, 5.0}), format);
}

Dataset sweep_rows(const SweepResult& res) {
  Dataset out;
  out.header = {"param", "x", "y"};
  for (const SweepPoint& pt : res.points) {
    for (const State& s : pt.samples) out.rows.push_back({pt.value, s.x, s.y});
  }
  return out;
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y%m%dT%H%M%SZ");
  return os.str();
}

}  // namespace

int run_reproduce(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const fs::path root = cfg.output.empty() ? fs::path("reproduce") : fs::path(cfg.output);
  fs::path dir = root / ("run-" + timestamp());
  for (int k = 2; fs::exists(dir); ++k) dir = root / ("run-" + timestamp() + "-" + std::to_string(k));
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    err << "error: cannot create output directory '" << dir.string() << "': " << ec.message() << '\n';
    return exit_output;
  }

  const ModelParams e1_set = ModelParams::reference(0.86);
  const ModelParams star_set = ModelParams::reference(0.45);
  const ModelParams hopf_set = ModelParams::reference(0.05);

  std::vector<std::pair<std::string, Dataset>> files;
  for (double m : {0.75, 0.85, 0.95, 1.0}) {
    files.emplace_back("ex1_trajectory_m" + format_number(m) + ".csv", trajectory(e1_set, m, 100.0));
    files.emplace_back("ex2_trajectory_c0.45_m" + format_number(m) + ".csv", trajectory(star_set, m, 100.0));
  }
  files.emplace_back("ex2_trajectory_c0.05_m0.95.csv", trajectory(hopf_set, 0.95, 300.0));
  files.emplace_back("ex2_trajectory_c0.05_m0.995.csv", trajectory(hopf_set, 0.995, 300.0));

  std::vector<double> c_grid;
  for (int i = 1; i <= 24; ++i) c_grid.push_back(0.005 * i);
  const StabilityRegion region = stability_region_cm(e1_set, c_grid, 1e-3);
  Dataset region_rows{{"c", "m_star"}, {}};
  for (const RegionPoint& pt : region.boundary) region_rows.rows.push_back({pt.c, pt.m_star});
  files.emplace_back("region_c_m.csv", region_rows);

  files.emplace_back("map_E1_s0.68.csv", orbit(e1_set, 0.95, 0.68, 10000, SeriesFormat::time_series));
  files.emplace_back("map_E1_s0.8.csv", orbit(e1_set, 0.95, 0.8, 10000, SeriesFormat::time_series));
  files.emplace_back("map_Estar_s0.12.csv", orbit(star_set, 0.95, 0.12, 10000, SeriesFormat::time_series));
  files.emplace_back("map_Estar_s0.22.csv", orbit(star_set, 0.95, 0.22, 10000, SeriesFormat::time_series));

  SweepOptions opt;
  opt.mode = SweepMode::fixed_initial;
  opt.transient = 20000;
  opt.n_samples = 200;
  files.emplace_back("sweep_s_c0.45.csv",
                     sweep_rows(sweep_step_size(star_set, FractionalOrder(0.95), 0.1, 0.6, 101, State{10, 5}, opt)));
  files.emplace_back("sweep_s_flip_c1.csv",
                     sweep_rows(sweep_step_size(e1_set.with_c(*thresholds(e1_set).c1 + 1e-3), FractionalOrder(0.95),
                                                0.6, 0.9, 61, State{10, 5}, opt)));

  for (double s : {0.15, 0.25, 0.5}) {
    const DiscreteConfig dc{.s = s, .m = FractionalOrder(0.95), .iterations = 6000, .transient = 5000};
    DiscreteOrbit o = iterate_orbit(star_set, dc, State{10.0, 5.0});
    if (o.states.size() > dc.transient) o.states.erase(o.states.begin(), o.states.begin() + dc.transient);
    files.emplace_back("phase_Estar_s" + format_number(s) + ".csv", export_series(o, SeriesFormat::phase));
  }

  for (const auto& [name, data] : files) {
    if (!save(dir / name, data)) {
      err << "error: cannot write '" << (dir / name).string() << "'\n";
      return exit_output;
    }
  }

  const std::vector<SummaryRow> summary = reproduction_summary();
  std::ofstream os(dir / "summary.csv", std::ios::binary | std::ios::trunc);
  if (!os) {
    err << "error: cannot write summary in '" << dir.string() << "'\n";
    return exit_output;
  }
  os << "quantity,expected,computed,abs_diff,tolerance,tolerance_kind,status\n";
  std::size_t failed = 0;
  for (const SummaryRow& r : summary) {
    failed += r.ok() ? 0 : 1;
    os << r.quantity << ',' << format_number(r.expected) << ',' << format_number(r.computed) << ','
       << format_number(std::fabs(r.computed - r.expected)) << ',' << format_number(r.tolerance) << ','
       << (r.relative ? "relative" : "absolute") << ',' << (r.ok() ? "ok" : "MISMATCH") << '\n';
  }
  out << "wrote " << files.size() + 1 << " files to " << dir.string() << '\n';
  out << summary.size() - failed << " of " << summary.size() << " reference values within tolerance\n";
  for (const SummaryRow& r : summary) {
    if (!r.ok()) {
      out << "  mismatch: " << r.quantity << " expected " << format_number(r.expected) << " computed "
          << format_number(r.computed) << '\n';
    }
  }
  return exit_ok;
}

}  // namespace fracdyn::cli
