#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fracdyn/cli/config.hpp"
#include "fracdyn/cli/run.hpp"
#include "fracdyn/dataset.hpp"
#include "fracdyn/discrete_map.hpp"

using namespace fracdyn;
using namespace fracdyn::cli;

namespace fs = std::filesystem;

namespace {

const char* const example1 =
    "# reference habitat-complexity parameters\n"
    "r = 2.65\n"
    "K = 898\n"
    "alpha = 0.045\n"
    "h = 0.0437\n"
    "theta = 0.215\n"
    "c = 0.86\n"
    "d = 1.06\n";

struct Outcome {
  int status = 0;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "fracdyn");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int status = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "fracdyn_test_cli";
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const std::string& name, const std::string& text) {
  const fs::path path = scratch_dir() / name;
  std::ofstream(path) << text;
  return path;
}

std::string read_file(const fs::path& path) {
  std::ifstream is(path);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

ConfigErrorKind error_kind(const std::string& text) {
  try {
    (void)parse_config(text);
  } catch (const ConfigError& e) {
    return e.kind();
  }
  FAIL("expected ConfigError");
  return ConfigErrorKind::syntax;
}

std::string report_value(const std::string& csv, const std::string& name) {
  std::istringstream is(csv);
  std::string line;
  while (std::getline(is, line)) {
    if (line.rfind(name + ",", 0) == 0) return line.substr(name.size() + 1);
  }
  return {};
}

}  // namespace

TEST_CASE("a parameter file with mode and order parses") {
  const RunConfig cfg = parse_config(std::string(example1) + "mode = stability\nm = 0.95\n");
  CHECK(cfg.mode == Mode::stability);
  CHECK(cfg.m == 0.95);
  CHECK(cfg.params.K == 898.0);
  CHECK(cfg.params.c == 0.86);
}

TEST_CASE("an out-of-range order names its constraint") {
  try {
    (void)parse_config(std::string(example1) + "mode = stability\nm = 1.5\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.kind() == ConfigErrorKind::out_of_range);
    CHECK(e.key() == "m");
    const std::string msg = e.what();
    CHECK(msg.find("0 < m <= 1") != std::string::npos);
    CHECK(msg.find("config:10") != std::string::npos);
  }
}

TEST_CASE("configuration errors are distinguished") {
  CHECK(error_kind(std::string(example1) + "mode = thresholds\nthis line is wrong\n") == ConfigErrorKind::syntax);
  CHECK(error_kind(std::string(example1) + "mode = thresholds\nspeed = 3\n") == ConfigErrorKind::unknown_key);
  CHECK(error_kind(std::string(example1) + "mode = thresholds\nc = 1.2\n") == ConfigErrorKind::out_of_range);
  CHECK(error_kind("mode = thresholds\nr = 2.65\n") == ConfigErrorKind::missing_key);
  CHECK(error_kind(std::string(example1) + "mode = stability\n") == ConfigErrorKind::missing_key);
  CHECK(error_kind(std::string(example1) + "mode = flying\n") == ConfigErrorKind::out_of_range);
  CHECK(error_kind(std::string(example1) + "mode = thresholds\nK = abc\n") == ConfigErrorKind::syntax);
}

TEST_CASE("sections apply only to their mode and flags override the file") {
  const std::string text = std::string(example1) +
                           "[discrete]\n"
                           "s = 0.3\n"
                           "m = 0.9\n"
                           "[simulate]\n"
                           "m = 0.7\n";
  const auto file = parse_config_entries(text, "run.cfg");
  const RunConfig sim = resolve_config(file, {}, Mode::simulate);
  CHECK(sim.m == 0.7);
  CHECK_FALSE(sim.s);
  const RunConfig disc = resolve_config(file, {{"c", "0.45", "--c", ""}}, Mode::discrete);
  CHECK(disc.m == 0.9);
  CHECK(disc.s == 0.3);
  CHECK(disc.params.c == 0.45);
}

TEST_CASE("the reference preset seeds the model parameters") {
  const RunConfig cfg = parse_config("preset = reference\nmode = thresholds\nc = 0.45\n");
  CHECK(cfg.params.r == 2.65);
  CHECK(cfg.params.theta == 0.215);
  CHECK(cfg.params.c == 0.45);
}

TEST_CASE("thresholds report matches the library exactly") {
  const fs::path path = write_file("ex1.cfg", example1);
  const Outcome res = invoke({"thresholds", "--config", path.string()});
  REQUIRE(res.status == 0);
  const Thresholds t = thresholds(ModelParams::reference(0.86));
  CHECK(report_value(res.out, "c1") == format_number(*t.c1));
  CHECK(report_value(res.out, "theta1") == format_number(*t.theta1));
  CHECK(report_value(res.out, "c2") == format_number(*t.c2));
  CHECK(report_value(res.out, "theta2") == format_number(*t.theta2));
  CHECK(report_value(res.out, "s4") == "");

  const Outcome with_m = invoke({"thresholds", "--config", path.string(), "--m", "0.95"});
  REQUIRE(with_m.status == 0);
  CHECK(report_value(with_m.out, "s2") == format_number(*step_thresholds(ModelParams::reference(0.86), FractionalOrder(0.95)).s2));
  CHECK(report_value(with_m.out, "s4") == "undefined");
}

TEST_CASE("stability and equilibria reports") {
  const Outcome st = invoke({"stability", "--preset", "reference", "--c", "0.05", "--m", "0.95"});
  REQUIRE(st.status == 0);
  CHECK(std::fabs(std::stod(report_value(st.out, "m_star")) - 0.9898) < 5e-4);
  CHECK(report_value(st.out, "Estar_class") == "stable");
  const Outcome eq = invoke({"equilibria", "--preset", "reference"});
  REQUIRE(eq.status == 0);
  CHECK(report_value(eq.out, "Estar_exists") == "false");
}

TEST_CASE("simulate with a single step emits two rows") {
  const Outcome res = invoke({"simulate", "--preset", "reference", "--m", "0.9", "--horizon", "0.05", "--step", "0.05"});
  REQUIRE(res.status == 0);
  const Dataset data = parse_csv(res.out);
  CHECK(data.header == std::vector<std::string>{"t", "x", "y"});
  CHECK(data.rows.size() == 2);
  CHECK(data.rows[0] == std::vector<double>{0.0, 10.0, 5.0});
}

TEST_CASE("normal-form mode reports a negative gamma") {
  const Outcome res = invoke({"normal-form", "--preset", "reference", "--c", "0.45", "--m", "0.95"});
  REQUIRE(res.status == 0);
  CHECK(std::stod(report_value(res.out, "gamma")) < 0.0);
  CHECK(report_value(res.out, "nonresonance_ok") == "true");
}

TEST_CASE("sweep and region modes emit datasets") {
  const Outcome sw = invoke({"sweep", "--preset", "reference", "--c", "0.45", "--m", "0.95", "--n_points", "3",
                              "--samples", "5", "--transient", "100", "--s_min", "0.1", "--s_max", "0.3"});
  REQUIRE(sw.status == 0);
  const Dataset data = parse_csv(sw.out);
  CHECK(data.header == std::vector<std::string>{"param", "x", "y"});
  CHECK(data.rows.size() == 15);

  const Outcome rg = invoke({"region", "--preset", "reference", "--c_min", "0.05", "--c_max", "0.05", "--c_points", "1"});
  REQUIRE(rg.status == 0);
  const Dataset region = parse_csv(rg.out);
  REQUIRE(region.rows.size() == 1);
  CHECK(std::fabs(region.rows[0][1] - 0.9898) < 5e-4);
}

TEST_CASE("exit codes follow the error taxonomy") {
  CHECK(invoke({"stability", "--preset", "reference"}).status == 2);
  CHECK(invoke({"stability", "--preset", "reference", "--m", "1.5"}).status == 2);
  CHECK(invoke({"--bogus", "1"}).status == 2);
  CHECK(invoke({"normal-form", "--preset", "reference", "--m", "0.95"}).status == 2);
  const Outcome numerical = invoke({"discrete", "--preset", "reference", "--c", "0.45", "--m", "1", "--s", "3",
                                    "--iterations", "500", "--transient", "0"});
  CHECK(numerical.status == 3);
  const Outcome unwritable = invoke({"thresholds", "--preset", "reference", "--output", "/nonexistent/dir/out.csv"});
  CHECK(unwritable.status == 4);
  CHECK_FALSE(unwritable.err.empty());
  CHECK(invoke({"--help"}).status == 0);
}

TEST_CASE("identical configurations produce identical files") {
  const fs::path a = scratch_dir() / "a.csv";
  const fs::path b = scratch_dir() / "b.csv";
  for (const fs::path& path : {a, b}) {
    const Outcome res = invoke({"discrete", "--preset", "reference", "--c", "0.45", "--m", "0.95", "--s", "0.25",
                                "--iterations", "300", "--transient", "0", "--output", path.string()});
    REQUIRE(res.status == 0);
  }
  CHECK(read_file(a) == read_file(b));
  CHECK_FALSE(read_file(a).empty());
}

TEST_CASE("installed tool runs end to end") {
  const fs::path out = scratch_dir() / "tool_thresholds.csv";
  const std::string cmd = std::string("\"") + FRACDYN_TOOL_PATH + "\" thresholds --preset reference --output \"" +
                          out.string() + "\"";
  CHECK(std::system(cmd.c_str()) == 0);
  CHECK(report_value(read_file(out), "c1") == format_number(*thresholds(ModelParams::reference()).c1));
  const std::string bad = std::string("\"") + FRACDYN_TOOL_PATH + "\" stability --preset reference 2>/dev/null";
  const int status = std::system(bad.c_str());
  CHECK(WEXITSTATUS(status) == 2);
}

TEST_CASE("reproduce writes a fresh directory with a summary") {
  const fs::path root = scratch_dir() / "reproduce";
  fs::remove_all(root);
  const Outcome res = invoke({"reproduce", "--output", root.string()});
  REQUIRE(res.status == 0);
  std::vector<fs::path> runs;
  for (const auto& entry : fs::directory_iterator(root)) runs.push_back(entry.path());
  REQUIRE(runs.size() == 1);
  std::istringstream summary(read_file(runs[0] / "summary.csv"));
  std::string header;
  std::getline(summary, header);
  CHECK(header == "quantity,expected,computed,abs_diff,tolerance,tolerance_kind,status");
  std::size_t rows = 0;
  for (std::string line; std::getline(summary, line);) ++rows;
  CHECK(rows >= 30);
  CHECK(fs::exists(runs[0] / "sweep_s_c0.45.csv"));
  CHECK(fs::exists(runs[0] / "region_c_m.csv"));
  CHECK(invoke({"reproduce", "--output", "/proc/forbidden"}).status == 4);
}
