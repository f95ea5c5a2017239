#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bbm/errors.hpp"
#include "bbm/experiment_spec.hpp"
#include "bbm/model.hpp"

using namespace bbm;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("bbmwave_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(BBMWAVE_EXE) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string read_file(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Rows of a numeric CSV with a one-line header.
std::vector<std::vector<double>> read_csv(const fs::path& p) {
  std::ifstream f(p);
  std::string line;
  std::getline(f, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(f, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

const char* kRunBase =
    "kind = run\n"
    "nx = 8\nny = 8\n"
    "dt = 0.01\nT = 0.1\n"
    "bathymetry = gaussian\n";

}  // namespace

TEST(Spec, RoundTrip) {
  ExperimentSpec s;
  s.kind = "shoal";
  s.r = 3;
  s.p = 4;
  s.levels = 3;
  s.nx = 12;
  s.ny = 5;
  s.domain = {-1.5, 2.25, 0.0, 0.1};
  s.dt = 1.0 / 3.0;
  s.T = 2.5;
  s.gamma = 250.0;
  s.g = 9.81;
  s.variant = "both";
  s.bathymetry = "beach";
  s.depth = 0.44;
  s.beach_toe = 0.1;
  s.beach_slope = 1.0 / 50.0;
  s.beach_end = 1.7;
  s.ic = "solitary";
  s.amplitude = 0.07;
  s.wave_x0 = -0.3;
  s.gauges = {{0.0, 0.5}, {16.25, 0.5}, {1e-3, 0.1}};
  s.log_every = 7;
  s.local_penalty = true;
  s.out = "some/dir";
  std::stringstream ss;
  serialize_spec(s, ss);
  EXPECT_EQ(parse_spec(ss), s);

  for (const ExperimentSpec& d : {convergence_defaults(), shoaling_defaults()}) {
    std::stringstream t;
    serialize_spec(d, t);
    EXPECT_EQ(parse_spec(t), d);
  }
}

TEST(Spec, ParsingRules) {
  std::istringstream ok(std::string("# a comment\n") + kRunBase + "ic = zero   # trailing\n\n");
  const ExperimentSpec s = parse_spec(ok);
  EXPECT_EQ(s.nx, 8);
  EXPECT_EQ(s.bathymetry, "gaussian");

  std::istringstream missing(std::string("kind = run\nnx = 8\nny = 8\ndt = 0.01\nT = 1\nic = zero\n"));
  EXPECT_THROW(parse_spec(missing), ConfigError);
  std::istringstream unknown(std::string(kRunBase) + "ic = zero\ncolour = blue\n");
  EXPECT_THROW(parse_spec(unknown), ConfigError);
  std::istringstream bad(std::string(kRunBase) + "ic = zero\ndt = fast\n");
  EXPECT_THROW(parse_spec(bad), ConfigError);
  std::istringstream nokind("nx = 3\n");
  EXPECT_THROW(parse_spec(nokind), ConfigError);

  ExperimentSpec d = convergence_defaults();
  ExperimentSpec wide = d;
  wide.set("degrees", "1,7");
  EXPECT_THROW(wide.validate(), ConfigError);
  EXPECT_THROW(d.set("variant", "half"), ConfigError);
  EXPECT_THROW(d.set("degrees", "2"), ConfigError);
  d.set("degrees", "3,4");
  EXPECT_EQ(d.r, 3);
  EXPECT_EQ(d.p, 4);
}

TEST(Cli, UsageErrors) {
  const fs::path dir = scratch("usage");
  EXPECT_NE(run_cli(""), 0);
  EXPECT_NE(run_cli("run"), 0);
  EXPECT_NE(run_cli("run --config " + (dir / "absent.cfg").string()), 0);
  write_file(dir / "missing.cfg", "kind = run\nnx = 4\nny = 4\ndt = 0.01\nT = 0.1\nic = zero\n");
  EXPECT_EQ(run_cli("run --config " + (dir / "missing.cfg").string()), 2);
  EXPECT_EQ(run_cli("converge --degrees 2,9"), 2);
}

TEST(Cli, ZeroInitialDataGivesConstantLogs) {
  const fs::path dir = scratch("zero");
  write_file(dir / "zero.cfg", std::string(kRunBase) + "ic = zero\nlog_every = 1\ngauges = 0.5,0.5; 0,0\nout = " +
                                   (dir / "out").string() + "\n");
  ASSERT_EQ(run_cli("run --config " + (dir / "zero.cfg").string()), 0);
  const auto cons = read_csv(dir / "out" / "conservation.csv");
  ASSERT_EQ(cons.size(), 11u);
  for (const auto& row : cons) {
    EXPECT_EQ(row[1], 0.0);
    EXPECT_EQ(row[2], 0.0);
  }
  const auto gauges = read_csv(dir / "out" / "gauges.csv");
  ASSERT_EQ(gauges.size(), 11u);
  for (const auto& row : gauges) {
    EXPECT_EQ(row[1], 0.0);
    EXPECT_EQ(row[2], 0.0);
  }
  EXPECT_EQ(read_file(dir / "out" / "gauges.csv").substr(0, 17), "t,gauge1,gauge2\n0");
}

TEST(Cli, StateDumpLayout) {
  const fs::path dir = scratch("dump");
  write_file(dir / "s.cfg", "kind = run\nnx = 2\nny = 1\ndt = 0.01\nT = 0.01\nbathymetry = flat\nic = zero\nout = " +
                                (dir / "out").string() + "\n");
  ASSERT_EQ(run_cli("run --config " + (dir / "s.cfg").string()), 0);
  std::ifstream f(dir / "out" / "final_state.txt");
  std::string magic, word;
  int version = 0, n = 0, deg = 0;
  double t = 0.0;
  f >> magic >> version >> word >> t;
  EXPECT_EQ(magic, "bbmwave-state");
  EXPECT_EQ(version, 1);
  EXPECT_EQ(word, "t");
  EXPECT_DOUBLE_EQ(t, 0.01);
  int nc = 0;
  f >> word >> n;
  EXPECT_EQ(word, "vertices");
  EXPECT_EQ(n, 6);
  f >> word >> nc;
  EXPECT_EQ(word, "cells");
  EXPECT_EQ(nc, 4);
  for (int i = 0; i < 2 * n; ++i) f >> t;
  for (int i = 0; i < 3 * nc; ++i) f >> deg;
  f >> word >> deg >> n;
  EXPECT_EQ(word, "eta");
  EXPECT_EQ(deg, 1);
  EXPECT_EQ(n, 6);
  for (int i = 0; i < n; ++i) f >> t;
  f >> word >> deg >> n;
  EXPECT_EQ(word, "u");
  EXPECT_EQ(deg, 2);
  EXPECT_EQ(n, 2 * 15);
}

TEST(Cli, SingleLevelReportHasEmptyRates) {
  const fs::path dir = scratch("converge1");
  ASSERT_EQ(run_cli("converge --levels 1 --T 0.01 --dt 5e-3 --out " + (dir / "out").string()), 0);
  std::ifstream f(dir / "out" / "errors.csv");
  std::string header, row;
  std::getline(f, header);
  std::getline(f, row);
  EXPECT_EQ(header, "h,err_L2_eta,rate,err_H1_eta,rate,err_L2_u,rate,err_div_u,rate,err_H1_u,rate,trace_u_n");
  std::vector<std::string> cells;
  std::stringstream ss(row);
  std::string c;
  while (std::getline(ss, c, ',')) cells.push_back(c);
  ASSERT_GE(cells.size(), 11u);
  EXPECT_EQ(cells[0], "0.125");
  for (int i : {2, 4, 6, 8, 10}) EXPECT_TRUE(cells[i].empty()) << i;
}

TEST(Cli, ShoalWritesBothVariants) {
  const fs::path dir = scratch("shoal");
  ASSERT_EQ(run_cli("shoal --nx 70 --ny 1 --T 0.02 --dt 0.01 --variant both --out " + dir.string()), 0);
  for (const char* f : {"gauges_full.csv", "gauges_simplified.csv", "conservation_full.csv",
                        "conservation_simplified.csv"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  EXPECT_EQ(read_file(dir / "gauges_full.csv").substr(0, 23), "t,gauge1,gauge2,gauge3\n");
}

TEST(Cli, BitwiseReproducible) {
  const fs::path dir = scratch("replay");
  const std::string cfg = "kind = run\nnx = 40\nny = 1\ndomain = -10,10,0,1\ndt = 0.01\nT = 0.3\n"
                          "bathymetry = flat\ndepth = 0.5\nic = solitary\namplitude = 0.05\ngauges = 1,0.5\n";
  write_file(dir / "a.cfg", cfg + "out = " + (dir / "a").string() + "\n");
  write_file(dir / "b.cfg", cfg + "out = " + (dir / "b").string() + "\n");
  ASSERT_EQ(run_cli("run --config " + (dir / "a.cfg").string()), 0);
  ASSERT_EQ(run_cli("run --config " + (dir / "b.cfg").string()), 0);
  for (const char* f : {"gauges.csv", "conservation.csv", "final_state.txt"}) {
    EXPECT_EQ(read_file(dir / "a" / f), read_file(dir / "b" / f)) << f;
  }
}

// A solitary wave on a flat bottom travels at the predicted speed and keeps its height.
TEST(Cli, SolitaryWaveTranslates) {
  const fs::path dir = scratch("solitary");
  write_file(dir / "s.cfg",
             "kind = run\nnx = 400\nny = 2\ndomain = -10,30,0,1\ndt = 5e-3\nT = 10\ng = 9.81\n"
             "bathymetry = flat\ndepth = 0.44\nic = solitary\namplitude = 0.07\nwave_x0 = -5\n"
             "gauges = 0,0.5; 5,0.5; 10,0.5; 15,0.5\nout = " +
                 (dir / "out").string() + "\n");
  ASSERT_EQ(run_cli("run --config " + (dir / "s.cfg").string()), 0);
  const auto rows = read_csv(dir / "out" / "gauges.csv");
  const SolitaryWave wave{0.07, 0.44, -5.0, 9.81};
  std::vector<double> arrival;
  for (int g = 1; g <= 4; ++g) {
    size_t k = 0;
    for (size_t i = 1; i < rows.size(); ++i) {
      if (rows[i][g] > rows[k][g]) k = i;
    }
    ASSERT_GT(k, 0u);
    ASSERT_LT(k + 1, rows.size());
    // parabola through the three samples around the maximum
    const double t0 = rows[k][0], dt = rows[k + 1][0] - t0;
    const double ym = rows[k - 1][g], y0 = rows[k][g], yp = rows[k + 1][g];
    const double a = 0.5 * (yp + ym) - y0, b = 0.5 * (yp - ym);
    const double s = -b / (2 * a);
    arrival.push_back(t0 + s * dt);
    const double peak = y0 + b * s + a * s * s;
    EXPECT_NEAR(peak, 0.07, 0.02 * 0.07) << "gauge " << g;
  }
  // least-squares speed over the four gauges at x = 0, 5, 10, 15
  double mt = 0, mx = 7.5;
  for (double t : arrival) mt += t / 4;
  double sxt = 0, stt = 0;
  for (int i = 0; i < 4; ++i) {
    sxt += (5.0 * i - mx) * (arrival[i] - mt);
    stt += (arrival[i] - mt) * (arrival[i] - mt);
  }
  EXPECT_NEAR(sxt / stt, wave.speed(), 0.02 * wave.speed());
}
