// Command-line driver: converge, shoal and run subcommands.
#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "bbm/errors.hpp"
#include "bbm/experiments.hpp"

using namespace bbm;

namespace {

// Applies "--key value" overrides on top of a spec, in the order given.
void override(ExperimentSpec& spec, const std::vector<std::pair<std::string, std::string>>& kv) {
  for (const auto& [k, v] : kv) spec.set(k, v);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite element solver for the BBM-BBM system with variable bathymetry"};
  app.require_subcommand(1);

  std::string config;
  std::vector<std::pair<std::string, std::string>> kv;
  auto opt = [&](CLI::App* sub, const std::string& flag, const std::string& key, const std::string& help) {
    sub->add_option_function<std::string>(flag, [&kv, key](const std::string& v) { kv.emplace_back(key, v); }, help);
  };

  auto* converge = app.add_subcommand("converge", "Manufactured-solution convergence study");
  converge->add_option("--config", config, "Config file (flags override it)");
  opt(converge, "--degrees", "degrees", "Approximation orders r,p (element degrees r-1, p-1)");
  opt(converge, "--levels", "levels", "Number of grids N = 8 + 4 i");
  opt(converge, "--gamma", "gamma", "Nitsche penalty");
  opt(converge, "--dt", "dt", "Time step");
  opt(converge, "--T", "T", "Final time");
  opt(converge, "--g", "g", "Gravity");
  opt(converge, "--out", "out", "Output directory");

  auto* shoal = app.add_subcommand("shoal", "Solitary wave shoaling on a plane beach");
  shoal->add_option("--config", config, "Config file (flags override it)");
  opt(shoal, "--amplitude", "amplitude", "Incident amplitude in metres");
  opt(shoal, "--variant", "variant", "full | simplified | both");
  opt(shoal, "--nx", "nx", "Cells along the channel");
  opt(shoal, "--ny", "ny", "Cells across the channel");
  opt(shoal, "--dt", "dt", "Time step");
  opt(shoal, "--T", "T", "Final time");
  opt(shoal, "--x0", "wave_x0", "Initial crest position");
  opt(shoal, "--depth", "depth", "Offshore still-water depth D0");
  opt(shoal, "--out", "out", "Output directory");

  auto* runcmd = app.add_subcommand("run", "Generic run from a config file");
  runcmd->add_option("--config", config, "Config file")->required();
  opt(runcmd, "--out", "out", "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (converge->parsed()) {
      ExperimentSpec spec = config.empty() ? convergence_defaults() : parse_spec_file(config);
      spec.kind = "converge";
      override(spec, kv);
      const ConvergenceResult r = run_convergence(spec, &std::cout);
      if (!r.ok) {
        std::cerr << "error: " << r.error << "\n";
        return 1;
      }
    } else if (shoal->parsed()) {
      ExperimentSpec spec = config.empty() ? shoaling_defaults() : parse_spec_file(config);
      spec.kind = "shoal";
      override(spec, kv);
      run_shoaling(spec, &std::cout);
    } else {
      ExperimentSpec spec = parse_spec_file(config);
      override(spec, kv);
      if (spec.kind == "converge") {
        const ConvergenceResult r = run_convergence(spec, &std::cout);
        if (!r.ok) {
          std::cerr << "error: " << r.error << "\n";
          return 1;
        }
      } else if (spec.kind == "shoal") {
        run_shoaling(spec, &std::cout);
      } else {
        run_generic(spec, &std::cout);
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const QueryError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
