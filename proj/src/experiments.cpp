#include "bbm/experiments.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "bbm/errors.hpp"

namespace bbm {

namespace {

Bathymetry spec_bathymetry(const ExperimentSpec& s) {
  if (s.bathymetry == "gaussian") return gaussian_dip();
  if (s.bathymetry == "beach") return plane_beach(s.depth, s.beach_toe, s.beach_slope, s.beach_end);
  return flat_bottom(s.depth);
}

std::unique_ptr<std::ofstream> open_out(const ExperimentSpec& s, const std::string& name) {
  if (s.out.empty()) return nullptr;
  std::filesystem::create_directories(s.out);
  auto f = std::make_unique<std::ofstream>(std::filesystem::path(s.out) / name);
  if (!*f) throw ConfigError("cannot write " + (std::filesystem::path(s.out) / name).string());
  return f;
}

std::vector<Vec2> spec_gauges(const ExperimentSpec& s) {
  std::vector<Vec2> g;
  for (const auto& p : s.gauges) g.emplace_back(p[0], p[1]);
  return g;
}

}  // namespace

Rectangle spec_domain(const ExperimentSpec& s) { return {s.domain[0], s.domain[1], s.domain[2], s.domain[3]}; }

ModelConfig model_config(const ExperimentSpec& s, Variant variant) {
  ModelConfig c;
  c.variant = variant;
  c.g = s.g;
  c.bathymetry = spec_bathymetry(s);
  c.gamma = s.gamma;
  c.reference_depth = s.depth;
  c.local_penalty_h = s.local_penalty;
  c.manufactured = s.ic == "manufactured";
  c.eta_degree = s.r - 1;
  c.u_degree = s.p - 1;
  return c;
}

ErrorRow convergence_level(const ExperimentSpec& spec, int N) {
  auto mesh = std::make_shared<const Mesh>(structured_rect_mesh(N, N, spec_domain(spec)));
  ExperimentSpec s = spec;
  s.ic = "manufactured";
  const BbmModel model(mesh, model_config(s, Variant::Full));
  const ManufacturedSolution& ms = *model.manufactured();
  State init;
  init.eta = elliptic_project_scalar(ms.eta_at(0.0), model);
  init.u = elliptic_project_vector(ms.u_at(0.0), model);
  init.t = 0.0;
  RunConfig rc;
  rc.dt = spec.dt;
  rc.t_final = spec.T;
  rc.log_every = spec.log_every;
  const RunResult r = run(model, init, rc);
  return error_norms(r.final_state, ms, (spec.domain[1] - spec.domain[0]) / N);
}

ConvergenceResult run_convergence(const ExperimentSpec& spec, std::ostream* log) {
  spec.validate();
  ConvergenceResult out;
  for (int i = 0; i < spec.levels; ++i) {
    const int N = 8 + 4 * i;
    try {
      out.report.rows.push_back(convergence_level(spec, N));
    } catch (const NumericalError& e) {
      out.ok = false;
      out.error = "level N=" + std::to_string(N) + ": " + e.what();
      if (log) *log << out.error << "\n";
      break;
    }
    if (log) *log << "level N=" << N << " done\n";
    if (auto f = open_out(spec, "errors.csv")) out.report.write_csv(*f);
  }
  for (const ErrorRow& row : out.report.rows) {
    const double v[] = {row.l2_eta, row.h1_eta, row.l2_u, row.div_u, row.h1_u, row.trace_u_n};
    for (double x : v) {
      if (!std::isfinite(x)) out.ok = false;
    }
  }
  if (log) out.report.write_table(*log);
  return out;
}

std::vector<ShoalingRun> run_shoaling(const ExperimentSpec& spec, std::ostream* log) {
  spec.validate();
  std::vector<std::pair<std::string, Variant>> variants;
  if (spec.variant != "simplified") variants.emplace_back("full", Variant::Full);
  if (spec.variant != "full") variants.emplace_back("simplified", Variant::Simplified);

  auto mesh = std::make_shared<const Mesh>(structured_rect_mesh(spec.nx, spec.ny, spec_domain(spec)));
  std::vector<ShoalingRun> runs;
  for (const auto& [name, variant] : variants) {
    const BbmModel model(mesh, model_config(spec, variant));
    const State init = solitary_wave_ic(model, spec.amplitude, spec.depth, spec.wave_x0);
    auto gauge_file = open_out(spec, "gauges_" + name + ".csv");
    auto cons_file = open_out(spec, "conservation_" + name + ".csv");
    RunConfig rc;
    rc.dt = spec.dt;
    rc.t_final = spec.T;
    rc.gauge_points = spec_gauges(spec);
    rc.log_every = spec.log_every;
    rc.gauge_sink = gauge_file.get();
    rc.conservation_sink = cons_file.get();
    ShoalingRun sr;
    sr.variant = name;
    sr.result = run(model, init, rc);
    const auto& c = sr.result.conservation;
    sr.initial_mass = c.front().mass;
    sr.initial_energy = c.front().energy;
    for (const auto& rec : c) {
      sr.max_mass_drift = std::max(sr.max_mass_drift, std::abs(rec.mass - sr.initial_mass) / std::abs(sr.initial_mass));
      sr.max_energy_drift =
          std::max(sr.max_energy_drift, std::abs(rec.energy - sr.initial_energy) / std::abs(sr.initial_energy));
    }
    if (log) {
      *log << name << ": steps " << sr.result.steps << ", mass drift " << fmt(sr.max_mass_drift)
           << ", energy drift " << fmt(sr.max_energy_drift) << "\n";
      for (size_t g = 0; g < sr.result.gauges.eta.size(); ++g) {
        const auto& series = sr.result.gauges.eta[g];
        *log << "  gauge" << g + 1 << " peak " << fmt(*std::max_element(series.begin(), series.end())) << "\n";
      }
    }
    runs.push_back(std::move(sr));
  }
  return runs;
}

RunResult run_generic(const ExperimentSpec& spec, std::ostream* log) {
  spec.validate();
  if (spec.variant == "both") throw ConfigError("run: variant must be full or simplified");
  auto mesh = std::make_shared<const Mesh>(structured_rect_mesh(spec.nx, spec.ny, spec_domain(spec)));
  const BbmModel model(mesh, model_config(spec, spec.variant == "full" ? Variant::Full : Variant::Simplified));
  State init = model.zero_state();
  if (spec.ic == "solitary") {
    init = solitary_wave_ic(model, spec.amplitude, spec.depth, spec.wave_x0);
  } else if (spec.ic == "manufactured") {
    const ManufacturedSolution& ms = *model.manufactured();
    init.eta = elliptic_project_scalar(ms.eta_at(0.0), model);
    init.u = elliptic_project_vector(ms.u_at(0.0), model);
  }
  auto gauge_file = open_out(spec, "gauges.csv");
  auto cons_file = open_out(spec, "conservation.csv");
  RunConfig rc;
  rc.dt = spec.dt;
  rc.t_final = spec.T;
  rc.gauge_points = spec_gauges(spec);
  rc.log_every = spec.log_every;
  rc.gauge_sink = gauge_file.get();
  rc.conservation_sink = cons_file.get();
  RunResult r = run(model, init, rc);
  if (auto f = open_out(spec, "final_state.txt")) write_state(*f, r.final_state);
  if (log) {
    *log << "steps " << r.steps << ", t = " << fmt(r.final_state.t) << "\n";
    if (spec.ic == "manufactured") {
      const ErrorRow e = error_norms(r.final_state, *model.manufactured(), mesh->h_max());
      *log << "L2(eta) error " << fmt(e.l2_eta) << ", Hdiv(u) error " << fmt(e.div_u) << "\n";
    }
  }
  return r;
}

void write_state(std::ostream& os, const State& s) {
  os << "bbmwave-state 1\n";
  os << "t " << fmt(s.t) << "\n";
  s.eta.space->mesh().write_text(os);
  os.precision(17);
  os << "eta " << s.eta.space->degree() << " " << s.eta.coeffs.size() << "\n";
  for (double v : s.eta.coeffs) os << v << "\n";
  os << "u " << s.u.space->degree() << " " << s.u.coeffs.size() << "\n";
  for (double v : s.u.coeffs) os << v << "\n";
}

}  // namespace bbm
