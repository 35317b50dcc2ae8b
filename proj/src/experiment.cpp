#include "glvortex/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "glvortex/config.hpp"
#include "glvortex/render.hpp"

namespace glvortex {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

const json& section(const json& doc, const char* name) {
  static const json empty = json::object();
  if (!doc.contains(name)) return empty;
  const json& s = doc.at(name);
  if (!s.is_object()) throw Error(Errc::Config, std::string("section [") + name + "] must be a table");
  return s;
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const char* where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw Error(Errc::Config, "unknown key '" + it.key() + "' in " + where);
  }
}

template <class T>
void read(const json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(Errc::Config, std::string("wrong type for '") + key + "'");
  }
}

std::string eps_tag(double eps) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", eps);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot write " + path.string());
  out << text;
}

fs::path ensure_dir(const std::string& dir) {
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw Error(Errc::Io, "cannot create output directory " + dir);
  return p;
}

Field load_field(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open field " + path);
  return read_field_csv(in);
}

json energy_json(const EnergyBreakdown& e) {
  return {{"dirichlet", e.dirichlet}, {"potential", e.potential}, {"total", e.total},
          {"epsilon", e.epsilon}};
}

}  // namespace

Model ExperimentConfig::model() const {
  return Model::make(Target::parse(target), Potential::parse_kind(potential));
}

SolveConfig ExperimentConfig::solve_config() const {
  SolveConfig s;
  s.eps_ladder = eps_ladder;
  s.max_iters = max_iters;
  s.grad_tol = grad_tol;
  s.step = step == "fixed" ? StepRule::Fixed : StepRule::BarzilaiBorwein;
  s.tau = tau;
  if (clamp) s.clamp_radius = clamp_radius > 0.0 ? clamp_radius : default_clamp_radius(model());
  s.seed = seed;
  return s;
}

BoundaryDatum ExperimentConfig::datum() const {
  if (boundary == "perturbed") return BoundaryDatum::perturbed(degree, amplitude, mode);
  return BoundaryDatum::geodesic(degree);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json config_to_json(const ExperimentConfig& c) {
  const auto& a = c.analysis;
  return {
      {"seed", c.seed},
      {"out_dir", c.out_dir},
      {"domain", {{"shape", c.shape.to_string()}, {"h", c.h}, {"holes", holes_to_string(c.holes)}}},
      {"target", {{"name", c.target}, {"potential", c.potential}}},
      {"boundary",
       {{"kind", c.boundary}, {"degree", c.degree}, {"amplitude", c.amplitude}, {"mode", c.mode}}},
      {"solver",
       {{"eps_ladder", c.eps_ladder},
        {"max_iters", c.max_iters},
        {"grad_tol", c.grad_tol},
        {"step", c.step},
        {"tau", c.tau},
        {"clamp", c.clamp},
        {"clamp_radius", c.clamp_radius}}},
      {"analysis",
       {{"census", a.census},
        {"balls", a.balls},
        {"renorm", a.renorm},
        {"cell", a.cell},
        {"hopf", a.hopf},
        {"weak_l2", a.weak_l2},
        {"ball_delta", a.ball_delta},
        {"eta", a.eta},
        {"c1", a.c1},
        {"rho_ladder", a.rho_ladder},
        {"hopf_radius", a.hopf_radius},
        {"cell_radii", a.cell_radii},
        {"cell_resolution", a.cell_resolution},
        {"concentration_cell", a.concentration_cell}}},
  };
}

ExperimentConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw Error(Errc::Config, "config must be a table");
  check_keys(doc, {"seed", "out_dir", "domain", "target", "boundary", "solver", "analysis"}, "config");
  ExperimentConfig c;
  read(doc, "seed", c.seed);
  read(doc, "out_dir", c.out_dir);

  const json& dom = section(doc, "domain");
  check_keys(dom, {"shape", "h", "holes"}, "[domain]");
  std::string shape = c.shape.to_string(), holes;
  read(dom, "shape", shape);
  read(dom, "h", c.h);
  read(dom, "holes", holes);
  c.shape = Shape::parse(shape);
  c.holes = holes_from_string(holes);
  if (!(c.h > 0.0)) throw Error(Errc::Config, "h must be positive");

  const json& tgt = section(doc, "target");
  check_keys(tgt, {"name", "potential"}, "[target]");
  read(tgt, "name", c.target);
  read(tgt, "potential", c.potential);
  try {
    (void)c.model();
  } catch (const Error& e) {
    throw Error(Errc::Config, e.what());
  }

  const json& bd = section(doc, "boundary");
  check_keys(bd, {"kind", "degree", "amplitude", "mode"}, "[boundary]");
  read(bd, "kind", c.boundary);
  read(bd, "degree", c.degree);
  read(bd, "amplitude", c.amplitude);
  read(bd, "mode", c.mode);
  if (c.boundary != "geodesic" && c.boundary != "perturbed") {
    throw Error(Errc::Config, "boundary kind must be 'geodesic' or 'perturbed'");
  }

  const json& sv = section(doc, "solver");
  check_keys(sv, {"eps_ladder", "max_iters", "grad_tol", "step", "tau", "clamp", "clamp_radius"},
             "[solver]");
  read(sv, "eps_ladder", c.eps_ladder);
  read(sv, "max_iters", c.max_iters);
  read(sv, "grad_tol", c.grad_tol);
  read(sv, "step", c.step);
  read(sv, "tau", c.tau);
  read(sv, "clamp", c.clamp);
  read(sv, "clamp_radius", c.clamp_radius);
  if (c.step != "bb" && c.step != "fixed") throw Error(Errc::Config, "step must be 'bb' or 'fixed'");
  if (c.eps_ladder.empty()) throw Error(Errc::Config, "eps_ladder must not be empty");
  for (std::size_t i = 0; i < c.eps_ladder.size(); ++i) {
    if (!(c.eps_ladder[i] > 0.0) || !(c.eps_ladder[i] < c.shape.diameter())) {
      throw Error(Errc::Config, "epsilon values must lie in (0, diameter)");
    }
    if (i > 0 && !(c.eps_ladder[i] < c.eps_ladder[i - 1])) {
      throw Error(Errc::Config, "eps_ladder must be decreasing");
    }
  }
  if (!(c.grad_tol > 0.0)) throw Error(Errc::Config, "grad_tol must be positive");
  if (c.max_iters < 0) throw Error(Errc::Config, "max_iters must be non-negative");

  const json& an = section(doc, "analysis");
  check_keys(an, {"census", "balls", "renorm", "cell", "hopf", "weak_l2", "ball_delta", "eta", "c1",
                  "rho_ladder", "hopf_radius", "cell_radii", "cell_resolution",
                  "concentration_cell"},
             "[analysis]");
  auto& a = c.analysis;
  read(an, "census", a.census);
  read(an, "balls", a.balls);
  read(an, "renorm", a.renorm);
  read(an, "cell", a.cell);
  read(an, "hopf", a.hopf);
  read(an, "weak_l2", a.weak_l2);
  read(an, "ball_delta", a.ball_delta);
  read(an, "eta", a.eta);
  read(an, "c1", a.c1);
  read(an, "rho_ladder", a.rho_ladder);
  read(an, "hopf_radius", a.hopf_radius);
  read(an, "cell_radii", a.cell_radii);
  read(an, "cell_resolution", a.cell_resolution);
  read(an, "concentration_cell", a.concentration_cell);
  return c;
}

ExperimentConfig load_experiment(const std::string& path) {
  return config_from_json(load_config_file(path));
}

std::string experiment_to_toml(const ExperimentConfig& cfg) {
  return dump_toml(config_to_json(cfg));
}

std::shared_ptr<const Domain> build_domain(const ExperimentConfig& cfg) {
  return std::make_shared<const Domain>(Domain::build(cfg.shape, cfg.h, cfg.holes));
}

Field initial_field(const ExperimentConfig& cfg) {
  const Model m = cfg.model();
  Field field(build_domain(cfg), m.target.dim());
  sample_boundary(field, m.target, cfg.datum());
  default_initializer(field, m, cfg.eps_ladder.front(), cfg.seed);
  return field;
}

void write_checkpoint(const std::string& stem, const Field& field, const ExperimentConfig& cfg,
                      double eps, const SolveResult& res) {
  {
    std::ofstream out(stem + ".csv", std::ios::binary);
    if (!out) throw Error(Errc::Io, "cannot write " + stem + ".csv");
    write_field_csv(out, field,
                    {{"target", cfg.target}, {"potential", cfg.potential}, {"epsilon", fmt(eps)}});
  }
  const json side = {{"epsilon", eps},
                     {"iterations", res.iterations},
                     {"converged", res.converged},
                     {"grad_norm", res.grad_norm},
                     {"energy", energy_json(res.energy)}};
  write_text(stem + ".json", side.dump(2) + "\n");
}

json census_to_json(const VortexCensus& census) {
  json list = json::array();
  for (const auto& v : census.vortices) {
    list.push_back({{"x", v.center.x}, {"y", v.center.y}, {"winding", v.winding}, {"defective", v.defective}});
  }
  return {{"vortices", list}, {"total", census.total}, {"defective_plaquettes", census.defective_plaquettes}};
}

json balls_to_json(const std::vector<Ball>& balls) {
  json list = json::array();
  for (const auto& b : balls) {
    list.push_back({{"x", b.center.x},
                    {"y", b.center.y},
                    {"radius", b.radius},
                    {"charge", b.charge},
                    {"accumulated_bound", b.accumulated_bound}});
  }
  return list;
}

json analyze_field(const Field& field, const ExperimentConfig& cfg, double eps) {
  const Model m = cfg.model();
  const auto& a = cfg.analysis;
  json out = {{"epsilon", eps}, {"energy", energy_json(gl_energy(field, m, eps))}};
  out["el_residual"] = el_residual(field, m, eps);
  const Domain& d = field.domain();
  double dist_max = 0.0;
  for (std::size_t p : d.interior_nodes()) dist_max = std::max(dist_max, m.target.dist(field.at(p)));
  out["max_dist_to_N"] = dist_max;

  std::optional<VortexCensus> census;
  if (a.census && m.target.circle_like()) {
    census = plaquette_windings(field, m.target);
    out["census"] = census_to_json(*census);
  }
  if (a.balls) {
    try {
      auto balls = sublevel_cover(field, m.target, a.ball_delta);
      out["balls"] = balls_to_json(balls);
      if (!balls.empty()) {
        const double c1 = a.c1 > 0.0 ? a.c1 : default_c1(m.target, m.potential);
        const auto grown = ball_growth(balls, eps, a.eta, m.target, c1, &d);
        RegionMask mask{"grown", std::vector<char>(d.size(), 0)};
        for (std::size_t p = 0; p < d.size(); ++p) {
          for (const auto& b : grown.balls) {
            if (distance(d.position(p), b.center) <= b.radius) mask.nodes[p] = 1;
          }
        }
        const auto e = gl_energy(field, m, eps, {mask});
        out["ball_growth"] = {{"balls", balls_to_json(grown.balls)},
                              {"total_lower_bound", grown.total_lower_bound},
                              {"measured_energy", e.regions.front().total()},
                              {"c1", c1},
                              {"eta", a.eta}};
      }
    } catch (const Error& e) {
      out["balls_error"] = std::string(errc_name(e.code())) + ": " + e.what();
    }
  }
  if (a.weak_l2) out["weak_l2"] = weak_l2_statistic(field);
  if (eps < 1.0) {
    const double cs = std::max(a.concentration_cell, 4.0 * d.h());
    const auto cm = concentration_measure(field, eps, cs);
    json c = {{"cell_size", cm.cell_size}, {"total", cm.total()}};
    if (census && !census->vortices.empty()) c["block_mass"] = cm.block_mass(census->vortices.front().center);
    out["concentration"] = c;
  }
  if (a.hopf) {
    Point2 centre{0.0, 0.0};
    if (census && census->vortices.size() == 1) centre = census->vortices.front().center;
    try {
      const auto r = hopf_residue(field, centre, a.hopf_radius);
      out["hopf_residue"] = {{"re", r[0]}, {"im", r[1]}, {"abs", std::hypot(r[0], r[1])},
                             {"x", centre.x}, {"y", centre.y}};
    } catch (const Error& e) {
      out["hopf_error"] = e.what();
    }
  }
  return out;
}

int run_solve(const ExperimentConfig& cfg) {
  const fs::path dir = ensure_dir(cfg.out_dir);
  const Model m = cfg.model();
  Field field = initial_field(cfg);
  const auto ladder = minimize(field, m, cfg.solve_config());
  std::ostringstream csv;
  csv << "# units: energies dimensionless (2D Dirichlet scale-invariant); epsilon in domain units\n"
      << "epsilon,dirichlet,potential,total,iterations,converged,grad_norm\n";
  bool all_converged = true;
  for (const auto& step : ladder) {
    const std::string stem = (dir / ("field_eps" + eps_tag(step.epsilon))).string();
    write_checkpoint(stem, step.field, cfg, step.epsilon, step.result);
    write_text(dir / ("analysis_eps" + eps_tag(step.epsilon) + ".json"),
               analyze_field(step.field, cfg, step.epsilon).dump(2) + "\n");
    const auto& e = step.result.energy;
    csv << fmt(step.epsilon) << ',' << fmt(e.dirichlet) << ',' << fmt(e.potential) << ','
        << fmt(e.total) << ',' << step.result.iterations << ',' << (step.result.converged ? 1 : 0)
        << ',' << fmt(step.result.grad_norm) << '\n';
    all_converged = all_converged && step.result.converged;
  }
  write_text(dir / "energies.csv", csv.str());
  write_text(dir / "config.toml", experiment_to_toml(cfg));
  if (!all_converged) {
    std::cerr << "solver did not converge at every epsilon (see energies.csv)\n";
    return 2;
  }
  return 0;
}

int run_sweep(const ExperimentConfig& cfg, int workers) {
  const fs::path dir = ensure_dir(cfg.out_dir);
  const Model m = cfg.model();
  const auto& eps = cfg.eps_ladder;
  const int n = static_cast<int>(eps.size());
  std::vector<std::optional<SolveResult>> results(eps.size());
  std::vector<std::optional<Field>> fields(eps.size());
  std::vector<std::string> errors(eps.size());
#pragma omp parallel for num_threads(std::max(1, workers)) schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    try {
      ExperimentConfig one = cfg;
      one.eps_ladder = {eps[static_cast<std::size_t>(i)]};
      Field field = initial_field(one);
      results[static_cast<std::size_t>(i)] = minimize_at(field, m, eps[static_cast<std::size_t>(i)], one.solve_config());
      fields[static_cast<std::size_t>(i)] = std::move(field);
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(i)] = e.what();
    }
  }
  std::ostringstream csv;
  csv << "# units: energies dimensionless; epsilon in domain units\n"
      << "epsilon,dirichlet,potential,total,iterations,converged\n";
  int status = 0;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!results[i]) {
      std::cerr << "sweep eps=" << eps[i] << ": " << errors[i] << "\n";
      status = 2;
      continue;
    }
    const auto& r = *results[i];
    write_checkpoint((dir / ("sweep_eps" + eps_tag(eps[i]))).string(), *fields[i], cfg, eps[i], r);
    csv << fmt(eps[i]) << ',' << fmt(r.energy.dirichlet) << ',' << fmt(r.energy.potential) << ','
        << fmt(r.energy.total) << ',' << r.iterations << ',' << (r.converged ? 1 : 0) << '\n';
    if (!r.converged) status = 2;
  }
  write_text(dir / "sweep.csv", csv.str());
  return status;
}

int run_analyze(const ExperimentConfig& cfg, const std::string& field_csv, double eps) {
  const fs::path dir = ensure_dir(cfg.out_dir);
  const Field field = load_field(field_csv);
  write_text(dir / "analysis.json", analyze_field(field, cfg, eps).dump(2) + "\n");
  return 0;
}

int run_cell(const ExperimentConfig& cfg) {
  const fs::path dir = ensure_dir(cfg.out_dir);
  const Model m = cfg.model();
  const int d = std::max(1, std::abs(cfg.degree));
  std::ostringstream csv;
  csv << "# units: R in core lengths (eps = 1); energies dimensionless\n"
      << "R,Q_R,q_R\n";
  json summary = json::object();
  double last = 0.0, prev = 0.0;
  for (double R : cfg.analysis.cell_radii) {
    const auto c = cell_problem_radial(m, d, R);
    csv << fmt(R) << ',' << fmt(c.Q) << ',' << fmt(c.q) << '\n';
    prev = last;
    last = c.q;
  }
  write_text(dir / "cell_radial.csv", csv.str());
  summary["degree"] = d;
  summary["Q_hat"] = last;
  summary["Q_error_bar"] = cfg.analysis.cell_radii.size() > 1 ? std::abs(last - prev) : 0.0;
  if (cfg.analysis.cell_resolution > 0) {
    std::ostringstream c2;
    c2 << "# units: R in core lengths (eps = 1); energies dimensionless\n"
       << "R,h,Q_R,q_R\n";
    const double a = m.target.radius();
    for (double R : cfg.analysis.cell_radii) {
      const double h = R / cfg.analysis.cell_resolution;
      const auto c = cell_problem_2d(
          m, [&](double th) { return Vec{a * std::cos(d * th), a * std::sin(d * th), 0.0}; }, R, h,
          cfg.solve_config());
      c2 << fmt(R) << ',' << fmt(h) << ',' << fmt(c.Q) << ',' << fmt(c.q) << '\n';
    }
    write_text(dir / "cell_2d.csv", c2.str());
  }
  write_text(dir / "cell.json", summary.dump(2) + "\n");
  return 0;
}

int run_renorm(const ExperimentConfig& cfg) {
  const fs::path dir = ensure_dir(cfg.out_dir);
  const Model m = cfg.model();
  if (!m.target.circle_like()) throw Error(Errc::Unsupported, "renorm needs a circle-like target");
  Field field = initial_field(cfg);
  const auto ladder = minimize(field, m, cfg.solve_config());
  const auto& last = ladder.back();
  const auto census = plaquette_windings(last.field, m.target);
  std::vector<Charge> sing;
  for (const auto& v : census.vortices) sing.push_back({v.center, v.winding});
  const auto profile = annulus_energy_profile(last.field, sing, cfg.analysis.rho_ladder);
  const auto fit = renorm_fit(profile, sing, m.target);

  std::ostringstream prof;
  prof << "# units: rho in domain units; I dimensionless\n" << "rho,I\n";
  for (std::size_t i = 0; i < profile.rho.size(); ++i) {
    prof << fmt(profile.rho[i]) << ',' << fmt(profile.I[i]) << '\n';
  }
  write_text(dir / "annulus_profile.csv", prof.str());

  double err = 0.0;
  const double q = core_constant(m, cfg.analysis.cell_radii, &err);
  int unit_charges = 0;
  for (const auto& s : sing) unit_charges += std::abs(s.degree);
  const double esg = singular_energy(m.target, {cfg.degree});
  std::vector<ExpansionRun> runs;
  for (const auto& s : ladder) runs.push_back({s.epsilon, s.result.energy.total});
  const auto report = expansion_report(runs, esg, fit.intercept, unit_charges * q);

  std::ostringstream exp;
  exp << "# units: energies dimensionless; epsilon in domain units\n"
      << "epsilon,measured,predicted,gap\n";
  for (const auto& r : report) {
    exp << fmt(r.epsilon) << ',' << fmt(r.measured) << ',' << fmt(r.predicted) << ',' << fmt(r.gap) << '\n';
  }
  write_text(dir / "expansion.csv", exp.str());
  json res = {{"singularities", census_to_json(census)["vortices"]},
              {"slope", fit.slope},
              {"intercept", fit.intercept},
              {"expected_slope", fit.expected_slope},
              {"residuals", fit.residuals},
              {"Q_hat", unit_charges * q},
              {"Q_error_bar", unit_charges * err},
              {"singular_energy", esg}};
  write_text(dir / "renorm.json", res.dump(2) + "\n");
  return 0;
}

int run_render(const ExperimentConfig& cfg, const std::string& field_csv) {
  const fs::path dir = ensure_dir(cfg.out_dir);
  const Field field = load_field(field_csv);
  const Model m = cfg.model();
  std::optional<VortexCensus> census;
  if (m.target.circle_like()) census = plaquette_windings(field, m.target);
  std::vector<Ball> balls;
  try {
    balls = sublevel_cover(field, m.target, cfg.analysis.ball_delta);
  } catch (const Error&) {
  }
  write_text(dir / "render.svg", render_svg(field, m.target, census ? &*census : nullptr, balls));
  return 0;
}

}  // namespace glvortex
