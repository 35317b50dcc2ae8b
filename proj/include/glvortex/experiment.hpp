#pragma once

// Config-driven runs: solves, sweeps, analyses, cell ladders, renormalisation
// fits and renders, each writing CSV / JSON / SVG artifacts to a directory.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "glvortex/grid.hpp"
#include "glvortex/renorm.hpp"
#include "glvortex/solver.hpp"
#include "glvortex/vortex.hpp"

namespace glvortex {

struct AnalysisToggles {
  bool census = true;
  bool balls = true;
  bool renorm = true;
  bool cell = false;
  bool hopf = false;
  bool weak_l2 = true;
  double ball_delta = 0.25;
  double eta = 0.3;
  /// 0 selects default_c1().
  double c1 = 0.0;
  std::vector<double> rho_ladder{0.8, 0.6, 0.4, 0.3, 0.2};
  double hopf_radius = 0.35;
  std::vector<double> cell_radii{2, 4, 8, 16, 32};
  /// Lattice cells per cell-problem radius for 2D cell solves; 0 skips them.
  int cell_resolution = 0;
  double concentration_cell = 0.0625;
};

struct ExperimentConfig {
  Shape shape = Shape::disk(1.0);
  double h = 1.0 / 64.0;
  std::vector<Hole> holes;
  std::string target = "circle";
  std::string potential = "quartic";
  std::string boundary = "geodesic";  // geodesic | perturbed
  int degree = 1;
  double amplitude = 0.0;
  int mode = 1;
  std::vector<double> eps_ladder{0.2, 0.1, 0.05, 0.025};
  int max_iters = 200000;
  double grad_tol = 1e-6;
  std::string step = "bb";  // bb | fixed
  double tau = 0.0;
  bool clamp = true;
  /// 0 selects default_clamp_radius().
  double clamp_radius = 0.0;
  std::uint64_t seed = 0;
  AnalysisToggles analysis;
  std::string out_dir = "out";

  Model model() const;
  SolveConfig solve_config() const;
  BoundaryDatum datum() const;
};

nlohmann::json config_to_json(const ExperimentConfig& cfg);
/// Throws Errc::Config on unknown keys or invalid specs.
ExperimentConfig config_from_json(const nlohmann::json& doc);
ExperimentConfig load_experiment(const std::string& path);
std::string experiment_to_toml(const ExperimentConfig& cfg);

std::shared_ptr<const Domain> build_domain(const ExperimentConfig& cfg);
/// Trace sampled and interior set by default_initializer at the first epsilon.
Field initial_field(const ExperimentConfig& cfg);

/// Canonical number formatting shared by every artifact (%.17g).
std::string fmt(double v);

/// Checkpoint: field CSV plus a JSON sidecar with the solve summary.
void write_checkpoint(const std::string& stem, const Field& field, const ExperimentConfig& cfg,
                      double eps, const SolveResult& res);

nlohmann::json census_to_json(const VortexCensus& census);
nlohmann::json balls_to_json(const std::vector<Ball>& balls);

/// Analyses of one field at one epsilon, as selected by the toggles.
nlohmann::json analyze_field(const Field& field, const ExperimentConfig& cfg, double eps);

// Subcommands; each returns a process exit status and writes into cfg.out_dir.
int run_solve(const ExperimentConfig& cfg);
int run_sweep(const ExperimentConfig& cfg, int workers);
int run_analyze(const ExperimentConfig& cfg, const std::string& field_csv, double eps);
int run_cell(const ExperimentConfig& cfg);
int run_renorm(const ExperimentConfig& cfg);
int run_render(const ExperimentConfig& cfg, const std::string& field_csv);

}  // namespace glvortex
