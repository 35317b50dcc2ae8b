// glvortex: config-driven Ginzburg-Landau vortex experiments.
//
// Exit status: 0 ok, 1 configuration error, 2 solver error (including a failed
// acceptance criterion).

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <omp.h>

#include "glvortex/acceptance.hpp"
#include "glvortex/errors.hpp"
#include "glvortex/experiment.hpp"

namespace {

struct Common {
  std::string config;
  std::string out;
  int threads = 0;
  std::optional<std::uint64_t> seed;
  std::vector<double> eps_ladder;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "Experiment config (TOML or JSON)");
  app->add_option("--out", c.out, "Output directory");
  app->add_option("--threads", c.threads, "Worker threads (default: GLVORTEX_THREADS or all cores)");
  app->add_option("--seed", c.seed, "Random seed");
  app->add_option("--eps-ladder", c.eps_ladder, "Comma-separated epsilon ladder")->delimiter(',');
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("GLVORTEX_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return omp_get_max_threads();
}

glvortex::ExperimentConfig load(const Common& c) {
  glvortex::ExperimentConfig cfg;
  if (!c.config.empty()) cfg = glvortex::load_experiment(c.config);
  if (!c.out.empty()) cfg.out_dir = c.out;
  if (c.seed) cfg.seed = *c.seed;
  if (!c.eps_ladder.empty()) {
    for (double e : c.eps_ladder) {
      if (!(e > 0.0)) throw glvortex::Error(glvortex::Errc::Config, "epsilon values must be positive");
    }
    cfg.eps_ladder = c.eps_ladder;
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ginzburg-Landau vortex lab"};
  app.require_subcommand(1);

  Common common;
  std::string field_csv;
  double eps = 0.0;
  std::vector<int> only;
  glvortex::AcceptanceOptions accept_opts;

  auto* solve = app.add_subcommand("solve", "Minimise along the epsilon ladder");
  auto* sweep = app.add_subcommand("sweep", "Independent cold solves per epsilon across workers");
  auto* analyze = app.add_subcommand("analyze", "Analyse a field checkpoint");
  auto* cell = app.add_subcommand("cell", "Cell-problem ladder");
  auto* renorm = app.add_subcommand("renorm", "Renormalised-energy fit and expansion report");
  auto* render = app.add_subcommand("render", "SVG render of a field checkpoint");
  auto* accept = app.add_subcommand("accept", "Run the acceptance suite");
  for (auto* sub : {solve, sweep, analyze, cell, renorm, render, accept}) add_common(sub, common);
  analyze->add_option("--field", field_csv, "Field CSV checkpoint")->required();
  analyze->add_option("--eps", eps, "Epsilon of the checkpoint")->required();
  render->add_option("--field", field_csv, "Field CSV checkpoint")->required();
  accept->add_option("--only", only, "Criterion ids to run")->delimiter(',');
  accept->add_option("--fine-h", accept_opts.fine_h, "Lattice spacing of the degree-one disk ladder");
  accept->add_option("--coarse-h", accept_opts.coarse_h, "Lattice spacing of the other solves");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  const int threads = resolve_threads(common.threads);
  omp_set_num_threads(threads);

  try {
    if (accept->parsed()) {
      accept_opts.only = only;
      if (common.seed) accept_opts.seed = *common.seed;
      const auto results = glvortex::run_acceptance(accept_opts, std::cout);
      int failed = 0;
      for (const auto& r : results) failed += r.pass ? 0 : 1;
      std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed\n";
      return failed == 0 ? 0 : 2;
    }
    glvortex::ExperimentConfig cfg;
    try {
      cfg = load(common);
    } catch (const glvortex::Error& e) {
      std::cerr << "glvortex: " << e.what() << "\n";
      return 1;
    }
    if (solve->parsed()) return glvortex::run_solve(cfg);
    if (sweep->parsed()) return glvortex::run_sweep(cfg, threads);
    if (analyze->parsed()) return glvortex::run_analyze(cfg, field_csv, eps);
    if (cell->parsed()) return glvortex::run_cell(cfg);
    if (renorm->parsed()) return glvortex::run_renorm(cfg);
    if (render->parsed()) return glvortex::run_render(cfg, field_csv);
  } catch (const glvortex::Error& e) {
    std::cerr << "glvortex: " << e.what() << "\n";
    return e.code() == glvortex::Errc::Config ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "glvortex: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
