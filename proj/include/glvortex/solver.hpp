#pragma once

// Minimisation of the penalised Dirichlet energy
//   E_eps(u) = sum_edges |u_a - u_b|^2 / 2 + sum_nodes F(u) h^2 / eps^2
// under Dirichlet data, and of the constrained (N-valued) Dirichlet energy.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "glvortex/grid.hpp"
#include "glvortex/target.hpp"

namespace glvortex {

struct Model {
  Target target = Target::circle();
  Potential potential;

  static Model make(const Target& t, PotentialKind kind) {
    return {t, Potential::for_target(kind, t)};
  }
};

enum class StepRule { BarzilaiBorwein, Fixed };

struct SolveConfig {
  std::vector<double> eps_ladder{0.2, 0.1, 0.05, 0.025};
  int max_iters = 200000;
  /// Stop when the max-norm of the (projected) per-node gradient drops below.
  double grad_tol = 1e-6;
  StepRule step = StepRule::BarzilaiBorwein;
  /// Fixed step length; 0 selects safe_fixed_step().
  double tau = 0.0;
  /// Radial clamp |u| <= clamp_radius after each step; empty disables it.
  std::optional<double> clamp_radius;
  std::uint64_t seed = 0;
  /// Keep the energy after every accepted step (tests only).
  bool record_history = false;
};

/// circle radius + delta/2 for dist^2, the circle radius for the quartic.
double default_clamp_radius(const Model& m);
double safe_fixed_step(const Model& m, double h, double eps, std::optional<double> clamp);

/// Named node mask (size = domain size) for partial energy tallies. An edge
/// contributes half its energy to each endpoint that lies in the mask.
struct RegionMask {
  std::string name;
  std::vector<char> nodes;
};

struct RegionTally {
  std::string name;
  double dirichlet = 0.0;
  double potential = 0.0;
  double total() const { return dirichlet + potential; }
};

struct EnergyBreakdown {
  double dirichlet = 0.0;
  double potential = 0.0;
  double total = 0.0;
  double epsilon = 0.0;
  std::vector<RegionTally> regions;
};

EnergyBreakdown gl_energy(const Field& field, const Model& m, double eps,
                          const std::vector<RegionMask>& regions = {});
std::vector<double> gl_gradient(const Field& field, const Model& m, double eps);
double el_residual(const Field& field, const Model& m, double eps);

struct SolveResult {
  EnergyBreakdown energy;
  int iterations = 0;
  bool converged = false;
  double grad_norm = 0.0;
  std::vector<double> history;
};

/// Descent at one epsilon from the current field. Boundary nodes are never
/// touched. Returns converged = false when max_iters is exhausted or the line
/// search stalls; the field then holds the last (lowest-energy) iterate.
SolveResult minimize_at(Field& field, const Model& m, double eps, const SolveConfig& cfg);

struct LadderStep {
  double epsilon = 0.0;
  SolveResult result;
  Field field;
};

/// Runs the epsilon ladder, warm-starting each epsilon from the previous one.
std::vector<LadderStep> minimize(Field& field, const Model& m, const SolveConfig& cfg);

struct HarmonicResult {
  int iterations = 0;
  bool converged = false;
  double grad_norm = 0.0;
  double energy = 0.0;
};

/// Projected descent of the Dirichlet energy over N-valued fields. The field
/// must already be N-valued in the interior (see project_interior). Throws
/// Errc::CutLocus if an iterate leaves the tubular neighbourhood or the
/// result carries a plaquette vortex (no continuous N-valued extension).
HarmonicResult harmonic_project_solve(Field& field, const Target& t, int max_iters, double tol);

/// Componentwise discrete harmonic extension of the trace (interior nodes).
void harmonic_extension(Field& field, double tol = 1e-11);
/// Nodewise Pi_N on interior nodes; Errc::CutLocus outside the tube.
void project_interior(Field& field, const Target& t);

/// Lifted phase of the trace minus `base_phase`, extended harmonically; the
/// field becomes a * exp(i (base_phase + correction)) in the interior.
/// `base_phase` is sampled per node (size = domain size).
void phase_field_init(Field& field, const Target& t, const std::vector<double>& base_phase);

struct Charge {
  Point2 position;
  int degree = 1;
};

/// Composite competitor: a geodesic phase field outside the balls B_rho(a_i)
/// and the radial cell profile (scaled by eps) inside them.
/// Throws Errc::BallsOverlap if balls intersect or leave the domain.
void upper_bound_initializer(Field& field, const Model& m, const std::vector<Charge>& charges,
                             double rho, double eps);

/// Default initial field: the harmonic phase extension when the outer trace has
/// zero winding, otherwise upper_bound_initializer with |d| unit charges near
/// the centre, positions jittered by `seed`.
void default_initializer(Field& field, const Model& m, double eps, std::uint64_t seed);

}  // namespace glvortex
