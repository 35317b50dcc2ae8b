#pragma once

// Cell problems, renormalised-energy fits and the energy-expansion report.

#include <functional>
#include <vector>

#include "glvortex/grid.hpp"
#include "glvortex/solver.hpp"

namespace glvortex {

/// Minimal eps = 1 energy on B_R with boundary loop gamma (Q_R), together with
/// q(R) = Q_R - (lambda^2 / 4pi) log R.
struct CellProblemResult {
  double R = 0.0;
  double Q = 0.0;
  double q = 0.0;
  int degree = 0;
  /// Radial samples (r, f) for equivariant solves; empty for 2D solves.
  std::vector<double> r;
  std::vector<double> f;
  int iterations = 0;
};

/// Equivariant cell problem u = a f(r) e^{i d theta}: minimises
///   pi a^2 int_0^R (f'^2 + d^2 f^2 / r^2 + 2 F(a f) / a^2) r dr,  f(0) = 0, f(R) = 1
/// with piecewise-linear f on a geometric radial grid and damped Newton.
/// Throws Errc::NonconvergedODE if Newton stalls.
CellProblemResult cell_problem_radial(const Model& m, int degree, double R, int radial_nodes = 512);

/// Linear interpolation of a radial profile; f(R) beyond the last node.
double profile_at(const CellProblemResult& cell, double r);

/// Full 2D minimisation on Disk(R) at eps = 1 with trace loop(theta).
/// Initialised from the radial profile of the loop's winding.
CellProblemResult cell_problem_2d(const Model& m, const std::function<Vec(double)>& loop, double R,
                                  double h, const SolveConfig& cfg);

/// Degree-one q(R) at the largest radius of the ladder; err receives its
/// change from the previous radius.
double core_constant(const Model& m, const std::vector<double>& radii, double* err = nullptr);

struct AnnulusProfile {
  std::vector<double> rho;
  std::vector<double> I;
};

/// Largest rho with pairwise disjoint closed balls B_rho(a_i) inside the domain.
double rho_bar(const Domain& d, const std::vector<Charge>& singularities);

/// I(rho) = Dirichlet energy outside the union of B_rho(a_i). Each lattice
/// edge is weighted by the fraction of its length outside the balls.
/// Throws Errc::RhoBarViolated if max(rho) >= rho_bar.
AnnulusProfile annulus_energy_profile(const Field& field, const std::vector<Charge>& singularities,
                                      const std::vector<double>& rho_ladder);

struct RenormFit {
  std::vector<Charge> singularities;
  std::vector<double> rho;
  std::vector<double> I;
  std::vector<double> residuals;
  double slope = 0.0;
  double intercept = 0.0;
  /// sum_i lambda_i^2 / 4pi for the listed singularities.
  double expected_slope = 0.0;
};

/// Least squares I = intercept + slope log(1/rho). Errc::IllConditionedFit if
/// fewer than 3 points or the ladder spans less than a factor 4.
RenormFit renorm_fit(const AnnulusProfile& profile, const std::vector<Charge>& singularities,
                     const Target& t);

struct GeomProbeOptions {
  int rotations = 32;
  int max_iters = 20000;
  double tol = 1e-7;
  int sweeps = 2;
};

/// Dirichlet energy of the N-valued harmonic map on Omega minus the balls
/// B_rho(a_i), with trace g on the outer boundary and geodesic loops of degree
/// d_i on each hole. Hole phases are searched over `rotations` equally spaced
/// values (hill climbing on that grid, coordinate-wise for several holes).
double geom_energy_probe(const Shape& shape, double h, const Target& t, const BoundaryDatum& g,
                         const std::vector<Charge>& charges, double rho,
                         const GeomProbeOptions& opts = {});

struct ExpansionPrediction {
  double epsilon = 0.0;
  double measured = 0.0;
  double predicted = 0.0;
  double gap = 0.0;
};

struct ExpansionRun {
  double epsilon;
  double measured;
};

/// predicted = E_sg log(1/eps) + E_ren + Q; gap = |measured - predicted|.
std::vector<ExpansionPrediction> expansion_report(const std::vector<ExpansionRun>& runs,
                                                  double singular_energy, double renormalised,
                                                  double core_constant);

}  // namespace glvortex
