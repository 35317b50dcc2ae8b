#pragma once

// Vortex detection, disk merging, ball-growth lower bounds and field diagnostics.

#include <array>
#include <optional>
#include <vector>

#include "glvortex/grid.hpp"
#include "glvortex/target.hpp"

namespace glvortex {

struct PlaquetteVortex {
  Point2 center;
  int winding = 0;
  /// True when located from a cluster of plaquettes with a corner outside the tube.
  bool defective = false;
};

struct VortexCensus {
  std::vector<PlaquetteVortex> vortices;
  int total = 0;
  int defective_plaquettes = 0;
};

/// Plaquette winding of Pi_N o u. Plaquettes with a corner at dist >= delta_N
/// are grouped into clusters; a cluster's winding is read off the smallest
/// enclosing lattice rectangle whose nodes are admissible.
VortexCensus plaquette_windings(const Field& field, const Target& t);

struct Ball {
  Point2 center;
  double radius = 0.0;
  int charge = 0;
  double accumulated_bound = 0.0;
};

/// Bilinear interpolation of the field; empty if a cell corner is exterior.
std::optional<Vec> interpolate(const Field& field, Point2 x);

/// Winding of Pi_N o u along the circle of radius r; empty if the sampled
/// circle leaves the domain or the tubular neighbourhood.
std::optional<int> circle_charge(const Field& field, const Target& t, Point2 center, double r);

/// Disjoint disks covering K = {dist(u, N) >= delta}, from the bounding disks of
/// the 8-connected components of K, merged, with charges on their boundary
/// circles. Errc::ComponentTouchesBoundary if K contains a boundary node.
std::vector<Ball> sublevel_cover(const Field& field, const Target& t, double delta);

struct MergeResult {
  std::vector<Ball> balls;
  /// Output index containing each input ball.
  std::vector<std::size_t> owner;
};

/// Repeatedly replaces two disks with intersecting closures by one disk of
/// radius r1 + r2 containing both. Charges and accumulated bounds add.
MergeResult merge_disks_tracked(const std::vector<Ball>& balls);
std::vector<Ball> merge_disks(const std::vector<Ball>& balls);

/// 0.1 min(delta_N^2, m_F delta_N^2) / L0.
double default_c1(const Target& t, const Potential& p);

/// Closed-form lower bound of the annulus B_r1 \ B_r0 for one unit charge.
double annulus_bound(const Target& t, double eps, double c1, double r0, double r1);

struct GrowthResult {
  std::vector<Ball> balls;
  double total_lower_bound = 0.0;
  int merges = 0;
};

/// Grows all balls by a common factor until the radii sum to eta, merging on
/// contact. Errc::EtaTooLarge if eta reaches half the distance of a charged
/// ball to the boundary of `domain` (when given).
GrowthResult ball_growth(const std::vector<Ball>& balls, double eps, double eta, const Target& t,
                         double c1, const Domain* domain = nullptr);

struct ConcentrationMeasure {
  double cell_size = 0.0;
  int cells_per_side = 0;  // lattice nodes per super-cell side
  int nx = 0;
  int ny = 0;
  double x0 = 0.0;
  double y0 = 0.0;
  std::vector<double> mass;

  double total() const;
  /// Mass of the (2k+1)^2 block of super-cells around the cell containing x.
  double block_mass(Point2 x, int k = 1) const;
};

/// |Du|^2 / (2 log(1/eps)) coarse-grained on super-cells of side cell_size.
ConcentrationMeasure concentration_measure(const Field& field, double eps, double cell_size);

/// Per-node |Du| from central differences (one-sided next to exterior nodes).
std::vector<double> gradient_magnitude(const Field& field);

/// max_k t_k^2 k h^2 over the descending node values t_k of |Du|.
double weak_l2_statistic(const Field& field);

/// (1 / 2 pi i) times the contour integral of the Hopf differential
/// |u_x|^2 - |u_y|^2 - 2i u_x . u_y on the circle; returns (re, im).
std::array<double, 2> hopf_residue(const Field& field, Point2 center, double radius,
                                   int samples = 0);

}  // namespace glvortex
