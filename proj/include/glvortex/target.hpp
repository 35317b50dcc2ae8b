#pragma once

// Embedded vacuum manifolds N in R^nu, their nearest-point retractions and
// penalisation potentials, and homotopy data for circle-like targets.

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "glvortex/errors.hpp"

namespace glvortex {

/// Ambient vector. Only the first `Target::dim()` entries are meaningful; the
/// rest are kept at zero.
using Vec = std::array<double, 3>;

inline double dot(const Vec& a, const Vec& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }
inline Vec operator+(const Vec& a, const Vec& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec operator-(const Vec& a, const Vec& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec operator*(double s, const Vec& a) { return {s * a[0], s * a[1], s * a[2]}; }

enum class TargetKind { Circle, CrossField, Sphere2 };

/// A compact embedded manifold N. Circle-like targets are circles of radius
/// L0 / 2pi in R^2; Sphere2 is the unit sphere in R^3.
class Target {
 public:
  static Target circle();
  static Target cross_field(int k);
  static Target sphere2();

  /// Parses "circle", "crossfield:k" or "sphere2".
  static Target parse(std::string_view text);
  std::string to_string() const;

  TargetKind kind() const { return kind_; }
  int fold() const { return fold_; }
  int dim() const { return kind_ == TargetKind::Sphere2 ? 3 : 2; }
  bool circle_like() const { return kind_ != TargetKind::Sphere2; }

  /// Radius of the embedded circle (or sphere).
  double radius() const { return radius_; }
  /// Tubular-neighbourhood radius on which the retraction is used.
  double delta() const { return delta_; }
  /// Length of the embedded circle; empty for Sphere2.
  std::optional<double> circumference() const;

  double dist(const Vec& y) const { return std::abs(norm(y) - radius_); }

  /// Nearest-point retraction a y / |y|. It is exact for every y != 0, so only
  /// the inner side of the tube is checked: Errc::CutLocus when |y| <= a - delta.
  Vec project(const Vec& y) const;

  /// Retraction without the tubular-neighbourhood check; only the cut locus
  /// (y = 0) is rejected.
  Vec project_unchecked(const Vec& y) const;

  /// Tangential part of v at a point p of N.
  Vec tangent_part(const Vec& p, const Vec& v) const;

  bool operator==(const Target& other) const {
    return kind_ == other.kind_ && fold_ == other.fold_;
  }

 private:
  Target(TargetKind kind, int fold, double radius);

  TargetKind kind_;
  int fold_;
  double radius_;
  double delta_;
};

struct DistDerivatives {
  double dist;
  /// D dist(y)[v]; absent when y lies on N where dist is not differentiable.
  std::optional<double> d_dist;
  /// D Pi_N(y)[v].
  Vec d_proj;
};

DistDerivatives dist_and_derivatives(const Target& t, const Vec& y, const Vec& v);

enum class PotentialKind { SquaredDistance, Quartic };

/// Penalisation F with F^{-1}(0) = N, together with the constants of the
/// non-degeneracy sandwich (m/2) dist^2 <= F <= (M/2) dist^2 on dist < delta_F.
///
/// Quartic is (a^2 - |z|^2)^2 / (4 a^2) with a the target radius; on the unit
/// circle this is the classical (1 - |z|^2)^2 / 4.
struct Potential {
  PotentialKind kind = PotentialKind::Quartic;
  double m_F = 0.0;
  double M_F = 0.0;
  double delta_F = 0.0;

  static Potential for_target(PotentialKind kind, const Target& t);
  static PotentialKind parse_kind(std::string_view text);
  static std::string kind_name(PotentialKind kind);
};

struct PotentialValue {
  double value;
  Vec grad;
};

/// F(z) and grad F(z). Throws Errc::CutLocus for SquaredDistance at z = 0,
/// where the gradient does not exist.
PotentialValue potential_value_grad(const Potential& p, const Target& t, const Vec& z);

/// Winding number d of a loop in the embedded circle (0 for Sphere2).
struct HomotopyClass {
  int winding = 0;
};

/// Length of the shortest loop in the class, L0 |d|.
double minimal_length(const Target& t, HomotopyClass c);
/// Shortest closed non-trivial geodesic, L0.
double systole(const Target& t);
/// min over integer splittings d = sum d_i of sum (L0 d_i)^2 / 4pi, i.e. |d| L0^2 / 4pi.
double singular_energy(const Target& t, HomotopyClass c);
/// Constant-speed minimising geodesic in the class sampled at `samples` points.
std::vector<Vec> geodesic_loop(const Target& t, HomotopyClass c, int samples);

/// Winding of a closed polygonal loop around the origin (first two components),
/// measured in turns of the embedded circle.
int loop_winding(const std::vector<Vec>& loop);

}  // namespace glvortex
