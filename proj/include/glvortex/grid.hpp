#pragma once

// Masked uniform 2D grids with Dirichlet boundary traces.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "glvortex/target.hpp"

namespace glvortex {

enum class NodeKind : std::uint8_t { Exterior = 0, Interior = 1, Boundary = 2 };

enum class ShapeKind { Rectangle, Disk, Annulus };

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Outer shape, centred at the origin.
struct Shape {
  ShapeKind kind = ShapeKind::Disk;
  double width = 0.0;   // Rectangle
  double height = 0.0;  // Rectangle
  double r_in = 0.0;    // Annulus
  double r_out = 1.0;   // Disk radius, Annulus outer radius

  static Shape rectangle(double w, double h) { return {ShapeKind::Rectangle, w, h, 0.0, 0.0}; }
  static Shape disk(double radius) { return {ShapeKind::Disk, 0.0, 0.0, 0.0, radius}; }
  static Shape annulus(double r_in, double r_out) {
    return {ShapeKind::Annulus, 0.0, 0.0, r_in, r_out};
  }

  /// "rect:W:H", "disk:R" or "annulus:RIN:ROUT".
  static Shape parse(const std::string& text);
  std::string to_string() const;

  bool contains(Point2 p) const;
  double diameter() const;
  /// Distance from an inside point to the continuum boundary.
  double distance_to_boundary(Point2 p) const;
};

/// Circular hole excised from the shape (closed disk removed).
struct Hole {
  Point2 center;
  double radius = 0.0;
};

/// Node lattice over a shape. Nodes inside the shape (and outside every hole)
/// are Boundary if one of their 4 neighbours is outside, Interior otherwise.
/// The lattice carries one padding ring of Exterior nodes so that every
/// non-exterior node has four in-range neighbours.
class Domain {
 public:
  /// Throws Errc::ResolutionTooCoarse if a feature spans fewer than 4 cells.
  static Domain build(const Shape& shape, double h, std::vector<Hole> holes = {});

  const Shape& shape() const { return shape_; }
  const std::vector<Hole>& holes() const { return holes_; }
  double h() const { return h_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  std::size_t size() const { return kinds_.size(); }

  std::size_t index(int ix, int iy) const {
    return static_cast<std::size_t>(iy) * static_cast<std::size_t>(nx_) +
           static_cast<std::size_t>(ix);
  }
  int ix(std::size_t p) const { return static_cast<int>(p % static_cast<std::size_t>(nx_)); }
  int iy(std::size_t p) const { return static_cast<int>(p / static_cast<std::size_t>(nx_)); }
  double x(int ix) const { return x0_ + ix * h_; }
  double y(int iy) const { return y0_ + iy * h_; }
  Point2 position(std::size_t p) const { return {x(ix(p)), y(iy(p))}; }

  NodeKind kind(std::size_t p) const { return static_cast<NodeKind>(kinds_[p]); }
  std::span<const std::uint8_t> kinds() const { return kinds_; }
  const std::vector<std::size_t>& interior_nodes() const { return interior_; }
  const std::vector<std::size_t>& boundary_nodes() const { return boundary_; }

  /// Contour label of each entry of boundary_nodes() (8-connected components).
  const std::vector<int>& boundary_contour() const { return contour_; }
  int contour_count() const { return contour_count_; }

  /// Continuum membership (shape minus holes).
  bool contains(Point2 p) const;
  double distance_to_boundary(Point2 p) const;

 private:
  Shape shape_;
  std::vector<Hole> holes_;
  double h_ = 0.0;
  int nx_ = 0;
  int ny_ = 0;
  double x0_ = 0.0;
  double y0_ = 0.0;
  std::vector<std::uint8_t> kinds_;
  std::vector<std::size_t> interior_;
  std::vector<std::size_t> boundary_;
  std::vector<int> contour_;
  int contour_count_ = 0;
};

/// nu-vector per lattice node (exterior entries stay zero) plus the frozen
/// Dirichlet trace on boundary nodes.
class Field {
 public:
  Field(std::shared_ptr<const Domain> domain, int dim);

  const Domain& domain() const { return *domain_; }
  std::shared_ptr<const Domain> domain_ptr() const { return domain_; }
  int dim() const { return dim_; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  Vec at(std::size_t p) const;
  void set(std::size_t p, const Vec& v);

  /// Trace value for boundary_nodes()[i].
  const std::vector<Vec>& trace() const { return trace_; }
  void set_trace(std::size_t boundary_slot, const Vec& v);
  /// Copies the trace onto the boundary nodes.
  void apply_trace();

  bool all_finite() const;

 private:
  std::shared_ptr<const Domain> domain_;
  int dim_;
  std::vector<double> values_;
  std::vector<Vec> trace_;
};

/// Boundary datum g sampled at the polar angle of each boundary node.
struct BoundaryDatum {
  enum class Kind { GeodesicWinding, PerturbedWinding, Custom };
  Kind kind = Kind::GeodesicWinding;
  int degree = 0;
  double amplitude = 0.0;
  int mode = 1;
  /// Custom datum as a function of the boundary point.
  std::function<Vec(Point2)> custom;

  static BoundaryDatum geodesic(int d) { return {Kind::GeodesicWinding, d, 0.0, 1, {}}; }
  static BoundaryDatum perturbed(int d, double amp, int mode) {
    return {Kind::PerturbedWinding, d, amp, mode, {}};
  }
  static BoundaryDatum from_function(std::function<Vec(Point2)> fn) {
    return {Kind::Custom, 0, 0.0, 1, std::move(fn)};
  }

  /// g at polar angle theta for the winding kinds.
  Vec eval(const Target& t, double theta) const;
};

/// Writes g onto every boundary node (and the trace). For winding data the
/// discrete winding of every contour that encloses the origin is checked;
/// Errc::WindingMismatch if it differs from the requested degree.
void sample_boundary(Field& field, const Target& t, const BoundaryDatum& datum);

/// Discrete winding of the field along one boundary contour, nodes ordered by
/// polar angle around `center`.
int contour_winding(const Field& field, int contour, Point2 center);

/// Sum over x/y-adjacent non-exterior pairs of |u_a - u_b|^2 / 2.
double dirichlet_energy(const Field& field);
/// Exact derivative of dirichlet_energy; zero on boundary and exterior nodes.
std::vector<double> grad_dirichlet(const Field& field);

/// CSV with '#' metadata lines and columns ix,iy,kind,v0..v{nu-1}.
void write_field_csv(std::ostream& out, const Field& field,
                     const std::vector<std::pair<std::string, std::string>>& meta = {});
Field read_field_csv(std::istream& in);

std::string holes_to_string(const std::vector<Hole>& holes);
std::vector<Hole> holes_from_string(const std::string& text);

}  // namespace glvortex
