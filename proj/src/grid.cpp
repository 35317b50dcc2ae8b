#include "glvortex/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <queue>
#include <sstream>

#include "glvortex/kernels.hpp"

namespace glvortex {

namespace {

constexpr double kRelTol = 1e-12;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

double to_double(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(Errc::Config, std::string("bad number for ") + what + ": '" + s + "'");
}

}  // namespace

Shape Shape::parse(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.empty()) throw Error(Errc::Config, "empty shape");
  if (parts[0] == "rect" && parts.size() == 3)
    return rectangle(to_double(parts[1], "width"), to_double(parts[2], "height"));
  if (parts[0] == "disk" && parts.size() == 2) return disk(to_double(parts[1], "radius"));
  if (parts[0] == "annulus" && parts.size() == 3)
    return annulus(to_double(parts[1], "r_in"), to_double(parts[2], "r_out"));
  throw Error(Errc::Config, "unknown shape '" + text + "'");
}

std::string Shape::to_string() const {
  switch (kind) {
    case ShapeKind::Rectangle: return "rect:" + num(width) + ":" + num(height);
    case ShapeKind::Disk: return "disk:" + num(r_out);
    case ShapeKind::Annulus: return "annulus:" + num(r_in) + ":" + num(r_out);
  }
  return "?";
}

bool Shape::contains(Point2 p) const {
  switch (kind) {
    case ShapeKind::Rectangle:
      return std::abs(p.x) <= 0.5 * width * (1 + kRelTol) &&
             std::abs(p.y) <= 0.5 * height * (1 + kRelTol);
    case ShapeKind::Disk: return std::hypot(p.x, p.y) <= r_out * (1 + kRelTol);
    case ShapeKind::Annulus: {
      const double r = std::hypot(p.x, p.y);
      return r <= r_out * (1 + kRelTol) && r >= r_in * (1 - kRelTol);
    }
  }
  return false;
}

double Shape::diameter() const {
  if (kind == ShapeKind::Rectangle) return std::hypot(width, height);
  return 2.0 * r_out;
}

double Shape::distance_to_boundary(Point2 p) const {
  const double r = std::hypot(p.x, p.y);
  switch (kind) {
    case ShapeKind::Rectangle:
      return std::min(0.5 * width - std::abs(p.x), 0.5 * height - std::abs(p.y));
    case ShapeKind::Disk: return r_out - r;
    case ShapeKind::Annulus: return std::min(r_out - r, r - r_in);
  }
  return 0.0;
}

bool Domain::contains(Point2 p) const {
  if (!shape_.contains(p)) return false;
  for (const Hole& hole : holes_) {
    if (distance(p, hole.center) < hole.radius * (1 - kRelTol)) return false;
  }
  return true;
}

double Domain::distance_to_boundary(Point2 p) const {
  double d = shape_.distance_to_boundary(p);
  for (const Hole& hole : holes_) d = std::min(d, distance(p, hole.center) - hole.radius);
  return d;
}

Domain Domain::build(const Shape& shape, double h, std::vector<Hole> holes) {
  if (!(h > 0.0)) throw Error(Errc::InvalidArgument, "grid spacing must be positive");
  std::vector<double> features;
  switch (shape.kind) {
    case ShapeKind::Rectangle:
      features = {shape.width, shape.height};
      break;
    case ShapeKind::Disk:
      features = {2.0 * shape.r_out};
      break;
    case ShapeKind::Annulus:
      if (!(shape.r_in > 0.0 && shape.r_in < shape.r_out))
        throw Error(Errc::InvalidArgument, "annulus needs 0 < r_in < r_out");
      features = {2.0 * shape.r_in, shape.r_out - shape.r_in};
      break;
  }
  for (const Hole& hole : holes) features.push_back(2.0 * hole.radius);
  for (double f : features) {
    if (f / h < 4.0 - 1e-9)
      throw Error(Errc::ResolutionTooCoarse, "feature of size " + num(f) + " spans fewer than 4 cells");
  }

  Domain d;
  d.shape_ = shape;
  d.holes_ = std::move(holes);
  d.h_ = h;
  int cx = 0;
  int cy = 0;
  if (shape.kind == ShapeKind::Rectangle) {
    cx = static_cast<int>(std::floor(shape.width / h + 1e-9)) + 1;
    cy = static_cast<int>(std::floor(shape.height / h + 1e-9)) + 1;
    d.x0_ = -0.5 * (cx - 1) * h - h;
    d.y0_ = -0.5 * (cy - 1) * h - h;
  } else {
    const int m = static_cast<int>(std::floor(shape.r_out / h + 1e-9));
    cx = cy = 2 * m + 1;
    d.x0_ = d.y0_ = -(m + 1) * h;
  }
  d.nx_ = cx + 2;
  d.ny_ = cy + 2;
  const std::size_t n = static_cast<std::size_t>(d.nx_) * static_cast<std::size_t>(d.ny_);
  std::vector<char> inside(n, 0);
  for (int iy = 1; iy < d.ny_ - 1; ++iy) {
    for (int ix = 1; ix < d.nx_ - 1; ++ix) {
      inside[d.index(ix, iy)] = d.contains({d.x(ix), d.y(iy)}) ? 1 : 0;
    }
  }
  d.kinds_.assign(n, static_cast<std::uint8_t>(NodeKind::Exterior));
  for (int iy = 1; iy < d.ny_ - 1; ++iy) {
    for (int ix = 1; ix < d.nx_ - 1; ++ix) {
      const std::size_t p = d.index(ix, iy);
      if (!inside[p]) continue;
      const bool all_in = inside[p - 1] && inside[p + 1] && inside[p - d.nx_] && inside[p + d.nx_];
      d.kinds_[p] = static_cast<std::uint8_t>(all_in ? NodeKind::Interior : NodeKind::Boundary);
      (all_in ? d.interior_ : d.boundary_).push_back(p);
    }
  }

  // Label boundary contours by 8-connectivity.
  std::vector<int> label(n, -1);
  d.contour_.assign(d.boundary_.size(), -1);
  int next = 0;
  for (std::size_t start : d.boundary_) {
    if (label[start] >= 0) continue;
    std::queue<std::size_t> todo;
    todo.push(start);
    label[start] = next;
    while (!todo.empty()) {
      const std::size_t p = todo.front();
      todo.pop();
      const int px = d.ix(p);
      const int py = d.iy(p);
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int qx = px + dx;
          const int qy = py + dy;
          if (qx < 0 || qy < 0 || qx >= d.nx_ || qy >= d.ny_) continue;
          const std::size_t q = d.index(qx, qy);
          if (d.kind(q) != NodeKind::Boundary || label[q] >= 0) continue;
          label[q] = next;
          todo.push(q);
        }
      }
    }
    ++next;
  }
  for (std::size_t i = 0; i < d.boundary_.size(); ++i) d.contour_[i] = label[d.boundary_[i]];
  d.contour_count_ = next;
  return d;
}

Field::Field(std::shared_ptr<const Domain> domain, int dim)
    : domain_(std::move(domain)),
      dim_(dim),
      values_(domain_->size() * static_cast<std::size_t>(dim), 0.0),
      trace_(domain_->boundary_nodes().size(), Vec{0.0, 0.0, 0.0}) {
  if (dim < 1 || dim > 3) throw Error(Errc::InvalidArgument, "field dimension must be 1..3");
}

Vec Field::at(std::size_t p) const {
  Vec v{0.0, 0.0, 0.0};
  for (int c = 0; c < dim_; ++c) v[static_cast<std::size_t>(c)] = values_[p * dim_ + c];
  return v;
}

void Field::set(std::size_t p, const Vec& v) {
  for (int c = 0; c < dim_; ++c) values_[p * dim_ + c] = v[static_cast<std::size_t>(c)];
}

void Field::set_trace(std::size_t slot, const Vec& v) {
  trace_.at(slot) = v;
  set(domain_->boundary_nodes()[slot], v);
}

void Field::apply_trace() {
  const auto& nodes = domain_->boundary_nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) set(nodes[i], trace_[i]);
}

bool Field::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

Vec BoundaryDatum::eval(const Target& t, double theta) const {
  const double a = t.radius();
  double phi = degree * theta;
  if (kind == Kind::PerturbedWinding) phi += amplitude * std::sin(mode * theta);
  return {a * std::cos(phi), a * std::sin(phi), 0.0};
}

namespace {

// True if the contour's nodes surround `center` (no angular gap wider than pi/2).
bool encloses(const Domain& d, int contour, Point2 center) {
  std::vector<double> angles;
  const auto& nodes = d.boundary_nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (d.boundary_contour()[i] != contour) continue;
    const Point2 p = d.position(nodes[i]);
    angles.push_back(std::atan2(p.y - center.y, p.x - center.x));
  }
  if (angles.size() < 3) return false;
  std::sort(angles.begin(), angles.end());
  double gap = angles.front() + 2.0 * std::numbers::pi - angles.back();
  for (std::size_t i = 1; i < angles.size(); ++i) gap = std::max(gap, angles[i] - angles[i - 1]);
  return gap < 0.5 * std::numbers::pi;
}

}  // namespace

int contour_winding(const Field& field, int contour, Point2 center) {
  const Domain& d = field.domain();
  std::vector<std::pair<double, std::size_t>> order;
  const auto& nodes = d.boundary_nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (d.boundary_contour()[i] != contour) continue;
    const Point2 p = d.position(nodes[i]);
    order.emplace_back(std::atan2(p.y - center.y, p.x - center.x), nodes[i]);
  }
  std::sort(order.begin(), order.end());
  std::vector<Vec> loop;
  loop.reserve(order.size());
  for (const auto& [angle, p] : order) loop.push_back(field.at(p));
  return loop_winding(loop);
}

void sample_boundary(Field& field, const Target& t, const BoundaryDatum& datum) {
  const Domain& d = field.domain();
  const auto& nodes = d.boundary_nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Point2 p = d.position(nodes[i]);
    if (datum.kind == BoundaryDatum::Kind::Custom) {
      field.set_trace(i, datum.custom(p));
    } else {
      field.set_trace(i, datum.eval(t, std::atan2(p.y, p.x)));
    }
  }
  if (datum.kind == BoundaryDatum::Kind::Custom) return;
  for (int c = 0; c < d.contour_count(); ++c) {
    if (!encloses(d, c, {0.0, 0.0})) continue;
    const int w = contour_winding(field, c, {0.0, 0.0});
    if (w != datum.degree) {
      throw Error(Errc::WindingMismatch, "sampled trace has winding " + std::to_string(w) +
                                             ", requested " + std::to_string(datum.degree));
    }
  }
}

double dirichlet_energy(const Field& field) {
  return kernels::dirichlet_energy(field.domain(), field.values(), field.dim());
}

std::vector<double> grad_dirichlet(const Field& field) {
  std::vector<double> g(field.values().size(), 0.0);
  kernels::dirichlet_gradient(field.domain(), field.values(), field.dim(), g);
  return g;
}

std::string holes_to_string(const std::vector<Hole>& holes) {
  std::string out;
  for (std::size_t i = 0; i < holes.size(); ++i) {
    if (i) out += ';';
    out += num(holes[i].center.x) + ":" + num(holes[i].center.y) + ":" + num(holes[i].radius);
  }
  return out;
}

std::vector<Hole> holes_from_string(const std::string& text) {
  std::vector<Hole> holes;
  if (text.empty()) return holes;
  for (const std::string& item : split(text, ';')) {
    const auto parts = split(item, ':');
    if (parts.size() != 3) throw Error(Errc::Config, "bad hole '" + item + "'");
    holes.push_back({{to_double(parts[0], "hole x"), to_double(parts[1], "hole y")},
                     to_double(parts[2], "hole radius")});
  }
  return holes;
}

void write_field_csv(std::ostream& out, const Field& field,
                     const std::vector<std::pair<std::string, std::string>>& meta) {
  const Domain& d = field.domain();
  out << "# glvortex field\n";
  out << "# shape=" << d.shape().to_string() << "\n";
  out << "# h=" << num(d.h()) << "\n";
  out << "# holes=" << holes_to_string(d.holes()) << "\n";
  out << "# dim=" << field.dim() << "\n";
  out << "# units=lattice indices; values in ambient coordinates\n";
  for (const auto& [k, v] : meta) out << "# " << k << "=" << v << "\n";
  out << "ix,iy,kind";
  for (int c = 0; c < field.dim(); ++c) out << ",v" << c;
  out << "\n";
  const auto vals = field.values();
  for (std::size_t p = 0; p < d.size(); ++p) {
    const NodeKind k = d.kind(p);
    if (k == NodeKind::Exterior) continue;
    out << d.ix(p) << ',' << d.iy(p) << ',' << (k == NodeKind::Interior ? 'I' : 'B');
    for (int c = 0; c < field.dim(); ++c) out << ',' << num(vals[p * field.dim() + c]);
    out << '\n';
  }
}

Field read_field_csv(std::istream& in) {
  std::map<std::string, std::string> meta;
  std::string line;
  std::vector<std::string> rows;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq != std::string::npos) {
        const std::size_t key_start = line.find_first_not_of(" #");
        meta[line.substr(key_start, eq - key_start)] = line.substr(eq + 1);
      }
      continue;
    }
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    rows.push_back(line);
  }
  if (!meta.count("shape") || !meta.count("h") || !meta.count("dim"))
    throw Error(Errc::Io, "field CSV lacks shape/h/dim metadata");
  auto domain = std::make_shared<const Domain>(Domain::build(
      Shape::parse(meta["shape"]), to_double(meta["h"], "h"), holes_from_string(meta["holes"])));
  const int dim = std::stoi(meta["dim"]);
  Field field(domain, dim);
  for (const std::string& row : rows) {
    const auto parts = split(row, ',');
    if (parts.size() != static_cast<std::size_t>(3 + dim)) throw Error(Errc::Io, "bad CSV row '" + row + "'");
    const int ix = std::stoi(parts[0]);
    const int iy = std::stoi(parts[1]);
    if (ix < 0 || iy < 0 || ix >= domain->nx() || iy >= domain->ny())
      throw Error(Errc::Io, "node index out of range in '" + row + "'");
    const std::size_t p = domain->index(ix, iy);
    const char kind = parts[2].empty() ? '?' : parts[2][0];
    const NodeKind expect = domain->kind(p);
    if ((kind == 'I') != (expect == NodeKind::Interior) || expect == NodeKind::Exterior)
      throw Error(Errc::Io, "node kind mismatch in '" + row + "'");
    Vec v{0.0, 0.0, 0.0};
    for (int c = 0; c < dim; ++c) v[static_cast<std::size_t>(c)] = to_double(parts[3 + c], "value");
    field.set(p, v);
  }
  const auto& nodes = domain->boundary_nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) field.set_trace(i, field.at(nodes[i]));
  return field;
}

}  // namespace glvortex
