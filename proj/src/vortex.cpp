#include "glvortex/vortex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace glvortex {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap(double a) { return std::remainder(a, 2.0 * kPi); }
double angle(const Vec& v) { return std::atan2(v[1], v[0]); }

bool admissible(const Field& f, const Target& t, std::size_t p) {
  if (f.domain().kind(p) == NodeKind::Exterior) return false;
  const Vec v = f.at(p);
  return norm(v) > 0.0 && t.dist(v) < t.delta();
}

// Winding of the closed node loop, or nothing if a node is inadmissible.
std::optional<int> loop_charge(const Field& f, const Target& t, const std::vector<std::size_t>& loop) {
  double sum = 0.0;
  for (std::size_t k = 0; k < loop.size(); ++k) {
    if (!admissible(f, t, loop[k])) return std::nullopt;
    sum += wrap(angle(f.at(loop[(k + 1) % loop.size()])) - angle(f.at(loop[k])));
  }
  return static_cast<int>(std::lround(sum / (2.0 * kPi)));
}

// Boundary of the node rectangle [x0, x1] x [y0, y1], counter-clockwise.
std::vector<std::size_t> rect_loop(const Domain& d, int x0, int y0, int x1, int y1) {
  std::vector<std::size_t> loop;
  for (int x = x0; x < x1; ++x) loop.push_back(d.index(x, y0));
  for (int y = y0; y < y1; ++y) loop.push_back(d.index(x1, y));
  for (int x = x1; x > x0; --x) loop.push_back(d.index(x, y1));
  for (int y = y1; y > y0; --y) loop.push_back(d.index(x0, y));
  return loop;
}

Ball merge_pair(const Ball& a, const Ball& b) {
  const double dx = b.center.x - a.center.x, dy = b.center.y - a.center.y;
  const double D = std::hypot(dx, dy);
  Ball out;
  out.radius = a.radius + b.radius;
  out.charge = a.charge + b.charge;
  out.accumulated_bound = a.accumulated_bound + b.accumulated_bound;
  if (D == 0.0) {
    out.center = a.center;
  } else {
    // Midpoint of the far edges, clamped so a nested disk stays covered.
    const double s = std::clamp(0.5 * (D + b.radius - a.radius), std::max(-b.radius, D - a.radius),
                                std::min(b.radius, D + a.radius));
    out.center = {a.center.x + s * dx / D, a.center.y + s * dy / D};
  }
  return out;
}

// Node gradient (u_x, u_y) with central differences where possible.
void node_derivatives(const Field& f, std::size_t p, Vec& ux, Vec& uy) {
  const Domain& d = f.domain();
  const double h = d.h();
  auto diff = [&](std::size_t minus, std::size_t plus, bool has_m, bool has_p, Vec& out) {
    const Vec c = f.at(p);
    if (has_m && has_p) {
      out = (0.5 / h) * (f.at(plus) - f.at(minus));
    } else if (has_p) {
      out = (1.0 / h) * (f.at(plus) - c);
    } else if (has_m) {
      out = (1.0 / h) * (c - f.at(minus));
    } else {
      out = {0.0, 0.0, 0.0};
    }
  };
  const int ix = d.ix(p), iy = d.iy(p);
  auto live = [&](int x, int y) {
    return x >= 0 && y >= 0 && x < d.nx() && y < d.ny() &&
           d.kind(d.index(x, y)) != NodeKind::Exterior;
  };
  const bool l = live(ix - 1, iy), r = live(ix + 1, iy), b = live(ix, iy - 1), t = live(ix, iy + 1);
  diff(l ? d.index(ix - 1, iy) : p, r ? d.index(ix + 1, iy) : p, l, r, ux);
  diff(b ? d.index(ix, iy - 1) : p, t ? d.index(ix, iy + 1) : p, b, t, uy);
}

}  // namespace

VortexCensus plaquette_windings(const Field& field, const Target& t) {
  if (!t.circle_like()) throw Error(Errc::Unsupported, "plaquette windings need a circle-like target");
  const Domain& d = field.domain();
  const int px = d.nx() - 1, py = d.ny() - 1;
  // 0: not a plaquette, 1: admissible, 2: defective.
  std::vector<char> state(static_cast<std::size_t>(px) * py, 0);
  std::vector<int> wind(state.size(), 0);
  auto pidx = [&](int x, int y) { return static_cast<std::size_t>(y) * px + x; };
  for (int y = 0; y < py; ++y) {
    for (int x = 0; x < px; ++x) {
      const std::vector<std::size_t> c = {d.index(x, y), d.index(x + 1, y), d.index(x + 1, y + 1),
                                          d.index(x, y + 1)};
      bool live = true;
      for (std::size_t p : c) live = live && d.kind(p) != NodeKind::Exterior;
      if (!live) continue;
      const auto w = loop_charge(field, t, c);
      state[pidx(x, y)] = w ? 1 : 2;
      if (w) wind[pidx(x, y)] = *w;
    }
  }
  VortexCensus census;
  for (int y = 0; y < py; ++y) {
    for (int x = 0; x < px; ++x) {
      if (state[pidx(x, y)] == 1 && wind[pidx(x, y)] != 0) {
        census.vortices.push_back({{d.x(x) + 0.5 * d.h(), d.y(y) + 0.5 * d.h()}, wind[pidx(x, y)], false});
      }
    }
  }
  std::vector<char> seen(state.size(), 0);
  for (int y0 = 0; y0 < py; ++y0) {
    for (int x0 = 0; x0 < px; ++x0) {
      if (state[pidx(x0, y0)] != 2 || seen[pidx(x0, y0)]) continue;
      std::vector<std::pair<int, int>> cluster, stack{{x0, y0}};
      seen[pidx(x0, y0)] = 1;
      while (!stack.empty()) {
        const auto [x, y] = stack.back();
        stack.pop_back();
        cluster.push_back({x, y});
        const int nb[4][2] = {{x + 1, y}, {x - 1, y}, {x, y + 1}, {x, y - 1}};
        for (const auto& q : nb) {
          if (q[0] < 0 || q[1] < 0 || q[0] >= px || q[1] >= py) continue;
          const std::size_t k = pidx(q[0], q[1]);
          if (state[k] == 2 && !seen[k]) {
            seen[k] = 1;
            stack.push_back({q[0], q[1]});
          }
        }
      }
      census.defective_plaquettes += static_cast<int>(cluster.size());
      int bx0 = px, by0 = py, bx1 = -1, by1 = -1;
      Point2 centre{0.0, 0.0};
      for (const auto& [x, y] : cluster) {
        bx0 = std::min(bx0, x);
        by0 = std::min(by0, y);
        bx1 = std::max(bx1, x);
        by1 = std::max(by1, y);
        centre.x += d.x(x) + 0.5 * d.h();
        centre.y += d.y(y) + 0.5 * d.h();
      }
      centre.x /= static_cast<double>(cluster.size());
      centre.y /= static_cast<double>(cluster.size());
      // Node rectangle [bx0, bx1 + 1] x [by0, by1 + 1] covers the cluster.
      int nx0 = bx0, ny0 = by0, nx1 = bx1 + 1, ny1 = by1 + 1;
      std::optional<int> w;
      while (nx0 >= 0 && ny0 >= 0 && nx1 < d.nx() && ny1 < d.ny()) {
        w = loop_charge(field, t, rect_loop(d, nx0, ny0, nx1, ny1));
        if (w) break;
        --nx0;
        --ny0;
        ++nx1;
        ++ny1;
      }
      if (!w) continue;
      int inner = *w;
      for (int y = ny0; y < ny1; ++y) {
        for (int x = nx0; x < nx1; ++x) {
          if (state[pidx(x, y)] == 1) inner -= wind[pidx(x, y)];
        }
      }
      if (inner != 0) census.vortices.push_back({centre, inner, true});
    }
  }
  for (const auto& v : census.vortices) census.total += v.winding;
  return census;
}

std::optional<Vec> interpolate(const Field& field, Point2 x) {
  const Domain& d = field.domain();
  const double fx = (x.x - d.x(0)) / d.h(), fy = (x.y - d.y(0)) / d.h();
  const int ix = static_cast<int>(std::floor(fx)), iy = static_cast<int>(std::floor(fy));
  if (ix < 0 || iy < 0 || ix + 1 >= d.nx() || iy + 1 >= d.ny()) return std::nullopt;
  const double sx = fx - ix, sy = fy - iy;
  const std::size_t c00 = d.index(ix, iy), c10 = d.index(ix + 1, iy), c01 = d.index(ix, iy + 1),
                    c11 = d.index(ix + 1, iy + 1);
  for (std::size_t p : {c00, c10, c01, c11}) {
    if (d.kind(p) == NodeKind::Exterior) return std::nullopt;
  }
  return (1 - sx) * (1 - sy) * field.at(c00) + sx * (1 - sy) * field.at(c10) +
         (1 - sx) * sy * field.at(c01) + sx * sy * field.at(c11);
}

std::optional<int> circle_charge(const Field& field, const Target& t, Point2 center, double r) {
  const int samples = std::max(64, static_cast<int>(std::ceil(16.0 * kPi * r / field.domain().h())));
  double sum = 0.0;
  double prev = 0.0;
  for (int k = 0; k <= samples; ++k) {
    const double th = 2.0 * kPi * (k % samples) / samples;
    const auto v = interpolate(field, {center.x + r * std::cos(th), center.y + r * std::sin(th)});
    if (!v || norm(*v) == 0.0 || t.dist(*v) >= t.delta()) return std::nullopt;
    const double a = angle(*v);
    if (k > 0) sum += wrap(a - prev);
    prev = a;
  }
  return static_cast<int>(std::lround(sum / (2.0 * kPi)));
}

std::vector<Ball> sublevel_cover(const Field& field, const Target& t, double delta) {
  if (!(delta > 0.0) || !(delta < t.delta())) {
    throw Error(Errc::InvalidArgument, "sublevel threshold must lie in (0, delta_N)");
  }
  const Domain& d = field.domain();
  std::vector<char> in_k(d.size(), 0);
  for (std::size_t p = 0; p < d.size(); ++p) {
    if (d.kind(p) == NodeKind::Exterior) continue;
    if (t.dist(field.at(p)) >= delta) {
      if (d.kind(p) == NodeKind::Boundary) {
        throw Error(Errc::ComponentTouchesBoundary, "sublevel set meets the domain boundary");
      }
      in_k[p] = 1;
    }
  }
  std::vector<Ball> disks;
  std::vector<char> seen(d.size(), 0);
  for (std::size_t s = 0; s < d.size(); ++s) {
    if (!in_k[s] || seen[s]) continue;
    std::vector<std::size_t> comp, stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      const std::size_t p = stack.back();
      stack.pop_back();
      comp.push_back(p);
      const int x = d.ix(p), y = d.iy(p);
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int qx = x + dx, qy = y + dy;
          if (qx < 0 || qy < 0 || qx >= d.nx() || qy >= d.ny()) continue;
          const std::size_t q = d.index(qx, qy);
          if (in_k[q] && !seen[q]) {
            seen[q] = 1;
            stack.push_back(q);
          }
        }
      }
    }
    Point2 c{0.0, 0.0};
    for (std::size_t p : comp) {
      c.x += d.position(p).x;
      c.y += d.position(p).y;
    }
    c.x /= static_cast<double>(comp.size());
    c.y /= static_cast<double>(comp.size());
    double r = 0.0;
    for (std::size_t p : comp) r = std::max(r, distance(c, d.position(p)));
    disks.push_back({c, r + 0.5 * d.h(), 0, 0.0});
  }
  auto balls = merge_disks(disks);
  if (t.circle_like()) {
    std::optional<VortexCensus> census;
    for (auto& b : balls) {
      bool found = false;
      for (double extra = 0.0; extra <= 0.25 && !found; extra += 0.25 * d.h()) {
        const auto q = circle_charge(field, t, b.center, b.radius + extra);
        if (q) {
          b.charge = *q;
          found = true;
        }
      }
      if (found) continue;
      if (!census) census = plaquette_windings(field, t);
      for (const auto& v : census->vortices) {
        if (distance(v.center, b.center) <= b.radius) b.charge += v.winding;
      }
    }
  }
  return balls;
}

MergeResult merge_disks_tracked(const std::vector<Ball>& balls) {
  MergeResult out;
  out.balls = balls;
  out.owner.resize(balls.size());
  for (std::size_t i = 0; i < balls.size(); ++i) out.owner[i] = i;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < out.balls.size() && !changed; ++i) {
      for (std::size_t j = i + 1; j < out.balls.size() && !changed; ++j) {
        const Ball& a = out.balls[i];
        const Ball& b = out.balls[j];
        if (distance(a.center, b.center) > a.radius + b.radius) continue;
        out.balls[i] = merge_pair(a, b);
        out.balls.erase(out.balls.begin() + static_cast<std::ptrdiff_t>(j));
        for (auto& o : out.owner) {
          if (o == j) {
            o = i;
          } else if (o > j) {
            --o;
          }
        }
        changed = true;
      }
    }
  }
  return out;
}

std::vector<Ball> merge_disks(const std::vector<Ball>& balls) {
  return merge_disks_tracked(balls).balls;
}

double default_c1(const Target& t, const Potential& p) {
  const double dn = t.delta();
  const double l0 = t.circumference().value_or(2.0 * kPi);
  return 0.1 * std::min(dn * dn, p.m_F * dn * dn) / l0;
}

double annulus_bound(const Target& t, double eps, double c1, double r0, double r1) {
  const double lam = t.circumference().value_or(0.0);
  if (lam == 0.0) return 0.0;
  const double l2 = lam * lam;
  return l2 / (4.0 * kPi) *
         std::log((eps / c1 + 4.0 * kPi * r1 / l2) / (eps / c1 + 4.0 * kPi * r0 / l2));
}

GrowthResult ball_growth(const std::vector<Ball>& balls, double eps, double eta, const Target& t,
                         double c1, const Domain* domain) {
  if (!(eps > 0.0) || !(c1 > 0.0)) throw Error(Errc::InvalidArgument, "eps and c1 must be positive");
  GrowthResult out;
  out.balls = merge_disks(balls);
  double sum = 0.0;
  for (const auto& b : out.balls) {
    if (!(b.radius > 0.0)) throw Error(Errc::InvalidArgument, "ball radii must be positive");
    sum += b.radius;
  }
  if (out.balls.empty()) return out;
  if (!(eta > sum)) throw Error(Errc::EtaTooLarge, "eta must exceed the initial radius sum");
  if (domain) {
    for (const auto& b : out.balls) {
      if (b.charge == 0) continue;
      const double gap = domain->distance_to_boundary(b.center) - b.radius;
      if (!(eta < 0.5 * gap)) {
        throw Error(Errc::EtaTooLarge, "eta reaches half the distance of a charged ball to the boundary");
      }
    }
  }
  for (;;) {
    sum = 0.0;
    for (const auto& b : out.balls) sum += b.radius;
    const double t_eta = eta / sum;
    double t_next = t_eta;
    for (std::size_t i = 0; i < out.balls.size(); ++i) {
      for (std::size_t j = i + 1; j < out.balls.size(); ++j) {
        const auto& a = out.balls[i];
        const auto& b = out.balls[j];
        t_next = std::min(t_next, distance(a.center, b.center) / (a.radius + b.radius));
      }
    }
    t_next = std::max(t_next, 1.0);
    for (auto& b : out.balls) {
      const double r1 = b.radius * t_next;
      if (b.charge != 0) b.accumulated_bound += std::abs(b.charge) * annulus_bound(t, eps, c1, b.radius, r1);
      b.radius = r1;
    }
    if (t_next >= t_eta) break;
    const std::size_t before = out.balls.size();
    out.balls = merge_disks(out.balls);
    out.merges += static_cast<int>(before - out.balls.size());
  }
  for (const auto& b : out.balls) out.total_lower_bound += b.accumulated_bound;
  return out;
}

double ConcentrationMeasure::total() const {
  double s = 0.0;
  for (double m : mass) s += m;
  return s;
}

double ConcentrationMeasure::block_mass(Point2 x, int k) const {
  const int cx = static_cast<int>(std::floor((x.x - x0) / cell_size));
  const int cy = static_cast<int>(std::floor((x.y - y0) / cell_size));
  double s = 0.0;
  for (int y = cy - k; y <= cy + k; ++y) {
    for (int xx = cx - k; xx <= cx + k; ++xx) {
      if (xx < 0 || y < 0 || xx >= nx || y >= ny) continue;
      s += mass[static_cast<std::size_t>(y) * nx + xx];
    }
  }
  return s;
}

ConcentrationMeasure concentration_measure(const Field& field, double eps, double cell_size) {
  const Domain& d = field.domain();
  if (!(cell_size >= 4.0 * d.h() * (1.0 - 1e-12))) {
    throw Error(Errc::InvalidArgument, "cell_size must be at least 4h");
  }
  if (!(eps > 0.0 && eps < 1.0)) throw Error(Errc::InvalidArgument, "eps must lie in (0, 1)");
  ConcentrationMeasure cm;
  cm.cells_per_side = std::max(4, static_cast<int>(std::lround(cell_size / d.h())));
  cm.cell_size = cm.cells_per_side * d.h();
  cm.x0 = d.x(0) - 0.5 * d.h();
  cm.y0 = d.y(0) - 0.5 * d.h();
  cm.nx = (d.nx() + cm.cells_per_side - 1) / cm.cells_per_side;
  cm.ny = (d.ny() + cm.cells_per_side - 1) / cm.cells_per_side;
  cm.mass.assign(static_cast<std::size_t>(cm.nx) * cm.ny, 0.0);
  const double norm_log = 1.0 / std::log(1.0 / eps);
  const int dim = field.dim();
  const auto u = field.values();
  auto cell_of = [&](std::size_t p) {
    return static_cast<std::size_t>(d.iy(p) / cm.cells_per_side) * cm.nx +
           static_cast<std::size_t>(d.ix(p) / cm.cells_per_side);
  };
  for (std::size_t p = 0; p < d.size(); ++p) {
    if (d.kind(p) == NodeKind::Exterior) continue;
    for (int dir = 0; dir < 2; ++dir) {
      if (dir == 0 && d.ix(p) + 1 >= d.nx()) continue;
      if (dir == 1 && d.iy(p) + 1 >= d.ny()) continue;
      const std::size_t q = dir == 0 ? p + 1 : p + static_cast<std::size_t>(d.nx());
      if (d.kind(q) == NodeKind::Exterior) continue;
      double s = 0.0;
      for (int c = 0; c < dim; ++c) {
        const double t = u[p * dim + c] - u[q * dim + c];
        s += t * t;
      }
      cm.mass[cell_of(p)] += 0.25 * s * norm_log;
      cm.mass[cell_of(q)] += 0.25 * s * norm_log;
    }
  }
  return cm;
}

std::vector<double> gradient_magnitude(const Field& field) {
  const Domain& d = field.domain();
  std::vector<double> g(d.size(), 0.0);
  for (std::size_t p = 0; p < d.size(); ++p) {
    if (d.kind(p) == NodeKind::Exterior) continue;
    Vec ux, uy;
    node_derivatives(field, p, ux, uy);
    g[p] = std::sqrt(dot(ux, ux) + dot(uy, uy));
  }
  return g;
}

double weak_l2_statistic(const Field& field) {
  const Domain& d = field.domain();
  std::vector<double> g;
  const auto all = gradient_magnitude(field);
  for (std::size_t p = 0; p < d.size(); ++p) {
    if (d.kind(p) != NodeKind::Exterior) g.push_back(all[p]);
  }
  std::sort(g.begin(), g.end(), std::greater<>());
  const double cell = d.h() * d.h();
  double best = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    best = std::max(best, g[k] * g[k] * static_cast<double>(k + 1) * cell);
  }
  return best;
}

std::array<double, 2> hopf_residue(const Field& field, Point2 center, double radius, int samples) {
  const Domain& d = field.domain();
  if (samples <= 0) samples = std::max(128, static_cast<int>(std::ceil(16.0 * kPi * radius / d.h())));
  // Node derivative fields, interpolated bilinearly along the contour.
  std::vector<Vec> ux(d.size()), uy(d.size());
  for (std::size_t p = 0; p < d.size(); ++p) {
    if (d.kind(p) == NodeKind::Exterior) continue;
    node_derivatives(field, p, ux[p], uy[p]);
  }
  double re = 0.0, im = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double th = 2.0 * kPi * k / samples;
    const Point2 x{center.x + radius * std::cos(th), center.y + radius * std::sin(th)};
    const double fx = (x.x - d.x(0)) / d.h(), fy = (x.y - d.y(0)) / d.h();
    const int ix = static_cast<int>(std::floor(fx)), iy = static_cast<int>(std::floor(fy));
    if (ix < 0 || iy < 0 || ix + 1 >= d.nx() || iy + 1 >= d.ny()) {
      throw Error(Errc::InvalidArgument, "Hopf contour leaves the lattice");
    }
    const double sx = fx - ix, sy = fy - iy;
    const std::size_t c[4] = {d.index(ix, iy), d.index(ix + 1, iy), d.index(ix, iy + 1),
                              d.index(ix + 1, iy + 1)};
    const double w[4] = {(1 - sx) * (1 - sy), sx * (1 - sy), (1 - sx) * sy, sx * sy};
    Vec gx{0, 0, 0}, gy{0, 0, 0};
    for (int j = 0; j < 4; ++j) {
      if (d.kind(c[j]) == NodeKind::Exterior) {
        throw Error(Errc::InvalidArgument, "Hopf contour leaves the domain");
      }
      gx = gx + w[j] * ux[c[j]];
      gy = gy + w[j] * uy[c[j]];
    }
    const double A = dot(gx, gx) - dot(gy, gy);
    const double B = 2.0 * dot(gx, gy);
    re += A * std::cos(th) + B * std::sin(th);
    im += A * std::sin(th) - B * std::cos(th);
  }
  return {radius * re / samples, radius * im / samples};
}

}  // namespace glvortex
