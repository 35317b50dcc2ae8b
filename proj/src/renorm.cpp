#include "glvortex/renorm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <numbers>

#include "glvortex/kernels.hpp"

namespace glvortex {

namespace {

constexpr double kPi = std::numbers::pi;

// Radial restriction F(a f e) of the potential and its first two derivatives in f.
struct RadialPotential {
  PotentialKind kind;
  double a;

  double value(double f) const {
    if (kind == PotentialKind::Quartic) {
      const double s = 1.0 - f * f;
      return a * a * s * s / 4.0;
    }
    const double s = std::abs(f) - 1.0;
    return a * a * s * s;
  }
  double d1(double f) const {
    if (kind == PotentialKind::Quartic) return -a * a * f * (1.0 - f * f);
    const double sg = f < 0.0 ? -1.0 : 1.0;
    return 2.0 * a * a * (std::abs(f) - 1.0) * sg;
  }
  double d2(double f) const {
    if (kind == PotentialKind::Quartic) return a * a * (3.0 * f * f - 1.0);
    return 2.0 * a * a;
  }
};

// Local quadratic form of one interval: c (f1 - f0)^2 + d^2 [f0 f1] G [f0 f1]^T.
struct Interval {
  double c;
  double g00, g01, g11;
};

// Solves the symmetric tridiagonal system (diag, off) x = rhs. Returns false if
// a pivot is not positive (matrix not positive definite).
bool thomas_spd(std::vector<double> diag, const std::vector<double>& off, std::vector<double>& x) {
  const std::size_t n = diag.size();
  std::vector<double> l(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) {
      l[i] = off[i - 1] / diag[i - 1];
      diag[i] -= l[i] * off[i - 1];
      x[i] -= l[i] * x[i - 1];
    }
    if (!(diag[i] > 0.0)) return false;
  }
  x[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = (x[i] - off[i] * x[i + 1]) / diag[i];
  return true;
}

std::vector<double> radial_grid(double R, int nodes) {
  const int n = nodes - 1;
  const double rmin = 1e-3 * std::min(1.0, R);
  const double q = std::pow(R / rmin, 1.0 / (n - 1));
  std::vector<double> r(static_cast<std::size_t>(nodes));
  r[0] = 0.0;
  for (int i = 1; i <= n; ++i) r[static_cast<std::size_t>(i)] = rmin * std::pow(q, i - 1);
  r.back() = R;
  return r;
}

int sampled_winding(const std::function<Vec(double)>& loop, const Target& t) {
  if (!t.circle_like()) return 0;
  std::vector<Vec> pts;
  constexpr int samples = 1024;
  for (int j = 0; j < samples; ++j) pts.push_back(loop(2.0 * kPi * j / samples));
  return loop_winding(pts);
}

}  // namespace

CellProblemResult cell_problem_radial(const Model& m, int degree, double R, int radial_nodes) {
  if (!m.target.circle_like()) throw Error(Errc::Unsupported, "radial cell problem needs a circle");
  if (!(R > 0.0)) throw Error(Errc::InvalidArgument, "cell radius must be positive");
  if (radial_nodes < 8) throw Error(Errc::InvalidArgument, "radial_nodes must be at least 8");
  CellProblemResult out;
  out.R = R;
  out.degree = degree;
  if (degree == 0) {
    out.r = {0.0, R};
    out.f = {1.0, 1.0};
    return out;
  }
  const double a = m.target.radius();
  const double dd = static_cast<double>(degree) * degree;
  const RadialPotential pot{m.potential.kind, a};
  const std::vector<double> r = radial_grid(R, radial_nodes);
  const std::size_t N = r.size() - 1;

  std::vector<Interval> iv(N);
  std::vector<double> w(N + 1, 0.0);
  for (std::size_t i = 0; i < N; ++i) {
    const double r0 = r[i], r1 = r[i + 1], h = r1 - r0;
    const double L = i == 0 ? 0.0 : std::log(r1 / r0);
    const double M = h;
    const double P = 0.5 * (r1 * r1 - r0 * r0);
    const double a0 = r1 / h, a1 = -r0 / h, b0 = -1.0 / h, b1 = 1.0 / h;
    iv[i].c = P / (h * h);
    iv[i].g00 = L * a0 * a0 + 2.0 * M * a0 * b0 + P * b0 * b0;
    iv[i].g01 = L * a0 * a1 + M * (a0 * b1 + a1 * b0) + P * b0 * b1;
    iv[i].g11 = L * a1 * a1 + 2.0 * M * a1 * b1 + P * b1 * b1;
    w[i] += h * (2.0 * r0 + r1) / 6.0;
    w[i + 1] += h * (r0 + 2.0 * r1) / 6.0;
  }
  const double k2 = kPi * a * a;

  auto energy = [&](const std::vector<double>& f) {
    double e = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double f0 = f[i], f1 = f[i + 1];
      const double df = f1 - f0;
      e += k2 * (iv[i].c * df * df +
                 dd * (iv[i].g00 * f0 * f0 + 2.0 * iv[i].g01 * f0 * f1 + iv[i].g11 * f1 * f1));
    }
    for (std::size_t i = 0; i <= N; ++i) e += 2.0 * kPi * w[i] * pot.value(f[i]);
    return e;
  };

  std::vector<double> f(N + 1);
  const double ad = std::abs(static_cast<double>(degree));
  auto guess = [&](double x) { return std::pow(x * x / (x * x + 2.0 * dd), ad / 2.0); };
  for (std::size_t i = 0; i <= N; ++i) f[i] = guess(r[i]) / guess(R);
  f[0] = 0.0;
  f[N] = 1.0;

  const std::size_t n = N - 1;  // unknowns f_1 .. f_{N-1}
  std::vector<double> grad(n), diag(n), off(n > 0 ? n - 1 : 0), step(n), trial(N + 1);
  double e = energy(f);
  double mu = 0.0;
  int it = 0;
  bool done = false;
  for (; it < 400 && !done; ++it) {
    std::fill(grad.begin(), grad.end(), 0.0);
    std::fill(diag.begin(), diag.end(), 0.0);
    std::fill(off.begin(), off.end(), 0.0);
    for (std::size_t i = 0; i < N; ++i) {
      const double f0 = f[i], f1 = f[i + 1];
      const double h00 = 2.0 * k2 * (iv[i].c + dd * iv[i].g00);
      const double h01 = 2.0 * k2 * (-iv[i].c + dd * iv[i].g01);
      const double h11 = 2.0 * k2 * (iv[i].c + dd * iv[i].g11);
      const double gr0 = h00 * f0 + h01 * f1;
      const double gr1 = h01 * f0 + h11 * f1;
      if (i >= 1) {
        grad[i - 1] += gr0;
        diag[i - 1] += h00;
      }
      if (i + 1 <= n) {
        grad[i] += gr1;
        diag[i] += h11;
      }
      if (i >= 1 && i + 1 <= n) off[i - 1] += h01;
    }
    for (std::size_t j = 0; j < n; ++j) {
      grad[j] += 2.0 * kPi * w[j + 1] * pot.d1(f[j + 1]);
      diag[j] += 2.0 * kPi * w[j + 1] * pot.d2(f[j + 1]);
    }
    double scale = 0.0;
    for (double v : diag) scale = std::max(scale, std::abs(v));
    // Levenberg shift until the tridiagonal system is positive definite.
    for (int tries = 0;; ++tries) {
      std::vector<double> dshift(diag);
      for (double& v : dshift) v += mu * scale;
      for (std::size_t j = 0; j < n; ++j) step[j] = -grad[j];
      if (thomas_spd(dshift, off, step)) break;
      mu = mu == 0.0 ? 1e-10 : mu * 10.0;
      if (tries > 40) throw Error(Errc::NonconvergedODE, "radial Hessian regularisation failed");
    }
    double slope = 0.0;
    for (std::size_t j = 0; j < n; ++j) slope += grad[j] * step[j];
    if (-slope < 1e-15 * std::max(1.0, e)) {
      done = true;
      break;
    }
    double t = 1.0;
    bool accepted = false;
    while (t > 1e-12) {
      trial = f;
      for (std::size_t j = 0; j < n; ++j) trial[j + 1] = f[j + 1] + t * step[j];
      const double et = energy(trial);
      if (et <= e + 1e-4 * t * slope) {
        f.swap(trial);
        e = et;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      if (-slope < 1e-12 * std::max(1.0, e)) {
        done = true;
        break;
      }
      mu = mu == 0.0 ? 1e-8 : mu * 10.0;
      continue;
    }
    if (t == 1.0) mu *= 0.1;
    if (mu < 1e-14) mu = 0.0;
  }
  if (!done) throw Error(Errc::NonconvergedODE, "radial Newton did not converge");
  out.Q = e;
  out.q = e - k2 * dd * std::log(R);
  out.r = r;
  out.f = f;
  out.iterations = it;
  return out;
}

double profile_at(const CellProblemResult& cell, double r) {
  if (cell.r.empty()) return 1.0;
  if (r >= cell.r.back()) return cell.f.back();
  if (r <= 0.0) return cell.f.front();
  const auto it = std::upper_bound(cell.r.begin(), cell.r.end(), r);
  const std::size_t j = static_cast<std::size_t>(it - cell.r.begin());
  const double r0 = cell.r[j - 1], r1 = cell.r[j];
  const double s = (r - r0) / (r1 - r0);
  return (1.0 - s) * cell.f[j - 1] + s * cell.f[j];
}

CellProblemResult cell_problem_2d(const Model& m, const std::function<Vec(double)>& loop, double R,
                                  double h, const SolveConfig& cfg) {
  auto dom = std::make_shared<const Domain>(Domain::build(Shape::disk(R), h));
  Field field(dom, m.target.dim());
  const auto& bnodes = dom->boundary_nodes();
  for (std::size_t s = 0; s < bnodes.size(); ++s) {
    const Point2 x = dom->position(bnodes[s]);
    field.set_trace(s, loop(std::atan2(x.y, x.x)));
  }
  const int degree = sampled_winding(loop, m.target);
  if (degree == 0) {
    harmonic_extension(field);
  } else {
    const auto radial = cell_problem_radial(m, std::abs(degree), R);
    for (std::size_t p : dom->interior_nodes()) {
      const Point2 x = dom->position(p);
      field.set(p, profile_at(radial, std::hypot(x.x, x.y)) * loop(std::atan2(x.y, x.x)));
    }
  }
  const auto res = minimize_at(field, m, 1.0, cfg);
  CellProblemResult out;
  out.R = R;
  out.degree = degree;
  out.Q = res.energy.total;
  out.iterations = res.iterations;
  double lam2 = 0.0;
  if (m.target.circle_like()) {
    const double lam = minimal_length(m.target, {degree});
    lam2 = lam * lam / (4.0 * kPi);
  }
  out.q = out.Q - lam2 * std::log(R);
  return out;
}

double core_constant(const Model& m, const std::vector<double>& radii, double* err) {
  if (radii.empty()) throw Error(Errc::InvalidArgument, "empty radius ladder");
  std::vector<double> rs = radii;
  std::sort(rs.begin(), rs.end());
  const double q = cell_problem_radial(m, 1, rs.back()).q;
  if (err) *err = rs.size() > 1 ? std::abs(q - cell_problem_radial(m, 1, rs[rs.size() - 2]).q) : 0.0;
  return q;
}

double rho_bar(const Domain& d, const std::vector<Charge>& singularities) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < singularities.size(); ++i) {
    best = std::min(best, d.distance_to_boundary(singularities[i].position));
    for (std::size_t j = i + 1; j < singularities.size(); ++j) {
      best = std::min(best, 0.5 * distance(singularities[i].position, singularities[j].position));
    }
  }
  return best;
}

AnnulusProfile annulus_energy_profile(const Field& field, const std::vector<Charge>& singularities,
                                      const std::vector<double>& rho_ladder) {
  const Domain& d = field.domain();
  const double bar = rho_bar(d, singularities);
  for (double rho : rho_ladder) {
    if (!(rho > 0.0)) throw Error(Errc::InvalidArgument, "rho must be positive");
    if (rho >= bar) throw Error(Errc::RhoBarViolated, "rho exceeds rho_bar of the singularities");
  }
  const int dim = field.dim();
  const auto u = field.values();
  AnnulusProfile out;
  for (double rho : rho_ladder) {
    double total = 0.0;
    for (std::size_t p = 0; p < d.size(); ++p) {
      if (d.kind(p) == NodeKind::Exterior) continue;
      const Point2 a = d.position(p);
      for (int dir = 0; dir < 2; ++dir) {
        if (dir == 0 && d.ix(p) + 1 >= d.nx()) continue;
        if (dir == 1 && d.iy(p) + 1 >= d.ny()) continue;
        const std::size_t q = dir == 0 ? p + 1 : p + static_cast<std::size_t>(d.nx());
        if (d.kind(q) == NodeKind::Exterior) continue;
        const Point2 b = d.position(q);
        const double ex = b.x - a.x, ey = b.y - a.y;
        const double ee = ex * ex + ey * ey;
        double inside = 0.0;
        for (const auto& s : singularities) {
          const double px = a.x - s.position.x, py = a.y - s.position.y;
          const double bq = px * ex + py * ey;
          const double cq = px * px + py * py - rho * rho;
          const double disc = bq * bq - ee * cq;
          if (disc <= 0.0) continue;
          const double sq = std::sqrt(disc);
          const double t0 = std::max(0.0, (-bq - sq) / ee);
          const double t1 = std::min(1.0, (-bq + sq) / ee);
          if (t1 > t0) inside += t1 - t0;
        }
        const double weight = std::max(0.0, 1.0 - inside);
        if (weight == 0.0) continue;
        double s2 = 0.0;
        for (int c = 0; c < dim; ++c) {
          const double t = u[p * dim + c] - u[q * dim + c];
          s2 += t * t;
        }
        total += 0.5 * weight * s2;
      }
    }
    out.rho.push_back(rho);
    out.I.push_back(total);
  }
  return out;
}

RenormFit renorm_fit(const AnnulusProfile& profile, const std::vector<Charge>& singularities,
                     const Target& t) {
  const std::size_t n = profile.rho.size();
  if (n < 3 || profile.I.size() != n) {
    throw Error(Errc::IllConditionedFit, "renormalisation fit needs at least 3 points");
  }
  const auto [lo, hi] = std::minmax_element(profile.rho.begin(), profile.rho.end());
  if (*hi < 4.0 * *lo) {
    throw Error(Errc::IllConditionedFit, "rho ladder spans less than a factor 4");
  }
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += std::log(1.0 / profile.rho[i]);
    sy += profile.I[i];
  }
  const double mx = sx / static_cast<double>(n), my = sy / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(1.0 / profile.rho[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (profile.I[i] - my);
  }
  RenormFit fit;
  fit.singularities = singularities;
  fit.rho = profile.rho;
  fit.I = profile.I;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < n; ++i) {
    fit.residuals.push_back(profile.I[i] - fit.intercept -
                            fit.slope * std::log(1.0 / profile.rho[i]));
  }
  if (t.circle_like()) {
    for (const auto& s : singularities) {
      const double lam = minimal_length(t, {s.degree});
      fit.expected_slope += lam * lam / (4.0 * kPi);
    }
  }
  return fit;
}

double geom_energy_probe(const Shape& shape, double h, const Target& t, const BoundaryDatum& g,
                         const std::vector<Charge>& charges, double rho,
                         const GeomProbeOptions& opts) {
  if (!t.circle_like()) throw Error(Errc::Unsupported, "geometric probe needs a circle-like target");
  if (opts.rotations < 1) throw Error(Errc::InvalidArgument, "rotations must be positive");
  std::vector<Hole> holes;
  for (const auto& c : charges) {
    if (!shape.contains(c.position) || shape.distance_to_boundary(c.position) <= rho) {
      throw Error(Errc::BallsOverlap, "ball leaves the domain");
    }
    holes.push_back({c.position, rho});
  }
  for (std::size_t i = 0; i < holes.size(); ++i) {
    for (std::size_t j = i + 1; j < holes.size(); ++j) {
      if (distance(holes[i].center, holes[j].center) <= 2.0 * rho) {
        throw Error(Errc::BallsOverlap, "balls intersect");
      }
    }
  }
  auto dom = std::make_shared<const Domain>(Domain::build(shape, h, holes));
  const auto& bnodes = dom->boundary_nodes();
  // Hole owning each boundary slot, -1 for the outer boundary.
  std::vector<int> owner(bnodes.size(), -1);
  for (std::size_t s = 0; s < bnodes.size(); ++s) {
    const Point2 x = dom->position(bnodes[s]);
    for (std::size_t i = 0; i < holes.size(); ++i) {
      if (distance(x, holes[i].center) < rho + 2.0 * h) owner[s] = static_cast<int>(i);
    }
  }
  std::vector<double> base(dom->size(), 0.0);
  for (std::size_t p = 0; p < dom->size(); ++p) {
    const Point2 x = dom->position(p);
    for (const auto& c : charges) {
      base[p] += c.degree * std::atan2(x.y - c.position.y, x.x - c.position.x);
    }
  }
  const double a = t.radius();
  const int M = opts.rotations;

  std::map<std::vector<int>, double> cache;
  auto evaluate = [&](const std::vector<int>& phase) {
    const auto hit = cache.find(phase);
    if (hit != cache.end()) return hit->second;
    Field field(dom, t.dim());
    for (std::size_t s = 0; s < bnodes.size(); ++s) {
      const Point2 x = dom->position(bnodes[s]);
      if (owner[s] < 0) {
        if (g.kind == BoundaryDatum::Kind::Custom) {
          field.set_trace(s, g.custom(x));
        } else {
          field.set_trace(s, g.eval(t, std::atan2(x.y, x.x)));
        }
      } else {
        const auto& c = charges[static_cast<std::size_t>(owner[s])];
        const double th = std::atan2(x.y - c.position.y, x.x - c.position.x);
        const double ph = c.degree * th + 2.0 * kPi * phase[static_cast<std::size_t>(owner[s])] / M;
        field.set_trace(s, {a * std::cos(ph), a * std::sin(ph), 0.0});
      }
    }
    phase_field_init(field, t, base);
    const auto res = harmonic_project_solve(field, t, opts.max_iters, opts.tol);
    cache.emplace(phase, res.energy);
    return res.energy;
  };

  std::vector<int> phase(charges.size(), 0);
  if (charges.empty()) return evaluate(phase);
  const int coarse = std::max(1, M / 8);
  for (int sweep = 0; sweep < std::max(1, opts.sweeps); ++sweep) {
    for (std::size_t i = 0; i < charges.size(); ++i) {
      auto with = [&](int j) {
        auto ph = phase;
        ph[i] = ((j % M) + M) % M;
        return evaluate(ph);
      };
      int best = phase[i];
      double best_e = with(best);
      for (int j = 0; j < M; j += coarse) {
        const double e = with(j);
        if (e < best_e) {
          best_e = e;
          best = j;
        }
      }
      for (int dir : {1, -1}) {
        for (int k = 1; k < M; ++k) {
          const double e = with(best + dir);
          if (!(e < best_e)) break;
          best_e = e;
          best = ((best + dir) % M + M) % M;
        }
      }
      phase[i] = best;
    }
    if (charges.size() == 1) break;
  }
  return evaluate(phase);
}

std::vector<ExpansionPrediction> expansion_report(const std::vector<ExpansionRun>& runs,
                                                  double singular_energy, double renormalised,
                                                  double core_constant) {
  std::vector<ExpansionPrediction> out;
  for (const auto& run : runs) {
    ExpansionPrediction p;
    p.epsilon = run.epsilon;
    p.measured = run.measured;
    p.predicted = singular_energy * std::log(1.0 / run.epsilon) + renormalised + core_constant;
    p.gap = std::abs(p.measured - p.predicted);
    out.push_back(p);
  }
  return out;
}

}  // namespace glvortex
