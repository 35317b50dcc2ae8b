#include "glvortex/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <numbers>
#include <ostream>
#include <random>

#include "glvortex/renorm.hpp"
#include "glvortex/solver.hpp"
#include "glvortex/vortex.hpp"

namespace glvortex {

namespace {

constexpr double kPi = std::numbers::pi;
const std::vector<double> kEpsLadder{0.2, 0.1, 0.05, 0.025};
const std::vector<double> kCellRadii{2, 4, 8, 16, 32};
const std::vector<double> kRhoLadder{0.8, 0.6, 0.4, 0.3, 0.2};

std::string format(const char* f, ...) {
  va_list args, copy;
  va_start(args, f);
  va_copy(copy, args);
  std::string out(static_cast<std::size_t>(std::vsnprintf(nullptr, 0, f, copy)), '\0');
  va_end(copy);
  std::vsnprintf(out.data(), out.size() + 1, f, args);
  va_end(args);
  return out;
}

struct Ladder {
  Model model;
  std::vector<LadderStep> steps;
  bool converged = true;
};

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return sxy / sxx;
}

double energy_slope(const Ladder& l) {
  std::vector<double> x, y;
  for (const auto& s : l.steps) {
    x.push_back(std::log(1.0 / s.epsilon));
    y.push_back(s.result.energy.total);
  }
  return fit_slope(x, y);
}

bool unit_vortices(const VortexCensus& c, int count) {
  if (static_cast<int>(c.vortices.size()) != count) return false;
  return std::all_of(c.vortices.begin(), c.vortices.end(),
                     [](const PlaquetteVortex& v) { return std::abs(v.winding) == 1; });
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

std::string list(const std::vector<double>& v, const char* f = "%.4g") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format(f, v[i]);
  return s;
}

/// Minimal sum of squared parts over all splittings of d into nonzero integers,
/// by exhaustive dynamic programming over bounded parts and sums.
long brute_partition_squares(int d) {
  constexpr int kSpan = 24;
  constexpr long kInf = std::numeric_limits<long>::max() / 4;
  std::vector<long> best(2 * kSpan + 1, kInf);
  best[kSpan] = 0;
  for (int round = 0; round < 2 * kSpan; ++round) {
    auto next = best;
    for (int s = -kSpan; s <= kSpan; ++s) {
      if (best[s + kSpan] >= kInf) continue;
      for (int p = -kSpan; p <= kSpan; ++p) {
        if (p == 0 || std::abs(s + p) > kSpan) continue;
        next[s + p + kSpan] = std::min(next[s + p + kSpan], best[s + kSpan] + long(p) * p);
      }
    }
    best = next;
  }
  return best[d + kSpan];
}

class Suite {
 public:
  explicit Suite(const AcceptanceOptions& o) : opts_(o) {}

  const Ladder& disk_d1() {
    return cached("disk_d1", [&] { return solve(circle(), opts_.fine_h, BoundaryDatum::geodesic(1), base()); });
  }
  const Ladder& disk_d2() {
    return cached("disk_d2", [&] { return solve(circle(), opts_.coarse_h, BoundaryDatum::geodesic(2), base()); });
  }
  const Ladder& cross4_d4() {
    return cached("cross4_d4", [&] {
      const Model m = Model::make(Target::cross_field(4), PotentialKind::Quartic);
      SolveConfig cfg = base();
      cfg.clamp_radius = default_clamp_radius(m);
      return solve(m, opts_.coarse_h, BoundaryDatum::geodesic(4), cfg);
    });
  }
  const Ladder& perturbed() {
    return cached("perturbed", [&] {
      SolveConfig cfg = base();
      cfg.grad_tol = 1e-8;
      return solve(circle(), opts_.coarse_h, BoundaryDatum::perturbed(1, 0.3, 1), cfg);
    });
  }
  const Ladder& unclamped() {
    return cached("unclamped", [&] {
      SolveConfig cfg = base();
      cfg.clamp_radius.reset();
      return solve(circle(), opts_.coarse_h, BoundaryDatum::geodesic(1), cfg);
    });
  }

  const AcceptanceOptions& opts() const { return opts_; }

 private:
  static Model circle() { return Model::make(Target::circle(), PotentialKind::Quartic); }

  SolveConfig base() const {
    SolveConfig cfg;
    cfg.eps_ladder = kEpsLadder;
    cfg.clamp_radius = 1.0;
    cfg.seed = opts_.seed;
    return cfg;
  }

  Ladder solve(const Model& m, double h, const BoundaryDatum& g, const SolveConfig& cfg) const {
    auto dom = std::make_shared<const Domain>(Domain::build(Shape::disk(1.0), h));
    Field field(dom, m.target.dim());
    sample_boundary(field, m.target, g);
    default_initializer(field, m, cfg.eps_ladder.front(), cfg.seed);
    Ladder l{m, minimize(field, m, cfg), true};
    for (const auto& s : l.steps) l.converged = l.converged && s.result.converged;
    return l;
  }

  const Ladder& cached(const std::string& key, const std::function<Ladder()>& make) {
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, make()).first;
    return it->second;
  }

  AcceptanceOptions opts_;
  std::map<std::string, Ladder> cache_;
};

struct Outcome {
  bool pass;
  std::string detail;
};

Outcome gradient_oracle(Suite& suite) {
  std::mt19937_64 rng(suite.opts().seed + 17);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::normal_distribution<double> gauss;
  auto dom = std::make_shared<const Domain>(Domain::build(Shape::disk(1.0), 0.125));
  const double eps = 0.3;
  double worst = 0.0;
  int checks = 0;
  for (const Target& t : {Target::circle(), Target::cross_field(4), Target::sphere2()}) {
    for (PotentialKind kind : {PotentialKind::Quartic, PotentialKind::SquaredDistance}) {
      const Model m = Model::make(t, kind);
      for (int trial = 0; trial < 20; ++trial) {
        Field f(dom, t.dim());
        for (std::size_t p = 0; p < dom->size(); ++p) {
          if (dom->kind(p) == NodeKind::Exterior) continue;
          Vec v{gauss(rng), gauss(rng), t.dim() == 3 ? gauss(rng) : 0.0};
          const double r = t.radius() * (1.0 + 0.4 * uni(rng)) / norm(v);
          f.set(p, r * v);
        }
        const auto g = gl_gradient(f, m, eps);
        const double step = 1e-5 * t.radius();
        double err = 0.0, scale = 0.0;
        for (std::size_t p : dom->interior_nodes()) {
          for (int c = 0; c < t.dim(); ++c) {
            const std::size_t i = p * static_cast<std::size_t>(t.dim()) + static_cast<std::size_t>(c);
            auto vals = f.values();
            const double keep = vals[i];
            vals[i] = keep + step;
            const double up = gl_energy(f, m, eps).total;
            vals[i] = keep - step;
            const double down = gl_energy(f, m, eps).total;
            vals[i] = keep;
            const double fd = (up - down) / (2.0 * step);
            err = std::max(err, std::abs(fd - g[i]));
            scale = std::max(scale, std::abs(g[i]));
          }
        }
        worst = std::max(worst, err / scale);
        ++checks;
      }
    }
  }
  return {worst < 1e-6, format("%d fields, max relative error %.3g (< 1e-6)", checks, worst)};
}

Outcome disk_d1_shape(Suite& suite) {
  const Ladder& l = suite.disk_d1();
  const double h = suite.opts().fine_h;
  bool census_ok = l.converged;
  std::vector<double> offsets, deviation;
  for (const auto& s : l.steps) {
    const auto c = plaquette_windings(s.field, l.model.target);
    if (c.vortices.size() != 1 || c.vortices[0].winding != 1) {
      census_ok = false;
      offsets.push_back(std::numeric_limits<double>::infinity());
    } else {
      const double off = distance(c.vortices[0].center, {0.0, 0.0});
      offsets.push_back(off);
      census_ok = census_ok && off <= 2.0 * h;
    }
    const Domain& d = s.field.domain();
    double dev = 0.0;
    for (std::size_t p = 0; p < d.size(); ++p) {
      if (d.kind(p) == NodeKind::Exterior) continue;
      const Point2 x = d.position(p);
      const double r = std::hypot(x.x, x.y);
      if (r < 0.3 || r > 0.9) continue;
      dev = std::max(dev, norm(s.field.at(p) - Vec{x.x / r, x.y / r, 0.0}));
    }
    deviation.push_back(dev);
  }
  const bool pass = census_ok && strictly_decreasing(deviation) && deviation.back() < 0.1;
  return {pass, format("vortex offsets [%s] (<= %.4g), max|u - x/|x|| [%s]", list(offsets).c_str(),
                       2.0 * h, list(deviation).c_str())};
}

Outcome energy_slopes(Suite& suite) {
  const double s1 = energy_slope(suite.disk_d1());
  const double s2 = energy_slope(suite.disk_d2());
  const double s4 = energy_slope(suite.cross4_d4());
  const auto c2 = plaquette_windings(suite.disk_d2().steps.back().field, suite.disk_d2().model.target);
  const auto c4 = plaquette_windings(suite.cross4_d4().steps.back().field, suite.cross4_d4().model.target);
  const bool p1 = s1 >= 0.90 * kPi && s1 <= 1.10 * kPi;
  const bool p2 = s2 >= 0.85 * 2 * kPi && s2 <= 1.15 * 2 * kPi && unit_vortices(c2, 2);
  const bool p4 = s4 >= 0.80 * kPi / 4 && s4 <= 1.20 * kPi / 4 && unit_vortices(c4, 4);
  const bool conv = suite.disk_d1().converged && suite.disk_d2().converged && suite.cross4_d4().converged;
  return {p1 && p2 && p4 && conv,
          format("d=1 slope/pi %.4f; d=2 slope/2pi %.4f with %zu vortices; cross(4) d=4 slope/(pi/4) %.4f "
                 "with %zu vortices",
                 s1 / kPi, s2 / (2 * kPi), c2.vortices.size(), s4 / (kPi / 4), c4.vortices.size())};
}

Outcome cell_monotonicity(Suite&) {
  const Model m = Model::make(Target::circle(), PotentialKind::Quartic);
  std::vector<double> radial, planar;
  double q_radial_8 = 0.0, q_planar_8 = 0.0;
  SolveConfig cfg;
  cfg.clamp_radius = 1.0;
  for (double R : kCellRadii) {
    const auto r = cell_problem_radial(m, 1, R);
    const auto p = cell_problem_2d(
        m, [](double th) { return Vec{std::cos(th), std::sin(th), 0.0}; }, R, R / 64.0, cfg);
    radial.push_back(r.q);
    planar.push_back(p.q);
    if (R == 8.0) {
      q_radial_8 = r.Q;
      q_planar_8 = p.Q;
    }
  }
  auto monotone = [](const std::vector<double>& q) {
    for (std::size_t i = 1; i < q.size(); ++i) {
      if (q[i] > q[i - 1] + 1e-3) return false;
    }
    return true;
  };
  const double rel = std::abs(q_planar_8 - q_radial_8) / q_radial_8;
  return {monotone(radial) && monotone(planar) && rel <= 0.05,
          format("radial q [%s]; 2D q [%s]; |Q_2d - Q_radial|/Q_radial at R=8 = %.4f", list(radial).c_str(),
                 list(planar).c_str(), rel)};
}

RenormFit minimiser_fit(Suite& suite) {
  const auto& last = suite.disk_d1().steps.back();
  const auto census = plaquette_windings(last.field, Target::circle());
  std::vector<Charge> sing;
  for (const auto& v : census.vortices) sing.push_back({v.center, v.winding});
  return renorm_fit(annulus_energy_profile(last.field, sing, kRhoLadder), sing, Target::circle());
}

Outcome renorm_fits(Suite& suite) {
  auto dom = std::make_shared<const Domain>(Domain::build(Shape::disk(1.0), suite.opts().fine_h));
  Field f(dom, 2);
  sample_boundary(f, Target::circle(), BoundaryDatum::geodesic(1));
  for (std::size_t p : dom->interior_nodes()) {
    const Point2 x = dom->position(p);
    const double r = std::hypot(x.x, x.y);
    f.set(p, r > 0.0 ? Vec{x.x / r, x.y / r, 0.0} : Vec{1.0, 0.0, 0.0});
  }
  const std::vector<Charge> origin{{{0.0, 0.0}, 1}};
  const auto synth = renorm_fit(annulus_energy_profile(f, origin, kRhoLadder), origin, Target::circle());
  const auto mini = minimiser_fit(suite);
  const bool ok = std::abs(synth.intercept) <= 0.05 && std::abs(synth.slope / kPi - 1.0) <= 0.02 &&
                  mini.slope >= 0.9 * kPi && mini.slope <= 1.1 * kPi;
  return {ok, format("x/|x|: intercept %.4f, slope/pi %.4f; minimiser eps=0.025: slope/pi %.4f", synth.intercept,
                     synth.slope / kPi, mini.slope / kPi)};
}

Outcome expansion_gap(Suite& suite) {
  const Ladder& l = suite.disk_d1();
  const double ren = minimiser_fit(suite).intercept;
  const double q = core_constant(l.model, kCellRadii);
  std::vector<ExpansionRun> runs;
  for (const auto& s : l.steps) runs.push_back({s.epsilon, s.result.energy.total});
  const auto report = expansion_report(runs, singular_energy(l.model.target, {1}), ren, q);
  double gap_01 = 0.0, gap_0025 = 0.0;
  std::vector<double> gaps;
  for (const auto& r : report) {
    gaps.push_back(r.gap);
    if (r.epsilon == 0.1) gap_01 = r.gap;
    if (r.epsilon == 0.025) gap_0025 = r.gap;
  }
  return {gap_0025 <= 0.5 && gap_0025 < gap_01,
          format("E_ren_hat %.4f, Q_hat %.4f, gaps [%s] (eps=0.025 <= 0.5 and below eps=0.1)", ren, q,
                 list(gaps).c_str())};
}

Outcome merging_property(Suite& suite) {
  std::mt19937_64 rng(suite.opts().seed + 29);
  std::uniform_real_distribution<double> pos(-1.0, 1.0), rad(0.01, 0.3);
  std::uniform_int_distribution<int> count(1, 12), charge(-2, 2);
  int bad = 0;
  double worst_sum = 0.0;
  for (int family = 0; family < 1000; ++family) {
    std::vector<Ball> in(static_cast<std::size_t>(count(rng)));
    double diameters = 0.0;
    for (auto& b : in) {
      b = {{pos(rng), pos(rng)}, rad(rng), charge(rng), 0.0};
      diameters += 2.0 * b.radius;
    }
    const auto out = merge_disks_tracked(in);
    bool ok = out.owner.size() == in.size();
    double out_diameters = 0.0;
    for (std::size_t i = 0; i < out.balls.size(); ++i) {
      out_diameters += 2.0 * out.balls[i].radius;
      for (std::size_t j = i + 1; j < out.balls.size(); ++j) {
        const auto& a = out.balls[i];
        const auto& b = out.balls[j];
        if (distance(a.center, b.center) <= a.radius + b.radius) ok = false;
      }
    }
    for (std::size_t i = 0; ok && i < in.size(); ++i) {
      if (out.owner[i] >= out.balls.size()) {
        ok = false;
        break;
      }
      const auto& o = out.balls[out.owner[i]];
      if (distance(in[i].center, o.center) + in[i].radius > o.radius + 1e-12) ok = false;
    }
    const double diff = std::abs(out_diameters - diameters);
    worst_sum = std::max(worst_sum, diff);
    if (!ok || diff > 1e-12) ++bad;
  }
  return {bad == 0, format("1000 families, %d violations, max diameter-sum drift %.3g", bad, worst_sum)};
}

Outcome certified_bound(Suite& suite) {
  struct Named {
    const char* name;
    const Ladder* ladder;
  };
  const std::vector<Named> runs{{"disk d=1", &suite.disk_d1()},
                                {"disk d=2", &suite.disk_d2()},
                                {"cross(4) d=4", &suite.cross4_d4()},
                                {"perturbed d=1", &suite.perturbed()},
                                {"unclamped d=1", &suite.unclamped()}};
  int checked = 0, failed = 0, violated = 0;
  double min_ratio = std::numeric_limits<double>::infinity();
  std::string notes;
  for (const auto& run : runs) {
    const Ladder& l = *run.ladder;
    const Target& t = l.model.target;
    const double c1 = default_c1(t, l.model.potential);
    for (const auto& s : l.steps) {
      if (!s.result.converged) continue;
      const Domain& d = s.field.domain();
      try {
        // Every run has nonzero boundary degree, so the cover must carry charge. Thresholds closer to
        // delta_N give smaller covers; eta must exceed the radius sum and stay below half of every
        // charged ball's boundary gap.
        std::vector<Ball> balls;
        double lo = 0.0, hi = 0.0;
        bool charged = false;
        for (double frac : {0.5, 0.7, 0.9}) {
          balls = sublevel_cover(s.field, t, frac * t.delta());
          lo = 0.0;
          hi = std::numeric_limits<double>::infinity();
          charged = false;
          for (const auto& b : merge_disks(balls)) {
            lo += b.radius;
            if (b.charge == 0) continue;
            charged = true;
            hi = std::min(hi, 0.5 * (d.distance_to_boundary(b.center) - b.radius));
          }
          if (charged && lo < hi) break;
        }
        if (!charged) {
          ++failed;
          notes += format(" %s eps=%g uncharged cover;", run.name, s.epsilon);
          continue;
        }
        if (!(lo < hi)) {
          ++failed;
          notes += format(" %s eps=%g no admissible eta (radius sum %.3f, cap %.3f);", run.name, s.epsilon, lo,
                          hi);
          continue;
        }
        const auto grown = ball_growth(balls, s.epsilon, 0.5 * (lo + hi), t, c1, &d);
        RegionMask mask{"grown", std::vector<char>(d.size(), 0)};
        for (std::size_t p = 0; p < d.size(); ++p) {
          for (const auto& b : grown.balls) {
            if (distance(d.position(p), b.center) <= b.radius) mask.nodes[p] = 1;
          }
        }
        const double measured = gl_energy(s.field, l.model, s.epsilon, {mask}).regions.front().total();
        ++checked;
        min_ratio = std::min(min_ratio, measured / grown.total_lower_bound);
        if (!(grown.total_lower_bound > 0.0) || grown.total_lower_bound > measured) {
          ++failed;
          ++violated;
          notes += format(" %s eps=%g bound %.4g vs %.4g;", run.name, s.epsilon, grown.total_lower_bound,
                          measured);
        }
      } catch (const Error& e) {
        ++failed;
        notes += format(" %s eps=%g %s;", run.name, s.epsilon, e.what());
      }
    }
  }
  return {failed == 0 && checked > 0,
          format("%d bounds checked, %d violated, %d failures, min measured/bound %.3g%s", checked, violated,
                 failed, min_ratio, notes.c_str())};
}

Outcome weak_l2(Suite& suite) {
  const Ladder& l = suite.disk_d1();
  double w01 = 0.0, w0025 = 0.0, d01 = 0.0, d0025 = 0.0;
  for (const auto& s : l.steps) {
    if (s.epsilon == 0.1) {
      w01 = weak_l2_statistic(s.field);
      d01 = s.result.energy.dirichlet;
    }
    if (s.epsilon == 0.025) {
      w0025 = weak_l2_statistic(s.field);
      d0025 = s.result.energy.dirichlet;
    }
  }
  const double wr = w0025 / w01, dr = d0025 / d01;
  return {wr <= 2.0 && dr >= 1.3,
          format("weak-L2 ratio %.4f (<= 2), Dirichlet ratio %.4f (>= 1.3)", wr, dr)};
}

Outcome hopf_decay(Suite& suite) {
  const Ladder& l = suite.perturbed();
  std::vector<double> residues;
  bool ok = l.converged;
  for (const auto& s : l.steps) {
    const auto c = plaquette_windings(s.field, l.model.target);
    if (c.vortices.size() != 1) {
      ok = false;
      residues.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    const auto r = hopf_residue(s.field, c.vortices[0].center, 0.35);
    residues.push_back(std::hypot(r[0], r[1]));
  }
  return {ok && strictly_decreasing(residues), format("|residue| at r=0.35: [%s]", list(residues, "%.3e").c_str())};
}

Outcome geometric_landscape(Suite& suite) {
  std::vector<double> e;
  for (double offset : {0.0, 0.15, 0.3}) {
    e.push_back(geom_energy_probe(Shape::disk(1.0), suite.opts().coarse_h, Target::circle(),
                                  BoundaryDatum::geodesic(1), {{{offset, 0.0}, 1}}, 0.1));
  }
  return {strictly_decreasing({-e[0], -e[1], -e[2]}),
          format("E_geom at offsets 0, 0.15, 0.3: [%s]", list(e, "%.6f").c_str())};
}

Outcome singular_oracle(Suite&) {
  int cases = 0, bad = 0;
  double worst = 0.0;
  for (int k : {1, 2, 4, 6}) {
    const Target t = Target::cross_field(k);
    const double L0 = 2.0 * kPi * t.radius();
    for (int d = -8; d <= 8; ++d) {
      const double brute = static_cast<double>(brute_partition_squares(d)) * L0 * L0 / (4.0 * kPi);
      const double closed = std::abs(d) * L0 * L0 / (4.0 * kPi);
      const double got = singular_energy(t, {d});
      const double err = std::max(std::abs(got - brute), std::abs(got - closed));
      worst = std::max(worst, err);
      if (err > 1e-12 * std::max(1.0, brute)) ++bad;
      ++cases;
    }
  }
  return {bad == 0, format("%d cases, %d mismatches, max abs error %.3g", cases, bad, worst)};
}

Outcome max_principle(Suite& suite) {
  const Ladder& l = suite.unclamped();
  std::vector<double> maxima;
  for (const auto& s : l.steps) {
    double m = 0.0;
    const Domain& d = s.field.domain();
    for (std::size_t p = 0; p < d.size(); ++p) m = std::max(m, norm(s.field.at(p)));
    maxima.push_back(m);
  }
  const double worst = *std::max_element(maxima.begin(), maxima.end());
  return {l.converged && worst <= 1.02, format("max|u| per eps [%s] (<= 1.02)", list(maxima, "%.6f").c_str())};
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts, std::ostream& log) {
  struct Entry {
    int id;
    const char* name;
    Outcome (*run)(Suite&);
  };
  const std::vector<Entry> entries{
      {1, "gradient oracle", gradient_oracle},
      {2, "disk d=1 vortex and far field", disk_d1_shape},
      {3, "energy slopes", energy_slopes},
      {4, "cell-problem monotonicity", cell_monotonicity},
      {5, "renormalised-energy fit", renorm_fits},
      {6, "expansion gap", expansion_gap},
      {7, "merging property", merging_property},
      {8, "certified lower bound", certified_bound},
      {9, "weak-L2 boundedness", weak_l2},
      {10, "Hopf residue decay", hopf_decay},
      {11, "geometric landscape", geometric_landscape},
      {12, "singular-energy oracle", singular_oracle},
      {13, "maximum principle", max_principle},
  };
  Suite suite(opts);
  std::vector<CriterionResult> results;
  for (const auto& e : entries) {
    if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), e.id) == opts.only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r{e.id, e.name, false, "", 0.0};
    try {
      const Outcome o = e.run(suite);
      r.pass = o.pass;
      r.detail = o.detail;
    } catch (const std::exception& ex) {
      r.detail = std::string("error: ") + ex.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    log << (r.pass ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << ": " << r.detail << " ("
        << format("%.1f", r.seconds) << " s)" << std::endl;
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace glvortex
