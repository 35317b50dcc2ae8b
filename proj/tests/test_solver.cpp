#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "glvortex/solver.hpp"
#include "glvortex/vortex.hpp"

using namespace glvortex;
constexpr double pi = std::numbers::pi;

namespace {

std::shared_ptr<const Domain> make(const Shape& s, double h, std::vector<Hole> holes = {}) {
  return std::make_shared<const Domain>(Domain::build(s, h, std::move(holes)));
}

Model quartic() { return Model::make(Target::circle(), PotentialKind::Quartic); }

}  // namespace

TEST_CASE("energy of simple fields") {
  const Model m = quartic();
  const auto d = make(Shape::rectangle(1.0, 1.0), 1.0 / 64);
  Field vac(d, 2);
  for (std::size_t p = 0; p < d->size(); ++p)
    if (d->kind(p) != NodeKind::Exterior) vac.set(p, {0.6, 0.8, 0.0});
  CHECK(gl_energy(vac, m, 0.1).total == doctest::Approx(0.0).scale(1.0));
  for (double g : gl_gradient(vac, m, 0.1)) CHECK(g == doctest::Approx(0.0).scale(1.0));
  CHECK(el_residual(vac, m, 0.1) == doctest::Approx(0.0).scale(1.0));

  // u = 0 on the unit square: 0.25 per unit area over interior nodes.
  Field zero(d, 2);
  const auto e = gl_energy(zero, m, 1.0);
  CHECK(e.dirichlet == 0.0);
  CHECK(e.potential == doctest::Approx(0.25).epsilon(0.05));

  // x/|x| on the annulus is N-valued.
  const auto a = make(Shape::annulus(0.5, 1.0), 1.0 / 128);
  Field rad(a, 2);
  for (std::size_t p = 0; p < a->size(); ++p) {
    if (a->kind(p) == NodeKind::Exterior) continue;
    const Point2 x = a->position(p);
    const double r = std::hypot(x.x, x.y);
    rad.set(p, {x.x / r, x.y / r, 0.0});
  }
  const auto er = gl_energy(rad, m, 0.05);
  CHECK(er.potential == doctest::Approx(0.0).scale(1.0));
  CHECK(er.dirichlet == doctest::Approx(pi * std::log(2.0)).epsilon(0.01));
}

TEST_CASE("region tallies split edges between endpoints") {
  const Model m = quartic();
  const auto d = make(Shape::disk(1.0), 1.0 / 16);
  Field f(d, 2);
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(-1, 1);
  for (std::size_t p = 0; p < d->size(); ++p)
    if (d->kind(p) != NodeKind::Exterior) f.set(p, {u(rng), u(rng), 0.0});
  RegionMask left{"left", std::vector<char>(d->size(), 0)};
  RegionMask right{"right", std::vector<char>(d->size(), 0)};
  for (std::size_t p = 0; p < d->size(); ++p) (d->position(p).x < 0 ? left : right).nodes[p] = 1;
  const auto e = gl_energy(f, m, 0.2, {left, right});
  CHECK(e.regions[0].total() + e.regions[1].total() == doctest::Approx(e.total));
}

TEST_CASE("gradient matches finite differences") {
  for (const Target& t : {Target::circle(), Target::cross_field(4), Target::sphere2()}) {
    for (auto kind : {PotentialKind::Quartic, PotentialKind::SquaredDistance}) {
      const Model m = Model::make(t, kind);
      const auto d = make(Shape::disk(1.0), 0.25);
      Field f(d, t.dim());
      std::mt19937 rng(9);
      std::normal_distribution<double> g;
      for (std::size_t p = 0; p < d->size(); ++p) {
        if (d->kind(p) == NodeKind::Exterior) continue;
        Vec v{g(rng), g(rng), t.dim() == 3 ? g(rng) : 0.0};
        f.set(p, (t.radius() * (1.0 + 0.3 * g(rng)) / norm(v)) * v);
      }
      const auto grad = gl_gradient(f, m, 0.4);
      const double s = 1e-6 * t.radius();
      for (std::size_t p : d->interior_nodes()) {
        for (int c = 0; c < t.dim(); ++c) {
          auto vals = f.values();
          const std::size_t i = p * t.dim() + c;
          const double keep = vals[i];
          vals[i] = keep + s;
          const double up = gl_energy(f, m, 0.4).total;
          vals[i] = keep - s;
          const double down = gl_energy(f, m, 0.4).total;
          vals[i] = keep;
          CHECK(grad[i] == doctest::Approx((up - down) / (2 * s)).epsilon(1e-6).scale(1.0));
        }
      }
    }
  }
}

TEST_CASE("already minimal fields stop immediately") {
  const Model m = quartic();
  const auto d = make(Shape::disk(1.0), 1.0 / 32);
  Field f(d, 2);
  sample_boundary(f, m.target, BoundaryDatum::geodesic(0));
  for (std::size_t p : d->interior_nodes()) f.set(p, f.trace().front());
  SolveConfig cfg;
  const auto r = minimize_at(f, m, 0.1, cfg);
  CHECK(r.converged);
  CHECK(r.iterations <= 1);
}

TEST_CASE("degree-one disk minimiser") {
  const Model m = quartic();
  const auto d = make(Shape::disk(1.0), 1.0 / 64);
  Field f(d, 2);
  sample_boundary(f, m.target, BoundaryDatum::geodesic(1));
  default_initializer(f, m, 0.1, 0);
  SolveConfig cfg;
  cfg.clamp_radius = default_clamp_radius(m);
  cfg.record_history = true;
  const auto r = minimize_at(f, m, 0.1, cfg);
  CHECK(r.converged);
  for (std::size_t i = 1; i < r.history.size(); ++i) CHECK(r.history[i] <= r.history[i - 1]);
  const auto c = plaquette_windings(f, m.target);
  REQUIRE(c.vortices.size() == 1);
  CHECK(c.vortices[0].winding == 1);
  CHECK(distance(c.vortices[0].center, {0, 0}) < 0.05);
  CHECK(el_residual(f, m, 0.1) <= 10 * cfg.grad_tol / (d->h() * d->h()));

  // Deterministic: same start, same bits.
  Field g(d, 2);
  sample_boundary(g, m.target, BoundaryDatum::geodesic(1));
  default_initializer(g, m, 0.1, 0);
  minimize_at(g, m, 0.1, cfg);
  for (std::size_t i = 0; i < f.values().size(); ++i) REQUIRE(f.values()[i] == g.values()[i]);
}

TEST_CASE("fixed step descends") {
  const Model m = quartic();
  const auto d = make(Shape::disk(1.0), 1.0 / 16);
  Field f(d, 2);
  sample_boundary(f, m.target, BoundaryDatum::geodesic(1));
  default_initializer(f, m, 0.3, 0);
  SolveConfig cfg;
  cfg.step = StepRule::Fixed;
  cfg.max_iters = 300;
  cfg.record_history = true;
  const double e0 = gl_energy(f, m, 0.3).total;
  const auto r = minimize_at(f, m, 0.3, cfg);
  CHECK(r.energy.total < e0);
  for (std::size_t i = 1; i < r.history.size(); ++i) CHECK(r.history[i] <= r.history[i - 1] + 1e-12);
}

TEST_CASE("harmonic maps") {
  const Target t = Target::circle();
  const auto a = make(Shape::annulus(0.5, 1.0), 1.0 / 64);
  Field f(a, 2);
  sample_boundary(f, t, BoundaryDatum::geodesic(1));
  std::vector<double> base(a->size());
  for (std::size_t p = 0; p < a->size(); ++p) base[p] = std::atan2(a->position(p).y, a->position(p).x);
  phase_field_init(f, t, base);
  const auto r = harmonic_project_solve(f, t, 20000, 1e-9);
  CHECK(r.converged);
  CHECK(r.energy == doctest::Approx(pi * std::log(2.0)).epsilon(0.01));
  for (std::size_t p : a->interior_nodes()) {
    const Point2 x = a->position(p);
    const double th = std::atan2(x.y, x.x);
    CHECK(f.at(p)[0] == doctest::Approx(std::cos(th)).epsilon(1e-3).scale(1.0));
  }

  const auto d = make(Shape::disk(1.0), 1.0 / 32);
  Field c(d, 2);
  sample_boundary(c, t, BoundaryDatum::geodesic(0));
  harmonic_extension(c);
  project_interior(c, t);
  CHECK(harmonic_project_solve(c, t, 1000, 1e-9).energy == doctest::Approx(0.0).scale(1.0));

  Field w(d, 2);
  sample_boundary(w, t, BoundaryDatum::geodesic(1));
  std::vector<double> wb(d->size());
  for (std::size_t p = 0; p < d->size(); ++p) wb[p] = std::atan2(d->position(p).y, d->position(p).x);
  phase_field_init(w, t, wb);
  try {
    harmonic_project_solve(w, t, 20000, 1e-9);
    FAIL("expected CutLocus");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::CutLocus);
  }
}

TEST_CASE("upper-bound initializer") {
  const Model m = quartic();
  const auto d = make(Shape::disk(1.0), 1.0 / 64);
  Field f(d, 2);
  sample_boundary(f, m.target, BoundaryDatum::geodesic(2));
  upper_bound_initializer(f, m, {{{-0.4, 0.0}, 1}, {{0.4, 0.0}, 1}}, 0.15, 0.05);
  const auto c = plaquette_windings(f, m.target);
  CHECK(c.vortices.size() == 2);
  CHECK(std::abs(gl_energy(f, m, 0.05).total - (2 * pi * std::log(1 / 0.05))) < 6.0);
  CHECK_THROWS_AS(upper_bound_initializer(f, m, {{{-0.1, 0.0}, 1}, {{0.1, 0.0}, 1}}, 0.15, 0.05), Error);
  CHECK_THROWS_AS(upper_bound_initializer(f, m, {{{0.9, 0.0}, 2}}, 0.15, 0.05), Error);
}

TEST_CASE("safe fixed step") {
  const Model m = quartic();
  const double tau = safe_fixed_step(m, 1.0 / 64, 0.1, 1.0);
  CHECK(tau > 0.0);
  CHECK(tau <= 1.0 / 8.0);
  CHECK(default_clamp_radius(m) == 1.0);
  CHECK(default_clamp_radius(Model::make(Target::circle(), PotentialKind::SquaredDistance)) == 1.25);
}
