#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "glvortex/solver.hpp"
#include "glvortex/vortex.hpp"

using namespace glvortex;
constexpr double pi = std::numbers::pi;

namespace {

std::shared_ptr<const Domain> disk(double h) {
  return std::make_shared<const Domain>(Domain::build(Shape::disk(1.0), h));
}

Field phase_field(std::shared_ptr<const Domain> d, Point2 a, int deg = 1) {
  Field f(d, 2);
  for (std::size_t p = 0; p < d->size(); ++p) {
    if (d->kind(p) == NodeKind::Exterior) continue;
    const Point2 x = d->position(p);
    const double th = deg * std::atan2(x.y - a.y, x.x - a.x);
    f.set(p, {std::cos(th), std::sin(th), 0.0});
  }
  return f;
}

Field constant_field(std::shared_ptr<const Domain> d) {
  Field f(d, 2);
  for (std::size_t p = 0; p < d->size(); ++p)
    if (d->kind(p) != NodeKind::Exterior) f.set(p, {1.0, 0.0, 0.0});
  return f;
}

}  // namespace

TEST_CASE("plaquette census") {
  const Target t = Target::circle();
  const auto d = disk(1.0 / 64);
  const auto c = plaquette_windings(phase_field(d, {0.01, 0.013}), t);
  REQUIRE(c.vortices.size() == 1);
  CHECK(c.vortices[0].winding == 1);
  CHECK(c.total == 1);
  CHECK(distance(c.vortices[0].center, {0.01, 0.013}) < d->h());
  CHECK(plaquette_windings(constant_field(d), t).vortices.empty());

  const auto two = plaquette_windings(phase_field(d, {-0.3, 0.2}, -2), t);
  CHECK(two.total == -2);
}

TEST_CASE("disk merging") {
  std::vector<Ball> disjoint{{{0, 0}, 0.2, 1, 0}, {{1, 0}, 0.3, -1, 0}};
  const auto same = merge_disks(disjoint);
  REQUIRE(same.size() == 2);
  CHECK(same[0].radius == 0.2);

  const auto pair = merge_disks({{{0, 0}, 1, 1, 0}, {{1.5, 0}, 1, 1, 0}});
  REQUIRE(pair.size() == 1);
  CHECK(pair[0].center.x == doctest::Approx(0.75));
  CHECK(pair[0].center.y == doctest::Approx(0.0));
  CHECK(pair[0].radius == doctest::Approx(2.0));
  CHECK(pair[0].charge == 2);

  const auto chain = merge_disks_tracked({{{0, 0}, 1, 1, 0}, {{1.5, 0}, 1, 1, 0}, {{4.2, 0}, 0.5, 1, 0}});
  REQUIRE(chain.balls.size() == 2);
  CHECK(chain.owner[0] == chain.owner[1]);
  CHECK(chain.owner[2] != chain.owner[0]);
  CHECK(chain.balls[chain.owner[2]].radius == 0.5);

  // Small disk deep inside a large one: both stay covered.
  const auto nested = merge_disks({{{0, 0}, 1.0, 1, 0}, {{0.05, 0}, 0.1, 1, 0}});
  REQUIRE(nested.size() == 1);
  CHECK(nested[0].radius == doctest::Approx(1.1));
  CHECK(distance(nested[0].center, {0, 0}) + 1.0 <= 1.1 + 1e-12);
  CHECK(distance(nested[0].center, {0.05, 0}) + 0.1 <= 1.1 + 1e-12);
}

TEST_CASE("ball growth bound") {
  const Target t = Target::circle();
  // Oracle: midpoint quadrature of int dr / (eps/c1 + r/pi) from 0.01 to 0.16.
  const double eps = 0.01, c1 = 1.0;
  double quad = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double r = 0.01 + (i + 0.5) * 0.15 / n;
    quad += (0.15 / n) / (eps / c1 + r / pi);
  }
  CHECK(annulus_bound(t, eps, c1, 0.01, 0.16) == doctest::Approx(quad).epsilon(1e-8));
  CHECK(quad == doctest::Approx(4.81).epsilon(1e-3));

  const auto g = ball_growth({{{0, 0}, 0.01, 1, 0}}, eps, 0.16, t, c1);
  REQUIRE(g.balls.size() == 1);
  CHECK(g.balls[0].radius == doctest::Approx(0.16));
  CHECK(g.total_lower_bound == doctest::Approx(quad).epsilon(1e-8));

  const auto z = ball_growth({{{0, 0}, 0.01, 0, 0}}, eps, 0.16, t, c1);
  CHECK(z.total_lower_bound == 0.0);

  // Two balls grow by a common factor and merge on contact.
  const auto m = ball_growth({{{-0.1, 0}, 0.01, 1, 0}, {{0.1, 0}, 0.01, 1, 0}}, eps, 0.5, t, c1);
  CHECK(m.merges == 1);
  REQUIRE(m.balls.size() == 1);
  CHECK(m.balls[0].charge == 2);
  CHECK(m.total_lower_bound > 0.0);

  const auto d = disk(1.0 / 32);
  CHECK_THROWS_AS(ball_growth({{{0.8, 0}, 0.01, 1, 0}}, eps, 0.3, t, c1, d.get()), Error);
}

TEST_CASE("sublevel cover of a minimiser") {
  const Model m = Model::make(Target::circle(), PotentialKind::Quartic);
  const auto d = disk(1.0 / 64);
  CHECK(sublevel_cover(constant_field(d), m.target, 0.4).empty());

  Field f(d, 2);
  sample_boundary(f, m.target, BoundaryDatum::geodesic(1));
  default_initializer(f, m, 0.05, 0);
  SolveConfig cfg;
  cfg.clamp_radius = 1.0;
  minimize_at(f, m, 0.05, cfg);
  const auto balls = sublevel_cover(f, m.target, 0.4);
  REQUIRE(balls.size() == 1);
  CHECK(balls[0].charge == 1);
  CHECK(balls[0].radius < 4 * 0.05);
  CHECK(distance(balls[0].center, {0, 0}) < 0.05);
  CHECK(default_c1(m.target, m.potential) > 0.0);
}

TEST_CASE("weak L2 statistic") {
  const auto d = disk(1.0 / 128);
  CHECK(weak_l2_statistic(constant_field(d)) == 0.0);
  CHECK(weak_l2_statistic(phase_field(d, {1e-3, 2e-3})) == doctest::Approx(pi).epsilon(0.15));
}

TEST_CASE("Hopf residue of a single vortex vanishes") {
  const auto d = disk(1.0 / 128);
  const Point2 a{0.1, -0.05};
  const auto r = hopf_residue(phase_field(d, a), a, 0.35);
  CHECK(std::hypot(r[0], r[1]) < 1e-3);
  const auto c = hopf_residue(phase_field(d, {0, 0}), {0, 0}, 0.5);
  CHECK(std::hypot(c[0], c[1]) < 1e-3);
}

TEST_CASE("concentration measure and sampling") {
  const auto d = disk(1.0 / 64);
  const auto vac = concentration_measure(constant_field(d), 0.05, 0.0625);
  CHECK(vac.total() == 0.0);
  const Field f = phase_field(d, {0.0, 0.0});
  const auto v = interpolate(f, {0.3, 0.4});
  REQUIRE(v);
  CHECK((*v)[0] == doctest::Approx(0.6).epsilon(0.01));
  CHECK(circle_charge(f, Target::circle(), {0, 0}, 0.5) == 1);
  CHECK(!circle_charge(f, Target::circle(), {0, 0}, 1.2));
}
