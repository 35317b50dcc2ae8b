#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "glvortex/target.hpp"

using namespace glvortex;
constexpr double pi = std::numbers::pi;

namespace {

void check_vec(const Vec& a, const Vec& b, double tol = 1e-12) {
  for (int i = 0; i < 3; ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(tol).scale(1.0));
}

// Minimal sum of squares over splittings of d into nonzero parts, by recursion.
long brute(int d, int parts_left) {
  if (d == 0) return 0;
  if (parts_left == 0) return 1 << 30;
  long best = 1 << 30;
  for (int p = -10; p <= 10; ++p) {
    if (p == 0) continue;
    best = std::min(best, long(p) * p + brute(d - p, parts_left - 1));
  }
  return best;
}

}  // namespace

TEST_CASE("projection onto the circle") {
  const Target c = Target::circle();
  check_vec(c.project({2.0, 0.0, 0.0}), {1.0, 0.0, 0.0});
  check_vec(c.project({3.0, 4.0, 0.0}), {0.6, 0.8, 0.0});
  try {
    c.project({0.0, 0.0, 0.0});
    FAIL("expected CutLocus");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::CutLocus);
  }
  CHECK_THROWS_AS(c.project({0.4, 0.0, 0.0}), Error);
  CHECK_THROWS_AS(dist_and_derivatives(c, {0.2, 0.1, 0.0}, {1.0, 0.0, 0.0}), Error);
  check_vec(Target::cross_field(4).project({0.0, -1.0, 0.0}), {0.0, -0.25, 0.0});
  check_vec(Target::sphere2().project({0.0, 0.0, 2.0}), {0.0, 0.0, 1.0});
}

TEST_CASE("distance derivatives") {
  const Target c = Target::circle();
  auto a = dist_and_derivatives(c, {2.0, 0.0, 0.0}, {1.0, 0.0, 0.0});
  CHECK(a.dist == doctest::Approx(1.0));
  REQUIRE(a.d_dist);
  CHECK(*a.d_dist == doctest::Approx(1.0));
  check_vec(a.d_proj, {0.0, 0.0, 0.0});

  auto b = dist_and_derivatives(c, {2.0, 0.0, 0.0}, {0.0, 1.0, 0.0});
  CHECK(b.dist == doctest::Approx(1.0));
  CHECK(*b.d_dist == doctest::Approx(0.0));
  check_vec(b.d_proj, {0.0, 0.5, 0.0});

  const Vec p{std::cos(0.3), std::sin(0.3), 0.0};
  const Vec v{0.7, -0.2, 0.0};
  auto on = dist_and_derivatives(c, p, v);
  CHECK(on.dist == doctest::Approx(0.0).scale(1.0));
  check_vec(on.d_proj, c.tangent_part(p, v));

  // D Pi against central differences on the sphere.
  const Target s = Target::sphere2();
  const Vec y{0.9, 0.5, -0.3}, w{0.1, 0.4, 0.2};
  const double t = 1e-6;
  const Vec fd = (0.5 / t) * (s.project(y + t * w) - s.project(y - t * w));
  check_vec(dist_and_derivatives(s, y, w).d_proj, fd, 1e-8);
}

TEST_CASE("splitting inequality inside the tube") {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const Target& t : {Target::circle(), Target::cross_field(6), Target::sphere2()}) {
    for (int i = 0; i < 2000; ++i) {
      Vec dir{u(rng), u(rng), t.dim() == 3 ? u(rng) : 0.0};
      Vec v{u(rng), u(rng), t.dim() == 3 ? u(rng) : 0.0};
      const double r = t.radius() + 0.999 * t.delta() * u(rng);
      const Vec y = (r / norm(dir)) * dir;
      const auto dd = dist_and_derivatives(t, y, v);
      const double ddist = dd.d_dist.value_or(0.0);
      CHECK(ddist * ddist + (1.0 - dd.dist / t.delta()) * dot(dd.d_proj, dd.d_proj) <= dot(v, v) * (1 + 1e-12));
    }
  }
}

TEST_CASE("potentials") {
  const Target c = Target::circle();
  const auto q = Potential::for_target(PotentialKind::Quartic, c);
  auto v0 = potential_value_grad(q, c, {0.0, 0.0, 0.0});
  CHECK(v0.value == doctest::Approx(0.25));
  check_vec(v0.grad, {0.0, 0.0, 0.0});

  const auto d2 = Potential::for_target(PotentialKind::SquaredDistance, c);
  auto v1 = potential_value_grad(d2, c, {2.0, 0.0, 0.0});
  CHECK(v1.value == doctest::Approx(1.0));
  check_vec(v1.grad, {2.0, 0.0, 0.0});
  CHECK_THROWS_AS(potential_value_grad(d2, c, {0.0, 0.0, 0.0}), Error);

  for (const Target& t : {Target::circle(), Target::cross_field(4), Target::sphere2()}) {
    for (auto kind : {PotentialKind::Quartic, PotentialKind::SquaredDistance}) {
      const auto pot = Potential::for_target(kind, t);
      const Vec on = t.dim() == 3 ? Vec{0.0, 0.0, 1.0} : Vec{t.radius(), 0.0, 0.0};
      auto z = potential_value_grad(pot, t, on);
      CHECK(z.value == doctest::Approx(0.0).scale(1.0));
      CHECK(norm(z.grad) == doctest::Approx(0.0).scale(1.0));

      // Sandwich (m/2) dist^2 <= F <= (M/2) dist^2 inside delta_F.
      std::mt19937 rng(3);
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      for (int i = 0; i < 200; ++i) {
        Vec dir{u(rng), u(rng), t.dim() == 3 ? u(rng) : 0.0};
        const double r = t.radius() + 0.999 * pot.delta_F * u(rng);
        const Vec y = (r / norm(dir)) * dir;
        const double dd = t.dist(y) * t.dist(y);
        const double F = potential_value_grad(pot, t, y).value;
        CHECK(F >= 0.5 * pot.m_F * dd - 1e-14);
        CHECK(F <= 0.5 * pot.M_F * dd + 1e-14);
      }
    }
  }
}

TEST_CASE("minimal length and singular energy") {
  const Target c = Target::circle();
  CHECK(minimal_length(c, {1}) == doctest::Approx(2 * pi));
  CHECK(minimal_length(c, {0}) == 0.0);
  CHECK(minimal_length(Target::cross_field(4), {1}) == doctest::Approx(pi / 2));
  CHECK(systole(Target::cross_field(6)) == doctest::Approx(pi / 3));

  CHECK(singular_energy(c, {1}) == doctest::Approx(pi));
  CHECK(singular_energy(c, {3}) == doctest::Approx(3 * pi));
  CHECK(singular_energy(c, {0}) == 0.0);
  CHECK(singular_energy(Target::cross_field(4), {4}) == doctest::Approx(pi / 4));
  CHECK(singular_energy(Target::sphere2(), {0}) == 0.0);

  for (int k : {1, 2, 4}) {
    const Target t = Target::cross_field(k);
    const double L0 = 2 * pi / k;
    for (int d = -5; d <= 5; ++d) {
      CHECK(singular_energy(t, {d}) == doctest::Approx(brute(d, 6) * L0 * L0 / (4 * pi)));
    }
  }
}

TEST_CASE("geodesic loops") {
  const Target c = Target::circle();
  const auto l = geodesic_loop(c, {1}, 4);
  REQUIRE(l.size() == 4);
  check_vec(l[0], {1, 0, 0});
  check_vec(l[1], {0, 1, 0});
  check_vec(l[2], {-1, 0, 0});
  check_vec(l[3], {0, -1, 0});
  CHECK(loop_winding(geodesic_loop(c, {-1}, 16)) == -1);
  CHECK(loop_winding(geodesic_loop(c, {3}, 64)) == 3);

  const Target t = Target::cross_field(4);
  double len = 0.0;
  const auto g = geodesic_loop(t, {1}, 4096);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(norm(g[i]) == doctest::Approx(0.25));
    len += norm(g[(i + 1) % g.size()] - g[i]);
  }
  CHECK(len == doctest::Approx(pi / 2).epsilon(1e-6));
}

TEST_CASE("target parsing") {
  CHECK(Target::parse("crossfield:6") == Target::cross_field(6));
  CHECK(Target::parse("sphere2").to_string() == "sphere2");
  CHECK_THROWS_AS(Target::parse("crossfield:0"), Error);
  CHECK_THROWS_AS(Target::parse("torus"), Error);
}
