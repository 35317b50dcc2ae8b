#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "glvortex/renorm.hpp"

using namespace glvortex;
constexpr double pi = std::numbers::pi;

namespace {

Model quartic() { return Model::make(Target::circle(), PotentialKind::Quartic); }

Field radial_field(double h) {
  auto d = std::make_shared<const Domain>(Domain::build(Shape::disk(1.0), h));
  Field f(d, 2);
  sample_boundary(f, Target::circle(), BoundaryDatum::geodesic(1));
  for (std::size_t p : d->interior_nodes()) {
    const Point2 x = d->position(p);
    const double r = std::hypot(x.x, x.y);
    f.set(p, r > 0 ? Vec{x.x / r, x.y / r, 0.0} : Vec{1.0, 0.0, 0.0});
  }
  return f;
}

}  // namespace

TEST_CASE("radial cell problem") {
  const Model m = quartic();
  const auto zero = cell_problem_radial(m, 0, 8.0);
  CHECK(zero.Q == doctest::Approx(0.0).scale(1.0));
  for (double f : zero.f) CHECK(f == doctest::Approx(1.0));

  const auto c = cell_problem_radial(m, 1, 8.0);
  CHECK(c.f.front() == doctest::Approx(0.0).scale(1.0));
  CHECK(c.f.back() == doctest::Approx(1.0));
  for (std::size_t i = 1; i < c.f.size(); ++i) CHECK(c.f[i] >= c.f[i - 1] - 1e-12);
  CHECK(c.q == doctest::Approx(c.Q - pi * std::log(8.0)));
  CHECK(profile_at(c, 100.0) == doctest::Approx(1.0));

  // Independent bound: the profile f = min(r, 1) on [0, R] gives an upper bound.
  // pi int_0^1 (1 + 1 + (1 - r^2)^2 / 2) r dr + pi log R.
  const double trial = pi * (1.0 + 1.0 / 12.0) + pi * std::log(8.0);
  CHECK(c.Q < trial);
  CHECK(c.Q > pi * std::log(8.0));

  double prev = 1e9;
  for (double R : {2.0, 4.0, 8.0, 16.0, 32.0}) {
    const double q = cell_problem_radial(m, 1, R).q;
    CHECK(q <= prev + 1e-3);
    prev = q;
  }
  const double c2 = cell_problem_radial(m, 2, 16.0).q;
  CHECK(std::isfinite(c2));
}

TEST_CASE("two-dimensional cell problem") {
  const Model m = quartic();
  SolveConfig cfg;
  cfg.clamp_radius = 1.0;
  const auto flat = cell_problem_2d(m, [](double) { return Vec{1.0, 0.0, 0.0}; }, 4.0, 4.0 / 32, cfg);
  CHECK(flat.Q == doctest::Approx(0.0).scale(1.0));
  CHECK(flat.degree == 0);

  const auto c = cell_problem_2d(m, [](double th) { return Vec{std::cos(th), std::sin(th), 0.0}; }, 4.0,
                                 4.0 / 48, cfg);
  CHECK(c.degree == 1);
  CHECK(c.Q == doctest::Approx(cell_problem_radial(m, 1, 4.0).Q).epsilon(0.05));
}

TEST_CASE("renormalisation fit") {
  const std::vector<Charge> one{{{0, 0}, 1}};
  AnnulusProfile exact;
  for (double r : {0.5, 0.3, 0.2, 0.1}) {
    exact.rho.push_back(r);
    exact.I.push_back(3.0 + pi * std::log(1.0 / r));
  }
  const auto fit = renorm_fit(exact, one, Target::circle());
  CHECK(fit.intercept == doctest::Approx(3.0));
  CHECK(fit.slope == doctest::Approx(pi));
  CHECK(fit.expected_slope == doctest::Approx(pi));

  AnnulusProfile short_span{{0.3, 0.2, 0.1}, {1, 2, 3}};
  CHECK_THROWS_AS(renorm_fit(short_span, one, Target::circle()), Error);
  AnnulusProfile two_points{{0.8, 0.1}, {1, 2}};
  CHECK_THROWS_AS(renorm_fit(two_points, one, Target::circle()), Error);

  const Field f = radial_field(1.0 / 128);
  const auto prof = annulus_energy_profile(f, one, {0.8, 0.6, 0.4, 0.3, 0.2});
  for (std::size_t i = 0; i < prof.rho.size(); ++i)
    CHECK(prof.I[i] == doctest::Approx(pi * std::log(1.0 / prof.rho[i])).epsilon(0.02).scale(1.0));
  const auto r = renorm_fit(prof, one, Target::circle());
  CHECK(r.intercept == doctest::Approx(0.0).epsilon(0.05).scale(1.0));
  CHECK(r.slope == doctest::Approx(pi).epsilon(0.05 / pi));

  CHECK(rho_bar(f.domain(), one) == doctest::Approx(1.0).epsilon(0.02));
  try {
    annulus_energy_profile(f, one, {1.5, 0.5, 0.2});
    FAIL("expected RhoBarViolated");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::RhoBarViolated);
  }
}

TEST_CASE("geometric energy probe") {
  const double e = geom_energy_probe(Shape::disk(1.0), 1.0 / 64, Target::circle(), BoundaryDatum::geodesic(1),
                                     {{{0, 0}, 1}}, 0.2);
  CHECK(e == doctest::Approx(pi * std::log(5.0)).epsilon(0.1 / (pi * std::log(5.0))));
  CHECK_THROWS_AS(geom_energy_probe(Shape::disk(1.0), 1.0 / 64, Target::circle(), BoundaryDatum::geodesic(1),
                                    {{{0.9, 0}, 1}}, 0.2),
                  Error);
}

TEST_CASE("expansion report arithmetic") {
  const auto rep = expansion_report({{0.1, 10.0}, {0.01, 17.0}}, pi, 0.5, 1.2);
  REQUIRE(rep.size() == 2);
  CHECK(rep[0].predicted == doctest::Approx(pi * std::log(10.0) + 1.7));
  CHECK(rep[1].gap == doctest::Approx(std::abs(17.0 - (pi * std::log(100.0) + 1.7))));
  double err = 0.0;
  const double q = core_constant(quartic(), {8, 16, 32}, &err);
  CHECK(q == doctest::Approx(cell_problem_radial(quartic(), 1, 32).q));
  CHECK(err < 0.05);
}
