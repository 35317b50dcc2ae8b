#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <omp.h>

#include "glvortex/grid.hpp"
#include "glvortex/kernels.hpp"

using namespace glvortex;
constexpr double pi = std::numbers::pi;

namespace {

std::shared_ptr<const Domain> make(const Shape& s, double h, std::vector<Hole> holes = {}) {
  return std::make_shared<const Domain>(Domain::build(s, h, std::move(holes)));
}

void fill_radial(Field& f) {
  const Domain& d = f.domain();
  for (std::size_t p = 0; p < d.size(); ++p) {
    if (d.kind(p) == NodeKind::Exterior) continue;
    const Point2 x = d.position(p);
    const double r = std::hypot(x.x, x.y);
    f.set(p, {x.x / r, x.y / r, 0.0});
  }
}

}  // namespace

TEST_CASE("lattice construction") {
  const auto sq = make(Shape::rectangle(1.0, 1.0), 0.25);
  int inside = 0;
  for (std::size_t p = 0; p < sq->size(); ++p) inside += sq->kind(p) != NodeKind::Exterior;
  CHECK(inside == 25);
  CHECK(sq->interior_nodes().size() == 9);
  CHECK(sq->contour_count() == 1);

  const auto disk = make(Shape::disk(1.0), 0.25);
  for (std::size_t p = 0; p < disk->size(); ++p) {
    const Point2 x = disk->position(p);
    if (disk->kind(p) != NodeKind::Exterior) CHECK(std::hypot(x.x, x.y) <= 1.0 + 1e-12);
  }
  for (std::size_t p : disk->interior_nodes()) {
    const int ix = disk->ix(p), iy = disk->iy(p);
    for (auto q : {disk->index(ix + 1, iy), disk->index(ix - 1, iy), disk->index(ix, iy + 1), disk->index(ix, iy - 1)})
      CHECK(disk->kind(q) != NodeKind::Exterior);
  }

  CHECK(make(Shape::annulus(0.5, 1.0), 0.04)->contour_count() == 2);
  CHECK(make(Shape::disk(1.0), 1.0 / 32, {{{0.3, 0.0}, 0.1}})->contour_count() == 2);
  CHECK_THROWS_AS(Domain::build(Shape::disk(1.0), 0.6), Error);
}

TEST_CASE("boundary sampling and winding") {
  const Target c = Target::circle();
  const auto d = make(Shape::disk(1.0), 1.0 / 32);
  Field f(d, 2);
  sample_boundary(f, c, BoundaryDatum::geodesic(1));
  for (std::size_t s = 0; s < d->boundary_nodes().size(); ++s) {
    const Point2 x = d->position(d->boundary_nodes()[s]);
    const double th = std::atan2(x.y, x.x);
    CHECK(f.trace()[s][0] == doctest::Approx(std::cos(th)));
    CHECK(f.trace()[s][1] == doctest::Approx(std::sin(th)));
  }
  CHECK(contour_winding(f, 0, {0, 0}) == 1);

  Field z(d, 2);
  sample_boundary(z, c, BoundaryDatum::geodesic(0));
  CHECK(contour_winding(z, 0, {0, 0}) == 0);
  CHECK(z.trace().front()[0] == doctest::Approx(z.trace().back()[0]));

  Field p(d, 2);
  sample_boundary(p, c, BoundaryDatum::perturbed(1, 0.3, 1));
  CHECK(contour_winding(p, 0, {0, 0}) == 1);
  const Vec g = BoundaryDatum::perturbed(1, 0.3, 1).eval(c, 1.0);
  CHECK(g[0] == doctest::Approx(std::cos(1.0 + 0.3 * std::sin(1.0))));
}

TEST_CASE("dirichlet energy") {
  const auto d = make(Shape::disk(1.0), 1.0 / 16);
  Field f(d, 2);
  for (std::size_t p = 0; p < d->size(); ++p)
    if (d->kind(p) != NodeKind::Exterior) f.set(p, {0.3, -0.4, 0.0});
  CHECK(dirichlet_energy(f) == 0.0);
  for (double g : grad_dirichlet(f)) CHECK(g == doctest::Approx(0.0).scale(1.0));

  // x/|x| on the annulus: pi log 2 up to O(h^2).
  double prev_err = 1.0;
  for (double h : {1.0 / 32, 1.0 / 64, 1.0 / 128}) {
    Field a(make(Shape::annulus(0.5, 1.0), h), 2);
    fill_radial(a);
    const double err = std::abs(dirichlet_energy(a) - pi * std::log(2.0));
    CHECK(err < prev_err);
    prev_err = err;
  }
  CHECK(prev_err < 0.05);

  // Gradient against central differences.
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  Field r(d, 2);
  for (std::size_t p = 0; p < d->size(); ++p)
    if (d->kind(p) != NodeKind::Exterior) r.set(p, {u(rng), u(rng), 0.0});
  const auto g = grad_dirichlet(r);
  for (std::size_t p : d->interior_nodes()) {
    auto v = r.values();
    const double keep = v[p * 2];
    v[p * 2] = keep + 1e-6;
    const double up = dirichlet_energy(r);
    v[p * 2] = keep - 1e-6;
    const double down = dirichlet_energy(r);
    v[p * 2] = keep;
    CHECK(g[p * 2] == doctest::Approx((up - down) / 2e-6).epsilon(1e-6));
  }
}

TEST_CASE("parallel kernels match the serial reference") {
  const Target t = Target::circle();
  const auto pot = Potential::for_target(PotentialKind::Quartic, t);
  const auto d = make(Shape::disk(1.0), 1.0 / 96);
  std::vector<double> u(d->size() * 2, 0.0);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> uni(-1, 1);
  for (std::size_t p = 0; p < d->size(); ++p) {
    if (d->kind(p) == NodeKind::Exterior) continue;
    u[p * 2] = uni(rng);
    u[p * 2 + 1] = uni(rng);
  }
  const auto term = kernels::make_term(pot, t, d->h(), 0.1);
  std::vector<double> gp(u.size()), gr(u.size());
  const auto ep = kernels::energy_and_gradient(*d, u, 2, term, gp);
  const auto er = kernels::reference::energy_and_gradient(*d, u, 2, term, gr);
  CHECK(ep.total() == doctest::Approx(er.total()).epsilon(1e-13));
  for (std::size_t i = 0; i < u.size(); ++i) CHECK(gp[i] == doctest::Approx(gr[i]).epsilon(1e-13));
  CHECK(kernels::dirichlet_energy(*d, u, 2) ==
        doctest::Approx(kernels::reference::dirichlet_energy(*d, u, 2)).epsilon(1e-13));

  // Row-ordered reductions: bitwise identical for any thread count.
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const double one = kernels::energy(*d, u, 2, term).total();
  omp_set_num_threads(std::max(2, saved));
  const double many = kernels::energy(*d, u, 2, term).total();
  omp_set_num_threads(saved);
  CHECK(one == many);
}

TEST_CASE("field csv round trip") {
  const auto d = make(Shape::disk(1.0), 1.0 / 32, {{{0.3, 0.0}, 0.2}});
  Field f(d, 2);
  sample_boundary(f, Target::circle(), BoundaryDatum::geodesic(0));
  for (std::size_t p : d->interior_nodes()) f.set(p, {0.1 * p, -1.0 / 3.0, 0.0});
  std::stringstream ss;
  write_field_csv(ss, f, {{"epsilon", "0.1"}});
  const Field g = read_field_csv(ss);
  REQUIRE(g.domain().size() == d->size());
  CHECK(g.domain().holes().size() == 1);
  for (std::size_t i = 0; i < f.values().size(); ++i) CHECK(g.values()[i] == f.values()[i]);
  CHECK(holes_from_string(holes_to_string(d->holes())).front().radius == 0.2);
  CHECK(Shape::parse("annulus:0.5:1").to_string() == Shape::annulus(0.5, 1.0).to_string());
}
