// OpenMP kernels against their serial references on disk lattices.
// Usage: bench_kernels [repeats]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <random>
#include <vector>

#include <omp.h>

#include "glvortex/grid.hpp"
#include "glvortex/kernels.hpp"

using namespace glvortex;

namespace {

template <class F>
double time_ms(int repeats, F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < repeats; ++i) f();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count() / repeats;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  const int repeats = argc > 1 ? std::atoi(argv[1]) : 20;
  const Target t = Target::circle();
  const Potential pot = Potential::for_target(PotentialKind::Quartic, t);
  std::printf("threads: %d, repeats: %d\n", omp_get_max_threads(), repeats);
  std::printf("%-8s %-22s %12s %12s %9s %12s\n", "nodes", "kernel", "serial_ms", "parallel_ms", "speedup",
              "max_diff");
  for (int n : {128, 256, 512, 1024}) {
    const double h = 1.0 / n;
    const Domain d = Domain::build(Shape::disk(1.0), h);
    const int dim = 2;
    std::vector<double> u(d.size() * dim, 0.0);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (std::size_t p = 0; p < d.size(); ++p) {
      if (d.kind(p) == NodeKind::Exterior) continue;
      u[p * dim] = uni(rng);
      u[p * dim + 1] = uni(rng);
    }
    const auto term = kernels::make_term(pot, t, h, 0.05);
    std::vector<double> g_par(u.size()), g_ref(u.size());

    double e_par = 0.0, e_ref = 0.0;
    const double ts = time_ms(repeats, [&] { e_ref = kernels::reference::dirichlet_energy(d, u, dim); });
    const double tp = time_ms(repeats, [&] { e_par = kernels::dirichlet_energy(d, u, dim); });
    std::printf("%-8zu %-22s %12.3f %12.3f %9.2f %12.3g\n", d.size(), "dirichlet_energy", ts, tp, ts / tp,
                std::abs(e_par - e_ref));

    const double ts2 = time_ms(repeats, [&] { kernels::reference::dirichlet_gradient(d, u, dim, g_ref); });
    const double tp2 = time_ms(repeats, [&] { kernels::dirichlet_gradient(d, u, dim, g_par); });
    std::printf("%-8zu %-22s %12.3f %12.3f %9.2f %12.3g\n", d.size(), "dirichlet_gradient", ts2, tp2, ts2 / tp2,
                max_diff(g_par, g_ref));

    kernels::EnergyTerms r_par, r_ref;
    const double ts3 =
        time_ms(repeats, [&] { r_ref = kernels::reference::energy_and_gradient(d, u, dim, term, g_ref); });
    const double tp3 = time_ms(repeats, [&] { r_par = kernels::energy_and_gradient(d, u, dim, term, g_par); });
    std::printf("%-8zu %-22s %12.3f %12.3f %9.2f %12.3g\n", d.size(), "energy_and_gradient", ts3, tp3,
                ts3 / tp3, std::max(std::abs(r_par.total() - r_ref.total()), max_diff(g_par, g_ref)));
  }
  return 0;
}
