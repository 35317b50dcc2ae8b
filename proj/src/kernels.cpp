#include "glvortex/kernels.hpp"

#include <atomic>
#include <cmath>
#include <vector>

namespace glvortex::kernels {

namespace {

inline bool live(const std::uint8_t* kinds, std::size_t p) { return kinds[p] != 0; }

inline double sq_diff(const double* u, std::size_t p, std::size_t q, int dim) {
  double s = 0.0;
  for (int c = 0; c < dim; ++c) {
    const double t = u[p * dim + c] - u[q * dim + c];
    s += t * t;
  }
  return s;
}

// F(z) for a node; z has `dim` entries.
inline double potential_at(const double* z, int dim, const PotentialTerm& f) {
  double r2 = 0.0;
  for (int c = 0; c < dim; ++c) r2 += z[c] * z[c];
  const double a = f.radius;
  if (f.kind == PotentialKind::Quartic) {
    const double s = a * a - r2;
    return s * s / (4.0 * a * a);
  }
  const double d = std::sqrt(r2) - a;
  return d * d;
}

// Adds weight * grad F(z) to g. Returns false at the cut locus of dist^2.
inline bool add_potential_grad(const double* z, int dim, const PotentialTerm& f, double* g) {
  double r2 = 0.0;
  for (int c = 0; c < dim; ++c) r2 += z[c] * z[c];
  const double a = f.radius;
  double scale;
  if (f.kind == PotentialKind::Quartic) {
    scale = -(a * a - r2) / (a * a);
  } else {
    const double r = std::sqrt(r2);
    if (r == 0.0) return false;
    scale = 2.0 * (r - a) / r;
  }
  for (int c = 0; c < dim; ++c) g[c] += f.weight * scale * z[c];
  return true;
}

double sum_rows(const std::vector<double>& rows) {
  double s = 0.0;
  for (double r : rows) s += r;
  return s;
}

}  // namespace

PotentialTerm make_term(const Potential& p, const Target& t, double h, double eps) {
  return {p.kind, t.radius(), h * h / (eps * eps)};
}

double dirichlet_energy(const Domain& d, std::span<const double> u, int dim) {
  const int nx = d.nx();
  const int ny = d.ny();
  const std::uint8_t* kinds = d.kinds().data();
  const double* v = u.data();
  std::vector<double> rows(static_cast<std::size_t>(ny), 0.0);
#pragma omp parallel for schedule(static)
  for (int iy = 0; iy < ny - 1; ++iy) {
    double acc = 0.0;
    for (int ix = 0; ix < nx - 1; ++ix) {
      const std::size_t p = d.index(ix, iy);
      if (!live(kinds, p)) continue;
      if (live(kinds, p + 1)) acc += 0.5 * sq_diff(v, p, p + 1, dim);
      if (live(kinds, p + nx)) acc += 0.5 * sq_diff(v, p, p + nx, dim);
    }
    rows[static_cast<std::size_t>(iy)] = acc;
  }
  return sum_rows(rows);
}

void dirichlet_gradient(const Domain& d, std::span<const double> u, int dim, std::span<double> grad) {
  const int nx = d.nx();
  const int ny = d.ny();
  const std::uint8_t* kinds = d.kinds().data();
  const double* v = u.data();
  double* g = grad.data();
#pragma omp parallel for schedule(static)
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const std::size_t p = d.index(ix, iy);
      double* gp = g + p * dim;
      if (kinds[p] != static_cast<std::uint8_t>(NodeKind::Interior)) {
        for (int c = 0; c < dim; ++c) gp[c] = 0.0;
        continue;
      }
      for (int c = 0; c < dim; ++c) {
        const double up = v[p * dim + c];
        gp[c] = 4.0 * up - v[(p - 1) * dim + c] - v[(p + 1) * dim + c] -
                v[(p - nx) * dim + c] - v[(p + nx) * dim + c];
      }
    }
  }
}

double potential_energy(const Domain& d, std::span<const double> u, int dim, const PotentialTerm& f) {
  const int nx = d.nx();
  const int ny = d.ny();
  const std::uint8_t* kinds = d.kinds().data();
  const double* v = u.data();
  std::vector<double> rows(static_cast<std::size_t>(ny), 0.0);
#pragma omp parallel for schedule(static)
  for (int iy = 0; iy < ny; ++iy) {
    double acc = 0.0;
    for (int ix = 0; ix < nx; ++ix) {
      const std::size_t p = d.index(ix, iy);
      if (live(kinds, p)) acc += potential_at(v + p * dim, dim, f);
    }
    rows[static_cast<std::size_t>(iy)] = acc * f.weight;
  }
  return sum_rows(rows);
}

EnergyTerms energy(const Domain& d, std::span<const double> u, int dim, const PotentialTerm& f) {
  const int nx = d.nx();
  const int ny = d.ny();
  const std::uint8_t* kinds = d.kinds().data();
  const double* v = u.data();
  std::vector<double> drow(static_cast<std::size_t>(ny), 0.0);
  std::vector<double> prow(static_cast<std::size_t>(ny), 0.0);
#pragma omp parallel for schedule(static)
  for (int iy = 0; iy < ny - 1; ++iy) {
    double dacc = 0.0;
    double pacc = 0.0;
    for (int ix = 0; ix < nx - 1; ++ix) {
      const std::size_t p = d.index(ix, iy);
      if (!live(kinds, p)) continue;
      if (live(kinds, p + 1)) dacc += 0.5 * sq_diff(v, p, p + 1, dim);
      if (live(kinds, p + nx)) dacc += 0.5 * sq_diff(v, p, p + nx, dim);
      pacc += potential_at(v + p * dim, dim, f);
    }
    drow[static_cast<std::size_t>(iy)] = dacc;
    prow[static_cast<std::size_t>(iy)] = pacc * f.weight;
  }
  return {sum_rows(drow), sum_rows(prow)};
}

EnergyTerms energy_and_gradient(const Domain& d, std::span<const double> u, int dim,
                                const PotentialTerm& f, std::span<double> grad) {
  const int nx = d.nx();
  const int ny = d.ny();
  const std::uint8_t* kinds = d.kinds().data();
  const double* v = u.data();
  double* g = grad.data();
  std::vector<double> drow(static_cast<std::size_t>(ny), 0.0);
  std::vector<double> prow(static_cast<std::size_t>(ny), 0.0);
  std::atomic<bool> cut{false};
  constexpr auto interior = static_cast<std::uint8_t>(NodeKind::Interior);
#pragma omp parallel for schedule(static)
  for (int iy = 0; iy < ny; ++iy) {
    double dacc = 0.0;
    double pacc = 0.0;
    for (int ix = 0; ix < nx; ++ix) {
      const std::size_t p = d.index(ix, iy);
      double* gp = g + p * dim;
      for (int c = 0; c < dim; ++c) gp[c] = 0.0;
      if (!live(kinds, p)) continue;
      // padding guarantees p+1 and p+nx exist for live nodes
      if (live(kinds, p + 1)) dacc += 0.5 * sq_diff(v, p, p + 1, dim);
      if (live(kinds, p + nx)) dacc += 0.5 * sq_diff(v, p, p + nx, dim);
      pacc += potential_at(v + p * dim, dim, f);
      if (kinds[p] != interior) continue;
      for (int c = 0; c < dim; ++c) {
        gp[c] = 4.0 * v[p * dim + c] - v[(p - 1) * dim + c] - v[(p + 1) * dim + c] -
                v[(p - nx) * dim + c] - v[(p + nx) * dim + c];
      }
      if (!add_potential_grad(v + p * dim, dim, f, gp)) cut.store(true, std::memory_order_relaxed);
    }
    drow[static_cast<std::size_t>(iy)] = dacc;
    prow[static_cast<std::size_t>(iy)] = pacc * f.weight;
  }
  if (cut.load()) throw Error(Errc::CutLocus, "potential gradient undefined at an iterate");
  return {sum_rows(drow), sum_rows(prow)};
}

double el_residual(const Domain& d, std::span<const double> u, int dim, const PotentialTerm& f) {
  const int nx = d.nx();
  const double h2 = d.h() * d.h();
  const double* v = u.data();
  const auto& interior = d.interior_nodes();
  const std::size_t n = interior.size();
  std::vector<double> local(n, 0.0);
  std::atomic<bool> cut{false};
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t p = interior[i];
    double g[3] = {0.0, 0.0, 0.0};
    for (int c = 0; c < dim; ++c) {
      g[c] = 4.0 * v[p * dim + c] - v[(p - 1) * dim + c] - v[(p + 1) * dim + c] -
             v[(p - nx) * dim + c] - v[(p + nx) * dim + c];
    }
    if (!add_potential_grad(v + p * dim, dim, f, g)) cut.store(true, std::memory_order_relaxed);
    double s = 0.0;
    for (int c = 0; c < dim; ++c) s += g[c] * g[c];
    local[i] = std::sqrt(s) / h2;
  }
  if (cut.load()) throw Error(Errc::CutLocus, "potential gradient undefined at an iterate");
  double m = 0.0;
  for (double x : local) m = std::max(m, x);
  return m;
}

namespace reference {

double dirichlet_energy(const Domain& d, std::span<const double> u, int dim) {
  double e = 0.0;
  for (int iy = 0; iy < d.ny(); ++iy) {
    for (int ix = 0; ix < d.nx(); ++ix) {
      const std::size_t p = d.index(ix, iy);
      if (d.kind(p) == NodeKind::Exterior) continue;
      const int nbr[2][2] = {{ix + 1, iy}, {ix, iy + 1}};
      for (const auto& q2 : nbr) {
        if (q2[0] >= d.nx() || q2[1] >= d.ny()) continue;
        const std::size_t q = d.index(q2[0], q2[1]);
        if (d.kind(q) == NodeKind::Exterior) continue;
        for (int c = 0; c < dim; ++c) {
          const double t = u[p * dim + c] - u[q * dim + c];
          e += 0.5 * t * t;
        }
      }
    }
  }
  return e;
}

void dirichlet_gradient(const Domain& d, std::span<const double> u, int dim, std::span<double> grad) {
  std::fill(grad.begin(), grad.end(), 0.0);
  // Accumulate edge by edge: dE/du_p = sum over edges (u_p - u_q).
  for (int iy = 0; iy < d.ny(); ++iy) {
    for (int ix = 0; ix < d.nx(); ++ix) {
      const std::size_t p = d.index(ix, iy);
      if (d.kind(p) == NodeKind::Exterior) continue;
      const int nbr[2][2] = {{ix + 1, iy}, {ix, iy + 1}};
      for (const auto& q2 : nbr) {
        if (q2[0] >= d.nx() || q2[1] >= d.ny()) continue;
        const std::size_t q = d.index(q2[0], q2[1]);
        if (d.kind(q) == NodeKind::Exterior) continue;
        for (int c = 0; c < dim; ++c) {
          const double t = u[p * dim + c] - u[q * dim + c];
          grad[p * dim + c] += t;
          grad[q * dim + c] -= t;
        }
      }
    }
  }
  for (std::size_t p = 0; p < d.size(); ++p) {
    if (d.kind(p) != NodeKind::Interior) {
      for (int c = 0; c < dim; ++c) grad[p * dim + c] = 0.0;
    }
  }
}

EnergyTerms energy_and_gradient(const Domain& d, std::span<const double> u, int dim,
                                const PotentialTerm& f, std::span<double> grad) {
  EnergyTerms e;
  e.dirichlet = reference::dirichlet_energy(d, u, dim);
  reference::dirichlet_gradient(d, u, dim, grad);
  for (std::size_t p = 0; p < d.size(); ++p) {
    if (d.kind(p) == NodeKind::Exterior) continue;
    Vec z{0.0, 0.0, 0.0};
    for (int c = 0; c < dim; ++c) z[static_cast<std::size_t>(c)] = u[p * dim + c];
    const double r = norm(z);
    const double a = f.radius;
    double F;
    Vec gF;
    if (f.kind == PotentialKind::Quartic) {
      const double s = a * a - r * r;
      F = s * s / (4.0 * a * a);
      gF = (-s / (a * a)) * z;
    } else {
      F = (r - a) * (r - a);
      if (r == 0.0) {
        if (d.kind(p) == NodeKind::Interior)
          throw Error(Errc::CutLocus, "potential gradient undefined at an iterate");
        gF = {0.0, 0.0, 0.0};
      } else {
        gF = (2.0 * (r - a) / r) * z;
      }
    }
    e.potential += F * f.weight;
    if (d.kind(p) == NodeKind::Interior) {
      for (int c = 0; c < dim; ++c) grad[p * dim + c] += f.weight * gF[static_cast<std::size_t>(c)];
    }
  }
  return e;
}

}  // namespace reference

}  // namespace glvortex::kernels
