#pragma once

// Inner loops of the energy functional. The OpenMP versions reduce per lattice
// row and then sum rows in order, so results do not depend on the thread
// count. The serial versions in `reference` are kept for testing.

#include <span>

#include "glvortex/grid.hpp"
#include "glvortex/target.hpp"

namespace glvortex::kernels {

struct EnergyTerms {
  double dirichlet = 0.0;
  double potential = 0.0;
  double total() const { return dirichlet + potential; }
};

/// Everything a kernel needs to evaluate F(u) * weight at a node.
struct PotentialTerm {
  PotentialKind kind;
  double radius;
  double weight;  // h^2 / eps^2
};

PotentialTerm make_term(const Potential& p, const Target& t, double h, double eps);

double dirichlet_energy(const Domain& d, std::span<const double> u, int dim);
/// grad is overwritten; zero outside interior nodes.
void dirichlet_gradient(const Domain& d, std::span<const double> u, int dim, std::span<double> grad);

double potential_energy(const Domain& d, std::span<const double> u, int dim, const PotentialTerm& f);

/// Energy and gradient in one sweep. Throws Errc::CutLocus if the potential
/// gradient is undefined at some interior node.
EnergyTerms energy_and_gradient(const Domain& d, std::span<const double> u, int dim,
                                const PotentialTerm& f, std::span<double> grad);

EnergyTerms energy(const Domain& d, std::span<const double> u, int dim, const PotentialTerm& f);

/// Max over interior nodes of |Delta_h u - grad F(u) / eps^2| (per-area units).
double el_residual(const Domain& d, std::span<const double> u, int dim, const PotentialTerm& f);

namespace reference {

double dirichlet_energy(const Domain& d, std::span<const double> u, int dim);
void dirichlet_gradient(const Domain& d, std::span<const double> u, int dim, std::span<double> grad);
EnergyTerms energy_and_gradient(const Domain& d, std::span<const double> u, int dim,
                                const PotentialTerm& f, std::span<double> grad);

}  // namespace reference

}  // namespace glvortex::kernels
