#pragma once

#include "clusterham/lattice.hpp"
#include "clusterham/pauli.hpp"

namespace clusterham {

enum class BondType { zx_xz, heisenberg };

struct CouplingParams {
    double g = 1.0;       // site Ising strength
    double lambda = 0.1;  // bond strength
    BondType bond_type = BondType::zx_xz;
};

// Perturbative predictions are quoted for lambda/g <= this ratio; callers may
// warn above it.
inline constexpr double kPerturbativeWindow = 0.25;

// -sum_sites sum_{i~i'} sz_i sz_i' over intra-site cycle bonds, unit strength
// (g is applied by build_total).
OperatorSum build_site_hamiltonian(const LatticeGraph& graph);

// zx_xz: -sum_bonds (sz_i sx_j + sx_i sz_j), two terms per inter bond.
// heisenberg: +sum_bonds (XX + YY + ZZ) antiferromagnetic exchange; callers
// combining it with a site term should use the alternating-Ising variant.
OperatorSum build_bond_hamiltonian(const LatticeGraph& graph, BondType bond_type);

// g*H_S + lambda*V in one operator.  For the heisenberg bond type the site
// term alternates ZZ-type and XX-type Ising cycles over a bipartition of the
// site graph (non-bipartite graphs are rejected for that variant).
OperatorSum build_total(const LatticeGraph& graph, const CouplingParams& params);

}  // namespace clusterham
