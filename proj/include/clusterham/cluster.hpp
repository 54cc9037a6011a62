#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "clusterham/hamiltonian.hpp"
#include "clusterham/lattice.hpp"
#include "clusterham/pauli.hpp"

namespace clusterham {

inline constexpr std::uint32_t kStateQubitGuard = 26;

// Logical cluster state embedded in the physical qubits; eigenstate of every
// K_mu with eigenvalue -1 exactly at the error sites.
struct EncodedClusterState {
    StateVector state;
    std::vector<SiteId> error_sites;
    // site pairs whose logical controlled-phase cancelled because the bond is
    // doubled (Z^2 = I); empty on regular lattices
    std::vector<std::pair<SiteId, SiteId>> cancelled_cz;
};

EncodedClusterState build_encoded_cluster(const LatticeGraph& graph,
                                          const std::vector<SiteId>& error_sites = {},
                                          std::uint32_t memory_guard_qubits = kStateQubitGuard);

// Independent construction: a two-qubit cluster pair on every inter bond,
// projected onto the per-site all-equal subspace.  Rejects doubled-bond
// graphs (the pair construction is per bond).
StateVector peps_oracle_cluster(const LatticeGraph& graph,
                                std::uint32_t memory_guard_qubits = kStateQubitGuard);

// Physical stabilizer K_mu: sigma-x on all site qubits, sigma-z on the
// representative qubit of each neighbor (doubled neighbors cancel).
OperatorSum stabilizer_operator(const LatticeGraph& graph, SiteId site);

double stabilizer_eigenvalue(const StateVector& state, const LatticeGraph& graph, SiteId site);

struct FirstOrderReport {
    StateVector state;
    double normalization = 1.0;   // norm of the unnormalized correction series
    Eigen::MatrixXd gram;         // exact Gram of the per-term excited states
    int distinct_k = 0;
    bool orthogonal = true;       // gram == identity
};

// First-order corrected ground state |C> - lambda * sum_t P_t|C> / (E_t - E0)
// with exact per-term excitation energies.  Square/hex/ring families only
// (1-qubit line ends put V|C> back in the logical space).
FirstOrderReport first_order_state(const LatticeGraph& graph, const CouplingParams& params,
                                   std::uint32_t memory_guard_qubits = kStateQubitGuard);

// Exact Gram matrix of the candidate excited states P_t|C> for every bond
// term, computed in the logical compression (no physical-size vectors), so it
// works on lattices far beyond state-vector reach.
Eigen::MatrixXd k_state_gram(const LatticeGraph& graph);

double overlap(const StateVector& a, const StateVector& b);  // |<a|b>|^2

void save_state(const StateVector& state, const std::string& path);
StateVector load_state(const std::string& path);

}  // namespace clusterham
