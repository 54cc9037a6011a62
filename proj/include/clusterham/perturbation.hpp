#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "clusterham/hamiltonian.hpp"
#include "clusterham/lattice.hpp"
#include "clusterham/pauli.hpp"

namespace clusterham {

using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

// The 2^{N_S} per-site all-equal computational strings; index bit mu is the
// logical value of site mu.  Every element is an H_S eigenstate at the lowest
// eigenvalue -(total intra bonds)*g.
struct LogicalBasis {
    std::uint32_t n_sites = 0;
    std::vector<Bits> strings;
};

LogicalBasis logical_basis(const LatticeGraph& graph);

// Exact integer matrix <b'|V^k|b> over the logical basis, V at unit coupling.
struct MomentMatrix {
    int order = 0;
    IntMatrix entries;
};

MomentMatrix projected_moment(const LatticeGraph& graph, int order,
                              std::size_t entry_budget = kDefaultSparseBudget);

// K_mu as a logical operator: bit flip at mu, sign from the neighbor bits
// (adjacency multiset, so doubled neighbors cancel).
IntMatrix logical_stabilizer_matrix(const LatticeGraph& graph, SiteId mu);

struct StabilizerDecomposition {
    int order = 0;
    std::int64_t identity_coeff = 0;
    std::vector<std::int64_t> k_coeffs;
    std::int64_t residual_max_abs = 0;  // exact zero test
    bool exact = false;                 // residual_max_abs == 0 and traces divisible
};

StabilizerDecomposition decompose_onto_stabilizers(const LatticeGraph& graph,
                                                   const IntMatrix& m, int order);

// Degeneracy-breaking operator at the given order, decomposed onto
// {identity, K_mu}: order 2 and 3 decompose the raw moment, order 4
// decomposes  Pi V^4 Pi - (Pi V^2 Pi)^2.
StabilizerDecomposition breaking_decomposition(const LatticeGraph& graph, int order,
                                               std::size_t entry_budget = kDefaultSparseBudget);

inline StabilizerDecomposition fourth_order_identity_check(
    const LatticeGraph& graph, std::size_t entry_budget = kDefaultSparseBudget) {
    return breaking_decomposition(graph, 4, entry_budget);
}

struct LadderLevel {
    int n = 0;
    double energy = 0.0;
    double dimension = 0.0;  // binomial(N_S, n)
};

struct PredictionReport {
    Family family = Family::square_cavo;
    std::uint32_t n_sites = 0;
    double g = 1.0, lambda = 0.0;
    double e0_zeroth = 0.0;
    double e2_shift = 0.0;
    double e3_shift = 0.0;
    double e4_shift = 0.0;
    double e0 = 0.0;
    double gap = 0.0;
    std::vector<LadderLevel> ladder;
    double illogical_gap_estimate = 0.0;
    bool window_warning = false;  // lambda/g above the perturbative window
};

// Closed-form perturbative predictions.  Square family uses the published
// coefficients; ring and hex derive their breaking coefficients from the
// exact moment oracle.  Line and cubic have no closed forms here.
PredictionReport predicted_energies(const LatticeGraph& graph, const CouplingParams& params);

struct EffectiveHamiltonian {
    Eigen::MatrixXd matrix;     // in the logical basis
    double min_singular = 0.0;  // of the logical projection of the eigenvectors
    bool well_conditioned = true;
};

// Numerically exact low-energy effective Hamiltonian: diagonalize, take the
// dim lowest eigenpairs, project onto the logical basis and orthonormalize
// (Loewdin).
EffectiveHamiltonian effective_hamiltonian_numeric(const LatticeGraph& graph,
                                                   const OperatorSum& op, int dim,
                                                   double residual_tol,
                                                   std::uint64_t seed = 0);

std::string decomposition_to_json(const StabilizerDecomposition& d);
std::string prediction_to_json(const PredictionReport& p);
std::string moment_csv(const MomentMatrix& m);

}  // namespace clusterham
