#pragma once

#include <bit>
#include <complex>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "clusterham/errors.hpp"

namespace clusterham {

using Bits = std::uint64_t;
using Complex = std::complex<double>;

// Signed Pauli string with composition order fixed as Z·X: acting on a basis
// state, the X part flips first, then the Z part signs the flipped string.
// Coefficients are real; a qubit carrying both X and Z contributes a real
// (i*Y-like) factor, so a term is only accepted into an OperatorSum when the
// overlap popcount is even (odd overlap would need an imaginary phase).
struct PauliTerm {
    Bits x_mask = 0;
    Bits z_mask = 0;
    double coeff = 1.0;

    // sign picked up on |b>: (-1)^{|(b ^ x) & z|}
    double sign_on(Bits b) const {
        return (std::popcount((b ^ x_mask) & z_mask) & 1) ? -1.0 : 1.0;
    }
    bool is_diagonal() const { return x_mask == 0; }
};

struct OperatorSum {
    std::uint32_t n_qubits = 0;
    std::vector<PauliTerm> terms;

    void add(Bits x, Bits z, double coeff);
    OperatorSum& operator+=(const OperatorSum& other);
    std::size_t size() const { return terms.size(); }
};

OperatorSum scaled(const OperatorSum& op, double factor);

struct StateVector {
    std::uint32_t n_qubits = 0;
    std::vector<Complex> amp;

    static StateVector zero_state(std::uint32_t n_qubits);
    static StateVector basis_state(std::uint32_t n_qubits, Bits b);
    std::size_t dim() const { return amp.size(); }
    double norm() const;
    void normalize();
    // global phase convention: first nonzero amplitude real positive
    void fix_global_phase();
};

Complex inner(const StateVector& a, const StateVector& b);  // <a|b>

// Exact integer-weighted map from basis bitstrings to coefficients.  Closed
// under PauliTerm application without rounding; no zero entries stored.
struct SparseBasisMap {
    std::uint32_t n_qubits = 0;
    std::unordered_map<Bits, std::int64_t> entries;
};

StateVector apply(const OperatorSum& op, const StateVector& state);

// out += op * in on raw real arrays (valid because every operator in this
// artifact is real in the computational basis). Deterministic independent of
// worker count: terms are applied in order, each with disjoint writes.
void apply_add_real(const OperatorSum& op, std::span<const double> in, std::span<double> out);

// Operator split once into a fused diagonal plus off-diagonal terms; the hot
// path for iterative eigensolvers.
struct CompiledOperator {
    std::uint32_t n_qubits = 0;
    std::vector<double> diagonal;
    std::vector<PauliTerm> offdiag;

    explicit CompiledOperator(const OperatorSum& op);
    void apply(std::span<const double> in, std::span<double> out) const;  // out = H in
    std::size_t dim() const { return diagonal.size(); }
};

inline constexpr std::size_t kDefaultSparseBudget = 100'000'000;

// Exact propagation; op coefficients must be integers.
SparseBasisMap apply_sparse(const OperatorSum& op, const SparseBasisMap& in,
                            std::size_t entry_budget = kDefaultSparseBudget);

// <a|b> over exact maps (all coefficients integer, so this is exact).
std::int64_t sparse_inner(const SparseBasisMap& a, const SparseBasisMap& b);

inline constexpr std::uint32_t kDenseQubitGuard = 14;

Eigen::MatrixXd to_dense(const OperatorSum& op);

std::string operator_to_json(const OperatorSum& op);

}  // namespace clusterham
