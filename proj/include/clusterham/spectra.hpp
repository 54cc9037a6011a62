#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "clusterham/hamiltonian.hpp"
#include "clusterham/lattice.hpp"
#include "clusterham/pauli.hpp"

namespace clusterham {

struct SpectrumReport {
    std::vector<double> eigenvalues;  // ascending
    std::vector<std::vector<double>> eigenvectors;  // real, one per reported pair (may be empty)
    std::vector<double> residual_norms;             // ||H v - E v|| where computed
    std::vector<std::vector<int>> degeneracy_clusters;
    double gap = 0.0;  // mean(first cluster above ground) - mean(ground cluster); 0 if single cluster
    double residual_tol = 0.0;
    double cluster_tol = 0.0;
    int iterations = 0;
    bool converged = true;
};

struct FitReport {
    double exponent = 0.0;
    double coefficient = 0.0;  // prefactor: y = coefficient * x^exponent
    double r_squared = 0.0;
    std::vector<std::pair<double, double>> points;  // (x, y) as fitted
};

struct SolverOptions {
    int block_size = 0;  // 0: k + 2
    bool use_preconditioner = true;
    bool keep_eigenvectors = true;
    double cluster_tol = 0.0;  // 0: 10 * residual_tol
    std::uint32_t memory_guard_qubits = 26;
    bool force_memory = false;
    std::vector<std::vector<double>> initial_guess;  // leading block columns
};

// Block Krylov (LOBPCG) extremal eigensolver with full basis
// reorthogonalization via spectral whitening of the trial Gram matrix.
// Deterministic for fixed seed.  Throws ConvergenceError after max_iter with
// the best residuals attached to the report inside the exception message;
// ResourceError on the dense-vector memory guard.
SpectrumReport lowest_eigenpairs(const OperatorSum& op, int k, double residual_tol,
                                 int max_iter, std::uint64_t seed,
                                 const SolverOptions& options = {});

// Full dense Hermitian diagonalization oracle (n_qubits <= 14).  Residuals
// are recomputed matrix-free for the lowest pairs.
SpectrumReport dense_spectrum(const OperatorSum& op, bool keep_eigenvectors = false);

std::vector<std::vector<int>> cluster_eigenvalues(const std::vector<double>& ascending,
                                                  double cluster_tol);

FitReport fit_power_law(const std::vector<std::pair<double, double>>& points);

struct GapScalingConfig {
    Family family = Family::ring;
    Boundary boundary = Boundary::periodic;
    // size parameters; which ones apply depends on the family
    std::uint32_t n_sites = 6;                  // ring/line
    std::uint32_t rows = 2, cols = 2;           // square
    std::uint32_t cells_a = 2, cells_b = 2;     // hex
    double g = 1.0;
    std::vector<double> lambdas;
    double residual_tol = 1e-8;
    int max_iter = 3000;
    std::uint64_t seed = 0;
    bool warm_start = true;     // reuse eigenvectors along the sweep
    bool cluster_guess = true;  // seed the block with logical cluster states
    int k = 3;                  // eigenpairs per point
    SolverOptions solver;
};

struct GapScalingResult {
    FitReport fit;
    std::vector<double> gaps;
    std::vector<SpectrumReport> reports;
    bool window_warning = false;  // some lambda/g above the perturbative window
};

GapScalingResult gap_scaling(const GapScalingConfig& config);

std::string spectrum_report_to_json(const SpectrumReport& report);
std::string fit_report_to_json(const FitReport& report);
// CSV rows: level,energy,residual,cluster
std::string eigenvalue_csv(const SpectrumReport& report);

}  // namespace clusterham
