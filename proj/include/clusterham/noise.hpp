#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "clusterham/lattice.hpp"
#include "clusterham/mbqc.hpp"
#include "clusterham/pauli.hpp"
#include "clusterham/rng.hpp"

namespace clusterham {

enum class NoiseKind { bond, thermal };

struct NoiseModel {
    NoiseKind kind = NoiseKind::bond;
    double bond_p = 0.0;       // per error type per bond
    double delta = 0.0;        // gap feeding the thermal flip probability
    double temperature = 0.0;  // k_B absorbed into units
    std::uint64_t seed = 0;
};

inline double thermal_flip_probability(double delta, double temperature) {
    if (temperature <= 0.0) throw InvalidArgument("temperature must be positive");
    return 1.0 / (1.0 + std::exp(delta / temperature));
}

enum class BondErrorType { zx, xz };

struct BondError {
    int bond_index = 0;
    BondErrorType type = BondErrorType::zx;
};

// Two independent Bernoulli draws per bond, one per error type (the two
// error types match the two excited states each bond contributes).
std::vector<BondError> sample_bond_errors(const LatticeGraph& graph, double p,
                                          RandomSource& rng);

PauliTerm bond_error_pauli(const LatticeGraph& graph, const BondError& error);

StateVector apply_errors(const StateVector& state, const std::vector<BondError>& errors,
                         const LatticeGraph& graph);

// Independent logical-Z flip per site with p = (1 + exp(delta/T))^-1.
std::vector<SiteId> thermal_error_sample(const LatticeGraph& graph, double delta,
                                         double temperature, RandomSource& rng);

std::pair<double, double> wilson_interval(int failures, int trials);

struct ChainNoiseConfig {
    int n_logical = 4;
    int site_size = 2;
    std::vector<double> angles;  // empty: drawn from the seed
    LogicalInput input = LogicalInput::plus();
    NoiseModel model;
    int trials = 1000;
    std::vector<SiteId> thermal_sites;  // empty: every site may flip
};

struct RateReport {
    double rate = 0.0;
    double ci_low = 0.0, ci_high = 0.0;  // Wilson 95%
    int failures = 0;
    int trials = 0;
    // every failing trial matched the noiseless reference after one logical
    // Pauli correction (bond errors act as effective Pauli errors)
    bool all_failures_pauli_explained = true;
};

RateReport logical_error_rate(const ChainNoiseConfig& config);

struct SingleErrorEnumeration {
    double first_order_rate = 0.0;  // sum over single-error events of p(1-p)^{2B-1}
    int failing_events = 0;
    int total_events = 0;
    std::vector<int> failing_mask;  // per event (bond-major, zx then xz)
};

// Exhaustive single-bond-error oracle for the first-order analytic failure
// rate of the chain demo.
SingleErrorEnumeration enumerate_single_bond_errors(const ChainNoiseConfig& config);

// First T where the interpolated rate crosses the threshold; pairs sorted by T.
double estimate_critical_temperature(const std::vector<std::pair<double, double>>& t_rate,
                                     double threshold);

std::string noise_csv_header();
std::string noise_csv_row(const std::string& model, double p_or_t, const RateReport& r);

}  // namespace clusterham
