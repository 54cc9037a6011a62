#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "clusterham/lattice.hpp"
#include "clusterham/pauli.hpp"
#include "clusterham/rng.hpp"

namespace clusterham {

enum class BasisKind { Zbasis, Xbasis, Planar };

// planar(alpha) measures in {(|0> + e^{-i a}|1>)/sqrt2, (|0> - e^{-i a}|1>)/sqrt2};
// planar(0) is the X basis.
struct MeasurementBasis {
    BasisKind kind = BasisKind::Zbasis;
    double alpha = 0.0;
    static MeasurementBasis z() { return {BasisKind::Zbasis, 0.0}; }
    static MeasurementBasis x() { return {BasisKind::Xbasis, 0.0}; }
    static MeasurementBasis planar(double alpha) { return {BasisKind::Planar, alpha}; }
};

struct MeasurementResult {
    int outcome = 0;           // 0: '+', 1: '-'
    double probability = 0.0;  // Born probability of the sampled branch
    StateVector collapsed;
};

MeasurementResult measure_qubit(const StateVector& state, QubitId qubit,
                                const MeasurementBasis& basis, RandomSource& rng,
                                std::optional<int> forced = {});

// Pauli record for one logical wire; composition is mod-2 additive.
struct ByproductFrame {
    int x = 0;
    int z = 0;
};

struct TranscriptRecord {
    SiteId site = 0;
    QubitId qubit = 0;
    std::string basis;
    double angle = 0.0;
    int outcome = 0;
    ByproductFrame frame_after;
};

std::string transcript_to_jsonl(const std::vector<TranscriptRecord>& records);

struct DecodeResult {
    QubitId kept_qubit = 0;
    int z_byproduct = 0;  // parity of '-' outcomes
    StateVector collapsed;
    std::vector<int> outcomes;
};

// X-measure all but the kept qubit of the site (default: last in cycle
// order); the kept qubit carries the logical state up to Z^{z_byproduct}.
DecodeResult decode_site(const StateVector& state, SiteId site, const LatticeGraph& graph,
                         RandomSource& rng,
                         std::optional<std::vector<int>> forced = {},
                         std::optional<QubitId> kept = {});

struct LogicalMeasurementResult {
    int outcome = 0;  // raw planar outcome
    StateVector collapsed;
    ByproductFrame frame_after;
    std::vector<TranscriptRecord> records;
};

// decode_site, then measure the kept qubit in planar(alpha') with the angle
// sign adapted to the accumulated X frame; the Z byproduct and the standard
// (x,z) -> (s xor z, x) propagation update the frame.
LogicalMeasurementResult logical_planar_measurement(
    const StateVector& state, SiteId site, double alpha, const LatticeGraph& graph,
    RandomSource& decode_rng, RandomSource& planar_rng, ByproductFrame frame,
    std::optional<std::vector<int>> forced_decode = {}, std::optional<int> forced_planar = {});

struct LogicalInput {
    Complex a0{1.0, 0.0};
    Complex a1{0.0, 0.0};
    static LogicalInput zero() { return {1.0, 0.0}; }
    static LogicalInput plus() { return {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)}; }
    static LogicalInput random(std::uint64_t seed);
};

// Logical product state on an encoded graph (input at each site, |+> by
// default), entangled by a logical controlled-phase per bond.
StateVector encoded_resource_state(const LatticeGraph& graph,
                                   const std::vector<LogicalInput>& inputs);

// Reduced single-qubit state after every other qubit has been measured.
std::array<Complex, 2> extract_qubit_state(const StateVector& state, QubitId qubit);

LatticeGraph chain_graph(int n_logical);  // open line resource

struct ChainSpec {
    int n_logical = 4;
    int site_size = 2;  // 2: encoded line, 1: bare cluster chain
    std::vector<double> angles;  // length n_logical - 1
    LogicalInput input = LogicalInput::plus();
    std::vector<PauliTerm> error_paulis;  // injected before any measurement
    std::optional<std::vector<int>> forced_planar;
    std::optional<std::vector<std::vector<int>>> forced_decode;
};

struct ChainResult {
    std::array<Complex, 2> output{};     // raw kept-qubit state
    std::array<Complex, 2> corrected{};  // frame-corrected output
    std::array<Complex, 2> reference{};  // prod_j H P(angle_j) applied to the input
    ByproductFrame frame;
    double fidelity = 0.0;  // |<reference|corrected>|^2
    std::vector<TranscriptRecord> transcript;
};

// Measurement-driven single-logical-qubit rotations along a chain: measures
// sites 0..n-2 with adaptive planar angles, decodes the final site, and
// compares the frame-corrected output against the reference circuit.
ChainResult run_chain(const ChainSpec& spec, std::uint64_t seed);

}  // namespace clusterham
