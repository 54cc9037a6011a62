#include "clusterham/mbqc.hpp"

#include <cmath>
#include <sstream>

#include "json.hpp"

namespace clusterham {

namespace {

constexpr double kForceFloor = 1e-14;

// projector coefficients: outcome branch s of a planar/X/Z measurement maps
// the pair (a0, a1) on the measured qubit to a single coefficient
Complex branch_coefficient(const MeasurementBasis& basis, int s, Complex a0, Complex a1) {
    switch (basis.kind) {
        case BasisKind::Zbasis:
            return s == 0 ? a0 : a1;
        case BasisKind::Xbasis:
            return (a0 + (s == 0 ? a1 : -a1)) / std::sqrt(2.0);
        case BasisKind::Planar: {
            const Complex ph = std::polar(1.0, basis.alpha);  // <m_s|1> = (+-e^{ia})/sqrt2
            return (a0 + (s == 0 ? ph * a1 : -ph * a1)) / std::sqrt(2.0);
        }
    }
    return {};
}

// post-measurement single-qubit state |m_s>
std::array<Complex, 2> branch_state(const MeasurementBasis& basis, int s) {
    const double r = 1.0 / std::sqrt(2.0);
    switch (basis.kind) {
        case BasisKind::Zbasis:
            return s == 0 ? std::array<Complex, 2>{1.0, 0.0} : std::array<Complex, 2>{0.0, 1.0};
        case BasisKind::Xbasis:
            return {r, s == 0 ? r : -r};
        case BasisKind::Planar: {
            const Complex ph = std::polar(1.0, -basis.alpha);
            return {r, (s == 0 ? ph : -ph) * r};
        }
    }
    return {};
}

}  // namespace

MeasurementResult measure_qubit(const StateVector& state, QubitId qubit,
                                const MeasurementBasis& basis, RandomSource& rng,
                                std::optional<int> forced) {
    const std::size_t dim = state.dim();
    const std::size_t bit = std::size_t(1) << qubit;
    if (bit >= dim) throw InvalidArgument("qubit out of range");

    double p[2] = {0.0, 0.0};
    for (int s = 0; s < 2; ++s) {
        for (std::size_t i = 0; i < dim; ++i) {
            if (i & bit) continue;
            p[s] += std::norm(branch_coefficient(basis, s, state.amp[i], state.amp[i | bit]));
        }
    }
    int outcome;
    if (forced) {
        outcome = *forced;
        if (outcome != 0 && outcome != 1) throw InvalidArgument("forced outcome must be 0 or 1");
        if (p[outcome] < kForceFloor)
            throw InvalidArgument("cannot force an outcome of probability < 1e-14");
    } else {
        outcome = rng.uniform01() < p[0] ? 0 : 1;
    }

    MeasurementResult res;
    res.outcome = outcome;
    res.probability = p[outcome];
    res.collapsed.n_qubits = state.n_qubits;
    res.collapsed.amp.assign(dim, Complex(0.0, 0.0));
    const auto ms = branch_state(basis, outcome);
    const double renorm = 1.0 / std::sqrt(p[outcome]);
    for (std::size_t i = 0; i < dim; ++i) {
        if (i & bit) continue;
        const Complex c =
            branch_coefficient(basis, outcome, state.amp[i], state.amp[i | bit]) * renorm;
        res.collapsed.amp[i] = c * ms[0];
        res.collapsed.amp[i | bit] = c * ms[1];
    }
    return res;
}

DecodeResult decode_site(const StateVector& state, SiteId site, const LatticeGraph& graph,
                         RandomSource& rng, std::optional<std::vector<int>> forced,
                         std::optional<QubitId> kept) {
    if (site >= graph.n_sites) throw InvalidArgument("site out of range");
    const auto& qs = graph.site_qubits[site];
    const QubitId keep = kept.value_or(qs.back());
    DecodeResult res;
    res.kept_qubit = keep;
    res.collapsed = state;
    std::size_t fi = 0;
    for (QubitId q : qs) {
        if (q == keep) continue;
        std::optional<int> f;
        if (forced) {
            if (fi >= forced->size()) throw InvalidArgument("forced pattern too short");
            f = (*forced)[fi++];
        }
        auto m = measure_qubit(res.collapsed, q, MeasurementBasis::x(), rng, f);
        res.collapsed = std::move(m.collapsed);
        res.outcomes.push_back(m.outcome);
        res.z_byproduct ^= m.outcome;
    }
    return res;
}

LogicalMeasurementResult logical_planar_measurement(
    const StateVector& state, SiteId site, double alpha, const LatticeGraph& graph,
    RandomSource& decode_rng, RandomSource& planar_rng, ByproductFrame frame,
    std::optional<std::vector<int>> forced_decode, std::optional<int> forced_planar) {
    LogicalMeasurementResult res;
    auto dec = decode_site(state, site, graph, decode_rng, std::move(forced_decode));
    for (std::size_t i = 0; i < dec.outcomes.size(); ++i) {
        std::size_t qi = 0, seen = 0;
        for (QubitId q : graph.site_qubits[site]) {
            if (q == dec.kept_qubit) continue;
            if (seen++ == i) { qi = q; break; }
        }
        res.records.push_back({site, static_cast<QubitId>(qi), "X", 0.0, dec.outcomes[i], frame});
    }
    frame.z ^= dec.z_byproduct;

    const double adapted = frame.x ? -alpha : alpha;
    auto m = measure_qubit(dec.collapsed, dec.kept_qubit, MeasurementBasis::planar(adapted),
                           planar_rng, forced_planar);
    const ByproductFrame next{m.outcome ^ frame.z, frame.x};
    res.outcome = m.outcome;
    res.collapsed = std::move(m.collapsed);
    res.frame_after = next;
    res.records.push_back({site, dec.kept_qubit, "planar", adapted, m.outcome, next});
    return res;
}

LogicalInput LogicalInput::random(std::uint64_t seed) {
    RandomSource rng(derive_seed(seed, 0x1709));
    Complex a0(rng.normal(), rng.normal()), a1(rng.normal(), rng.normal());
    const double n = std::sqrt(std::norm(a0) + std::norm(a1));
    return {a0 / n, a1 / n};
}

StateVector encoded_resource_state(const LatticeGraph& graph,
                                   const std::vector<LogicalInput>& inputs) {
    if (inputs.size() != graph.n_sites)
        throw InvalidArgument("one logical input per site required");
    if (graph.n_qubits > kDenseQubitGuard + 6)
        throw ResourceError("resource state too large");
    StateVector psi;
    psi.n_qubits = graph.n_qubits;
    psi.amp.assign(std::size_t(1) << graph.n_qubits, Complex(0.0, 0.0));
    const std::size_t dl = std::size_t(1) << graph.n_sites;
    for (std::size_t b = 0; b < dl; ++b) {
        Complex a(1.0, 0.0);
        Bits s = 0;
        for (SiteId m = 0; m < graph.n_sites; ++m) {
            const bool one = (b >> m) & 1;
            a *= one ? inputs[m].a1 : inputs[m].a0;
            if (one) s |= graph.site_mask[m];
        }
        int sign = 1;
        for (const auto& bond : graph.inter_bonds) {
            const std::size_t m =
                (std::size_t(1) << bond.a.site) | (std::size_t(1) << bond.b.site);
            if ((b & m) == m) sign = -sign;
        }
        psi.amp[s] = static_cast<double>(sign) * a;
    }
    psi.normalize();
    return psi;
}

std::array<Complex, 2> extract_qubit_state(const StateVector& state, QubitId qubit) {
    const std::size_t bit = std::size_t(1) << qubit;
    std::size_t best = 0;
    double best_a = -1.0;
    for (std::size_t i = 0; i < state.dim(); ++i)
        if (std::norm(state.amp[i]) > best_a) { best_a = std::norm(state.amp[i]); best = i; }
    const std::size_t base = best & ~bit;
    std::array<Complex, 2> v{state.amp[base], state.amp[base | bit]};
    // every (i, i|bit) pair must be proportional to the extracted pair,
    // otherwise the kept qubit is still entangled
    double worst = 0.0;
    for (std::size_t i = 0; i < state.dim(); ++i) {
        if (i & bit) continue;
        worst = std::max(worst, std::abs(state.amp[i] * v[1] - state.amp[i | bit] * v[0]));
    }
    if (worst > 1e-9)
        throw InvalidArgument("remaining state is not a product on the kept qubit");
    const double n = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
    return {v[0] / n, v[1] / n};
}

LatticeGraph chain_graph(int n_logical) {
    return build_ring(static_cast<std::uint32_t>(n_logical), Boundary::open);
}

namespace {

// bare 1-qubit-per-site cluster chain presented with the same site bookkeeping
LatticeGraph bare_chain(int n) {
    LatticeGraph g;
    g.family = Family::line;
    g.boundary = Boundary::open;
    g.n_sites = n;
    g.n_qubits = n;
    g.site_qubits.resize(n);
    g.intra_bonds.resize(n);
    g.site_adjacency.resize(n);
    for (int s = 0; s < n; ++s) {
        g.site_qubits[s] = {static_cast<QubitId>(s)};
        g.qubit_site.push_back(s);
        g.site_mask.push_back(std::uint64_t(1) << s);
    }
    for (int s = 0; s + 1 < n; ++s) {
        g.inter_bonds.push_back({{static_cast<SiteId>(s), static_cast<QubitId>(s)},
                                 {static_cast<SiteId>(s + 1), static_cast<QubitId>(s + 1)}});
        g.site_adjacency[s].push_back(s + 1);
        g.site_adjacency[s + 1].push_back(s);
    }
    return g;
}

std::array<Complex, 2> apply_h_phase(const std::array<Complex, 2>& v, double alpha) {
    // H * P(alpha), P = diag(1, e^{i alpha})
    const Complex e = std::polar(1.0, alpha);
    const double r = 1.0 / std::sqrt(2.0);
    return {r * (v[0] + e * v[1]), r * (v[0] - e * v[1])};
}

}  // namespace

ChainResult run_chain(const ChainSpec& spec, std::uint64_t seed) {
    if (spec.n_logical < 2) throw InvalidArgument("chain needs >= 2 logical sites");
    if (spec.site_size != 1 && spec.site_size != 2)
        throw InvalidArgument("site_size must be 1 or 2");
    if (static_cast<int>(spec.angles.size()) != spec.n_logical - 1)
        throw InvalidArgument("need n_logical - 1 measurement angles");

    const LatticeGraph graph =
        spec.site_size == 2 ? chain_graph(spec.n_logical) : bare_chain(spec.n_logical);
    std::vector<LogicalInput> inputs(graph.n_sites, LogicalInput::plus());
    inputs[0] = spec.input;
    StateVector state = encoded_resource_state(graph, inputs);
    for (const auto& e : spec.error_paulis) {
        OperatorSum err;
        err.n_qubits = state.n_qubits;
        err.add(e.x_mask, e.z_mask, e.coeff);
        state = apply(err, state);
    }

    RandomSource planar_rng(derive_seed(seed, 0x9a1));   // separate streams keep the
    RandomSource decode_rng(derive_seed(seed, 0xd2c));   // logical transcript encoding-free

    ChainResult res;
    ByproductFrame frame;
    for (int j = 0; j + 1 < spec.n_logical; ++j) {
        std::optional<std::vector<int>> fd;
        if (spec.forced_decode) fd = (*spec.forced_decode)[j];
        std::optional<int> fp;
        if (spec.forced_planar) fp = (*spec.forced_planar)[j];
        auto m = logical_planar_measurement(state, static_cast<SiteId>(j), spec.angles[j],
                                            graph, decode_rng, planar_rng, frame, fd, fp);
        state = std::move(m.collapsed);
        frame = m.frame_after;
        for (auto& r : m.records) res.transcript.push_back(std::move(r));
    }

    const SiteId last = graph.n_sites - 1;
    std::optional<std::vector<int>> fd;
    if (spec.forced_decode) fd = (*spec.forced_decode)[spec.n_logical - 1];
    auto dec = decode_site(state, last, graph, decode_rng, fd);
    for (std::size_t i = 0; i < dec.outcomes.size(); ++i)
        res.transcript.push_back({last, graph.site_qubits[last][i], "X", 0.0, dec.outcomes[i], frame});
    frame.z ^= dec.z_byproduct;
    res.frame = frame;

    res.output = extract_qubit_state(dec.collapsed, dec.kept_qubit);
    res.corrected = res.output;
    if (frame.x) std::swap(res.corrected[0], res.corrected[1]);
    if (frame.z) res.corrected[1] = -res.corrected[1];

    res.reference = {spec.input.a0, spec.input.a1};
    for (double a : spec.angles) res.reference = apply_h_phase(res.reference, a);
    const Complex ip = std::conj(res.reference[0]) * res.corrected[0] +
                       std::conj(res.reference[1]) * res.corrected[1];
    res.fidelity = std::norm(ip);
    return res;
}

std::string transcript_to_jsonl(const std::vector<TranscriptRecord>& records) {
    std::ostringstream os;
    for (const auto& r : records) {
        nlohmann::json j;
        j["site"] = r.site;
        j["qubit"] = r.qubit;
        j["basis"] = r.basis;
        j["angle"] = r.angle;
        j["outcome"] = r.outcome;
        j["frame_after"] = {{"x", r.frame_after.x}, {"z", r.frame_after.z}};
        os << j.dump() << "\n";
    }
    return os.str();
}

}  // namespace clusterham
