#include "clusterham/cluster.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

namespace clusterham {

namespace {

void check_state_guard(const LatticeGraph& g, std::uint32_t guard) {
    if (g.n_qubits > guard)
        throw ResourceError("state construction beyond " + std::to_string(guard) + " qubits");
    if (g.inter_bonds.empty())
        throw InvalidArgument("cluster state undefined without bonds");
}

// logical amplitudes of the cluster state (sign pattern, unnormalized +-1)
std::vector<int> logical_signs(const LatticeGraph& g, const std::vector<SiteId>& error_sites) {
    const std::size_t dl = std::size_t(1) << g.n_sites;
    std::vector<int> sign(dl, 1);
    for (const auto& bond : g.inter_bonds) {
        const std::uint64_t m = (std::uint64_t(1) << bond.a.site) | (std::uint64_t(1) << bond.b.site);
        for (std::size_t b = 0; b < dl; ++b)
            if ((b & m) == m) sign[b] = -sign[b];
    }
    for (SiteId s : error_sites)
        for (std::size_t b = 0; b < dl; ++b)
            if ((b >> s) & 1) sign[b] = -sign[b];
    return sign;
}

Bits embed(const LatticeGraph& g, std::size_t logical) {
    Bits s = 0;
    for (SiteId m = 0; m < g.n_sites; ++m)
        if ((logical >> m) & 1) s |= g.site_mask[m];
    return s;
}

}  // namespace

EncodedClusterState build_encoded_cluster(const LatticeGraph& g,
                                          const std::vector<SiteId>& error_sites,
                                          std::uint32_t memory_guard_qubits) {
    check_state_guard(g, memory_guard_qubits);
    for (SiteId s : error_sites)
        if (s >= g.n_sites) throw InvalidArgument("error site out of range");

    EncodedClusterState out;
    out.error_sites = error_sites;
    std::map<std::pair<SiteId, SiteId>, int> mult;
    for (const auto& b : g.inter_bonds) ++mult[{b.a.site, b.b.site}];
    for (const auto& [pair, m] : mult)
        if (m % 2 == 0) out.cancelled_cz.push_back(pair);

    const auto sign = logical_signs(g, error_sites);
    out.state.n_qubits = g.n_qubits;
    out.state.amp.assign(std::size_t(1) << g.n_qubits, Complex(0.0, 0.0));
    const double a = 1.0 / std::sqrt(double(std::size_t(1) << g.n_sites));
    for (std::size_t b = 0; b < sign.size(); ++b)
        out.state.amp[embed(g, b)] = sign[b] * a;
    return out;
}

StateVector peps_oracle_cluster(const LatticeGraph& g, std::uint32_t memory_guard_qubits) {
    check_state_guard(g, memory_guard_qubits);
    if (!validate(g).doubled_bonds.empty())
        throw InvalidArgument("PEPS pair construction rejects doubled-bond graphs");

    // product of two-qubit cluster pairs over bonds: amplitude (-1)^{s_i s_j}
    // on each bond, then projection onto the per-site all-equal subspace
    const std::size_t dim = std::size_t(1) << g.n_qubits;
    StateVector psi;
    psi.n_qubits = g.n_qubits;
    psi.amp.assign(dim, Complex(0.0, 0.0));
    for (std::size_t s = 0; s < dim; ++s) {
        bool logical = true;
        for (SiteId m = 0; m < g.n_sites && logical; ++m) {
            const Bits v = s & g.site_mask[m];
            logical = (v == 0) || (v == g.site_mask[m]);
        }
        if (!logical) continue;
        int sign = 1;
        for (const auto& bond : g.inter_bonds) {
            const Bits m = (Bits(1) << bond.a.qubit) | (Bits(1) << bond.b.qubit);
            if ((s & m) == m) sign = -sign;
        }
        psi.amp[s] = sign;
    }
    psi.normalize();
    psi.fix_global_phase();
    return psi;
}

OperatorSum stabilizer_operator(const LatticeGraph& g, SiteId site) {
    if (site >= g.n_sites) throw InvalidArgument("site out of range");
    Bits z = 0;
    for (SiteId nu : g.site_adjacency[site]) z ^= Bits(1) << g.representative(nu);
    OperatorSum k;
    k.n_qubits = g.n_qubits;
    k.add(g.site_mask[site], z, 1.0);
    return k;
}

double stabilizer_eigenvalue(const StateVector& state, const LatticeGraph& g, SiteId site) {
    const auto k = stabilizer_operator(g, site);
    return inner(state, apply(k, state)).real();
}

FirstOrderReport first_order_state(const LatticeGraph& g, const CouplingParams& p,
                                   std::uint32_t memory_guard_qubits) {
    if (g.family == Family::line || g.family == Family::cubic)
        throw InvalidArgument("first-order state supports square/hex/ring families");
    check_state_guard(g, memory_guard_qubits);

    const auto cluster = build_encoded_cluster(g, {}, memory_guard_qubits);
    const auto& c = cluster.state.amp;
    const std::size_t dim = c.size();
    const OperatorSum v = build_bond_hamiltonian(g, BondType::zx_xz);

    FirstOrderReport rep;
    rep.state.n_qubits = g.n_qubits;
    rep.state.amp = c;
    for (const auto& t : v.terms) {
        const QubitId q = static_cast<QubitId>(std::countr_zero(t.x_mask));
        const double de = 2.0 * p.g * g.intra_degree(q);  // exact excitation energy
        const double scale = -t.coeff * p.lambda / de;
        for (std::size_t i = 0; i < dim; ++i) {
            const std::size_t j = i ^ t.x_mask;
            const double s = (std::popcount(Bits(j) & t.z_mask) & 1) ? -1.0 : 1.0;
            rep.state.amp[j] += scale * s * c[i];
        }
    }
    rep.normalization = rep.state.norm();
    rep.state.normalize();
    rep.state.fix_global_phase();

    rep.gram = k_state_gram(g);
    const Eigen::MatrixXd diff =
        rep.gram - Eigen::MatrixXd::Identity(rep.gram.rows(), rep.gram.cols());
    rep.orthogonal = diff.cwiseAbs().maxCoeff() == 0.0;
    // count equivalence classes of identical |k> states (|<a|b>| == 1)
    std::vector<int> cls(rep.gram.rows(), -1);
    int n = 0;
    for (int i = 0; i < rep.gram.rows(); ++i) {
        if (cls[i] != -1) continue;
        cls[i] = n;
        for (int j = i + 1; j < rep.gram.cols(); ++j)
            if (std::abs(rep.gram(i, j)) == 1.0) cls[j] = n;
        ++n;
    }
    rep.distinct_k = n;
    return rep;
}

Eigen::MatrixXd k_state_gram(const LatticeGraph& g) {
    if (g.n_sites > 24) throw ResourceError("k-state gram limited to 24 sites");
    const OperatorSum v = build_bond_hamiltonian(g, BondType::zx_xz);
    const int nt = static_cast<int>(v.terms.size());
    const std::size_t dl = std::size_t(1) << g.n_sites;
    const auto sign = logical_signs(g, {});
    std::vector<Bits> embedded(dl);
    for (std::size_t b = 0; b < dl; ++b) embedded[b] = embed(g, b);
    // map embedded string -> logical index for the strings we can hit
    std::map<Bits, std::size_t> logical_of;
    for (std::size_t b = 0; b < dl; ++b) logical_of[embedded[b]] = b;

    const double unit = 1.0 / double(dl);
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(nt, nt);
    for (int a = 0; a < nt; ++a) {
        for (int b2 = a; b2 < nt; ++b2) {
            const auto& ta = v.terms[a];
            const auto& tb = v.terms[b2];
            double s = 0.0;
            for (std::size_t b = 0; b < dl; ++b) {
                // <C| P_a P_b |C> summed string by string
                const Bits u0 = embedded[b];
                const Bits u1 = u0 ^ tb.x_mask;
                const Bits u2 = u1 ^ ta.x_mask;
                const auto it = logical_of.find(u2);
                if (it == logical_of.end()) continue;
                int sg = (std::popcount(u1 & tb.z_mask) & 1) ? -1 : 1;
                if (std::popcount(u2 & ta.z_mask) & 1) sg = -sg;
                s += sg * sign[b] * sign[it->second] * unit;
            }
            gram(a, b2) = s;
            gram(b2, a) = s;
        }
    }
    return gram;
}

double overlap(const StateVector& a, const StateVector& b) {
    return std::norm(inner(a, b));
}

namespace {
constexpr char kMagic[4] = {'C', 'H', 'S', 'T'};
}

void save_state(const StateVector& state, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InvalidArgument("cannot open " + path + " for writing");
    f.write(kMagic, 4);
    const std::uint32_t version = 1, nq = state.n_qubits;
    f.write(reinterpret_cast<const char*>(&version), 4);
    f.write(reinterpret_cast<const char*>(&nq), 4);
    const std::uint32_t reserved = 0;
    f.write(reinterpret_cast<const char*>(&reserved), 4);
    for (const auto& a : state.amp) {
        const double re = a.real(), im = a.imag();
        f.write(reinterpret_cast<const char*>(&re), 8);
        f.write(reinterpret_cast<const char*>(&im), 8);
    }
    if (!f) throw InvalidArgument("write failed: " + path);
}

StateVector load_state(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InvalidArgument("cannot open " + path);
    char magic[4];
    std::uint32_t version = 0, nq = 0, reserved = 0;
    f.read(magic, 4);
    f.read(reinterpret_cast<char*>(&version), 4);
    f.read(reinterpret_cast<char*>(&nq), 4);
    f.read(reinterpret_cast<char*>(&reserved), 4);
    if (!f || std::string(magic, 4) != std::string(kMagic, 4) || version != 1)
        throw InvalidArgument("not a clusterham state file: " + path);
    StateVector s;
    s.n_qubits = nq;
    s.amp.resize(std::size_t(1) << nq);
    for (auto& a : s.amp) {
        double re = 0, im = 0;
        f.read(reinterpret_cast<char*>(&re), 8);
        f.read(reinterpret_cast<char*>(&im), 8);
        a = Complex(re, im);
    }
    if (!f) throw InvalidArgument("truncated state file: " + path);
    return s;
}

}  // namespace clusterham
