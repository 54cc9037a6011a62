#include "clusterham/perturbation.hpp"

#include <cmath>
#include <sstream>

#include "clusterham/spectra.hpp"
#include "json.hpp"

namespace clusterham {

namespace {

constexpr std::uint32_t kMaxLogicalSites = 16;  // 65536 logical columns

void check_logical_size(const LatticeGraph& g) {
    if (g.n_sites > kMaxLogicalSites)
        throw ResourceError("logical basis beyond " + std::to_string(kMaxLogicalSites) +
                            " sites");
}

// excitation energy of one flipped qubit above the logical space, in units of g
int site_excitation(const LatticeGraph& g) {
    int d = g.intra_degree(0);
    for (QubitId q = 1; q < g.n_qubits; ++q) d = std::min(d, g.intra_degree(q));
    return 2 * d;
}

}  // namespace

LogicalBasis logical_basis(const LatticeGraph& g) {
    check_logical_size(g);
    LogicalBasis basis;
    basis.n_sites = g.n_sites;
    basis.strings.resize(std::size_t(1) << g.n_sites);
    for (std::size_t b = 0; b < basis.strings.size(); ++b) {
        Bits s = 0;
        for (SiteId m = 0; m < g.n_sites; ++m)
            if ((b >> m) & 1) s |= g.site_mask[m];
        basis.strings[b] = s;
    }
    return basis;
}

MomentMatrix projected_moment(const LatticeGraph& g, int order, std::size_t entry_budget) {
    if (order < 1 || order > 6) throw InvalidArgument("moment order must be in 1..6");
    const auto basis = logical_basis(g);
    const int dl = static_cast<int>(basis.strings.size());
    const OperatorSum v = build_bond_hamiltonian(g, BondType::zx_xz);

    // <b'|V^k|b> = <V^k1 b' | V^k2 b> with k1 = k/2 (V is real symmetric);
    // the propagated maps stay exact integers.
    const int k1 = order / 2;
    const int k2 = order - k1;
    const std::size_t column_budget = entry_budget / std::size_t(dl) + 1;

    std::vector<SparseBasisMap> half1(dl), half2(dl);
    bool budget_hit = false;
#pragma omp parallel for schedule(dynamic)
    for (int b = 0; b < dl; ++b) {
        try {
            SparseBasisMap m;
            m.n_qubits = g.n_qubits;
            m.entries[basis.strings[b]] = 1;
            for (int i = 0; i < k1; ++i) m = apply_sparse(v, m, column_budget);
            half1[b] = m;
            for (int i = k1; i < k2; ++i) m = apply_sparse(v, m, column_budget);
            half2[b] = std::move(m);
        } catch (const ResourceError&) {
#pragma omp critical
            budget_hit = true;
        }
    }
    if (budget_hit) throw ResourceError("sparse entry budget exceeded in moment computation");

    MomentMatrix mm;
    mm.order = order;
    mm.entries.resize(dl, dl);
#pragma omp parallel for schedule(dynamic)
    for (int bp = 0; bp < dl; ++bp)
        for (int b = 0; b < dl; ++b)
            mm.entries(bp, b) = sparse_inner(half1[bp], half2[b]);
    return mm;
}

IntMatrix logical_stabilizer_matrix(const LatticeGraph& g, SiteId mu) {
    check_logical_size(g);
    if (mu >= g.n_sites) throw InvalidArgument("site out of range");
    const int dl = 1 << g.n_sites;
    IntMatrix k = IntMatrix::Zero(dl, dl);
    std::uint64_t zbits = 0;
    for (SiteId nu : g.site_adjacency[mu]) zbits ^= std::uint64_t(1) << nu;
    for (int b = 0; b < dl; ++b) {
        const int sgn = (std::popcount(std::uint64_t(b) & zbits) & 1) ? -1 : 1;
        k(b ^ (1 << mu), b) = sgn;
    }
    return k;
}

StabilizerDecomposition decompose_onto_stabilizers(const LatticeGraph& g, const IntMatrix& m,
                                                   int order) {
    const int dl = static_cast<int>(m.rows());
    StabilizerDecomposition d;
    d.order = order;
    bool divisible = true;

    std::int64_t tr = 0;
    for (int i = 0; i < dl; ++i) tr += m(i, i);
    divisible = divisible && (tr % dl == 0);
    d.identity_coeff = tr / dl;

    IntMatrix residual = m;
    for (int i = 0; i < dl; ++i) residual(i, i) -= d.identity_coeff;

    for (SiteId mu = 0; mu < g.n_sites; ++mu) {
        // tr(K_mu M) = sum_b sign_mu(b) M(b ^ e_mu, b); K_mu are trace
        // orthogonal, so each coefficient reads off independently
        std::uint64_t zbits = 0;
        for (SiteId nu : g.site_adjacency[mu]) zbits ^= std::uint64_t(1) << nu;
        std::int64_t t = 0;
        for (int b = 0; b < dl; ++b) {
            const int sgn = (std::popcount(std::uint64_t(b) & zbits) & 1) ? -1 : 1;
            t += sgn * m(b ^ (1 << mu), b);
        }
        divisible = divisible && (t % dl == 0);
        const std::int64_t c = t / dl;
        d.k_coeffs.push_back(c);
        for (int b = 0; b < dl; ++b) {
            const int sgn = (std::popcount(std::uint64_t(b) & zbits) & 1) ? -1 : 1;
            residual(b ^ (1 << mu), b) -= c * sgn;
        }
    }
    d.residual_max_abs = residual.cwiseAbs().maxCoeff();
    d.exact = divisible && d.residual_max_abs == 0;
    return d;
}

StabilizerDecomposition breaking_decomposition(const LatticeGraph& g, int order,
                                               std::size_t entry_budget) {
    if (order < 2 || order > 4)
        throw InvalidArgument("breaking decomposition supports orders 2..4");
    const MomentMatrix mk = projected_moment(g, order, entry_budget);
    if (order < 4) return decompose_onto_stabilizers(g, mk.entries, order);
    const MomentMatrix m2 = projected_moment(g, 2, entry_budget);
    IntMatrix m = mk.entries - m2.entries * m2.entries;
    return decompose_onto_stabilizers(g, m, order);
}

PredictionReport predicted_energies(const LatticeGraph& g, const CouplingParams& p) {
    if (p.bond_type != BondType::zx_xz)
        throw InvalidArgument("predictions cover the zx_xz bond type");
    PredictionReport r;
    r.family = g.family;
    r.n_sites = g.n_sites;
    r.g = p.g;
    r.lambda = p.lambda;
    r.window_warning = p.lambda / p.g > kPerturbativeWindow;
    const double ns = g.n_sites;
    const double l2 = p.lambda * p.lambda;
    const double l3 = l2 * p.lambda;
    const double l4 = l2 * l2;

    switch (g.family) {
        case Family::square_cavo: {
            r.e0_zeroth = -4.0 * p.g * ns;
            r.e2_shift = -ns * l2 / p.g;
            r.e4_shift = -ns * (3.0 / 16.0) * l4 / (p.g * p.g * p.g);
            r.gap = (3.0 / 16.0) * l4 / (p.g * p.g * p.g);
            r.illogical_gap_estimate = 6.0 * p.g;
            break;
        }
        case Family::ring: {
            // breaking at second order; coefficient from the exact moment oracle
            const auto d = breaking_decomposition(g, 2);
            const double c2 = static_cast<double>(d.k_coeffs.empty() ? 0 : d.k_coeffs[0]);
            const double bonds = static_cast<double>(g.inter_bonds.size());
            const double denom = -2.0 * p.g;  // E0 - E1 for 2-qubit sites
            r.e0_zeroth = -p.g * ns;
            r.e2_shift = (2.0 * bonds + c2 * ns) * l2 / denom;
            r.gap = 2.0 * std::abs(c2) * l2 / std::abs(denom);
            r.illogical_gap_estimate = site_excitation(g) * p.g;
            break;
        }
        case Family::hex_star: {
            const auto d3 = breaking_decomposition(g, 3);
            const double c3 = static_cast<double>(d3.k_coeffs.empty() ? 0 : d3.k_coeffs[0]);
            const double bonds = static_cast<double>(g.inter_bonds.size());
            const double de = -4.0 * p.g;  // E0 - E1 for 3-qubit sites
            r.e0_zeroth = -3.0 * p.g * ns;
            r.e2_shift = 2.0 * bonds * l2 / de;
            r.e3_shift = c3 * ns * l3 / (de * de);
            r.gap = 2.0 * std::abs(c3) * l3 / (de * de);
            r.illogical_gap_estimate = site_excitation(g) * p.g;
            break;
        }
        default:
            throw InvalidArgument("no closed-form predictions for family " +
                                  to_string(g.family));
    }
    r.e0 = r.e0_zeroth + r.e2_shift + r.e3_shift + r.e4_shift;
    double dim = 1.0;
    for (std::uint32_t n = 0; n <= g.n_sites; ++n) {
        r.ladder.push_back({static_cast<int>(n), r.e0 + n * r.gap, dim});
        dim = dim * (ns - n) / (n + 1.0);
    }
    return r;
}

EffectiveHamiltonian effective_hamiltonian_numeric(const LatticeGraph& g,
                                                   const OperatorSum& op, int dim,
                                                   double residual_tol, std::uint64_t seed) {
    check_logical_size(g);
    const auto basis = logical_basis(g);
    const int dl = static_cast<int>(basis.strings.size());
    if (dim <= 0) dim = dl;
    if (dim > dl)
        throw InvalidArgument("effective Hamiltonian dimension exceeds the logical space");

    std::vector<double> energies;
    std::vector<std::vector<double>> vectors;
    if (op.n_qubits <= kDenseQubitGuard) {
        const auto rep = dense_spectrum(op, true);
        energies.assign(rep.eigenvalues.begin(), rep.eigenvalues.begin() + dim);
        vectors.assign(rep.eigenvectors.begin(), rep.eigenvectors.begin() + dim);
    } else {
        const auto rep = lowest_eigenpairs(op, dim, residual_tol, 3000, seed);
        energies = rep.eigenvalues;
        vectors = rep.eigenvectors;
    }

    // logical components of the eigenvectors
    Eigen::MatrixXd b(dl, dim);
    for (int j = 0; j < dim; ++j)
        for (int i = 0; i < dl; ++i) b(i, j) = vectors[j][basis.strings[i]];

    // Loewdin orthonormalization keeps the frame closest to the projections
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
    EffectiveHamiltonian eff;
    eff.min_singular = svd.singularValues()(dim - 1);
    eff.well_conditioned = eff.min_singular > 0.1;
    const Eigen::MatrixXd s = svd.matrixU() * svd.matrixV().transpose();
    Eigen::VectorXd e(dim);
    for (int j = 0; j < dim; ++j) e(j) = energies[j];
    eff.matrix = s * e.asDiagonal() * s.transpose();
    return eff;
}

std::string decomposition_to_json(const StabilizerDecomposition& d) {
    nlohmann::json j;
    j["order"] = d.order;
    j["identity_coeff"] = d.identity_coeff;
    j["k_coeffs"] = d.k_coeffs;
    j["residual_max_abs"] = d.residual_max_abs;
    j["exact"] = d.exact;
    return j.dump(2);
}

std::string prediction_to_json(const PredictionReport& p) {
    nlohmann::json j;
    j["family"] = to_string(p.family);
    j["n_sites"] = p.n_sites;
    j["g"] = p.g;
    j["lambda"] = p.lambda;
    j["e0_zeroth"] = p.e0_zeroth;
    j["e2_shift"] = p.e2_shift;
    j["e3_shift"] = p.e3_shift;
    j["e4_shift"] = p.e4_shift;
    j["e0"] = p.e0;
    j["gap"] = p.gap;
    j["illogical_gap_estimate"] = p.illogical_gap_estimate;
    j["window_warning"] = p.window_warning;
    auto& lad = j["ladder"] = nlohmann::json::array();
    for (const auto& l : p.ladder)
        lad.push_back({{"n", l.n}, {"energy", l.energy}, {"dimension", l.dimension}});
    return j.dump(2);
}

std::string moment_csv(const MomentMatrix& m) {
    std::ostringstream os;
    os << "row,col,value\n";
    for (int i = 0; i < m.entries.rows(); ++i)
        for (int j = 0; j < m.entries.cols(); ++j)
            if (m.entries(i, j) != 0) os << i << "," << j << "," << m.entries(i, j) << "\n";
    return os.str();
}

}  // namespace clusterham
