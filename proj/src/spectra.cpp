#include "clusterham/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "clusterham/cluster.hpp"
#include "clusterham/rng.hpp"
#include "json.hpp"

namespace clusterham {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

double column_norm(const MatrixXd& m, Index c) { return m.col(c).norm(); }

// Whiten S (given as blocks) through its Gram matrix: returns J such that
// (S J)^T (S J) = I, dropping directions with Gram eigenvalue below drop_tol
// relative to the largest.
MatrixXd whitening_transform(const MatrixXd& gram, double drop_tol) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(gram);
    const VectorXd& ev = es.eigenvalues();
    const double cut = ev(ev.size() - 1) * drop_tol;
    int keep = 0;
    for (Index i = 0; i < ev.size(); ++i)
        if (ev(i) > cut) ++keep;
    MatrixXd j(gram.rows(), keep);
    int c = 0;
    for (Index i = 0; i < ev.size(); ++i)
        if (ev(i) > cut) j.col(c++) = es.eigenvectors().col(i) / std::sqrt(ev(i));
    return j;
}

struct Blocks {
    MatrixXd* basis[3];  // X, W, P (may be null)
    MatrixXd* image[3];  // AX, AW, AP
    int count = 0;
    Index cols() const {
        Index n = 0;
        for (int i = 0; i < count; ++i) n += basis[i]->cols();
        return n;
    }
};

MatrixXd block_gram(const Blocks& b, bool against_image) {
    const Index m = b.cols();
    MatrixXd g(m, m);
    Index r0 = 0;
    for (int i = 0; i < b.count; ++i) {
        Index c0 = 0;
        for (int j = 0; j < b.count; ++j) {
            const MatrixXd& right = against_image ? *b.image[j] : *b.basis[j];
            g.block(r0, c0, b.basis[i]->cols(), right.cols()).noalias() =
                b.basis[i]->transpose() * right;
            c0 += right.cols();
        }
        r0 += b.basis[i]->cols();
    }
    return g;
}

// combo = sum_i block_i * C.rows(block i)
void block_combine(const Blocks& b, bool image, const MatrixXd& c, MatrixXd& out) {
    Index r0 = 0;
    out.setZero();
    for (int i = 0; i < b.count; ++i) {
        const MatrixXd& m = image ? *b.image[i] : *b.basis[i];
        out.noalias() += m * c.middleRows(r0, m.cols());
        r0 += m.cols();
    }
}

}  // namespace

std::vector<std::vector<int>> cluster_eigenvalues(const std::vector<double>& e, double tol) {
    std::vector<std::vector<int>> clusters;
    for (int i = 0; i < static_cast<int>(e.size()); ++i) {
        if (clusters.empty() || e[i] - e[clusters.back().back()] > tol)
            clusters.push_back({});
        clusters.back().push_back(i);
    }
    return clusters;
}

namespace {

double cluster_mean(const std::vector<double>& e, const std::vector<int>& members) {
    double s = 0.0;
    for (int i : members) s += e[i];
    return s / static_cast<double>(members.size());
}

void finish_report(SpectrumReport& rep) {
    rep.degeneracy_clusters = cluster_eigenvalues(rep.eigenvalues, rep.cluster_tol);
    if (rep.degeneracy_clusters.size() >= 2)
        rep.gap = cluster_mean(rep.eigenvalues, rep.degeneracy_clusters[1]) -
                  cluster_mean(rep.eigenvalues, rep.degeneracy_clusters[0]);
    else
        rep.gap = 0.0;
}

}  // namespace

SpectrumReport lowest_eigenpairs(const OperatorSum& op, int k, double residual_tol,
                                 int max_iter, std::uint64_t seed,
                                 const SolverOptions& options) {
    if (k < 1) throw InvalidArgument("need k >= 1 eigenpairs");
    if (op.n_qubits > options.memory_guard_qubits && !options.force_memory)
        throw ResourceError("dense-vector allocation beyond " +
                            std::to_string(options.memory_guard_qubits) +
                            " qubits requires the force flag");
    const Index dim = Index(1) << op.n_qubits;
    if (dim < k) throw InvalidArgument("k exceeds the Hilbert space dimension");

    const CompiledOperator ham(op);
    const auto matvec = [&](const MatrixXd& in, MatrixXd& out, Index col) {
        ham.apply(std::span<const double>(in.col(col).data(), std::size_t(dim)),
                  std::span<double>(out.col(col).data(), std::size_t(dim)));
    };

    int b = options.block_size > 0 ? options.block_size : k + 2;
    b = static_cast<int>(std::min<Index>(b, dim));
    if (b < k) b = k;

    MatrixXd X(dim, b), AX(dim, b), W(dim, b), AW(dim, b), P(dim, 0), AP(dim, 0);
    RandomSource rng(derive_seed(seed, 0xb10c));
    for (int c = 0; c < b; ++c) {
        if (c < static_cast<int>(options.initial_guess.size())) {
            const auto& g = options.initial_guess[c];
            if (g.size() != std::size_t(dim))
                throw InvalidArgument("initial guess dimension mismatch");
            for (Index i = 0; i < dim; ++i) X(i, c) = g[i];
        } else {
            for (Index i = 0; i < dim; ++i) X(i, c) = rng.normal();
        }
    }
    {   // orthonormalize the start block
        Blocks blk{{&X, nullptr, nullptr}, {nullptr, nullptr, nullptr}, 1};
        const MatrixXd j = whitening_transform(block_gram(blk, false), 1e-12);
        MatrixXd t(dim, j.cols());
        block_combine(blk, false, j, t);
        X = t;
        b = static_cast<int>(X.cols());
        AX.resize(dim, b);
    }
    for (int c = 0; c < b; ++c) matvec(X, AX, c);

    // diagonal preconditioner workspace
    const double diag_min = *std::min_element(ham.diagonal.begin(), ham.diagonal.end());
    const double diag_max = *std::max_element(ham.diagonal.begin(), ham.diagonal.end());
    const double span = std::max(diag_max - diag_min, 1e-30);
    std::vector<double> precond(static_cast<std::size_t>(dim));

    VectorXd theta = VectorXd::Zero(b);
    std::vector<double> rnorm(b, 0.0);
    SpectrumReport rep;
    rep.residual_tol = residual_tol;
    rep.cluster_tol = options.cluster_tol > 0 ? options.cluster_tol : 10.0 * residual_tol;
    bool have_p = false;
    int iter = 0;
    bool converged = false;

    for (iter = 1; iter <= max_iter; ++iter) {
        // Rayleigh-Ritz on the current X block keeps theta in sync
        {
            MatrixXd g = X.transpose() * AX;
            g = 0.5 * (g + g.transpose()).eval();
            Eigen::SelfAdjointEigenSolver<MatrixXd> es(g);
            theta = es.eigenvalues();
            const MatrixXd c = es.eigenvectors();
            MatrixXd t = X * c;
            X.swap(t);
            t.noalias() = AX * c;
            AX.swap(t);
            if (have_p) {
                // keep P consistent with the rotated X (it only needs to span
                // complementary directions, so leaving it is also fine)
            }
        }

        MatrixXd R = AX;
        for (int c = 0; c < b; ++c) R.col(c) -= theta(c) * X.col(c);
        for (int c = 0; c < b; ++c) rnorm[c] = column_norm(R, c);

        converged = true;
        for (int c = 0; c < std::min(k, b); ++c)
            if (rnorm[c] > residual_tol) { converged = false; break; }
        if (converged) break;

        // W = T R with T = 1 / max(diag - sigma, floor)
        if (options.use_preconditioner) {
            const double floor_v = 0.03 * span;
            const double sigma = theta(0) - floor_v;
#pragma omp parallel for schedule(static)
            for (Index i = 0; i < dim; ++i)
                precond[i] = 1.0 / std::max(ham.diagonal[i] - sigma, floor_v);
            W = R;
            for (int c = 0; c < b; ++c) {
#pragma omp parallel for schedule(static)
                for (Index i = 0; i < dim; ++i) W(i, c) *= precond[i];
            }
        } else {
            W = R;
        }
        for (int c = 0; c < b; ++c) {
            const double n = column_norm(W, c);
            if (n > 0) W.col(c) /= n;
        }
        for (int c = 0; c < b; ++c) matvec(W, AW, c);

        Blocks blk{{&X, &W, have_p ? &P : nullptr},
                   {&AX, &AW, have_p ? &AP : nullptr},
                   have_p ? 3 : 2};
        const MatrixXd gram = block_gram(blk, false);
        const MatrixXd j = whitening_transform(gram, 1e-10);
        MatrixXd h = block_gram(blk, true);
        h = 0.5 * (h + h.transpose()).eval();
        const MatrixXd ht = j.transpose() * h * j;
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(ht);
        const int take = static_cast<int>(std::min<Index>(b, es.eigenvalues().size()));
        const MatrixXd c_full = j * es.eigenvectors().leftCols(take);  // block coords
        theta.head(take) = es.eigenvalues().head(take);

        // next X/AX from all blocks; next P/AP from the W and P parts only
        MatrixXd c_p = c_full;
        c_p.topRows(b).setZero();
        MatrixXd newX(dim, take), newAX(dim, take), newP(dim, take), newAP(dim, take);
        block_combine(blk, false, c_full, newX);
        block_combine(blk, true, c_full, newAX);
        block_combine(blk, false, c_p, newP);
        block_combine(blk, true, c_p, newAP);
        X.swap(newX);
        AX.swap(newAX);
        P.swap(newP);
        AP.swap(newAP);
        b = take;
        have_p = true;
    }

    rep.iterations = iter;
    rep.converged = converged;
    rep.eigenvalues.assign(theta.data(), theta.data() + std::min(k, b));
    rep.residual_norms.assign(rnorm.begin(), rnorm.begin() + std::min(k, b));
    if (options.keep_eigenvectors) {
        rep.eigenvectors.resize(rep.eigenvalues.size());
        for (std::size_t c = 0; c < rep.eigenvalues.size(); ++c)
            rep.eigenvectors[c].assign(X.col(c).data(), X.col(c).data() + dim);
    }
    finish_report(rep);
    if (!converged) {
        std::ostringstream msg;
        msg << "eigensolver did not reach residual " << residual_tol << " in " << max_iter
            << " iterations; best residuals:";
        for (int c = 0; c < std::min(k, b); ++c) msg << " " << rnorm[c];
        throw ConvergenceError(msg.str());
    }
    return rep;
}

SpectrumReport dense_spectrum(const OperatorSum& op, bool keep_eigenvectors) {
    const MatrixXd h = to_dense(op);  // enforces the dense qubit guard
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(h);
    SpectrumReport rep;
    rep.residual_tol = 1e-10;
    rep.cluster_tol = std::max(1e-9, 1e-12 * std::abs(es.eigenvalues()(h.rows() - 1)));
    rep.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + h.rows());
    rep.iterations = 1;

    const CompiledOperator ham(op);
    const Index dim = h.rows();
    const Index n_resid = std::min<Index>(dim, 128);
    std::vector<double> tmp(static_cast<std::size_t>(dim));
    for (Index c = 0; c < n_resid; ++c) {
        ham.apply(std::span<const double>(es.eigenvectors().col(c).data(), std::size_t(dim)),
                  std::span<double>(tmp.data(), std::size_t(dim)));
        double s = 0.0;
        for (Index i = 0; i < dim; ++i) {
            const double r = tmp[i] - rep.eigenvalues[c] * es.eigenvectors()(i, c);
            s += r * r;
        }
        rep.residual_norms.push_back(std::sqrt(s));
    }
    if (keep_eigenvectors) {
        rep.eigenvectors.resize(dim);
        for (Index c = 0; c < dim; ++c)
            rep.eigenvectors[c].assign(es.eigenvectors().col(c).data(),
                                       es.eigenvectors().col(c).data() + dim);
    }
    finish_report(rep);
    return rep;
}

FitReport fit_power_law(const std::vector<std::pair<double, double>>& points) {
    std::vector<double> xs;
    for (const auto& [x, y] : points)
        if (std::find(xs.begin(), xs.end(), x) == xs.end()) xs.push_back(x);
    if (xs.size() < 2) throw InvalidArgument("power-law fit needs >= 2 distinct x values");
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    const double n = static_cast<double>(points.size());
    for (const auto& [x, y] : points) {
        if (x <= 0 || y <= 0) throw InvalidArgument("power-law fit needs positive data");
        const double lx = std::log(x), ly = std::log(y);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly; syy += ly * ly;
    }
    FitReport fit;
    const double denom = n * sxx - sx * sx;
    fit.exponent = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - fit.exponent * sx) / n;
    fit.coefficient = std::exp(intercept);
    const double ss_tot = syy - sy * sy / n;
    double ss_res = 0;
    for (const auto& [x, y] : points) {
        const double pred = intercept + fit.exponent * std::log(x);
        ss_res += (std::log(y) - pred) * (std::log(y) - pred);
    }
    fit.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    fit.points = points;
    return fit;
}

GapScalingResult gap_scaling(const GapScalingConfig& cfg) {
    if (cfg.lambdas.size() < 4)
        throw InvalidArgument("gap scaling needs >= 4 lambda points");
    LatticeGraph graph;
    switch (cfg.family) {
        case Family::square_cavo: graph = build_square(cfg.rows, cfg.cols, cfg.boundary); break;
        case Family::hex_star: graph = build_hex(cfg.cells_a, cfg.cells_b, cfg.boundary); break;
        case Family::ring:
        case Family::line: graph = build_ring(cfg.n_sites, cfg.boundary); break;
        default: throw InvalidArgument("gap scaling: unsupported family");
    }

    GapScalingResult out;
    SolverOptions opts = cfg.solver;
    if (opts.block_size == 0) opts.block_size = cfg.k + 2;
    opts.keep_eigenvectors = true;
    if (cfg.cluster_guess && opts.initial_guess.empty()) {
        // zeroth-order eigenvectors: the encoded cluster state and single
        // logical-Z-error variants
        const int n_guess = std::min<int>(opts.block_size - 1, 1 + graph.n_sites);
        for (int i = 0; i < n_guess; ++i) {
            std::vector<SiteId> err;
            if (i > 0) err.push_back(static_cast<SiteId>(i - 1));
            const auto ecs = build_encoded_cluster(graph, err);
            std::vector<double> col(ecs.state.amp.size());
            for (std::size_t a = 0; a < col.size(); ++a) col[a] = ecs.state.amp[a].real();
            opts.initial_guess.push_back(std::move(col));
        }
    }

    std::vector<std::pair<double, double>> pts;
    for (double lam : cfg.lambdas) {
        if (lam / cfg.g > kPerturbativeWindow) out.window_warning = true;
        CouplingParams p{cfg.g, lam, BondType::zx_xz};
        const OperatorSum h = build_total(graph, p);
        SpectrumReport rep =
            lowest_eigenpairs(h, cfg.k, cfg.residual_tol, cfg.max_iter, cfg.seed, opts);
        if (cfg.warm_start) opts.initial_guess = rep.eigenvectors;
        out.gaps.push_back(rep.gap);
        pts.push_back({lam, rep.gap});
        out.reports.push_back(std::move(rep));
    }
    out.fit = fit_power_law(pts);
    return out;
}

std::string spectrum_report_to_json(const SpectrumReport& r) {
    nlohmann::json j;
    j["eigenvalues"] = r.eigenvalues;
    j["residual_norms"] = r.residual_norms;
    j["degeneracy_clusters"] = r.degeneracy_clusters;
    j["gap"] = r.gap;
    j["residual_tol"] = r.residual_tol;
    j["cluster_tol"] = r.cluster_tol;
    j["iterations"] = r.iterations;
    j["converged"] = r.converged;
    return j.dump(2);
}

std::string fit_report_to_json(const FitReport& r) {
    nlohmann::json j;
    j["exponent"] = r.exponent;
    j["coefficient"] = r.coefficient;
    j["r_squared"] = r.r_squared;
    auto& pts = j["points"] = nlohmann::json::array();
    for (const auto& [x, y] : r.points) pts.push_back({{"lambda", x}, {"gap", y}});
    return j.dump(2);
}

std::string eigenvalue_csv(const SpectrumReport& r) {
    std::ostringstream os;
    os << "level,energy,residual,cluster\n";
    std::vector<int> cluster_of(r.eigenvalues.size(), -1);
    for (std::size_t c = 0; c < r.degeneracy_clusters.size(); ++c)
        for (int i : r.degeneracy_clusters[c]) cluster_of[i] = static_cast<int>(c);
    os.precision(15);
    for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
        os << i << "," << r.eigenvalues[i] << ",";
        if (i < r.residual_norms.size()) os << r.residual_norms[i];
        os << "," << cluster_of[i] << "\n";
    }
    return os.str();
}

}  // namespace clusterham
