#include "clusterham/pauli.hpp"

#include <cmath>

#include "json.hpp"

namespace clusterham {

void OperatorSum::add(Bits x, Bits z, double coeff) {
    if (std::popcount(x & z) & 1)
        throw InvalidArgument("PauliTerm with odd X/Z overlap needs an imaginary phase; "
                              "real-coefficient operators cannot represent it");
    terms.push_back({x, z, coeff});
}

OperatorSum& OperatorSum::operator+=(const OperatorSum& other) {
    if (n_qubits != other.n_qubits) throw InvalidArgument("OperatorSum qubit count mismatch");
    terms.insert(terms.end(), other.terms.begin(), other.terms.end());
    return *this;
}

OperatorSum scaled(const OperatorSum& op, double factor) {
    OperatorSum out = op;
    for (auto& t : out.terms) t.coeff *= factor;
    return out;
}

StateVector StateVector::zero_state(std::uint32_t n) {
    return basis_state(n, 0);
}

StateVector StateVector::basis_state(std::uint32_t n, Bits b) {
    StateVector s;
    s.n_qubits = n;
    s.amp.assign(std::size_t(1) << n, Complex(0.0, 0.0));
    s.amp[b] = 1.0;
    return s;
}

double StateVector::norm() const {
    double s = 0.0;
    for (const auto& a : amp) s += std::norm(a);
    return std::sqrt(s);
}

void StateVector::normalize() {
    const double n = norm();
    if (n == 0.0) throw InvalidArgument("cannot normalize the zero vector");
    for (auto& a : amp) a /= n;
}

void StateVector::fix_global_phase() {
    for (const auto& a : amp) {
        if (std::abs(a) > 1e-12) {
            const Complex phase = a / std::abs(a);
            for (auto& x : amp) x /= phase;
            return;
        }
    }
}

Complex inner(const StateVector& a, const StateVector& b) {
    if (a.n_qubits != b.n_qubits) throw InvalidArgument("state dimension mismatch");
    Complex s(0.0, 0.0);
    for (std::size_t i = 0; i < a.amp.size(); ++i) s += std::conj(a.amp[i]) * b.amp[i];
    return s;
}

StateVector apply(const OperatorSum& op, const StateVector& state) {
    if (op.n_qubits != state.n_qubits)
        throw InvalidArgument("operator/state qubit count mismatch");
    const std::int64_t dim = std::int64_t(1) << op.n_qubits;
    StateVector out;
    out.n_qubits = state.n_qubits;
    out.amp.assign(dim, Complex(0.0, 0.0));
    for (const auto& t : op.terms) {
        // out[j] += c * sign(j) * in[j ^ x]; the Z sign is a function of the
        // output index because the X part has already flipped.
#pragma omp parallel for schedule(static)
        for (std::int64_t j = 0; j < dim; ++j) {
            const double s = (std::popcount(Bits(j) & t.z_mask) & 1) ? -1.0 : 1.0;
            out.amp[j] += t.coeff * s * state.amp[j ^ t.x_mask];
        }
    }
    return out;
}

void apply_add_real(const OperatorSum& op, std::span<const double> in, std::span<double> out) {
    const std::int64_t dim = std::int64_t(1) << op.n_qubits;
    if (in.size() != std::size_t(dim) || out.size() != std::size_t(dim))
        throw InvalidArgument("operator/array dimension mismatch");
    for (const auto& t : op.terms) {
#pragma omp parallel for schedule(static)
        for (std::int64_t j = 0; j < dim; ++j) {
            const double s = (std::popcount(Bits(j) & t.z_mask) & 1) ? -1.0 : 1.0;
            out[j] += t.coeff * s * in[j ^ t.x_mask];
        }
    }
}

CompiledOperator::CompiledOperator(const OperatorSum& op) : n_qubits(op.n_qubits) {
    const std::int64_t d = std::int64_t(1) << op.n_qubits;
    diagonal.assign(d, 0.0);
    for (const auto& t : op.terms) {
        if (t.is_diagonal()) {
#pragma omp parallel for schedule(static)
            for (std::int64_t j = 0; j < d; ++j)
                diagonal[j] += t.coeff * ((std::popcount(Bits(j) & t.z_mask) & 1) ? -1.0 : 1.0);
        } else {
            offdiag.push_back(t);
        }
    }
}

void CompiledOperator::apply(std::span<const double> in, std::span<double> out) const {
    const std::int64_t d = static_cast<std::int64_t>(diagonal.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t j = 0; j < d; ++j) out[j] = diagonal[j] * in[j];
    for (const auto& t : offdiag) {
#pragma omp parallel for schedule(static)
        for (std::int64_t j = 0; j < d; ++j) {
            const double s = (std::popcount(Bits(j) & t.z_mask) & 1) ? -1.0 : 1.0;
            out[j] += t.coeff * s * in[j ^ t.x_mask];
        }
    }
}

SparseBasisMap apply_sparse(const OperatorSum& op, const SparseBasisMap& in,
                            std::size_t entry_budget) {
    if (op.n_qubits != in.n_qubits)
        throw InvalidArgument("operator/map qubit count mismatch");
    std::vector<std::pair<Bits, std::int64_t>> ts;
    ts.reserve(op.terms.size());
    std::vector<Bits> zmask;
    for (const auto& t : op.terms) {
        const double r = std::round(t.coeff);
        if (r != t.coeff)
            throw InvalidArgument("apply_sparse requires integer term coefficients");
        ts.push_back({t.x_mask, static_cast<std::int64_t>(r)});
        zmask.push_back(t.z_mask);
    }
    SparseBasisMap out;
    out.n_qubits = in.n_qubits;
    out.entries.reserve(in.entries.size() * 2);
    for (const auto& [key, val] : in.entries) {
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const Bits k2 = key ^ ts[i].first;
            const std::int64_t sgn = (std::popcount(k2 & zmask[i]) & 1) ? -1 : 1;
            auto it = out.entries.find(k2);
            if (it == out.entries.end()) {
                if (out.entries.size() >= entry_budget)
                    throw ResourceError("sparse basis map entry budget exceeded");
                out.entries.emplace(k2, sgn * ts[i].second * val);
            } else {
                it->second += sgn * ts[i].second * val;
                if (it->second == 0) out.entries.erase(it);
            }
        }
    }
    return out;
}

std::int64_t sparse_inner(const SparseBasisMap& a, const SparseBasisMap& b) {
    const auto& small = a.entries.size() <= b.entries.size() ? a : b;
    const auto& big = a.entries.size() <= b.entries.size() ? b : a;
    std::int64_t s = 0;
    for (const auto& [k, v] : small.entries) {
        auto it = big.entries.find(k);
        if (it != big.entries.end()) s += v * it->second;
    }
    return s;
}

Eigen::MatrixXd to_dense(const OperatorSum& op) {
    if (op.n_qubits > kDenseQubitGuard)
        throw ResourceError("to_dense limited to " + std::to_string(kDenseQubitGuard) +
                            " qubits; got " + std::to_string(op.n_qubits));
    const std::int64_t d = std::int64_t(1) << op.n_qubits;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
    for (const auto& t : op.terms)
        for (std::int64_t b = 0; b < d; ++b)
            m(b ^ t.x_mask, b) += t.coeff * t.sign_on(b);
    return m;
}

std::string operator_to_json(const OperatorSum& op) {
    nlohmann::json j;
    j["n_qubits"] = op.n_qubits;
    auto& terms = j["terms"] = nlohmann::json::array();
    for (const auto& t : op.terms)
        terms.push_back({{"x_mask", t.x_mask}, {"z_mask", t.z_mask}, {"coeff", t.coeff}});
    return j.dump(2);
}

}  // namespace clusterham
