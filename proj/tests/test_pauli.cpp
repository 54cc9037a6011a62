#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "clusterham/hamiltonian.hpp"
#include "clusterham/pauli.hpp"
#include "clusterham/rng.hpp"

using namespace clusterham;

namespace {

StateVector random_state(std::uint32_t n, std::uint64_t seed) {
    RandomSource rng(seed);
    StateVector s;
    s.n_qubits = n;
    s.amp.resize(std::size_t(1) << n);
    for (auto& a : s.amp) a = Complex(rng.normal(), rng.normal());
    s.normalize();
    return s;
}

OperatorSum random_operator(std::uint32_t n, int terms, std::uint64_t seed) {
    RandomSource rng(seed);
    OperatorSum op;
    op.n_qubits = n;
    const Bits mask = (Bits(1) << n) - 1;
    for (int t = 0; t < terms; ++t) {
        Bits x = rng.bits() & mask;
        Bits z = rng.bits() & mask;
        if (std::popcount(x & z) & 1) z ^= Bits(1) << std::countr_zero(x & z);
        op.add(x, z, rng.normal());
    }
    return op;
}

double state_distance(const StateVector& a, const StateVector& b) {
    double d = 0;
    for (std::size_t i = 0; i < a.amp.size(); ++i) d += std::norm(a.amp[i] - b.amp[i]);
    return std::sqrt(d);
}

}  // namespace

TEST_CASE("identity operator leaves states unchanged") {
    OperatorSum id;
    id.n_qubits = 3;
    id.add(0, 0, 1.0);
    const auto s = random_state(3, 7);
    CHECK(state_distance(apply(id, s), s) < 1e-15);
}

TEST_CASE("sigma-z on |1> gives -|1>") {
    OperatorSum z;
    z.n_qubits = 1;
    z.add(0, 1, 1.0);
    const auto s = StateVector::basis_state(1, 1);
    const auto r = apply(z, s);
    CHECK(r.amp[1].real() == -1.0);
    CHECK(r.amp[0] == Complex(0.0, 0.0));
}

TEST_CASE("H_S of ring(4) on the all-zeros state gives -4g times it") {
    const auto g = build_ring(4, Boundary::periodic);
    const auto hs = scaled(build_site_hamiltonian(g), 2.5);  // g = 2.5
    const auto s = StateVector::zero_state(g.n_qubits);
    const auto r = apply(hs, s);
    CHECK(r.amp[0].real() == doctest::Approx(-4.0 * 2.5).epsilon(1e-14));
    for (std::size_t i = 1; i < r.amp.size(); ++i) CHECK(std::abs(r.amp[i]) == 0.0);
}

TEST_CASE("apply is linear") {
    const auto op = random_operator(5, 9, 11);
    const auto u = random_state(5, 1);
    const auto v = random_state(5, 2);
    const Complex alpha(0.3, -0.8), beta(-1.1, 0.2);
    StateVector w;
    w.n_qubits = 5;
    w.amp.resize(u.amp.size());
    for (std::size_t i = 0; i < w.amp.size(); ++i)
        w.amp[i] = alpha * u.amp[i] + beta * v.amp[i];
    const auto lhs = apply(op, w);
    const auto au = apply(op, u);
    const auto av = apply(op, v);
    for (std::size_t i = 0; i < w.amp.size(); ++i)
        CHECK(std::abs(lhs.amp[i] - (alpha * au.amp[i] + beta * av.amp[i])) < 1e-12);
}

TEST_CASE("every Pauli string is an involution up to its coefficient") {
    RandomSource seeds(3);
    for (int rep = 0; rep < 20; ++rep) {
        const auto op = random_operator(4, 1, seeds.bits());
        const auto s = random_state(4, seeds.bits());
        auto twice = apply(op, apply(op, s));
        const double c2 = op.terms[0].coeff * op.terms[0].coeff;
        for (std::size_t i = 0; i < s.amp.size(); ++i)
            CHECK(std::abs(twice.amp[i] - c2 * s.amp[i]) < 1e-12);
    }
}

TEST_CASE("to_dense and apply agree on random operators") {
    for (std::uint32_t n : {2u, 4u, 6u}) {
        const auto op = random_operator(n, 7, 100 + n);
        const auto m = to_dense(op);
        const auto s = random_state(n, 200 + n);
        const auto r = apply(op, s);
        for (std::size_t i = 0; i < s.amp.size(); ++i) {
            Complex mi(0, 0);
            for (std::size_t j = 0; j < s.amp.size(); ++j) mi += m(i, j) * s.amp[j];
            CHECK(std::abs(mi - r.amp[i]) < 1e-12);
        }
    }
}

TEST_CASE("to_dense examples: sigma-x and -zz") {
    OperatorSum x;
    x.n_qubits = 1;
    x.add(1, 0, 1.0);
    const auto mx = to_dense(x);
    CHECK(mx(0, 1) == 1.0);
    CHECK(mx(1, 0) == 1.0);
    CHECK(mx(0, 0) == 0.0);

    OperatorSum zz;
    zz.n_qubits = 2;
    zz.add(0, 3, -1.0);
    const auto mzz = to_dense(zz);
    CHECK(mzz(0, 0) == -1.0);
    CHECK(mzz(1, 1) == 1.0);
    CHECK(mzz(2, 2) == 1.0);
    CHECK(mzz(3, 3) == -1.0);
}

TEST_CASE("single 4-qubit site H_S is diagonal with the three levels") {
    OperatorSum hs;
    hs.n_qubits = 4;
    for (int i = 0; i < 4; ++i)
        hs.add(0, (Bits(1) << i) | (Bits(1) << ((i + 1) % 4)), -1.0);
    const auto m = to_dense(hs);
    std::vector<double> diag;
    for (int i = 0; i < 16; ++i) diag.push_back(m(i, i));
    std::sort(diag.begin(), diag.end());
    CHECK(std::count(diag.begin(), diag.end(), -4.0) == 2);
    CHECK(std::count(diag.begin(), diag.end(), 0.0) == 12);
    CHECK(std::count(diag.begin(), diag.end(), 4.0) == 2);
}

TEST_CASE("dense guard rejects large operators") {
    OperatorSum op;
    op.n_qubits = 15;
    op.add(0, 1, 1.0);
    CHECK_THROWS_AS(to_dense(op), ResourceError);
}

TEST_CASE("apply_add_real matches complex apply on real states") {
    const auto op = random_operator(6, 11, 42);
    RandomSource rng(5);
    const std::size_t dim = 64;
    std::vector<double> in(dim), out(dim, 0.0);
    for (auto& v : in) v = rng.normal();
    StateVector s;
    s.n_qubits = 6;
    s.amp.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) s.amp[i] = in[i];
    apply_add_real(op, in, out);
    const auto r = apply(op, s);
    for (std::size_t i = 0; i < dim; ++i)
        CHECK(out[i] == doctest::Approx(r.amp[i].real()).epsilon(1e-13));

    const CompiledOperator c(op);
    std::vector<double> out2(dim);
    c.apply(in, out2);
    for (std::size_t i = 0; i < dim; ++i) CHECK(out2[i] == doctest::Approx(out[i]).epsilon(1e-13));
}

TEST_CASE("sparse map: V on a logical string of the 3x3 square") {
    const auto g = build_square(3, 3, Boundary::periodic);
    const auto v = build_bond_hamiltonian(g, BondType::zx_xz);
    CHECK(v.terms.size() == 36);
    SparseBasisMap m;
    m.n_qubits = g.n_qubits;
    m.entries[0] = 1;  // all-zeros logical string
    const auto out = apply_sparse(v, m);
    CHECK(out.entries.size() <= 72);
    CHECK(out.entries.size() == 36);  // every term flips a distinct qubit
    for (const auto& [k, c] : out.entries) CHECK(std::abs(c) == 1);
}

TEST_CASE("sparse map: empty stays empty, involution returns +1") {
    OperatorSum term;
    term.n_qubits = 4;
    term.add(0b0010, 0b0100, 1.0);  // sx on 1, sz on 2

    SparseBasisMap empty;
    empty.n_qubits = 4;
    CHECK(apply_sparse(term, empty).entries.empty());

    SparseBasisMap m;
    m.n_qubits = 4;
    m.entries[0b0110] = 1;
    const auto twice = apply_sparse(term, apply_sparse(term, m));
    CHECK(twice.entries.size() == 1);
    CHECK(twice.entries.at(0b0110) == 1);
}

TEST_CASE("sparse arithmetic is exact and respects the entry budget") {
    const auto g = build_ring(4, Boundary::periodic);
    const auto v = build_bond_hamiltonian(g, BondType::zx_xz);
    SparseBasisMap m;
    m.n_qubits = g.n_qubits;
    m.entries[0] = 1;
    auto out = m;
    for (int k = 0; k < 3; ++k) out = apply_sparse(v, out);
    for (const auto& [key, c] : out.entries) CHECK(c != 0);  // zeros pruned
    CHECK_THROWS_AS(apply_sparse(v, out, 4), ResourceError);

    OperatorSum frac;
    frac.n_qubits = g.n_qubits;
    frac.add(1, 0, 0.5);
    CHECK_THROWS_AS(apply_sparse(frac, m), InvalidArgument);
}

TEST_CASE("odd X/Z overlap is rejected; even overlap is fine") {
    OperatorSum op;
    op.n_qubits = 2;
    CHECK_THROWS_AS(op.add(1, 1, 1.0), InvalidArgument);
    CHECK_NOTHROW(op.add(3, 3, 1.0));  // YY-type, real
}

TEST_CASE("state helpers: norm, normalize, global phase") {
    auto s = random_state(3, 9);
    CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-12));
    s.amp[0] *= 3.0;
    s.normalize();
    CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-12));
    s.fix_global_phase();
    std::size_t first = 0;
    while (std::abs(s.amp[first]) <= 1e-12) ++first;
    CHECK(s.amp[first].imag() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(s.amp[first].real() > 0.0);
}
