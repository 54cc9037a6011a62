#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "clusterham/lattice.hpp"

using namespace clusterham;

namespace {

int adjacency_multiplicity(const LatticeGraph& g, SiteId a, SiteId b) {
    int n = 0;
    for (SiteId s : g.site_adjacency[a])
        if (s == b) ++n;
    return n;
}

void check_all_invariants(const LatticeGraph& g) {
    const auto rep = validate(g);
    CAPTURE(rep.failures.empty() ? "ok" : rep.failures[0]);
    CHECK(rep.ok);
    // sum of site qubit counts = 2 * |inter bonds|
    std::size_t total = 0;
    for (const auto& qs : g.site_qubits) total += qs.size();
    CHECK(total == 2 * g.inter_bonds.size());
    CHECK(total == g.n_qubits);
}

}  // namespace

TEST_CASE("square 2x2 periodic: hand enumeration of the torus") {
    const auto g = build_square(2, 2, Boundary::periodic);
    CHECK(g.n_sites == 4);
    CHECK(g.n_qubits == 16);
    CHECK(g.inter_bonds.size() == 8);
    check_all_invariants(g);
    // every site-pair adjacency that exists has multiplicity 2
    for (SiteId a = 0; a < 4; ++a)
        for (SiteId b = 0; b < 4; ++b) {
            const int m = adjacency_multiplicity(g, a, b);
            CHECK((m == 0 || m == 2));
        }
    const auto rep = validate(g);
    CHECK(!rep.doubled_bonds.empty());
}

TEST_CASE("square 3x3 periodic: no doubled bonds") {
    const auto g = build_square(3, 3, Boundary::periodic);
    CHECK(g.n_sites == 9);
    CHECK(g.n_qubits == 36);
    CHECK(g.inter_bonds.size() == 18);
    check_all_invariants(g);
    CHECK(validate(g).doubled_bonds.empty());
    // every site has exactly 4 distinct neighbors
    for (SiteId s = 0; s < 9; ++s) {
        std::set<SiteId> distinct(g.site_adjacency[s].begin(), g.site_adjacency[s].end());
        CHECK(distinct.size() == 4);
        CHECK(g.site_adjacency[s].size() == 4);
    }
}

TEST_CASE("square degenerate and invalid dimensions") {
    CHECK_THROWS_AS(build_square(1, 1, Boundary::open), LatticeError);
    CHECK_THROWS_AS(build_square(0, 3, Boundary::open), LatticeError);
    CHECK_THROWS_AS(build_square(1, 3, Boundary::periodic), LatticeError);
}

TEST_CASE("square open boundary shrinks edge sites to their bond degree") {
    const auto g = build_square(3, 3, Boundary::open);
    CHECK(g.n_sites == 9);
    // corner sites have 2 qubits, edges 3, interior 4
    std::multiset<std::size_t> counts;
    for (const auto& qs : g.site_qubits) counts.insert(qs.size());
    CHECK(counts == std::multiset<std::size_t>({2, 2, 2, 2, 3, 3, 3, 3, 4}));
    check_all_invariants(g);
}

TEST_CASE("hex 2x2 periodic: honeycomb torus enumeration") {
    const auto g = build_hex(2, 2, Boundary::periodic);
    CHECK(g.n_sites == 8);
    CHECK(g.n_qubits == 24);
    CHECK(g.inter_bonds.size() == 12);
    check_all_invariants(g);
    CHECK(validate(g).doubled_bonds.empty());
    for (const auto& qs : g.site_qubits) CHECK(qs.size() == 3);
    // triangle intra cycles
    for (const auto& ib : g.intra_bonds) CHECK(ib.size() == 3);
}

TEST_CASE("hex 1x1 periodic rejected; open patches obey the PEPS rule") {
    CHECK_THROWS_AS(build_hex(1, 1, Boundary::periodic), LatticeError);
    const auto g = build_hex(2, 1, Boundary::open);
    CHECK(g.n_sites == 4);
    check_all_invariants(g);  // qubit count == reduced bond degree per site
    std::multiset<std::size_t> counts;
    for (const auto& qs : g.site_qubits) counts.insert(qs.size());
    CHECK(counts == std::multiset<std::size_t>({1, 1, 2, 2}));
}

TEST_CASE("ring(4) periodic enumeration") {
    const auto g = build_ring(4, Boundary::periodic);
    CHECK(g.family == Family::ring);
    CHECK(g.n_qubits == 8);
    CHECK(g.inter_bonds.size() == 4);
    int intra = 0;
    for (const auto& ib : g.intra_bonds) intra += static_cast<int>(ib.size());
    CHECK(intra == 4);
    check_all_invariants(g);
}

TEST_CASE("line(2): minimal open line") {
    const auto g = build_ring(2, Boundary::open);
    CHECK(g.family == Family::line);
    CHECK(g.n_sites == 2);
    CHECK(g.n_qubits == 2);
    CHECK(g.inter_bonds.size() == 1);
    for (const auto& ib : g.intra_bonds) CHECK(ib.empty());
    check_all_invariants(g);
}

TEST_CASE("ring(6): each site neighbors left and right once") {
    const auto g = build_ring(6, Boundary::periodic);
    CHECK(g.n_qubits == 12);
    check_all_invariants(g);
    for (SiteId s = 0; s < 6; ++s) {
        CHECK(g.site_adjacency[s].size() == 2);
        CHECK(adjacency_multiplicity(g, s, (s + 1) % 6) == 1);
        CHECK(adjacency_multiplicity(g, s, (s + 5) % 6) == 1);
    }
    CHECK_THROWS_AS(build_ring(2, Boundary::periodic), LatticeError);
}

TEST_CASE("cubic builder: graph generation only") {
    const auto g = build_cubic(2, 2, 2, Boundary::periodic);
    CHECK(g.n_sites == 8);
    CHECK(g.n_qubits == 48);
    CHECK(g.inter_bonds.size() == 24);
    check_all_invariants(g);
    for (const auto& ib : g.intra_bonds) CHECK(ib.size() == 6);  // 6-cycle per site
    const auto open = build_cubic(2, 2, 1, Boundary::open);
    check_all_invariants(open);
}

TEST_CASE("builders are deterministic") {
    const auto a = build_square(3, 2, Boundary::open);
    const auto b = build_square(3, 2, Boundary::open);
    CHECK(a.site_qubits == b.site_qubits);
    CHECK(a.inter_bonds == b.inter_bonds);
    CHECK(a.intra_bonds == b.intra_bonds);
}

TEST_CASE("validate flags doubled bonds without aborting") {
    CHECK(validate(build_square(2, 2, Boundary::periodic)).doubled_bonds.size() == 4);
    CHECK(validate(build_square(3, 3, Boundary::periodic)).doubled_bonds.empty());
    const auto rep = validate(build_ring(4, Boundary::periodic));
    CHECK(rep.ok);
    CHECK(rep.doubled_bonds.empty());
}

TEST_CASE("json export/import round trip") {
    for (const auto& g : {build_square(2, 3, Boundary::open), build_hex(2, 2, Boundary::periodic),
                          build_ring(5, Boundary::periodic)}) {
        const auto text = graph_to_json(g);
        const auto h = graph_from_json(text);
        CHECK(h.family == g.family);
        CHECK(h.boundary == g.boundary);
        CHECK(h.n_sites == g.n_sites);
        CHECK(h.site_qubits == g.site_qubits);
        CHECK(h.intra_bonds == g.intra_bonds);
        CHECK(h.inter_bonds == g.inter_bonds);
        CHECK(h.site_adjacency == g.site_adjacency);
        CHECK(h.site_mask == g.site_mask);
        CHECK(validate(h).ok);
    }
}
