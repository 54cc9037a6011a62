#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace clusterham {

using SiteId = std::uint32_t;
using QubitId = std::uint32_t;

enum class Family { square_cavo, hex_star, ring, line, cubic };
enum class Boundary { periodic, open };

std::string to_string(Family f);
std::string to_string(Boundary b);
Family family_from_string(const std::string& s);
Boundary boundary_from_string(const std::string& s);

struct QubitRef {
    SiteId site;
    QubitId qubit;  // global index
    bool operator==(const QubitRef&) const = default;
};

// Inter-site bond; endpoints stored with the lower SiteId first.
struct InterBond {
    QubitRef a;
    QubitRef b;
    bool operator==(const InterBond&) const = default;
};

// Site/bond graph for one lattice instance.  Immutable after build; every
// physical qubit belongs to exactly one site and touches exactly one inter
// bond (the PEPS rule: qubits per site == inter-bond degree of the site).
struct LatticeGraph {
    Family family = Family::square_cavo;
    Boundary boundary = Boundary::periodic;
    std::uint32_t n_sites = 0;
    std::vector<std::vector<QubitId>> site_qubits;                      // cycle order
    std::vector<std::vector<std::pair<QubitId, QubitId>>> intra_bonds;  // per site
    std::vector<InterBond> inter_bonds;
    std::vector<std::vector<SiteId>> site_adjacency;  // multiset, sorted

    std::uint32_t n_qubits = 0;
    std::vector<std::uint64_t> site_mask;  // bitmask of each site's qubits
    std::vector<SiteId> qubit_site;        // owning site per qubit

    SiteId site_of(QubitId q) const { return qubit_site[q]; }
    QubitId representative(SiteId s) const { return site_qubits[s][0]; }
    // Number of intra-cycle bonds incident on a qubit (2 in a cycle, 1 on an
    // edge pair, 0 for a lone qubit).
    int intra_degree(QubitId q) const;
    int total_intra_bonds() const;
};

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> failures;
    std::vector<std::pair<SiteId, SiteId>> doubled_bonds;  // distinct pairs with multiplicity >= 2
};

struct LatticeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

LatticeGraph build_square(std::uint32_t rows, std::uint32_t cols, Boundary boundary);
LatticeGraph build_hex(std::uint32_t cells_a, std::uint32_t cells_b, Boundary boundary);
LatticeGraph build_ring(std::uint32_t n_sites, Boundary boundary);
LatticeGraph build_cubic(std::uint32_t nx, std::uint32_t ny, std::uint32_t nz, Boundary boundary);

ValidationReport validate(const LatticeGraph& graph);

std::string graph_to_json(const LatticeGraph& graph);
LatticeGraph graph_from_json(const std::string& text);

}  // namespace clusterham
