#include "clusterham/lattice.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "json.hpp"

namespace clusterham {

namespace {

// Intermediate builder: sites declare ordered "ports" (bond endpoints);
// qubit ids are assigned contiguously in port order, which fixes the
// intra-site cycle order and makes construction deterministic.
struct PortGraph {
    Family family;
    Boundary boundary;
    std::uint32_t n_sites;
    // ports[s] = stable list of port labels actually used at site s
    std::vector<std::vector<int>> ports;
    // bonds as ((site, port), (site, port))
    std::vector<std::pair<std::pair<SiteId, int>, std::pair<SiteId, int>>> bonds;
};

LatticeGraph finish(const PortGraph& pg) {
    LatticeGraph g;
    g.family = pg.family;
    g.boundary = pg.boundary;
    g.n_sites = pg.n_sites;
    g.site_qubits.resize(pg.n_sites);
    g.intra_bonds.resize(pg.n_sites);
    g.site_adjacency.resize(pg.n_sites);

    std::vector<std::map<int, QubitId>> port_qubit(pg.n_sites);
    QubitId next = 0;
    for (SiteId s = 0; s < pg.n_sites; ++s) {
        if (pg.ports[s].empty())
            throw LatticeError("degenerate lattice: site " + std::to_string(s) +
                               " has no bonds (a site must have >= 1 bond)");
        for (int p : pg.ports[s]) {
            port_qubit[s][p] = next;
            g.site_qubits[s].push_back(next);
            g.qubit_site.push_back(s);
            ++next;
        }
        const auto& qs = g.site_qubits[s];
        if (qs.size() >= 3) {
            for (std::size_t i = 0; i < qs.size(); ++i)
                g.intra_bonds[s].push_back({qs[i], qs[(i + 1) % qs.size()]});
        } else if (qs.size() == 2) {
            g.intra_bonds[s].push_back({qs[0], qs[1]});
        }
    }
    g.n_qubits = next;

    for (const auto& [ea, eb] : pg.bonds) {
        QubitRef a{ea.first, port_qubit[ea.first].at(ea.second)};
        QubitRef b{eb.first, port_qubit[eb.first].at(eb.second)};
        if (a.site == b.site)
            throw LatticeError("degenerate lattice: self-bond at site " + std::to_string(a.site));
        if (b.site < a.site) std::swap(a, b);
        g.inter_bonds.push_back({a, b});
        g.site_adjacency[a.site].push_back(b.site);
        g.site_adjacency[b.site].push_back(a.site);
    }
    for (auto& adj : g.site_adjacency) std::sort(adj.begin(), adj.end());

    g.site_mask.resize(pg.n_sites, 0);
    for (SiteId s = 0; s < pg.n_sites; ++s)
        for (QubitId q : g.site_qubits[s]) g.site_mask[s] |= std::uint64_t(1) << q;
    return g;
}

}  // namespace

int LatticeGraph::intra_degree(QubitId q) const {
    int d = 0;
    for (const auto& [a, b] : intra_bonds[qubit_site[q]])
        d += (a == q) + (b == q);
    return d;
}

int LatticeGraph::total_intra_bonds() const {
    int n = 0;
    for (const auto& v : intra_bonds) n += static_cast<int>(v.size());
    return n;
}

LatticeGraph build_square(std::uint32_t rows, std::uint32_t cols, Boundary boundary) {
    if (rows < 1 || cols < 1) throw LatticeError("square lattice requires rows, cols >= 1");
    const bool per = boundary == Boundary::periodic;
    if (per && (rows < 2 || cols < 2))
        throw LatticeError("periodic square lattice requires rows, cols >= 2");

    enum { N = 0, E = 1, S = 2, W = 3 };  // cycle order N-E-S-W
    PortGraph pg{Family::square_cavo, boundary, rows * cols, {}, {}};
    pg.ports.resize(pg.n_sites);
    auto sid = [&](std::uint32_t r, std::uint32_t c) { return (r % rows) * cols + (c % cols); };

    for (std::uint32_t r = 0; r < rows; ++r)
        for (std::uint32_t c = 0; c < cols; ++c) {
            auto& p = pg.ports[sid(r, c)];
            if (per || r > 0) p.push_back(N);
            if (per || c + 1 < cols) p.push_back(E);
            if (per || r + 1 < rows) p.push_back(S);
            if (per || c > 0) p.push_back(W);
        }
    for (std::uint32_t r = 0; r < rows; ++r)
        for (std::uint32_t c = 0; c < cols; ++c) {
            if (per || c + 1 < cols)
                pg.bonds.push_back({{sid(r, c), E}, {sid(r, c + 1), W}});
            if (per || r + 1 < rows)
                pg.bonds.push_back({{sid(r, c), S}, {sid(r + 1, c), N}});
        }
    return finish(pg);
}

LatticeGraph build_hex(std::uint32_t cells_a, std::uint32_t cells_b, Boundary boundary) {
    if (cells_a < 1 || cells_b < 1) throw LatticeError("hex lattice requires cells >= 1");
    const bool per = boundary == Boundary::periodic;
    if (per && (cells_a < 2 || cells_b < 2))
        throw LatticeError("periodic hex lattice requires >= 2 cells in each direction");

    // Two sites per cell; the B site of cell (a,b) bonds to A(a,b), A(a+1,b)
    // and A(a,b+1) through matching ports 0,1,2.
    PortGraph pg{Family::hex_star, boundary, 2 * cells_a * cells_b, {}, {}};
    pg.ports.resize(pg.n_sites);
    auto aid = [&](std::uint32_t a, std::uint32_t b) {
        return 2 * ((a % cells_a) * cells_b + (b % cells_b));
    };
    std::vector<std::vector<int>> present(pg.n_sites);
    for (std::uint32_t a = 0; a < cells_a; ++a)
        for (std::uint32_t b = 0; b < cells_b; ++b) {
            const SiteId bs = aid(a, b) + 1;
            struct Cand { int port; SiteId target; bool ok; };
            const Cand cand[3] = {{0, static_cast<SiteId>(aid(a, b)), true},
                                  {1, static_cast<SiteId>(aid(a + 1, b)), per || a + 1 < cells_a},
                                  {2, static_cast<SiteId>(aid(a, b + 1)), per || b + 1 < cells_b}};
            for (const auto& cd : cand)
                if (cd.ok) {
                    pg.bonds.push_back({{bs, cd.port}, {cd.target, cd.port}});
                    present[bs].push_back(cd.port);
                    present[cd.target].push_back(cd.port);
                }
        }
    for (SiteId s = 0; s < pg.n_sites; ++s) {
        std::sort(present[s].begin(), present[s].end());
        pg.ports[s] = present[s];
    }
    return finish(pg);
}

LatticeGraph build_ring(std::uint32_t n_sites, Boundary boundary) {
    const bool per = boundary == Boundary::periodic;
    if (per && n_sites < 3) throw LatticeError("periodic ring requires >= 3 sites");
    if (!per && n_sites < 2) throw LatticeError("open line requires >= 2 sites");

    enum { L = 0, R = 1 };
    PortGraph pg{per ? Family::ring : Family::line, boundary, n_sites, {}, {}};
    pg.ports.resize(n_sites);
    for (std::uint32_t s = 0; s < n_sites; ++s) {
        if (per || s > 0) pg.ports[s].push_back(L);
        if (per || s + 1 < n_sites) pg.ports[s].push_back(R);
    }
    for (std::uint32_t s = 0; s < n_sites; ++s)
        if (per || s + 1 < n_sites)
            pg.bonds.push_back({{s, R}, {(s + 1) % n_sites, L}});
    return finish(pg);
}

LatticeGraph build_cubic(std::uint32_t nx, std::uint32_t ny, std::uint32_t nz, Boundary boundary) {
    if (nx < 1 || ny < 1 || nz < 1) throw LatticeError("cubic lattice requires sizes >= 1");
    const bool per = boundary == Boundary::periodic;
    if (per && (nx < 2 || ny < 2 || nz < 2))
        throw LatticeError("periodic cubic lattice requires sizes >= 2");

    // 6 ports per interior site; the intra cycle is the 6-cycle in port order.
    enum { XP = 0, YP = 1, ZP = 2, XM = 3, YM = 4, ZM = 5 };
    PortGraph pg{Family::cubic, boundary, nx * ny * nz, {}, {}};
    pg.ports.resize(pg.n_sites);
    auto sid = [&](std::uint32_t x, std::uint32_t y, std::uint32_t z) {
        return ((x % nx) * ny + (y % ny)) * nz + (z % nz);
    };
    for (std::uint32_t x = 0; x < nx; ++x)
        for (std::uint32_t y = 0; y < ny; ++y)
            for (std::uint32_t z = 0; z < nz; ++z) {
                auto& p = pg.ports[sid(x, y, z)];
                if (per || x + 1 < nx) p.push_back(XP);
                if (per || y + 1 < ny) p.push_back(YP);
                if (per || z + 1 < nz) p.push_back(ZP);
                if (per || x > 0) p.push_back(XM);
                if (per || y > 0) p.push_back(YM);
                if (per || z > 0) p.push_back(ZM);
            }
    for (std::uint32_t x = 0; x < nx; ++x)
        for (std::uint32_t y = 0; y < ny; ++y)
            for (std::uint32_t z = 0; z < nz; ++z) {
                if (per || x + 1 < nx) pg.bonds.push_back({{sid(x, y, z), XP}, {sid(x + 1, y, z), XM}});
                if (per || y + 1 < ny) pg.bonds.push_back({{sid(x, y, z), YP}, {sid(x, y + 1, z), YM}});
                if (per || z + 1 < nz) pg.bonds.push_back({{sid(x, y, z), ZP}, {sid(x, y, z + 1), ZM}});
            }
    return finish(pg);
}

ValidationReport validate(const LatticeGraph& g) {
    ValidationReport rep;
    auto fail = [&](const std::string& msg) {
        rep.ok = false;
        rep.failures.push_back(msg);
    };

    // contiguous qubit ids, each owned by one site
    std::vector<int> owner(g.n_qubits, -1);
    for (SiteId s = 0; s < g.n_sites; ++s)
        for (QubitId q : g.site_qubits[s]) {
            if (q >= g.n_qubits) { fail("qubit id out of range"); continue; }
            if (owner[q] != -1) fail("qubit " + std::to_string(q) + " owned by two sites");
            owner[q] = static_cast<int>(s);
        }
    for (QubitId q = 0; q < g.n_qubits; ++q)
        if (owner[q] == -1) fail("qubit " + std::to_string(q) + " unowned");

    // PEPS rule: per-site qubit count == inter-bond degree; each qubit on
    // exactly one inter bond
    std::vector<int> qubit_bonds(g.n_qubits, 0);
    std::vector<int> site_degree(g.n_sites, 0);
    for (const auto& b : g.inter_bonds) {
        ++qubit_bonds[b.a.qubit];
        ++qubit_bonds[b.b.qubit];
        ++site_degree[b.a.site];
        ++site_degree[b.b.site];
        if (b.a.site == b.b.site) fail("self-bond at site " + std::to_string(b.a.site));
        if (b.a.site > b.b.site) fail("inter bond endpoints not ordered by site id");
    }
    for (SiteId s = 0; s < g.n_sites; ++s)
        if (site_degree[s] != static_cast<int>(g.site_qubits[s].size()))
            fail("site " + std::to_string(s) + " breaks the PEPS rule (qubits != bond degree)");
    for (QubitId q = 0; q < g.n_qubits; ++q)
        if (qubit_bonds[q] != 1)
            fail("qubit " + std::to_string(q) + " touches " + std::to_string(qubit_bonds[q]) +
                 " inter bonds");

    // intra bonds: single cycle for >=3 qubits, one edge for 2, none for 1
    for (SiteId s = 0; s < g.n_sites; ++s) {
        const auto k = g.site_qubits[s].size();
        const auto& ib = g.intra_bonds[s];
        const std::size_t expect = k >= 3 ? k : (k == 2 ? 1 : 0);
        if (ib.size() != expect) {
            fail("site " + std::to_string(s) + " intra bond count");
            continue;
        }
        if (k >= 3) {
            std::vector<int> deg(g.n_qubits, 0);
            for (const auto& [a, b] : ib) { ++deg[a]; ++deg[b]; }
            for (QubitId q : g.site_qubits[s])
                if (deg[q] != 2) fail("site " + std::to_string(s) + " intra bonds not a cycle");
        }
    }

    // doubled site pairs are legal but flagged (they change small-lattice
    // effective Hamiltonians)
    std::map<std::pair<SiteId, SiteId>, int> mult;
    for (const auto& b : g.inter_bonds) ++mult[{b.a.site, b.b.site}];
    for (const auto& [pair, m] : mult)
        if (m >= 2) rep.doubled_bonds.push_back(pair);

    return rep;
}

std::string to_string(Family f) {
    switch (f) {
        case Family::square_cavo: return "square_cavo";
        case Family::hex_star: return "hex_star";
        case Family::ring: return "ring";
        case Family::line: return "line";
        case Family::cubic: return "cubic";
    }
    return "?";
}

std::string to_string(Boundary b) {
    return b == Boundary::periodic ? "periodic" : "open";
}

Family family_from_string(const std::string& s) {
    if (s == "square_cavo" || s == "square") return Family::square_cavo;
    if (s == "hex_star" || s == "hex") return Family::hex_star;
    if (s == "ring") return Family::ring;
    if (s == "line") return Family::line;
    if (s == "cubic") return Family::cubic;
    throw LatticeError("unknown lattice family: " + s);
}

Boundary boundary_from_string(const std::string& s) {
    if (s == "periodic") return Boundary::periodic;
    if (s == "open") return Boundary::open;
    throw LatticeError("unknown boundary: " + s);
}

std::string graph_to_json(const LatticeGraph& g) {
    nlohmann::json j;
    j["family"] = to_string(g.family);
    j["boundary"] = to_string(g.boundary);
    j["n_sites"] = g.n_sites;
    j["site_qubits"] = g.site_qubits;
    auto& intra = j["intra_bonds"] = nlohmann::json::array();
    for (const auto& site : g.intra_bonds) {
        nlohmann::json v = nlohmann::json::array();
        for (const auto& [a, b] : site) v.push_back({a, b});
        intra.push_back(v);
    }
    auto& inter = j["inter_bonds"] = nlohmann::json::array();
    for (const auto& b : g.inter_bonds)
        inter.push_back({{b.a.site, b.a.qubit}, {b.b.site, b.b.qubit}});
    return j.dump(2);
}

LatticeGraph graph_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    LatticeGraph g;
    g.family = family_from_string(j.at("family").get<std::string>());
    g.boundary = boundary_from_string(j.at("boundary").get<std::string>());
    g.n_sites = j.at("n_sites").get<std::uint32_t>();
    g.site_qubits = j.at("site_qubits").get<std::vector<std::vector<QubitId>>>();
    g.intra_bonds.resize(g.n_sites);
    const auto& intra = j.at("intra_bonds");
    for (std::uint32_t s = 0; s < g.n_sites; ++s)
        for (const auto& e : intra.at(s))
            g.intra_bonds[s].push_back({e.at(0).get<QubitId>(), e.at(1).get<QubitId>()});
    for (const auto& e : j.at("inter_bonds")) {
        InterBond b{{e.at(0).at(0).get<SiteId>(), e.at(0).at(1).get<QubitId>()},
                    {e.at(1).at(0).get<SiteId>(), e.at(1).at(1).get<QubitId>()}};
        g.inter_bonds.push_back(b);
    }

    g.site_adjacency.resize(g.n_sites);
    for (const auto& b : g.inter_bonds) {
        g.site_adjacency[b.a.site].push_back(b.b.site);
        g.site_adjacency[b.b.site].push_back(b.a.site);
    }
    for (auto& adj : g.site_adjacency) std::sort(adj.begin(), adj.end());
    g.n_qubits = 0;
    for (const auto& qs : g.site_qubits) g.n_qubits += static_cast<std::uint32_t>(qs.size());
    g.site_mask.resize(g.n_sites, 0);
    g.qubit_site.assign(g.n_qubits, 0);
    for (SiteId s = 0; s < g.n_sites; ++s)
        for (QubitId q : g.site_qubits[s]) {
            g.site_mask[s] |= std::uint64_t(1) << q;
            g.qubit_site[q] = s;
        }
    return g;
}

}  // namespace clusterham
