#include "clusterham/hamiltonian.hpp"

#include <queue>

namespace clusterham {

namespace {

// Greedy BFS 2-coloring of the site graph; empty on failure (odd cycle).
std::vector<int> bipartition(const LatticeGraph& g) {
    std::vector<int> color(g.n_sites, -1);
    for (SiteId root = 0; root < g.n_sites; ++root) {
        if (color[root] != -1) continue;
        color[root] = 0;
        std::queue<SiteId> q;
        q.push(root);
        while (!q.empty()) {
            const SiteId s = q.front();
            q.pop();
            for (SiteId t : g.site_adjacency[s]) {
                if (color[t] == -1) {
                    color[t] = 1 - color[s];
                    q.push(t);
                } else if (color[t] == color[s]) {
                    return {};
                }
            }
        }
    }
    return color;
}

OperatorSum site_ising(const LatticeGraph& g, const std::vector<int>* xx_sites) {
    OperatorSum h;
    h.n_qubits = g.n_qubits;
    for (SiteId s = 0; s < g.n_sites; ++s) {
        const bool xx = xx_sites && (*xx_sites)[s] == 1;
        for (const auto& [a, b] : g.intra_bonds[s]) {
            const Bits m = (Bits(1) << a) | (Bits(1) << b);
            if (xx)
                h.add(m, 0, -1.0);
            else
                h.add(0, m, -1.0);
        }
    }
    return h;
}

}  // namespace

OperatorSum build_site_hamiltonian(const LatticeGraph& graph) {
    return site_ising(graph, nullptr);
}

OperatorSum build_bond_hamiltonian(const LatticeGraph& graph, BondType bond_type) {
    OperatorSum v;
    v.n_qubits = graph.n_qubits;
    for (const auto& bond : graph.inter_bonds) {
        const Bits qi = Bits(1) << bond.a.qubit;
        const Bits qj = Bits(1) << bond.b.qubit;
        if (bond_type == BondType::zx_xz) {
            v.add(qj, qi, -1.0);  // sz_i sx_j
            v.add(qi, qj, -1.0);  // sx_i sz_j
        } else {
            v.add(qi | qj, 0, 1.0);        // XX
            v.add(qi | qj, qi | qj, -1.0); // YY = -(ZX)(ZX)
            v.add(0, qi | qj, 1.0);        // ZZ
        }
    }
    return v;
}

OperatorSum build_total(const LatticeGraph& graph, const CouplingParams& params) {
    if (params.g <= 0.0) throw InvalidArgument("coupling g must be positive");
    OperatorSum site;
    if (params.bond_type == BondType::heisenberg) {
        const auto color = bipartition(graph);
        if (color.empty())
            throw InvalidArgument("heisenberg variant needs a bipartite site graph "
                                  "(alternating ZZ/XX Ising types)");
        site = site_ising(graph, &color);
    } else {
        site = site_ising(graph, nullptr);
    }
    OperatorSum h = scaled(site, params.g);
    h += scaled(build_bond_hamiltonian(graph, params.bond_type), params.lambda);
    return h;
}

}  // namespace clusterham
