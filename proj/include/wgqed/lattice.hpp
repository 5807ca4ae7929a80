#pragma once

// Atom-site tables and coherent-coupling graphs for the three lattice
// geometries: the two-atom conventional chain, the Zigzag lattice (two atoms
// per cell, one of them decoupled from the guide) and the Orthogonal lattice
// (N atoms stacked above each cell, only the lowest one coupled).
//
// All rates and couplings are in units of the reference linewidth Gamma,
// positions in units of the lattice pitch d.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wgqed {

enum class Geometry { Conventional, Zigzag, Orthogonal };

// Which part of the waveguide-mediated interaction enters H1.
//   Full:        -(i/2) sqrt(G_u G_v) exp(i k0 |z_u - z_v|)
//   Dissipative: -(i/2) sqrt(G_u G_v) cos(k0 |z_u - z_v|)   (no guided exchange)
enum class GuidedKernel { Full, Dissipative };

inline std::string_view to_string(Geometry g)
{
    switch (g) {
    case Geometry::Conventional: return "conventional";
    case Geometry::Zigzag: return "zigzag";
    case Geometry::Orthogonal: return "orthogonal";
    }
    return "unknown";
}

inline std::string_view to_string(GuidedKernel k)
{
    return k == GuidedKernel::Full ? "full" : "dissipative";
}

inline Geometry parse_geometry(std::string_view s)
{
    if (s == "conventional") return Geometry::Conventional;
    if (s == "zigzag") return Geometry::Zigzag;
    if (s == "orthogonal") return Geometry::Orthogonal;
    throw std::invalid_argument("unknown geometry '" + std::string(s) + "'");
}

inline GuidedKernel parse_guided_kernel(std::string_view s)
{
    if (s == "full") return GuidedKernel::Full;
    if (s == "dissipative") return GuidedKernel::Dissipative;
    throw std::invalid_argument("unknown guided kernel '" + std::string(s) + "'");
}

struct SystemParams {
    double gamma_1d = 1.0;  ///< decay into the guided mode
    double gamma_e = 0.1;   ///< decay of |e> into free space
    double omega_c = 2.0;   ///< control Rabi frequency
    double delta_c = 0.0;   ///< control detuning
    double j1 = 0.0;        ///< intra-cell exchange
    double j2 = 0.0;        ///< inter-cell (intra-cluster) exchange
    double k0d = std::numbers::pi / 2;  ///< guided phase per pitch
    double a_over_d = 1.0;  ///< intra-cell spacing ratio
    GuidedKernel guided_kernel = GuidedKernel::Full;
};

/// Throws std::invalid_argument naming the offending field.
inline void validate(const SystemParams& p)
{
    auto finite = [](double v, const char* name) {
        if (!std::isfinite(v))
            throw std::invalid_argument(std::string(name) + ": must be finite");
    };
    finite(p.gamma_1d, "gamma_1d");
    finite(p.gamma_e, "gamma_e");
    finite(p.omega_c, "omega_c");
    finite(p.delta_c, "delta_c");
    finite(p.j1, "j1");
    finite(p.j2, "j2");
    finite(p.k0d, "k0d");
    finite(p.a_over_d, "a_over_d");
    if (p.gamma_1d < 0) throw std::invalid_argument("gamma_1d: must be >= 0");
    if (p.gamma_e < 0) throw std::invalid_argument("gamma_e: must be >= 0");
    if (p.omega_c < 0) throw std::invalid_argument("omega_c: must be >= 0");
    if (!(p.k0d > 0 && p.k0d < 2 * std::numbers::pi))
        throw std::invalid_argument("k0d: must lie in (0, 2*pi)");
}

struct AtomSite {
    int site_id = 0;
    int cell_index = 0;
    int cluster_index = 0;
    int intra_cell_index = 0;
    double z_position = 0.0;
    double decay_rate = 0.0;  ///< exactly 0 or gamma_1d
};

struct Edge {
    int u = 0;
    int v = 0;
    double strength = 0.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

// Both orientations of every bond are stored.
struct CouplingGraph {
    std::vector<Edge> edges;
    bool symmetric = true;

    void add_bond(int u, int v, double strength)
    {
        edges.push_back({u, v, strength});
        edges.push_back({v, u, strength});
    }

    std::size_t bond_count() const { return edges.size() / 2; }
};

struct LatticeSpec {
    Geometry geometry = Geometry::Conventional;
    std::vector<AtomSite> sites;
    CouplingGraph graph;
    SystemParams params;
    int m_cells = 0;
    int n_per_cell = 0;

    std::size_t atom_count() const { return sites.size(); }

    std::size_t coupled_count() const
    {
        std::size_t n = 0;
        for (const auto& s : sites)
            if (s.decay_rate > 0) ++n;
        return n;
    }

    double total_decay() const
    {
        double sum = 0;
        for (const auto& s : sites) sum += s.decay_rate;
        return sum;
    }
};

inline LatticeSpec build_conventional(const SystemParams& params)
{
    validate(params);
    LatticeSpec spec;
    spec.geometry = Geometry::Conventional;
    spec.params = params;
    spec.m_cells = 2;
    spec.n_per_cell = 1;
    for (int i = 0; i < 2; ++i)
        spec.sites.push_back({i, i, 0, 0, static_cast<double>(i), params.gamma_1d});
    return spec;
}

// Cells are paired into clusters (0,1), (2,3), ...; with an odd cell count
// the last cell has no J2 partner.
inline LatticeSpec build_zigzag(int m_cells, const SystemParams& params)
{
    if (m_cells < 1) throw std::invalid_argument("m_cells: must be >= 1");
    validate(params);
    LatticeSpec spec;
    spec.geometry = Geometry::Zigzag;
    spec.params = params;
    spec.m_cells = m_cells;
    spec.n_per_cell = 2;
    for (int c = 0; c < m_cells; ++c) {
        const double z = c;
        spec.sites.push_back({2 * c, c, c / 2, 0, z, params.gamma_1d});
        spec.sites.push_back({2 * c + 1, c, c / 2, 1, z + params.a_over_d, 0.0});
    }
    for (int c = 0; c < m_cells; ++c) spec.graph.add_bond(2 * c, 2 * c + 1, params.j1);
    for (int c = 0; c + 1 < m_cells; c += 2)
        spec.graph.add_bond(2 * c + 1, 2 * (c + 1), params.j2);
    return spec;
}

inline LatticeSpec build_orthogonal(int m_cells, int n_per_cell, const SystemParams& params)
{
    if (m_cells < 1) throw std::invalid_argument("m_cells: must be >= 1");
    if (n_per_cell < 1) throw std::invalid_argument("n_per_cell: must be >= 1");
    validate(params);
    LatticeSpec spec;
    spec.geometry = Geometry::Orthogonal;
    spec.params = params;
    spec.m_cells = m_cells;
    spec.n_per_cell = n_per_cell;
    for (int c = 0; c < m_cells; ++c) {
        for (int i = 0; i < n_per_cell; ++i) {
            spec.sites.push_back({c * n_per_cell + i, c, c / 2, i, static_cast<double>(c),
                                  i == 0 ? params.gamma_1d : 0.0});
        }
        for (int i = 0; i + 1 < n_per_cell; ++i)
            spec.graph.add_bond(c * n_per_cell + i, c * n_per_cell + i + 1, params.j1);
    }
    for (int c = 0; c + 1 < m_cells; c += 2)
        spec.graph.add_bond(c * n_per_cell, (c + 1) * n_per_cell, params.j2);
    return spec;
}

inline LatticeSpec build_lattice(Geometry g, int m_cells, int n_per_cell, const SystemParams& p)
{
    switch (g) {
    case Geometry::Conventional: return build_conventional(p);
    case Geometry::Zigzag: return build_zigzag(m_cells, p);
    case Geometry::Orthogonal: return build_orthogonal(m_cells, n_per_cell, p);
    }
    throw std::invalid_argument("unknown geometry");
}

}  // namespace wgqed
