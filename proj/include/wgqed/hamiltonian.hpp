#pragma once

// Effective non-Hermitian single-excitation Hamiltonian H1 and the collective
// dissipation matrix.
//
// Basis ordering: index i (0 <= i < N) is |e_i>, index N + i is |s_i>, with
// i the site_id. The probe detuning is not part of H1; it enters only through
// the resolvent (delta_omega - H1)^-1.

#include <complex>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include <Eigen/Dense>

#include "wgqed/lattice.hpp"

namespace wgqed {

using cplx = std::complex<double>;

struct EffectiveHamiltonian {
    Eigen::MatrixXcd matrix;
    Eigen::Index n_atoms = 0;

    Eigen::Index dim() const { return matrix.rows(); }
    Eigen::Index e_index(Eigen::Index site) const { return site; }
    Eigen::Index s_index(Eigen::Index site) const { return n_atoms + site; }
    Eigen::Index atom_of(Eigen::Index basis) const { return basis % n_atoms; }

    static constexpr std::string_view basis_order = "e_0..e_{N-1}, s_0..s_{N-1}";
    static constexpr std::string_view detuning_convention =
        "probe detuning excluded; resolvent is (delta_omega*I - H1)^-1";
};

struct DissipationMatrix {
    Eigen::MatrixXd matrix;
};

/// Guided-mode phase factor between two sites for the chosen kernel.
inline cplx guided_phase(const SystemParams& p, double dz)
{
    const double phase = p.k0d * std::abs(dz);
    if (p.guided_kernel == GuidedKernel::Dissipative) return {std::cos(phase), 0.0};
    return std::polar(1.0, phase);
}

inline DissipationMatrix dissipation_matrix(const LatticeSpec& spec)
{
    const auto n = static_cast<Eigen::Index>(spec.atom_count());
    DissipationMatrix d{Eigen::MatrixXd::Zero(n, n)};
    for (Eigen::Index u = 0; u < n; ++u) {
        for (Eigen::Index v = 0; v < n; ++v) {
            const auto& a = spec.sites[u];
            const auto& b = spec.sites[v];
            d.matrix(u, v) = std::sqrt(a.decay_rate * b.decay_rate)
                             * std::cos(spec.params.k0d * std::abs(a.z_position - b.z_position));
        }
    }
    return d;
}

inline EffectiveHamiltonian build_h1(const LatticeSpec& spec)
{
    const auto& p = spec.params;
    const auto n = static_cast<Eigen::Index>(spec.atom_count());
    EffectiveHamiltonian h{Eigen::MatrixXcd::Zero(2 * n, 2 * n), n};
    const cplx I(0.0, 1.0);

    for (Eigen::Index u = 0; u < n; ++u) {
        h.matrix(u, u) += -I * p.gamma_e / 2.0;
        h.matrix(n + u, n + u) = p.delta_c;
        h.matrix(u, n + u) = p.omega_c;
        h.matrix(n + u, u) = p.omega_c;
        for (Eigen::Index v = 0; v < n; ++v) {
            const auto& a = spec.sites[u];
            const auto& b = spec.sites[v];
            const double g = std::sqrt(a.decay_rate * b.decay_rate);
            if (g == 0.0) continue;
            h.matrix(u, v) += -I / 2.0 * g * guided_phase(p, a.z_position - b.z_position);
        }
    }
    for (const auto& e : spec.graph.edges) {
        if (e.u == e.v) throw std::invalid_argument("coupling graph: self-edge");
        h.matrix(e.u, e.v) += -e.strength;
    }
    return h;
}

/// Debug dump: one "row,col,re,im" line per nonzero entry.
inline void write_csv(std::ostream& os, const EffectiveHamiltonian& h)
{
    os << "row,col,re,im\n";
    char buf[128];
    for (Eigen::Index r = 0; r < h.dim(); ++r) {
        for (Eigen::Index c = 0; c < h.dim(); ++c) {
            const cplx z = h.matrix(r, c);
            if (z == cplx{}) continue;
            std::snprintf(buf, sizeof buf, "%td,%td,%.17g,%.17g\n", r, c, z.real(), z.imag());
            os << buf;
        }
    }
}

}  // namespace wgqed
