#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "wgqed/lattice.hpp"

namespace wgqed::test {

inline SystemParams zigzag_params()
{
    SystemParams p;
    p.j1 = 0.2;
    p.j2 = 1.6;
    p.guided_kernel = GuidedKernel::Dissipative;
    return p;
}

inline SystemParams orthogonal_params()
{
    SystemParams p;
    p.j1 = 3.0;
    p.j2 = 6.0;
    return p;
}

inline LatticeSpec single_atom(const SystemParams& p)
{
    LatticeSpec s;
    s.geometry = Geometry::Conventional;
    s.params = p;
    s.m_cells = 1;
    s.n_per_cell = 1;
    s.sites.push_back({0, 0, 0, 0, 0.0, p.gamma_1d});
    return s;
}

inline double rel_err(std::complex<double> a, std::complex<double> b)
{
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

// Random but valid spec for property sweeps. Geometries that are not
// cos-symmetric (zigzag with the full kernel) are avoided unless allowed.
inline LatticeSpec random_spec(std::mt19937_64& rng, int max_cells = 4, bool any_kernel = false)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    SystemParams p;
    p.gamma_1d = 0.2 + 1.8 * u(rng);
    p.gamma_e = 0.3 * u(rng);
    p.omega_c = 3.0 * u(rng);
    p.delta_c = 0.0;
    p.j1 = 4.0 * u(rng) - 2.0;
    p.j2 = 6.0 * u(rng) - 3.0;
    p.k0d = 0.1 + (2 * std::numbers::pi - 0.2) * u(rng);
    p.a_over_d = 0.2 + 0.8 * u(rng);
    const int g = static_cast<int>(u(rng) * 3) % 3;
    const int m = 1 + static_cast<int>(u(rng) * max_cells) % max_cells;
    p.guided_kernel = u(rng) < 0.5 ? GuidedKernel::Full : GuidedKernel::Dissipative;
    if (g == 0) return build_conventional(p);
    if (g == 1) {
        if (!any_kernel) p.guided_kernel = GuidedKernel::Dissipative;
        return build_zigzag(m, p);
    }
    return build_orthogonal(m, 1 + static_cast<int>(u(rng) * 3) % 3, p);
}

}  // namespace wgqed::test
