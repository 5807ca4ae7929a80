#pragma once

// Single-excitation resolvent, one-photon transmission and linear
// susceptibility.
//
//   G0(w) = (w - H1)^-1
//   t(w)  = 1 - (i/2) sum_ij sqrt(G_i G_j) [G0(w)]^ee_ij exp(-i k0 (z_i - z_j))
//   chi(w) = (sum_ij sqrt(G_i G_j) [G0(w)]^ee_ij exp(-i k0 (z_i - z_j))) / sum_i G_i
//
// so that t = 1 - (i/2) (sum_i G_i) chi.

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wgqed/hamiltonian.hpp"
#include "wgqed/lattice.hpp"
#include "wgqed/parallel.hpp"

namespace wgqed {

/// Reciprocal condition number below which a resolvent solve is flagged.
inline constexpr double kIllConditionedRcond = 1e-12;

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Diagnostic {
    double detuning = 0.0;
    double rcond = 0.0;
    bool singular = false;
};

/// Evenly spaced grid over [lo, hi]. Points are generated from the centre so
/// that a range symmetric about zero yields an exactly antisymmetric grid.
inline std::vector<double> linspace(double lo, double hi, int points)
{
    if (points < 1) throw std::invalid_argument("grid points: must be >= 1");
    if (points == 1) return {0.5 * (lo + hi)};
    if (!(hi > lo)) throw std::invalid_argument("grid: max must exceed min");
    const double centre = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    std::vector<double> out(points);
    for (int i = 0; i < points; ++i)
        out[i] = centre + half * static_cast<double>(2 * i - (points - 1)) / (points - 1);
    return out;
}

inline void require_increasing(std::span<const double> grid)
{
    if (grid.empty()) throw std::invalid_argument("grid: must not be empty");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw std::invalid_argument("grid: must be strictly increasing");
}

struct Resolvent {
    Eigen::MatrixXcd matrix;
    double rcond = 0.0;

    bool ill_conditioned() const { return rcond < kIllConditionedRcond; }
};

namespace detail {

inline Eigen::PartialPivLU<Eigen::MatrixXcd> factor_shifted(const EffectiveHamiltonian& h1, cplx w)
{
    Eigen::MatrixXcd a = -h1.matrix;
    a.diagonal().array() += w;
    return Eigen::PartialPivLU<Eigen::MatrixXcd>(a);
}

inline bool all_finite(const Eigen::MatrixXcd& m)
{
    return m.allFinite();
}

}  // namespace detail

/// Full resolvent (delta_omega*I - H1)^-1. Throws NumericalError when the
/// shifted matrix is numerically singular; ill-conditioning is reported via
/// Resolvent::rcond.
inline Resolvent green_single(const EffectiveHamiltonian& h1, double delta_omega)
{
    auto lu = detail::factor_shifted(h1, delta_omega);
    Resolvent r;
    r.rcond = lu.rcond();
    r.matrix = lu.inverse();
    if (!(r.rcond > 0.0) || !detail::all_finite(r.matrix))
        throw NumericalError("resolvent singular at delta_omega = " + std::to_string(delta_omega));
    return r;
}

/// Probe in-coupling vector: sqrt(G_j/2) exp(i k0 z_j) on |e_j>, zero on |s_j>.
inline Eigen::VectorXcd input_coupling(const LatticeSpec& spec)
{
    const auto n = static_cast<Eigen::Index>(spec.atom_count());
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(2 * n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto& s = spec.sites[j];
        v(j) = std::sqrt(s.decay_rate / 2.0) * std::polar(1.0, spec.params.k0d * s.z_position);
    }
    return v;
}

/// The part of the single-excitation space the probe can reach. With
/// omega_c = 0 the s-states decouple exactly and are dropped, so a real
/// s-level pole at delta_omega = delta_c does not make the solve singular.
struct ActiveSpace {
    EffectiveHamiltonian h;
    Eigen::VectorXcd v_in;
};

inline ActiveSpace active_space(const LatticeSpec& spec, const EffectiveHamiltonian& h1,
                                const Eigen::VectorXcd& v_in)
{
    if (spec.params.omega_c != 0.0) return {h1, v_in};
    const Eigen::Index n = h1.n_atoms;
    return {EffectiveHamiltonian{h1.matrix.topLeftCorner(n, n), n}, v_in.head(n)};
}

struct ResponsePoint {
    cplx amplitude;
    cplx chi;
    double rcond = 0.0;
};

namespace detail {

inline ResponsePoint response_active(const ActiveSpace& a, double total_decay, double delta_omega)
{
    auto lu = factor_shifted(a.h, delta_omega);
    const double rcond = lu.rcond();
    const Eigen::VectorXcd g = lu.solve(a.v_in);
    if (!(rcond > 0.0) || !g.allFinite())
        throw NumericalError("resolvent singular at delta_omega = " + std::to_string(delta_omega));
    // v_out^dagger G0 v_in with v_out = v_in
    const cplx s = a.v_in.dot(g);
    ResponsePoint p;
    p.amplitude = 1.0 - cplx(0, 1) * s;
    p.chi = total_decay > 0 ? 2.0 * s / total_decay : cplx{};
    p.rcond = rcond;
    return p;
}

}  // namespace detail

inline ResponsePoint response_at(const LatticeSpec& spec, const EffectiveHamiltonian& h1,
                                 const Eigen::VectorXcd& v_in, double delta_omega)
{
    return detail::response_active(active_space(spec, h1, v_in), spec.total_decay(), delta_omega);
}

inline cplx transmission_amplitude(const LatticeSpec& spec, const EffectiveHamiltonian& h1,
                                   double delta_omega)
{
    return response_at(spec, h1, input_coupling(spec), delta_omega).amplitude;
}

inline cplx susceptibility(const LatticeSpec& spec, const EffectiveHamiltonian& h1,
                           double delta_omega)
{
    return response_at(spec, h1, input_coupling(spec), delta_omega).chi;
}

struct SpectrumSeries {
    std::vector<double> detunings;
    std::vector<cplx> amplitude;
    std::vector<double> transmission;
    std::vector<cplx> chi;
    std::vector<Diagnostic> diagnostics;  ///< ill-conditioned or singular points only

    std::size_t size() const { return detunings.size(); }
    bool has_singular() const
    {
        for (const auto& d : diagnostics)
            if (d.singular) return true;
        return false;
    }
};

/// Evaluates every grid point independently; singular points are recorded as
/// diagnostics with NaN outputs instead of aborting the sweep.
inline SpectrumSeries sweep(const LatticeSpec& spec, std::span<const double> grid,
                            unsigned threads = 1)
{
    require_increasing(grid);
    const auto active = active_space(spec, build_h1(spec), input_coupling(spec));
    const double total = spec.total_decay();
    const std::size_t n = grid.size();

    SpectrumSeries out;
    out.detunings.assign(grid.begin(), grid.end());
    out.amplitude.resize(n);
    out.transmission.resize(n);
    out.chi.resize(n);
    std::vector<double> rcond(n, 0.0);
    std::vector<char> singular(n, 0);

    parallel_for(n, threads, [&](std::size_t i) {
        try {
            const auto p = detail::response_active(active, total, grid[i]);
            out.amplitude[i] = p.amplitude;
            out.transmission[i] = std::norm(p.amplitude);
            out.chi[i] = p.chi;
            rcond[i] = p.rcond;
        } catch (const NumericalError&) {
            const double nan = std::nan("");
            out.amplitude[i] = {nan, nan};
            out.transmission[i] = nan;
            out.chi[i] = {nan, nan};
            singular[i] = 1;
        }
    });

    for (std::size_t i = 0; i < n; ++i) {
        if (singular[i] || rcond[i] < kIllConditionedRcond)
            out.diagnostics.push_back({grid[i], rcond[i], singular[i] != 0});
    }
    return out;
}

}  // namespace wgqed
