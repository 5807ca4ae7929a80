#pragma once

// Two-photon inelastic scattering in the hard-core limit.
//
// The two-excitation space is the ordered product of two single-excitation
// spaces, index (a, b) -> a * dim1 + b, with H2 = H1 (x) I + I (x) H1. The
// forbidden subspace D holds every pair whose two excitations sit on the same
// atom (all four internal-state combinations). Letting the on-site repulsion
// U P_D go to infinity gives the T-matrix
//
//     T(E) = -[P_D (E - H2)^-1 P_D]^-1      (restricted to D),
//
// and the connected part of the two-photon S-matrix for inputs (k1, k2) and
// outputs (p1, p2 = k1 + k2 - p1) is
//
//     A = sum_{d, d' in D} r(p1)_a r(p2)_b  T_{d d'}  g(k1)_c g(k2)_d
//
// with g(k) = G0(k) v_in and r(p) = v_in^dagger G0(p). Reported intensity is
// |A|^2 in units of 1/Gamma^2.
//
// (E - H2)^-1 is never formed: H1 = U R U^dagger (complex Schur) turns
// (E - H2) vec(X) = vec(Y) into the triangular Sylvester equation
// E Z - R Z - Z R^T = U^dagger Y conj(U), X = U Z U^T.

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "wgqed/hamiltonian.hpp"
#include "wgqed/lattice.hpp"
#include "wgqed/linear_response.hpp"
#include "wgqed/parallel.hpp"

namespace wgqed {

/// Largest single-excitation dimension accepted by build_h2.
inline constexpr Eigen::Index kMaxSingleExcitationDim = 160;
/// Largest single-excitation dimension for which dense() materializes H2.
inline constexpr Eigen::Index kMaxDenseSingleDim = 32;

class TwoExcitationOperator {
public:
    explicit TwoExcitationOperator(EffectiveHamiltonian h1)
        : h1_(std::move(h1))
    {
        const Eigen::Index n = h1_.dim();
        if (n > kMaxSingleExcitationDim)
            throw std::invalid_argument("build_h2: single-excitation dimension "
                                        + std::to_string(n) + " exceeds "
                                        + std::to_string(kMaxSingleExcitationDim));
        if (n > 0) {
            Eigen::ComplexSchur<Eigen::MatrixXcd> schur(h1_.matrix);
            if (schur.info() != Eigen::Success)
                throw NumericalError("build_h2: Schur decomposition failed");
            u_ = schur.matrixU();
            r_ = schur.matrixT();
        }
        // per atom: (e,e), (e,s), (s,e), (s,s) -- or just (e,e) when the
        // s-states have been dropped from the active space
        for (Eigen::Index i = 0; i < h1_.n_atoms; ++i) {
            std::vector<Eigen::Index> local;
            for (Eigen::Index b = i; b < n; b += h1_.n_atoms) local.push_back(b);
            for (auto a : local)
                for (auto b : local) forbidden_.push_back({a, b});
        }
    }

    const EffectiveHamiltonian& h1() const { return h1_; }
    Eigen::Index single_dim() const { return h1_.dim(); }
    Eigen::Index dim() const { return single_dim() * single_dim(); }
    Eigen::Index product_index(Eigen::Index a, Eigen::Index b) const { return a * single_dim() + b; }

    bool is_forbidden(Eigen::Index a, Eigen::Index b) const
    {
        return h1_.atom_of(a) == h1_.atom_of(b);
    }

    /// Ordered (a, b) pairs spanning D: per atom (ee, es, se, ss).
    const std::vector<std::pair<Eigen::Index, Eigen::Index>>& forbidden() const { return forbidden_; }

    /// Dense Kronecker sum; only for small systems.
    Eigen::MatrixXcd dense() const
    {
        const Eigen::Index n = single_dim();
        if (n > kMaxDenseSingleDim)
            throw std::invalid_argument("dense H2 requested for single-excitation dimension "
                                        + std::to_string(n));
        Eigen::MatrixXcd h2 = Eigen::MatrixXcd::Zero(n * n, n * n);
        for (Eigen::Index a = 0; a < n; ++a)
            for (Eigen::Index b = 0; b < n; ++b)
                for (Eigen::Index c = 0; c < n; ++c) {
                    h2(product_index(a, b), product_index(c, b)) += h1_.matrix(a, c);
                    h2(product_index(a, b), product_index(a, c)) += h1_.matrix(b, c);
                }
        return h2;
    }

    /// Dense 0/1 diagonal projector onto D; only for small systems.
    Eigen::MatrixXd projector() const
    {
        const Eigen::Index n = single_dim();
        if (n > kMaxDenseSingleDim)
            throw std::invalid_argument("dense projector requested for single-excitation dimension "
                                        + std::to_string(n));
        Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n * n, n * n);
        for (Eigen::Index a = 0; a < n; ++a)
            for (Eigen::Index b = 0; b < n; ++b)
                if (is_forbidden(a, b)) p(product_index(a, b), product_index(a, b)) = 1.0;
        return p;
    }

    /// Solves (E - H2) vec(X) = vec(Y), with X(a, b) the (a, b) amplitude.
    Eigen::MatrixXcd solve(cplx energy, const Eigen::MatrixXcd& y) const
    {
        const Eigen::MatrixXcd f = u_.adjoint() * y * u_.conjugate();
        return u_ * solve_triangular(energy, f) * u_.transpose();
    }

    /// P_D (E - H2)^-1 P_D as a |D| x |D| matrix in forbidden() order.
    Eigen::MatrixXcd projected_resolvent(cplx energy) const
    {
        const auto nd = static_cast<Eigen::Index>(forbidden_.size());
        Eigen::MatrixXcd out(nd, nd);
        const Eigen::MatrixXcd uc = u_.conjugate();
        for (Eigen::Index col = 0; col < nd; ++col) {
            const auto [c, d] = forbidden_[col];
            // U^dagger e_c e_d^T conj(U) is rank one
            const Eigen::MatrixXcd f = u_.row(c).adjoint() * uc.row(d);
            const Eigen::MatrixXcd uz = u_ * solve_triangular(energy, f);
            for (Eigen::Index row = 0; row < nd; ++row) {
                const auto [a, b] = forbidden_[row];
                out(row, col) = uz.row(a).cwiseProduct(u_.row(b)).sum();  // (U Z U^T)(a, b)
            }
        }
        return out;
    }

private:
    // E Z - R Z - Z R^T = F with R upper triangular, solved column by column
    // from the last one.
    Eigen::MatrixXcd solve_triangular(cplx energy, const Eigen::MatrixXcd& f) const
    {
        const Eigen::Index n = single_dim();
        Eigen::MatrixXcd z(n, n);
        Eigen::MatrixXcd a(n, n);
        for (Eigen::Index j = n - 1; j >= 0; --j) {
            Eigen::VectorXcd rhs = f.col(j);
            for (Eigen::Index k = j + 1; k < n; ++k) rhs += r_(j, k) * z.col(k);
            a = -r_;
            a.diagonal().array() += energy - r_(j, j);
            for (Eigen::Index i = 0; i < n; ++i)
                if (a(i, i) == cplx{})
                    throw NumericalError("two-excitation resolvent singular at E = "
                                         + std::to_string(energy.real()));
            z.col(j) = a.triangularView<Eigen::Upper>().solve(rhs);
        }
        return z;
    }

    EffectiveHamiltonian h1_;
    Eigen::MatrixXcd u_;
    Eigen::MatrixXcd r_;
    std::vector<std::pair<Eigen::Index, Eigen::Index>> forbidden_;
};

inline TwoExcitationOperator build_h2(const EffectiveHamiltonian& h1)
{
    return TwoExcitationOperator(h1);
}

struct TMatrix {
    Eigen::MatrixXcd matrix;  ///< |D| x |D|, forbidden() order
    double rcond = 0.0;
};

inline TMatrix t_matrix(const TwoExcitationOperator& h2, cplx energy)
{
    const Eigen::MatrixXcd pgp = h2.projected_resolvent(energy);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(pgp);
    TMatrix t;
    t.rcond = lu.rcond();
    t.matrix = -lu.inverse();
    if (!(t.rcond > 0.0) || !t.matrix.allFinite())
        throw NumericalError("projected two-excitation resolvent singular at E = "
                             + std::to_string(energy.real()));
    return t;
}

/// Input vertex w(k1, k2)_{ab} = [G0(k1) v_in]_a [G0(k2) v_in]_b over the
/// full ordered product basis.
struct ScatteringVertex {
    Eigen::MatrixXcd tensor;
    double k1 = 0.0;
    double k2 = 0.0;
};

inline Eigen::VectorXcd driven_amplitude(const EffectiveHamiltonian& h1,
                                         const Eigen::VectorXcd& v_in, double k)
{
    auto lu = detail::factor_shifted(h1, k);
    Eigen::VectorXcd g = lu.solve(v_in);
    if (!(lu.rcond() > 0.0) || !g.allFinite())
        throw NumericalError("resolvent singular at delta_omega = " + std::to_string(k));
    return g;
}

/// r(p)^T = v_in^dagger G0(p), returned as a column vector.
inline Eigen::VectorXcd emitted_amplitude(const EffectiveHamiltonian& h1,
                                          const Eigen::VectorXcd& v_in, double p)
{
    Eigen::MatrixXcd a = -h1.matrix.transpose();
    a.diagonal().array() += p;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
    Eigen::VectorXcd r = lu.solve(v_in.conjugate());
    if (!(lu.rcond() > 0.0) || !r.allFinite())
        throw NumericalError("resolvent singular at delta_omega = " + std::to_string(p));
    return r;
}

/// Tensor over the full single-excitation basis (s-rows are zero when
/// omega_c = 0).
inline ScatteringVertex vertex(const LatticeSpec& spec, double k1, double k2)
{
    const auto h1 = build_h1(spec);
    const auto a = active_space(spec, h1, input_coupling(spec));
    Eigen::VectorXcd g1 = Eigen::VectorXcd::Zero(h1.dim());
    Eigen::VectorXcd g2 = Eigen::VectorXcd::Zero(h1.dim());
    g1.head(a.h.dim()) = driven_amplitude(a.h, a.v_in, k1);
    g2.head(a.h.dim()) = driven_amplitude(a.h, a.v_in, k2);
    return {g1 * g2.transpose(), k1, k2};
}

struct TwoPhotonSpectrum {
    double k1 = 0.0;  ///< input detunings; equal for the degenerate case
    double k2 = 0.0;
    std::vector<double> output_grid;  ///< frequency nu of one outgoing photon
    std::vector<cplx> amplitude;      ///< connected S-matrix element at (nu, k1 + k2 - nu)
    std::vector<double> intensity;    ///< |amplitude|^2
    double elastic_coefficient = 0.0; ///< |t(k1)|^2 |t(k2)|^2

    double input_detuning() const { return 0.5 * (k1 + k2); }
    double peak() const
    {
        double m = 0.0;
        for (double v : intensity) m = std::max(m, v);
        return m;
    }
};

/// Output grid of `points` frequencies symmetric about the input detuning.
inline std::vector<double> symmetric_output_grid(double input_detuning, double half_span, int points)
{
    return linspace(input_detuning - half_span, input_detuning + half_span, points);
}

inline TwoPhotonSpectrum inelastic_spectrum(const LatticeSpec& spec, double k1, double k2,
                                            std::span<const double> output_grid,
                                            unsigned threads = 1)
{
    require_increasing(output_grid);
    const auto active = active_space(spec, build_h1(spec), input_coupling(spec));
    const auto& h1 = active.h;
    const auto& v = active.v_in;
    const auto h2 = build_h2(h1);
    const double energy = k1 + k2;
    const auto t = t_matrix(h2, energy);

    const auto g1 = driven_amplitude(h1, v, k1);
    const auto g2 = driven_amplitude(h1, v, k2);
    const auto& dset = h2.forbidden();
    const auto nd = static_cast<Eigen::Index>(dset.size());
    Eigen::VectorXcd w_in(nd);
    for (Eigen::Index i = 0; i < nd; ++i) {
        const auto [a, b] = dset[i];
        w_in(i) = 0.5 * (g1(a) * g2(b) + g2(a) * g1(b));
    }
    const Eigen::VectorXcd tw = t.matrix * w_in;

    TwoPhotonSpectrum out;
    out.k1 = k1;
    out.k2 = k2;
    out.output_grid.assign(output_grid.begin(), output_grid.end());
    out.amplitude.resize(output_grid.size());
    out.intensity.resize(output_grid.size());
    const cplx tk1 = detail::response_active(active, spec.total_decay(), k1).amplitude;
    const cplx tk2 = detail::response_active(active, spec.total_decay(), k2).amplitude;
    out.elastic_coefficient = std::norm(tk1) * std::norm(tk2);

    const double centre = 0.5 * energy;
    parallel_for(output_grid.size(), threads, [&](std::size_t i) {
        const double offset = output_grid[i] - centre;
        const auto r1 = emitted_amplitude(h1, v, centre + offset);
        const auto r2 = emitted_amplitude(h1, v, centre - offset);
        cplx amp{};
        for (Eigen::Index d = 0; d < nd; ++d) {
            const auto [a, b] = dset[d];
            amp += r1(a) * r2(b) * tw(d);
        }
        out.amplitude[i] = amp;
        out.intensity[i] = std::norm(amp);
    });
    return out;
}

/// Degenerate input k1 = k2 = input_detuning.
inline TwoPhotonSpectrum inelastic_spectrum(const LatticeSpec& spec, double input_detuning,
                                            std::span<const double> output_grid,
                                            unsigned threads = 1)
{
    return inelastic_spectrum(spec, input_detuning, input_detuning, output_grid, threads);
}

}  // namespace wgqed
