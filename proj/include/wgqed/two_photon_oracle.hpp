#pragma once

// Independent route to the two-photon connected amplitude for tiny systems.
//
// Works in the symmetric basis of unordered pairs on distinct atoms (the
// allowed subspace Q), builds H_Q entry by entry, diagonalizes it, and uses
//
//     A = chi_out^T G_Q(E) chi_in - phi_out^T chi_in,
//
// where phi_in = g(k1) (x) g(k2) symmetrized, chi_in = (E - H2) phi_in and
// chi_out the analogous output vector. No forbidden-subspace inversion and no
// Schur/Sylvester machinery is shared with the main path.

#include <cmath>
#include <complex>
#include <map>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "wgqed/hamiltonian.hpp"
#include "wgqed/linear_response.hpp"
#include "wgqed/two_photon.hpp"

namespace wgqed {

inline constexpr std::size_t kOracleMaxAtoms = 3;

inline TwoPhotonSpectrum oracle_two_photon(const LatticeSpec& spec, double k1, double k2,
                                           std::span<const double> output_grid)
{
    if (spec.atom_count() > kOracleMaxAtoms)
        throw std::invalid_argument("oracle_two_photon: at most 3 atoms");
    require_increasing(output_grid);

    const auto active = active_space(spec, build_h1(spec), input_coupling(spec));
    const auto& h1 = active.h;
    const Eigen::MatrixXcd& h = h1.matrix;
    const Eigen::Index n = h1.dim();
    const Eigen::VectorXcd& v = active.v_in;
    const Eigen::VectorXcd vo = v.conjugate();
    const double energy = k1 + k2;
    const double rt2 = std::sqrt(2.0);

    auto full_solve = [&](double w, const Eigen::VectorXcd& rhs, bool transpose) {
        Eigen::MatrixXcd a = transpose ? Eigen::MatrixXcd(-h.transpose()) : Eigen::MatrixXcd(-h);
        a.diagonal().array() += w;
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(a);
        if (!lu.isInvertible()) throw NumericalError("oracle: singular single-excitation resolvent");
        return Eigen::VectorXcd(lu.solve(rhs));
    };

    // allowed unordered pairs
    std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
    std::map<std::pair<Eigen::Index, Eigen::Index>, Eigen::Index> index;
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = a + 1; b < n; ++b)
            if (h1.atom_of(a) != h1.atom_of(b)) {
                index[{a, b}] = static_cast<Eigen::Index>(pairs.size());
                pairs.push_back({a, b});
            }
    const auto nq = static_cast<Eigen::Index>(pairs.size());
    auto find = [&](Eigen::Index a, Eigen::Index b) -> Eigen::Index {
        if (a > b) std::swap(a, b);
        auto it = index.find({a, b});
        return it == index.end() ? -1 : it->second;
    };

    // H2 acting on the symmetric pair state {c,d}: excitation at c hops to x,
    // or excitation at d hops to x; keep only allowed targets.
    Eigen::MatrixXcd hq = Eigen::MatrixXcd::Zero(nq, nq);
    for (Eigen::Index col = 0; col < nq; ++col) {
        const auto [c, d] = pairs[col];
        for (Eigen::Index x = 0; x < n; ++x) {
            if (auto r = find(x, d); r >= 0 && x != d) hq(r, col) += h(x, c);
            if (auto r = find(c, x); r >= 0 && x != c) hq(r, col) += h(x, d);
        }
    }

    auto sym = [&](const Eigen::MatrixXcd& m) {
        Eigen::VectorXcd s(nq);
        for (Eigen::Index q = 0; q < nq; ++q) {
            const auto [a, b] = pairs[q];
            s(q) = (m(a, b) + m(b, a)) / rt2;
        }
        return s;
    };

    const Eigen::VectorXcd g1 = full_solve(k1, v, false);
    const Eigen::VectorXcd g2 = full_solve(k2, v, false);
    const Eigen::MatrixXcd chi_in =
        0.5 * (v * g2.transpose() + g1 * v.transpose() + v * g1.transpose() + g2 * v.transpose());

    Eigen::VectorXcd lambda;
    Eigen::MatrixXcd modes;
    Eigen::VectorXcd coeff;
    if (nq > 0) {
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(hq);
        if (es.info() != Eigen::Success) throw NumericalError("oracle: eigensolver failed");
        lambda = es.eigenvalues();
        modes = es.eigenvectors();
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(modes);
        if (lu.rcond() < 1e-10) throw NumericalError("oracle: constrained spectrum defective");
        coeff = lu.solve(sym(chi_in));
        for (Eigen::Index q = 0; q < nq; ++q) {
            const cplx den = energy - lambda(q);
            if (den == cplx{}) throw NumericalError("oracle: energy on constrained spectrum");
            coeff(q) /= den;
        }
    }
    const Eigen::VectorXcd gq_chi = nq > 0 ? Eigen::VectorXcd(modes * coeff) : Eigen::VectorXcd();

    TwoPhotonSpectrum out;
    out.k1 = k1;
    out.k2 = k2;
    out.output_grid.assign(output_grid.begin(), output_grid.end());
    const cplx t1 = 1.0 - cplx(0, 1) * v.dot(g1);
    const cplx t2 = 1.0 - cplx(0, 1) * v.dot(g2);
    out.elastic_coefficient = std::norm(t1) * std::norm(t2);

    const double centre = 0.5 * energy;
    for (double nu : output_grid) {
        const double offset = nu - centre;
        const Eigen::VectorXcd r1 = full_solve(centre + offset, vo, true);
        const Eigen::VectorXcd r2 = full_solve(centre - offset, vo, true);
        const Eigen::MatrixXcd chi_out = vo * r2.transpose() + r1 * vo.transpose();
        cplx amp = -(r1.transpose() * chi_in * r2)(0, 0);
        if (nq > 0) amp += sym(chi_out).cwiseProduct(gq_chi).sum();
        out.amplitude.push_back(amp);
        out.intensity.push_back(std::norm(amp));
    }
    return out;
}

inline TwoPhotonSpectrum oracle_two_photon(const LatticeSpec& spec, double input_detuning,
                                           std::span<const double> output_grid)
{
    return oracle_two_photon(spec, input_detuning, input_detuning, output_grid);
}

}  // namespace wgqed
