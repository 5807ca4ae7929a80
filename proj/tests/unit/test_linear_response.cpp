#include <gtest/gtest.h>

#include <chrono>
#include <random>

#include "wgqed/linear_response.hpp"
#include "helpers.hpp"

using namespace wgqed;

namespace {

// Closed-form single Lambda atom, written without the control-field pole.
cplx single_atom_t(const SystemParams& p, double w)
{
    const cplx I(0, 1);
    const cplx num = (I * p.gamma_1d / 2.0) * (w - p.delta_c);
    const cplx den = (w + I * (p.gamma_1d + p.gamma_e) / 2.0) * (w - p.delta_c) - p.omega_c * p.omega_c;
    return 1.0 - num / den;
}

}  // namespace

TEST(LinearResponse, GridIsExactlyAntisymmetric)
{
    const auto g = linspace(-5, 5, 2001);
    ASSERT_EQ(g.size(), 2001u);
    EXPECT_EQ(g.front(), -5.0);
    EXPECT_EQ(g.back(), 5.0);
    EXPECT_EQ(g[1000], 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(g[i], -g[g.size() - 1 - i]);
    EXPECT_THROW(linspace(1, 0, 5), std::invalid_argument);
    EXPECT_THROW(linspace(0, 1, 0), std::invalid_argument);
}

TEST(LinearResponse, SingleAtomMatchesClosedForm)
{
    for (double dc : {0.0, 0.35, -1.2}) {
        for (double om : {0.0, 0.5, 2.0}) {
            SystemParams p;
            p.delta_c = dc;
            p.omega_c = om;
            const auto spec = test::single_atom(p);
            const auto h = build_h1(spec);
            const auto v = input_coupling(spec);
            // offset grid keeps the s-level pole off the grid for om = 0
            for (double w : linspace(-5.0123, 4.9877, 1001)) {
                const cplx t = response_at(spec, h, v, w).amplitude;
                EXPECT_LT(test::rel_err(t, single_atom_t(p, w)), 1e-8) << "dc=" << dc << " om=" << om << " w=" << w;
            }
        }
    }
}

TEST(LinearResponse, SingleAtomDarkPoint)
{
    SystemParams p;
    const auto spec = test::single_atom(p);
    const auto h = build_h1(spec);
    EXPECT_NEAR(std::abs(transmission_amplitude(spec, h, 0.0) - 1.0), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(susceptibility(spec, h, 0.0)), 0.0, 1e-14);
}

TEST(LinearResponse, TwoLevelResonance)
{
    SystemParams p;
    p.omega_c = 0;
    const auto spec = test::single_atom(p);
    const auto h = build_h1(spec);
    const cplx t = transmission_amplitude(spec, h, 0.0);
    EXPECT_NEAR(t.real(), 0.1 / 1.1, 1e-14);
    EXPECT_NEAR(t.imag(), 0.0, 1e-14);
    EXPECT_NEAR(std::norm(t), 8.264462809917e-3, 1e-12);
    const cplx chi = susceptibility(spec, h, 0.0);
    EXPECT_NEAR(chi.real(), 0.0, 1e-15);
    EXPECT_GT(std::abs(chi.imag()), 0.1);
}

TEST(LinearResponse, ConventionalPresetTransparentAtResonance)
{
    SystemParams p = test::zigzag_params();
    for (auto k : {GuidedKernel::Full, GuidedKernel::Dissipative}) {
        p.guided_kernel = k;
        const auto spec = build_conventional(p);
        EXPECT_GT(std::norm(transmission_amplitude(spec, build_h1(spec), 0.0)), 1 - 1e-6);
    }
}

TEST(LinearResponse, GreenScalarExample)
{
    SystemParams p;
    p.omega_c = 0;
    auto spec = test::single_atom(p);
    spec.params.delta_c = 1.0;  // keep the inert s-level away from 0
    const auto g = green_single(build_h1(spec), 0.0);
    EXPECT_NEAR(std::abs(g.matrix(0, 0) - cplx(0, -1.0 / 0.55)), 0.0, 1e-12);
}

TEST(LinearResponse, GreenAsymptoticAndResolventIdentity)
{
    std::mt19937_64 rng(3);
    for (int k = 0; k < 25; ++k) {
        const auto spec = test::random_spec(rng, 4, true);
        const auto h = build_h1(spec);
        const double far = 1e6;
        const auto g = green_single(h, far);
        const Eigen::MatrixXcd ref = Eigen::MatrixXcd::Identity(h.dim(), h.dim()) / far;
        EXPECT_LT((g.matrix - ref).norm() / ref.norm(), 1e-5);

        for (double w : {-3.1, -0.7, 0.33, 2.9}) {
            const auto gw = green_single(h, w);
            Eigen::MatrixXcd a = -h.matrix;
            a.diagonal().array() += w;
            const Eigen::MatrixXcd res = a * gw.matrix - Eigen::MatrixXcd::Identity(h.dim(), h.dim());
            EXPECT_LT(res.cwiseAbs().maxCoeff(), 1e-9);
        }
    }
}

TEST(LinearResponse, SingularResolventIsReported)
{
    SystemParams p;
    p.gamma_1d = 0;
    p.gamma_e = 0;
    p.omega_c = 2;
    const auto spec = test::single_atom(p);
    EXPECT_THROW(green_single(build_h1(spec), 2.0), NumericalError);

    const std::vector<double> grid{-2.0, 0.5, 2.0};
    const auto s = sweep(spec, grid);
    EXPECT_TRUE(s.has_singular());
    ASSERT_EQ(s.diagnostics.size(), 2u);
    EXPECT_EQ(s.diagnostics[0].detuning, -2.0);
    EXPECT_TRUE(std::isnan(s.transmission[0]));
    EXPECT_EQ(s.transmission[1], 1.0);
}

TEST(LinearResponse, DecoupledLatticeIsTransparent)
{
    SystemParams p;
    p.gamma_1d = 0;
    p.j1 = 0.3;
    const auto grid = linspace(-5, 5, 101);
    for (const auto& spec : {build_conventional(p), build_zigzag(3, p), build_orthogonal(3, 2, p)}) {
        const auto s = sweep(spec, grid);
        for (std::size_t i = 0; i < s.size(); ++i) {
            EXPECT_EQ(s.transmission[i], 1.0);
            EXPECT_EQ(s.chi[i], cplx{});
        }
    }
}

TEST(LinearResponse, ChiAndTransmissionConsistent)
{
    std::mt19937_64 rng(5);
    for (int k = 0; k < 10; ++k) {
        const auto spec = test::random_spec(rng);
        const auto s = sweep(spec, linspace(-4.01, 4.03, 97));
        for (std::size_t i = 0; i < s.size(); ++i) {
            const cplx rebuilt = 1.0 - cplx(0, 0.5) * spec.total_decay() * s.chi[i];
            EXPECT_LT(std::abs(rebuilt - s.amplitude[i]), 1e-12);
        }
    }
}

TEST(LinearResponse, ControlOffMatchesTwoLevelLattice)
{
    // omega_c -> 0 approaches the two-level result continuously
    SystemParams p = test::zigzag_params();
    const auto grid = linspace(-5.013, 4.987, 401);
    p.omega_c = 0;
    const auto two_level = sweep(build_zigzag(3, p), grid);
    p.omega_c = 1e-9;
    const auto lambda = sweep(build_zigzag(3, p), grid);
    double worst = 0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        worst = std::max(worst, std::abs(two_level.amplitude[i] - lambda.amplitude[i]));
    EXPECT_LT(worst, 1e-8);
}

TEST(LinearResponse, SweepIndependentOfThreadCount)
{
    const auto spec = build_orthogonal(10, 2, test::orthogonal_params());
    const auto grid = linspace(-5, 5, 501);
    const auto a = sweep(spec, grid, 1);
    const auto b = sweep(spec, grid, 4);
    for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_EQ(a.amplitude[i], b.amplitude[i]);
}

TEST(LinearResponse, RejectsBadGrids)
{
    const auto spec = build_conventional(SystemParams{});
    EXPECT_THROW(sweep(spec, std::vector<double>{}), std::invalid_argument);
    EXPECT_THROW(sweep(spec, std::vector<double>{0.0, 0.0}), std::invalid_argument);
    EXPECT_THROW(sweep(spec, std::vector<double>{1.0, 0.0}), std::invalid_argument);
}

TEST(LinearResponse, CalibrationRunsUnderOneSecond)
{
    const auto start = std::chrono::steady_clock::now();
    SystemParams p;
    const auto s = sweep(test::single_atom(p), linspace(-5, 5, 1001));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    EXPECT_EQ(s.size(), 1001u);
    EXPECT_LT(secs, 1.0);
}
