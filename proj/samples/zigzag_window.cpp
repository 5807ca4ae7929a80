// Transmission of a five-cell zigzag lattice and its window widths.

#include <cstdio>

#include "wgqed/analysis.hpp"
#include "wgqed/lattice.hpp"
#include "wgqed/linear_response.hpp"

int main()
{
    wgqed::SystemParams p;
    p.j1 = 0.2;
    p.j2 = 1.6;
    p.guided_kernel = wgqed::GuidedKernel::Dissipative;

    const auto spec = wgqed::build_zigzag(5, p);
    const auto grid = wgqed::linspace(-5.0, 5.0, 2001);
    const auto series = wgqed::sweep(spec, grid);
    const auto bands = wgqed::extract_bands(series);

    for (const auto& b : bands.windows)
        std::printf("%-12s [% .4f, % .4f]  width %.4f\n", wgqed::to_string(b.kind).data(), b.lo, b.hi,
                    b.width());
    if (bands.w) std::printf("W  = %.4f\n", *bands.w);
    if (bands.w_prime) std::printf("W' = %.4f\n", *bands.w_prime);
    std::printf("T(0) = %.9f\n", series.transmission[grid.size() / 2]);
}
