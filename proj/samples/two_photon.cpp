// Inelastic two-photon spectrum of the 20-cell orthogonal lattice at a
// detuned input, with its strongest peaks.

#include <cstdio>

#include "wgqed/analysis.hpp"
#include "wgqed/lattice.hpp"
#include "wgqed/two_photon.hpp"

int main()
{
    wgqed::SystemParams p;
    p.j1 = 3.0;
    p.j2 = 6.0;

    const auto spec = wgqed::build_orthogonal(20, 2, p);
    const double input = 0.5;
    const auto grid = wgqed::symmetric_output_grid(input, 5.0, 401);
    const auto s = wgqed::inelastic_spectrum(spec, input, grid, 0);

    std::printf("elastic |t|^4 = %.6g\n", s.elastic_coefficient);
    for (const auto& pk : wgqed::find_peaks(s, 0.05))
        std::printf("peak at nu = % .4f  intensity %.6g\n", pk.nu, pk.intensity);
}
