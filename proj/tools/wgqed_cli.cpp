// wgqed: run a preset or a JSON scenario and write CSV artifacts.
//
// Exit codes: 0 success, 1 unexpected failure, 2 configuration error,
// 3 numerical diagnostic escalated to an error.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "wgqed/config.hpp"
#include "wgqed/presets.hpp"
#include "wgqed/scenario.hpp"
#include "wgqed/version.hpp"

namespace {

void print_catalog()
{
    for (const auto& p : wgqed::list_presets()) {
        std::cout << p.name << "\t" << p.description << "\n";
        const auto& c = p.config;
        std::cout << "    params: gamma_1d=" << c.params.gamma_1d << " gamma_e=" << c.params.gamma_e
                  << " omega_c=" << c.params.omega_c << " delta_c=" << c.params.delta_c
                  << " j1=" << c.params.j1 << " j2=" << c.params.j2 << " k0d=" << c.params.k0d
                  << " a_over_d=" << c.params.a_over_d
                  << " kernel=" << wgqed::to_string(c.params.guided_kernel) << "\n";
        for (const auto& l : c.lattices) {
            std::cout << "    lattice " << l.label << ": " << wgqed::to_string(l.geometry)
                      << " M=" << l.m_cells << " N=" << l.n_per_cell;
            if (l.guided_kernel) std::cout << " kernel=" << wgqed::to_string(*l.guided_kernel);
            std::cout << "\n";
        }
        if (!c.inelastic.input_detunings.empty()) {
            std::cout << "    two-photon inputs:";
            for (double d : c.inelastic.input_detunings) std::cout << " " << d;
            std::cout << "\n";
        }
        if (!c.table1.j2_values.empty()) {
            std::cout << "    J2 sweep:";
            for (double d : c.table1.j2_values) std::cout << " " << d;
            std::cout << " (M=" << c.table1.m_cells << ")\n";
        }
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Waveguide-coupled Lambda-atom lattices: transmission, susceptibility, "
                 "two-photon inelastic spectra"};
    app.set_version_flag("--version", WGQED_VERSION);

    std::string preset, config_file, out_dir;
    std::optional<int> grid_points;
    std::optional<unsigned> threads;
    bool plots = false, list = false;
    app.add_option("--preset", preset, "named scenario (see --list-presets)");
    app.add_option("--config", config_file, "JSON scenario file")->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--grid-points", grid_points, "points of the one-photon grid");
    app.add_option("--threads", threads, "worker threads (0 = all cores)");
    app.add_flag("--plots", plots, "also write SVG plots");
    app.add_flag("--list-presets", list, "print the preset catalog and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (list) {
        print_catalog();
        return 0;
    }

    try {
        wgqed::ScenarioConfig cfg;
        if (!config_file.empty()) {
            cfg = wgqed::load_config(config_file, preset);
        } else if (!preset.empty()) {
            cfg = wgqed::find_preset(preset).config;
        } else {
            std::cerr << "error: give --preset or --config\n";
            return 2;
        }
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        if (grid_points) cfg.grid.points = *grid_points;
        if (threads) cfg.threads = *threads;
        if (plots) cfg.plots = true;
        wgqed::validate(cfg);

        const auto bundle = wgqed::run_scenario(cfg);
        std::cout << "wrote " << bundle.files.size() << " files to " << bundle.root.string() << "\n";
        if (bundle.ill_conditioned_points)
            std::cerr << "warning: " << bundle.ill_conditioned_points
                      << " ill-conditioned grid points (see manifest)\n";
        return 0;
    } catch (const wgqed::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const wgqed::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
