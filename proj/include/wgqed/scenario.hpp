#pragma once

// Scenario execution and artifact emission.
//
// Layout under output_dir:
//   manifest                          flat key=value record of the resolved run
//   <label>/transmission.csv          delta_omega,re_t,im_t,T,re_chi,im_chi
//   <label>/susceptibility.csv        delta_omega,re_chi,im_chi
//   <label>/bands.csv                 kind,lo,hi,width
//   <label>/inelastic_<input>.csv     input_detuning,nu,intensity,elastic_T4
//   table1.csv                        j1,j2,w_prime,w
//   *.svg                             optional plots next to each CSV
//
// All numbers are written with %.17g so reruns are byte-identical. If
// anything fails, every file and directory created by the run is removed.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "wgqed/analysis.hpp"
#include "wgqed/hamiltonian.hpp"
#include "wgqed/linear_response.hpp"
#include "wgqed/plot.hpp"
#include "wgqed/presets.hpp"
#include "wgqed/two_photon.hpp"
#include "wgqed/version.hpp"

namespace wgqed {

inline std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Short form used in file names: 0, 0.5, -1.25 ...
inline std::string fmt_short(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

struct ArtifactBundle {
    std::filesystem::path root;
    std::vector<std::filesystem::path> files;  ///< in write order
    std::size_t ill_conditioned_points = 0;
};

namespace detail {

class ArtifactWriter {
public:
    explicit ArtifactWriter(std::filesystem::path root) : root_(std::move(root)) {}

    ~ArtifactWriter()
    {
        if (!committed_) rollback();
    }

    void make_dir(const std::filesystem::path& rel)
    {
        std::vector<std::filesystem::path> missing;
        auto start = (root_ / rel).lexically_normal();
        if (!start.empty() && start.filename().empty()) start = start.parent_path();
        for (auto p = start; !p.empty() && !std::filesystem::exists(p); p = p.parent_path()) {
            missing.push_back(p);
            if (p == p.parent_path()) break;
        }
        for (auto it = missing.rbegin(); it != missing.rend(); ++it) {
            std::filesystem::create_directory(*it);
            dirs_.push_back(*it);
        }
    }

    void write(const std::filesystem::path& rel, const std::string& content)
    {
        const auto path = root_ / rel;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        files_.push_back(path);
        out << content;
        if (!out.flush()) throw std::runtime_error("write failed: " + path.string());
    }

    const std::vector<std::filesystem::path>& files() const { return files_; }
    void commit() { committed_ = true; }

private:
    void rollback() noexcept
    {
        std::error_code ec;
        for (auto it = files_.rbegin(); it != files_.rend(); ++it) std::filesystem::remove(*it, ec);
        for (auto it = dirs_.rbegin(); it != dirs_.rend(); ++it) std::filesystem::remove(*it, ec);
    }

    std::filesystem::path root_;
    std::vector<std::filesystem::path> files_;
    std::vector<std::filesystem::path> dirs_;
    bool committed_ = false;
};

inline std::string transmission_csv(const SpectrumSeries& s)
{
    std::string out = "delta_omega,re_t,im_t,T,re_chi,im_chi\n";
    for (std::size_t i = 0; i < s.size(); ++i)
        out += fmt(s.detunings[i]) + ',' + fmt(s.amplitude[i].real()) + ',' + fmt(s.amplitude[i].imag())
               + ',' + fmt(s.transmission[i]) + ',' + fmt(s.chi[i].real()) + ','
               + fmt(s.chi[i].imag()) + '\n';
    return out;
}

inline std::string susceptibility_csv(const SpectrumSeries& s)
{
    std::string out = "delta_omega,re_chi,im_chi\n";
    for (std::size_t i = 0; i < s.size(); ++i)
        out += fmt(s.detunings[i]) + ',' + fmt(s.chi[i].real()) + ',' + fmt(s.chi[i].imag()) + '\n';
    return out;
}

inline std::string bands_csv(const BandReport& r)
{
    std::string out = "kind,lo,hi,width\n";
    auto row = [&](std::string_view kind, double lo, double hi) {
        out += std::string(kind) + ',' + fmt(lo) + ',' + fmt(hi) + ',' + fmt(hi - lo) + '\n';
    };
    for (const auto& b : r.windows) row(to_string(b.kind), b.lo, b.hi);
    if (r.central) row("W", r.central->lo, r.central->hi);
    if (r.adjacent_absorption) row("W_prime", r.adjacent_absorption->lo, r.adjacent_absorption->hi);
    if (r.side) {
        row("W1", r.side->lo, r.side->hi);
        row("W2", r.central->hi, r.side->lo);
    }
    if (r.central) row("W3", r.central->lo, r.central->hi);
    return out;
}

inline std::string inelastic_csv(const TwoPhotonSpectrum& s)
{
    std::string out = "input_detuning,nu,intensity,elastic_T4\n";
    const std::string input = fmt(s.input_detuning());
    const std::string elastic = fmt(s.elastic_coefficient);
    for (std::size_t i = 0; i < s.output_grid.size(); ++i)
        out += input + ',' + fmt(s.output_grid[i]) + ',' + fmt(s.intensity[i]) + ',' + elastic + '\n';
    return out;
}

inline std::string table1_csv(const std::vector<Table1Row>& rows)
{
    std::string out = "j1,j2,w_prime,w\n";
    for (const auto& r : rows)
        out += fmt(r.j1) + ',' + fmt(r.j2) + ',' + fmt(r.w_prime) + ',' + fmt(r.w) + '\n';
    return out;
}

inline std::string join_numbers(const std::vector<double>& v)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + fmt(v[i]);
    return out;
}

inline std::string svg(const std::string& title, const std::string& xl, const std::string& yl,
                       std::vector<plot::Series> series)
{
    std::ostringstream os;
    plot::write_svg(os, title, xl, yl, series);
    return os.str();
}

}  // namespace detail

/// Flat key=value record of every constant the run consumes.
inline std::string manifest_text(const ScenarioConfig& c)
{
    using detail::join_numbers;
    std::string m;
    auto kv = [&](const std::string& k, const std::string& v) { m += k + '=' + v + '\n'; };
    kv("version", version);
    kv("preset", c.preset.empty() ? "none" : c.preset);
    if (!c.description.empty()) kv("description", c.description);
    for (std::size_t i = 0; i < c.notes.size(); ++i) kv("note." + std::to_string(i), c.notes[i]);
    kv("params.gamma_1d", fmt(c.params.gamma_1d));
    kv("params.gamma_e", fmt(c.params.gamma_e));
    kv("params.omega_c", fmt(c.params.omega_c));
    kv("params.delta_c", fmt(c.params.delta_c));
    kv("params.j1", fmt(c.params.j1));
    kv("params.j2", fmt(c.params.j2));
    kv("params.k0d", fmt(c.params.k0d));
    kv("params.a_over_d", fmt(c.params.a_over_d));
    kv("params.guided_kernel", std::string(to_string(c.params.guided_kernel)));
    kv("grid.min", fmt(c.grid.min));
    kv("grid.max", fmt(c.grid.max));
    kv("grid.points", std::to_string(c.grid.points));
    kv("thresholds.t_high", fmt(c.t_high));
    kv("thresholds.t_low", fmt(c.t_low));
    kv("inelastic.input_detunings", join_numbers(c.inelastic.input_detunings));
    kv("inelastic.half_span", fmt(c.inelastic.half_span));
    kv("inelastic.points", std::to_string(c.inelastic.points));
    kv("inelastic.intensity_units", "1/Gamma^2");
    kv("table1.j2_values", join_numbers(c.table1.j2_values));
    kv("table1.m_cells", std::to_string(c.table1.m_cells));
    kv("basis_order", std::string(EffectiveHamiltonian::basis_order));
    kv("detuning_convention", std::string(EffectiveHamiltonian::detuning_convention));
    kv("units", "rates and detunings in Gamma, positions in d");
    for (std::size_t i = 0; i < c.lattices.size(); ++i) {
        const auto& l = c.lattices[i];
        const auto spec = build_lattice(l, c.params);
        const std::string p = "lattice." + std::to_string(i) + ".";
        kv(p + "label", l.label);
        kv(p + "geometry", std::string(to_string(l.geometry)));
        kv(p + "m_cells", std::to_string(spec.m_cells));
        kv(p + "n_per_cell", std::to_string(spec.n_per_cell));
        kv(p + "atom_count", std::to_string(spec.atom_count()));
        kv(p + "coupled_count", std::to_string(spec.coupled_count()));
        kv(p + "bond_count", std::to_string(spec.graph.bond_count()));
        kv(p + "guided_kernel", std::string(to_string(spec.params.guided_kernel)));
    }
    kv("threads", std::to_string(c.threads));
    kv("plots", c.plots ? "true" : "false");
    return m;
}

inline ArtifactBundle run_scenario(const ScenarioConfig& config)
{
    validate(config);
    const auto& c = config;
    detail::ArtifactWriter w(c.output_dir);
    w.make_dir("");
    ArtifactBundle bundle;
    bundle.root = c.output_dir;

    const auto grid = linspace(c.grid.min, c.grid.max, c.grid.points);
    std::string diagnostics;
    std::vector<plot::Series> t_plot, chi_plot;

    for (const auto& entry : c.lattices) {
        const auto spec = build_lattice(entry, c.params);
        w.make_dir(entry.label);
        const std::filesystem::path dir = entry.label;

        const auto series = sweep(spec, grid, c.threads);
        for (const auto& d : series.diagnostics) {
            if (d.singular)
                throw NumericalError(entry.label + ": singular resolvent at delta_omega = " + fmt(d.detuning));
            ++bundle.ill_conditioned_points;
            diagnostics += entry.label + ':' + fmt(d.detuning) + ':' + fmt(d.rcond) + ';';
        }
        w.write(dir / "transmission.csv", detail::transmission_csv(series));
        w.write(dir / "susceptibility.csv", detail::susceptibility_csv(series));
        w.write(dir / "bands.csv", detail::bands_csv(extract_bands(series, c.t_high, c.t_low)));

        std::vector<double> re_chi(series.size());
        for (std::size_t i = 0; i < series.size(); ++i) re_chi[i] = series.chi[i].real();
        t_plot.push_back({entry.label, series.detunings, series.transmission});
        chi_plot.push_back({entry.label, series.detunings, re_chi});
        if (c.plots) {
            w.write(dir / "transmission.svg",
                    detail::svg(entry.label + " transmission", "detuning / Gamma", "T", {t_plot.back()}));
            w.write(dir / "susceptibility.svg",
                    detail::svg(entry.label + " Re chi", "detuning / Gamma", "Re chi", {chi_plot.back()}));
        }

        for (double input : c.inelastic.input_detunings) {
            const auto out_grid = symmetric_output_grid(input, c.inelastic.half_span, c.inelastic.points);
            const auto spectrum = inelastic_spectrum(spec, input, out_grid, c.threads);
            const std::string stem = "inelastic_" + fmt_short(input);
            w.write(dir / (stem + ".csv"), detail::inelastic_csv(spectrum));
            if (c.plots)
                w.write(dir / (stem + ".svg"),
                        detail::svg(entry.label + " inelastic, input " + fmt_short(input), "nu / Gamma",
                                    "intensity / Gamma^-2",
                                    {{stem, spectrum.output_grid, spectrum.intensity}}));
        }
    }

    if (c.plots && !c.lattices.empty()) {
        w.write("transmission.svg", detail::svg("transmission", "detuning / Gamma", "T", t_plot));
        w.write("susceptibility.svg", detail::svg("Re chi", "detuning / Gamma", "Re chi", chi_plot));
    }

    if (!c.table1.j2_values.empty()) {
        Table1Options opt;
        opt.m_cells = c.table1.m_cells;
        opt.grid_min = c.grid.min;
        opt.grid_max = c.grid.max;
        opt.grid_points = c.grid.points;
        opt.t_high = c.t_high;
        opt.t_low = c.t_low;
        opt.threads = c.threads;
        const auto rows = table1_sweep(c.table1.j2_values, c.params, opt);
        w.write("table1.csv", detail::table1_csv(rows));
        if (c.plots) {
            plot::Series wp{"W'", {}, {}}, ww{"W", {}, {}};
            for (const auto& r : rows) {
                wp.x.push_back(r.j2);
                wp.y.push_back(r.w_prime);
                ww.x.push_back(r.j2);
                ww.y.push_back(r.w);
            }
            w.write("table1.svg", detail::svg("window widths", "J2 / Gamma", "width / Gamma", {wp, ww}));
        }
    }

    std::string manifest = manifest_text(c);
    manifest += "diagnostics.ill_conditioned=" + std::to_string(bundle.ill_conditioned_points) + '\n';
    if (!diagnostics.empty()) manifest += "diagnostics.points=" + diagnostics + '\n';
    w.write("manifest", manifest);

    bundle.files = w.files();
    w.commit();
    return bundle;
}

}  // namespace wgqed
