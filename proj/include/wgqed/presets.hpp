#pragma once

// Scenario description and the frozen preset catalog.

#include <cctype>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "wgqed/lattice.hpp"
#include "wgqed/analysis.hpp"
#include "wgqed/two_photon.hpp"

namespace wgqed {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct LatticeEntry {
    std::string label;
    Geometry geometry = Geometry::Conventional;
    int m_cells = 1;
    int n_per_cell = 1;
    std::optional<GuidedKernel> guided_kernel;  ///< overrides params.guided_kernel
};

struct GridSpec {
    double min = -5.0;
    double max = 5.0;
    int points = 2001;
};

struct InelasticSpec {
    std::vector<double> input_detunings;  ///< degenerate inputs; empty = no two-photon run
    double half_span = 5.0;               ///< output grid is input +- half_span
    int points = 401;
};

struct Table1Spec {
    std::vector<double> j2_values;  ///< empty = no sweep
    int m_cells = 3;
};

struct ScenarioConfig {
    std::string preset;
    std::string description;
    std::vector<std::string> notes;  ///< parameter choices recorded in the manifest
    SystemParams params;
    std::vector<LatticeEntry> lattices;
    GridSpec grid;
    InelasticSpec inelastic;
    Table1Spec table1;
    double t_high = 0.5;
    double t_low = 0.1;
    std::filesystem::path output_dir = "wgqed_out";
    unsigned threads = 1;
    bool plots = false;
};

inline SystemParams effective_params(const LatticeEntry& e, SystemParams p)
{
    if (e.guided_kernel) p.guided_kernel = *e.guided_kernel;
    return p;
}

inline LatticeSpec build_lattice(const LatticeEntry& e, const SystemParams& p)
{
    return build_lattice(e.geometry, e.m_cells, e.n_per_cell, effective_params(e, p));
}

inline std::size_t single_excitation_dim(const LatticeEntry& e)
{
    const std::size_t atoms = e.geometry == Geometry::Conventional ? 2
                              : e.geometry == Geometry::Zigzag
                                  ? 2 * static_cast<std::size_t>(e.m_cells)
                                  : static_cast<std::size_t>(e.m_cells) * e.n_per_cell;
    return 2 * atoms;
}

/// Field-level validation of everything a run will consume.
inline void validate(const ScenarioConfig& c)
{
    try {
        validate(c.params);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("params.") + e.what());
    }
    if (c.lattices.empty() && c.table1.j2_values.empty())
        throw ConfigError("lattices: at least one lattice or a table1 sweep is required");
    std::set<std::string> labels;
    for (std::size_t i = 0; i < c.lattices.size(); ++i) {
        const auto& l = c.lattices[i];
        const std::string where = "lattices[" + std::to_string(i) + "].";
        if (l.label.empty()) throw ConfigError(where + "label: must not be empty");
        for (char ch : l.label)
            if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-'))
                throw ConfigError(where + "label: only [A-Za-z0-9_-] allowed");
        if (!labels.insert(l.label).second) throw ConfigError(where + "label: duplicate '" + l.label + "'");
        if (l.m_cells < 1) throw ConfigError(where + "m_cells: must be >= 1");
        if (l.n_per_cell < 1) throw ConfigError(where + "n_per_cell: must be >= 1");
        if (l.geometry == Geometry::Zigzag && l.n_per_cell != 2)
            throw ConfigError(where + "n_per_cell: zigzag cells hold exactly 2 atoms");
        if (!c.inelastic.input_detunings.empty()
            && single_excitation_dim(l) > static_cast<std::size_t>(kMaxSingleExcitationDim))
            throw ConfigError(where + "m_cells: too large for the two-photon run");
    }
    if (!std::isfinite(c.grid.min) || !std::isfinite(c.grid.max) || !(c.grid.min < c.grid.max))
        throw ConfigError("grid: min must be finite and below max");
    if (c.grid.points < 2) throw ConfigError("grid.points: must be >= 2");
    for (double d : c.inelastic.input_detunings)
        if (!std::isfinite(d)) throw ConfigError("inelastic.input_detunings: must be finite");
    if (!(c.inelastic.half_span > 0) || !std::isfinite(c.inelastic.half_span))
        throw ConfigError("inelastic.half_span: must be positive");
    if (c.inelastic.points < 2) throw ConfigError("inelastic.points: must be >= 2");
    for (double j2 : c.table1.j2_values)
        if (!std::isfinite(j2)) throw ConfigError("table1.j2_values: must be finite");
    if (c.table1.m_cells < 1) throw ConfigError("table1.m_cells: must be >= 1");
    if (!(c.t_low >= 0 && c.t_low < c.t_high && c.t_high <= 1))
        throw ConfigError("thresholds: need 0 <= t_low < t_high <= 1");
}

struct Preset {
    std::string name;
    std::string description;
    ScenarioConfig config;
};

namespace detail {

inline SystemParams zigzag_params()
{
    SystemParams p;
    p.gamma_1d = 1.0;
    p.gamma_e = 0.1;
    p.omega_c = 2.0;
    p.delta_c = 0.0;
    p.j1 = 0.2;
    p.j2 = 1.6;
    p.k0d = std::numbers::pi / 2;
    p.a_over_d = 1.0;
    p.guided_kernel = GuidedKernel::Dissipative;
    return p;
}

inline SystemParams orthogonal_params()
{
    SystemParams p = zigzag_params();
    p.j1 = 3.0;
    p.j2 = 6.0;
    p.guided_kernel = GuidedKernel::Full;
    return p;
}

inline const char* kZigzagKernelNote =
    "zigzag lattices use the dissipative guided kernel (cos k0|dz|), which keeps their spectra "
    "symmetric in detuning; the conventional reference keeps the full kernel";

inline const char* kOmegaNote =
    "omega_c not listed for this scenario; omega_c = 2 carried over from the companion "
    "transmission scenario";

inline Preset make(std::string name, std::string description, SystemParams p,
                   std::vector<LatticeEntry> lattices, std::vector<std::string> notes,
                   std::vector<double> inputs = {})
{
    Preset out;
    out.name = name;
    out.description = description;
    out.config.preset = std::move(name);
    out.config.description = std::move(description);
    out.config.params = p;
    out.config.lattices = std::move(lattices);
    out.config.notes = std::move(notes);
    out.config.inelastic.input_detunings = std::move(inputs);
    return out;
}

}  // namespace detail

/// The eight frozen scenarios, in catalog order.
inline const std::vector<Preset>& list_presets()
{
    using detail::make;
    static const std::vector<Preset> catalog = [] {
        const LatticeEntry conv{"conventional", Geometry::Conventional, 2, 1, GuidedKernel::Full};
        const LatticeEntry zz3{"zigzag_m3", Geometry::Zigzag, 3, 2};
        const LatticeEntry zz5{"zigzag_m5", Geometry::Zigzag, 5, 2};
        const LatticeEntry or10{"orthogonal_m10", Geometry::Orthogonal, 10, 2};
        const LatticeEntry or20{"orthogonal_m20", Geometry::Orthogonal, 20, 2};
        const auto zp = detail::zigzag_params();
        const auto op = detail::orthogonal_params();
        const std::vector<double> inputs{0.0, 0.5, 1.0};

        std::vector<Preset> v;
        v.push_back(make("fig3", "transmission: conventional vs zigzag M=3 and M=5", zp,
                         {conv, zz3, zz5}, {detail::kZigzagKernelNote}));
        v.push_back(make("fig4", "two-photon inelastic spectra: conventional vs zigzag M=5", zp,
                         {conv, zz5}, {detail::kZigzagKernelNote}, inputs));
        v.push_back(make("fig5", "transmission: conventional vs orthogonal N=2, M=10 and M=20", op,
                         {conv, or10, or20}, {}));
        v.push_back(make("fig6", "two-photon inelastic spectra: conventional vs orthogonal N=2, M=10",
                         op, {conv, or10}, {detail::kOmegaNote}, inputs));
        v.push_back(make("fig7", "two-photon inelastic spectra: conventional vs orthogonal N=2, M=20",
                         op, {conv, or20}, {detail::kOmegaNote}, inputs));
        v.push_back(make("figB1", "susceptibility: conventional vs zigzag M=3 and M=5", zp,
                         {conv, zz3, zz5},
                         {detail::kZigzagKernelNote, detail::kOmegaNote,
                          "the zigzag curves labelled N=2 are the two-atom-cell zigzag lattices "
                          "with M=3 and M=5, identical to the fig3 lattices"}));
        v.push_back(make("figB2", "susceptibility: conventional vs orthogonal N=2, M=10 and M=20", op,
                         {conv, or10, or20}, {detail::kOmegaNote}));
        Preset t = make("table1", "zigzag window widths W' and W versus J2 at J1 = 0.2", zp, {},
                        {detail::kZigzagKernelNote,
                         "table1 sweep uses M=3 cells; the cell count is not stated for the table"});
        t.config.table1.j2_values = table1_j2_values();
        t.config.table1.m_cells = 3;
        v.push_back(std::move(t));
        return v;
    }();
    return catalog;
}

inline const Preset& find_preset(const std::string& name)
{
    for (const auto& p : list_presets())
        if (p.name == name) return p;
    throw ConfigError("preset: unknown preset '" + name + "'");
}

}  // namespace wgqed
