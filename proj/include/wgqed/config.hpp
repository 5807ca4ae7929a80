#pragma once

// JSON scenario files. Every object is checked for unknown keys; all errors
// are ConfigError with a dotted path to the offending field.
//
//   {
//     "preset": "fig3",                    // optional base scenario
//     "params": {"gamma_1d": 1, "gamma_e": 0.1, "omega_c": 2, "delta_c": 0,
//                "j1": 0.2, "j2": 1.6, "k0d": 1.5707963267948966,
//                "a_over_d": 1, "guided_kernel": "dissipative"},
//     "lattices": [{"label": "zz5", "geometry": "zigzag", "m_cells": 5, "n_per_cell": 2,
//                   "guided_kernel": "dissipative"}],     // kernel optional per lattice
//     "grid": {"min": -5, "max": 5, "points": 2001},
//     "inelastic": {"input_detunings": [0, 0.5], "half_span": 5, "points": 401},
//     "table1": {"j2_values": [1.6, 2.0], "m_cells": 3},
//     "thresholds": {"t_high": 0.5, "t_low": 0.1},
//     "output_dir": "out", "threads": 1, "plots": false
//   }
//
// "params" entries override the preset field by field; "lattices" replaces
// the preset's list.

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include <json.hpp>

#include "wgqed/lattice.hpp"
#include "wgqed/presets.hpp"

namespace wgqed {

namespace detail {

using json = nlohmann::json;

inline void reject_unknown(const json& obj, const std::string& path,
                           std::initializer_list<const char*> allowed)
{
    if (!obj.is_object()) throw ConfigError(path + ": expected an object");
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw ConfigError((path.empty() ? key : path + "." + key) + ": unknown key");
    }
}

inline std::string join(const std::string& path, const char* key)
{
    return path.empty() ? std::string(key) : path + "." + key;
}

inline void read(const json& obj, const std::string& path, const char* key, double& out)
{
    if (!obj.contains(key)) return;
    const auto& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(join(path, key) + ": expected a number");
    out = v.get<double>();
}

inline void read(const json& obj, const std::string& path, const char* key, int& out)
{
    if (!obj.contains(key)) return;
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) throw ConfigError(join(path, key) + ": expected an integer");
    out = v.get<int>();
}

inline void read(const json& obj, const std::string& path, const char* key, unsigned& out)
{
    if (!obj.contains(key)) return;
    const auto& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0)
        throw ConfigError(join(path, key) + ": expected a non-negative integer");
    out = v.get<unsigned>();
}

inline void read(const json& obj, const std::string& path, const char* key, bool& out)
{
    if (!obj.contains(key)) return;
    const auto& v = obj.at(key);
    if (!v.is_boolean()) throw ConfigError(join(path, key) + ": expected true or false");
    out = v.get<bool>();
}

inline void read(const json& obj, const std::string& path, const char* key, std::string& out)
{
    if (!obj.contains(key)) return;
    const auto& v = obj.at(key);
    if (!v.is_string()) throw ConfigError(join(path, key) + ": expected a string");
    out = v.get<std::string>();
}

inline void read(const json& obj, const std::string& path, const char* key, std::vector<double>& out)
{
    if (!obj.contains(key)) return;
    const auto& v = obj.at(key);
    if (!v.is_array()) throw ConfigError(join(path, key) + ": expected an array of numbers");
    out.clear();
    for (const auto& x : v) {
        if (!x.is_number()) throw ConfigError(join(path, key) + ": expected an array of numbers");
        out.push_back(x.get<double>());
    }
}

template <class T, class Parse>
void read_enum(const json& obj, const std::string& path, const char* key, T& out, Parse parse)
{
    std::string s;
    if (!obj.contains(key)) return;
    read(obj, path, key, s);
    try {
        out = parse(s);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(join(path, key) + ": " + e.what());
    }
}

inline void read_params(const json& obj, SystemParams& p)
{
    const std::string path = "params";
    reject_unknown(obj, path, {"gamma_1d", "gamma_e", "omega_c", "delta_c", "j1", "j2", "k0d",
                               "a_over_d", "guided_kernel"});
    read(obj, path, "gamma_1d", p.gamma_1d);
    read(obj, path, "gamma_e", p.gamma_e);
    read(obj, path, "omega_c", p.omega_c);
    read(obj, path, "delta_c", p.delta_c);
    read(obj, path, "j1", p.j1);
    read(obj, path, "j2", p.j2);
    read(obj, path, "k0d", p.k0d);
    read(obj, path, "a_over_d", p.a_over_d);
    read_enum(obj, path, "guided_kernel", p.guided_kernel, parse_guided_kernel);
}

inline LatticeEntry read_lattice(const json& obj, const std::string& path)
{
    reject_unknown(obj, path, {"label", "geometry", "m_cells", "n_per_cell", "guided_kernel"});
    if (!obj.contains("geometry")) throw ConfigError(path + ".geometry: required");
    LatticeEntry e;
    read_enum(obj, path, "geometry", e.geometry, parse_geometry);
    e.m_cells = e.geometry == Geometry::Conventional ? 2 : 1;
    e.n_per_cell = e.geometry == Geometry::Zigzag ? 2 : 1;
    e.label = std::string(to_string(e.geometry));
    read(obj, path, "label", e.label);
    read(obj, path, "m_cells", e.m_cells);
    read(obj, path, "n_per_cell", e.n_per_cell);
    if (obj.contains("guided_kernel")) {
        GuidedKernel k{};
        read_enum(obj, path, "guided_kernel", k, parse_guided_kernel);
        e.guided_kernel = k;
    }
    return e;
}

}  // namespace detail

/// Resolves a parsed JSON document into a validated scenario.
inline ScenarioConfig config_from_json(const nlohmann::json& doc)
{
    using namespace detail;
    reject_unknown(doc, "", {"preset", "params", "lattices", "grid", "inelastic", "table1",
                             "thresholds", "output_dir", "threads", "plots"});
    ScenarioConfig c;
    if (doc.contains("preset")) {
        std::string name;
        read(doc, "", "preset", name);
        c = find_preset(name).config;
    }
    if (doc.contains("params")) read_params(doc.at("params"), c.params);
    if (doc.contains("lattices")) {
        const auto& arr = doc.at("lattices");
        if (!arr.is_array()) throw ConfigError("lattices: expected an array");
        c.lattices.clear();
        for (std::size_t i = 0; i < arr.size(); ++i)
            c.lattices.push_back(read_lattice(arr[i], "lattices[" + std::to_string(i) + "]"));
    }
    if (doc.contains("grid")) {
        const auto& g = doc.at("grid");
        reject_unknown(g, "grid", {"min", "max", "points"});
        read(g, "grid", "min", c.grid.min);
        read(g, "grid", "max", c.grid.max);
        read(g, "grid", "points", c.grid.points);
    }
    if (doc.contains("inelastic")) {
        const auto& g = doc.at("inelastic");
        reject_unknown(g, "inelastic", {"input_detunings", "half_span", "points"});
        read(g, "inelastic", "input_detunings", c.inelastic.input_detunings);
        read(g, "inelastic", "half_span", c.inelastic.half_span);
        read(g, "inelastic", "points", c.inelastic.points);
    }
    if (doc.contains("table1")) {
        const auto& g = doc.at("table1");
        reject_unknown(g, "table1", {"j2_values", "m_cells"});
        read(g, "table1", "j2_values", c.table1.j2_values);
        read(g, "table1", "m_cells", c.table1.m_cells);
    }
    if (doc.contains("thresholds")) {
        const auto& g = doc.at("thresholds");
        reject_unknown(g, "thresholds", {"t_high", "t_low"});
        read(g, "thresholds", "t_high", c.t_high);
        read(g, "thresholds", "t_low", c.t_low);
    }
    std::string out;
    read(doc, "", "output_dir", out);
    if (!out.empty()) c.output_dir = out;
    read(doc, "", "threads", c.threads);
    read(doc, "", "plots", c.plots);
    validate(c);
    return c;
}

/// A non-empty `preset` is used as the base when the document names none; a
/// document naming a different preset is an error.
inline ScenarioConfig parse_config(const std::string& text, const std::string& preset = "")
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (!preset.empty() && doc.is_object()) {
        if (!doc.contains("preset"))
            doc["preset"] = preset;
        else if (doc["preset"] != preset)
            throw ConfigError("preset: file names '" + doc["preset"].dump() + "', flag names '" + preset + "'");
    }
    return config_from_json(doc);
}

inline ScenarioConfig load_config(const std::filesystem::path& file, const std::string& preset = "")
{
    std::ifstream in(file);
    if (!in) throw ConfigError("config: cannot open " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), preset);
}

}  // namespace wgqed
