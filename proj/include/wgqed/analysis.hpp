#pragma once

// Spectral feature extraction: transparency/absorption windows, peak lists,
// zero crossings, and the J2 sweep of window widths.
//
// Band conventions (all widths in units of Gamma):
//   transparency window  maximal run with T >= t_high
//   absorption window    maximal run with T <= t_low
//   W    width of the transparency window containing delta_omega = 0
//   side first positive-side transparency window whose peak reaches
//        kSideWindowPeak; lower ones are partial recoveries inside an
//        absorption band
//   W'   hull of the absorption windows between the central and side windows
//        (to the grid edge if there is no side window)
//   W1   width of the side window
//   W2   gap between the central window and the side window
//   W3   = W
// Window edges are linearly interpolated between bracketing grid points.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "wgqed/lattice.hpp"
#include "wgqed/linear_response.hpp"
#include "wgqed/two_photon.hpp"

namespace wgqed {

inline constexpr double kSideWindowPeak = 0.8;

enum class BandKind { Transparency, Absorption };

inline std::string_view to_string(BandKind k)
{
    return k == BandKind::Transparency ? "transparency" : "absorption";
}

struct Band {
    double lo = 0.0;
    double hi = 0.0;
    BandKind kind = BandKind::Transparency;

    double width() const { return hi - lo; }
    bool contains(double x) const { return lo <= x && x <= hi; }
};

struct BandReport {
    std::vector<Band> windows;  ///< ordered by lo, non-overlapping
    std::optional<Band> central;
    std::optional<Band> adjacent_absorption;  ///< hull measured by W'
    std::optional<Band> side;                 ///< window measured by W1
    std::optional<double> w;
    std::optional<double> w_prime;
    std::optional<double> w1;
    std::optional<double> w2;
    std::optional<double> w3;

    std::size_t count(BandKind k) const
    {
        return static_cast<std::size_t>(
            std::count_if(windows.begin(), windows.end(), [k](const Band& b) { return b.kind == k; }));
    }
};

namespace detail {

inline double crossing(double x0, double y0, double x1, double y1, double level)
{
    if (y1 == y0) return 0.5 * (x0 + x1);
    return x0 + (level - y0) * (x1 - x0) / (y1 - y0);
}

template <class Pred>
void collect_runs(std::span<const double> x, std::span<const double> y, double level,
                  BandKind kind, Pred inside, std::vector<Band>& out)
{
    const std::size_t n = x.size();
    std::size_t i = 0;
    while (i < n) {
        if (!inside(y[i])) { ++i; continue; }
        std::size_t j = i;
        while (j + 1 < n && inside(y[j + 1])) ++j;
        const double lo = i == 0 ? x[0] : crossing(x[i - 1], y[i - 1], x[i], y[i], level);
        const double hi = j == n - 1 ? x[n - 1] : crossing(x[j], y[j], x[j + 1], y[j + 1], level);
        out.push_back({lo, hi, kind});
        i = j + 1;
    }
}

}  // namespace detail

inline BandReport extract_bands(std::span<const double> detunings,
                                std::span<const double> transmission,
                                double t_high = 0.5, double t_low = 0.1)
{
    if (!(t_low < t_high)) throw std::invalid_argument("thresholds: t_low must be below t_high");
    if (detunings.size() != transmission.size())
        throw std::invalid_argument("extract_bands: grid and series lengths differ");
    require_increasing(detunings);
    for (double t : transmission)
        if (!std::isfinite(t)) throw std::invalid_argument("extract_bands: series has singular points");

    BandReport r;
    detail::collect_runs(detunings, transmission, t_high, BandKind::Transparency,
                         [&](double t) { return t >= t_high; }, r.windows);
    detail::collect_runs(detunings, transmission, t_low, BandKind::Absorption,
                         [&](double t) { return t <= t_low; }, r.windows);
    std::sort(r.windows.begin(), r.windows.end(),
              [](const Band& a, const Band& b) { return a.lo < b.lo; });

    auto central = std::find_if(r.windows.begin(), r.windows.end(), [](const Band& b) {
        return b.kind == BandKind::Transparency && b.contains(0.0);
    });
    if (central == r.windows.end()) return r;
    r.central = *central;
    r.w = central->width();
    r.w3 = r.w;

    auto peak_in = [&](const Band& b) {
        double m = 0;
        for (std::size_t i = 0; i < detunings.size(); ++i)
            if (b.contains(detunings[i])) m = std::max(m, transmission[i]);
        return m;
    };
    std::optional<double> abs_lo, abs_hi;
    for (auto it = central + 1; it != r.windows.end(); ++it) {
        if (it->kind == BandKind::Transparency) {
            if (peak_in(*it) >= kSideWindowPeak) {
                r.side = *it;
                break;
            }
            continue;
        }
        if (!abs_lo) abs_lo = it->lo;
        abs_hi = it->hi;
    }
    if (abs_lo) {
        r.adjacent_absorption = Band{*abs_lo, *abs_hi, BandKind::Absorption};
        r.w_prime = *abs_hi - *abs_lo;
    }
    if (r.side) {
        r.w1 = r.side->width();
        r.w2 = r.side->lo - central->hi;
    }
    return r;
}

inline BandReport extract_bands(const SpectrumSeries& series, double t_high = 0.5, double t_low = 0.1)
{
    return extract_bands(series.detunings, series.transmission, t_high, t_low);
}

/// Relative variation (max - min) / max of y over grid points in [lo, hi].
inline double ripple(std::span<const double> x, std::span<const double> y, double lo, double hi)
{
    double mn = std::numeric_limits<double>::infinity();
    double mx = -mn;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < lo || x[i] > hi) continue;
        mn = std::min(mn, y[i]);
        mx = std::max(mx, y[i]);
    }
    if (!(mx > 0)) throw std::invalid_argument("ripple: empty or non-positive span");
    return (mx - mn) / mx;
}

/// Interpolated positions where y changes sign.
inline std::vector<double> zero_crossings(std::span<const double> x, std::span<const double> y)
{
    std::vector<double> out;
    for (std::size_t i = 1; i < x.size(); ++i) {
        if (y[i - 1] == 0.0) {
            out.push_back(x[i - 1]);
        } else if ((y[i - 1] < 0) != (y[i] < 0) && y[i] != 0.0) {
            out.push_back(detail::crossing(x[i - 1], y[i - 1], x[i], y[i], 0.0));
        }
    }
    if (!y.empty() && y.back() == 0.0) out.push_back(x.back());
    return out;
}

struct Peak {
    double nu = 0.0;
    double intensity = 0.0;
    double prominence = 0.0;
};

// Strict interior local maxima whose topographic prominence is at least
// min_prominence times the global maximum.
inline std::vector<Peak> find_peaks(std::span<const double> x, std::span<const double> y,
                                    double min_prominence = 0.05)
{
    if (x.size() != y.size()) throw std::invalid_argument("find_peaks: length mismatch");
    std::vector<Peak> out;
    const std::size_t n = y.size();
    if (n < 3) return out;
    const double top = *std::max_element(y.begin(), y.end());
    if (!(top > 0)) return out;

    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!(y[i] > y[i - 1] && y[i] > y[i + 1])) continue;
        double left = y[i];
        for (std::size_t k = i; k-- > 0;) {
            if (y[k] > y[i]) break;
            left = std::min(left, y[k]);
        }
        double right = y[i];
        for (std::size_t k = i + 1; k < n; ++k) {
            if (y[k] > y[i]) break;
            right = std::min(right, y[k]);
        }
        const double prom = y[i] - std::max(left, right);
        if (prom >= min_prominence * top) out.push_back({x[i], y[i], prom});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const Peak& a, const Peak& b) { return a.intensity > b.intensity; });
    return out;
}

inline std::vector<Peak> find_peaks(const TwoPhotonSpectrum& s, double min_prominence = 0.05)
{
    if (s.output_grid.empty()) throw std::invalid_argument("find_peaks: empty spectrum");
    return find_peaks(s.output_grid, s.intensity, min_prominence);
}

struct Table1Row {
    double j1 = 0.0;
    double j2 = 0.0;
    double w_prime = std::nan("");
    double w = std::nan("");
};

struct Table1Options {
    int m_cells = 3;
    double grid_min = -5.0;
    double grid_max = 5.0;
    int grid_points = 2001;
    double t_high = 0.5;
    double t_low = 0.1;
    unsigned threads = 1;
};

inline const std::vector<double>& table1_j2_values()
{
    static const std::vector<double> v{1.6, 2.0, 2.4, 2.8, 3.2, 3.6, 4.0};
    return v;
}

/// Zigzag window widths versus inter-cell coupling; base.j1 is kept.
inline std::vector<Table1Row> table1_sweep(std::span<const double> j2_values, const SystemParams& base,
                                           const Table1Options& opt = {})
{
    const auto grid = linspace(opt.grid_min, opt.grid_max, opt.grid_points);
    std::vector<Table1Row> rows;
    for (double j2 : j2_values) {
        SystemParams p = base;
        p.j2 = j2;
        const auto spec = build_zigzag(opt.m_cells, p);
        const auto series = sweep(spec, grid, opt.threads);
        if (series.has_singular()) throw NumericalError("table1_sweep: singular resolvent");
        const auto rep = extract_bands(series, opt.t_high, opt.t_low);
        Table1Row row{p.j1, j2};
        if (rep.w_prime) row.w_prime = *rep.w_prime;
        if (rep.w) row.w = *rep.w;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace wgqed
