#include "pancake/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pancake {

SeriesReport extract_series(const FlowTrace& trace, const std::vector<BarrierCurve>& barriers,
                            const std::vector<double>& c_values) {
    if (trace.snapshots.empty()) throw std::invalid_argument("extract_series: empty trace");
    SeriesReport rep;
    rep.c_values = c_values;
    for (const auto& b : barriers) rep.barrier_names.push_back(to_string(b.kind));
    rep.sturm.assign(barriers.size(), {});
    rep.areas.assign(c_values.size(), {});

    const double tol = std::max(trace.config.spacing, 1e-9);
    for (const auto& snap : trace.snapshots) {
        rep.times.push_back(snap.t);
        rep.neck.push_back(snap.neck_value());
        rep.max_height.push_back(snap.max_height());
        rep.girth.push_back(snap.girth());
        rep.width.push_back(snap.width());
        rep.component_counts.push_back(static_cast<int>(snap.components.size()));
        int mx = 0, mn = 0;
        for (const auto& g : snap.components) {
            const CriticalPoints cp = count_critical_points(g, flow_plateau_tol(trace.config));
            mx += cp.maxima;
            mn += cp.minima;
        }
        rep.maxima.push_back(mx);
        rep.minima.push_back(mn);

        for (std::size_t b = 0; b < barriers.size(); ++b) {
            std::optional<int> cell;
            if (snap.t >= barriers[b].t_min && snap.t < barriers[b].t_max) {
                try {
                    const ParamCurve wall = barriers[b].profile(snap.t);
                    int total = 0;
                    for (const auto& g : snap.components)
                        total += count_intersections(g, wall, tol).crossings;
                    cell = total;
                } catch (const std::exception&) {
                    cell.reset();  // overlap or lifespan edge: cell absent
                }
            }
            rep.sturm[b].push_back(cell);
        }
        for (std::size_t ci = 0; ci < c_values.size(); ++ci) {
            double area = 0.0;
            for (const auto& g : snap.components)
                if (g.closed_left && g.closed_right) area += enclosed_area_above(g, c_values[ci]);
            rep.areas[ci].push_back(area);
        }
    }

    // Centered discrete rates.
    rep.area_rates.assign(c_values.size(),
                          std::vector<double>(rep.times.size(),
                                              std::numeric_limits<double>::quiet_NaN()));
    for (std::size_t ci = 0; ci < c_values.size(); ++ci)
        for (std::size_t k = 1; k + 1 < rep.times.size(); ++k) {
            const double dt = rep.times[k + 1] - rep.times[k - 1];
            if (dt > 0.0)
                rep.area_rates[ci][k] = (rep.areas[ci][k + 1] - rep.areas[ci][k - 1]) / dt;
        }

    // Integer monotonicity laws.
    for (std::size_t b = 0; b < barriers.size(); ++b) {
        std::optional<int> prev;
        for (std::size_t k = 0; k < rep.times.size(); ++k) {
            const auto& cell = rep.sturm[b][k];
            if (cell && prev && *cell > *prev)
                rep.violations.push_back({rep.times[k],
                                          "sturm non-increasing (" + rep.barrier_names[b] + ")",
                                          static_cast<double>(*cell - *prev)});
            if (cell) prev = cell;
        }
    }
    for (std::size_t k = 1; k < rep.times.size(); ++k) {
        const int before = rep.maxima[k - 1] + rep.minima[k - 1];
        const int after = rep.maxima[k] + rep.minima[k];
        if (after > before)
            rep.violations.push_back({rep.times[k], "critical points non-increasing",
                                      static_cast<double>(after - before)});
    }
    return rep;
}

AreaRateReport area_rate_check(const FlowTrace& trace, double c, double W_slab, int n) {
    if (!(c > 0.0)) throw std::invalid_argument("area_rate_check: c must be positive");
    if (trace.snapshots.size() < 3)
        throw std::invalid_argument("area_rate_check: trace too short for centered rates");

    const Region above = Region::above(c);
    std::vector<double> areas, times;
    std::vector<int> pieces;
    for (const auto& snap : trace.snapshots) {
        if (snap.width() > W_slab * (1.0 + 1e-9))
            throw std::runtime_error("area_rate_check: estimate inapplicable: trace leaves the slab");
        double a = 0.0;
        int k = 0;
        for (const auto& g : snap.components) {
            if (g.closed_left && g.closed_right) a += enclosed_area_above(g, c);
            for (const auto& piece : clip_to_window(to_param(g), above)) {
                ++k;
                if (total_turning(piece) >= 2.0 * M_PI)
                    throw std::runtime_error(
                        "area_rate_check: estimate inapplicable: clipped component with turning "
                        "number >= 1");
            }
        }
        areas.push_back(a);
        times.push_back(snap.t);
        pieces.push_back(k);
    }

    AreaRateReport rep;
    rep.pass = true;
    rep.worst_margin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k + 1 < times.size(); ++k) {
        const double dt = times[k + 1] - times[k - 1];
        if (!(dt > 0.0)) continue;
        const double rate = std::abs((areas[k + 1] - areas[k - 1]) / dt);
        const double C = (n - 1) * W_slab * std::max(pieces[k], 1) / c;
        const double bound = (2.0 * M_PI + C) * 1.10;  // 10% discretization slack
        rep.times.push_back(times[k]);
        rep.rates.push_back(rate);
        rep.bounds.push_back(bound);
        rep.worst_rate = std::max(rep.worst_rate, rate);
        rep.bound = std::max(rep.bound, 2.0 * M_PI + C);
        rep.worst_margin = std::min(rep.worst_margin, bound - rate);
        if (rate > bound) rep.pass = false;
    }
    return rep;
}

NeckBoundednessReport neck_boundedness_check(const std::vector<const ShootResult*>& results,
                                             double band_lo, double band_hi) {
    NeckBoundednessReport rep;
    rep.band_lo = band_lo;
    rep.band_hi = band_hi;
    rep.pass = true;
    for (const ShootResult* r : results) {
        if (!r || !r->recentered_trace)
            throw std::invalid_argument("neck_boundedness_check: result without recentered trace");
        NeckBoundednessReport::Entry e;
        e.s = r->s;
        e.m_min = std::numeric_limits<double>::infinity();
        e.m_max = -std::numeric_limits<double>::infinity();
        for (const auto& snap : r->recentered_trace->snapshots) {
            if (snap.t > 1e-9) continue;  // recentered span only
            const double m = snap.neck_value();
            e.m_min = std::min(e.m_min, m);
            e.m_max = std::max(e.m_max, m);
        }
        e.in_band = e.m_min >= band_lo && e.m_max <= band_hi;
        if (!e.in_band) rep.pass = false;
        rep.entries.push_back(e);
    }
    if (rep.entries.size() >= 2) {
        double lo = -std::numeric_limits<double>::infinity();
        double hi = std::numeric_limits<double>::infinity();
        for (const auto& e : rep.entries) {
            lo = std::max(lo, e.m_min);
            hi = std::min(hi, e.m_max);
        }
        rep.common_span = std::make_pair(lo, hi);
    }
    return rep;
}

double girth_survival_margin(const FlowTrace& trace, double r0, int n, double slack_frac) {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& snap : trace.snapshots) {
        const double lower = r0 * r0 - 2.0 * n * snap.t;
        if (lower <= 0.0) break;  // comparison sphere is gone
        const double margin = snap.girth() * snap.girth() - lower * (1.0 - slack_frac);
        worst = std::min(worst, margin);
    }
    return worst;
}

}  // namespace pancake
