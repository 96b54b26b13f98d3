#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pancake/barriers.hpp"
#include "pancake/flow.hpp"
#include "pancake/shooter.hpp"

namespace pancake {

/// Per-snapshot series of the laws a completed trace must respect.
struct SeriesReport {
    std::vector<double> times;
    std::vector<double> neck;        // m(t): height over x = 0, 0 post-pinch
    std::vector<double> max_height;  // M(t)
    std::vector<double> girth;       // max r
    std::vector<double> width;       // x-extent
    std::vector<int> maxima, minima;
    std::vector<int> component_counts;

    std::vector<std::string> barrier_names;
    std::vector<std::vector<std::optional<int>>> sturm;  // [barrier][time]

    std::vector<double> c_values;
    std::vector<std::vector<double>> areas;       // [c][time]
    std::vector<std::vector<double>> area_rates;  // centered differences, NaN at the ends

    struct Violation {
        double t = 0.0;
        std::string law;
        double magnitude = 0.0;
    };
    std::vector<Violation> violations;
};

/// Computes all series at snapshot times, Sturm counts against each
/// barrier's time-matched profile, and lists violations of the two integer
/// monotonicity laws (intersection counts and critical-point totals must
/// be non-increasing).
SeriesReport extract_series(const FlowTrace& trace, const std::vector<BarrierCurve>& barriers,
                            const std::vector<double>& c_values);

struct AreaRateReport {
    bool pass = false;
    double bound = 0.0;        // 2*pi + C_{c,W} (per snapshot count of clipped pieces, worst case)
    double worst_rate = 0.0;   // max |dA/dt| observed
    double worst_margin = 0.0; // bound * (1 + slack) - worst_rate
    std::vector<double> times;
    std::vector<double> rates;
    std::vector<double> bounds;  // per-time bound including the component count
};

/// Discrete rates of the area above r = c against the bound
/// 2*pi + (n-1) * W_slab * (clipped components)/c, with 10% slack.
/// Preconditions: the trace stays inside a slab of width W_slab and every
/// clipped component has turning number < 1 (total curvature / 2*pi).
AreaRateReport area_rate_check(const FlowTrace& trace, double c, double W_slab, int n);

struct NeckBoundednessReport {
    struct Entry {
        double s = 0.0;
        double m_min = 0.0;
        double m_max = 0.0;
        bool in_band = false;
    };
    std::vector<Entry> entries;
    double band_lo = 0.0, band_hi = 0.0;
    // Intersection of the observed spans; empty unless >= 2 results.
    std::optional<std::pair<double, double>> common_span;
    bool pass = false;
};

/// Min/max of the recentered neck series m(t), t <= 0, per result; passes
/// iff every span lies inside the band.
NeckBoundednessReport neck_boundedness_check(const std::vector<const ShootResult*>& results,
                                             double band_lo, double band_hi);

/// Lower bound girth(t)^2 >= r0^2 - 2 n t - slack for a trace whose initial
/// region contains an axis-centered sphere of radius r0. Returns the worst
/// signed margin (negative = violated).
double girth_survival_margin(const FlowTrace& trace, double r0, int n, double slack_frac = 0.02);

}  // namespace pancake
