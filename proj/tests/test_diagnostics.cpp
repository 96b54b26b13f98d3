#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "pancake/diagnostics.hpp"

using namespace pancake;

namespace {

FlowTrace sphere_trace(double R0, double spacing, double t_end, double stride) {
    FlowConfig cfg;
    cfg.n = 3;
    cfg.spacing = spacing;
    cfg.pinch_eps = cfg.tip_eps = 4.0 * spacing;
    cfg.max_time = t_end;
    cfg.snapshot_stride = stride;
    return evolve(semicircle_profile(R0, 0.0, spacing), cfg, nullptr);
}

}  // namespace

TEST_CASE("extract_series: sphere trace matches the exact law") {
    const FlowTrace tr = sphere_trace(3.0, 0.02, 0.5, 0.05);
    const SeriesReport rep = extract_series(tr, {}, {});
    REQUIRE(rep.times.size() == tr.snapshots.size());
    for (std::size_t k = 0; k < rep.times.size(); ++k) {
        const double exact = shrinking_sphere_radius(3.0, 3, rep.times[k]);
        CHECK(rep.max_height[k] == doctest::Approx(exact).epsilon(0.005));
        CHECK(rep.girth[k] == rep.max_height[k]);
    }
    CHECK(rep.violations.empty());
}

TEST_CASE("extract_series: dumbbell minima vanish at the split") {
    FlowConfig cfg;
    cfg.n = 3;
    cfg.spacing = 0.0125;
    cfg.pinch_eps = cfg.tip_eps = 0.05;
    cfg.max_time = 0.06;
    cfg.snapshot_stride = 0.002;
    const FlowTrace tr = evolve(make_dumbbell(3.0, 1.0, 0.2, cfg.spacing), cfg, nullptr);
    REQUIRE(tr.has_event(EventKind::split));
    double t_split = 0.0;
    for (const auto& e : tr.events)
        if (e.kind == EventKind::split) t_split = e.t;

    const SeriesReport rep = extract_series(tr, {}, {});
    for (std::size_t k = 0; k < rep.times.size(); ++k) {
        if (rep.times[k] < t_split) {
            CHECK(rep.minima[k] == 1);
            CHECK(rep.component_counts[k] == 1);
        } else if (rep.times[k] > t_split) {
            CHECK(rep.minima[k] == 0);
            CHECK(rep.component_counts[k] == 2);
        }
    }
    CHECK(rep.violations.empty());
    // Post-pinch neck convention: m(t) = 0 once nothing spans x = 0.
    CHECK(rep.neck.back() == 0.0);
}

TEST_CASE("extract_series: sturm counts against a sphere barrier are recorded") {
    const FlowTrace tr = sphere_trace(2.0, 0.02, 0.3, 0.05);
    const std::vector<BarrierCurve> barriers{sphere_barrier(4.0, 3, 0.0)};
    const SeriesReport rep = extract_series(tr, barriers, {});
    REQUIRE(rep.sturm.size() == 1);
    std::optional<int> prev;
    for (const auto& cell : rep.sturm[0]) {
        REQUIRE(cell.has_value());
        CHECK(*cell == 0);  // nested, disjoint
        prev = cell;
    }
    CHECK(rep.violations.empty());
}

TEST_CASE("area_rate_check: sphere rates stay under the bound") {
    const FlowTrace tr = sphere_trace(3.0, 0.02, 0.6, 0.02);
    const double c = 1.0;
    const AreaRateReport rep = area_rate_check(tr, c, 6.2, 3);
    CHECK(rep.pass);
    REQUIRE(!rep.rates.empty());

    // Exact rate of the circular-segment area: |dA/dt| = 2 n acos(c/R).
    const double exact0 = 2.0 * 3.0 * std::acos(c / 3.0);
    CHECK(rep.rates.front() == doctest::Approx(exact0).epsilon(0.05));
    CHECK(exact0 < rep.bound);
}

TEST_CASE("area_rate_check: turning-number precondition") {
    // A wiggly graph accumulating more than a full turn inside D_c.
    ProfileGraph wiggle;
    wiggle.closed_left = wiggle.closed_right = false;
    for (int k = 0; k <= 400; ++k) {
        const double x = -2.0 + 4.0 * k / 400.0;
        wiggle.xs.push_back(x);
        wiggle.us.push_back(2.0 + 0.9 * std::sin(8.0 * x));
    }
    FlowTrace fake;
    fake.config.n = 3;
    fake.config.spacing = 0.01;
    FlowState s;
    s.components.push_back(wiggle);
    for (double t : {0.0, 0.1, 0.2}) {
        s.t = t;
        fake.snapshots.push_back(s);
    }
    CHECK_THROWS_WITH_AS(area_rate_check(fake, 0.5, 10.0, 3),
                         doctest::Contains("estimate inapplicable"), std::runtime_error);
}

TEST_CASE("area_rate_check: slab precondition") {
    const FlowTrace tr = sphere_trace(2.0, 0.02, 0.2, 0.05);
    CHECK_THROWS_AS(area_rate_check(tr, 0.5, 1.0, 3), std::runtime_error);
}

TEST_CASE("neck boundedness: vacuous band always passes") {
    ShootResult r;
    r.s = -10.0;
    r.recentered_trace = sphere_trace(2.0, 0.02, 0.3, 0.05);
    const auto rep = neck_boundedness_check({&r}, 0.0, 1e18);
    CHECK(rep.pass);
    REQUIRE(rep.entries.size() == 1);
    CHECK(!rep.common_span.has_value());  // single result: comparison empty
}

TEST_CASE("neck boundedness: two results produce a common span") {
    ShootResult a, b;
    a.s = -5.0;
    b.s = -10.0;
    a.recentered_trace = sphere_trace(2.0, 0.02, 0.3, 0.05);
    b.recentered_trace = sphere_trace(2.5, 0.02, 0.3, 0.05);
    const auto rep = neck_boundedness_check({&a, &b}, 0.0, 1e18);
    CHECK(rep.entries.size() == 2);
    CHECK(rep.common_span.has_value());
}

TEST_CASE("girth survival margin: sphere against its own law") {
    const FlowTrace tr = sphere_trace(1.0, 0.01, 0.15, 0.01);
    CHECK(girth_survival_margin(tr, 1.0, 3) >= 0.0);
}
