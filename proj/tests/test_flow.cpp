#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "pancake/barriers.hpp"
#include "pancake/flow.hpp"
#include "pancake/shooter.hpp"

using namespace pancake;

namespace {

FlowConfig config_for(double spacing) {
    FlowConfig cfg;
    cfg.n = 3;
    cfg.spacing = spacing;
    cfg.pinch_eps = cfg.tip_eps = 4.0 * spacing;
    cfg.snapshot_stride = 0.05;
    cfg.max_time = 10.0;
    return cfg;
}

double measured_radius(const FlowState& s) {
    return 0.5 * (s.components.front().max_x() - s.components.front().min_x());
}

}  // namespace

TEST_CASE("velocity: cylinder interior rate is -(n-1)/u") {
    const ProfileGraph g = flat_profile(4.0, -1.0, 1.0, 0.05);
    for (std::size_t j : {std::size_t(1), g.size() / 2, g.size() - 2})
        CHECK(velocity(g, j, 3) == doctest::Approx(-2.0 / 4.0).epsilon(1e-12));
    // Open ends mirror.
    CHECK(velocity(g, 0, 3) == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("velocity: sphere top moves inward at the full mean curvature") {
    const double R = 2.0;
    const ProfileGraph g = semicircle_profile(R, 0.0, 0.005);
    std::size_t top = 0;
    for (std::size_t j = 0; j < g.size(); ++j)
        if (g.us[j] > g.us[top]) top = j;
    CHECK(velocity(g, top, 3) == doctest::Approx(-3.0 / R).epsilon(1e-4));
    // Axis endpoints slide inward at n * kappa_tip.
    CHECK(velocity(g, 0, 3) == doctest::Approx(3.0 / R).epsilon(1e-6));
    CHECK(velocity(g, g.size() - 1, 3) == doctest::Approx(-3.0 / R).epsilon(1e-6));
}

TEST_CASE("velocity: catenoid neck is stationary") {
    const ParamCurve cat = catenoid_profile(3, 1.0, 4.0, 4001);
    ProfileGraph g;
    g.closed_left = g.closed_right = false;
    for (const Vec2& p : cat.pts) {
        g.xs.push_back(p.x);
        g.us.push_back(p.r);
    }
    const std::size_t neck = g.size() / 2;
    // Discretization error only; the scale of each term is (n-1)/c = 2.
    CHECK(std::abs(velocity(g, neck, 3)) < 0.02);
}

TEST_CASE("step: a single step preserves the profile invariants") {
    const FlowConfig cfg = config_for(0.02);
    FlowState st;
    st.components.push_back(semicircle_profile(1.0, 0.0, cfg.spacing));
    const double dt = step(st, cfg);
    CHECK(dt > 0.0);
    CHECK(st.status == FlowStatus::running);
    for (const auto& g : st.components) CHECK(!g.invariant_violation());
}

TEST_CASE("evolve: sphere follows R(t) = sqrt(R0^2 - 2 n t)") {
    FlowConfig cfg = config_for(0.01);
    cfg.max_time = 1.0;
    const FlowTrace tr = evolve(semicircle_profile(5.0, 0.0, cfg.spacing), cfg, nullptr);
    const FlowState* s = tr.state_at(1.0);
    REQUIRE(s != nullptr);
    CHECK(measured_radius(*s) == doctest::Approx(std::sqrt(19.0)).epsilon(0.002));
}

TEST_CASE("evolve: cylinder follows u(t) = sqrt(u0^2 - 2(n-1) t)") {
    FlowConfig cfg = config_for(0.05);
    cfg.max_time = 1.0;
    const FlowTrace tr = evolve(flat_profile(10.0, -2.0, 2.0, cfg.spacing), cfg, nullptr);
    const FlowState* s = tr.state_at(1.0);
    REQUIRE(s != nullptr);
    const ProfileGraph& g = s->components.front();
    CHECK(g.us[g.size() / 2] == doctest::Approx(std::sqrt(96.0)).epsilon(0.002));
}

TEST_CASE("evolve: sphere extinction time") {
    FlowConfig cfg = config_for(0.005);
    cfg.max_time = 1.0;
    cfg.snapshot_stride = 0.01;
    const FlowTrace tr = evolve(semicircle_profile(1.0, 0.0, cfg.spacing), cfg, nullptr);
    REQUIRE(tr.extinction_time.has_value());
    CHECK(*tr.extinction_time == doctest::Approx(1.0 / 6.0).epsilon(0.02));
    CHECK(tr.has_event(EventKind::component_extinct));
    CHECK(tr.final_status() == FlowStatus::extinct);
}

TEST_CASE("evolve: convergence order on the sphere radius") {
    auto run_error = [](double h) {
        FlowConfig cfg = config_for(h);
        cfg.max_time = 0.12;
        cfg.snapshot_stride = 0.12;
        const FlowTrace tr = evolve(semicircle_profile(1.0, 0.0, h), cfg, nullptr);
        const FlowState* s = tr.state_at(0.12);
        REQUIRE(s != nullptr);
        return std::abs(measured_radius(*s) - std::sqrt(1.0 - 6.0 * 0.12));
    };
    const double coarse = run_error(0.02);
    const double fine = run_error(0.01);
    CHECK(fine * 3.5 <= coarse);
}

TEST_CASE("pinch: dumbbell splits within the shrinking-cylinder bound") {
    const double m0 = 0.2;
    FlowConfig cfg = config_for(0.0125);
    cfg.snapshot_stride = 0.002;
    cfg.max_time = 0.05;
    const ProfileGraph db = make_dumbbell(3.0, 1.0, m0, cfg.spacing);
    const double area_before = enclosed_area_above(db, 0.0);

    const FlowTrace tr = evolve(db, cfg, nullptr);
    REQUIRE(tr.has_event(EventKind::pinch));
    double t_pinch = 0.0;
    for (const auto& e : tr.events)
        if (e.kind == EventKind::pinch) {
            t_pinch = e.t;
            break;
        }
    CHECK(t_pinch <= m0 * m0 / (2.0 * 2.0) * 1.05);

    // Post-split contract: two valid components, area nearly unchanged.
    const FlowState* after = nullptr;
    for (const auto& s : tr.snapshots)
        if (s.t >= t_pinch && s.components.size() == 2) {
            after = &s;
            break;
        }
    REQUIRE(after != nullptr);
    for (const auto& g : after->components) CHECK(!g.invariant_violation());
    double area_after = 0.0;
    for (const auto& g : after->components) area_after += enclosed_area_above(g, 0.0);
    // The split itself removes at most ~pinch_eps^2 worth of area; allow the
    // flow's own shrinking between t=0 and the first post-split snapshot.
    const double flow_loss = (after->t) * 2.0 * M_PI * 10.0;
    CHECK(std::abs(area_before - area_after) <
          8.0 * cfg.pinch_eps * cfg.pinch_eps + flow_loss);
}

TEST_CASE("avoidance: disjoint spheres never approach") {
    FlowConfig cfg = config_for(0.02);
    cfg.max_time = 0.3;
    const FlowTrace a = evolve(semicircle_profile(2.0, -3.0, cfg.spacing), cfg, nullptr);
    const FlowTrace b = evolve(semicircle_profile(2.5, 3.0, cfg.spacing), cfg, nullptr);
    double prev = 0.0;
    bool first = true;
    for (const auto& sa : a.snapshots) {
        const FlowState* sb = b.state_at(sa.t);
        if (!sb || sa.components.empty() || sb->components.empty()) continue;
        const double d =
            min_distance(to_param(sa.components.front()), to_param(sb->components.front()));
        if (!first) CHECK(d >= prev - 2.0 * cfg.spacing);
        prev = d;
        first = false;
    }
    CHECK(!first);
}

TEST_CASE("sturm: intersections with an exact sphere solution never increase") {
    FlowConfig cfg = config_for(0.0125);
    cfg.snapshot_stride = 0.002;
    cfg.max_time = 0.06;
    const ProfileGraph db = make_dumbbell(3.0, 1.0, 0.2, cfg.spacing);
    const FlowTrace tr = evolve(db, cfg, nullptr);
    const BarrierCurve wall = sphere_barrier(4.5, 3, 0.0);  // encloses the dumbbell
    int prev = 1 << 20;
    bool first = true;
    for (const auto& s : tr.snapshots) {
        if (s.t >= wall.t_max) break;
        const ParamCurve w = wall.profile(s.t);
        int total = 0;
        for (const auto& g : s.components) total += count_intersections(g, w, cfg.spacing).crossings;
        if (!first) CHECK(total <= prev);
        prev = total;
        first = false;
    }
}

TEST_CASE("critical point totals never increase along a trace") {
    FlowConfig cfg = config_for(0.0125);
    cfg.snapshot_stride = 0.002;
    cfg.max_time = 0.06;
    const FlowTrace tr = evolve(make_dumbbell(3.0, 1.0, 0.2, cfg.spacing), cfg, nullptr);
    int prev = 1 << 20;
    bool first = true;
    for (const auto& s : tr.snapshots) {
        int total = 0;
        for (const auto& g : s.components) total += count_critical_points(g).total();
        if (!first) CHECK(total <= prev);
        prev = total;
        first = false;
    }
}

TEST_CASE("inscribed sphere bounds the extinction time from below") {
    FlowConfig cfg = config_for(0.01);
    cfg.max_time = 1.0;
    cfg.snapshot_stride = 0.01;
    const ProfileGraph g = semicircle_profile(1.0, 0.0, cfg.spacing);
    const double r0 = inscribed_axis_disk_radius(g);
    const FlowTrace tr = evolve(g, cfg, nullptr);
    REQUIRE(tr.extinction_time.has_value());
    CHECK(*tr.extinction_time >= r0 * r0 / (2.0 * 3) * 0.98);
}

TEST_CASE("flow config cross-field invariants") {
    FlowConfig cfg;
    cfg.spacing = 0.1;
    cfg.pinch_eps = 0.2;  // < 4 * spacing
    cfg.tip_eps = 0.4;
    CHECK_THROWS_AS(cfg.require_valid(), std::invalid_argument);
}

TEST_CASE("trace bookkeeping: event times are non-decreasing") {
    FlowConfig cfg = config_for(0.0125);
    cfg.max_time = 2.5;
    cfg.snapshot_stride = 0.05;
    const FlowTrace tr = evolve(make_dumbbell(3.0, 1.0, 0.2, cfg.spacing), cfg, nullptr);
    for (std::size_t k = 1; k < tr.events.size(); ++k)
        CHECK(tr.events[k].t >= tr.events[k - 1].t);
    for (std::size_t k = 1; k < tr.snapshots.size(); ++k)
        CHECK(tr.snapshots[k].t >= tr.snapshots[k - 1].t);
    // Extinction recorded once every component is gone.
    if (tr.final_status() == FlowStatus::extinct) CHECK(tr.extinction_time.has_value());
}
