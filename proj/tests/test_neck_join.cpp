#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "pancake/neck_join.hpp"

using namespace pancake;

namespace {

NeckJoinSpec desk_spec() {
    NeckJoinSpec js;
    js.pancake.girth = 20.0;
    js.pancake.width = 2.0 * M_PI;
    js.spacing = 0.04;
    return js;
}

}  // namespace

TEST_CASE("rho_floor: the arc touches the axis there") {
    NeckJoinSpec js = desk_spec();
    const double floor = rho_floor(js);
    CHECK(std::abs(neck_minimum_for_rho(js, floor)) < 1e-8);
    CHECK(neck_minimum_for_rho(js, floor + 0.1) > 0.0);
    // Independent oracle: bisection on the geometric construction with a
    // separate starting bracket.
    double lo = 0.01, hi = js.pancake.girth * 0.999;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (neck_minimum_for_rho(js, mid) < 0.0 ? lo : hi) = mid;
    }
    CHECK(floor == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-9));
}

TEST_CASE("join: symmetry and tangency of the splice") {
    NeckJoinSpec js = desk_spec();
    js.rho = 0.5 * (rho_floor(js) + js.pancake.girth);
    const JoinedProfile jp = join(js);
    CHECK(jp.tangent_mismatch < 1e-9);
    double worst = 0.0;
    for (std::size_t k = 0; k < jp.curve.size(); ++k) {
        const std::size_t k2 = jp.curve.size() - 1 - k;
        worst = std::max(worst, std::abs(jp.curve.xs[k] + jp.curve.xs[k2]));
        worst = std::max(worst, std::abs(jp.curve.us[k] - jp.curve.us[k2]));
    }
    CHECK(worst < 1e-12 * js.pancake.girth);
    CHECK(jp.f_m_x_lo == doctest::Approx(-jp.f_m_x_hi));
}

TEST_CASE("join: requested neck minima are achieved and nested") {
    NeckJoinSpec js = desk_spec();
    JoinedProfile prev;
    bool have_prev = false;
    for (double m : {0.5, 1.0, 1.5}) {
        NeckJoinSpec j2 = js;
        j2.m = m;
        const JoinedProfile jp = join(j2);
        CHECK(std::abs(jp.m_achieved - m) < 1e-8);
        CHECK(*jp.curve.height_at(0.0) == doctest::Approx(jp.m_achieved).epsilon(1e-12));
        const CriticalPoints cp = count_critical_points(jp.curve);
        CHECK(cp.maxima == 2);
        CHECK(cp.minima == 1);
        if (have_prev) {
            CHECK(nesting_check(prev, jp));   // smaller m inside larger m
            CHECK(!nesting_check(jp, prev));  // and not the other way round
        }
        prev = jp;
        have_prev = true;
    }
}

TEST_CASE("join: a curve nests in itself") {
    NeckJoinSpec js = desk_spec();
    js.m = 1.0;
    const JoinedProfile jp = join(js);
    CHECK(nesting_check(jp, jp));
}

TEST_CASE("join: achieved minimum is strictly increasing in rho") {
    const NeckJoinSpec js = desk_spec();
    const double floor = rho_floor(js);
    double prev = 0.0;
    for (int k = 1; k <= 24; ++k) {
        const double rho = floor + (js.pancake.girth * 0.999 - floor) * k / 24.0;
        const double m = neck_minimum_for_rho(js, rho);
        CHECK(m > prev);
        prev = m;
    }
}

TEST_CASE("join: arc curvature exceeds the cut-boundary curvature (side regime)") {
    NeckJoinSpec js = desk_spec();
    for (double m : {0.5, 2.0, 6.0}) {
        NeckJoinSpec j2 = js;
        j2.m = m;
        const JoinedProfile jp = join(j2);
        // Side cuts land on the near-straight pancake wall (curvature ~ 0);
        // the neck arc's curvature 1/R is strictly larger.
        CHECK(jp.rho < js.pancake.girth - js.pancake.width / 2.0);
        CHECK(1.0 / jp.arc_radius > 1e-6);
    }
}

TEST_CASE("join: both pancake regions lie inside the joined region") {
    NeckJoinSpec js = desk_spec();
    js.m = 1.5;
    const JoinedProfile jp = join(js);
    const double tol = 2.0 * js.spacing;
    for (double cx : {-(js.gap_half + js.pancake.width / 2.0),
                      js.gap_half + js.pancake.width / 2.0}) {
        const ProfileGraph cake = make_pancake(js.pancake, cx, js.spacing);
        for (std::size_t k = 0; k < cake.size(); k += 7)
            CHECK(inside_profile_region(jp.curve, cake.node(k), tol));
    }
}

TEST_CASE("join: m out of range names the valid interval") {
    NeckJoinSpec js = desk_spec();
    js.m = -1.0;
    CHECK_THROWS_WITH_AS(join(js), doctest::Contains("valid interval"), std::invalid_argument);
    js.m = 25.0;
    CHECK_THROWS_AS(join(js), std::invalid_argument);
    js.m.reset();
    js.rho = 0.01;  // below the floor
    CHECK_THROWS_AS(join(js), std::invalid_argument);
}

TEST_CASE("join: spec validation") {
    NeckJoinSpec js = desk_spec();
    CHECK_THROWS_AS(join(js), std::invalid_argument);  // neither m nor rho
    js.m = 1.0;
    js.rho = 2.0;
    CHECK_THROWS_AS(join(js), std::invalid_argument);  // both
}

TEST_CASE("join: grim-reaper pancakes glue as well") {
    NeckJoinSpec js = desk_spec();
    js.pancake.cap_style = CapStyle::grim_reaper;
    js.m = 1.0;
    const JoinedProfile jp = join(js);
    CHECK(std::abs(jp.m_achieved - 1.0) < 1e-8);
    const CriticalPoints cp = count_critical_points(jp.curve);
    CHECK(cp.maxima == 2);
    CHECK(cp.minima == 1);
    CHECK(jp.tangent_mismatch < 1e-9);
}

TEST_CASE("join: cap-region cuts (large m) still splice tangentially") {
    NeckJoinSpec js = desk_spec();
    js.m = 18.0;
    const JoinedProfile jp = join(js);
    CHECK(jp.rho > js.pancake.girth - js.pancake.width / 2.0);
    CHECK(std::abs(jp.m_achieved - 18.0) < 1e-8);
    CHECK(jp.tangent_mismatch < 1e-9);
    const CriticalPoints cp = count_critical_points(jp.curve);
    CHECK(cp.maxima == 2);
    CHECK(cp.minima == 1);
}
