#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "pancake/barriers.hpp"

using namespace pancake;

namespace {

// Closed form for the catenoid half-width by the Beta function:
// Int_1^inf ds / sqrt(s^{2(n-1)} - 1) = B(1/2 - 1/(2(n-1)), 1/2) / (2(n-1)).
double half_width_oracle(int n, double c) {
    const double p = 0.5 - 0.5 / (n - 1);
    const double beta = std::tgamma(p) * std::tgamma(0.5) / std::tgamma(p + 0.5);
    return c * beta / (2.0 * (n - 1));
}

}  // namespace

TEST_CASE("catenoid half-width against the Beta-function oracle") {
    CHECK(catenoid_half_width(3, 1.0) == doctest::Approx(half_width_oracle(3, 1.0)).epsilon(1e-10));
    CHECK(catenoid_half_width(3, 1.0) == doctest::Approx(1.31103).epsilon(1e-4));
    CHECK(catenoid_half_width(4, 1.0) == doctest::Approx(half_width_oracle(4, 1.0)).epsilon(1e-10));
}

TEST_CASE("catenoid half-width scales linearly in the neck radius") {
    CHECK(catenoid_half_width(3, 2.0) ==
          doctest::Approx(2.0 * catenoid_half_width(3, 1.0)).epsilon(1e-12));
}

TEST_CASE("higher-dimensional catenoids are narrower") {
    CHECK(catenoid_half_width(4, 1.0) < catenoid_half_width(3, 1.0));
    CHECK(half_width_oracle(4, 1.0) < half_width_oracle(3, 1.0));
}

TEST_CASE("catenoid n = 2 is rejected: entire, no slab") {
    CHECK_THROWS_WITH_AS(catenoid_profile(2, 1.0, 5.0), doctest::Contains("entire"),
                         std::invalid_argument);
    CHECK_THROWS_AS(catenoid_half_width(2, 1.0), std::invalid_argument);
}

TEST_CASE("catenoid profile: neck node, symmetry, asymptotic width") {
    const ParamCurve c = catenoid_profile(3, 1.0, 8.0, 4001);
    const std::size_t mid = c.size() / 2;
    CHECK(c.pts[mid].x == doctest::Approx(0.0));
    CHECK(c.pts[mid].r == doctest::Approx(1.0));
    for (std::size_t k = 0; k < c.size(); ++k) {
        CHECK(c.pts[k].x == doctest::Approx(-c.pts[c.size() - 1 - k].x).epsilon(1e-12));
        CHECK(c.pts[k].r == doctest::Approx(c.pts[c.size() - 1 - k].r).epsilon(1e-12));
    }
    CHECK(c.pts.back().x < catenoid_half_width(3, 1.0));
}

TEST_CASE("catenoid has zero reduced-flow speed") {
    const ParamCurve c = catenoid_profile(3, 1.0, 6.0, 10001);
    CHECK(reduced_speed_residual_sup(c, 3) < 1e-6);
}

TEST_CASE("shrinking sphere and cylinder laws") {
    CHECK(shrinking_sphere_radius(1.0, 3, 1.0 / 6.0) == doctest::Approx(0.0));
    CHECK(shrinking_sphere_radius(5.0, 3, 1.0) == doctest::Approx(std::sqrt(19.0)));
    CHECK(shrinking_cylinder_radius(10.0, 3, 1.0) == doctest::Approx(std::sqrt(96.0)));
    CHECK_THROWS_AS(shrinking_sphere_radius(1.0, 3, 0.2), std::domain_error);
    CHECK_THROWS_AS(shrinking_cylinder_radius(1.0, 3, 0.3), std::domain_error);
}

TEST_CASE("sphere lifespan is quadratic in the initial radius") {
    const BarrierCurve b1 = sphere_barrier(1.0, 3);
    const BarrierCurve b2 = sphere_barrier(2.0, 3);
    CHECK(b2.t_max == doctest::Approx(4.0 * b1.t_max));
}

TEST_CASE("grim reaper translates at speed 1/scale") {
    const double scale = 0.1;
    const ParamCurve p0 = grim_rotation_profile(scale, 1.0, 0.0, 30.0);
    const ParamCurve p1 = grim_rotation_profile(scale, 1.0, 1.0, 30.0 + 10.0);
    // Same arc-length sampling of the same shape, shifted by t/scale = 10.
    const std::size_t mid = p0.size() / 2;
    CHECK(p1.pts[mid].r - p0.pts[mid].r == doctest::Approx(10.0).epsilon(1e-9));
    CHECK(p1.pts[mid].x == doctest::Approx(p0.pts[mid].x).epsilon(1e-9));
}

TEST_CASE("grim reaper forcing deficit bounded by (n-1)/tip_r") {
    const double tip_r = 2.0;
    const ParamCurve p = grim_rotation_profile(0.3, tip_r, 0.0, 6.0);
    const auto deficit = forcing_deficit(p, 3);
    for (double d : deficit) CHECK(d <= 2.0 / tip_r + 1e-9);
}

TEST_CASE("grim reaper slab width approaches pi * scale") {
    const double scale = 0.5;
    const ParamCurve p = grim_rotation_profile(scale, 1.0, 0.0, 1.0 + 14.0 * scale);
    const double extent = p.pts.back().x - p.pts.front().x;
    CHECK(extent < M_PI * scale);
    CHECK(extent == doctest::Approx(M_PI * scale).epsilon(1e-4));
}

TEST_CASE("grim reaper requires a uniform distance from the axis") {
    CHECK_THROWS_AS(grim_rotation_profile(0.1, 0.5, 0.0, 5.0), std::invalid_argument);
}

TEST_CASE("torus shrinker closes and satisfies the shrinker equation") {
    for (int n : {2, 3}) {
        const TorusShrinker t = torus_shrinker_profile(n, 10000);
        CHECK(t.closure_residual < 1e-8);
        CHECK(t.shrinker_residual_sup < 1e-6);
        CHECK(t.profile.closed);

        // Exactly two crossings of the r-axis.
        int crossings = 0;
        const std::size_t N = t.profile.size();
        for (std::size_t k = 0; k < N; ++k) {
            const double a = t.profile.pts[k].x;
            const double b = t.profile.pts[(k + 1) % N].x;
            if ((a > 0) != (b > 0)) ++crossings;
        }
        CHECK(crossings == 2);
    }
}

TEST_CASE("torus shrinker homothetic slices move by their mean curvature") {
    const BarrierCurve b = torus_shrinker_barrier(2);
    const ParamCurve slice = b.profile(-0.49);
    CHECK(shrinker_residual_sup(slice, 2, 0.49) < 1e-6);
}

TEST_CASE("torus shrinker residual decreases under refinement") {
    const TorusShrinker coarse = torus_shrinker_profile(3, 1000);
    const TorusShrinker fine = torus_shrinker_profile(3, 4000);
    CHECK(fine.shrinker_residual_sup < coarse.shrinker_residual_sup);
}

TEST_CASE("barrier profiles respect lifespans") {
    const BarrierCurve s = sphere_barrier(1.0, 3);
    CHECK_THROWS_AS(s.profile(0.2), std::domain_error);
    CHECK(s.profile(0.1).pts.size() > 10);
    const BarrierCurve t = torus_shrinker_barrier(2);
    CHECK_THROWS_AS(t.profile(0.0), std::domain_error);
}
