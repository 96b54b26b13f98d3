#include "pancake/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pancake/num_util.hpp"

namespace pancake {

std::string to_string(BarrierKind k) {
    switch (k) {
        case BarrierKind::sphere: return "sphere";
        case BarrierKind::cylinder: return "cylinder";
        case BarrierKind::catenoid: return "catenoid";
        case BarrierKind::grim_rotation: return "grim-rotation";
        case BarrierKind::torus_shrinker: return "torus-shrinker";
        case BarrierKind::pancake_slab: return "pancake-slab";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Closed-form laws

double shrinking_sphere_radius(double R0, int n, double t) {
    const double rr = R0 * R0 - 2.0 * n * t;
    if (rr < -1e-15 * R0 * R0) throw std::domain_error("shrinking_sphere: t beyond extinction");
    return std::sqrt(std::max(rr, 0.0));
}

double shrinking_cylinder_radius(double u0, int n, double t) {
    const double rr = u0 * u0 - 2.0 * (n - 1) * t;
    if (rr < -1e-15 * u0 * u0) throw std::domain_error("shrinking_cylinder: t beyond extinction");
    return std::sqrt(std::max(rr, 0.0));
}

// ---------------------------------------------------------------------------
// Catenoid

namespace {

double catenoid_integrand_sigma(int n, double sigma) {
    // 2 sigma / sqrt((1+sigma^2)^{2(n-1)} - 1); finite limit at sigma = 0.
    // expm1/log1p keep the denominator accurate for tiny sigma.
    if (sigma == 0.0) return 2.0 / std::sqrt(2.0 * (n - 1));
    const double denom = std::expm1(2.0 * (n - 1) * std::log1p(sigma * sigma));
    return 2.0 * sigma / std::sqrt(denom);
}

// 7-point Gauss-Legendre on [a, b]; the sigma integrand is analytic, so a
// fixed rule per grid interval is already at machine precision.
double gauss7(const std::function<double(double)>& f, double a, double b) {
    static const double xs[7] = {-0.9491079123427585, -0.7415311855993945, -0.4058451513773972,
                                 0.0,                 0.4058451513773972,  0.7415311855993945,
                                 0.9491079123427585};
    static const double ws[7] = {0.1294849661688697, 0.2797053914892766, 0.3818300505051189,
                                 0.4179591836734694, 0.3818300505051189, 0.2797053914892766,
                                 0.1294849661688697};
    const double mid = 0.5 * (a + b), hl = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < 7; ++i) sum += ws[i] * f(mid + hl * xs[i]);
    return hl * sum;
}

void check_catenoid_args(int n, double c) {
    if (n == 2) throw std::invalid_argument("catenoid: entire catenoid: no slab (n = 2)");
    if (n < 2) throw std::invalid_argument("catenoid: n must be >= 3");
    if (!(c > 0.0)) throw std::invalid_argument("catenoid: neck radius must be positive");
}

}  // namespace

ParamCurve catenoid_profile(int n, double neck_radius, double r_max, std::size_t nodes) {
    check_catenoid_args(n, neck_radius);
    const double c = neck_radius;
    if (!(r_max > c)) throw std::invalid_argument("catenoid: r_max must exceed the neck radius");
    const double sigma_max = std::sqrt(r_max / c - 1.0);
    const std::size_t half = std::max<std::size_t>(nodes / 2, 16);

    // Cumulative width integral on the uniform sigma grid.
    std::vector<double> xhalf(half + 1, 0.0);
    const std::function<double(double)> f = [n](double s) {
        return catenoid_integrand_sigma(n, s);
    };
    for (std::size_t j = 1; j <= half; ++j) {
        const double a = sigma_max * (j - 1) / half, b = sigma_max * j / half;
        xhalf[j] = xhalf[j - 1] + gauss7(f, a, b);
    }

    ParamCurve out;
    out.closed = false;
    out.pts.reserve(2 * half + 1);
    for (std::size_t j = half; j > 0; --j) {
        const double sigma = sigma_max * j / half;
        out.pts.push_back({-c * xhalf[j], c * (1.0 + sigma * sigma)});
    }
    out.pts.push_back({0.0, c});
    for (std::size_t j = 1; j <= half; ++j) {
        const double sigma = sigma_max * j / half;
        out.pts.push_back({c * xhalf[j], c * (1.0 + sigma * sigma)});
    }
    return out;
}

double catenoid_half_width(int n, double neck_radius) {
    check_catenoid_args(n, neck_radius);
    const double Sigma = 1000.0;
    auto f = [&](double s) { return catenoid_integrand_sigma(n, s); };
    double w = 0.0;
    double a = 0.0;
    for (double b : {1.0, 4.0, 20.0, 100.0, Sigma}) {
        w += integrate(f, a, b, 1e-13);
        a = b;
    }
    // Tail of the sigma integral: integrand ~ 2 sigma (1+sigma^2)^{-(n-1)}.
    w += std::pow(1.0 + Sigma * Sigma, 2.0 - n) / (n - 2);
    return neck_radius * w;
}

// ---------------------------------------------------------------------------
// Grim reaper rotation

ParamCurve grim_rotation_profile(double scale, double tip_r, double t, double r_cut) {
    if (!(scale > 0.0)) throw std::invalid_argument("grim reaper: scale must be positive");
    if (tip_r < 1.0)
        throw std::invalid_argument("grim reaper: tip must keep a uniform distance from the axis (tip_r >= 1)");
    const double r_tip = tip_r + t / scale;
    if (!(r_cut > r_tip)) throw std::invalid_argument("grim reaper: r_cut below the tip");
    // Height h above the tip maps to x = scale * arccos(exp(-h/scale)); the
    // arc-length parameter is s = scale * arcgd(x/scale), inverted by the
    // gudermannian for a uniform-in-arc node layout.
    const double x_cut = scale * std::acos(std::exp(-(r_cut - r_tip) / scale));
    const double psi = x_cut / scale;
    const double s_cut = scale * std::log(std::tan(psi) + 1.0 / std::cos(psi));
    const std::size_t half = 1000;
    ParamCurve out;
    out.pts.reserve(2 * half + 1);
    for (std::size_t j = 0; j <= 2 * half; ++j) {
        const double s = -s_cut + s_cut * j / half;
        const double x = scale * 2.0 * std::atan(std::tanh(0.5 * s / scale));
        out.pts.push_back({x, r_tip - scale * std::log(std::cos(x / scale))});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Index-smooth residuals

namespace {

struct CurveDerivs {
    std::vector<double> x1, x2, r1, r2;
};

CurveDerivs curve_derivs(const ParamCurve& c) {
    std::vector<double> xs(c.pts.size()), rs(c.pts.size());
    for (std::size_t i = 0; i < c.pts.size(); ++i) {
        xs[i] = c.pts[i].x;
        rs[i] = c.pts[i].r;
    }
    const auto dx = index_derivatives(xs, c.closed);
    const auto dr = index_derivatives(rs, c.closed);
    return {dx.d1, dx.d2, dr.d1, dr.d2};
}

// kappa, cos(theta) and <p, nu> per node with nu the left normal of the
// traversal; only magnitudes of full residuals are orientation-free, which is
// all callers use.
void per_node_terms(const ParamCurve& c, int n, std::vector<double>& speed,
                    std::vector<double>& pdotnu_over2) {
    const auto d = curve_derivs(c);
    const std::size_t N = c.pts.size();
    speed.assign(N, 0.0);
    pdotnu_over2.assign(N, 0.0);
    for (std::size_t i = 0; i < N; ++i) {
        const double sp2 = d.x1[i] * d.x1[i] + d.r1[i] * d.r1[i];
        const double sp = std::sqrt(sp2);
        const double kappa = -(d.x1[i] * d.r2[i] - d.r1[i] * d.x2[i]) / (sp2 * sp);
        const double nu_x = -d.r1[i] / sp, nu_r = d.x1[i] / sp;
        speed[i] = kappa + (n - 1) * nu_r / c.pts[i].r;
        pdotnu_over2[i] = 0.5 * (c.pts[i].x * nu_x + c.pts[i].r * nu_r);
    }
}

}  // namespace

double reduced_speed_residual_sup(const ParamCurve& c, int n) {
    std::vector<double> speed, pn;
    per_node_terms(c, n, speed, pn);
    double sup = 0.0;
    // Skip the outermost two nodes of open curves: the one-sided extension
    // there is only second order.
    const std::size_t skip = c.closed ? 0 : 2;
    for (std::size_t i = skip; i + skip < speed.size(); ++i) sup = std::max(sup, std::abs(speed[i]));
    return sup;
}

double shrinker_residual_sup(const ParamCurve& c, int n, double tau) {
    std::vector<double> speed, pn;
    per_node_terms(c, n, speed, pn);
    double sup = 0.0;
    const std::size_t skip = c.closed ? 0 : 2;
    for (std::size_t i = skip; i + skip < speed.size(); ++i)
        sup = std::max(sup, std::abs(speed[i] - pn[i] / tau));
    return sup;
}

std::vector<double> forcing_deficit(const ParamCurve& c, int n) {
    const auto d = curve_derivs(c);
    std::vector<double> out(c.pts.size());
    for (std::size_t i = 0; i < c.pts.size(); ++i) {
        const double sp = std::hypot(d.x1[i], d.r1[i]);
        out[i] = (n - 1) * std::abs(d.x1[i] / sp) / c.pts[i].r;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Torus shrinker shooting

namespace {

using Y = std::array<double, 4>;  // (x, r, tx, tr), unit tangent

Y geodesic_rhs_for(int n, double, const Y& y) {
    // Geodesic of the conformal weight W = r^{n-1} exp(-(x^2+r^2)/4):
    // gamma'' = grad(phi) - <grad(phi), T> T with phi = ln W.
    const double gx = -0.5 * y[0];
    const double gr = (n - 1) / y[1] - 0.5 * y[1];
    const double gdt = gx * y[2] + gr * y[3];
    return {y[2], y[3], gx - gdt * y[2], gr - gdt * y[3]};
}

struct HalfLoop {
    bool valid = false;
    double arc = 0.0;   // arc length to the return crossing of x = 0
    Y end{};            // state at the crossing
};

// Integrates the geodesic from (0, r0) with tangent (1, 0) until it crosses
// back over the r-axis (from x > 0 to x <= 0).
HalfLoop shoot_half(int n, double r0) {
    auto rhs = [n](double s, const Y& y) { return geodesic_rhs_for(n, s, y); };
    HalfLoop out;
    bool left_axis = false;
    double prev_s = 0.0;
    Y prev_y{0.0, r0, 1.0, 0.0};
    try {
        auto keep = [&](double, const Y& y) {
            if (y[1] < 0.05 || std::abs(y[0]) > 12.0) return false;  // escaped
            if (y[0] > 1e-6) left_axis = true;
            return !(left_axis && y[0] <= 0.0);
        };
        const OdeResult res = integrate_ode(rhs, prev_y, 0.0, 60.0, 1e-12, keep);
        // Find the bracketing step over x = 0.
        for (std::size_t k = 1; k < res.ss.size(); ++k) {
            if (res.ys[k - 1][0] > 0.0 && res.ys[k][0] <= 0.0 && res.ss[k] > 1e-3) {
                prev_s = res.ss[k - 1];
                prev_y = res.ys[k - 1];
                // Refine the crossing with bisection on fixed RK4 substeps.
                double lo = 0.0, hi = res.ss[k] - prev_s;
                auto advance_rk4 = [&](double h) {
                    Y y = prev_y;
                    const int m = 16;
                    const double dh = h / m;
                    for (int i = 0; i < m; ++i) {
                        const Y k1 = rhs(0, y);
                        Y t2 = y;
                        for (int q = 0; q < 4; ++q) t2[q] += 0.5 * dh * k1[q];
                        const Y k2 = rhs(0, t2);
                        Y t3 = y;
                        for (int q = 0; q < 4; ++q) t3[q] += 0.5 * dh * k2[q];
                        const Y k3 = rhs(0, t3);
                        Y t4 = y;
                        for (int q = 0; q < 4; ++q) t4[q] += dh * k3[q];
                        const Y k4 = rhs(0, t4);
                        for (int q = 0; q < 4; ++q)
                            y[q] += dh / 6.0 * (k1[q] + 2.0 * k2[q] + 2.0 * k3[q] + k4[q]);
                    }
                    return y;
                };
                for (int it = 0; it < 80; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    if (advance_rk4(mid)[0] > 0.0)
                        lo = mid;
                    else
                        hi = mid;
                }
                out.valid = true;
                out.arc = prev_s + 0.5 * (lo + hi);
                out.end = advance_rk4(0.5 * (lo + hi));
                return out;
            }
        }
    } catch (const std::exception&) {
        // treated as no crossing
    }
    return out;
}

}  // namespace

TorusShrinker torus_shrinker_profile(int n, std::size_t nodes) {
    if (n < 2) throw std::invalid_argument("torus shrinker: n must be >= 2");

    // Bracket scan: the closure function is the tangent r-component at the
    // return crossing (zero for a perpendicular return).
    const double scan_lo = 0.5, scan_hi = 4.0, scan_step = 0.05;
    double bracket_a = 0.0, bracket_b = 0.0;
    double prev_val = 0.0;
    bool have_prev = false;
    for (double r0 = scan_lo; r0 <= scan_hi + 1e-12; r0 += scan_step) {
        const HalfLoop h = shoot_half(n, r0);
        if (!h.valid) {
            have_prev = false;
            continue;
        }
        const double val = h.end[3];
        if (have_prev && (val > 0.0) != (prev_val > 0.0)) {
            bracket_a = r0 - scan_step;
            bracket_b = r0;
            break;
        }
        prev_val = val;
        have_prev = true;
    }
    if (bracket_b == 0.0)
        throw std::runtime_error("torus shrinker: shooting failed to bracket in r0 range [0.5, 4]");

    const double r_top = bisect_root(
        [&](double r0) {
            const HalfLoop h = shoot_half(n, r0);
            if (!h.valid) throw std::runtime_error("torus shrinker: lost the crossing inside the bracket");
            return h.end[3];
        },
        bracket_a, bracket_b, 1e-13);

    const HalfLoop half = shoot_half(n, r_top);
    if (!half.valid) throw std::runtime_error("torus shrinker: final half loop invalid");

    // Regenerate the half loop with a fixed arc step landing exactly on the
    // crossing, then mirror for an exactly reflection-symmetric closed curve.
    const std::size_t M = std::max<std::size_t>(nodes / 2, 64);
    const double ds = half.arc / M;
    auto rhs = [n](double s, const Y& y) { return geodesic_rhs_for(n, s, y); };
    std::vector<Vec2> right;
    right.reserve(M + 1);
    Y y{0.0, r_top, 1.0, 0.0};
    right.push_back({y[0], y[1]});
    for (std::size_t i = 0; i < M; ++i) {
        const Y k1 = rhs(0, y);
        Y t2 = y;
        for (int q = 0; q < 4; ++q) t2[q] += 0.5 * ds * k1[q];
        const Y k2 = rhs(0, t2);
        Y t3 = y;
        for (int q = 0; q < 4; ++q) t3[q] += 0.5 * ds * k2[q];
        const Y k3 = rhs(0, t3);
        Y t4 = y;
        for (int q = 0; q < 4; ++q) t4[q] += ds * k3[q];
        const Y k4 = rhs(0, t4);
        for (int q = 0; q < 4; ++q) y[q] += ds / 6.0 * (k1[q] + 2.0 * k2[q] + 2.0 * k3[q] + k4[q]);
        const double tn = std::hypot(y[2], y[3]);
        y[2] /= tn;
        y[3] /= tn;
        right.push_back({y[0], y[1]});
    }

    TorusShrinker out;
    out.r_top = r_top;
    out.r_bottom = y[1];
    out.closure_residual = std::hypot(y[0], y[3]);

    out.profile.closed = true;
    out.profile.pts = right;
    out.profile.pts.front().x = 0.0;  // exact symmetry on the seam nodes
    out.profile.pts.back().x = 0.0;
    for (std::size_t i = M - 1; i >= 1; --i)
        out.profile.pts.push_back({-right[i].x, right[i].r});

    out.shrinker_residual_sup = shrinker_residual_sup(out.profile, n, 1.0);
    return out;
}

// ---------------------------------------------------------------------------
// Barrier curves

ParamCurve BarrierCurve::profile(double t) const {
    if (t < t_min || t >= t_max) throw std::domain_error("barrier: time outside lifespan");
    switch (kind) {
        case BarrierKind::sphere: {
            const double R = shrinking_sphere_radius(params.at("R0"), static_cast<int>(params.at("n")), t);
            const double cx = params.at("center_x");
            ParamCurve c;
            const std::size_t N = 1024;
            c.pts.reserve(N + 1);
            for (std::size_t k = 0; k <= N; ++k) {
                const double phi = M_PI - M_PI * k / N;
                c.pts.push_back({cx + R * std::cos(phi), R * std::sin(phi)});
            }
            c.pts.front().r = c.pts.back().r = 0.0;
            return c;
        }
        case BarrierKind::cylinder: {
            const double u = shrinking_cylinder_radius(params.at("u0"), static_cast<int>(params.at("n")), t);
            ParamCurve c;
            const std::size_t N = 256;
            const double lo = params.at("x_lo"), hi = params.at("x_hi");
            for (std::size_t k = 0; k <= N; ++k) c.pts.push_back({lo + (hi - lo) * k / N, u});
            return c;
        }
        case BarrierKind::catenoid:
        case BarrierKind::pancake_slab:
            return *cached;
        case BarrierKind::grim_rotation:
            return grim_rotation_profile(params.at("scale"), params.at("tip_r"), t, params.at("r_cut"));
        case BarrierKind::torus_shrinker: {
            const double lambda = std::sqrt(-t);
            ParamCurve c = *cached;
            for (Vec2& p : c.pts) {
                p.x *= lambda;
                p.r *= lambda;
            }
            return c;
        }
    }
    throw std::logic_error("barrier: unknown kind");
}

BarrierCurve sphere_barrier(double R0, int n, double center_x) {
    BarrierCurve b;
    b.kind = BarrierKind::sphere;
    b.params = {{"R0", R0}, {"n", static_cast<double>(n)}, {"center_x", center_x}};
    b.t_min = -std::numeric_limits<double>::infinity();
    b.t_max = R0 * R0 / (2.0 * n);
    return b;
}

BarrierCurve cylinder_barrier(double u0, int n, double x_lo, double x_hi) {
    BarrierCurve b;
    b.kind = BarrierKind::cylinder;
    b.params = {{"u0", u0}, {"n", static_cast<double>(n)}, {"x_lo", x_lo}, {"x_hi", x_hi}};
    b.t_max = u0 * u0 / (2.0 * (n - 1));
    return b;
}

BarrierCurve catenoid_barrier(int n, double neck_radius, double r_max) {
    BarrierCurve b;
    b.kind = BarrierKind::catenoid;
    b.params = {{"n", static_cast<double>(n)}, {"c", neck_radius}, {"r_max", r_max}};
    b.cached = std::make_shared<const ParamCurve>(catenoid_profile(n, neck_radius, r_max));
    return b;
}

BarrierCurve grim_rotation_barrier(double scale, double tip_r, double r_cut) {
    BarrierCurve b;
    b.kind = BarrierKind::grim_rotation;
    b.params = {{"scale", scale}, {"tip_r", tip_r}, {"r_cut", r_cut}};
    return b;
}

BarrierCurve torus_shrinker_barrier(int n) {
    BarrierCurve b;
    b.kind = BarrierKind::torus_shrinker;
    const TorusShrinker t = torus_shrinker_profile(n);
    b.params = {{"n", static_cast<double>(n)}, {"r_top", t.r_top}, {"r_bottom", t.r_bottom}};
    b.cached = std::make_shared<const ParamCurve>(t.profile);
    b.t_min = -1.0;
    b.t_max = 0.0;
    return b;
}

BarrierCurve pancake_slab_barrier(double x_lo, double x_hi, double r_top) {
    BarrierCurve b;
    b.kind = BarrierKind::pancake_slab;
    b.params = {{"x_lo", x_lo}, {"x_hi", x_hi}, {"r_top", r_top}};
    ParamCurve c;
    const std::size_t N = 128;
    for (std::size_t k = 0; k <= N; ++k) c.pts.push_back({x_lo, r_top * k / N});
    for (std::size_t k = 1; k <= N; ++k) c.pts.push_back({x_lo + (x_hi - x_lo) * k / N, r_top});
    for (std::size_t k = 1; k <= N; ++k) c.pts.push_back({x_hi, r_top * (N - k) / N});
    b.cached = std::make_shared<const ParamCurve>(std::move(c));
    return b;
}

// ---------------------------------------------------------------------------
// Avoidance report

AvoidanceReport avoidance_check(const FlowTrace& trace, const BarrierCurve& barrier,
                                const Region& window) {
    window.require_valid("avoidance_check");
    if (!barrier.exact())
        throw std::invalid_argument("avoidance_check: approximate barrier not admissible");
    if (trace.snapshots.empty()) throw std::invalid_argument("avoidance_check: empty trace");

    AvoidanceReport rep;
    bool first = true;
    for (const auto& snap : trace.snapshots) {
        if (snap.t < barrier.t_min || snap.t >= barrier.t_max) continue;
        const ParamCurve wall = barrier.profile(snap.t);
        const auto wall_clip = clip_to_window(wall, window);

        double dist = std::numeric_limits<double>::quiet_NaN();
        int cross_window = 0;
        int cross_global = 0;
        const double tol = std::max(trace.config.spacing * 1e-3, 1e-12);
        for (const auto& comp : snap.components) {
            const ParamCurve pc = to_param(comp);
            cross_global += count_intersections(pc, wall, tol).crossings;
            const auto comp_clip = clip_to_window(pc, window);
            for (const auto& a : comp_clip) {
                for (const auto& w : wall_clip) {
                    const double d = min_distance(a, w);
                    if (std::isnan(dist) || d < dist) dist = d;
                    cross_window += count_intersections(a, w, tol).crossings;
                }
            }
        }
        const bool disjoint = cross_window == 0 && (std::isnan(dist) || dist > 0.0);
        if (first) {
            if (!disjoint)
                throw std::runtime_error("avoidance_check: not a barrier configuration");
            first = false;
        }
        rep.times.push_back(snap.t);
        rep.window_distance.push_back(dist);
        rep.crossings.push_back(cross_global);
        rep.window_disjoint.push_back(disjoint);
        if (!disjoint) rep.any_violation = true;
    }
    if (first) throw std::invalid_argument("avoidance_check: trace and barrier lifespans do not overlap");
    return rep;
}

}  // namespace pancake
