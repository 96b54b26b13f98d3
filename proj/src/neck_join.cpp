#include "pancake/neck_join.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pancake/num_util.hpp"

namespace pancake {

void NeckJoinSpec::require_valid() const {
    pancake.require_valid();
    if (rho.has_value() == m.has_value())
        throw std::invalid_argument("neck join: exactly one of rho / m must be given");
    if (!(gap_half > 0.0)) throw std::invalid_argument("neck join: gap_half must be positive");
    if (!(spacing > 0.0) || !(spacing < pancake.width / 16.0))
        throw std::invalid_argument("neck join: spacing must be positive and < width/16");
}

// ---------------------------------------------------------------------------
// Analytic geometry of the carved inner boundary (right pancake, x > 0).

namespace {

constexpr double kSideTiltFrac = 1e-9;  // must match make_pancake

struct CutInfo {
    Vec2 point;     // on the inner boundary at height rho
    Vec2 tangent;   // unit, ascending (r-component > 0, x-component >= 0)
};

struct StadiumGeom {
    double cx, side_top, tilt, cap_r;
};

StadiumGeom stadium_geom(const PancakeSpec& p, double gap) {
    const double tilt = kSideTiltFrac * p.width;
    return {gap + p.width / 2.0, p.girth - p.width / 2.0, tilt, p.width / 2.0 - tilt};
}

struct ReaperGeom {
    double a, psi_max, flat_l, flat_r;  // of the right pancake
};

ReaperGeom reaper_geom(const PancakeSpec& p, double gap) {
    const double a = p.width / (2.0 * M_PI);
    const double psi_max = std::acos(std::exp(-p.girth / a));
    return {a, psi_max, gap + a * psi_max, gap + p.width - a * psi_max};
}

CutInfo inner_cut(const PancakeSpec& p, double gap, double rho) {
    if (!(rho > 0.0) || !(rho < p.girth))
        throw std::invalid_argument("neck join: rho outside (0, girth)");
    if (p.cap_style == CapStyle::semicircle) {
        const StadiumGeom s = stadium_geom(p, gap);
        if (rho <= s.side_top) {
            const Vec2 t{s.tilt, s.side_top};
            const double tn = norm(t);
            return {{gap + s.tilt * rho / s.side_top, rho}, {t.x / tn, t.r / tn}};
        }
        const double roff = rho - s.side_top;
        if (roff >= s.cap_r)
            throw std::invalid_argument("neck join: rho reaches the pancake top");
        const double dx = std::sqrt(s.cap_r * s.cap_r - roff * roff);
        const Vec2 point{s.cx - dx, rho};
        const Vec2 u{-dx / s.cap_r, roff / s.cap_r};
        return {point, {u.r, -u.x}};
    }
    const ReaperGeom rg = reaper_geom(p, gap);
    // Inner descent: u(x) = girth + a ln cos((flat_l - x)/a) on [gap, flat_l].
    const double phi = std::acos(std::exp((rho - p.girth) / rg.a));
    return {{rg.flat_l - rg.a * phi, rho}, {std::cos(phi), std::sin(phi)}};
}

struct NeckArc {
    Vec2 center;     // on the r-axis
    double radius;
    double alpha_max;  // half opening angle from the bottom
    double m;          // bottom height center.r - radius
};

NeckArc tangent_arc(const CutInfo& cut) {
    // Center on x = 0 along the cut normal: C = P + R * perp(T) with
    // perp(T) = (-T.r, T.x), so R = P.x / T.r.
    if (!(cut.tangent.r > 1e-8))
        throw std::invalid_argument("neck join: tangent arc degenerates (cut too close to the top)");
    const double R = cut.point.x / cut.tangent.r;
    const double cy = cut.point.r + R * cut.tangent.x;
    return {{0.0, cy}, R, std::asin(std::min(1.0, cut.tangent.r)), cy - R};
}

double m_of_rho(const PancakeSpec& p, double gap, double rho) {
    return tangent_arc(inner_cut(p, gap, rho)).m;
}

// Samples the carved right pancake from the cut point (inclusive) to its
// outer axis endpoint.
std::vector<Vec2> carved_right_piece(const PancakeSpec& p, double gap, double rho,
                                     double spacing) {
    std::vector<Vec2> pts;
    const CutInfo cut = inner_cut(p, gap, rho);
    pts.push_back(cut.point);
    auto push = [&](Vec2 q) {
        if (norm(q - pts.back()) > 1e-13) pts.push_back(q);
    };

    if (p.cap_style == CapStyle::semicircle) {
        const StadiumGeom s = stadium_geom(p, gap);
        double beta0 = M_PI;
        if (rho <= s.side_top) {
            // Up the inner side to the cap tangency.
            const Vec2 top{gap + s.tilt, s.side_top};
            const double len = norm(top - cut.point);
            const int steps = std::max(1, static_cast<int>(std::lround(len / spacing)));
            for (int k = 1; k <= steps; ++k) push(cut.point + (double(k) / steps) * (top - cut.point));
        } else {
            beta0 = std::atan2(rho - s.side_top, cut.point.x - s.cx);
        }
        const int steps = std::max(2, static_cast<int>(std::lround(beta0 * s.cap_r / spacing)));
        for (int k = 1; k <= steps; ++k) {
            const double b = beta0 * (1.0 - double(k) / steps);
            push({s.cx + s.cap_r * std::cos(b), s.side_top + s.cap_r * std::sin(b)});
        }
        const Vec2 outer_top{gap + p.width - s.tilt, s.side_top};
        const Vec2 outer_end{gap + p.width, 0.0};
        const double len = norm(outer_end - outer_top);
        const int steps2 = std::max(1, static_cast<int>(std::lround(len / spacing)));
        for (int k = 1; k <= steps2; ++k)
            push(outer_top + (double(k) / steps2) * (outer_end - outer_top));
    } else {
        const ReaperGeom rg = reaper_geom(p, gap);
        const double phi_c = std::acos(std::exp((rho - p.girth) / rg.a));
        // Ascend the inner descent: phi from phi_c down to 0, uniform in arc.
        auto s_of = [&](double phi) {
            return rg.a * std::log(std::tan(phi) + 1.0 / std::cos(phi));
        };
        const double s_c = s_of(phi_c);
        const int steps = std::max(2, static_cast<int>(std::lround(s_c / spacing)));
        for (int k = 1; k <= steps; ++k) {
            const double s = s_c * (1.0 - double(k) / steps);
            const double phi = 2.0 * std::atan(std::tanh(0.5 * s / rg.a));
            push({rg.flat_l - rg.a * phi, p.girth + rg.a * std::log(std::cos(phi))});
        }
        const int fsteps = std::max(1, static_cast<int>(std::lround((rg.flat_r - rg.flat_l) / spacing)));
        for (int k = 1; k <= fsteps; ++k)
            push({rg.flat_l + (rg.flat_r - rg.flat_l) * k / fsteps, p.girth});
        const double s_max = s_of(rg.psi_max);
        const int dsteps = std::max(4, static_cast<int>(std::lround(s_max / spacing)));
        for (int k = 1; k <= dsteps; ++k) {
            const double s = s_max * k / dsteps;
            const double psi = 2.0 * std::atan(std::tanh(0.5 * s / rg.a));
            push({rg.flat_r + rg.a * psi, p.girth + rg.a * std::log(std::cos(psi))});
        }
        pts.back() = {gap + p.width, 0.0};
    }
    return pts;
}

}  // namespace

double neck_minimum_for_rho(const NeckJoinSpec& spec, double rho) {
    spec.pancake.require_valid();
    return m_of_rho(spec.pancake, spec.gap_half, rho);
}

double rho_floor(const NeckJoinSpec& spec) {
    spec.pancake.require_valid();
    const double g = spec.pancake.girth;
    const double lo = 1e-9 * g, hi = g * (1.0 - 1e-9);
    double mlo, mhi;
    try {
        mlo = m_of_rho(spec.pancake, spec.gap_half, lo);
        mhi = m_of_rho(spec.pancake, spec.gap_half, hi);
    } catch (const std::exception&) {
        throw std::runtime_error("rho_floor: geometry inconsistent");
    }
    if (!(mlo < 0.0) || !(mhi > 0.0)) throw std::runtime_error("rho_floor: geometry inconsistent");
    return bisect_root(
        [&](double rho) { return m_of_rho(spec.pancake, spec.gap_half, rho); }, lo, hi,
        1e-14 * g);
}

JoinedProfile join(const NeckJoinSpec& spec) {
    spec.require_valid();
    const PancakeSpec& p = spec.pancake;
    const double g = p.girth;

    double rho;
    if (spec.rho) {
        const double floor = rho_floor(spec);
        if (!(*spec.rho > floor) || !(*spec.rho < g))
            throw std::invalid_argument("join: rho out of range: valid interval (" +
                                        std::to_string(floor) + ", " + std::to_string(g) + ")");
        rho = *spec.rho;
    } else {
        if (!(*spec.m > 0.0) || !(*spec.m < g))
            throw std::invalid_argument("join: m out of range: valid interval (0, " +
                                        std::to_string(g) + ")");
        const double floor = rho_floor(spec);
        const double lo = floor * (1.0 + 1e-12) + 1e-15 * g;
        const double hi = g * (1.0 - 1e-9);
        const double target = *spec.m;
        const double mhi = m_of_rho(p, spec.gap_half, hi);
        if (!(target < mhi))
            throw std::invalid_argument("join: m out of range: valid interval (0, " +
                                        std::to_string(mhi) + ")");
        int iters = 0;
        rho = bisect_root(
            [&](double r) {
                ++iters;
                return m_of_rho(p, spec.gap_half, r) - target;
            },
            lo, hi, 1e-13 * g, 100);
        if (std::abs(m_of_rho(p, spec.gap_half, rho) - target) > 1e-9)
            throw std::runtime_error("join: tangency solve failed to converge");
    }

    const CutInfo cut = inner_cut(p, spec.gap_half, rho);
    const NeckArc arc = tangent_arc(cut);
    if (!(arc.m > 0.0))
        throw std::invalid_argument("join: requested neck dips to the axis (below rho_floor)");

    // Right half: arc bottom (0, m) -> cut point -> carved pancake boundary.
    std::vector<Vec2> right;
    right.push_back({0.0, arc.m});
    const int arc_steps =
        std::max(4, static_cast<int>(std::lround(arc.alpha_max * arc.radius / spec.spacing)));
    for (int k = 1; k <= arc_steps; ++k) {
        const double alpha = arc.alpha_max * k / arc_steps;
        right.push_back({arc.radius * std::sin(alpha), arc.center.r - arc.radius * std::cos(alpha)});
    }
    right.back() = cut.point;
    const auto piece = carved_right_piece(p, spec.gap_half, rho, spec.spacing);
    for (std::size_t i = 1; i < piece.size(); ++i) right.push_back(piece[i]);

    // Resample the half, then mirror for exact reflection symmetry.
    ProfileGraph half;
    half.closed_left = false;
    half.closed_right = true;
    for (const Vec2& q : right) {
        if (!half.xs.empty() && !(q.x > half.xs.back()))
            throw std::runtime_error("join: gluing produced fold");
        half.xs.push_back(q.x);
        half.us.push_back(q.r);
    }
    ProfileGraph rhalf = resample(half, spec.spacing);
    rhalf.us.back() = 0.0;

    JoinedProfile out;
    out.curve.closed_left = out.curve.closed_right = true;
    for (std::size_t j = rhalf.size(); j-- > 1;) {
        out.curve.xs.push_back(-rhalf.xs[j]);
        out.curve.us.push_back(rhalf.us[j]);
    }
    for (std::size_t j = 0; j < rhalf.size(); ++j) {
        out.curve.xs.push_back(rhalf.xs[j]);
        out.curve.us.push_back(rhalf.us[j]);
    }
    for (std::size_t j = 0; j + 1 < out.curve.size(); ++j)
        if (!(out.curve.xs[j] < out.curve.xs[j + 1]))
            throw std::runtime_error("join: gluing produced fold");
    out.curve.require_valid("join");

    const CriticalPoints cp = count_critical_points(out.curve);
    if (cp.maxima != 2 || cp.minima != 1)
        throw std::runtime_error("join: glued curve does not have (2 maxima, 1 minimum)");

    out.arc_center = arc.center;
    out.arc_radius = arc.radius;
    out.rho = rho;
    out.m_achieved = arc.m;
    out.f_m_x_lo = -cut.point.x;
    out.f_m_x_hi = cut.point.x;
    // Tangent mismatch of the closed-form splice: angle between the arc end
    // tangent and the cut tangent.
    const Vec2 arc_t{std::cos(arc.alpha_max), std::sin(arc.alpha_max)};
    out.tangent_mismatch =
        std::abs(std::asin(std::max(-1.0, std::min(1.0, cross(arc_t, cut.tangent)))));
    return out;
}

bool inside_profile_region(const ProfileGraph& curve, Vec2 p, double tol) {
    if (p.r < -tol) return false;
    // Region bounded by the graph and the axis segment.
    if (p.x >= curve.min_x() && p.x <= curve.max_x()) {
        const double u = *curve.height_at(p.x);
        if (p.r <= u + tol) return true;
    }
    // Within tol of the boundary polyline still counts as inside.
    return min_distance(ParamCurve{{p}, false}, to_param(curve)) <= tol;
}

bool nesting_check(const JoinedProfile& a, const JoinedProfile& b) {
    const double tol = b.curve.arc_length() / static_cast<double>(b.curve.size() - 1);
    for (std::size_t j = 0; j < a.curve.size(); ++j)
        if (!inside_profile_region(b.curve, a.curve.node(j), tol)) return false;
    return true;
}

}  // namespace pancake
