#include "pancake/pancake_profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pancake {

std::string to_string(CapStyle s) {
    return s == CapStyle::semicircle ? "semicircle" : "grim-reaper";
}

CapStyle cap_style_from_string(const std::string& s) {
    if (s == "semicircle") return CapStyle::semicircle;
    if (s == "grim-reaper") return CapStyle::grim_reaper;
    throw std::invalid_argument("unknown cap style: " + s);
}

void PancakeSpec::require_valid() const {
    if (n < 2) throw std::invalid_argument("pancake: n must be >= 2");
    if (!(s < 0.0)) throw std::invalid_argument("pancake: construction time must be negative");
    if (!(width > 0.0)) throw std::invalid_argument("pancake: width must be positive");
    if (!(girth > width)) throw std::invalid_argument("degenerate pancake: girth must exceed width");
}

double girth_asymptotic(double t, int n, double c_n) {
    if (!(t <= -10.0)) throw std::invalid_argument("girth_asymptotic: asymptotic regime only (t <= -10)");
    return pancake_girth_formula(t, n, c_n);
}

double pancake_girth_formula(double t, int n, double c_n) {
    if (!(t < 0.0)) throw std::invalid_argument("girth formula: t must be negative");
    const double g = -t + (n - 1) * std::log(-t) + c_n;
    if (!(g > 0.0)) throw std::invalid_argument("girth formula: value not usable as a girth");
    return g;
}

double width_asymptotic(int) { return 2.0 * M_PI; }

// ---------------------------------------------------------------------------
// Profile construction
//
// Pieces are sampled analytically and concatenated, then the caller-facing
// spacing is enforced by one global resample. The sides carry a hairline
// inward tilt so the discrete graph keeps strictly increasing x.

namespace {

constexpr double kSideTiltFrac = 1e-9;  // of the width, across the full side height

void append_line(std::vector<Vec2>& out, Vec2 a, Vec2 b, double spacing, bool include_a) {
    const double len = norm(b - a);
    const int steps = std::max(1, static_cast<int>(std::lround(len / spacing)));
    for (int k = include_a ? 0 : 1; k <= steps; ++k)
        out.push_back(a + (static_cast<double>(k) / steps) * (b - a));
}

void append_arc(std::vector<Vec2>& out, Vec2 center, double radius, double beta0, double beta1,
                double spacing, bool include_first) {
    const double span = std::abs(beta1 - beta0) * radius;
    const int steps = std::max(2, static_cast<int>(std::lround(span / spacing)));
    for (int k = include_first ? 0 : 1; k <= steps; ++k) {
        const double b = beta0 + (beta1 - beta0) * k / steps;
        out.push_back({center.x + radius * std::cos(b), center.r + radius * std::sin(b)});
    }
}

}  // namespace

ProfileGraph make_pancake(const PancakeSpec& spec, double center_x, double spacing) {
    spec.require_valid();
    if (!(spacing > 0.0) || !(spacing < spec.width / 16.0))
        throw std::invalid_argument("make_pancake: spacing must be < width/16");

    const double w = spec.width, g = spec.girth;
    const double tilt = kSideTiltFrac * w;

    // Right half from the apex; resampled once and mirrored so the result is
    // reflection symmetric to roundoff.
    std::vector<Vec2> pts;
    if (spec.cap_style == CapStyle::semicircle) {
        const double side_top = g - w / 2.0;
        const double Rc = w / 2.0 - tilt;
        pts.push_back({center_x, side_top + Rc});
        append_arc(pts, {center_x, side_top}, Rc, M_PI / 2.0, 0.0, spacing, false);
        append_line(pts, {center_x + w / 2.0 - tilt, side_top}, {center_x + w / 2.0, 0.0}, spacing,
                    false);
    } else {
        // Flat top with grim-reaper descents; the reaper scale w/(2*pi) keeps
        // each descent within a quarter width. The descent is an honest graph,
        // no tilt needed.
        const double a = w / (2.0 * M_PI);
        const double psi_max = std::acos(std::exp(-g / a));
        const double flat_r = center_x + w / 2.0 - a * psi_max;
        append_line(pts, {center_x, g}, {flat_r, g}, spacing, true);
        const double s_max = a * std::log(std::tan(psi_max) + 1.0 / std::cos(psi_max));
        const int steps = std::max(4, static_cast<int>(std::lround(s_max / spacing)));
        for (int k = 1; k <= steps; ++k) {
            const double s = s_max * k / steps;
            const double psi = 2.0 * std::atan(std::tanh(0.5 * s / a));
            pts.push_back({flat_r + a * psi, g + a * std::log(std::cos(psi))});
        }
        pts.back() = {center_x + w / 2.0, 0.0};
    }

    ProfileGraph half;
    half.closed_left = false;
    half.closed_right = true;
    for (const Vec2& p : pts) {
        if (!half.xs.empty() && !(p.x > half.xs.back())) continue;  // drop duplicate joints
        half.xs.push_back(p.x);
        half.us.push_back(std::max(0.0, p.r));
    }
    half.us.back() = 0.0;
    const ProfileGraph rh = resample(half, spacing);

    ProfileGraph out;
    out.closed_left = out.closed_right = true;
    for (std::size_t j = rh.size(); j-- > 1;) {
        out.xs.push_back(2.0 * center_x - rh.xs[j]);
        out.us.push_back(rh.us[j]);
    }
    for (std::size_t j = 0; j < rh.size(); ++j) {
        out.xs.push_back(rh.xs[j]);
        out.us.push_back(rh.us[j]);
    }
    out.us.front() = 0.0;
    out.us.back() = 0.0;
    out.require_valid("make_pancake");
    return out;
}

ProfileGraph anneal(const ProfileGraph& profile, double burn_time, const FlowConfig& engine) {
    if (burn_time < 0.0) throw std::invalid_argument("anneal: burn_time must be >= 0");
    if (burn_time == 0.0) return profile;
    FlowConfig cfg = engine;
    cfg.max_time = burn_time;
    const FlowTrace trace = evolve(profile, cfg, nullptr);
    for (const auto& e : trace.events) {
        if (e.kind == EventKind::pinch || e.kind == EventKind::component_extinct ||
            e.kind == EventKind::cap_extinct || e.kind == EventKind::error)
            throw std::runtime_error("anneal: flow event during burn-in: " + to_string(e.kind) +
                                     " at t=" + std::to_string(e.t));
    }
    if (trace.snapshots.back().components.size() != 1)
        throw std::runtime_error("anneal: burn-in did not preserve a single component");
    const ProfileGraph out = trace.snapshots.back().components.front();
    const CriticalPoints cp = count_critical_points(out, flow_plateau_tol(cfg));
    if (cp.maxima != 1 || cp.minima != 0)
        throw std::runtime_error("anneal: burn-in lost the single-maximum shape");
    return out;
}

}  // namespace pancake
