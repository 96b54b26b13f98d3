#include "pancake/flow.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pancake {

void FlowConfig::require_valid() const {
    if (n < 2) throw std::invalid_argument("flow config: n must be >= 2");
    if (!(spacing > 0.0)) throw std::invalid_argument("flow config: spacing must be positive");
    if (!(cfl > 0.0 && cfl < 1.0)) throw std::invalid_argument("flow config: cfl must be in (0,1)");
    if (pinch_eps < 4.0 * spacing)
        throw std::invalid_argument("flow config: pinch_eps must be >= 4 * spacing");
    if (tip_eps < 4.0 * spacing)
        throw std::invalid_argument("flow config: tip_eps must be >= 4 * spacing");
    if (!(max_time > 0.0)) throw std::invalid_argument("flow config: max_time must be positive");
    if (!(snapshot_stride > 0.0))
        throw std::invalid_argument("flow config: snapshot_stride must be positive");
}

std::string to_string(FlowStatus s) {
    switch (s) {
        case FlowStatus::running: return "running";
        case FlowStatus::pinched: return "pinched";
        case FlowStatus::extinct: return "extinct";
        case FlowStatus::blown_up: return "blown-up";
    }
    return "?";
}

std::string to_string(EventKind k) {
    switch (k) {
        case EventKind::pinch: return "pinch";
        case EventKind::split: return "split";
        case EventKind::cap_extinct: return "cap-extinct";
        case EventKind::component_extinct: return "component-extinct";
        case EventKind::threshold: return "threshold";
        case EventKind::error: return "error";
    }
    return "?";
}

double FlowState::max_height() const {
    double m = 0.0;
    for (const auto& c : components) m = std::max(m, c.max_height());
    return m;
}

double FlowState::width() const {
    if (components.empty()) return 0.0;
    double lo = components.front().min_x(), hi = components.front().max_x();
    for (const auto& c : components) {
        lo = std::min(lo, c.min_x());
        hi = std::max(hi, c.max_x());
    }
    return hi - lo;
}

double FlowState::neck_value() const {
    for (const auto& c : components)
        if (auto u = c.height_at(0.0)) return *u;
    return 0.0;
}

const FlowState* FlowTrace::state_at(double t, double tol) const {
    for (const auto& s : snapshots)
        if (std::abs(s.t - t) <= tol) return &s;
    return nullptr;
}

void FlowTrace::shift_times(double dt) {
    initial.t += dt;
    for (auto& s : snapshots) s.t += dt;
    for (auto& e : events) e.t += dt;
    if (extinction_time) *extinction_time += dt;
}

bool FlowTrace::has_event(EventKind k, double before) const {
    for (const auto& e : events)
        if (e.kind == k && e.t <= before) return true;
    return false;
}

// ---------------------------------------------------------------------------
// Node velocities

namespace {

// Osculating-circle radius of a cap meeting the axis at the endpoint: for a
// circle through (x0, 0) with center on the axis, u^2 + (x - x0)^2 = 2 rho
// (x - x0) holds at every point, so rho comes from a least-squares fit over
// the nearest interior nodes.
double tip_radius(const ProfileGraph& g, bool left) {
    const std::size_t n = g.size();
    const double x0 = left ? g.xs.front() : g.xs.back();
    double num = 0.0, den = 0.0;
    for (std::size_t k = 1; k <= 3 && k < n - 1; ++k) {
        const std::size_t j = left ? k : n - 1 - k;
        const double dx = std::abs(g.xs[j] - x0);
        if (dx <= 0.0) continue;
        num += (g.us[j] * g.us[j] + dx * dx) * dx;
        den += dx * dx;
    }
    if (den == 0.0) return std::numeric_limits<double>::infinity();
    return num / (2.0 * den);
}

// Parametric normal velocity of every node: interior nodes move by
// -(kappa + (n-1) cos(theta)/r) along the upward normal, axis endpoints
// slide along the axis at the regularized tip speed n * kappa_tip.
std::vector<Vec2> node_velocities(const ProfileGraph& g, int n) {
    const std::size_t N = g.size();
    std::vector<Vec2> v(N);
    for (std::size_t j = 1; j + 1 < N; ++j) {
        const Vec2 pm = g.node(j - 1), p0 = g.node(j), pp = g.node(j + 1);
        const Vec2 d1 = p0 - pm, d2 = pp - p0, dd = pp - pm;
        const double l1 = norm(d1), l2 = norm(d2), ld = norm(dd);
        const double kappa = -2.0 * cross(d1, d2) / (l1 * l2 * ld);
        Vec2 nu{-dd.r / ld, dd.x / ld};
        const double speed = -(kappa + (n - 1) * nu.r / g.us[j]);
        v[j] = speed * nu;
    }
    // Left end.
    if (g.closed_left) {
        v[0] = {n / tip_radius(g, true), 0.0};
    } else {
        // Mirror ghost enforces a zero-slope boundary.
        const Vec2 p0 = g.node(0), p1 = g.node(1);
        const Vec2 ghost{2.0 * p0.x - p1.x, p1.r};
        const Vec2 d1 = p0 - ghost, d2 = p1 - p0, dd = p1 - ghost;
        const double l1 = norm(d1), l2 = norm(d2), ld = norm(dd);
        const double kappa = -2.0 * cross(d1, d2) / (l1 * l2 * ld);
        Vec2 nu{-dd.r / ld, dd.x / ld};
        v[0] = -(kappa + (n - 1) * nu.r / g.us[0]) * nu;
    }
    // Right end.
    if (g.closed_right) {
        v[N - 1] = {-n / tip_radius(g, false), 0.0};
    } else {
        const Vec2 p0 = g.node(N - 1), p1 = g.node(N - 2);
        const Vec2 ghost{2.0 * p0.x - p1.x, p1.r};
        const Vec2 d1 = p0 - p1, d2 = ghost - p0, dd = ghost - p1;
        const double l1 = norm(d1), l2 = norm(d2), ld = norm(dd);
        const double kappa = -2.0 * cross(d1, d2) / (l1 * l2 * ld);
        Vec2 nu{-dd.r / ld, dd.x / ld};
        v[N - 1] = -(kappa + (n - 1) * nu.r / g.us[N - 1]) * nu;
    }
    return v;
}

double mean_chord(const ProfileGraph& g) {
    return g.arc_length() / static_cast<double>(g.size() - 1);
}

double min_interior_height(const ProfileGraph& g) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j + 1 < g.size(); ++j) m = std::min(m, g.us[j]);
    return m;
}

bool monotone_x(const ProfileGraph& g) {
    for (std::size_t j = 0; j + 1 < g.size(); ++j)
        if (!(g.xs[j] < g.xs[j + 1])) return false;
    return true;
}

bool interior_positive(const ProfileGraph& g) {
    for (std::size_t j = 1; j + 1 < g.size(); ++j)
        if (!(g.us[j] > 0.0)) return false;
    return true;
}

ProfileGraph advance(const ProfileGraph& g, const std::vector<Vec2>& v, double dt) {
    ProfileGraph out = g;
    for (std::size_t j = 0; j < g.size(); ++j) {
        out.xs[j] = g.xs[j] + dt * v[j].x;
        out.us[j] = g.us[j] + dt * v[j].r;
    }
    if (out.closed_left) out.us.front() = 0.0;
    if (out.closed_right) out.us.back() = 0.0;
    return out;
}

// Material collapsing radially onto the axis next to a cap is absorbed into
// the tip: the endpoint advances over interior nodes whose height falls
// well below the node spacing. Without this the Lagrangian nodes jam the
// time step as u -> 0 on monotone stretches (no local minimum, so no pinch
// fires there).
void absorb_into_tips(ProfileGraph& g, const FlowConfig& config) {
    const double floor = 0.35 * std::min(config.spacing, mean_chord(g));
    while (g.closed_left && g.size() > 9 && g.us[1] < floor) {
        g.xs.erase(g.xs.begin());
        g.us.erase(g.us.begin());
        g.us.front() = 0.0;
    }
    while (g.closed_right && g.size() > 9 && g.us[g.size() - 2] < floor) {
        g.xs.pop_back();
        g.us.pop_back();
        g.us.back() = 0.0;
    }
}

void maybe_resample(ProfileGraph& g, const FlowConfig& config) {
    const double L = g.arc_length();
    const double target = std::min(config.spacing, L / 8.5);
    double cmin = std::numeric_limits<double>::infinity(), cmax = 0.0;
    for (std::size_t j = 0; j + 1 < g.size(); ++j) {
        const double h = norm(g.node(j + 1) - g.node(j));
        cmin = std::min(cmin, h);
        cmax = std::max(cmax, h);
    }
    if (cmax / cmin > 3.0 || cmax > 1.7 * target || (cmax < 0.55 * target && g.size() > 9))
        g = resample_curved(g, target);
}

}  // namespace

double velocity(const ProfileGraph& component, std::size_t index, int n) {
    const std::size_t N = component.size();
    if (N < 3) throw std::invalid_argument("velocity: component too small");
    if (index >= N) throw std::invalid_argument("velocity: index out of range");
    const bool left_end = index == 0, right_end = index == N - 1;
    if (!left_end && !right_end) {
        if (!(component.us[index] > 0.0))
            throw std::invalid_argument("velocity: interior node with u <= 0");
        const double hm = component.xs[index] - component.xs[index - 1];
        const double hp = component.xs[index + 1] - component.xs[index];
        const double um = component.us[index - 1], u0 = component.us[index],
                     up = component.us[index + 1];
        const double ux = (hm * hm * (up - u0) + hp * hp * (u0 - um)) / (hm * hp * (hm + hp));
        const double uxx = 2.0 * (hm * (up - u0) - hp * (u0 - um)) / (hm * hp * (hm + hp));
        return uxx / (1.0 + ux * ux) - (n - 1) / u0;
    }
    if ((left_end && component.closed_left) || (right_end && component.closed_right)) {
        const double rho = tip_radius(component, left_end);
        return (left_end ? 1.0 : -1.0) * n / rho;
    }
    // Open end: zero-slope mirror.
    const std::size_t j1 = left_end ? 1 : N - 2;
    const double dx = std::abs(component.xs[j1] - component.xs[index]);
    const double uxx = 2.0 * (component.us[j1] - component.us[index]) / (dx * dx);
    return uxx - (n - 1) / component.us[index];
}

double step(FlowState& state, const FlowConfig& config,
            double dt_max) {
    if (state.status != FlowStatus::running && state.status != FlowStatus::pinched)
        throw std::logic_error("step: flow is not running");

    // Velocities and the step bound.
    std::vector<std::vector<Vec2>> vel(state.components.size());
    double dt = dt_max;
    for (std::size_t c = 0; c < state.components.size(); ++c) {
        const ProfileGraph& g = state.components[c];
        vel[c] = node_velocities(g, config.n);
        const double h = std::min(config.spacing, mean_chord(g));
        double vmax = 0.0;
        for (const Vec2& w : vel[c]) vmax = std::max(vmax, norm(w));
        double bound = h * h / 2.0;
        const double mu = min_interior_height(g);
        if (g.closed_left || g.closed_right) bound = std::min(bound, mu * h);
        if (vmax > 0.0) bound = std::min(bound, h / (2.0 * vmax));
        dt = std::min(dt, config.cfl * bound);
    }

    for (int attempt = 0;; ++attempt) {
        if (dt < 1e-14) {
            state.status = FlowStatus::blown_up;
            return 0.0;
        }
        // Explicit midpoint.
        std::vector<ProfileGraph> mid(state.components.size());
        bool ok = true;
        for (std::size_t c = 0; c < state.components.size() && ok; ++c) {
            mid[c] = advance(state.components[c], vel[c], 0.5 * dt);
            ok = monotone_x(mid[c]) && interior_positive(mid[c]);
        }
        std::vector<ProfileGraph> next(state.components.size());
        if (ok) {
            for (std::size_t c = 0; c < state.components.size() && ok; ++c) {
                const auto vm = node_velocities(mid[c], config.n);
                next[c] = advance(state.components[c], vm, dt);
                ok = monotone_x(next[c]) && interior_positive(next[c]);
            }
        }
        if (!ok && attempt < 40) {
            dt *= 0.5;
            continue;
        }
        if (!ok) {
            state.status = FlowStatus::blown_up;
            return 0.0;
        }
        state.components = std::move(next);
        break;
    }
    for (auto& g : state.components) {
        absorb_into_tips(g, config);
        maybe_resample(g, config);
    }
    state.t += dt;
    return dt;
}

// ---------------------------------------------------------------------------
// Pinch handling

namespace {

std::optional<std::size_t> find_pinching_minimum(const ProfileGraph& g, double pinch_eps) {
    for (std::size_t j = 1; j + 1 < g.size(); ++j) {
        if (g.us[j] < pinch_eps && g.us[j] < g.us[j - 1] && g.us[j] < g.us[j + 1]) return j;
    }
    return std::nullopt;
}

// Monotone parametric cubic cap from (x0, u0) down to the axis over
// horizontal span d (d > 0 descends rightward, d < 0 leftward). The Bezier
// leaves the cut point horizontally and meets the axis perpendicular --
// a cap tangent to the axis would starve the forcing term and crash the
// neighboring nodes through zero.
std::vector<Vec2> cap_blend(double x0, double u0, double d, double spacing) {
    const Vec2 p0{x0, u0}, p1{x0 + 0.5 * d, u0}, p2{x0 + d, 0.5 * u0}, p3{x0 + d, 0.0};
    const int steps = std::max(6, static_cast<int>(std::lround(std::abs(d) / spacing)) * 2);
    std::vector<Vec2> out;
    out.reserve(steps);
    for (int k = 1; k <= steps; ++k) {
        const double t = static_cast<double>(k) / steps;
        const double s = 1.0 - t;
        Vec2 p = (s * s * s) * p0 + (3.0 * s * s * t) * p1 + (3.0 * s * t * t) * p2 +
                 (t * t * t) * p3;
        out.push_back(p);
    }
    out.back() = {x0 + d, 0.0};
    return out;
}

// Splits one component at a pinching minimum. Returns false when the neck
// is unresolvable on the current grid.
bool split_component(const ProfileGraph& g, std::size_t jstar, const FlowConfig& config,
                     ProfileGraph& left, ProfileGraph& right) {
    const double xs = g.xs[jstar];
    std::size_t jL = jstar, jR = jstar;
    while (jL > 0 && g.xs[jL] > xs - config.pinch_eps) --jL;
    while (jR + 1 < g.size() && g.xs[jR] < xs + config.pinch_eps) ++jR;
    if (jR - jL + 1 < 4) return false;
    if (jL < 3 || jR + 4 > g.size()) return false;

    left = ProfileGraph{};
    left.closed_left = g.closed_left;
    left.closed_right = true;
    left.xs.assign(g.xs.begin(), g.xs.begin() + jL + 1);
    left.us.assign(g.us.begin(), g.us.begin() + jL + 1);
    const double dL = std::min(2.0 * config.pinch_eps, 0.9 * (xs - g.xs[jL]));
    for (const Vec2& p : cap_blend(g.xs[jL], g.us[jL], dL, config.spacing)) {
        left.xs.push_back(p.x);
        left.us.push_back(p.r);
    }

    right = ProfileGraph{};
    right.closed_left = true;
    right.closed_right = g.closed_right;
    const double dR = std::min(2.0 * config.pinch_eps, 0.9 * (g.xs[jR] - xs));
    auto cap = cap_blend(g.xs[jR], g.us[jR], -dR, config.spacing);
    std::reverse(cap.begin(), cap.end());
    for (const Vec2& p : cap) {
        right.xs.push_back(p.x);
        right.us.push_back(p.r);
    }
    right.xs.insert(right.xs.end(), g.xs.begin() + jR, g.xs.end());
    right.us.insert(right.us.end(), g.us.begin() + jR, g.us.end());

    const double targetL = std::min(config.spacing, left.arc_length() / 8.5);
    const double targetR = std::min(config.spacing, right.arc_length() / 8.5);
    left = resample_curved(left, targetL);
    right = resample_curved(right, targetR);
    return monotone_x(left) && monotone_x(right);
}

}  // namespace

void handle_pinch(FlowState& state, const FlowConfig& config, std::vector<FlowEvent>& events) {
    bool progressing = true;
    while (progressing) {
        progressing = false;
        for (std::size_t c = 0; c < state.components.size(); ++c) {
            auto jstar = find_pinching_minimum(state.components[c], config.pinch_eps);
            if (!jstar) continue;
            const double px = state.components[c].xs[*jstar];
            const double pr = state.components[c].us[*jstar];
            ProfileGraph left, right;
            bool ok = split_component(state.components[c], *jstar, config, left, right);
            if (!ok) {
                // Refine once, then give up.
                ProfileGraph refined =
                    resample_curved(state.components[c],
                             std::min(config.spacing / 2.0, state.components[c].arc_length() / 8.5));
                auto j2 = find_pinching_minimum(refined, config.pinch_eps);
                ok = j2 && split_component(refined, *j2, config, left, right);
                if (!ok) {
                    state.status = FlowStatus::blown_up;
                    events.push_back({state.t, EventKind::error, px, pr, "unresolvable pinch"});
                    return;
                }
            }
            events.push_back({state.t, EventKind::pinch, px, pr, ""});
            events.push_back({state.t, EventKind::split, px, pr, ""});
            state.components[c] = std::move(left);
            state.components.insert(state.components.begin() + c + 1, std::move(right));
            progressing = true;
            break;
        }
    }
    if (state.status == FlowStatus::pinched) state.status = FlowStatus::running;
}

// ---------------------------------------------------------------------------
// Evolution driver

namespace {

void check_extinctions(FlowState& state, const FlowConfig& config, std::vector<FlowEvent>& events,
                       std::optional<double>& extinction_time) {
    for (std::size_t c = 0; c < state.components.size();) {
        const ProfileGraph& g = state.components[c];
        const double extent = g.max_x() - g.min_x();
        const double height = g.max_height();
        if (std::max(extent, height) < config.tip_eps) {
            events.push_back({state.t, EventKind::component_extinct,
                              0.5 * (g.min_x() + g.max_x()), height, ""});
            state.components.erase(state.components.begin() + c);
        } else if (height < config.tip_eps && (g.closed_left || g.closed_right)) {
            events.push_back({state.t, EventKind::cap_extinct, 0.5 * (g.min_x() + g.max_x()),
                              height, ""});
            state.components.erase(state.components.begin() + c);
        } else {
            ++c;
        }
    }
    if (state.components.empty() && state.status == FlowStatus::running) {
        state.status = FlowStatus::extinct;
        if (!extinction_time) extinction_time = state.t;
    }
}

bool components_disjoint(const FlowState& state) {
    for (std::size_t a = 0; a < state.components.size(); ++a)
        for (std::size_t b = a + 1; b < state.components.size(); ++b)
            if (min_distance(to_param(state.components[a]), to_param(state.components[b])) <= 0.0)
                return false;
    return true;
}

}  // namespace

FlowTrace evolve(const ProfileGraph& initial, const FlowConfig& config, const StopPredicate& stop,
                 double snapshot_offset) {
    config.require_valid();
    FlowTrace trace;
    trace.config = config;

    FlowState state;
    state.t = 0.0;
    state.components.push_back(resample_curved(initial, std::min(config.spacing, initial.arc_length() / 8.5)));
    state.components.back().require_valid("evolve");

    trace.initial = state;
    trace.snapshots.push_back(state);
    long snap_index = 1;
    while (snapshot_offset + static_cast<double>(snap_index - 1) * config.snapshot_stride > 1e-12)
        --snap_index;

    while (state.status == FlowStatus::running) {
        if (state.t >= config.max_time - 1e-12) break;
        const double next_snap =
            snapshot_offset + static_cast<double>(snap_index) * config.snapshot_stride;
        const double dt_max = std::min(next_snap, config.max_time) - state.t;
        step(state, config, dt_max);
        if (state.status == FlowStatus::blown_up) {
            trace.events.push_back({state.t, EventKind::error, 0.0, 0.0, "time step collapsed"});
            break;
        }

        bool pinch_pending = false;
        for (const auto& g : state.components)
            if (find_pinching_minimum(g, config.pinch_eps)) pinch_pending = true;
        if (pinch_pending) {
            state.status = FlowStatus::pinched;
            handle_pinch(state, config, trace.events);
            if (state.status == FlowStatus::blown_up) break;
        }

        check_extinctions(state, config, trace.events, trace.extinction_time);
        if (state.status == FlowStatus::extinct) {
            trace.snapshots.push_back(state);
            break;
        }

        if (stop && stop(state)) {
            double bx = 0.0, br = 0.0;
            for (const auto& g : state.components)
                for (std::size_t j = 0; j < g.size(); ++j)
                    if (g.us[j] > br) {
                        br = g.us[j];
                        bx = g.xs[j];
                    }
            trace.events.push_back({state.t, EventKind::threshold, bx, br, ""});
            trace.snapshots.push_back(state);
            break;
        }

        if (state.t >= next_snap - 1e-12) {
            state.t = next_snap;  // keep the snapshot grid exact
            if (!components_disjoint(state)) {
                state.status = FlowStatus::blown_up;
                trace.events.push_back(
                    {state.t, EventKind::error, 0.0, 0.0, "components intersect"});
                trace.snapshots.push_back(state);
                break;
            }
            trace.snapshots.push_back(state);
            ++snap_index;
        }
    }

    if (trace.snapshots.empty() || std::abs(trace.snapshots.back().t - state.t) > 1e-12 ||
        trace.snapshots.back().status != state.status)
        trace.snapshots.push_back(state);
    return trace;
}

// ---------------------------------------------------------------------------
// Canonical profiles

ProfileGraph semicircle_profile(double radius, double center_x, double spacing) {
    if (!(radius > 0.0)) throw std::invalid_argument("semicircle_profile: radius must be positive");
    const int N = std::max(8, static_cast<int>(std::lround(M_PI * radius / spacing)));
    ProfileGraph g;
    g.closed_left = g.closed_right = true;
    g.xs.reserve(N + 1);
    g.us.reserve(N + 1);
    for (int k = 0; k <= N; ++k) {
        const double phi = M_PI - M_PI * k / N;
        g.xs.push_back(center_x + radius * std::cos(phi));
        g.us.push_back(k == 0 || k == N ? 0.0 : radius * std::sin(phi));
    }
    return g;
}

ProfileGraph flat_profile(double u0, double x_lo, double x_hi, double spacing) {
    if (!(u0 > 0.0) || !(x_hi > x_lo)) throw std::invalid_argument("flat_profile: bad arguments");
    const int N = std::max(8, static_cast<int>(std::lround((x_hi - x_lo) / spacing)));
    ProfileGraph g;
    g.closed_left = g.closed_right = false;
    for (int k = 0; k <= N; ++k) {
        g.xs.push_back(x_lo + (x_hi - x_lo) * k / N);
        g.us.push_back(u0);
    }
    return g;
}

}  // namespace pancake
