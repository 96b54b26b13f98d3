#include "pancake/shooter.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pancake/num_util.hpp"

namespace pancake {

std::string to_string(ComponentLabel l) {
    switch (l) {
        case ComponentLabel::OneComponent: return "OneComponent";
        case ComponentLabel::TwoComponents: return "TwoComponents";
        case ComponentLabel::Undetermined: return "Undetermined";
    }
    return "?";
}

Classification classify(double m, const NeckJoinSpec& join_spec, double M_threshold,
                        const FlowConfig& flow) {
    NeckJoinSpec js = join_spec;
    js.m = m;
    js.rho.reset();
    const JoinedProfile joined = join(js);
    const double girth0 = joined.curve.max_height();
    if (!(M_threshold < girth0))
        throw std::invalid_argument("classify: M_threshold must lie below the initial girth");
    // The threshold must sit well above the scale at which necks count as
    // pinched, or the dichotomy is unreadable.
    if (!(M_threshold > 4.0 * flow.pinch_eps))
        throw std::invalid_argument("classify: M_threshold must exceed the neck-pinch scale");

    Classification out;
    out.trace = evolve(joined.curve, flow,
                       [M_threshold](const FlowState& s) { return s.max_height() <= M_threshold; });
    const FlowState& last = out.trace.snapshots.back();
    out.T_m = last.t;
    out.components_at_T = static_cast<int>(last.components.size());
    if (!out.trace.has_event(EventKind::threshold)) {
        out.label = ComponentLabel::Undetermined;
        return out;
    }
    out.pinched_before_T = out.trace.has_event(EventKind::pinch, out.T_m);
    if (out.pinched_before_T || out.components_at_T >= 2)
        out.label = ComponentLabel::TwoComponents;
    else if (out.components_at_T == 1)
        out.label = ComponentLabel::OneComponent;
    else
        out.label = ComponentLabel::Undetermined;
    return out;
}

namespace {

void audit_monotone(ShootResult& r) {
    // Sorted by m, the labels must read Two...Two, One...One.
    std::vector<ShootSample> sorted = r.samples;
    std::sort(sorted.begin(), sorted.end(),
              [](const ShootSample& a, const ShootSample& b) { return a.m < b.m; });
    bool seen_one = false;
    for (const auto& s : sorted) {
        if (s.label == ComponentLabel::OneComponent) seen_one = true;
        if (s.label == ComponentLabel::TwoComponents && seen_one) {
            r.anomalies.push_back("non-monotone classification at m=" + std::to_string(s.m));
            r.suspect = true;
        }
    }
}

}  // namespace

ShootResult bisect(const NeckJoinSpec& join_spec, const ShootConfig& cfg, const FlowConfig& flow) {
    if (!(cfg.m_lo < cfg.m_hi)) throw std::invalid_argument("bisect: m_lo must be below m_hi");
    if (!(cfg.tol_m > 0.0)) throw std::invalid_argument("bisect: tol_m must be positive");

    ShootResult r;
    r.s = join_spec.pancake.s;

    auto run = [&](double m) {
        Classification c = classify(m, join_spec, cfg.M_threshold, flow);
        r.samples.push_back({m, c.label, c.T_m});
        ++r.classify_calls;
        return c.label;
    };

    double lo = cfg.m_lo, hi = cfg.m_hi;
    const ComponentLabel llo = run(lo);
    if (llo != ComponentLabel::TwoComponents)
        throw std::runtime_error("bisect: invalid bracket: classify(m_lo) = " + to_string(llo));
    const ComponentLabel lhi = run(hi);
    if (lhi != ComponentLabel::OneComponent)
        throw std::runtime_error("bisect: invalid bracket: classify(m_hi) = " + to_string(lhi));

    int iters = 0;
    while (hi - lo > cfg.tol_m) {
        if (++iters > cfg.max_iters) throw std::runtime_error("bisect: iteration limit exceeded");
        const double mid = 0.5 * (lo + hi);
        const ComponentLabel l = run(mid);
        if (l == ComponentLabel::Undetermined)
            throw std::runtime_error("bisect: Undetermined classification at m=" +
                                     std::to_string(mid) + "; aborting rather than guessing");
        if (l == ComponentLabel::TwoComponents)
            lo = mid;
        else
            hi = mid;
    }
    r.m_lo = lo;
    r.m_hi = hi;
    r.m_star = 0.5 * (lo + hi);
    r.bracket_width = hi - lo;
    r.m_bar = r.m_star + cfg.delta;
    audit_monotone(r);
    return r;
}

void build_old_flow(ShootResult& result, const NeckJoinSpec& join_spec, const ShootConfig& cfg,
                    const FlowConfig& flow, double extend_below_girth) {
    const double m_bar = result.m_star + cfg.delta;
    result.m_bar = m_bar;

    NeckJoinSpec js = join_spec;
    js.m = m_bar;
    js.rho.reset();
    const JoinedProfile joined = join(js);
    result.inscribed_radius = inscribed_axis_disk_radius(joined.curve);

    const auto stop_threshold = [&](const FlowState& s) {
        return s.max_height() <= cfg.M_threshold;
    };

    // Pass 1 finds the threshold time. Pass 2 reruns to exactly that time
    // with the snapshot grid shifted so recentered snapshots land on stride
    // multiples (the threshold crossing itself is only resolved to one time
    // step, so pass 2 stops on time, not on the height condition).
    FlowTrace probe = evolve(joined.curve, flow, stop_threshold);
    if (!probe.has_event(EventKind::threshold))
        throw std::runtime_error("build_old_flow: margin run never reached the threshold");
    const double T = probe.snapshots.back().t;
    const double offset = T - std::floor(T / flow.snapshot_stride) * flow.snapshot_stride;
    FlowConfig to_T = flow;
    to_T.max_time = T;
    FlowTrace trace = evolve(joined.curve, to_T, nullptr, offset);
    if (std::abs(trace.snapshots.back().t - T) > 1e-9)
        throw std::runtime_error("build_old_flow: threshold rerun diverged");
    if (std::abs(trace.snapshots.back().max_height() - cfg.M_threshold) >
        0.05 * cfg.M_threshold)
        throw std::runtime_error("build_old_flow: threshold rerun left the height window");
    {
        double bx = 0.0, br = 0.0;
        for (const auto& g : trace.snapshots.back().components)
            for (std::size_t j = 0; j < g.size(); ++j)
                if (g.us[j] > br) {
                    br = g.us[j];
                    bx = g.xs[j];
                }
        trace.events.push_back({T, EventKind::threshold, bx, br, ""});
    }

    // t = 0 slice contract: connected, compact, non-convex, interior neck.
    const FlowState slice = trace.snapshots.back();
    if (slice.components.size() != 1)
        throw std::runtime_error("build_old_flow: margin delta too large/small: t=0 slice has " +
                                 std::to_string(slice.components.size()) +
                                 " components (want 1); m_bar=" + std::to_string(m_bar) +
                                 " m_star=" + std::to_string(result.m_star));
    const CriticalPoints cp = count_critical_points(slice.components.front(), flow_plateau_tol(flow));
    const double m0 = slice.neck_value();
    if (cp.maxima != 2 || cp.minima != 1 || !(m0 > 0.0))
        throw std::runtime_error(
            "build_old_flow: margin delta too large/small: t=0 slice not non-convex "
            "(critical points " +
            std::to_string(cp.maxima) + "," + std::to_string(cp.minima) +
            ", neck=" + std::to_string(m0) + ")");

    if (extend_below_girth > 0.0 && slice.girth() > extend_below_girth) {
        FlowTrace tail = evolve(slice.components.front(), flow,
                                [extend_below_girth](const FlowState& s) {
                                    return s.girth() < extend_below_girth;
                                });
        tail.shift_times(T);
        for (std::size_t k = 1; k < tail.snapshots.size(); ++k)
            trace.snapshots.push_back(tail.snapshots[k]);
        for (const auto& e : tail.events) trace.events.push_back(e);
        if (tail.extinction_time) trace.extinction_time = tail.extinction_time;
    }

    trace.shift_times(-T);
    result.T_bar = T;
    result.recentered_trace = std::move(trace);
}

HausdorffResult state_hausdorff(const FlowState& a, const FlowState& b, const Region& window) {
    std::vector<ParamCurve> ca, cb;
    for (const auto& g : a.components)
        for (auto& piece : clip_to_window(to_param(g), window)) ca.push_back(std::move(piece));
    for (const auto& g : b.components)
        for (auto& piece : clip_to_window(to_param(g), window)) cb.push_back(std::move(piece));
    if (ca.empty() && cb.empty()) return {HausdorffStatus::both_empty, 0.0};
    if (ca.empty() || cb.empty()) return {HausdorffStatus::one_sided_empty, 0.0};
    // Directed distances over the union of clipped pieces.
    double h = 0.0;
    auto directed = [&](const std::vector<ParamCurve>& from, const std::vector<ParamCurve>& to) {
        double worst = 0.0;
        for (const auto& f : from) {
            for (std::size_t i = 0; i < f.size(); ++i) {
                double best = std::numeric_limits<double>::infinity();
                for (const auto& t : to) best = std::min(best, min_distance(ParamCurve{{f.pts[i]}, false}, t));
                worst = std::max(worst, best);
            }
        }
        return worst;
    };
    h = std::max(directed(ca, cb), directed(cb, ca));
    return {HausdorffStatus::ok, h};
}

std::vector<ConvergencePair> convergence_study(const std::vector<const ShootResult*>& results,
                                               const Region& window,
                                               const std::vector<double>& times) {
    window.require_valid("convergence_study");
    if (!(window.r_lo > 0.0))
        throw std::invalid_argument("convergence_study: window must be disjoint from the axis");
    for (double t : times)
        if (t > 1e-12) throw std::invalid_argument("convergence_study: sample times must be <= 0");
    for (const ShootResult* r : results)
        if (!r || !r->recentered_trace)
            throw std::invalid_argument("convergence_study: every result needs a recentered trace");

    std::vector<ConvergencePair> out;
    for (std::size_t i = 0; i + 1 < results.size(); ++i) {
        ConvergencePair pair;
        pair.s_a = results[i]->s;
        pair.s_b = results[i + 1]->s;
        const FlowTrace& ta = *results[i]->recentered_trace;
        const FlowTrace& tb = *results[i + 1]->recentered_trace;
        for (double t : times) {
            ConvergenceCell cell;
            cell.t = t;
            const FlowState* sa = ta.state_at(t, 1e-6);
            const FlowState* sb = tb.state_at(t, 1e-6);
            if (!sa || !sb) {
                cell.absent = true;
            } else {
                const HausdorffResult h = state_hausdorff(*sa, *sb, window);
                if (h.status != HausdorffStatus::ok)
                    cell.absent = true;
                else
                    cell.distance = h.distance;
            }
            if (!cell.absent) pair.cauchy = std::max(pair.cauchy, cell.distance);
            pair.cells.push_back(cell);
        }
        out.push_back(std::move(pair));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Dumbbell

ProfileGraph make_dumbbell(double sphere_radius, double gap_half, double m, double spacing) {
    const double R = sphere_radius, gap = gap_half;
    if (!(R > 0.0) || !(gap > 0.0)) throw std::invalid_argument("dumbbell: bad geometry");
    if (!(m > 0.0) || !(m < R)) throw std::invalid_argument("dumbbell: m must be in (0, R)");
    const double cx = gap + R;  // center of the right sphere

    // Neck minimum achieved by the tangent arc when the inner sphere arc is
    // cut at height rho.
    auto m_of_rho = [&](double rho) {
        const double px = cx - std::sqrt(R * R - rho * rho);
        const Vec2 u{(px - cx) / R, rho / R};
        const Vec2 tangent{u.r, -u.x};  // ascending
        const double arc_r = px / tangent.r;
        return rho + arc_r * tangent.x - arc_r;
    };
    const double rho = bisect_root([&](double r) { return m_of_rho(r) - m; }, 1e-9 * R,
                                   R * (1.0 - 1e-9), 1e-14 * R);

    const double px = cx - std::sqrt(R * R - rho * rho);
    const Vec2 u{(px - cx) / R, rho / R};
    const Vec2 tangent{u.r, -u.x};
    const double arc_r = px / tangent.r;
    const double cy = rho + arc_r * tangent.x;
    const double alpha_max = std::asin(std::min(1.0, tangent.r));

    std::vector<Vec2> right;
    right.push_back({0.0, cy - arc_r});
    const int arc_steps = std::max(4, static_cast<int>(std::lround(alpha_max * arc_r / spacing)));
    for (int k = 1; k <= arc_steps; ++k) {
        const double a = alpha_max * k / arc_steps;
        right.push_back({arc_r * std::sin(a), cy - arc_r * std::cos(a)});
    }
    right.back() = {px, rho};
    const double beta_c = std::atan2(rho, px - cx);  // in (pi/2, pi)
    const int sph_steps = std::max(8, static_cast<int>(std::lround(beta_c * R / spacing)));
    for (int k = 1; k <= sph_steps; ++k) {
        const double b = beta_c * (1.0 - static_cast<double>(k) / sph_steps);
        right.push_back({cx + R * std::cos(b), R * std::sin(b)});
    }
    right.back() = {cx + R, 0.0};

    ProfileGraph half;
    half.closed_left = false;
    half.closed_right = true;
    for (const Vec2& q : right) {
        if (!half.xs.empty() && !(q.x > half.xs.back())) continue;
        half.xs.push_back(q.x);
        half.us.push_back(q.r);
    }
    ProfileGraph rh = resample(half, spacing);
    rh.us.back() = 0.0;

    ProfileGraph out;
    out.closed_left = out.closed_right = true;
    for (std::size_t j = rh.size(); j-- > 1;) {
        out.xs.push_back(-rh.xs[j]);
        out.us.push_back(rh.us[j]);
    }
    for (std::size_t j = 0; j < rh.size(); ++j) {
        out.xs.push_back(rh.xs[j]);
        out.us.push_back(rh.us[j]);
    }
    out.require_valid("make_dumbbell");
    return out;
}

}  // namespace pancake
