#include "pancake/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pancake {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double clamp01(double t) { return std::min(1.0, std::max(0.0, t)); }

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 == 0.0) return norm(p - a);
    const double t = clamp01(dot(p - a, ab) / len2);
    return norm(p - (a + t * ab));
}

// Axis-aligned bounding boxes over contiguous segment ranges, used to prune
// polyline distance queries.
struct SegmentTree {
    struct Box {
        double xlo, xhi, rlo, rhi;
        std::size_t lo, hi;  // segment index range [lo, hi)
    };
    const ParamCurve* curve = nullptr;
    std::vector<Box> boxes;  // implicit binary heap layout

    static double box_dist(const Box& a, const Box& b) {
        const double dx = std::max({a.xlo - b.xhi, b.xlo - a.xhi, 0.0});
        const double dr = std::max({a.rlo - b.rhi, b.rlo - a.rhi, 0.0});
        return std::hypot(dx, dr);
    }
    static double box_dist_point(Vec2 p, const Box& b) {
        const double dx = std::max({b.xlo - p.x, p.x - b.xhi, 0.0});
        const double dr = std::max({b.rlo - p.r, p.r - b.rhi, 0.0});
        return std::hypot(dx, dr);
    }

    void build(const ParamCurve& c) {
        curve = &c;
        const std::size_t n = c.segment_count();
        boxes.assign(4 * std::max<std::size_t>(n, 1), Box{});
        if (n > 0) build_node(1, 0, n);
    }
    void build_node(std::size_t node, std::size_t lo, std::size_t hi) {
        Box& b = boxes[node];
        b.lo = lo;
        b.hi = hi;
        b.xlo = b.rlo = kInf;
        b.xhi = b.rhi = -kInf;
        if (hi - lo <= 8) {
            for (std::size_t i = lo; i < hi; ++i) {
                for (Vec2 p : {curve->segment_a(i), curve->segment_b(i)}) {
                    b.xlo = std::min(b.xlo, p.x);
                    b.xhi = std::max(b.xhi, p.x);
                    b.rlo = std::min(b.rlo, p.r);
                    b.rhi = std::max(b.rhi, p.r);
                }
            }
            return;
        }
        const std::size_t mid = (lo + hi) / 2;
        build_node(2 * node, lo, mid);
        build_node(2 * node + 1, mid, hi);
        const Box& l = boxes[2 * node];
        const Box& r = boxes[2 * node + 1];
        b.xlo = std::min(l.xlo, r.xlo);
        b.xhi = std::max(l.xhi, r.xhi);
        b.rlo = std::min(l.rlo, r.rlo);
        b.rhi = std::max(l.rhi, r.rhi);
    }

    void point_query(Vec2 p, std::size_t node, double& best) const {
        const Box& b = boxes[node];
        if (box_dist_point(p, b) >= best) return;
        if (b.hi - b.lo <= 8) {
            for (std::size_t i = b.lo; i < b.hi; ++i)
                best = std::min(best, point_segment_distance(p, curve->segment_a(i), curve->segment_b(i)));
            return;
        }
        point_query(p, 2 * node, best);
        point_query(p, 2 * node + 1, best);
    }
    double point_distance(Vec2 p) const {
        double best = kInf;
        if (curve && curve->segment_count() > 0) point_query(p, 1, best);
        return best;
    }
};

double segment_segment_distance(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    // Distance between two segments: endpoint-to-segment suffices unless they
    // cross, which callers rule out separately; still guard with a crossing test.
    const double d1 = cross(b - a, c - a);
    const double d2 = cross(b - a, d - a);
    const double d3 = cross(d - c, a - c);
    const double d4 = cross(d - c, b - c);
    if (((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0))) return 0.0;
    return std::min(std::min(point_segment_distance(a, c, d), point_segment_distance(b, c, d)),
                    std::min(point_segment_distance(c, a, b), point_segment_distance(d, a, b)));
}

}  // namespace

// ---------------------------------------------------------------------------
// ProfileGraph / ParamCurve basics

double ProfileGraph::max_height() const {
    double m = 0.0;
    for (double u : us) m = std::max(m, u);
    return m;
}

double ProfileGraph::arc_length() const {
    double L = 0.0;
    for (std::size_t j = 0; j + 1 < xs.size(); ++j) L += norm(node(j + 1) - node(j));
    return L;
}

double ProfileGraph::diameter() const {
    return std::max(max_x() - min_x(), max_height());
}

std::optional<double> ProfileGraph::height_at(double x) const {
    if (xs.empty() || x < xs.front() || x > xs.back()) return std::nullopt;
    const auto it = std::lower_bound(xs.begin(), xs.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - xs.begin());
    if (j == 0) return us.front();
    const double t = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
    return us[j - 1] + t * (us[j] - us[j - 1]);
}

std::optional<std::string> ProfileGraph::invariant_violation() const {
    if (xs.size() != us.size()) return "coordinate arrays differ in length";
    if (xs.size() < 8) return "fewer than 8 nodes";
    for (std::size_t j = 0; j + 1 < xs.size(); ++j)
        if (!(xs[j] < xs[j + 1])) return "x-coordinates not strictly increasing";
    for (std::size_t j = 0; j < us.size(); ++j) {
        if (!(us[j] >= 0.0) || !std::isfinite(us[j])) return "negative or non-finite height";
        const bool interior = j > 0 && j + 1 < us.size();
        if (interior && us[j] <= 0.0) return "non-positive interior height";
    }
    if (closed_left && us.front() != 0.0) return "closed left end with u != 0";
    if (closed_right && us.back() != 0.0) return "closed right end with u != 0";
    if (!closed_left && us.front() <= 0.0) return "open left end with u <= 0";
    if (!closed_right && us.back() <= 0.0) return "open right end with u <= 0";
    const double mean = arc_length() / static_cast<double>(xs.size() - 1);
    for (std::size_t j = 0; j + 1 < xs.size(); ++j) {
        const double h = norm(node(j + 1) - node(j));
        if (h > 4.0 * mean || h < mean / 4.0) return "node spacing outside factor 4 of mean";
    }
    return std::nullopt;
}

void ProfileGraph::require_valid(const char* who) const {
    if (auto why = invariant_violation())
        throw std::invalid_argument(std::string(who) + ": invalid profile: " + *why);
}

double ParamCurve::length() const {
    double L = 0.0;
    for (std::size_t i = 0; i < segment_count(); ++i) L += norm(segment_b(i) - segment_a(i));
    return L;
}

ParamCurve to_param(const ProfileGraph& g) {
    ParamCurve c;
    c.pts.reserve(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) c.pts.push_back(g.node(j));
    c.closed = false;
    return c;
}

void Region::require_valid(const char* who) const {
    if (!(x_lo < x_hi) || !(r_lo < r_hi))
        throw std::invalid_argument(std::string(who) + ": region bounds must satisfy lo < hi");
}

Region Region::below(double R) {
    Region w;
    w.r_hi = R;
    return w;
}

Region Region::above(double c) {
    Region w;
    w.r_lo = c;
    return w;
}

// ---------------------------------------------------------------------------
// Curvature

double curvature_at(const ProfileGraph& curve, std::size_t index) {
    if (index == 0 || index + 1 >= curve.size())
        throw std::invalid_argument("curvature_at: needs interior node");
    const Vec2 pm = curve.node(index - 1);
    const Vec2 p0 = curve.node(index);
    const Vec2 pp = curve.node(index + 1);
    const double hm = norm(p0 - pm);
    const double hp = norm(pp - p0);
    if (hm == 0.0 || hp == 0.0) throw std::invalid_argument("curvature_at: coincident neighbors");
    // Centered differences in the chord-length parameter.
    const double denom = hm * hp * (hm + hp);
    const auto d1 = [&](double vm, double v0, double vp) {
        return (hm * hm * (vp - v0) + hp * hp * (v0 - vm)) / denom;
    };
    const auto d2 = [&](double vm, double v0, double vp) {
        return 2.0 * (hm * (vp - v0) - hp * (v0 - vm)) / denom;
    };
    const double xd = d1(pm.x, p0.x, pp.x), xdd = d2(pm.x, p0.x, pp.x);
    const double rd = d1(pm.r, p0.r, pp.r), rdd = d2(pm.r, p0.r, pp.r);
    const double speed2 = xd * xd + rd * rd;
    return -(xd * rdd - rd * xdd) / std::pow(speed2, 1.5);
}

// ---------------------------------------------------------------------------
// Intersection counting

namespace {

IntersectionCount count_graph_graph(const ProfileGraph& a, const ProfileGraph& b, double tol) {
    IntersectionCount out;
    const double lo = std::max(a.min_x(), b.min_x());
    const double hi = std::min(a.max_x(), b.max_x());
    if (!(lo < hi)) return out;

    std::vector<double> grid;
    grid.reserve(a.size() + b.size());
    for (double x : a.xs)
        if (x >= lo && x <= hi) grid.push_back(x);
    for (double x : b.xs)
        if (x >= lo && x <= hi) grid.push_back(x);
    grid.push_back(lo);
    grid.push_back(hi);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end(),
                           [&](double p, double q) { return std::abs(p - q) < 1e-15 * (1.0 + std::abs(p)); }),
               grid.end());

    // Separation samples; runs of |d| < tol are treated as single events.
    std::vector<double> sep(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k)
        sep[k] = *a.height_at(grid[k]) - *b.height_at(grid[k]);

    int prev_sign = 0;  // sign of the last non-tolerance sample
    std::size_t k = 0;
    while (k < grid.size()) {
        if (std::abs(sep[k]) < tol) {
            const std::size_t start = k;
            while (k < grid.size() && std::abs(sep[k]) < tol) ++k;
            const double run_len = grid[k == 0 ? 0 : k - 1] - grid[start];
            if (run_len > tol) throw std::runtime_error("count_intersections: non-transverse overlap");
            const int next_sign = (k < grid.size()) ? (sep[k] > 0 ? 1 : -1) : 0;
            if (prev_sign != 0 && next_sign != 0 && prev_sign != next_sign) {
                ++out.crossings;
                prev_sign = next_sign;
            } else {
                ++out.contacts;
                if (next_sign != 0) prev_sign = next_sign;
            }
            continue;
        }
        const int s = sep[k] > 0 ? 1 : -1;
        if (prev_sign != 0 && s != prev_sign) ++out.crossings;
        prev_sign = s;
        ++k;
    }
    return out;
}

IntersectionCount count_segment_segment(const ParamCurve& a, const ParamCurve& b, double tol) {
    IntersectionCount out;
    std::vector<Vec2> hits;
    for (std::size_t i = 0; i < a.segment_count(); ++i) {
        const Vec2 p = a.segment_a(i), q = a.segment_b(i);
        const double axlo = std::min(p.x, q.x) - tol, axhi = std::max(p.x, q.x) + tol;
        const double arlo = std::min(p.r, q.r) - tol, arhi = std::max(p.r, q.r) + tol;
        for (std::size_t j = 0; j < b.segment_count(); ++j) {
            const Vec2 c = b.segment_a(j), d = b.segment_b(j);
            if (std::max(c.x, d.x) < axlo || std::min(c.x, d.x) > axhi) continue;
            if (std::max(c.r, d.r) < arlo || std::min(c.r, d.r) > arhi) continue;
            const Vec2 u = q - p, v = d - c;
            const double den = cross(u, v);
            const Vec2 w = c - p;
            if (std::abs(den) < 1e-14 * norm(u) * norm(v)) {
                // Parallel segments: overlap longer than tol is non-transverse.
                if (point_segment_distance(c, p, q) < tol || point_segment_distance(d, p, q) < tol) {
                    const double overlap =
                        std::min(norm(u), norm(v));
                    if (segment_segment_distance(p, q, c, d) < tol && overlap > tol)
                        throw std::runtime_error("count_intersections: non-transverse overlap");
                }
                continue;
            }
            const double s = cross(w, v) / den;
            const double t = cross(w, u) / den;
            if (s >= 0.0 && s <= 1.0 && t >= 0.0 && t <= 1.0) {
                const Vec2 hit = p + s * u;
                bool dup = false;
                for (const Vec2& h : hits)
                    if (norm(h - hit) < tol) dup = true;
                if (!dup) {
                    hits.push_back(hit);
                    ++out.crossings;
                }
            }
        }
    }
    return out;
}

bool strictly_graphical(const ParamCurve& c) {
    if (c.closed) return false;
    for (std::size_t i = 0; i + 1 < c.pts.size(); ++i)
        if (!(c.pts[i].x < c.pts[i + 1].x)) return false;
    return true;
}

ProfileGraph graph_of(const ParamCurve& c) {
    ProfileGraph g;
    g.closed_left = g.closed_right = false;
    for (const Vec2& p : c.pts) {
        g.xs.push_back(p.x);
        g.us.push_back(p.r);
    }
    return g;
}

}  // namespace

IntersectionCount count_intersections(const ProfileGraph& a, const ProfileGraph& b, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("count_intersections: tol must be positive");
    return count_graph_graph(a, b, tol);
}

IntersectionCount count_intersections(const ParamCurve& a, const ParamCurve& b, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("count_intersections: tol must be positive");
    if (strictly_graphical(a) && strictly_graphical(b))
        return count_graph_graph(graph_of(a), graph_of(b), tol);
    return count_segment_segment(a, b, tol);
}

IntersectionCount count_intersections(const ProfileGraph& a, const ParamCurve& b, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("count_intersections: tol must be positive");
    if (strictly_graphical(b)) return count_graph_graph(a, graph_of(b), tol);
    return count_segment_segment(to_param(a), b, tol);
}

// ---------------------------------------------------------------------------
// Critical points

CriticalPoints count_critical_points(const ProfileGraph& curve, double plateau_tol) {
    if (plateau_tol <= 0.0) plateau_tol = 1e-9 * std::max(curve.diameter(), 1e-300);

    // Collapse maximal runs whose height spread stays below plateau_tol.
    struct Run {
        double u;
        double x_mid;
        std::size_t first, last;
    };
    std::vector<Run> runs;
    std::size_t j = 0;
    while (j < curve.size()) {
        std::size_t k = j;
        double lo = curve.us[j], hi = curve.us[j];
        while (k + 1 < curve.size()) {
            const double nl = std::min(lo, curve.us[k + 1]);
            const double nh = std::max(hi, curve.us[k + 1]);
            if (nh - nl >= plateau_tol) break;
            lo = nl;
            hi = nh;
            ++k;
        }
        runs.push_back({0.5 * (lo + hi), 0.5 * (curve.xs[j] + curve.xs[k]), j, k});
        j = k + 1;
    }

    CriticalPoints out;
    if (runs.size() == 1) {
        // Constant curve: single plateau-merged maximum at the midpoint.
        out.maxima = 1;
        out.maxima_x.push_back(runs[0].x_mid);
        return out;
    }
    for (std::size_t i = 1; i + 1 < runs.size(); ++i) {
        const bool up_l = runs[i].u > runs[i - 1].u;
        const bool up_r = runs[i].u > runs[i + 1].u;
        if (up_l && up_r) {
            ++out.maxima;
            out.maxima_x.push_back(runs[i].x_mid);
        } else if (!up_l && !up_r) {
            ++out.minima;
            out.minima_x.push_back(runs[i].x_mid);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Enclosed area above a line

namespace {

double shoelace(const std::vector<Vec2>& poly) {
    double a = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec2 p = poly[i], q = poly[(i + 1) % poly.size()];
        a += cross(p, q);
    }
    return 0.5 * std::abs(a);
}

// Sutherland-Hodgman clip of a polygon against the half-plane r >= c.
std::vector<Vec2> clip_above(const std::vector<Vec2>& poly, double c) {
    std::vector<Vec2> out;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 p = poly[i], q = poly[(i + 1) % n];
        const bool pin = p.r >= c, qin = q.r >= c;
        if (pin) out.push_back(p);
        if (pin != qin) {
            const double t = (c - p.r) / (q.r - p.r);
            out.push_back(p + t * (q - p));
        }
    }
    return out;
}

}  // namespace

double enclosed_area_above(const ParamCurve& closed_curve, double c) {
    if (!closed_curve.closed) throw std::invalid_argument("enclosed_area_above: curve must be closed");
    if (c < 0.0) throw std::invalid_argument("enclosed_area_above: c must be >= 0");
    const auto clipped = clip_above(closed_curve.pts, c);
    if (clipped.size() < 3) return 0.0;
    return shoelace(clipped);
}

double enclosed_area_above(const ProfileGraph& curve, double c) {
    if (!curve.closed_left || !curve.closed_right)
        throw std::invalid_argument("enclosed_area_above: component must be closed (caps on axis)");
    if (c < 0.0) throw std::invalid_argument("enclosed_area_above: c must be >= 0");
    // The profile together with the axis segment bounds the region.
    ParamCurve poly = to_param(curve);
    poly.closed = true;  // implicit axis edge from (max_x, 0) back to (min_x, 0)
    return enclosed_area_above(poly, c);
}

// ---------------------------------------------------------------------------
// Window clipping and Hausdorff distance

std::vector<ParamCurve> clip_to_window(const ParamCurve& c, const Region& window) {
    std::vector<ParamCurve> out;
    ParamCurve cur;
    auto flush = [&]() {
        if (cur.pts.size() >= 2) out.push_back(cur);
        cur.pts.clear();
    };
    for (std::size_t i = 0; i < c.segment_count(); ++i) {
        Vec2 a = c.segment_a(i), b = c.segment_b(i);
        // Liang-Barsky parametric clip of segment a->b.
        double t0 = 0.0, t1 = 1.0;
        const Vec2 d = b - a;
        const double p[4] = {-d.x, d.x, -d.r, d.r};
        const double q[4] = {a.x - window.x_lo, window.x_hi - a.x, a.r - window.r_lo, window.r_hi - a.r};
        bool reject = false;
        for (int e = 0; e < 4; ++e) {
            if (p[e] == 0.0) {
                if (q[e] < 0.0) reject = true;
            } else {
                const double t = q[e] / p[e];
                if (p[e] < 0.0)
                    t0 = std::max(t0, t);
                else
                    t1 = std::min(t1, t);
            }
        }
        if (reject || t0 > t1) {
            flush();
            continue;
        }
        const Vec2 ca = a + t0 * d, cb = a + t1 * d;
        if (cur.pts.empty()) {
            cur.pts.push_back(ca);
        } else if (norm(cur.pts.back() - ca) > 1e-12 * (1.0 + norm(ca))) {
            flush();
            cur.pts.push_back(ca);
        }
        cur.pts.push_back(cb);
        if (t1 < 1.0) flush();
    }
    flush();
    return out;
}

namespace {

double directed_hausdorff(const std::vector<ParamCurve>& from, const std::vector<ParamCurve>& to) {
    // Sample the source finely, query distances against the target trees.
    std::vector<SegmentTree> trees(to.size());
    for (std::size_t i = 0; i < to.size(); ++i) trees[i].build(to[i]);
    auto dist_to_target = [&](Vec2 p) {
        double best = kInf;
        for (std::size_t i = 0; i < to.size(); ++i) best = std::min(best, trees[i].point_distance(p));
        return best;
    };

    double h = 0.0;
    for (const auto& c : from) {
        const double step = std::max(c.length() / 4096.0, 1e-9);
        for (std::size_t i = 0; i < c.segment_count(); ++i) {
            const Vec2 a = c.segment_a(i), b = c.segment_b(i);
            const double len = norm(b - a);
            const int pieces = std::max(1, static_cast<int>(std::ceil(len / step)));
            for (int k = 0; k <= pieces; ++k) {
                const Vec2 p = a + (static_cast<double>(k) / pieces) * (b - a);
                h = std::max(h, dist_to_target(p));
            }
        }
    }
    return h;
}

}  // namespace

HausdorffResult hausdorff_distance(const ParamCurve& a, const ParamCurve& b, const Region& window) {
    window.require_valid("hausdorff_distance");
    const auto ca = clip_to_window(a, window);
    const auto cb = clip_to_window(b, window);
    if (ca.empty() && cb.empty()) return {HausdorffStatus::both_empty, 0.0};
    if (ca.empty() || cb.empty()) return {HausdorffStatus::one_sided_empty, 0.0};
    const double d = std::max(directed_hausdorff(ca, cb), directed_hausdorff(cb, ca));
    return {HausdorffStatus::ok, d};
}

HausdorffResult hausdorff_distance(const ProfileGraph& a, const ProfileGraph& b, const Region& window) {
    return hausdorff_distance(to_param(a), to_param(b), window);
}

// ---------------------------------------------------------------------------
// Resampling

namespace {

struct WalkPoint {
    Vec2 p;
    std::size_t seg = 0;  // segment of the source polyline
    double t = 0.0;       // parameter on that segment
};

// Walks n_steps equal chords of length d along the polyline. Returns the
// remaining arc length after the final step (negative if the walk ran off
// the end early), and optionally collects the visited points.
double equal_chord_walk(const std::vector<Vec2>& pts, double d, std::size_t n_steps,
                        std::vector<WalkPoint>* out) {
    std::size_t seg = 0;          // current segment index
    Vec2 cur = pts.front();       // current walker position
    double seg_t = 0.0;           // parameter of cur on segment seg
    if (out) out->push_back({cur, 0, 0.0});
    for (std::size_t step = 0; step < n_steps; ++step) {
        // Advance to the first point at chord distance d from cur.
        std::size_t s = seg;
        double t_lo = seg_t;
        while (s + 1 < pts.size()) {
            const Vec2 a = pts[s], b = pts[s + 1];
            const Vec2 end = b;
            if (norm(end - cur) >= d) {
                // Root of |a + t(b-a) - cur| = d on [t_lo, 1]: monotone in t.
                double lo = t_lo, hi = 1.0;
                for (int it = 0; it < 60; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const Vec2 p = a + mid * (b - a);
                    if (norm(p - cur) < d)
                        lo = mid;
                    else
                        hi = mid;
                }
                seg = s;
                seg_t = 0.5 * (lo + hi);
                cur = a + seg_t * (b - a);
                if (out) out->push_back({cur, seg, seg_t});
                break;
            }
            ++s;
            t_lo = 0.0;
            if (s + 1 >= pts.size()) {
                // Ran off the end: d too large.
                return -(d - norm(pts.back() - cur));
            }
        }
        if (s + 1 >= pts.size()) return -(d - norm(pts.back() - cur));
    }
    // Remaining arc from cur to the end.
    double rem = norm(pts[seg + 1] - cur);
    for (std::size_t s = seg + 1; s + 1 < pts.size(); ++s) rem += norm(pts[s + 1] - pts[s]);
    return rem;
}

std::vector<WalkPoint> equal_chord_resample(const std::vector<Vec2>& pts, double target,
                                            std::size_t min_nodes, const char* who) {
    double L = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) L += norm(pts[i + 1] - pts[i]);
    if (!(target > 0.0)) throw std::invalid_argument(std::string(who) + ": spacing must be positive");
    if (target > L / 8.0)
        throw std::invalid_argument(std::string(who) + ": spacing larger than length/8");
    std::size_t n_int = std::max<std::size_t>(min_nodes - 1, static_cast<std::size_t>(std::llround(L / target)));

    // Find d so that n_int equal chords land exactly on the far endpoint.
    double lo = 0.25 * L / static_cast<double>(n_int);
    double hi = L / static_cast<double>(n_int) * (1.0 + 1e-12);
    for (int it = 0; it < 200 && (hi - lo) > 1e-15 * L; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double rem = equal_chord_walk(pts, mid, n_int, nullptr);
        if (rem > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    std::vector<WalkPoint> out;
    out.reserve(n_int + 1);
    equal_chord_walk(pts, lo, n_int, &out);
    if (out.size() < n_int + 1) {
        // Fallback for degenerate walks; should not happen on valid input.
        throw std::runtime_error(std::string(who) + ": resample walk failed");
    }
    out.back().p = pts.back();  // endpoints preserved exactly
    out.front().p = pts.front();
    return out;
}

struct Circumcircle {
    Vec2 center;
    double radius = 0.0;
    bool valid = false;
};

Circumcircle circumcircle(Vec2 a, Vec2 b, Vec2 c) {
    const double d = 2.0 * (a.x * (b.r - c.r) + b.x * (c.r - a.r) + c.x * (a.r - b.r));
    const double scale = std::max({norm(b - a), norm(c - b), norm(c - a)});
    Circumcircle out;
    if (std::abs(d) < 1e-9 * scale * scale) return out;  // collinear within noise
    const double a2 = dot(a, a), b2 = dot(b, b), c2 = dot(c, c);
    out.center = {(a2 * (b.r - c.r) + b2 * (c.r - a.r) + c2 * (a.r - b.r)) / d,
                  (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d};
    out.radius = norm(a - out.center);
    out.valid = true;
    return out;
}

// Point on the minor arc from A to B of the given circle, at angle fraction t.
Vec2 arc_point(const Circumcircle& cc, Vec2 a, Vec2 b, double t) {
    const double tha = std::atan2(a.r - cc.center.r, a.x - cc.center.x);
    const double thb = std::atan2(b.r - cc.center.r, b.x - cc.center.x);
    const double dth = std::remainder(thb - tha, 2.0 * M_PI);
    const double th = tha + t * dth;
    return {cc.center.x + cc.radius * std::cos(th), cc.center.r + cc.radius * std::sin(th)};
}

// Replaces linear interpolants by local circular-arc interpolants, blending
// the two bracketing three-point stencils.
void curve_walk_points(const std::vector<Vec2>& src, std::vector<WalkPoint>& walk) {
    for (std::size_t k = 1; k + 1 < walk.size(); ++k) {
        const std::size_t j = walk[k].seg;
        const double t = walk[k].t;
        if (t <= 0.0 || t >= 1.0) continue;
        const Vec2 a = src[j], b = src[j + 1];
        Vec2 left{}, right{};
        bool has_left = false, has_right = false;
        if (j >= 1) {
            const Circumcircle cc = circumcircle(src[j - 1], a, b);
            if (cc.valid) {
                left = arc_point(cc, a, b, t);
                has_left = true;
            }
        }
        if (j + 2 < src.size()) {
            const Circumcircle cc = circumcircle(a, b, src[j + 2]);
            if (cc.valid) {
                right = arc_point(cc, a, b, t);
                has_right = true;
            }
        }
        if (has_left && has_right)
            walk[k].p = (1.0 - t) * left + t * right;
        else if (has_left)
            walk[k].p = left;
        else if (has_right)
            walk[k].p = right;
    }
}

}  // namespace

namespace {

ProfileGraph graph_from_walk(const std::vector<WalkPoint>& nodes, const ProfileGraph& like) {
    ProfileGraph out;
    out.closed_left = like.closed_left;
    out.closed_right = like.closed_right;
    out.xs.reserve(nodes.size());
    out.us.reserve(nodes.size());
    for (const WalkPoint& w : nodes) {
        out.xs.push_back(w.p.x);
        out.us.push_back(std::max(w.p.r, 0.0));
    }
    return out;
}

}  // namespace

ProfileGraph resample(const ProfileGraph& curve, double target_spacing) {
    std::vector<Vec2> pts;
    pts.reserve(curve.size());
    for (std::size_t j = 0; j < curve.size(); ++j) pts.push_back(curve.node(j));
    const auto nodes = equal_chord_resample(pts, target_spacing, 8, "resample");
    // Interpolation along a monotone-x polyline keeps x monotone; ties can
    // appear only through roundoff and would be caught by validation.
    return graph_from_walk(nodes, curve);
}

ProfileGraph resample_curved(const ProfileGraph& curve, double target_spacing) {
    std::vector<Vec2> pts;
    pts.reserve(curve.size());
    for (std::size_t j = 0; j < curve.size(); ++j) pts.push_back(curve.node(j));
    auto nodes = equal_chord_resample(pts, target_spacing, 8, "resample_curved");
    curve_walk_points(pts, nodes);
    ProfileGraph out = graph_from_walk(nodes, curve);
    // Arc interpolation can fold x across a sharp kink; fall back to linear.
    for (std::size_t j = 0; j + 1 < out.size(); ++j)
        if (!(out.xs[j] < out.xs[j + 1])) return resample(curve, target_spacing);
    return out;
}

ParamCurve resample(const ParamCurve& curve, double target_spacing) {
    std::vector<Vec2> pts = curve.pts;
    if (curve.closed) pts.push_back(curve.pts.front());
    auto nodes = equal_chord_resample(pts, target_spacing, 8, "resample");
    ParamCurve out;
    out.closed = curve.closed;
    if (curve.closed) nodes.pop_back();
    out.pts.reserve(nodes.size());
    for (const WalkPoint& w : nodes) out.pts.push_back(w.p);
    return out;
}

// ---------------------------------------------------------------------------
// Distances and misc

double min_distance(const ParamCurve& a, const ParamCurve& b) {
    SegmentTree tb;
    tb.build(b);
    double best = kInf;
    for (std::size_t i = 0; i < a.segment_count(); ++i) {
        // Endpoint queries bound the segment distance to within the spacing;
        // refine with direct segment tests near the current best.
        best = std::min(best, tb.point_distance(a.segment_a(i)));
    }
    if (a.size() > 0) best = std::min(best, tb.point_distance(a.pts.back()));
    // Refinement pass: check segment pairs whose boxes come near the bound.
    for (std::size_t i = 0; i < a.segment_count(); ++i) {
        const Vec2 p = a.segment_a(i), q = a.segment_b(i);
        for (std::size_t j = 0; j < b.segment_count(); ++j) {
            const Vec2 c = b.segment_a(j), d = b.segment_b(j);
            const double dx = std::max({std::min(c.x, d.x) - std::max(p.x, q.x),
                                        std::min(p.x, q.x) - std::max(c.x, d.x), 0.0});
            const double dr = std::max({std::min(c.r, d.r) - std::max(p.r, q.r),
                                        std::min(p.r, q.r) - std::max(c.r, d.r), 0.0});
            if (std::hypot(dx, dr) >= best) continue;
            best = std::min(best, segment_segment_distance(p, q, c, d));
        }
    }
    return best;
}

double inscribed_axis_disk_radius(const ProfileGraph& curve) {
    curve.require_valid("inscribed_axis_disk_radius");
    if (!curve.closed_left || !curve.closed_right)
        throw std::invalid_argument("inscribed_axis_disk_radius: needs a capped component");
    const ParamCurve c = to_param(curve);
    SegmentTree tree;
    tree.build(c);
    const double xl = curve.min_x(), xr = curve.max_x();
    auto radius_at = [&](double x0) {
        const double d = tree.point_distance({x0, 0.0});
        return std::min({d, x0 - xl, xr - x0});
    };
    // Coarse scan then golden-section style refinement around the best cell.
    const int N = 512;
    double best_x = xl, best_r = 0.0;
    for (int i = 1; i < N; ++i) {
        const double x0 = xl + (xr - xl) * i / N;
        const double r = radius_at(x0);
        if (r > best_r) {
            best_r = r;
            best_x = x0;
        }
    }
    double lo = best_x - (xr - xl) / N, hi = best_x + (xr - xl) / N;
    for (int it = 0; it < 80; ++it) {
        const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (radius_at(m1) < radius_at(m2))
            lo = m1;
        else
            hi = m2;
    }
    return radius_at(0.5 * (lo + hi));
}

double total_turning(const ParamCurve& c) {
    double total = 0.0;
    const std::size_t nseg = c.segment_count();
    if (nseg < 2) return 0.0;
    const std::size_t n_corners = c.closed ? nseg : nseg - 1;
    for (std::size_t i = 0; i < n_corners; ++i) {
        const Vec2 d1 = c.segment_b(i) - c.segment_a(i);
        const Vec2 d2 = c.segment_b((i + 1) % nseg) - c.segment_a((i + 1) % nseg);
        total += std::abs(std::atan2(cross(d1, d2), dot(d1, d2)));
    }
    return total;
}

}  // namespace pancake
