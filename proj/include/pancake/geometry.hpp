#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace pancake {

struct Vec2 {
    double x = 0.0;
    double r = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.r + b.r}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.r - b.r}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.r}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.r * b.r; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.r - a.r * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.r); }

/// Discretized graphical profile curve r = u(x) in the half-plane r >= 0.
/// One instance represents one connected component of a rotationally
/// symmetric hypersurface's profile.
struct ProfileGraph {
    std::vector<double> xs;   // strictly increasing
    std::vector<double> us;   // same length, >= 0
    bool closed_left = true;  // u = 0 at the left endpoint (cap on the axis)
    bool closed_right = true;

    std::size_t size() const { return xs.size(); }
    Vec2 node(std::size_t j) const { return {xs[j], us[j]}; }

    double min_x() const { return xs.front(); }
    double max_x() const { return xs.back(); }
    double max_height() const;
    double arc_length() const;
    double diameter() const;  // max of x-extent and height

    /// Linear interpolation of u at abscissa x; nullopt outside [min_x, max_x].
    std::optional<double> height_at(double x) const;

    /// Returns a violated-invariant description, or nullopt when all of the
    /// contract holds: >= 8 nodes, strictly increasing x, non-negative
    /// heights, positive interior heights, closed ends at u = 0, adjacent
    /// node spacing within a factor 4 of the mean spacing.
    std::optional<std::string> invariant_violation() const;
    void require_valid(const char* who) const;
};

/// Ordered polyline in the (x, r) half-plane. If closed, the segment from
/// the last point back to the first is implicit.
struct ParamCurve {
    std::vector<Vec2> pts;
    bool closed = false;

    std::size_t size() const { return pts.size(); }
    double length() const;
    std::size_t segment_count() const { return closed ? pts.size() : pts.size() - 1; }
    Vec2 segment_a(std::size_t i) const { return pts[i]; }
    Vec2 segment_b(std::size_t i) const { return pts[(i + 1) % pts.size()]; }
};

ParamCurve to_param(const ProfileGraph& g);

/// Axis-aligned rectangle, bounds possibly infinite.
struct Region {
    double x_lo = -std::numeric_limits<double>::infinity();
    double x_hi = std::numeric_limits<double>::infinity();
    double r_lo = -std::numeric_limits<double>::infinity();
    double r_hi = std::numeric_limits<double>::infinity();

    bool contains(Vec2 p) const {
        return p.x >= x_lo && p.x <= x_hi && p.r >= r_lo && p.r <= r_hi;
    }
    void require_valid(const char* who) const;
    static Region full_plane() { return {}; }
    /// C_R = {r < R}
    static Region below(double R);
    /// D_c = {r > c}
    static Region above(double c);
};

/// Signed geodesic curvature at an interior node, by centered finite
/// differences in the chord-length parameter. Sign convention: positive
/// where the region below the graph is locally convex (a sphere profile
/// has curvature +1/R).
double curvature_at(const ProfileGraph& curve, std::size_t index);

struct IntersectionCount {
    int crossings = 0;  // transverse sign changes of the separation
    int contacts = 0;   // near-contacts without a sign change
};

/// Counts transverse intersections of two curves. Graph-graph pairs use
/// sign changes of the separation on the merged x-grid; other pairs use
/// segment-segment tests. Throws on overlaps longer than tol
/// ("non-transverse overlap") -- the count is undefined there.
IntersectionCount count_intersections(const ProfileGraph& a, const ProfileGraph& b, double tol);
IntersectionCount count_intersections(const ParamCurve& a, const ParamCurve& b, double tol);
IntersectionCount count_intersections(const ProfileGraph& a, const ParamCurve& b, double tol);

struct CriticalPoints {
    int maxima = 0;
    int minima = 0;
    std::vector<double> maxima_x;
    std::vector<double> minima_x;
    int total() const { return maxima + minima; }
};

/// Strict interior extrema of the height sequence after merging plateaus of
/// height-variation < plateau_tol. A constant curve reports one maximum at
/// the midpoint. plateau_tol <= 0 selects the default 1e-9 * curve diameter.
CriticalPoints count_critical_points(const ProfileGraph& curve, double plateau_tol = 0.0);

/// Area of the planar region bounded by the curve and the line r = c,
/// restricted to r > c. Profile graphs are closed through the axis.
/// A curve entirely below c has area 0.
double enclosed_area_above(const ProfileGraph& curve, double c);
double enclosed_area_above(const ParamCurve& closed_curve, double c);

enum class HausdorffStatus { ok, one_sided_empty, both_empty };

struct HausdorffResult {
    HausdorffStatus status = HausdorffStatus::both_empty;
    double distance = 0.0;  // meaningful only when status == ok
};

/// Symmetric Hausdorff distance between the point sets clipped to window.
/// Accuracy is of the order of the node spacing.
HausdorffResult hausdorff_distance(const ParamCurve& a, const ParamCurve& b, const Region& window);
HausdorffResult hausdorff_distance(const ProfileGraph& a, const ProfileGraph& b, const Region& window);

/// Redistributes nodes to (near) equal chord length. Endpoints are kept
/// exactly; the node count is round(length / target_spacing) + 1, floored
/// at 8 nodes. The map is idempotent up to roundoff. Throws when
/// target_spacing exceeds length / 8.
ProfileGraph resample(const ProfileGraph& curve, double target_spacing);
ParamCurve resample(const ParamCurve& curve, double target_spacing);

/// Equal-chord redistribution with local circular-arc interpolation instead
/// of linear: exact on circles, one order better on smooth curves. Used by
/// the flow engine, where linear interpolation's chord sag would dominate
/// the spatial error; unlike resample it is only near-idempotent.
ProfileGraph resample_curved(const ProfileGraph& curve, double target_spacing);

/// Minimum Euclidean distance between two polylines.
double min_distance(const ParamCurve& a, const ParamCurve& b);

/// Splits the parts of a polyline inside the window into sub-polylines.
std::vector<ParamCurve> clip_to_window(const ParamCurve& c, const Region& window);

/// Largest disk centered on the axis inside the region bounded by a capped
/// profile and the axis; returns its radius (the inscribed-sphere radius of
/// the solid of revolution).
double inscribed_axis_disk_radius(const ProfileGraph& curve);

/// Total absolute turning angle along a polyline (radians).
double total_turning(const ParamCurve& c);

}  // namespace pancake
