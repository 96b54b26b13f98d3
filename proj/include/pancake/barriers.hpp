#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "pancake/flow.hpp"
#include "pancake/geometry.hpp"

namespace pancake {

enum class BarrierKind { sphere, cylinder, catenoid, grim_rotation, torus_shrinker, pancake_slab };

std::string to_string(BarrierKind k);

/// A comparison solution with its time law. Exact kinds solve the reduced
/// flow identically; the grim-reaper rotation is an approximate barrier
/// (its forcing deficit is reported, not ignored silently).
struct BarrierCurve {
    BarrierKind kind = BarrierKind::sphere;
    std::map<std::string, double> params;
    double t_min = -std::numeric_limits<double>::infinity();
    double t_max = std::numeric_limits<double>::infinity();  // lifespan end (exclusive)
    std::shared_ptr<const ParamCurve> cached;                // static profiles

    ParamCurve profile(double t) const;
    bool static_in_time() const {
        return kind == BarrierKind::catenoid || kind == BarrierKind::pancake_slab;
    }
    bool exact() const { return kind != BarrierKind::grim_rotation && kind != BarrierKind::pancake_slab; }
};

// Factories ------------------------------------------------------------

BarrierCurve sphere_barrier(double R0, int n, double center_x = 0.0);
BarrierCurve cylinder_barrier(double u0, int n, double x_lo, double x_hi);
BarrierCurve catenoid_barrier(int n, double neck_radius, double r_max);
BarrierCurve grim_rotation_barrier(double scale, double tip_r, double r_cut);
BarrierCurve torus_shrinker_barrier(int n);
BarrierCurve pancake_slab_barrier(double x_lo, double x_hi, double r_top);

// Closed-form laws ------------------------------------------------------

/// R(t) = sqrt(R0^2 - 2 n t); throws past extinction.
double shrinking_sphere_radius(double R0, int n, double t);
/// u(t) = sqrt(u0^2 - 2 (n-1) t); throws past extinction.
double shrinking_cylinder_radius(double u0, int n, double t);

// Catenoid ---------------------------------------------------------------

/// Quadrature-built profile of the minimal catenoid in ambient dimension
/// n + 1: x(r) = +/- c * Int_1^{r/c} ds / sqrt(s^{2(n-1)} - 1), both branches
/// joined smoothly at the neck (0, c). The integrable endpoint singularity is
/// removed by the substitution s = 1 + sigma^2; nodes are uniform in sigma,
/// which keeps them smooth in the index for finite-difference residuals.
/// n = 2 is rejected: that catenoid is entire, there is no slab.
ParamCurve catenoid_profile(int n, double neck_radius, double r_max, std::size_t nodes = 4001);

/// Asymptotic half-width c * Int_1^inf ds / sqrt(s^{2(n-1)} - 1).
double catenoid_half_width(int n, double neck_radius);

// Grim reaper rotation ----------------------------------------------------

/// Planar grim reaper r(x) = tip_r + t/scale - scale * ln cos(x/scale)
/// truncated at height r_cut, sampled uniformly in arc length. Requires
/// tip_r >= 1 (a uniform distance from the axis). Approximate barrier: the
/// forcing term is ignored by the translation law.
ParamCurve grim_rotation_profile(double scale, double tip_r, double t, double r_cut);

/// Per-node forcing deficit (n-1) |cos theta| / r along a curve.
std::vector<double> forcing_deficit(const ParamCurve& c, int n);

// Torus shrinker ----------------------------------------------------------

struct TorusShrinker {
    ParamCurve profile;             // closed, reflection-symmetric
    double r_top = 0.0;             // shooting parameter (crossing of the r-axis)
    double r_bottom = 0.0;
    double closure_residual = 0.0;  // position+tangent mismatch after a half loop
    double shrinker_residual_sup = 0.0;
};

/// Self-shrinking torus profile found by shooting for a closed geodesic of
/// the conformal metric with weight r^{n-1} exp(-(x^2+r^2)/4): launch
/// perpendicular to the r-axis from (0, r0) and solve for the return to be
/// perpendicular as well. Throws when no bracket is found in the scanned
/// r0 range.
TorusShrinker torus_shrinker_profile(int n, std::size_t nodes = 4000);

// Residuals ----------------------------------------------------------------

/// Sup over nodes of |kappa + (n-1) cos(theta)/r| via 4th-order centered
/// differences in the node index (requires an index-smooth parametrization).
double reduced_speed_residual_sup(const ParamCurve& c, int n);

/// Sup over nodes of the self-shrinker defect
/// |kappa + (n-1) cos(theta)/r - <p, nu>/(2 tau)| with tau = 1 for the
/// normalized shrinker and tau = -t for the time-t homothetic slice.
double shrinker_residual_sup(const ParamCurve& c, int n, double tau = 1.0);

// Avoidance ------------------------------------------------------------------

struct AvoidanceReport {
    std::vector<double> times;
    std::vector<double> window_distance;  // min distance of window-clipped pieces (NaN if empty)
    std::vector<int> crossings;           // global transverse intersections with the barrier
    std::vector<bool> window_disjoint;    // clipped pieces free of crossings
    bool any_violation = false;
};

/// Tracks barrier-vs-trace separation per snapshot. Requires an exact
/// barrier, initially disjoint from the trace inside the window; throws
/// "not a barrier configuration" otherwise.
AvoidanceReport avoidance_check(const FlowTrace& trace, const BarrierCurve& barrier,
                                const Region& window);

}  // namespace pancake
