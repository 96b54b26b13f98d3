#pragma once

#include <optional>

#include "pancake/geometry.hpp"
#include "pancake/pancake_profile.hpp"

namespace pancake {

/// Parameters of a glued two-pancake profile: two copies of the pancake at
/// axis gap 2 * gap_half, carved below height rho between their inner caps
/// and rejoined by the circular arc meeting both cut curves tangentially.
/// Exactly one of rho / m must be given; m is the target neck minimum.
struct NeckJoinSpec {
    PancakeSpec pancake;
    std::optional<double> rho;
    std::optional<double> m;
    double gap_half = 1.0;
    double spacing = 0.02;

    void require_valid() const;
};

struct JoinedProfile {
    ProfileGraph curve;      // graphical, reflection symmetric, (2 maxima, 1 minimum)
    Vec2 arc_center;         // on the r-axis
    double arc_radius = 0.0;
    double rho = 0.0;
    double m_achieved = 0.0;          // curve height at x = 0
    double f_m_x_lo = 0.0;            // x-domain of the neck arc graph
    double f_m_x_hi = 0.0;
    double tangent_mismatch = 0.0;    // radians, at the splice points
};

/// Carve height at which the tangent arc touches the axis (m = 0), found by
/// a 1-D root solve on the achieved minimum. Throws "geometry inconsistent"
/// when no root exists in (0, girth).
double rho_floor(const NeckJoinSpec& spec);

/// Achieved neck minimum of the tangent-arc construction at carve height
/// rho (may be negative below rho_floor; such arcs are not constructible).
double neck_minimum_for_rho(const NeckJoinSpec& spec, double rho);

/// Builds the glued profile. When m is given, rho is found by a 1-D root
/// solve first. Throws on out-of-range parameters, a degenerate tangent
/// solve, or a non-graphical splice ("gluing produced fold").
JoinedProfile join(const NeckJoinSpec& spec);

/// True iff every node of a's curve lies inside or on the closed region of
/// b's curve (tolerance = b's node spacing): the containment that makes the
/// family nested in m.
bool nesting_check(const JoinedProfile& a, const JoinedProfile& b);

/// Point-in-region test for the area bounded by a capped profile and the
/// axis, with boundary tolerance.
bool inside_profile_region(const ProfileGraph& curve, Vec2 p, double tol);

}  // namespace pancake
