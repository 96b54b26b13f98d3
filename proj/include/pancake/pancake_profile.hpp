#pragma once

#include <string>

#include "pancake/flow.hpp"
#include "pancake/geometry.hpp"

namespace pancake {

enum class CapStyle { semicircle, grim_reaper };

std::string to_string(CapStyle s);
CapStyle cap_style_from_string(const std::string& s);

/// Parameters of one synthetic pancake profile: a slab-bounded blob of the
/// given width (extent along the axis) and girth (height above the axis).
struct PancakeSpec {
    int n = 3;
    double s = -20.0;  // construction time, < 0
    double width = 2.0 * M_PI;
    double girth = 20.0;
    double c_n = 0.0;
    CapStyle cap_style = CapStyle::semicircle;

    void require_valid() const;  // girth > width > 0, s < 0, n >= 2
};

/// Pancake girth law -t + (n-1) log(-t) + c_n, guarded to the asymptotic
/// regime t <= -10.
double girth_asymptotic(double t, int n, double c_n);

/// The same closed form without the regime guard; schedule runs use it to
/// derive per-slot girths. Throws when the value is not a usable girth.
double pancake_girth_formula(double t, int n, double c_n);

/// Slab width limit 2*pi (n-independent as written).
double width_asymptotic(int n);

/// Synthetic pancake profile centered at center_x: u = 0 at
/// center_x +/- width/2, height ~ girth, reflection symmetric, one
/// plateau-merged maximum. Semicircle style is a stadium outline (near
/// vertical sides, semicircular top); grim-reaper style has a flat top with
/// grim-reaper-shaped descents. Requires spacing < width/16.
ProfileGraph make_pancake(const PancakeSpec& spec, double center_x, double spacing);

/// Relaxes a synthetic profile by the flow for burn_time. Throws if a pinch
/// or extinction interrupts the burn-in, or graphicality/single-maximum is
/// lost.
ProfileGraph anneal(const ProfileGraph& profile, double burn_time, const FlowConfig& engine);

}  // namespace pancake
