#include "pancake/presets.hpp"

#include <cmath>
#include <stdexcept>

namespace pancake {

std::vector<std::string> preset_names() { return {"sphere", "cylinder", "dumbbell", "stack-desk"}; }

RunConfig preset_config(const std::string& name) {
    RunConfig c;  // desk-scale pancake defaults: n=3, w=2*pi, g=20, s=-20
    c.pancake.s = -20.0;
    if (name == "sphere") {
        c.flow.spacing = 0.005;
        c.flow.cfl = 0.45;
        c.flow.pinch_eps = 0.02;
        c.flow.tip_eps = 0.02;
        c.flow.max_time = 1.0;
        c.flow.snapshot_stride = 0.005;
    } else if (name == "cylinder") {
        c.flow.spacing = 0.005;
        c.flow.cfl = 0.45;
        c.flow.pinch_eps = 0.02;
        c.flow.tip_eps = 0.02;
        c.flow.max_time = 0.5;
        c.flow.snapshot_stride = 0.025;
    } else if (name == "dumbbell") {
        c.flow.spacing = 0.0125;
        c.flow.cfl = 0.45;
        c.flow.pinch_eps = 0.05;
        c.flow.tip_eps = 0.05;
        c.flow.max_time = 2.5;
        c.flow.snapshot_stride = 0.05;
        c.join_m = 0.2;
    } else if (name == "stack-desk") {
        c.flow.spacing = 0.04;
        c.flow.cfl = 0.45;
        c.flow.pinch_eps = 0.16;
        c.flow.tip_eps = 0.16;
        c.flow.max_time = 600.0;
        c.flow.snapshot_stride = 0.5;
        c.join_m = 2.0;
        c.band_lo = 0.5;
        c.band_hi = 13.0;
    } else {
        throw std::invalid_argument("unknown preset: " + name +
                                    " (expected sphere|cylinder|dumbbell|stack-desk)");
    }
    c.validate();
    return c;
}

ProfileGraph preset_initial(const std::string& name, const RunConfig& cfg) {
    if (name == "sphere") return semicircle_profile(1.0, 0.0, cfg.flow.spacing);
    if (name == "cylinder") return flat_profile(2.0, -2.0, 2.0, cfg.flow.spacing);
    if (name == "dumbbell") return make_dumbbell(3.0, cfg.gap_half, cfg.join_m.value_or(0.2), cfg.flow.spacing);
    if (name == "stack-desk") return join(cfg.join_spec()).curve;
    throw std::invalid_argument("unknown preset: " + name);
}

}  // namespace pancake
