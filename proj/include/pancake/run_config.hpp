#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pancake/flow.hpp"
#include "pancake/neck_join.hpp"
#include "pancake/shooter.hpp"

#include "json.hpp"

namespace pancake {

/// One validated record of every knob a run needs. The JSON document has
/// exactly the documented keys (unknown keys are rejected), all cross-field
/// invariants are checked at load, and the canonical serialization (sorted
/// keys, shortest round-trip floats) makes configs hash stably.
struct RunConfig {
    int n = 3;
    PancakeSpec pancake;
    double gap_half = 1.0;
    std::optional<double> join_m;
    std::optional<double> join_rho;
    FlowConfig flow;

    // shoot section
    std::optional<double> m_lo, m_hi, tol_m, threshold;
    double delta_factor = 4.0;

    // stack section
    std::vector<double> schedule{-5.0, -10.0, -20.0, -40.0};
    bool derive_girth = true;
    bool scale_spacing = true;
    double band_lo = 0.0, band_hi = 0.0;  // 0,0 = band unset
    double extend_factor = 0.45;

    // study section
    Region window{-0.9, 0.9, 1.2, 6.0};
    std::vector<double> study_times{0.0, -0.5, -1.0, -1.5, -2.0};

    static RunConfig from_json(const nlohmann::json& j);
    static RunConfig load_file(const std::string& path);
    nlohmann::json to_json() const;
    std::string canonical() const;  // sorted-key dump

    void validate() const;

    // Derived pieces --------------------------------------------------
    NeckJoinSpec join_spec() const;
    /// min(2 * width, 0.75 * girth) unless the config pins an absolute value.
    double effective_threshold() const;
    ShootConfig shoot_config() const;
    /// Config for one schedule slot: construction time s, derived girth and
    /// (optionally) spacing scaled with it.
    RunConfig for_schedule_slot(double s) const;
};

}  // namespace pancake
