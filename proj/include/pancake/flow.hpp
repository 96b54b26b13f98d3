#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pancake/geometry.hpp"

namespace pancake {

struct FlowConfig {
    int n = 3;                     // ambient dimension parameter, >= 2
    double spacing = 0.02;         // target node spacing
    double cfl = 0.45;             // time-step safety factor in (0, 1)
    double pinch_eps = 0.1;        // neck-detection height
    double tip_eps = 0.1;          // cap-extinction diameter
    double max_time = 1e9;
    double snapshot_stride = 0.25;

    void require_valid() const;  // throws on violated cross-field invariants
};

enum class FlowStatus { running, pinched, extinct, blown_up };

std::string to_string(FlowStatus s);

struct FlowState {
    double t = 0.0;
    std::vector<ProfileGraph> components;
    FlowStatus status = FlowStatus::running;

    double max_height() const;
    double girth() const { return max_height(); }
    double width() const;          // total x-extent over components
    /// Height of the profile over x = 0; zero when no component spans x = 0
    /// (the post-pinch convention).
    double neck_value() const;
};

enum class EventKind { pinch, split, cap_extinct, component_extinct, threshold, error };

std::string to_string(EventKind k);

struct FlowEvent {
    double t = 0.0;
    EventKind kind = EventKind::error;
    double x = 0.0;
    double r = 0.0;
    std::string detail;
};

struct FlowTrace {
    FlowConfig config;
    FlowState initial;
    std::vector<FlowState> snapshots;  // time-ordered, includes t=0 and final
    std::vector<FlowEvent> events;
    std::optional<double> extinction_time;

    FlowStatus final_status() const {
        return snapshots.empty() ? initial.status : snapshots.back().status;
    }
    const FlowState* state_at(double t, double tol = 1e-9) const;
    /// Shifts all recorded times by dt (used for recentering).
    void shift_times(double dt);
    bool has_event(EventKind k, double before = std::numeric_limits<double>::infinity()) const;
};

/// Plateau tolerance for critical-point counts on evolved states: height
/// wiggles below a quarter node spacing are discretization noise, not
/// extrema. Freshly constructed curves use count_critical_points' own
/// default instead.
inline double flow_plateau_tol(const FlowConfig& config) { return 0.25 * config.spacing; }

/// Rate of change of the profile at one node under the reduced flow.
/// Interior nodes: du/dt per the graphical evolution law
/// u_t = u_xx / (1 + u_x^2) - (n-1)/u, evaluated by centered differences.
/// Axis endpoints of capped components: the horizontal rate of the endpoint
/// abscissa, n * kappa_tip with kappa_tip from an osculating-circle fit
/// (positive means moving right).
double velocity(const ProfileGraph& component, std::size_t index, int n);

/// One explicit midpoint step; resamples when the spacing contract is
/// stressed. dt is capped by the parabolic stability limit, by
/// min(u) * spacing near necks, by a displacement bound, and by dt_max.
/// Returns the dt actually taken. Sets status blown_up on dt underflow or a
/// fold.
double step(FlowState& state, const FlowConfig& config,
            double dt_max = std::numeric_limits<double>::infinity());

/// Splits every component holding an interior local minimum below pinch_eps
/// into two capped components and logs pinch + split events.
void handle_pinch(FlowState& state, const FlowConfig& config, std::vector<FlowEvent>& events);

using StopPredicate = std::function<bool(const FlowState&)>;

/// Runs the flow until stop(state), a terminal status, or t >= max_time.
/// Snapshots land exactly on snapshot_offset + k * snapshot_stride (the
/// offset lets recentered traces keep snapshots on a shared grid).
FlowTrace evolve(const ProfileGraph& initial, const FlowConfig& config,
                 const StopPredicate& stop = nullptr, double snapshot_offset = 0.0);

// Profile constructors used throughout the tests and presets.
ProfileGraph semicircle_profile(double radius, double center_x, double spacing);
ProfileGraph flat_profile(double u0, double x_lo, double x_hi, double spacing);

}  // namespace pancake
