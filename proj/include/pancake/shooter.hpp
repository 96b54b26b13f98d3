#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pancake/flow.hpp"
#include "pancake/neck_join.hpp"

namespace pancake {

enum class ComponentLabel { OneComponent, TwoComponents, Undetermined };

std::string to_string(ComponentLabel l);

struct Classification {
    ComponentLabel label = ComponentLabel::Undetermined;
    double T_m = 0.0;  // threshold time; last simulated time when Undetermined
    int components_at_T = 0;
    bool pinched_before_T = false;
    FlowTrace trace;  // witness
};

struct ShootSample {
    double m = 0.0;
    ComponentLabel label = ComponentLabel::Undetermined;
    double T_m = 0.0;
};

struct ShootConfig {
    double m_lo = 0.0;       // initial bracket, two-component side
    double m_hi = 0.0;       // one-component side
    double tol_m = 0.0;
    double delta = 0.0;      // margin: m_bar = m_star + delta
    double M_threshold = 0.0;
    int max_iters = 80;
};

struct ShootResult {
    double s = 0.0;
    std::vector<ShootSample> samples;  // every classification, in call order
    double m_lo = 0.0;                 // final bracket
    double m_hi = 0.0;
    double m_star = 0.0;               // bracket midpoint
    double bracket_width = 0.0;
    double m_bar = 0.0;
    double T_bar = 0.0;                          // threshold time of the m_bar run
    std::optional<FlowTrace> recentered_trace;   // t = 0 at T_bar
    double inscribed_radius = 0.0;               // of the m_bar initial region
    std::vector<std::string> anomalies;
    bool suspect = false;
    int classify_calls = 0;
};

/// Evolves the glued profile with neck minimum m until the maximum height
/// first drops to M_threshold and reports the component count there; a pinch
/// before the threshold forces TwoComponents. Undetermined when max_time or
/// a blow-up strikes first (never coerced).
Classification classify(double m, const NeckJoinSpec& join_spec, double M_threshold,
                        const FlowConfig& flow);

/// Standard bisection on the classification label. The initial bracket must
/// classify as (Two, One); Undetermined anywhere aborts. Label-monotonicity
/// violations across all samples are logged as anomalies and mark the result
/// suspect rather than being suppressed.
ShootResult bisect(const NeckJoinSpec& join_spec, const ShootConfig& cfg, const FlowConfig& flow);

/// Runs the margin flow m_bar = m_star + delta to its threshold time,
/// recenters so the threshold lands at t = 0, and asserts the t = 0 slice is
/// connected, compact and non-convex with interior minimum > 0. When
/// extend_below_girth > 0 the flow is continued past the threshold until the
/// girth drops below that value (or extinction), with snapshots kept on the
/// recentered stride grid.
void build_old_flow(ShootResult& result, const NeckJoinSpec& join_spec, const ShootConfig& cfg,
                    const FlowConfig& flow, double extend_below_girth = 0.0);

struct ConvergenceCell {
    double t = 0.0;
    double distance = 0.0;
    bool absent = false;
};

struct ConvergencePair {
    double s_a = 0.0, s_b = 0.0;
    std::vector<ConvergenceCell> cells;
    double cauchy = 0.0;  // max distance over present cells
};

/// Hausdorff distances between consecutive recentered traces, clipped to an
/// off-axis window, at the given sample times (<= 0). The window closure
/// must be disjoint from the axis.
std::vector<ConvergencePair> convergence_study(const std::vector<const ShootResult*>& results,
                                               const Region& window,
                                               const std::vector<double>& times);

/// Multi-component Hausdorff distance helper used by the study.
HausdorffResult state_hausdorff(const FlowState& a, const FlowState& b, const Region& window);

/// Symmetric dumbbell: two spheres of the given radius joined by a tangent
/// circular neck of minimum height m (same construction as the pancake glue).
ProfileGraph make_dumbbell(double sphere_radius, double gap_half, double m, double spacing);

}  // namespace pancake
