#include "pancake/run_config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

namespace pancake {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& keys, const std::string& where) {
    if (!j.is_object()) throw std::invalid_argument("config: " + where + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!keys.count(it.key()))
            throw std::invalid_argument("config: unknown key '" + it.key() + "' in " + where);
}

double num(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) throw std::invalid_argument(std::string("config: ") + key + " must be a number");
    return j.at(key).get<double>();
}

}  // namespace

RunConfig RunConfig::from_json(const nlohmann::json& j) {
    reject_unknown(j, {"n", "pancake", "join", "flow", "shoot", "stack", "study"}, "top level");
    RunConfig c;
    if (j.contains("n")) c.n = j.at("n").get<int>();

    if (j.contains("pancake")) {
        const json& p = j.at("pancake");
        reject_unknown(p, {"s", "width", "girth", "c_n", "cap_style"}, "pancake");
        c.pancake.s = num(p, "s", c.pancake.s);
        c.pancake.width = num(p, "width", c.pancake.width);
        c.pancake.girth = num(p, "girth", c.pancake.girth);
        c.pancake.c_n = num(p, "c_n", c.pancake.c_n);
        if (p.contains("cap_style"))
            c.pancake.cap_style = cap_style_from_string(p.at("cap_style").get<std::string>());
    }
    c.pancake.n = c.n;

    if (j.contains("join")) {
        const json& g = j.at("join");
        reject_unknown(g, {"gap_half", "m", "rho"}, "join");
        c.gap_half = num(g, "gap_half", c.gap_half);
        if (g.contains("m")) c.join_m = g.at("m").get<double>();
        if (g.contains("rho")) c.join_rho = g.at("rho").get<double>();
    }

    if (j.contains("flow")) {
        const json& f = j.at("flow");
        reject_unknown(f, {"spacing", "cfl", "pinch_eps", "tip_eps", "max_time", "snapshot_stride"},
                       "flow");
        c.flow.spacing = num(f, "spacing", c.flow.spacing);
        c.flow.cfl = num(f, "cfl", c.flow.cfl);
        c.flow.pinch_eps = num(f, "pinch_eps", c.flow.pinch_eps);
        c.flow.tip_eps = num(f, "tip_eps", c.flow.tip_eps);
        c.flow.max_time = num(f, "max_time", c.flow.max_time);
        c.flow.snapshot_stride = num(f, "snapshot_stride", c.flow.snapshot_stride);
    }
    c.flow.n = c.n;

    if (j.contains("shoot")) {
        const json& s = j.at("shoot");
        reject_unknown(s, {"m_lo", "m_hi", "tol_m", "threshold", "delta_factor"}, "shoot");
        if (s.contains("m_lo")) c.m_lo = s.at("m_lo").get<double>();
        if (s.contains("m_hi")) c.m_hi = s.at("m_hi").get<double>();
        if (s.contains("tol_m")) c.tol_m = s.at("tol_m").get<double>();
        if (s.contains("threshold")) c.threshold = s.at("threshold").get<double>();
        c.delta_factor = num(s, "delta_factor", c.delta_factor);
    }

    if (j.contains("stack")) {
        const json& s = j.at("stack");
        reject_unknown(s,
                       {"schedule", "derive_girth", "scale_spacing", "band_lo", "band_hi",
                        "extend_factor"},
                       "stack");
        if (s.contains("schedule")) c.schedule = s.at("schedule").get<std::vector<double>>();
        if (s.contains("derive_girth")) c.derive_girth = s.at("derive_girth").get<bool>();
        if (s.contains("scale_spacing")) c.scale_spacing = s.at("scale_spacing").get<bool>();
        c.band_lo = num(s, "band_lo", c.band_lo);
        c.band_hi = num(s, "band_hi", c.band_hi);
        c.extend_factor = num(s, "extend_factor", c.extend_factor);
    }

    if (j.contains("study")) {
        const json& s = j.at("study");
        reject_unknown(s, {"window", "times"}, "study");
        if (s.contains("window")) {
            const json& w = s.at("window");
            reject_unknown(w, {"x_lo", "x_hi", "r_lo", "r_hi"}, "study.window");
            c.window.x_lo = num(w, "x_lo", c.window.x_lo);
            c.window.x_hi = num(w, "x_hi", c.window.x_hi);
            c.window.r_lo = num(w, "r_lo", c.window.r_lo);
            c.window.r_hi = num(w, "r_hi", c.window.r_hi);
        }
        if (s.contains("times")) c.study_times = s.at("times").get<std::vector<double>>();
    }

    c.validate();
    return c;
}

RunConfig RunConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::invalid_argument("config: parse error in " + path + ": " + e.what());
    }
    return from_json(j);
}

nlohmann::json RunConfig::to_json() const {
    json j;
    j["n"] = n;
    j["pancake"] = {{"s", pancake.s},
                    {"width", pancake.width},
                    {"girth", pancake.girth},
                    {"c_n", pancake.c_n},
                    {"cap_style", to_string(pancake.cap_style)}};
    j["join"] = {{"gap_half", gap_half}};
    if (join_m) j["join"]["m"] = *join_m;
    if (join_rho) j["join"]["rho"] = *join_rho;
    j["flow"] = {{"spacing", flow.spacing},     {"cfl", flow.cfl},
                 {"pinch_eps", flow.pinch_eps}, {"tip_eps", flow.tip_eps},
                 {"max_time", flow.max_time},   {"snapshot_stride", flow.snapshot_stride}};
    j["shoot"] = {{"delta_factor", delta_factor}};
    if (m_lo) j["shoot"]["m_lo"] = *m_lo;
    if (m_hi) j["shoot"]["m_hi"] = *m_hi;
    if (tol_m) j["shoot"]["tol_m"] = *tol_m;
    if (threshold) j["shoot"]["threshold"] = *threshold;
    j["stack"] = {{"schedule", schedule},       {"derive_girth", derive_girth},
                  {"scale_spacing", scale_spacing}, {"band_lo", band_lo},
                  {"band_hi", band_hi},         {"extend_factor", extend_factor}};
    j["study"] = {{"window",
                   {{"x_lo", window.x_lo},
                    {"x_hi", window.x_hi},
                    {"r_lo", window.r_lo},
                    {"r_hi", window.r_hi}}},
                  {"times", study_times}};
    return j;
}

std::string RunConfig::canonical() const { return to_json().dump(2) + "\n"; }

void RunConfig::validate() const {
    if (n < 2) throw std::invalid_argument("config: n must be >= 2");
    pancake.require_valid();
    flow.require_valid();
    if (!(gap_half > 0.0)) throw std::invalid_argument("config: gap_half must be positive");
    if (join_m && join_rho)
        throw std::invalid_argument("config: give at most one of join.m / join.rho");
    if (m_lo && m_hi && !(*m_lo < *m_hi))
        throw std::invalid_argument("config: shoot.m_lo must be below shoot.m_hi");
    if (tol_m && !(*tol_m > 0.0)) throw std::invalid_argument("config: shoot.tol_m must be positive");
    if (threshold && !(*threshold > 0.0 && *threshold < pancake.girth))
        throw std::invalid_argument("config: shoot.threshold must lie in (0, girth)");
    if (!(delta_factor > 0.0)) throw std::invalid_argument("config: shoot.delta_factor must be positive");
    for (double s : schedule)
        if (!(s < 0.0)) throw std::invalid_argument("config: schedule times must be negative");
    if (band_lo < 0.0 || (band_hi != 0.0 && !(band_hi > band_lo)))
        throw std::invalid_argument("config: stack band must satisfy 0 <= band_lo < band_hi");
    if (!(extend_factor >= 0.0 && extend_factor < 0.5))
        throw std::invalid_argument("config: stack.extend_factor must be in [0, 0.5)");
    window.require_valid("config: study.window");
    const double spacing_limit = pancake.width / 16.0;
    if (!(flow.spacing < spacing_limit))
        throw std::invalid_argument("config: flow.spacing must be < pancake.width/16");
}

NeckJoinSpec RunConfig::join_spec() const {
    NeckJoinSpec js;
    js.pancake = pancake;
    js.gap_half = gap_half;
    js.spacing = flow.spacing;
    js.m = join_m;
    js.rho = join_rho;
    return js;
}

double RunConfig::effective_threshold() const {
    if (threshold) return *threshold;
    return std::min(2.0 * pancake.width, 0.75 * pancake.girth);
}

ShootConfig RunConfig::shoot_config() const {
    ShootConfig sc;
    sc.m_lo = m_lo.value_or(0.05);
    sc.m_hi = m_hi.value_or(0.9 * pancake.girth);
    sc.tol_m = tol_m.value_or(1e-3 * pancake.girth);
    sc.delta = delta_factor * sc.tol_m;
    sc.M_threshold = effective_threshold();
    return sc;
}

RunConfig RunConfig::for_schedule_slot(double s) const {
    RunConfig slot = *this;
    slot.pancake.s = s;
    if (derive_girth) slot.pancake.girth = pancake_girth_formula(s, n, pancake.c_n);
    if (scale_spacing) {
        const double f = slot.pancake.girth / pancake.girth;
        slot.flow.spacing = flow.spacing * f;
        slot.flow.pinch_eps = flow.pinch_eps * f;
        slot.flow.tip_eps = flow.tip_eps * f;
    }
    // Per-slot bracket, tolerance and threshold follow the slot girth.
    slot.m_hi = m_hi ? std::optional<double>(*m_hi * slot.pancake.girth / pancake.girth)
                     : std::nullopt;
    slot.tol_m.reset();
    slot.threshold.reset();
    slot.validate();
    return slot;
}

}  // namespace pancake
