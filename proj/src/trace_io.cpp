#include "pancake/trace_io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace pancake {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

EventKind event_kind_from_string(const std::string& s) {
    if (s == "pinch") return EventKind::pinch;
    if (s == "split") return EventKind::split;
    if (s == "cap-extinct") return EventKind::cap_extinct;
    if (s == "component-extinct") return EventKind::component_extinct;
    if (s == "threshold") return EventKind::threshold;
    if (s == "error") return EventKind::error;
    throw std::invalid_argument("unknown event kind: " + s);
}

FlowStatus status_from_string(const std::string& s) {
    if (s == "running") return FlowStatus::running;
    if (s == "pinched") return FlowStatus::pinched;
    if (s == "extinct") return FlowStatus::extinct;
    if (s == "blown-up") return FlowStatus::blown_up;
    throw std::invalid_argument("unknown status: " + s);
}

}  // namespace

void write_curve_csv(const std::string& path, const ProfileGraph& g) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "x,r\n";
    for (std::size_t j = 0; j < g.size(); ++j)
        out << fmt("%.17g", g.xs[j]) << ',' << fmt("%.17g", g.us[j]) << '\n';
}

ProfileGraph read_curve_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open curve CSV " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("x,r", 0) != 0)
        throw std::invalid_argument("curve CSV missing 'x,r' header: " + path);
    ProfileGraph g;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("malformed CSV row in " + path);
        g.xs.push_back(std::stod(line.substr(0, comma)));
        g.us.push_back(std::stod(line.substr(comma + 1)));
    }
    if (g.size() < 2) throw std::invalid_argument("curve CSV has fewer than 2 rows: " + path);
    g.closed_left = g.us.front() == 0.0;
    g.closed_right = g.us.back() == 0.0;
    return g;
}

std::string snapshot_filename(double t, std::size_t component) {
    if (t == 0.0) t = 0.0;  // normalize -0
    return fmt("%.6f", t) + "_" + std::to_string(component) + ".csv";
}

void write_trace(const std::string& dir, const FlowTrace& trace, const json& config_echo) {
    fs::create_directories(dir);

    json manifest;
    manifest["config"] = config_echo;
    manifest["flow"] = {{"n", trace.config.n},
                        {"spacing", trace.config.spacing},
                        {"cfl", trace.config.cfl},
                        {"pinch_eps", trace.config.pinch_eps},
                        {"tip_eps", trace.config.tip_eps},
                        {"max_time", trace.config.max_time},
                        {"snapshot_stride", trace.config.snapshot_stride}};
    manifest["final_status"] = to_string(trace.final_status());
    manifest["extinction_time"] = trace.extinction_time ? json(*trace.extinction_time) : json();

    json events = json::array();
    std::string log;
    for (const auto& e : trace.events) {
        events.push_back({{"t", e.t},
                          {"kind", to_string(e.kind)},
                          {"x", e.x},
                          {"r", e.r},
                          {"detail", e.detail}});
        log += "t=" + fmt("%.12g", e.t) + " kind=" + to_string(e.kind) + " x=" +
               fmt("%.12g", e.x) + " r=" + fmt("%.12g", e.r) + "\n";
    }
    manifest["events"] = events;
    write_text_file(dir + "/events.log", log);

    // Later snapshots win on a (rare) printed-time collision.
    std::map<std::string, const FlowState*> by_name;
    std::vector<const FlowState*> order;
    for (const auto& s : trace.snapshots) {
        const std::string key = fmt("%.6f", s.t == 0.0 ? 0.0 : s.t);
        if (!by_name.count(key)) order.push_back(&s);
        by_name[key] = &s;
    }
    json snaps = json::array();
    for (const FlowState* sp : order) {
        const std::string key = fmt("%.6f", sp->t == 0.0 ? 0.0 : sp->t);
        const FlowState& s = *by_name.at(key);
        json files = json::array();
        for (std::size_t k = 0; k < s.components.size(); ++k) {
            const std::string name = snapshot_filename(s.t, k);
            write_curve_csv(dir + "/" + name, s.components[k]);
            files.push_back(name);
        }
        snaps.push_back({{"t", s.t},
                         {"status", to_string(s.status)},
                         {"components", s.components.size()},
                         {"files", files}});
    }
    manifest["snapshots"] = snaps;
    write_text_file(dir + "/manifest.json", manifest.dump(2) + "\n");
}

FlowTrace read_trace(const std::string& dir) {
    json manifest;
    {
        std::ifstream in(dir + "/manifest.json");
        if (!in) throw std::invalid_argument("cannot open trace manifest in " + dir);
        in >> manifest;
    }
    FlowTrace trace;
    const json& f = manifest.at("flow");
    trace.config.n = f.at("n").get<int>();
    trace.config.spacing = f.at("spacing").get<double>();
    trace.config.cfl = f.at("cfl").get<double>();
    trace.config.pinch_eps = f.at("pinch_eps").get<double>();
    trace.config.tip_eps = f.at("tip_eps").get<double>();
    trace.config.max_time = f.at("max_time").get<double>();
    trace.config.snapshot_stride = f.at("snapshot_stride").get<double>();

    if (!manifest.at("extinction_time").is_null())
        trace.extinction_time = manifest.at("extinction_time").get<double>();
    for (const auto& e : manifest.at("events")) {
        trace.events.push_back({e.at("t").get<double>(),
                                event_kind_from_string(e.at("kind").get<std::string>()),
                                e.at("x").get<double>(), e.at("r").get<double>(),
                                e.at("detail").get<std::string>()});
    }
    for (const auto& s : manifest.at("snapshots")) {
        FlowState state;
        state.t = s.at("t").get<double>();
        state.status = status_from_string(s.at("status").get<std::string>());
        for (const auto& name : s.at("files"))
            state.components.push_back(read_curve_csv(dir + "/" + name.get<std::string>()));
        trace.snapshots.push_back(std::move(state));
    }
    if (trace.snapshots.empty()) throw std::invalid_argument("trace has no snapshots: " + dir);
    trace.initial = trace.snapshots.front();
    return trace;
}

json shoot_result_json(const ShootResult& r) {
    json samples = json::array();
    for (const auto& s : r.samples)
        samples.push_back({{"m", s.m}, {"label", to_string(s.label)}, {"T_m", s.T_m}});
    json j{{"s", r.s},
           {"samples", samples},
           {"bracket", {r.m_lo, r.m_hi}},
           {"bracket_width", r.bracket_width},
           {"m_star", r.m_star},
           {"m_bar", r.m_bar},
           {"T", r.T_bar},
           {"inscribed_radius", r.inscribed_radius},
           {"classify_calls", r.classify_calls},
           {"anomalies", r.anomalies},
           {"suspect", r.suspect}};
    return j;
}

json series_report_json(const SeriesReport& rep) {
    json j;
    j["times"] = rep.times;
    j["neck"] = rep.neck;
    j["max_height"] = rep.max_height;
    j["girth"] = rep.girth;
    j["width"] = rep.width;
    j["maxima"] = rep.maxima;
    j["minima"] = rep.minima;
    j["components"] = rep.component_counts;
    json sturm = json::object();
    for (std::size_t b = 0; b < rep.barrier_names.size(); ++b) {
        json col = json::array();
        for (const auto& cell : rep.sturm[b]) col.push_back(cell ? json(*cell) : json());
        sturm[rep.barrier_names[b]] = col;
    }
    j["sturm"] = sturm;
    json areas = json::object();
    for (std::size_t c = 0; c < rep.c_values.size(); ++c) {
        const std::string key = fmt("%.6g", rep.c_values[c]);
        json col = json::array(), rates = json::array();
        for (double a : rep.areas[c]) col.push_back(a);
        for (double rended : rep.area_rates[c])
            rates.push_back(std::isnan(rended) ? json() : json(rended));
        areas[key] = {{"area", col}, {"rate", rates}};
    }
    j["areas"] = areas;
    json viol = json::array();
    for (const auto& v : rep.violations)
        viol.push_back({{"t", v.t}, {"law", v.law}, {"magnitude", v.magnitude}});
    j["violations"] = viol;
    return j;
}

void write_series_csv(const std::string& path, const SeriesReport& rep) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "t,m,M,girth,width,maxima,minima,components";
    for (const auto& n : rep.barrier_names) out << ",sturm_" << n;
    for (double c : rep.c_values) out << ",area_c" << fmt("%.6g", c) << ",rate_c" << fmt("%.6g", c);
    out << '\n';
    for (std::size_t k = 0; k < rep.times.size(); ++k) {
        out << fmt("%.12g", rep.times[k]) << ',' << fmt("%.12g", rep.neck[k]) << ','
            << fmt("%.12g", rep.max_height[k]) << ',' << fmt("%.12g", rep.girth[k]) << ','
            << fmt("%.12g", rep.width[k]) << ',' << rep.maxima[k] << ',' << rep.minima[k] << ','
            << rep.component_counts[k];
        for (std::size_t b = 0; b < rep.barrier_names.size(); ++b) {
            out << ',';
            if (rep.sturm[b][k]) out << *rep.sturm[b][k];
        }
        for (std::size_t c = 0; c < rep.c_values.size(); ++c) {
            out << ',' << fmt("%.12g", rep.areas[c][k]) << ',';
            if (!std::isnan(rep.area_rates[c][k])) out << fmt("%.12g", rep.area_rates[c][k]);
        }
        out << '\n';
    }
}

json study_json(const std::vector<ConvergencePair>& pairs) {
    json arr = json::array();
    for (const auto& p : pairs) {
        json cells = json::array();
        for (const auto& c : p.cells)
            cells.push_back({{"t", c.t},
                             {"distance", c.absent ? json() : json(c.distance)},
                             {"absent", c.absent}});
        arr.push_back({{"s_a", p.s_a}, {"s_b", p.s_b}, {"cauchy", p.cauchy}, {"cells", cells}});
    }
    return json{{"pairs", arr}};
}

void write_study_csv(const std::string& path, const std::vector<ConvergencePair>& pairs) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "s_a,s_b,t,distance\n";
    for (const auto& p : pairs)
        for (const auto& c : p.cells) {
            out << fmt("%.12g", p.s_a) << ',' << fmt("%.12g", p.s_b) << ',' << fmt("%.12g", c.t)
                << ',';
            if (!c.absent) out << fmt("%.12g", c.distance);
            out << '\n';
        }
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace pancake
