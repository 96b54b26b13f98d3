#pragma once

#include <string>
#include <vector>

#include "pancake/diagnostics.hpp"
#include "pancake/flow.hpp"
#include "pancake/shooter.hpp"

#include "json.hpp"

namespace pancake {

/// Curve snapshot CSV: header "x,r", one row per node, >= 12 significant
/// digits (we write 17 so reads round-trip exactly).
void write_curve_csv(const std::string& path, const ProfileGraph& g);
ProfileGraph read_curve_csv(const std::string& path);

std::string snapshot_filename(double t, std::size_t component);

/// Trace directory layout: manifest.json (config echo, events, extinction
/// time), events.log (one `t=... kind=... x=... r=...` line per event), and
/// one snapshot CSV per component per time.
void write_trace(const std::string& dir, const FlowTrace& trace,
                 const nlohmann::json& config_echo);
FlowTrace read_trace(const std::string& dir);

nlohmann::json shoot_result_json(const ShootResult& r);

nlohmann::json series_report_json(const SeriesReport& rep);
void write_series_csv(const std::string& path, const SeriesReport& rep);

nlohmann::json study_json(const std::vector<ConvergencePair>& pairs);
void write_study_csv(const std::string& path, const std::vector<ConvergencePair>& pairs);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace pancake
