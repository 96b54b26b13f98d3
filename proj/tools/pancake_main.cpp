// pancake: desk-scale laboratory for rotationally symmetric mean curvature
// flow. Builds glued two-pancake profiles, evolves them by the forced
// curve-shortening reduction, locates the critical neck parameter by
// bisection, and exports diagnostic series. All commands are deterministic:
// rerunning with the same config produces byte-identical outputs.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "pancake/barriers.hpp"
#include "pancake/diagnostics.hpp"
#include "pancake/pipeline.hpp"
#include "pancake/presets.hpp"
#include "pancake/run_config.hpp"
#include "pancake/trace_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pancake;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string preset;
    std::string out = "out";
    bool seedless = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "Run config JSON path");
    cmd->add_option("--preset", args.preset, "Built-in preset: sphere|cylinder|dumbbell|stack-desk");
    cmd->add_option("--out", args.out, "Output directory");
    cmd->add_flag("--seedless", args.seedless,
                  "Assert that no randomness is configured (none ever is)");
}

RunConfig resolve_config(const CommonArgs& args) {
    if (!args.config_path.empty() && !args.preset.empty())
        throw std::invalid_argument("give either --config or --preset, not both");
    if (!args.config_path.empty()) return RunConfig::load_file(args.config_path);
    if (!args.preset.empty()) return preset_config(args.preset);
    throw std::invalid_argument("one of --config / --preset is required");
}

void write_config_echo(const std::string& dir, const RunConfig& cfg) {
    fs::create_directories(dir);
    write_text_file(dir + "/config.json", cfg.canonical());
}

std::string shoot_filename(double s) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "shoot_%g.json", s);
    return buf;
}

json joined_manifest(const JoinedProfile& jp) {
    return json{{"m_achieved", jp.m_achieved},
                {"rho", jp.rho},
                {"arc_center", {jp.arc_center.x, jp.arc_center.r}},
                {"arc_radius", jp.arc_radius},
                {"f_m_domain", {jp.f_m_x_lo, jp.f_m_x_hi}},
                {"tangent_mismatch", jp.tangent_mismatch},
                {"nodes", jp.curve.size()}};
}

int cmd_gen(const CommonArgs& args, std::optional<double> m, std::optional<double> rho) {
    RunConfig cfg = resolve_config(args);
    if (m) {
        cfg.join_m = m;
        cfg.join_rho.reset();
    }
    if (rho) {
        cfg.join_rho = rho;
        cfg.join_m.reset();
    }
    if (cfg.join_m && cfg.join_rho) cfg.join_rho.reset();
    const JoinedProfile jp = join(cfg.join_spec());
    write_config_echo(args.out, cfg);
    write_curve_csv(args.out + "/initial.csv", jp.curve);
    json manifest{{"command", "gen"}, {"joined", joined_manifest(jp)}};
    write_text_file(args.out + "/manifest.json", manifest.dump(2) + "\n");
    std::cout << "gen: m_achieved=" << jp.m_achieved << " rho=" << jp.rho << " nodes="
              << jp.curve.size() << "\n";
    return 0;
}

int cmd_evolve(const CommonArgs& args, const std::string& initial_path) {
    const RunConfig cfg = resolve_config(args);
    ProfileGraph initial;
    if (!initial_path.empty())
        initial = read_curve_csv(initial_path);
    else if (!args.preset.empty())
        initial = preset_initial(args.preset, cfg);
    else
        throw std::invalid_argument("evolve: need --initial <csv> or a --preset with initial data");

    const FlowTrace trace = evolve(initial, cfg.flow, nullptr);
    write_config_echo(args.out, cfg);
    write_trace(args.out, trace, cfg.to_json());
    std::cout << "evolve: status=" << to_string(trace.final_status())
              << " t_end=" << trace.snapshots.back().t << " events=" << trace.events.size()
              << "\n";
    return trace.final_status() == FlowStatus::blown_up ? 1 : 0;
}

int cmd_classify(const CommonArgs& args, std::optional<double> m) {
    const RunConfig cfg = resolve_config(args);
    const double mv = m ? *m : cfg.join_m.value_or(-1.0);
    if (!(mv > 0.0)) throw std::invalid_argument("classify: need --m (or join.m in the config)");
    const Classification c = classify(mv, cfg.join_spec(), cfg.effective_threshold(), cfg.flow);
    write_config_echo(args.out, cfg);
    json j{{"m", mv},
           {"label", to_string(c.label)},
           {"T_m", c.T_m},
           {"components_at_T", c.components_at_T},
           {"pinched_before_T", c.pinched_before_T},
           {"threshold", cfg.effective_threshold()}};
    write_text_file(args.out + "/classification.json", j.dump(2) + "\n");
    write_trace(args.out + "/trace", c.trace, cfg.to_json());
    std::cout << "classify: m=" << mv << " -> " << to_string(c.label) << " at T=" << c.T_m << "\n";
    return 0;
}

int cmd_shoot(const CommonArgs& args) {
    const RunConfig cfg = resolve_config(args);
    const ShootResult r = bisect(cfg.join_spec(), cfg.shoot_config(), cfg.flow);
    write_config_echo(args.out, cfg);
    write_text_file(args.out + "/" + shoot_filename(r.s), shoot_result_json(r).dump(2) + "\n");
    std::cout << "shoot: s=" << r.s << " m*=" << r.m_star << " bracket=" << r.bracket_width
              << " calls=" << r.classify_calls << (r.suspect ? " SUSPECT" : "") << "\n";
    return 0;
}

std::string slot_dirname(double s) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "run_%g", s);
    return buf;
}

int cmd_stack(const CommonArgs& args) {
    const RunConfig cfg = resolve_config(args);
    const auto slots = run_stack(cfg);
    write_config_echo(args.out, cfg);
    json summary;
    summary["slots"] = json::array();
    for (const auto& slot : slots) {
        const std::string sub = slot_dirname(slot.s);
        write_text_file(args.out + "/" + shoot_filename(slot.s),
                        shoot_result_json(slot.result).dump(2) + "\n");
        write_trace(args.out + "/" + sub, *slot.result.recentered_trace, slot.config.to_json());
        summary["slots"].push_back({{"s", slot.s},
                                    {"dir", sub},
                                    {"shoot", shoot_filename(slot.s)},
                                    {"m_star", slot.result.m_star},
                                    {"m_bar", slot.result.m_bar},
                                    {"T", slot.result.T_bar},
                                    {"inscribed_radius", slot.result.inscribed_radius},
                                    {"suspect", slot.result.suspect}});
        std::cout << "stack: s=" << slot.s << " m*=" << slot.result.m_star
                  << " T=" << slot.result.T_bar << "\n";
    }
    write_text_file(args.out + "/stack_summary.json", summary.dump(2) + "\n");
    return 0;
}

int cmd_study(const CommonArgs& args, const std::string& stack_dir) {
    const RunConfig cfg = resolve_config(args);
    if (stack_dir.empty()) throw std::invalid_argument("study: need --stack <dir> (stack output)");
    json summary;
    {
        std::ifstream in(stack_dir + "/stack_summary.json");
        if (!in) throw std::invalid_argument("study: no stack_summary.json in " + stack_dir);
        in >> summary;
    }
    std::vector<ShootResult> results;
    for (const auto& slot : summary.at("slots")) {
        ShootResult r;
        r.s = slot.at("s").get<double>();
        r.T_bar = slot.at("T").get<double>();
        r.recentered_trace = read_trace(stack_dir + "/" + slot.at("dir").get<std::string>());
        results.push_back(std::move(r));
    }
    std::vector<const ShootResult*> ptrs;
    for (const auto& r : results) ptrs.push_back(&r);
    const auto pairs = convergence_study(ptrs, cfg.window, cfg.study_times);
    write_config_echo(args.out, cfg);
    write_text_file(args.out + "/study.json", study_json(pairs).dump(2) + "\n");
    write_study_csv(args.out + "/study.csv", pairs);
    for (const auto& p : pairs)
        std::cout << "study: (" << p.s_a << ", " << p.s_b << ") cauchy=" << p.cauchy << "\n";
    return 0;
}

int cmd_diagnose(const CommonArgs& args, const std::string& trace_dir) {
    if (trace_dir.empty()) throw std::invalid_argument("diagnose: need --trace <dir>");
    const FlowTrace trace = read_trace(trace_dir);
    const FlowState& first = trace.snapshots.front();
    const double girth0 = first.girth();
    const double neck0 = first.neck_value();
    const int n = trace.config.n;

    std::vector<BarrierCurve> barriers;
    barriers.push_back(sphere_barrier(0.5 * girth0, n, 0.0));
    barriers.push_back(
        cylinder_barrier(0.5 * girth0, n, first.components.front().min_x() - 1.0,
                         first.components.back().max_x() + 1.0));
    if (n >= 3 && neck0 > 0.0)
        barriers.push_back(catenoid_barrier(n, 0.4 * neck0, 1.2 * girth0));

    const std::vector<double> cs{0.25 * girth0, 0.5 * girth0};
    const SeriesReport rep = extract_series(trace, barriers, cs);
    fs::create_directories(args.out);
    write_text_file(args.out + "/diagnostics.json", series_report_json(rep).dump(2) + "\n");
    write_series_csv(args.out + "/series.csv", rep);
    std::cout << "diagnose: snapshots=" << rep.times.size()
              << " violations=" << rep.violations.size() << "\n";
    return rep.violations.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pancake: axisymmetric mean curvature flow laboratory"};
    app.require_subcommand(1);

    CommonArgs gen_args, evolve_args, classify_args, shoot_args, stack_args, study_args,
        diagnose_args;
    std::optional<double> gen_m, gen_rho, classify_m;
    std::string evolve_initial, study_stack, diagnose_trace;

    CLI::App* gen = app.add_subcommand("gen", "Build a glued initial profile");
    add_common(gen, gen_args);
    gen->add_option("--m", gen_m, "Target neck minimum");
    gen->add_option("--rho", gen_rho, "Carve height");

    CLI::App* evolve_cmd = app.add_subcommand("evolve", "Evolve an initial curve");
    add_common(evolve_cmd, evolve_args);
    evolve_cmd->add_option("--initial", evolve_initial, "Initial curve CSV");

    CLI::App* classify_cmd = app.add_subcommand("classify", "One-vs-two component classification");
    add_common(classify_cmd, classify_args);
    classify_cmd->add_option("--m", classify_m, "Neck minimum");

    CLI::App* shoot_cmd = app.add_subcommand("shoot", "Bisect to the critical neck parameter");
    add_common(shoot_cmd, shoot_args);

    CLI::App* stack_cmd = app.add_subcommand("stack", "Full schedule: bisect + margin flows");
    add_common(stack_cmd, stack_args);

    CLI::App* study_cmd = app.add_subcommand("study", "Convergence study over a stack output");
    add_common(study_cmd, study_args);
    study_cmd->add_option("--stack", study_stack, "Stack output directory");

    CLI::App* diagnose_cmd = app.add_subcommand("diagnose", "Series + law checks for a trace");
    add_common(diagnose_cmd, diagnose_args);
    diagnose_cmd->add_option("--trace", diagnose_trace, "Trace directory");

    try {
        app.parse(argc, argv);
        if (gen->parsed()) return cmd_gen(gen_args, gen_m, gen_rho);
        if (evolve_cmd->parsed()) return cmd_evolve(evolve_args, evolve_initial);
        if (classify_cmd->parsed()) return cmd_classify(classify_args, classify_m);
        if (shoot_cmd->parsed()) return cmd_shoot(shoot_args);
        if (stack_cmd->parsed()) return cmd_stack(stack_args);
        if (study_cmd->parsed()) return cmd_study(study_args, study_stack);
        if (diagnose_cmd->parsed()) return cmd_diagnose(diagnose_args, diagnose_trace);
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 1;
    }
}
