#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "pancake/presets.hpp"
#include "pancake/run_config.hpp"
#include "pancake/trace_io.hpp"

using namespace pancake;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("pancake_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(PANCAKE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_CASE("run config: unknown keys are rejected at every level") {
    json j = preset_config("stack-desk").to_json();
    j["surprise"] = 1;
    CHECK_THROWS_WITH_AS(RunConfig::from_json(j), doctest::Contains("unknown key"),
                         std::invalid_argument);
    json j2 = preset_config("stack-desk").to_json();
    j2["flow"]["dt"] = 0.1;
    CHECK_THROWS_WITH_AS(RunConfig::from_json(j2), doctest::Contains("unknown key"),
                         std::invalid_argument);
}

TEST_CASE("run config: cross-field invariants checked at load") {
    json j = preset_config("stack-desk").to_json();
    j["flow"]["pinch_eps"] = 0.01;  // below 4 * spacing
    CHECK_THROWS_AS(RunConfig::from_json(j), std::invalid_argument);
    json j2 = preset_config("stack-desk").to_json();
    j2["pancake"]["girth"] = 1.0;  // below the width
    CHECK_THROWS_AS(RunConfig::from_json(j2), std::invalid_argument);
}

TEST_CASE("run config: canonical serialization is a stable fixed point") {
    const RunConfig a = preset_config("stack-desk");
    const RunConfig b = RunConfig::from_json(a.to_json());
    CHECK(a.canonical() == b.canonical());
    CHECK(RunConfig::from_json(b.to_json()).canonical() == b.canonical());
}

TEST_CASE("all presets validate and provide initial data") {
    for (const auto& name : preset_names()) {
        const RunConfig cfg = preset_config(name);
        const ProfileGraph g = preset_initial(name, cfg);
        CHECK(!g.invariant_violation());
    }
}

TEST_CASE("schedule slots derive girth and scale the grid") {
    const RunConfig base = preset_config("stack-desk");
    const RunConfig slot = base.for_schedule_slot(-40.0);
    CHECK(slot.pancake.s == -40.0);
    CHECK(slot.pancake.girth ==
          doctest::Approx(40.0 + 2.0 * std::log(40.0)).epsilon(1e-12));
    const double f = slot.pancake.girth / base.pancake.girth;
    CHECK(slot.flow.spacing == doctest::Approx(base.flow.spacing * f));
    CHECK(slot.effective_threshold() ==
          doctest::Approx(std::min(2.0 * slot.pancake.width, 0.75 * slot.pancake.girth)));
}

TEST_CASE("curve CSV round trip is exact") {
    const fs::path dir = fresh_dir("csv");
    const ProfileGraph g = semicircle_profile(1.7, 0.3, 0.02);
    write_curve_csv((dir / "c.csv").string(), g);

    // Header and significant digits per the snapshot-file contract.
    std::ifstream in(dir / "c.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "x,r");

    const ProfileGraph r = read_curve_csv((dir / "c.csv").string());
    REQUIRE(r.size() == g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        CHECK(r.xs[j] == g.xs[j]);
        CHECK(r.us[j] == g.us[j]);
    }
    CHECK(r.closed_left == g.closed_left);
    CHECK(r.closed_right == g.closed_right);
}

TEST_CASE("trace directory round trip") {
    FlowConfig cfg;
    cfg.n = 3;
    cfg.spacing = 0.02;
    cfg.pinch_eps = cfg.tip_eps = 0.08;
    cfg.max_time = 0.1;
    cfg.snapshot_stride = 0.02;
    const FlowTrace tr = evolve(semicircle_profile(1.0, 0.0, cfg.spacing), cfg, nullptr);

    const fs::path dir = fresh_dir("trace");
    write_trace(dir.string(), tr, json::object());
    const FlowTrace rt = read_trace(dir.string());
    CHECK(rt.config.spacing == cfg.spacing);
    REQUIRE(rt.snapshots.size() >= 2);
    CHECK(rt.snapshots.front().t == 0.0);
    CHECK(rt.snapshots.back().t == doctest::Approx(tr.snapshots.back().t));
    CHECK(rt.snapshots.back().components.size() == tr.snapshots.back().components.size());

    // Event log format: one `t=... kind=... x=... r=...` line per event.
    const std::string log = read_text_file((dir / "events.log").string());
    if (!tr.events.empty()) {
        CHECK(log.find("t=") == 0);
        CHECK(log.find("kind=") != std::string::npos);
    }
}

TEST_CASE("cli: gen is deterministic byte for byte") {
    const fs::path d1 = fresh_dir("gen1");
    const fs::path d2 = fresh_dir("gen2");
    REQUIRE(run_cli("gen --preset stack-desk --m 1.5 --out " + d1.string()) == 0);
    REQUIRE(run_cli("gen --preset stack-desk --m 1.5 --out " + d2.string()) == 0);
    for (const char* name : {"initial.csv", "manifest.json", "config.json"}) {
        CHECK(read_text_file((d1 / name).string()) == read_text_file((d2 / name).string()));
    }
    const json manifest = json::parse(read_text_file((d1 / "manifest.json").string()));
    CHECK(manifest.at("joined").at("m_achieved").get<double>() == doctest::Approx(1.5).epsilon(1e-8));
}

TEST_CASE("cli: invalid m exits with the validation code") {
    const fs::path d = fresh_dir("genbad");
    CHECK(run_cli("gen --preset stack-desk --m -1 --out " + d.string()) == 2);
    CHECK(run_cli("gen --preset stack-desk --m 50 --out " + d.string()) == 2);
}

TEST_CASE("cli: evolve requires an input curve") {
    const fs::path d = fresh_dir("evmiss");
    CHECK(run_cli("evolve --config /nonexistent.json --out " + d.string()) == 2);
    // Preset configs without initial data are a usage error too.
    const fs::path cfg = d / "cfg.json";
    write_text_file(cfg.string(), preset_config("sphere").canonical());
    CHECK(run_cli("evolve --config " + cfg.string() + " --out " + d.string()) == 2);
    CHECK(run_cli("evolve --config " + cfg.string() + " --initial /missing.csv --out " +
                  d.string()) == 2);
}

TEST_CASE("cli: evolve reruns hash identically") {
    const fs::path d = fresh_dir("evdet");
    // A cheap config: small sphere, short horizon.
    RunConfig cfg = preset_config("sphere");
    cfg.flow.spacing = 0.02;
    cfg.flow.pinch_eps = cfg.flow.tip_eps = 0.08;
    cfg.flow.max_time = 0.05;
    cfg.flow.snapshot_stride = 0.01;
    const fs::path cfg_path = d / "cfg.json";
    write_text_file(cfg_path.string(), cfg.canonical());
    write_curve_csv((d / "init.csv").string(), semicircle_profile(1.0, 0.0, 0.02));

    const fs::path o1 = d / "o1", o2 = d / "o2";
    REQUIRE(run_cli("evolve --config " + cfg_path.string() + " --initial " +
                    (d / "init.csv").string() + " --out " + o1.string()) == 0);
    REQUIRE(run_cli("evolve --config " + cfg_path.string() + " --initial " +
                    (d / "init.csv").string() + " --out " + o2.string()) == 0);
    for (const auto& entry : fs::directory_iterator(o1)) {
        const auto name = entry.path().filename();
        CHECK(read_text_file((o1 / name).string()) == read_text_file((o2 / name).string()));
    }
    CHECK(fs::exists(o1 / "manifest.json"));
    CHECK(fs::exists(o1 / "events.log"));
}

TEST_CASE("cli: seedless flag is accepted (there is no RNG to disable)") {
    const fs::path d = fresh_dir("seedless");
    CHECK(run_cli("gen --preset stack-desk --m 1.0 --seedless --out " + d.string()) == 0);
}
