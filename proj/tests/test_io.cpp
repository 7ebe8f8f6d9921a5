#include <doctest.h>

#include <filesystem>
#include <json.hpp>

#include "riccilab/errors.hpp"
#include "riccilab/io.hpp"

using namespace riccilab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("riccilab_test_" + name);
    fs::remove_all(p);
    return p;
}

ScenarioSpec golden_spec() {
    const ParseResult p = parse_scenario(read_text_file(fs::path(RICCILAB_TEST_DATA) / "golden_flat.cfg"));
    REQUIRE(p.ok());
    return p.spec;
}

}  // namespace

TEST_CASE("flat-torus monitors.csv matches the golden file byte for byte") {
    const std::string csv = monitors_csv(run_scenario(golden_spec()));
    const std::string golden = read_text_file(fs::path(RICCILAB_TEST_DATA) / "golden_flat_monitors.csv");
    CHECK(csv == golden);
    CHECK(csv.rfind("t,dt,sup_R,min_R,vol,", 0) == 0);
}

TEST_CASE("run outputs, summary and snapshot round trip") {
    const fs::path dir = scratch("outputs");
    ScenarioSpec s = golden_spec();
    s.snapshot_cadence = 3;
    const Trajectory t = run_scenario(s);
    const auto verdicts = write_outputs(dir, s, t);
    for (const auto& v : verdicts) CHECK_MESSAGE(v.pass, v.name << " " << v.detail);

    const auto j = nlohmann::json::parse(read_text_file(dir / "summary.json"));
    CHECK(j["status"] == "completed");
    CHECK(j["all_pass"] == true);
    CHECK(j["scenario_hash"].get<std::string>().size() == 16);

    CHECK(parse_scenario(read_text_file(dir / "scenario.txt")).spec == s);

    const Trajectory back = load_run_snapshots(dir);
    REQUIRE(back.snapshots.size() == t.snapshots.size());
    const FlowState& a = t.snapshots.back();
    const FlowState& b = back.snapshots.back();
    CHECK(a.t == b.t);
    CHECK(a.g.xx == b.g.xx);
    CHECK(a.forms[0].phi.x == b.forms[0].phi.x);
    CHECK(a.forms[1].phi0.y == b.forms[1].phi0.y);
    CHECK(a.gauge->F.v == b.gauge->F.v);
    CHECK(a.subsolution->u.v == b.subsolution->u.v);
    CHECK(a.frozen == b.frozen);

    const auto h = nlohmann::json::parse(read_text_file(dir / "snapshots" / "snapshot_00000.json"));
    CHECK(h["axis_order"] == "row-major x-then-theta");
    CHECK(h["shape"][0] == 16);

    const std::string text = format_report(dir);
    CHECK(text.find("all verdicts PASS") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("report without summary.json fails") {
    const fs::path dir = scratch("empty");
    fs::create_directories(dir);
    CHECK_THROWS_AS(format_report(dir), OutputError);
    CHECK_THROWS_AS(load_run_snapshots(dir), EmptyTrajectory);
    fs::remove_all(dir);
}

TEST_CASE("unwritable destination") {
    const fs::path file = scratch("file");
    write_text_file(file, "x");
    const ScenarioSpec s = golden_spec();
    CHECK_THROWS_AS(write_outputs(file / "sub", s, run_scenario(s)), OutputError);
    fs::remove(file);
}

TEST_CASE("rescale report files") {
    const fs::path dir = scratch("rescale");
    ScenarioSpec s;
    s.family = Family::warped_cylinder;
    s.metric = MetricPreset::neck;
    s.nx = 64;
    s.ny = 16;
    s.forms = {"dtheta"};
    s.T = 0.05;
    s.snapshot_cadence = 10;
    const Trajectory t = run_scenario(s);
    write_outputs(dir, s, t);
    write_rescale_report(dir, load_run_snapshots(dir), pow2_schedule({0.0, 0.02, 0.04}), DecaySpec{});
    const auto j = nlohmann::json::parse(read_text_file(dir / "rescale.json"));
    CHECK(j["policy"] == "pow2");
    CHECK(j["entries"].size() == 3);
    CHECK(j["length_scaling"]["sqrt_law_holds"] == true);
    CHECK(read_text_file(dir / "decay.csv").rfind("profile,shell_radius,value\n", 0) == 0);
    fs::remove_all(dir);
}
