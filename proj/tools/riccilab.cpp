#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "riccilab/errors.hpp"
#include "riccilab/io.hpp"
#include "riccilab/suites.hpp"

namespace fs = std::filesystem;
using namespace riccilab;

namespace {

// Used when `run` gets no --out.
constexpr const char* kOutputEnv = "RICCILAB_OUTPUT_DIR";

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            throw UsageError("not a number: '" + item + "'");
        }
    }
    return v;
}

int cmd_run(const std::string& file, std::string out, bool snapshots, bool serial) {
    if (out.empty()) {
        if (const char* env = std::getenv(kOutputEnv)) out = env;
    }
    if (out.empty()) throw UsageError("run needs --out <dir> (or " + std::string(kOutputEnv) + ")");
    if (!fs::exists(file)) throw UsageError("scenario file not found: " + file);
    const ParseResult parsed = parse_scenario(read_text_file(file));
    if (!parsed.ok()) {
        std::string msg = "invalid scenario " + file + ":";
        for (const auto& e : parsed.errors) msg += "\n  " + e;
        throw UsageError(msg);
    }
    const Trajectory traj = run_scenario(parsed.spec, serial ? Exec::serial : Exec::parallel);
    write_outputs(out, parsed.spec, traj, snapshots);
    std::cout << parsed.spec.name << ": " << status_name(traj.status) << " at t = " << format_double(traj.last_valid_t)
              << " after " << traj.final_state.step << " steps";
    if (!traj.message.empty()) std::cout << " (" << traj.message << ")";
    std::cout << "\n" << format_report(out);
    return 0;
}

int cmd_verify(const std::string& which, bool details, bool serial) {
    RunCache cache(serial ? Exec::serial : Exec::parallel);
    const auto results = run_verify(which, acceptance_suites(), cache, details ? nullptr : &std::cout);
    if (details)
        for (const auto& r : results) std::cout << result_line(r) << "\n" << result_details(r);
    const int code = verify_exit_code(results);
    std::cout << (code == 0 ? "all criteria PASS" : "some criteria FAIL") << std::endl;
    return code;
}

int cmd_rescale(const std::string& dir, const std::string& schedule_text, double sigma, const std::string& radii,
                std::string out) {
    if (!fs::is_directory(dir)) throw UsageError("run directory not found: " + dir);
    const Trajectory traj = load_run_snapshots(dir);
    RescalingSchedule schedule;
    try {
        schedule = parse_schedule(schedule_text, &traj);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    DecaySpec decay;
    decay.sigma = sigma;
    if (!radii.empty()) decay.radii = parse_list(radii);
    if (out.empty()) out = dir;
    write_rescale_report(out, traj, schedule, decay);
    std::cout << "wrote " << (fs::path(out) / "rescale.json").string() << " and "
              << (fs::path(out) / "decay.csv").string() << "\n";
    return 0;
}

int cmd_report(const std::string& dir) {
    if (!fs::exists(fs::path(dir) / "summary.json")) throw UsageError("no summary.json in " + dir);
    std::cout << format_report(dir);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    configure_allocator();
    CLI::App app{"Ricci flow and harmonic 1-form experiments on structured 2D grids"};
    app.require_subcommand(1);

    std::string scenario_file, out_dir, suite = "all", run_dir, schedule, radii, rescale_out;
    bool no_snapshots = false, serial = false, details = false;
    double sigma = 1.0;

    auto* run = app.add_subcommand("run", "integrate a scenario and write monitors, summary and snapshots");
    run->add_option("scenario", scenario_file, "scenario file")->required();
    run->add_option("--out,-o", out_dir, "output directory");
    run->add_flag("--no-snapshots", no_snapshots, "skip field snapshots");
    run->add_flag("--serial", serial, "use the serial kernels");

    auto* verify = app.add_subcommand("verify", "run acceptance suites by name, number or 'all'");
    verify->add_option("suite", suite, "suite name, number or 'all'");
    verify->add_flag("--details,-d", details, "print every check");
    verify->add_flag("--serial", serial, "use the serial kernels");

    auto* rescale = app.add_subcommand("rescale", "parabolic rescalings and decay profiles of a stored run");
    rescale->add_option("run_dir", run_dir, "directory written by 'run'")->required();
    rescale->add_option("--schedule,-s", schedule, "pow2:t0,t1,..  curvature:t0,..  or explicit:t@lambda,..")
        ->required();
    rescale->add_option("--sigma", sigma, "decay weight exponent");
    rescale->add_option("--radii", radii, "comma separated shell edges");
    rescale->add_option("--out,-o", rescale_out, "output directory (default: run_dir)");

    auto* report = app.add_subcommand("report", "print verdicts from a run directory");
    report->add_option("run_dir", run_dir, "directory written by 'run'")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*run) return cmd_run(scenario_file, out_dir, !no_snapshots, serial);
        if (*verify) return cmd_verify(suite, details, serial);
        if (*rescale) return cmd_rescale(run_dir, schedule, sigma, radii, rescale_out);
        if (*report) return cmd_report(run_dir);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
