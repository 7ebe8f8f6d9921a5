#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "riccilab/blowup.hpp"
#include "riccilab/functionals.hpp"
#include "riccilab/scenario.hpp"

namespace riccilab {

/// Header row plus one line per record, shortest round-trip floats.
std::string monitors_csv(const Trajectory& traj);

/// Verdicts that apply to the scenario's tracked quantities.
std::vector<Verdict> scenario_verdicts(const ScenarioSpec& spec, const Trajectory& traj);

std::string summary_json(const ScenarioSpec& spec, const Trajectory& traj, const std::vector<Verdict>& verdicts);

/**
 * Writes monitors.csv, summary.json, scenario.txt and, when `snapshots` is set,
 * snapshots/index.json with one .bin/.json pair per stored state. Throws
 * OutputError if the destination cannot be written.
 */
std::vector<Verdict> write_outputs(const std::filesystem::path& dir, const ScenarioSpec& spec,
                                   const Trajectory& traj, bool snapshots = true);

void write_snapshot(const std::filesystem::path& stem, const FlowState& state);
FlowState read_snapshot(const std::filesystem::path& stem);

/// Snapshots of a run directory, in time order, wrapped in a trajectory.
/// Throws EmptyTrajectory if the directory has none.
Trajectory load_run_snapshots(const std::filesystem::path& dir);

/// rescale.json (per-k invariants and scaling residuals) and decay.csv.
void write_rescale_report(const std::filesystem::path& dir, const Trajectory& traj,
                          const RescalingSchedule& schedule, const DecaySpec& decay);

/// Human-readable text from summary.json; throws OutputError if it is missing.
std::string format_report(const std::filesystem::path& dir);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace riccilab
