#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "riccilab/flows.hpp"

namespace riccilab {

enum class Family { flat_torus, conformal_torus, warped_cylinder, conformal_plane };
enum class MetricPreset { flat, sine, neck, cigar };
enum class SubsolutionPreset { none, constant, one_plus_cos, bump };

/**
 * Everything needed to reproduce one run. Text form is flat `section.key = value`
 * lines (an optional `[section]` header prefixes bare keys); see scenario_keys().
 */
struct ScenarioSpec {
    std::string name = "scenario";
    Family family = Family::flat_torus;

    int nx = 64;
    int ny = 64;
    double x_min = -10.0;  // cylinder
    double x_max = 10.0;
    double half_width = 8.0;  // plane

    MetricPreset metric = MetricPreset::flat;
    double amplitude = 0.05;  // sine: u0 = amplitude * sin x
    double a = 2.0;           // neck: f = a - b exp(-x^2)
    double b = 1.0;
    double disk_radius = 0.0;  // plane: nodes beyond are held fixed; 0 means half_width

    std::vector<std::string> forms;  // dtheta, sinx, class
    double class_coefficient = 0.3;  // class = dtheta + c d(sin x)
    HodgeMethod laplacian = HodgeMethod::via_d_delta;

    std::string gauge_form;  // empty: no gauge
    std::string probe_form;  // empty: no probe
    int probe_cycle_x = -1;  // -1: grid origin

    SubsolutionPreset subsolution = SubsolutionPreset::none;
    double sub_value = 1.0;
    double sub_sink = 0.0;
    double bump_center = 0.0;
    double bump_width = 1.0;
    double bump_height = 1.0;

    Scheme scheme = Scheme::rk2;
    double cfl = 0.2;
    double dt_cap = std::numeric_limits<double>::infinity();
    long max_steps = 10'000'000;
    MetricPath metric_path = MetricPath::reduced;
    bool ricci = true;  // ignored on the flat torus, which the flow leaves fixed

    double T = 1.0;
    int cadence = 1;
    int snapshot_cadence = 0;

    bool buffer_abort = true;
    bool energy = true;

    bool operator==(const ScenarioSpec&) const = default;
};

/// Canonical key list in serialization order.
const std::vector<std::string>& scenario_keys();

struct ParseResult {
    ScenarioSpec spec;
    std::vector<std::string> errors;
    bool ok() const { return errors.empty(); }
};

/// Collects every syntax and validation error instead of stopping at the first.
ParseResult parse_scenario(const std::string& text);

/// Semantic checks (family/preset agreement, positivity, probe closedness).
std::vector<std::string> validate_scenario(const ScenarioSpec& spec);

/// Canonical text; floats in shortest round-trip form.
std::string serialize_scenario(const ScenarioSpec& spec);

/// FNV-1a of the canonical text.
std::uint64_t scenario_hash(const ScenarioSpec& spec);

struct ScenarioSetup {
    FlowState state;
    IntegratorSpec integrator;
    MonitorOptions monitors;
};

/// Builds grid, metric and tracked fields. Throws Error on an invalid spec.
ScenarioSetup build_initial_state(const ScenarioSpec& spec);

Trajectory run_scenario(const ScenarioSpec& spec, Exec exec = Exec::parallel);

/// Shortest round-trip decimal.
std::string format_double(double v);

const char* family_name(Family f);
const char* preset_name(MetricPreset p);

}  // namespace riccilab
