#include "riccilab/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "riccilab/errors.hpp"

namespace riccilab {

namespace fs = std::filesystem;
using nlohmann::json;

static_assert(std::endian::native == std::endian::little, "snapshot files are written in host order");

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw OutputError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw OutputError("cannot write " + path.string());
    out << text;
    if (!out) throw OutputError("write failed for " + path.string());
}

std::string monitors_csv(const Trajectory& traj) {
    std::string out;
    for (std::size_t c = 0; c < traj.columns.size(); ++c) out += (c ? "," : "") + traj.columns[c];
    out += '\n';
    for (const auto& r : traj.records) {
        for (std::size_t c = 0; c < r.values.size(); ++c) out += (c ? "," : "") + format_double(r.values[c]);
        out += '\n';
    }
    return out;
}

std::vector<Verdict> scenario_verdicts(const ScenarioSpec& spec, const Trajectory& traj) {
    std::vector<Verdict> v;
    auto add = [&](std::vector<Verdict> more) {
        for (auto& x : more) v.push_back(std::move(x));
    };
    if (traj.records.empty()) return v;
    for (const auto& label : spec.forms) {
        if (spec.energy) add(form_energy_identity_report(traj, label));
        v.push_back(max_principle_report(traj, label));
    }
    if (!spec.probe_form.empty()) {
        try {
            add(length_bound_report(traj, spec.probe_form));
        } catch (const ProbeNotInfiniteOrder& e) {
            v.push_back({"length_bound", false, -1.0, 0, 0, e.what()});
        }
        if (traj.has_column(spec.probe_form + ".pairing"))
            v.push_back(pairing_invariance_report(traj, spec.probe_form));
    }
    if (spec.subsolution != SubsolutionPreset::none) add(l1_monotonicity_report(traj));
    return v;
}

namespace {

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string hex64(std::uint64_t h) {
    std::ostringstream ss;
    ss << std::hex << std::setw(16) << std::setfill('0') << h;
    return ss.str();
}

}  // namespace

std::string summary_json(const ScenarioSpec& spec, const Trajectory& traj, const std::vector<Verdict>& verdicts) {
    json j;
    j["scenario"] = spec.name;
    j["scenario_hash"] = hex64(scenario_hash(spec));
    j["status"] = status_name(traj.status);
    j["last_valid_t"] = number_or_null(traj.last_valid_t);
    j["message"] = traj.message;
    j["records"] = traj.records.size();
    j["steps"] = traj.final_state.step;
    json vs = json::array();
    bool all = true;
    for (const auto& v : verdicts) {
        all = all && v.pass;
        vs.push_back({{"name", v.name},
                      {"result", v.pass ? "PASS" : "FAIL"},
                      {"worst_margin", number_or_null(v.worst_margin)},
                      {"checked", v.checked},
                      {"hypothesis_held", v.hypothesis_held},
                      {"detail", v.detail}});
    }
    j["verdicts"] = vs;
    j["all_pass"] = all;
    return j.dump(2) + "\n";
}

namespace {

struct Component {
    std::string name;
    const std::vector<double>* data;
};

const char* tag_name(MetricTag t) {
    switch (t) {
        case MetricTag::conformal: return "conformal";
        case MetricTag::warped: return "warped";
        case MetricTag::general: break;
    }
    return "general";
}

MetricTag tag_from(const std::string& s) {
    if (s == "conformal") return MetricTag::conformal;
    if (s == "warped") return MetricTag::warped;
    if (s == "general") return MetricTag::general;
    throw OutputError("unknown metric tag '" + s + "'");
}

const char* topo_name(Topology t) { return t == Topology::periodic ? "periodic" : "truncated"; }
Topology topo_from(const std::string& s) { return s == "periodic" ? Topology::periodic : Topology::truncated; }

}  // namespace

void write_snapshot(const fs::path& stem, const FlowState& s) {
    std::vector<Component> comps = {{"metric.xx", &s.g.xx}, {"metric.xy", &s.g.xy}, {"metric.yy", &s.g.yy}};
    if (s.g.tag == MetricTag::conformal) comps.push_back({"metric.u", &s.g.u});
    if (s.g.tag == MetricTag::warped) {
        comps.push_back({"metric.h", &s.g.h});
        comps.push_back({"metric.f", &s.g.f});
    }
    for (const auto& f : s.forms) {
        comps.push_back({"form." + f.label + ".phi_x", &f.phi.x});
        comps.push_back({"form." + f.label + ".phi_theta", &f.phi.y});
        comps.push_back({"form." + f.label + ".phi0_x", &f.phi0.x});
        comps.push_back({"form." + f.label + ".phi0_theta", &f.phi0.y});
    }
    if (s.gauge) comps.push_back({"gauge.F", &s.gauge->F.v});
    if (s.subsolution) comps.push_back({"subsolution.u", &s.subsolution->u.v});

    const Grid2D& g = s.grid();
    json h;
    h["t"] = s.t;
    h["T"] = s.T;
    h["step"] = s.step;
    h["dtype"] = "float64-le";
    h["shape"] = {g.nx, g.ny};
    h["axis_order"] = "row-major x-then-theta";
    h["grid"] = {{"nx", g.nx},
                 {"ny", g.ny},
                 {"x_min", g.x_min},
                 {"lx", g.lx},
                 {"y_min", g.y_min},
                 {"ly", g.ly},
                 {"x_topology", topo_name(g.x_topology)},
                 {"y_topology", topo_name(g.y_topology)},
                 {"origin_i", g.origin_i},
                 {"origin_j", g.origin_j}};
    h["metric_tag"] = tag_name(s.g.tag);
    if (s.gauge) h["gauge_form"] = s.gauge->form_label;
    if (s.subsolution) h["subsolution_sink"] = s.subsolution->sink;
    json cj = json::array();
    std::size_t offset = 0;
    std::ofstream bin(stem.string() + ".bin", std::ios::binary | std::ios::trunc);
    if (!bin) throw OutputError("cannot write " + stem.string() + ".bin");
    for (const auto& c : comps) {
        cj.push_back({{"name", c.name}, {"offset", offset}, {"count", c.data->size()}});
        bin.write(reinterpret_cast<const char*>(c.data->data()),
                  static_cast<std::streamsize>(c.data->size() * sizeof(double)));
        offset += c.data->size();
    }
    if (!bin) throw OutputError("write failed for " + stem.string() + ".bin");
    h["components"] = cj;
    std::vector<std::uint8_t> frozen = s.frozen;
    h["frozen_nodes"] = std::count(frozen.begin(), frozen.end(), 1);
    write_text_file(stem.string() + ".json", h.dump(2) + "\n");
    // The frozen mask is needed to resume a flow from the snapshot; store it compactly.
    std::ofstream mask(stem.string() + ".mask", std::ios::binary | std::ios::trunc);
    mask.write(reinterpret_cast<const char*>(frozen.data()), static_cast<std::streamsize>(frozen.size()));
}

FlowState read_snapshot(const fs::path& stem) {
    const json h = json::parse(read_text_file(stem.string() + ".json"));
    const std::string raw = read_text_file(stem.string() + ".bin");
    const auto& gj = h.at("grid");
    Grid2D grid = make_grid(gj.at("nx"), gj.at("ny"), gj.at("x_min"), gj.at("lx"), gj.at("y_min"), gj.at("ly"),
                            topo_from(gj.at("x_topology")), topo_from(gj.at("y_topology")));
    grid.origin_i = gj.at("origin_i");
    grid.origin_j = gj.at("origin_j");

    auto get = [&](const std::string& name) -> std::vector<double> {
        for (const auto& c : h.at("components"))
            if (c.at("name") == name) {
                const std::size_t off = c.at("offset"), count = c.at("count");
                if ((off + count) * sizeof(double) > raw.size()) throw OutputError("snapshot data truncated");
                std::vector<double> v(count);
                std::memcpy(v.data(), raw.data() + off * sizeof(double), count * sizeof(double));
                return v;
            }
        throw OutputError("snapshot lacks component " + name);
    };
    auto has = [&](const std::string& name) {
        for (const auto& c : h.at("components"))
            if (c.at("name") == name) return true;
        return false;
    };

    FlowState s;
    s.t = h.at("t");
    s.T = h.at("T");
    s.step = h.at("step");
    const MetricTag tag = tag_from(h.at("metric_tag"));
    if (tag == MetricTag::conformal) {
        s.g = conformal_metric(grid, get("metric.u"));
    } else if (tag == MetricTag::warped) {
        s.g = warped_metric(grid, get("metric.h"), get("metric.f"));
    } else {
        s.g = general_metric(grid, get("metric.xx"), get("metric.xy"), get("metric.yy"));
    }
    // Stored components are authoritative (bitwise).
    s.g.xx = get("metric.xx");
    s.g.xy = get("metric.xy");
    s.g.yy = get("metric.yy");
    for (const auto& c : h.at("components")) {
        const std::string name = c.at("name");
        const std::string suffix = ".phi_x";
        if (name.rfind("form.", 0) == 0 && name.size() > suffix.size() &&
            name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0) {
            const std::string label = name.substr(5, name.size() - 5 - suffix.size());
            const std::string p = "form." + label + ".";
            TrackedForm f{label, OneFormField(grid, get(p + "phi_x"), get(p + "phi_theta")),
                          OneFormField(grid, get(p + "phi0_x"), get(p + "phi0_theta"))};
            s.forms.push_back(std::move(f));
        }
    }
    if (has("gauge.F")) {
        const std::string label = h.at("gauge_form");
        OneFormField phi0;
        for (const auto& f : s.forms)
            if (f.label == label) phi0 = f.phi0;
        s.gauge = Gauge{label, phi0, ScalarField(grid, get("gauge.F"), ScalarRole::gauge)};
    }
    if (has("subsolution.u"))
        s.subsolution = Subsolution{ScalarField(grid, get("subsolution.u"), ScalarRole::subsolution),
                                    h.at("subsolution_sink")};
    const std::string mask_path = stem.string() + ".mask";
    if (fs::exists(mask_path)) {
        const std::string m = read_text_file(mask_path);
        s.frozen.assign(m.begin(), m.end());
    }
    return s;
}

std::vector<Verdict> write_outputs(const fs::path& dir, const ScenarioSpec& spec, const Trajectory& traj,
                                   bool snapshots) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw OutputError("cannot create output directory " + dir.string());
    write_text_file(dir / "scenario.txt", serialize_scenario(spec));
    write_text_file(dir / "monitors.csv", monitors_csv(traj));
    const auto verdicts = scenario_verdicts(spec, traj);
    write_text_file(dir / "summary.json", summary_json(spec, traj, verdicts));
    if (snapshots && !traj.snapshots.empty()) {
        const fs::path sd = dir / "snapshots";
        fs::create_directories(sd, ec);
        if (ec) throw OutputError("cannot create " + sd.string());
        json index = json::array();
        for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
            std::ostringstream name;
            name << "snapshot_" << std::setw(5) << std::setfill('0') << k;
            write_snapshot(sd / name.str(), traj.snapshots[k]);
            index.push_back({{"file", name.str()}, {"t", traj.snapshots[k].t}, {"step", traj.snapshots[k].step}});
        }
        write_text_file(sd / "index.json", index.dump(2) + "\n");
    }
    return verdicts;
}

Trajectory load_run_snapshots(const fs::path& dir) {
    const fs::path index_path = dir / "snapshots" / "index.json";
    if (!fs::exists(index_path)) throw EmptyTrajectory("no snapshots under " + dir.string());
    const json index = json::parse(read_text_file(index_path));
    Trajectory traj;
    for (const auto& e : index) traj.snapshots.push_back(read_snapshot(dir / "snapshots" / e.at("file").get<std::string>()));
    if (traj.snapshots.empty()) throw EmptyTrajectory("snapshot index under " + dir.string() + " is empty");
    std::stable_sort(traj.snapshots.begin(), traj.snapshots.end(),
                     [](const FlowState& a, const FlowState& b) { return a.t < b.t; });
    traj.final_state = traj.snapshots.back();
    traj.last_valid_t = traj.final_state.t;
    return traj;
}

namespace {

const char* policy_name(SchedulePolicy p) {
    switch (p) {
        case SchedulePolicy::by_curvature: return "curvature";
        case SchedulePolicy::pow2: return "pow2";
        case SchedulePolicy::explicit_list: break;
    }
    return "explicit";
}

double sup_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

void write_rescale_report(const fs::path& dir, const Trajectory& traj, const RescalingSchedule& schedule,
                          const DecaySpec& decay) {
    const auto snaps = rescale_trajectory(traj, schedule);
    const bool periodic_theta = traj.snapshots.front().grid().y_topology == Topology::periodic;
    json j;
    j["policy"] = policy_name(schedule.policy);
    json rows = json::array();
    for (const auto& s : snaps) {
        const double sup_r = sup_abs(flow_curvature(s.state.g));
        json row = {{"k", s.k},
                    {"t_k", s.t_k},
                    {"lambda", s.lambda},
                    {"snapshot_t", s.snapshot_t},
                    {"offset", s.offset},
                    {"rescaled_t", s.state.t},
                    {"rescaled_sup_R", sup_r}};
        rows.push_back(row);
    }
    if (periodic_theta) {
        const auto ls = length_scaling_check(traj, schedule);
        for (std::size_t k = 0; k < ls.rows.size(); ++k) {
            rows[k]["length"] = ls.rows[k].length;
            rows[k]["rescaled_length"] = ls.rows[k].rescaled_length;
            rows[k]["sqrt_law_residual"] = ls.rows[k].sqrt_law_residual;
            rows[k]["printed_law_deviation"] = ls.rows[k].printed_law_deviation;
        }
        j["length_scaling"] = {{"max_sqrt_residual", ls.max_sqrt_residual},
                               {"sqrt_law_holds", ls.sqrt_law_holds},
                               {"diverges", ls.diverges}};
    }
    j["entries"] = rows;

    DecaySpec d = decay;
    std::string csv = "profile,shell_radius,value\n";
    try {
        if (d.radii.empty()) {
            // Distances change with the metric; shells must fit at both ends.
            const double reach = std::min(decay_reach(traj.snapshots.front().g), decay_reach(traj.snapshots.back().g));
            for (int k = 0; k <= 8; ++k) d.radii.push_back(reach * k / 8.0);
        }
        const auto rep = curvature_decay_report(traj, d);
        for (std::size_t k = 0; k < rep.initial.radii.size(); ++k)
            csv += "initial," + format_double(rep.initial.radii[k]) + "," + format_double(rep.initial.values[k]) + "\n";
        for (std::size_t k = 0; k < rep.final.radii.size(); ++k)
            csv += "final," + format_double(rep.final.radii[k]) + "," + format_double(rep.final.values[k]) + "\n";
        j["decay"] = {{"sigma", d.sigma},
                      {"initial_decreasing_tail", rep.initial.decreasing_tail},
                      {"final_decreasing_tail", rep.final.decreasing_tail},
                      {"preserved", rep.preserved}};
    } catch (const Error& e) {
        j["decay"] = {{"error", e.what()}};
    }
    std::error_code ec;
    fs::create_directories(dir, ec);
    write_text_file(dir / "rescale.json", j.dump(2) + "\n");
    write_text_file(dir / "decay.csv", csv);
}

std::string format_report(const fs::path& dir) {
    const fs::path p = dir / "summary.json";
    if (!fs::exists(p)) throw OutputError("no summary.json in " + dir.string());
    const json j = json::parse(read_text_file(p));
    std::ostringstream out;
    out << "scenario " << j.value("scenario", "?") << " (hash " << j.value("scenario_hash", "?") << ")\n";
    out << "status   " << j.value("status", "?");
    if (j.contains("last_valid_t") && !j["last_valid_t"].is_null())
        out << ", last valid t = " << format_double(j["last_valid_t"].get<double>());
    out << "\n";
    if (!j.value("message", std::string()).empty()) out << "message  " << j["message"].get<std::string>() << "\n";
    std::size_t width = 4;
    for (const auto& v : j.at("verdicts")) width = std::max(width, v.at("name").get<std::string>().size());
    for (const auto& v : j.at("verdicts")) {
        const std::string name = v.at("name");
        out << "  " << v.at("result").get<std::string>() << "  " << name << std::string(width - name.size(), ' ')
            << "  margin ";
        out << (v.at("worst_margin").is_null() ? std::string("n/a") : format_double(v.at("worst_margin").get<double>()));
        out << "  (" << v.value("checked", 0) << " checked";
        if (v.value("hypothesis_held", 0) > 0) out << ", hypothesis held on " << v.value("hypothesis_held", 0);
        out << ")";
        const std::string detail = v.value("detail", "");
        if (!detail.empty()) out << "  " << detail;
        out << "\n";
    }
    out << (j.value("all_pass", false) ? "all verdicts PASS\n" : "some verdicts FAIL\n");
    return out.str();
}

}  // namespace riccilab
