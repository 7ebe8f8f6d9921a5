#include "riccilab/scenario.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "riccilab/errors.hpp"
#include "riccilab/functionals.hpp"
#include "riccilab/oracles.hpp"

namespace riccilab {

std::string format_double(double v) {
    std::array<char, 64> buf{};
    const auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc()) return "nan";
    return std::string(buf.data(), p);
}

namespace {

template <class E>
struct Names {
    E value;
    const char* name;
};

constexpr Names<Family> kFamilies[] = {{Family::flat_torus, "flat-torus"},
                                       {Family::conformal_torus, "conformal-torus"},
                                       {Family::warped_cylinder, "warped-cylinder"},
                                       {Family::conformal_plane, "conformal-plane"}};
constexpr Names<MetricPreset> kPresets[] = {{MetricPreset::flat, "flat"},
                                            {MetricPreset::sine, "sine"},
                                            {MetricPreset::neck, "neck"},
                                            {MetricPreset::cigar, "cigar"}};
constexpr Names<SubsolutionPreset> kSubs[] = {{SubsolutionPreset::none, "none"},
                                              {SubsolutionPreset::constant, "constant"},
                                              {SubsolutionPreset::one_plus_cos, "one-plus-cos"},
                                              {SubsolutionPreset::bump, "bump"}};
constexpr Names<Scheme> kSchemes[] = {{Scheme::rk2, "rk2"}, {Scheme::rk4, "rk4"}};
constexpr Names<MetricPath> kPaths[] = {{MetricPath::reduced, "reduced"}, {MetricPath::general, "general"}};
constexpr Names<HodgeMethod> kLaplacians[] = {{HodgeMethod::via_d_delta, "d-delta"},
                                              {HodgeMethod::via_bochner, "bochner"}};

template <class E, std::size_t N>
const char* name_of(const Names<E> (&table)[N], E v) {
    for (const auto& e : table)
        if (e.value == v) return e.name;
    return "?";
}

template <class E, std::size_t N>
std::string set_enum(const Names<E> (&table)[N], E& out, const std::string& s) {
    for (const auto& e : table)
        if (s == e.name) {
            out = e.value;
            return {};
        }
    std::string opts;
    for (const auto& e : table) opts += std::string(opts.empty() ? "" : ", ") + e.name;
    return "expected one of " + opts;
}

std::string set_double(double& out, const std::string& s) {
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || std::isnan(v)) return "expected a number";
    out = v;
    return {};
}

template <class I>
std::string set_int(I& out, const std::string& s) {
    I v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) return "expected an integer";
    out = v;
    return {};
}

std::string set_bool(bool& out, const std::string& s) {
    if (s == "true") {
        out = true;
        return {};
    }
    if (s == "false") {
        out = false;
        return {};
    }
    return "expected true or false";
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) out += (out.empty() ? "" : ",") + s;
    return out;
}

std::string label_or_none(const std::string& s) { return s.empty() ? "none" : s; }

struct Field {
    const char* key;
    std::function<std::string(const ScenarioSpec&)> get;
    std::function<std::string(ScenarioSpec&, const std::string&)> set;
};

#define RL_DOUBLE(k, m) \
    Field{k, [](const ScenarioSpec& s) { return format_double(s.m); }, \
          [](ScenarioSpec& s, const std::string& v) { return set_double(s.m, v); }}
#define RL_INT(k, m) \
    Field{k, [](const ScenarioSpec& s) { return std::to_string(s.m); }, \
          [](ScenarioSpec& s, const std::string& v) { return set_int(s.m, v); }}
#define RL_BOOL(k, m) \
    Field{k, [](const ScenarioSpec& s) { return std::string(s.m ? "true" : "false"); }, \
          [](ScenarioSpec& s, const std::string& v) { return set_bool(s.m, v); }}
#define RL_ENUM(k, m, table) \
    Field{k, [](const ScenarioSpec& s) { return std::string(name_of(table, s.m)); }, \
          [](ScenarioSpec& s, const std::string& v) { return set_enum(table, s.m, v); }}
#define RL_LABEL(k, m) \
    Field{k, [](const ScenarioSpec& s) { return label_or_none(s.m); }, \
          [](ScenarioSpec& s, const std::string& v) { \
              s.m = v == "none" ? std::string() : v; \
              return std::string(); \
          }}

const std::vector<Field>& fields() {
    static const std::vector<Field> f = {
        Field{"name", [](const ScenarioSpec& s) { return s.name; },
              [](ScenarioSpec& s, const std::string& v) {
                  if (v.empty()) return std::string("name must not be empty");
                  s.name = v;
                  return std::string();
              }},
        RL_ENUM("geometry.family", family, kFamilies),
        RL_INT("grid.nx", nx),
        RL_INT("grid.ny", ny),
        RL_DOUBLE("grid.x_min", x_min),
        RL_DOUBLE("grid.x_max", x_max),
        RL_DOUBLE("grid.half_width", half_width),
        RL_ENUM("metric.preset", metric, kPresets),
        RL_DOUBLE("metric.amplitude", amplitude),
        RL_DOUBLE("metric.a", a),
        RL_DOUBLE("metric.b", b),
        RL_DOUBLE("metric.disk_radius", disk_radius),
        Field{"forms.list", [](const ScenarioSpec& s) { return s.forms.empty() ? std::string("none") : join(s.forms); },
              [](ScenarioSpec& s, const std::string& v) {
                  s.forms = v == "none" ? std::vector<std::string>{} : split_list(v);
                  return std::string();
              }},
        RL_DOUBLE("forms.class_coefficient", class_coefficient),
        RL_ENUM("forms.laplacian", laplacian, kLaplacians),
        RL_LABEL("gauge.form", gauge_form),
        RL_LABEL("probe.form", probe_form),
        RL_INT("probe.cycle_x", probe_cycle_x),
        RL_ENUM("subsolution.preset", subsolution, kSubs),
        RL_DOUBLE("subsolution.value", sub_value),
        RL_DOUBLE("subsolution.sink", sub_sink),
        RL_DOUBLE("subsolution.bump_center", bump_center),
        RL_DOUBLE("subsolution.bump_width", bump_width),
        RL_DOUBLE("subsolution.bump_height", bump_height),
        RL_ENUM("integrator.scheme", scheme, kSchemes),
        RL_DOUBLE("integrator.cfl", cfl),
        RL_DOUBLE("integrator.dt_cap", dt_cap),
        RL_INT("integrator.max_steps", max_steps),
        RL_ENUM("integrator.metric_path", metric_path, kPaths),
        RL_BOOL("flow.ricci", ricci),
        RL_DOUBLE("time.T", T),
        RL_INT("output.cadence", cadence),
        RL_INT("output.snapshot_cadence", snapshot_cadence),
        RL_BOOL("monitor.buffer_abort", buffer_abort),
        RL_BOOL("monitor.energy", energy),
    };
    return f;
}

#undef RL_DOUBLE
#undef RL_INT
#undef RL_BOOL
#undef RL_ENUM
#undef RL_LABEL

std::size_t levenshtein(const std::string& a, const std::string& b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j)
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

std::string nearest_key(const std::string& key) {
    std::string best;
    std::size_t best_d = std::string::npos;
    for (const auto& f : fields()) {
        const std::string k = f.key;
        const auto dot = k.find('.');
        std::size_t d = levenshtein(key, k);
        if (dot != std::string::npos) {
            // Compare against the bare name as well, and each word of it.
            const std::string bare = k.substr(dot + 1);
            d = std::min(d, levenshtein(key, bare));
            d = std::min(d, levenshtein(key, k.substr(0, dot)) + 1);
            for (const auto& part : {key.substr(0, key.find('_')), key.substr(key.find('_') + 1)})
                if (!part.empty() && (part == bare || part == k.substr(0, dot))) d = std::min<std::size_t>(d, 1);
        }
        if (d < best_d) {
            best_d = d;
            best = k;
        }
    }
    return best;
}

bool periodic_theta(Family f) { return f != Family::conformal_plane; }

bool known_form(const std::string& s) { return s == "dtheta" || s == "sinx" || s == "class"; }

}  // namespace

const std::vector<std::string>& scenario_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& f : fields()) k.emplace_back(f.key);
        return k;
    }();
    return keys;
}

const char* family_name(Family f) { return name_of(kFamilies, f); }
const char* preset_name(MetricPreset p) { return name_of(kPresets, p); }

std::vector<std::string> validate_scenario(const ScenarioSpec& s) {
    std::vector<std::string> e;
    if (s.nx < 8) e.push_back("grid.nx must be at least 8 (got " + std::to_string(s.nx) + ")");
    if (s.ny < 8) e.push_back("grid.ny must be at least 8 (got " + std::to_string(s.ny) + ")");
    if (!(s.T > 0.0)) e.push_back("time.T must be positive");
    if (!(s.cfl > 0.0 && s.cfl <= 0.5)) e.push_back("integrator.cfl must lie in (0, 0.5]");
    if (!(s.dt_cap > 0.0)) e.push_back("integrator.dt_cap must be positive");
    if (s.max_steps < 0) e.push_back("integrator.max_steps must be non-negative");
    if (s.cadence < 1) e.push_back("output.cadence must be at least 1");
    if (s.snapshot_cadence < 0) e.push_back("output.snapshot_cadence must be non-negative");

    switch (s.metric) {
        case MetricPreset::flat: break;
        case MetricPreset::sine:
            if (s.family != Family::conformal_torus) e.push_back("metric preset sine needs geometry.family conformal-torus");
            break;
        case MetricPreset::neck:
            if (s.family != Family::warped_cylinder) e.push_back("metric preset neck needs geometry.family warped-cylinder");
            if (!(s.a - s.b > 0.0)) e.push_back("f not positive: metric.a - metric.b must be > 0");
            if (!(s.b > 0.0)) e.push_back("metric.b must be positive for the neck preset");
            break;
        case MetricPreset::cigar:
            if (s.family != Family::conformal_plane) e.push_back("metric preset cigar needs geometry.family conformal-plane");
            break;
    }
    if (s.family == Family::warped_cylinder && !(s.x_max > s.x_min)) e.push_back("grid.x_max must exceed grid.x_min");
    if (s.family == Family::conformal_plane) {
        if (!(s.half_width > 0.0)) e.push_back("grid.half_width must be positive");
        if (s.disk_radius < 0.0 || s.disk_radius > s.half_width) e.push_back("metric.disk_radius must lie in [0, half_width]");
    }
    if (s.family == Family::flat_torus && s.metric != MetricPreset::flat)
        e.push_back("flat-torus supports only the flat metric preset");

    for (const auto& f : s.forms) {
        if (!known_form(f)) e.push_back("unknown form preset '" + f + "' (expected dtheta, sinx or class)");
        if ((f == "dtheta" || f == "class") && !periodic_theta(s.family))
            e.push_back("form '" + f + "' needs a periodic theta axis");
    }
    for (std::size_t i = 0; i < s.forms.size(); ++i)
        for (std::size_t j = i + 1; j < s.forms.size(); ++j)
            if (s.forms[i] == s.forms[j]) e.push_back("form '" + s.forms[i] + "' listed twice");
    auto tracked = [&](const std::string& l) { return std::find(s.forms.begin(), s.forms.end(), l) != s.forms.end(); };
    if (!s.gauge_form.empty() && !tracked(s.gauge_form)) e.push_back("gauge.form '" + s.gauge_form + "' is not in forms.list");
    if (!s.probe_form.empty()) {
        if (!tracked(s.probe_form)) e.push_back("probe.form '" + s.probe_form + "' is not in forms.list");
        if (!periodic_theta(s.family)) e.push_back("probes need a periodic theta axis");
        if (s.probe_cycle_x >= s.nx) e.push_back("probe.cycle_x outside the grid");
    }
    if (s.subsolution == SubsolutionPreset::constant && !(s.sub_value >= 0.0))
        e.push_back("subsolution.value must be non-negative");
    if (!(s.sub_sink >= 0.0)) e.push_back("subsolution.sink must be non-negative");
    if (s.subsolution == SubsolutionPreset::bump && (!(s.bump_width > 0.0) || !(s.bump_height >= 0.0)))
        e.push_back("bump needs positive width and non-negative height");

    const bool truncated = s.family == Family::warped_cylinder || s.family == Family::conformal_plane;
    if (e.empty() && (!s.probe_form.empty() || (s.buffer_abort && truncated))) {
        try {
            const ScenarioSetup setup = build_initial_state(s);
            if (!s.probe_form.empty()) {
                const auto& phi0 = setup.state.form(s.probe_form).phi0;
                const int i = s.probe_cycle_x >= 0 ? s.probe_cycle_x : setup.state.grid().origin_i;
                make_probe(s.probe_form, phi0, i);
            }
            if (s.buffer_abort && truncated) {
                // The drift monitor assumes the initial metric is flat in the buffers.
                const auto R = flow_curvature(setup.state.g, Exec::serial);
                const auto buffer = buffer_mask(setup.state.grid(), 0.15);
                double worst = 0.0;
                for (std::size_t n = 0; n < R.size(); ++n)
                    if (buffer[n]) worst = std::max(worst, std::abs(R[n]));
                if (!(worst <= 1e-6))
                    e.push_back("initial curvature " + format_double(worst) +
                                " in the truncation buffer; set monitor.buffer_abort = false");
            }
        } catch (const Error& ex) {
            e.push_back(std::string("initial state check failed: ") + ex.what());
        }
    }
    return e;
}

ParseResult parse_scenario(const std::string& text) {
    ParseResult r;
    std::stringstream in(text);
    std::string line;
    std::string section;
    std::vector<std::string> seen;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = " (line " + std::to_string(lineno) + ")";
        if (line.front() == '[') {
            if (line.back() != ']') {
                r.errors.push_back("malformed section header" + where);
                continue;
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            r.errors.push_back("expected 'key = value'" + where);
            continue;
        }
        std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!section.empty() && key.find('.') == std::string::npos) key = section + "." + key;
        const auto& fs = fields();
        const auto it = std::find_if(fs.begin(), fs.end(), [&](const Field& f) { return key == f.key; });
        if (it == fs.end()) {
            r.errors.push_back("unknown key '" + key + "'" + where + "; nearest valid key is '" + nearest_key(key) + "'");
            continue;
        }
        if (std::find(seen.begin(), seen.end(), key) != seen.end()) {
            r.errors.push_back("duplicate key '" + key + "'" + where);
            continue;
        }
        seen.push_back(key);
        const std::string err = it->set(r.spec, value);
        if (!err.empty()) r.errors.push_back("bad value '" + value + "' for " + key + where + ": " + err);
    }
    if (r.errors.empty()) {
        for (auto& e : validate_scenario(r.spec)) r.errors.push_back(std::move(e));
    }
    return r;
}

std::string serialize_scenario(const ScenarioSpec& spec) {
    std::string out;
    for (const auto& f : fields()) out += std::string(f.key) + " = " + f.get(spec) + "\n";
    return out;
}

std::uint64_t scenario_hash(const ScenarioSpec& spec) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : serialize_scenario(spec)) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

namespace {

OneFormField form_preset(const std::string& label, const Grid2D& grid, double c) {
    OneFormField phi(grid);
    for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.ny; ++j) {
            const std::size_t n = grid.index(i, j);
            const double x = grid.x(i);
            if (label == "dtheta") {
                phi.y[n] = 1.0;
            } else if (label == "sinx") {
                phi.x[n] = std::sin(x);
            } else if (label == "class") {
                phi.x[n] = c * std::cos(x);
                phi.y[n] = 1.0;
            } else {
                throw Error("unknown form preset '" + label + "'");
            }
        }
    return phi;
}

}  // namespace

ScenarioSetup build_initial_state(const ScenarioSpec& s) {
    Grid2D grid;
    switch (s.family) {
        case Family::flat_torus:
        case Family::conformal_torus: grid = torus_grid(s.nx, s.ny); break;
        case Family::warped_cylinder: grid = cylinder_grid(s.nx, s.ny, s.x_min, s.x_max); break;
        case Family::conformal_plane: grid = plane_grid(s.nx, s.ny, s.half_width); break;
    }
    const double x0 = grid.x(grid.origin_i);
    const double y0 = grid.y(grid.origin_j);
    auto radius = [&](int i, int j) { return std::hypot(grid.x(i) - x0, grid.y(j) - y0); };

    ScenarioSetup out;
    FlowState& st = out.state;
    st.T = s.T;
    switch (s.family) {
        case Family::flat_torus: st.g = flat_metric(grid); break;
        case Family::conformal_torus: {
            std::vector<double> u(grid.size(), 0.0);
            if (s.metric == MetricPreset::sine)
                for (int i = 0; i < grid.nx; ++i)
                    for (int j = 0; j < grid.ny; ++j) u[grid.index(i, j)] = s.amplitude * std::sin(grid.x(i));
            st.g = conformal_metric(grid, std::move(u));
            break;
        }
        case Family::warped_cylinder: {
            std::vector<double> h(grid.nx, 1.0), f(grid.nx, 1.0);
            if (s.metric == MetricPreset::neck)
                for (int i = 0; i < grid.nx; ++i) f[i] = neck_profile(grid.x(i), s.a, s.b);
            st.g = warped_metric(grid, std::move(h), std::move(f));
            break;
        }
        case Family::conformal_plane: {
            std::vector<double> u(grid.size(), 0.0);
            if (s.metric == MetricPreset::cigar)
                for (int i = 0; i < grid.nx; ++i)
                    for (int j = 0; j < grid.ny; ++j) u[grid.index(i, j)] = cigar_potential(radius(i, j));
            st.g = conformal_metric(grid, std::move(u));
            st.frozen = boundary_mask(grid);
            const double disk = s.disk_radius > 0.0 ? s.disk_radius : s.half_width;
            for (int i = 0; i < grid.nx; ++i)
                for (int j = 0; j < grid.ny; ++j)
                    if (radius(i, j) > disk + 1e-12) st.frozen[grid.index(i, j)] = 1;
            break;
        }
    }

    for (const auto& label : s.forms) {
        const OneFormField phi = form_preset(label, grid, s.class_coefficient);
        st.forms.push_back({label, phi, phi});
    }
    if (!s.gauge_form.empty()) {
        const auto& phi0 = st.form(s.gauge_form).phi0;
        st.gauge = Gauge{s.gauge_form, phi0, ScalarField(grid, 0.0, ScalarRole::gauge)};
    }
    if (s.subsolution != SubsolutionPreset::none) {
        ScalarField u(grid, 0.0, ScalarRole::subsolution);
        for (int i = 0; i < grid.nx; ++i)
            for (int j = 0; j < grid.ny; ++j) {
                double v = 0.0;
                switch (s.subsolution) {
                    case SubsolutionPreset::constant: v = s.sub_value; break;
                    case SubsolutionPreset::one_plus_cos: v = 1.0 + std::cos(grid.x(i)); break;
                    case SubsolutionPreset::bump: {
                        const double d = s.family == Family::conformal_plane ? radius(i, j)
                                                                             : std::abs(grid.x(i) - s.bump_center);
                        const double q = d / s.bump_width;
                        v = q < 1.0 ? s.bump_height * (1.0 - q * q) * (1.0 - q * q) : 0.0;
                        break;
                    }
                    case SubsolutionPreset::none: break;
                }
                u(i, j) = v;
            }
        st.subsolution = Subsolution{std::move(u), s.sub_sink};
    }

    IntegratorSpec& in = out.integrator;
    in.scheme = s.scheme;
    in.cfl = s.cfl;
    in.dt_cap = s.dt_cap;
    in.max_steps = s.max_steps;
    in.cadence = s.cadence;
    in.snapshot_cadence = s.snapshot_cadence;
    in.metric_path = s.metric_path;
    in.form_method = s.laplacian;
    // The flat torus is a fixed point of the flow; integrating it would only cost time.
    in.evolve_metric = s.ricci && s.family != Family::flat_torus;

    MonitorOptions& mo = out.monitors;
    mo.buffer_abort = s.buffer_abort;
    mo.energy = s.energy;
    mo.probe_cycle_x = s.probe_cycle_x;
    return out;
}

Trajectory run_scenario(const ScenarioSpec& spec, Exec exec) {
    const auto errors = validate_scenario(spec);
    if (!errors.empty()) throw Error("invalid scenario: " + errors.front());
    ScenarioSetup setup = build_initial_state(spec);
    return run_flow(std::move(setup.state), setup.integrator, setup.monitors, exec);
}

}  // namespace riccilab
