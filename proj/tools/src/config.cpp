#include "config.hpp"

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

#include <json.hpp>

#include "constel/io.hpp"

namespace constel::cli {

using json = nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& message) {
    throw ConfigError(message);
}

std::string line_of_offset(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
        }
    }
    return std::to_string(line);
}

json parse_text(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        fail(origin + ":" + line_of_offset(text, e.byte) + ": " + e.what());
    }
}

void expect_object(const json& j, const std::string& path) {
    if (!j.is_object()) {
        fail(path + ": expected an object");
    }
}

void reject_unknown(const json& j, const std::string& path,
                    std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (std::string_view a : allowed) {
            if (key == a) {
                known = true;
                break;
            }
        }
        if (!known) {
            fail(path + ": unknown key '" + key + "'");
        }
    }
}

double as_num(const json& j, const std::string& where) {
    if (!j.is_number()) {
        fail(where + ": expected a number");
    }
    return j.get<double>();
}

double get_num(const json& j, const std::string& path, const char* key, double dflt) {
    if (!j.contains(key)) return dflt;
    return as_num(j.at(key), path + "." + key);
}

std::optional<double> get_num_opt(const json& j, const std::string& path, const char* key) {
    if (!j.contains(key)) return std::nullopt;
    return as_num(j.at(key), path + "." + key);
}

int get_int(const json& j, const std::string& path, const char* key, int dflt) {
    if (!j.contains(key)) return dflt;
    const json& v = j.at(key);
    if (!v.is_number_integer()) {
        fail(path + "." + key + ": expected an integer");
    }
    return v.get<int>();
}

std::uint64_t get_u64(const json& j, const std::string& path, const char* key,
                      std::uint64_t dflt) {
    if (!j.contains(key)) return dflt;
    const json& v = j.at(key);
    if (v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0)) {
        return v.get<std::uint64_t>();
    }
    if (v.is_number_float() && v.get<double>() >= 0 && v.get<double>() <= 1.8e19) {
        return static_cast<std::uint64_t>(v.get<double>());
    }
    fail(path + "." + key + ": expected a non-negative integer");
}

std::string get_str(const json& j, const std::string& path, const char* key,
                    const std::string& dflt) {
    if (!j.contains(key)) return dflt;
    const json& v = j.at(key);
    if (!v.is_string()) {
        fail(path + "." + key + ": expected a string");
    }
    return v.get<std::string>();
}

std::vector<double> get_num_list(const json& j, const std::string& path, const char* key,
                                 std::vector<double> dflt, bool required = false) {
    if (!j.contains(key)) {
        if (required) {
            fail(path + "." + key + ": required");
        }
        return dflt;
    }
    const json& v = j.at(key);
    if (!v.is_array() || v.empty()) {
        fail(path + "." + key + ": expected a non-empty array of numbers");
    }
    std::vector<double> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(as_num(v[i], path + "." + key + "[" + std::to_string(i) + "]"));
    }
    return out;
}

std::vector<int> get_int_list(const json& j, const std::string& path, const char* key,
                              std::vector<int> dflt) {
    if (!j.contains(key)) return dflt;
    const json& v = j.at(key);
    if (!v.is_array() || v.empty()) {
        fail(path + "." + key + ": expected a non-empty array of integers");
    }
    std::vector<int> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number_integer()) {
            fail(path + "." + key + "[" + std::to_string(i) + "]: expected an integer");
        }
        out.push_back(v[i].get<int>());
    }
    return out;
}

PolarPoint get_polar(const json& j, const std::string& path, const char* key, PolarPoint dflt) {
    if (!j.contains(key)) return dflt;
    const json& v = j.at(key);
    const std::string p = path + "." + key;
    expect_object(v, p);
    reject_unknown(v, p, {"theta_deg", "rho_m"});
    return {get_num(v, p, "theta_deg", 0.0), get_num(v, p, "rho_m", 0.0)};
}

SensorModel parse_sensor(const json& j) {
    const std::string p = "$.sensor";
    expect_object(j, p);
    reject_unknown(j, p,
                   {"rate_r", "decay_b", "scatter_sigma_theta_deg", "scatter_sigma_rho_m",
                    "clutter_rate", "dist_max_m", "fov_half_angle_deg", "frame_rate_hz",
                    "target_power_median", "target_power_spread", "clutter_power_median",
                    "clutter_power_spread"});
    SensorModel m;
    m.rate_r = get_num(j, p, "rate_r", m.rate_r);
    m.decay_b = get_num(j, p, "decay_b", m.decay_b);
    m.scatter_sigma_theta_deg = get_num(j, p, "scatter_sigma_theta_deg", m.scatter_sigma_theta_deg);
    m.scatter_sigma_rho_m = get_num(j, p, "scatter_sigma_rho_m", m.scatter_sigma_rho_m);
    m.clutter_rate = get_num(j, p, "clutter_rate", m.clutter_rate);
    m.dist_max_m = get_num(j, p, "dist_max_m", m.dist_max_m);
    m.fov_half_angle_deg = get_num(j, p, "fov_half_angle_deg", m.fov_half_angle_deg);
    m.frame_rate_hz = get_num(j, p, "frame_rate_hz", m.frame_rate_hz);
    m.target_power_median = get_num(j, p, "target_power_median", m.target_power_median);
    m.target_power_spread = get_num(j, p, "target_power_spread", m.target_power_spread);
    m.clutter_power_median = get_num(j, p, "clutter_power_median", m.clutter_power_median);
    m.clutter_power_spread = get_num(j, p, "clutter_power_spread", m.clutter_power_spread);
    try {
        validate(m);
    } catch (const std::invalid_argument& e) {
        fail(p + ": " + e.what());
    }
    return m;
}

HoverModel parse_hover(const json& j) {
    const std::string p = "$.hover";
    expect_object(j, p);
    reject_unknown(j, p, {"sigma_theta_deg", "sigma_rho_m"});
    HoverModel h;
    h.sigma_theta_deg = get_num(j, p, "sigma_theta_deg", h.sigma_theta_deg);
    h.sigma_rho_m = get_num(j, p, "sigma_rho_m", h.sigma_rho_m);
    if (!(h.sigma_theta_deg > 0.0) || !(h.sigma_rho_m > 0.0)) {
        fail(p + ": hover sigmas must be > 0");
    }
    return h;
}

SearchMode parse_mode(const json& j, const std::string& path, const char* key, SearchMode dflt) {
    const std::string s = get_str(j, path, key, to_string(dflt));
    try {
        return search_mode_from_string(s);
    } catch (const std::invalid_argument&) {
        fail(path + "." + key + ": expected 'exhaustive' or 'heuristic'");
    }
}

LatticeSection parse_lattice(const json& j, const std::string& p) {
    expect_object(j, p);
    reject_unknown(j, p,
                   {"n_theta", "n_rho", "p_c", "delta_theta_values_deg", "delta_rho_values_m"});
    LatticeSection s;
    s.n_theta = get_int(j, p, "n_theta", s.n_theta);
    s.n_rho = get_int(j, p, "n_rho", s.n_rho);
    if (s.n_theta < 1 || s.n_rho < 1) {
        fail(p + ": lattice dimensions must be >= 1");
    }
    s.p_c = get_polar(j, p, "p_c", s.p_c);
    s.delta_theta_values_deg =
        get_num_list(j, p, "delta_theta_values_deg", s.delta_theta_values_deg);
    s.delta_rho_values_m = get_num_list(j, p, "delta_rho_values_m", s.delta_rho_values_m);
    return s;
}

DesignSection parse_design(const json& j) {
    const std::string p = "$.design";
    expect_object(j, p);
    reject_unknown(j, p, {"channels_mhz", "p_c", "mode", "xi", "quotient_db", "delta_theta_deg",
                          "delta_rho_m", "subset_budget", "threads"});
    DesignSection s;
    s.channels_mhz = get_num_list(j, p, "channels_mhz", {}, /*required=*/true);
    s.p_c = get_polar(j, p, "p_c", s.p_c);
    s.mode = parse_mode(j, p, "mode", s.mode);
    s.xi = get_num_opt(j, p, "xi");
    s.quotient_db = get_num_opt(j, p, "quotient_db");
    s.delta_theta_deg = get_num_opt(j, p, "delta_theta_deg");
    s.delta_rho_m = get_num_opt(j, p, "delta_rho_m");
    s.subset_budget = get_u64(j, p, "subset_budget", s.subset_budget);
    s.threads = get_int(j, p, "threads", s.threads);
    const bool has_deltas = s.delta_theta_deg.has_value() || s.delta_rho_m.has_value();
    if (has_deltas && (!s.delta_theta_deg || !s.delta_rho_m)) {
        fail(p + ": delta_theta_deg and delta_rho_m must be given together");
    }
    const int policies = (s.xi ? 1 : 0) + (s.quotient_db ? 1 : 0) + (has_deltas ? 1 : 0);
    if (policies != 1) {
        fail(p + ": give exactly one of xi, quotient_db, or explicit deltas");
    }
    return s;
}

ScenarioSection parse_scenario(const json& j) {
    const std::string p = "$.scenario";
    expect_object(j, p);
    reject_unknown(j, p, {"channels_mhz", "constellation", "constellation_file",
                          "initial_channel_mhz", "jammers", "duration_s", "goodput_window_s",
                          "jam_threshold", "jam_windows", "goodput_noise", "t_meas_s"});
    ScenarioSection s;
    ScenarioConfig& c = s.scenario;
    c.channels_mhz = get_num_list(j, p, "channels_mhz", {}, /*required=*/true);
    const bool inline_doc = j.contains("constellation");
    const bool file_ref = j.contains("constellation_file");
    if (inline_doc == file_ref) {
        fail(p + ": give exactly one of constellation or constellation_file");
    }
    if (inline_doc) {
        try {
            c.constellation =
                io::constellation_from_json(j.at("constellation").dump(), p + ".constellation");
        } catch (const io::parse_error& e) {
            fail(e.what());
        }
    } else {
        s.constellation_file = get_str(j, p, "constellation_file", "");
    }
    c.initial_channel_mhz = get_num(j, p, "initial_channel_mhz", c.initial_channel_mhz);
    c.duration_s = get_num(j, p, "duration_s", c.duration_s);
    c.goodput_window_s = get_num(j, p, "goodput_window_s", c.goodput_window_s);
    c.jam_threshold = get_num(j, p, "jam_threshold", c.jam_threshold);
    c.jam_windows = get_int(j, p, "jam_windows", c.jam_windows);
    c.goodput_noise = get_num(j, p, "goodput_noise", c.goodput_noise);
    c.t_meas_s = get_num(j, p, "t_meas_s", c.t_meas_s);
    if (j.contains("jammers")) {
        const json& arr = j.at("jammers");
        if (!arr.is_array()) {
            fail(p + ".jammers: expected an array");
        }
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string jp = p + ".jammers[" + std::to_string(i) + "]";
            expect_object(arr[i], jp);
            reject_unknown(arr[i], jp, {"t_start_s", "t_end_s", "channels_mhz"});
            JamInterval interval;
            interval.t_start_s = get_num(arr[i], jp, "t_start_s", 0.0);
            interval.t_end_s = get_num(arr[i], jp, "t_end_s", 0.0);
            interval.channels_mhz = get_num_list(arr[i], jp, "channels_mhz", {}, true);
            c.jammers.push_back(std::move(interval));
        }
    }
    return s;
}

std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

void apply_override(json& root, const std::string& spec) {
    const std::size_t eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) {
        fail("override '" + spec + "': expected dotted.path=value");
    }
    const std::string path = spec.substr(0, eq);
    const std::string value = spec.substr(eq + 1);

    json* node = &root;
    std::size_t start = 0;
    while (true) {
        const std::size_t dot = path.find('.', start);
        const std::string key = path.substr(start, dot - start);
        if (key.empty()) {
            fail("override '" + spec + "': empty path segment");
        }
        if (dot == std::string::npos) {
            json parsed = json::parse(value, nullptr, /*allow_exceptions=*/false);
            (*node)[key] = parsed.is_discarded() ? json(value) : parsed;
            return;
        }
        if (node->contains(key) && !(*node)[key].is_object()) {
            fail("override '" + spec + "': '" + key + "' is not an object");
        }
        node = &(*node)[key];
        start = dot + 1;
    }
}

}  // namespace

RunConfig load_config_text(const std::string& text, const std::vector<std::string>& overrides,
                           const std::string& origin) {
    json root = parse_text(text, origin);
    expect_object(root, "$");
    for (const std::string& o : overrides) {
        apply_override(root, o);
    }
    reject_unknown(root, "$",
                   {"seed", "sensor", "hover", "dbscan", "histogram", "pid", "flight", "design",
                    "pe", "montecarlo", "localize", "synth_cloud", "traveltime", "compare_search",
                    "fly", "scenario"});

    RunConfig cfg;
    cfg.config_hash = fnv1a64(root.dump());

    if (root.contains("seed")) {
        cfg.seed = get_u64(root, "$", "seed", 0);
    }
    if (root.contains("sensor")) {
        cfg.sensor = parse_sensor(root.at("sensor"));
    }
    if (root.contains("hover")) {
        cfg.hover = parse_hover(root.at("hover"));
    }
    if (root.contains("dbscan")) {
        const json& j = root.at("dbscan");
        const std::string p = "$.dbscan";
        expect_object(j, p);
        reject_unknown(j, p, {"epsilon_m", "min_pts", "alpha"});
        cfg.dbscan.epsilon_m = get_num(j, p, "epsilon_m", cfg.dbscan.epsilon_m);
        cfg.dbscan.min_pts = get_int(j, p, "min_pts", 0);
        cfg.dbscan_alpha = get_num(j, p, "alpha", cfg.dbscan_alpha);
        if (!(cfg.dbscan.epsilon_m > 0.0)) {
            fail(p + ".epsilon_m: must be > 0");
        }
        if (!(cfg.dbscan_alpha > 0.0) || cfg.dbscan_alpha > 1.0) {
            fail(p + ".alpha: must lie in (0, 1]");
        }
    } else {
        cfg.dbscan.min_pts = 0;  // auto via alpha unless given
    }
    cfg.dbscan.dist_max_m = cfg.sensor.dist_max_m;

    if (root.contains("histogram")) {
        const json& j = root.at("histogram");
        const std::string p = "$.histogram";
        expect_object(j, p);
        reject_unknown(j, p, {"bin_width_theta_deg", "bin_width_rho_m"});
        cfg.histogram.bin_width_theta_deg =
            get_num(j, p, "bin_width_theta_deg", cfg.histogram.bin_width_theta_deg);
        cfg.histogram.bin_width_rho_m = get_num(j, p, "bin_width_rho_m", cfg.histogram.bin_width_rho_m);
        if (!(cfg.histogram.bin_width_theta_deg > 0.0) || !(cfg.histogram.bin_width_rho_m > 0.0)) {
            fail(p + ": bin widths must be > 0");
        }
    }
    if (root.contains("pid")) {
        const json& j = root.at("pid");
        const std::string p = "$.pid";
        expect_object(j, p);
        reject_unknown(j, p, {"kp", "kd", "ki"});
        cfg.pid.kp = get_num(j, p, "kp", cfg.pid.kp);
        cfg.pid.kd = get_num(j, p, "kd", cfg.pid.kd);
        cfg.pid.ki = get_num(j, p, "ki", cfg.pid.ki);
        if (!(cfg.pid.kp > 0.0) || cfg.pid.kd < 0.0 || cfg.pid.ki < 0.0) {
            fail(p + ": kp must be > 0, kd and ki >= 0");
        }
    }
    if (root.contains("flight")) {
        const json& j = root.at("flight");
        const std::string p = "$.flight";
        expect_object(j, p);
        reject_unknown(j, p,
                       {"dt_s", "v_max_mps", "arrival_radius_m", "settle_time_s", "max_sim_time_s"});
        cfg.flight.dt_s = get_num(j, p, "dt_s", cfg.flight.dt_s);
        cfg.flight.v_max_mps = get_num(j, p, "v_max_mps", cfg.flight.v_max_mps);
        cfg.flight.arrival_radius_m = get_num(j, p, "arrival_radius_m", cfg.flight.arrival_radius_m);
        cfg.flight.settle_time_s = get_num(j, p, "settle_time_s", cfg.flight.settle_time_s);
        cfg.flight.max_sim_time_s = get_num(j, p, "max_sim_time_s", cfg.flight.max_sim_time_s);
    }

    if (root.contains("design")) {
        cfg.design = parse_design(root.at("design"));
    }
    if (root.contains("pe")) {
        cfg.pe = parse_lattice(root.at("pe"), "$.pe");
    }
    if (root.contains("montecarlo")) {
        const json& j = root.at("montecarlo");
        const std::string p = "$.montecarlo";
        expect_object(j, p);
        reject_unknown(j, p, {"n_theta", "n_rho", "p_c", "delta_theta_values_deg",
                              "delta_rho_values_m", "trials", "threads"});
        MonteCarloSection s;
        json lattice = j;
        lattice.erase("trials");
        lattice.erase("threads");
        s.lattice = parse_lattice(lattice, p);
        s.trials = get_u64(j, p, "trials", s.trials);
        s.threads = get_int(j, p, "threads", s.threads);
        if (s.trials < 1) {
            fail(p + ".trials: must be >= 1");
        }
        cfg.montecarlo = s;
    }
    if (root.contains("localize")) {
        const json& j = root.at("localize");
        const std::string p = "$.localize";
        expect_object(j, p);
        reject_unknown(j, p, {"t_meas_s"});
        LocalizeSection s;
        s.t_meas_s = get_num_opt(j, p, "t_meas_s");
        cfg.localize = s;
    }
    if (root.contains("synth_cloud")) {
        const json& j = root.at("synth_cloud");
        const std::string p = "$.synth_cloud";
        expect_object(j, p);
        reject_unknown(j, p, {"true_position", "t_meas_s"});
        SynthCloudSection s;
        s.true_position = get_polar(j, p, "true_position", s.true_position);
        s.t_meas_s = get_num(j, p, "t_meas_s", s.t_meas_s);
        if (!(s.t_meas_s > 0.0)) {
            fail(p + ".t_meas_s: must be > 0");
        }
        cfg.synth_cloud = s;
    }
    if (root.contains("traveltime")) {
        const json& j = root.at("traveltime");
        const std::string p = "$.traveltime";
        expect_object(j, p);
        reject_unknown(j, p, {"n_values", "delta_theta_values_deg", "delta_rho_values_m", "p_c",
                              "mode", "subset_budget", "threads"});
        TraveltimeSection s;
        s.n_values = get_int_list(j, p, "n_values", s.n_values);
        s.delta_theta_values_deg =
            get_num_list(j, p, "delta_theta_values_deg", s.delta_theta_values_deg);
        s.delta_rho_values_m = get_num_list(j, p, "delta_rho_values_m", s.delta_rho_values_m);
        s.p_c = get_polar(j, p, "p_c", s.p_c);
        s.mode = parse_mode(j, p, "mode", s.mode);
        s.subset_budget = get_u64(j, p, "subset_budget", s.subset_budget);
        s.threads = get_int(j, p, "threads", s.threads);
        cfg.traveltime = s;
    }
    if (root.contains("compare_search")) {
        const json& j = root.at("compare_search");
        const std::string p = "$.compare_search";
        expect_object(j, p);
        reject_unknown(j, p,
                       {"n_values", "delta_theta_deg", "delta_rho_m", "p_c", "subset_budget",
                        "threads"});
        CompareSearchSection s;
        s.n_values = get_int_list(j, p, "n_values", s.n_values);
        s.delta_theta_deg = get_num(j, p, "delta_theta_deg", s.delta_theta_deg);
        s.delta_rho_m = get_num(j, p, "delta_rho_m", s.delta_rho_m);
        s.p_c = get_polar(j, p, "p_c", s.p_c);
        s.subset_budget = get_u64(j, p, "subset_budget", s.subset_budget);
        s.threads = get_int(j, p, "threads", s.threads);
        cfg.compare_search = s;
    }
    if (root.contains("fly")) {
        const json& j = root.at("fly");
        const std::string p = "$.fly";
        expect_object(j, p);
        reject_unknown(j, p, {"start", "target"});
        FlySection s;
        s.start = get_polar(j, p, "start", s.start);
        s.target = get_polar(j, p, "target", s.target);
        cfg.fly = s;
    }
    if (root.contains("scenario")) {
        cfg.scenario = parse_scenario(root.at("scenario"));
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path,
                      const std::vector<std::string>& overrides) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail("cannot open config file " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_config_text(buf.str(), overrides, path.string());
}

std::string hash_hex(std::uint64_t hash) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

}  // namespace constel::cli
