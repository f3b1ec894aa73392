#include "constel/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace constel::io {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);  // exact text round trip
    return buf;
}

double parse_double(std::string_view field, const std::string& origin, int line) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) {
        throw parse_error(origin + ":" + std::to_string(line) + ": bad number '" +
                          std::string(field) + "'");
    }
    return v;
}

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

void write_metadata(std::string& out, const Metadata& meta) {
    for (const auto& [key, value] : meta) {
        out += "# " + key + "=" + value + "\n";
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw parse_error("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Walks lines; '#' lines go to metadata, the first other line must equal the
// expected header, each following non-empty line is handed to on_row.
template <typename RowFn>
Metadata scan_csv(const std::string& text, const std::string& origin,
                  const std::string& expected_header, int n_fields, RowFn on_row) {
    Metadata meta;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (line[0] == '#') {
            const std::size_t eq = line.find('=');
            if (eq != std::string::npos) {
                std::size_t key_start = line.find_first_not_of("# ");
                meta[line.substr(key_start, eq - key_start)] = line.substr(eq + 1);
            }
            continue;
        }
        if (!header_seen) {
            if (line != expected_header) {
                throw parse_error(origin + ":" + std::to_string(line_no) + ": expected header '" +
                                  expected_header + "', got '" + line + "'");
            }
            header_seen = true;
            continue;
        }
        const auto fields = split_csv(line);
        if (static_cast<int>(fields.size()) != n_fields) {
            throw parse_error(origin + ":" + std::to_string(line_no) + ": expected " +
                              std::to_string(n_fields) + " fields, got " +
                              std::to_string(fields.size()));
        }
        on_row(fields, line_no);
    }
    if (!header_seen) {
        throw parse_error(origin + ": missing header '" + expected_header + "'");
    }
    return meta;
}

using ordered_json = nlohmann::ordered_json;

}  // namespace

void atomic_write_text(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    fs::path tmp = dir / (path.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write " + tmp.string());
        }
        out << content;
        if (!out.flush()) {
            throw std::runtime_error("short write to " + tmp.string());
        }
    }
    fs::rename(tmp, path);
}

std::string point_cloud_to_csv(const PointCloud& cloud, const Metadata& meta) {
    std::string out;
    Metadata full = meta;
    full["t_meas_s"] = fmt_double(cloud.t_meas_s);
    write_metadata(out, full);
    out += "t_s,theta_deg,rho_m,power\n";
    for (const CloudPoint& p : cloud.points) {
        out += fmt_double(p.t_s) + "," + fmt_double(p.theta_deg) + "," + fmt_double(p.rho_m) +
               "," + fmt_double(p.power) + "\n";
    }
    return out;
}

PointCloud point_cloud_from_csv(const std::string& text, const std::string& origin) {
    PointCloud cloud;
    const Metadata meta = scan_csv(
        text, origin, "t_s,theta_deg,rho_m,power", 4,
        [&](const std::vector<std::string_view>& f, int line) {
            CloudPoint p;
            p.t_s = parse_double(f[0], origin, line);
            p.theta_deg = parse_double(f[1], origin, line);
            p.rho_m = parse_double(f[2], origin, line);
            p.power = parse_double(f[3], origin, line);
            if (!(p.power > 0.0)) {
                throw parse_error(origin + ":" + std::to_string(line) + ": power must be > 0");
            }
            if (p.rho_m < 0.0) {
                throw parse_error(origin + ":" + std::to_string(line) + ": rho must be >= 0");
            }
            cloud.points.push_back(p);
        });
    if (auto it = meta.find("t_meas_s"); it != meta.end()) {
        cloud.t_meas_s = parse_double(it->second, origin, 0);
    } else {
        for (const CloudPoint& p : cloud.points) {
            cloud.t_meas_s = std::max(cloud.t_meas_s, p.t_s);
        }
    }
    return cloud;
}

void write_point_cloud_csv(const std::filesystem::path& path, const PointCloud& cloud,
                           const Metadata& meta) {
    atomic_write_text(path, point_cloud_to_csv(cloud, meta));
}

PointCloud read_point_cloud_csv(const std::filesystem::path& path) {
    return point_cloud_from_csv(read_file(path), path.string());
}

std::string estimates_to_csv(const std::vector<ObjectEstimate>& estimates, const Metadata& meta) {
    std::string out;
    write_metadata(out, meta);
    out += "object_id,theta_deg,rho_m,mass\n";
    for (std::size_t i = 0; i < estimates.size(); ++i) {
        out += std::to_string(i) + "," + fmt_double(estimates[i].position.theta_deg) + "," +
               fmt_double(estimates[i].position.rho_m) + "," + fmt_double(estimates[i].power_mass) +
               "\n";
    }
    return out;
}

std::string trajectory_to_csv(const Trajectory& trajectory, const Metadata& meta) {
    std::string out;
    Metadata full = meta;
    full["travel_time_s"] = fmt_double(trajectory.travel_time_s);
    write_metadata(out, full);
    out += "t_s,x_m,y_m,speed_mps\n";
    for (const TrajectorySample& s : trajectory.samples) {
        out += fmt_double(s.t_s) + "," + fmt_double(s.position.x_m) + "," +
               fmt_double(s.position.y_m) + "," + fmt_double(s.speed_mps) + "\n";
    }
    return out;
}

std::string timeline_to_csv(const ScenarioResult& result, const Metadata& meta) {
    std::string out;
    Metadata full = meta;
    full["status"] = result.status == ScenarioStatus::ok ? "ok" : "failed";
    write_metadata(out, full);
    out += "t_s,goodput,channel_mhz,event\n";
    std::size_t e = 0;
    double last_goodput = 0.0;
    double last_channel = result.samples.empty() ? 0.0 : result.samples.front().channel_mhz;
    for (const GoodputSample& s : result.samples) {
        while (e < result.events.size() && result.events[e].t_s <= s.t_s) {
            out += fmt_double(result.events[e].t_s) + "," + fmt_double(last_goodput) + "," +
                   fmt_double(last_channel) + "," + std::string(to_string(result.events[e].kind)) +
                   ";" + result.events[e].payload + "\n";
            ++e;
        }
        out += fmt_double(s.t_s) + "," + fmt_double(s.goodput) + "," + fmt_double(s.channel_mhz) +
               ",\n";
        last_goodput = s.goodput;
        last_channel = s.channel_mhz;
    }
    for (; e < result.events.size(); ++e) {
        out += fmt_double(result.events[e].t_s) + "," + fmt_double(last_goodput) + "," +
               fmt_double(last_channel) + "," + std::string(to_string(result.events[e].kind)) +
               ";" + result.events[e].payload + "\n";
    }
    return out;
}

std::string constellation_to_json(const Constellation& c, const DesignReport* report,
                                  const Metadata& meta) {
    ordered_json doc;
    doc["format"] = "constel-constellation/1";
    doc["n"] = c.size();
    doc["delta_theta_deg"] = c.delta_theta_deg;
    doc["delta_rho_m"] = c.delta_rho_m;
    ordered_json symbols = ordered_json::array();
    for (int i = 0; i < c.size(); ++i) {
        ordered_json s;
        s["index"] = i;
        s["theta_deg"] = c.symbols[i].theta_deg;
        s["rho_m"] = c.symbols[i].rho_m;
        s["channel_mhz"] = c.channel_mhz[i];
        symbols.push_back(std::move(s));
    }
    doc["symbols"] = std::move(symbols);
    if (report != nullptr) {
        ordered_json r;
        r["mode"] = to_string(report->mode);
        r["pe_analytic"] = report->pe_analytic;
        r["mean_pairwise_distance_m"] = report->mean_pairwise_m;
        r["delta_theta_deg"] = report->delta_theta_deg;
        r["delta_rho_m"] = report->delta_rho_m;
        if (report->xi) {
            r["xi"] = *report->xi;
        }
        doc["report"] = std::move(r);
    }
    if (!meta.empty()) {
        ordered_json m;
        for (const auto& [key, value] : meta) {
            m[key] = value;
        }
        doc["provenance"] = std::move(m);
    }
    return doc.dump(2) + "\n";
}

Constellation constellation_from_json(const std::string& text, const std::string& origin) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(origin + ": " + e.what());
    }
    try {
        if (doc.at("format").get<std::string>() != "constel-constellation/1") {
            throw parse_error(origin + ": unknown format '" +
                              doc.at("format").get<std::string>() + "'");
        }
        Constellation c;
        c.delta_theta_deg = doc.at("delta_theta_deg").get<double>();
        c.delta_rho_m = doc.at("delta_rho_m").get<double>();
        const auto& symbols = doc.at("symbols");
        const int n = doc.at("n").get<int>();
        if (static_cast<int>(symbols.size()) != n) {
            throw parse_error(origin + ": symbol count does not match n");
        }
        c.symbols.resize(n);
        c.channel_mhz.resize(n);
        for (const auto& s : symbols) {
            const int i = s.at("index").get<int>();
            if (i < 0 || i >= n) {
                throw parse_error(origin + ": symbol index out of range");
            }
            c.symbols[i] = {s.at("theta_deg").get<double>(), s.at("rho_m").get<double>()};
            c.channel_mhz[i] = s.at("channel_mhz").get<double>();
        }
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(origin + ": " + e.what());
    }
}

void write_constellation_json(const std::filesystem::path& path, const Constellation& c,
                              const DesignReport* report, const Metadata& meta) {
    atomic_write_text(path, constellation_to_json(c, report, meta));
}

Constellation read_constellation_json(const std::filesystem::path& path) {
    return constellation_from_json(read_file(path), path.string());
}

}  // namespace constel::io
