#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "constel/designer.hpp"
#include "constel/flight.hpp"
#include "constel/localization.hpp"
#include "constel/scenario.hpp"
#include "constel/sensor.hpp"

namespace constel::io {

/// Malformed input file; what() carries "path:line: message" where applicable.
struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Leading '#' comment lines of the form "# key=value". Readers keep unknown
/// keys; writers emit them in key order.
using Metadata = std::map<std::string, std::string>;

/// Writes content to a temporary file in the target directory and renames it
/// into place, so a failed run never leaves a partial output file.
void atomic_write_text(const std::filesystem::path& path, const std::string& content);

// Point-cloud CSV, header `t_s,theta_deg,rho_m,power`. The same format ingests
// real captured clouds; t_meas comes from the `t_meas_s` metadata key when
// present, otherwise from the latest timestamp.
std::string point_cloud_to_csv(const PointCloud& cloud, const Metadata& meta = {});
PointCloud point_cloud_from_csv(const std::string& text, const std::string& origin = "<string>");
void write_point_cloud_csv(const std::filesystem::path& path, const PointCloud& cloud,
                           const Metadata& meta = {});
PointCloud read_point_cloud_csv(const std::filesystem::path& path);

// Localization estimates CSV, header `object_id,theta_deg,rho_m,mass`.
std::string estimates_to_csv(const std::vector<ObjectEstimate>& estimates,
                             const Metadata& meta = {});

// Trajectory CSV, header `t_s,x_m,y_m,speed_mps`.
std::string trajectory_to_csv(const Trajectory& trajectory, const Metadata& meta = {});

// Scenario timeline CSV, header `t_s,goodput,channel_mhz,event`: one row per
// goodput window plus one row per protocol event, ordered by time.
std::string timeline_to_csv(const ScenarioResult& result, const Metadata& meta = {});

// Constellation interchange document (JSON): N, spacings, symbol list with the
// symbol->channel map, and optionally the design report. This is the file that
// `design` emits and `scenario` consumes.
std::string constellation_to_json(const Constellation& c, const DesignReport* report = nullptr,
                                  const Metadata& meta = {});
Constellation constellation_from_json(const std::string& text,
                                      const std::string& origin = "<string>");
void write_constellation_json(const std::filesystem::path& path, const Constellation& c,
                              const DesignReport* report = nullptr, const Metadata& meta = {});
Constellation read_constellation_json(const std::filesystem::path& path);

}  // namespace constel::io
