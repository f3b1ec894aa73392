#pragma once

#include <random>
#include <vector>

#include "constel/error_model.hpp"
#include "constel/geometry.hpp"

namespace constel {

/// Radar point-cloud statistics: detection density, per-point scatter, clutter,
/// and the received-power model.
///
/// rate_r and decay_b shape the expected detection count rate_r * t * e^(b*d).
/// The defaults are plausible config values, not measured constants; calibrate
/// them against the sensor at hand before trusting absolute counts.
struct SensorModel {
    double rate_r = 250.0;  // detections per second at zero range
    double decay_b = -0.2;  // per-meter density exponent, negative in practice
    double scatter_sigma_theta_deg = 0.6;
    double scatter_sigma_rho_m = 0.02;
    double clutter_rate = 5.0;  // clutter points per second over the whole sector
    double dist_max_m = 12.0;   // maximum sensing range
    double fov_half_angle_deg = 90.0;
    double frame_rate_hz = 25.0;  // hover displacement is redrawn once per frame
    double target_power_median = 1.0;
    double target_power_spread = 0.3;  // sigma of log power
    double clutter_power_median = 0.3;
    double clutter_power_spread = 0.3;

    FieldOfView fov() const { return FieldOfView::symmetric(fov_half_angle_deg); }
};

/// Throws std::invalid_argument when rates/ranges are non-positive or the
/// azimuth scatter (as arc meters at dist_max/2) does not exceed the range
/// scatter, which would contradict the polar accuracy asymmetry.
void validate(const SensorModel& m);

/// One radar detection.
struct CloudPoint {
    double t_s = 0.0;
    double theta_deg = 0.0;
    double rho_m = 0.0;
    double power = 1.0;  // linear received-power weight, > 0
};

/// Detections collected over one sensing window of t_meas seconds.
struct PointCloud {
    std::vector<CloudPoint> points;
    double t_meas_s = 0.0;
};

/// Expected number of target detections after t_meas seconds at range d:
/// rate_r * t_meas * e^(decay_b * d). Throws when d is outside [0, dist_max].
double expected_point_count(const SensorModel& m, double t_meas_s, double d_m);

/// Synthesizes one sensing window for a UAV hovering at true_pos: a Poisson
/// number of target returns scattered around per-frame hover-displaced centers,
/// plus Poisson clutter uniform over the sensing sector. Deterministic given
/// the generator state; points come out sorted by timestamp.
PointCloud synthesize_cloud(const PolarPoint& true_pos, const SensorModel& m,
                            const HoverModel& hover, double t_meas_s, std::mt19937_64& rng);

}  // namespace constel
