#include "constel/sensor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace constel {

void validate(const SensorModel& m) {
    if (!(m.rate_r > 0.0)) throw std::invalid_argument("sensor: rate_r must be > 0");
    if (!(m.dist_max_m > 0.0)) throw std::invalid_argument("sensor: dist_max must be > 0");
    if (!(m.scatter_sigma_theta_deg > 0.0) || !(m.scatter_sigma_rho_m > 0.0)) {
        throw std::invalid_argument("sensor: scatter sigmas must be > 0");
    }
    if (!(m.clutter_rate >= 0.0)) throw std::invalid_argument("sensor: clutter_rate must be >= 0");
    if (!(m.fov_half_angle_deg > 0.0)) throw std::invalid_argument("sensor: fov must be > 0");
    if (!(m.frame_rate_hz > 0.0)) throw std::invalid_argument("sensor: frame_rate must be > 0");
    if (!(m.target_power_median > 0.0) || !(m.clutter_power_median > 0.0)) {
        throw std::invalid_argument("sensor: power medians must be > 0");
    }
    // Azimuth scatter as arc meters at a typical range (half the sensing range)
    // must exceed the range scatter; the polar accuracy asymmetry.
    const double typical_range = 0.5 * m.dist_max_m;
    const double theta_arc_m = deg_to_rad(m.scatter_sigma_theta_deg) * typical_range;
    if (!(theta_arc_m > m.scatter_sigma_rho_m)) {
        throw std::invalid_argument(
            "sensor: scatter_sigma_theta (" + std::to_string(theta_arc_m) +
            " m of arc at range " + std::to_string(typical_range) +
            ") must exceed scatter_sigma_rho (" + std::to_string(m.scatter_sigma_rho_m) + " m)");
    }
}

double expected_point_count(const SensorModel& m, double t_meas_s, double d_m) {
    if (!(t_meas_s > 0.0)) {
        throw std::invalid_argument("expected_point_count: t_meas must be > 0");
    }
    if (d_m < 0.0 || d_m > m.dist_max_m) {
        throw std::invalid_argument("expected_point_count: range " + std::to_string(d_m) +
                                    " m outside [0, " + std::to_string(m.dist_max_m) + "]");
    }
    return m.rate_r * t_meas_s * std::exp(m.decay_b * d_m);
}

namespace {

double gaussian(std::mt19937_64& rng, double sigma) {
    if (sigma <= 0.0) {
        return 0.0;  // degenerate-noise limit
    }
    std::normal_distribution<double> d(0.0, sigma);
    return d(rng);
}

double log_normal_power(std::mt19937_64& rng, double median, double spread) {
    return median * std::exp(gaussian(rng, spread));
}

}  // namespace

PointCloud synthesize_cloud(const PolarPoint& true_pos, const SensorModel& m,
                            const HoverModel& hover, double t_meas_s, std::mt19937_64& rng) {
    const FieldOfView fov = m.fov();
    if (!fov.contains(true_pos.theta_deg) || true_pos.rho_m < 0.0 ||
        true_pos.rho_m > m.dist_max_m) {
        throw std::invalid_argument("synthesize_cloud: true position outside the sensing sector");
    }

    PointCloud cloud;
    cloud.t_meas_s = t_meas_s;

    // The UAV drifts slowly against the frame rate: one hover offset per frame,
    // per-point scatter on top of it.
    const int n_frames = std::max(1, static_cast<int>(std::ceil(t_meas_s * m.frame_rate_hz)));
    std::vector<PolarPoint> hover_offset(n_frames);
    for (auto& h : hover_offset) {
        h.theta_deg = gaussian(rng, hover.sigma_theta_deg);
        h.rho_m = gaussian(rng, hover.sigma_rho_m);
    }

    const double expected = expected_point_count(m, t_meas_s, true_pos.rho_m);
    std::poisson_distribution<int> target_count(expected);
    std::uniform_real_distribution<double> time_in_window(0.0, t_meas_s);
    const double target_power_median =
        m.target_power_median * std::exp(m.decay_b * true_pos.rho_m);

    const int n_target = target_count(rng);
    cloud.points.reserve(n_target);
    for (int i = 0; i < n_target; ++i) {
        CloudPoint p;
        p.t_s = time_in_window(rng);
        const int frame = std::min(n_frames - 1, static_cast<int>(p.t_s * m.frame_rate_hz));
        p.theta_deg = true_pos.theta_deg + hover_offset[frame].theta_deg +
                      gaussian(rng, m.scatter_sigma_theta_deg);
        p.rho_m =
            true_pos.rho_m + hover_offset[frame].rho_m + gaussian(rng, m.scatter_sigma_rho_m);
        p.theta_deg = std::clamp(p.theta_deg, fov.min_deg, fov.max_deg);
        p.rho_m = std::clamp(p.rho_m, 0.0, m.dist_max_m);
        p.power = log_normal_power(rng, target_power_median, m.target_power_spread);
        cloud.points.push_back(p);
    }

    if (m.clutter_rate > 0.0) {
        std::poisson_distribution<int> clutter_count(m.clutter_rate * t_meas_s);
        std::uniform_real_distribution<double> theta(fov.min_deg, fov.max_deg);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const int n_clutter = clutter_count(rng);
        for (int i = 0; i < n_clutter; ++i) {
            CloudPoint p;
            p.t_s = time_in_window(rng);
            p.theta_deg = theta(rng);
            p.rho_m = m.dist_max_m * std::sqrt(unit(rng));  // area-uniform over the sector
            p.power = log_normal_power(rng, m.clutter_power_median, m.clutter_power_spread);
            cloud.points.push_back(p);
        }
    }

    std::stable_sort(cloud.points.begin(), cloud.points.end(),
                     [](const CloudPoint& a, const CloudPoint& b) { return a.t_s < b.t_s; });
    return cloud;
}

}  // namespace constel
