#include "constel/flight.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "constel/errors.hpp"

namespace constel {

namespace {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double norm() const { return std::hypot(x, y); }
};

Vec2 clamp_norm(const Vec2& v, double max_norm) {
    const double n = v.norm();
    if (n <= max_norm || n == 0.0) {
        return v;
    }
    return v * (max_norm / n);
}

}  // namespace

Trajectory fly_to(const PolarPoint& start, const PolarPoint& target, const PidParams& pid,
                  const FlightConfig& cfg) {
    if (!(pid.kp > 0.0) || pid.kd < 0.0 || pid.ki < 0.0) {
        throw std::invalid_argument("fly_to: kp must be > 0, kd and ki >= 0");
    }
    if (!(cfg.dt_s > 0.0) || !(cfg.v_max_mps > 0.0) || !(cfg.arrival_radius_m > 0.0) ||
        !(cfg.settle_time_s > 0.0) || !(cfg.max_sim_time_s > 0.0)) {
        throw std::invalid_argument("fly_to: config values must be positive");
    }

    const CartesianPoint start_xy = to_cartesian(start);
    const CartesianPoint target_xy = to_cartesian(target);

    Trajectory traj;
    traj.samples.push_back({0.0, start_xy, 0.0});
    if (start.theta_deg == target.theta_deg && start.rho_m == target.rho_m) {
        traj.travel_time_s = 0.0;
        return traj;
    }

    Vec2 pos{start_xy.x_m, start_xy.y_m};
    const Vec2 goal{target_xy.x_m, target_xy.y_m};
    Vec2 integral;
    Vec2 prev_error = goal - pos;
    double inside_since = -1.0;

    const long max_steps = static_cast<long>(std::ceil(cfg.max_sim_time_s / cfg.dt_s));
    for (long k = 1; k <= max_steps; ++k) {
        const double t = k * cfg.dt_s;
        const Vec2 error = goal - pos;
        const Vec2 derivative = (error - prev_error) * (1.0 / cfg.dt_s);
        integral = integral + error * cfg.dt_s;
        if (pid.ki > 0.0) {
            integral = clamp_norm(integral, cfg.v_max_mps / pid.ki);  // anti-windup
        }
        const Vec2 v = clamp_norm(
            error * pid.kp + derivative * pid.kd + integral * pid.ki, cfg.v_max_mps);
        pos = pos + v * cfg.dt_s;
        prev_error = error;
        traj.samples.push_back({t, {pos.x, pos.y}, v.norm()});

        if ((Vec2{goal.x - pos.x, goal.y - pos.y}).norm() <= cfg.arrival_radius_m) {
            if (inside_since < 0.0) {
                inside_since = t;
            }
            if (t - inside_since >= cfg.settle_time_s) {
                traj.travel_time_s = t;
                return traj;
            }
        } else {
            inside_since = -1.0;
        }
    }
    throw guard_error("fly_to: not settled within " + std::to_string(cfg.max_sim_time_s) +
                      " s; gains are unstable or max_sim_time too small");
}

double mean_travel_time(const Constellation& c, const PidParams& pid, const FlightConfig& cfg) {
    const int n = c.size();
    if (n == 0) {
        throw std::invalid_argument("mean_travel_time: empty constellation");
    }
    if (n == 1) {
        return 0.0;
    }
    // Legs are direction-symmetric, so each unordered pair is flown once.
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            sum += fly_to(c.symbols[i], c.symbols[j], pid, cfg).travel_time_s;
        }
    }
    return sum / (0.5 * n * (n - 1));
}

}  // namespace constel
