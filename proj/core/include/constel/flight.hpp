#pragma once

#include <vector>

#include "constel/constellation.hpp"
#include "constel/geometry.hpp"

namespace constel {

struct PidParams {
    double kp = 0.6;
    double kd = 0.12;
    double ki = 0.05;
};

struct FlightConfig {
    double dt_s = 0.01;            // integration step
    double v_max_mps = 5.0;        // commanded-speed saturation
    double arrival_radius_m = 0.05;
    double settle_time_s = 0.5;    // must stay inside arrival_radius this long
    double max_sim_time_s = 60.0;
};

struct TrajectorySample {
    double t_s;
    CartesianPoint position;
    double speed_mps;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    double travel_time_s = 0.0;
};

/// Point-mass flight between two hover positions. The commanded velocity is
/// kp*e + kd*de/dt + ki*integral(e) on the Cartesian error vector, magnitude
/// clamped to v_max; the integral is clamped so its term alone cannot exceed
/// v_max. travel_time is the first instant by which the position has remained
/// inside arrival_radius for settle_time continuously. start == target returns
/// a zero-time trajectory. Throws guard_error when not settled by max_sim_time.
Trajectory fly_to(const PolarPoint& start, const PolarPoint& target, const PidParams& pid,
                  const FlightConfig& cfg);

/// Mean fly_to travel time over all ordered symbol pairs (i != j), modeling
/// uniformly random transitions; symmetric legs are simulated once.
double mean_travel_time(const Constellation& c, const PidParams& pid, const FlightConfig& cfg);

}  // namespace constel
