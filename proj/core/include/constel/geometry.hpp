#pragma once

#include <numbers>
#include <span>
#include <vector>

namespace constel {

inline constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Azimuth field of view of the sensor, degrees from boresight.
struct FieldOfView {
    double min_deg = -90.0;
    double max_deg = 90.0;

    bool contains(double theta_deg) const {
        return theta_deg >= min_deg && theta_deg <= max_deg;
    }
    static FieldOfView symmetric(double half_angle_deg) {
        return {-half_angle_deg, half_angle_deg};
    }
};

/// Position in the sensor's polar frame: azimuth from boresight (degrees), range (meters).
struct PolarPoint {
    double theta_deg = 0.0;
    double rho_m = 0.0;
};

/// Position in the sensor's x-y plane; the sensor sits at the origin looking along +y.
struct CartesianPoint {
    double x_m = 0.0;
    double y_m = 0.0;
};

/// Validating constructor. Rejects negative range and azimuth outside the field of view.
PolarPoint make_polar(double theta_deg, double rho_m, const FieldOfView& fov = {});

CartesianPoint to_cartesian(const PolarPoint& p);

/// Inverse of to_cartesian. The exact origin maps to (theta=0, rho=0).
PolarPoint to_polar(const CartesianPoint& p);

/// Straight-line (chord) distance between two polar points, meters.
double distance_m(const PolarPoint& a, const PolarPoint& b);

/// Mean chord distance over all unordered pairs; 0 for fewer than two points.
double mean_pairwise_distance_m(std::span<const PolarPoint> points);

}  // namespace constel
