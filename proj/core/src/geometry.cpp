#include "constel/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace constel {

PolarPoint make_polar(double theta_deg, double rho_m, const FieldOfView& fov) {
    if (!(rho_m >= 0.0)) {
        throw std::invalid_argument("polar point: rho must be >= 0, got " + std::to_string(rho_m));
    }
    if (!fov.contains(theta_deg)) {
        throw std::invalid_argument("polar point: theta " + std::to_string(theta_deg) +
                                    " deg outside field of view [" + std::to_string(fov.min_deg) +
                                    ", " + std::to_string(fov.max_deg) + "]");
    }
    return {theta_deg, rho_m};
}

CartesianPoint to_cartesian(const PolarPoint& p) {
    const double t = deg_to_rad(p.theta_deg);
    return {p.rho_m * std::sin(t), p.rho_m * std::cos(t)};
}

PolarPoint to_polar(const CartesianPoint& p) {
    const double rho = std::hypot(p.x_m, p.y_m);
    if (rho == 0.0) {
        return {0.0, 0.0};
    }
    return {rad_to_deg(std::atan2(p.x_m, p.y_m)), rho};
}

double distance_m(const PolarPoint& a, const PolarPoint& b) {
    const double c = std::cos(deg_to_rad(a.theta_deg - b.theta_deg));
    const double d2 = a.rho_m * a.rho_m + b.rho_m * b.rho_m - 2.0 * a.rho_m * b.rho_m * c;
    return std::sqrt(std::max(0.0, d2));
}

double mean_pairwise_distance_m(std::span<const PolarPoint> points) {
    const std::size_t n = points.size();
    if (n < 2) {
        return 0.0;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            sum += distance_m(points[i], points[j]);
        }
    }
    return sum / (0.5 * static_cast<double>(n) * static_cast<double>(n - 1));
}

}  // namespace constel
