#pragma once

#include <vector>

#include "constel/sensor.hpp"

namespace constel {

struct DbscanParams {
    double epsilon_m = 0.5;  // neighborhood radius, on the order of the airframe
    int min_pts = 10;        // minimum neighborhood population, self included
    double dist_max_m = 12.0;
};

struct HistogramConfig {
    double bin_width_theta_deg = 1.0;
    double bin_width_rho_m = 0.05;
};

struct Cluster {
    std::vector<int> member_indices;  // ascending indices into the cloud
    PolarPoint estimate;              // filled by estimate_position
    double power_mass = 0.0;          // sum of member powers
};

struct DbscanResult {
    std::vector<Cluster> clusters;  // in discovery order
    std::vector<int> noise;         // ascending
};

/// MinPts tuned to the measured density at maximum range, where the density is
/// lowest: ceil(alpha * expected_point_count(m, t_meas, dist_max)).
int compute_min_pts(double alpha, const SensorModel& m, double t_meas_s);

/// Standard density clustering over chord distance. Core points have at least
/// min_pts neighbors within epsilon (self included); clusters are the maximal
/// density-connected sets; a border point joins the first core point that
/// reaches it, scanning seeds and neighbor lists in input order. Points beyond
/// dist_max are pre-filtered into noise.
DbscanResult dbscan(const PointCloud& cloud, const DbscanParams& params);

/// Power-weighted histogram refinement: per axis, each member contributes its
/// received power to its bin; the estimate is the center of the heaviest bin.
/// Equal-mass ties resolve toward the bin nearer the power-weighted mean, then
/// toward the lower bin.
PolarPoint estimate_position(const PointCloud& cloud, const Cluster& cluster,
                             const HistogramConfig& cfg);

struct ObjectEstimate {
    PolarPoint position;
    double power_mass = 0.0;
    int cluster_size = 0;
};

/// Full pipeline: dbscan, then per-cluster refinement; strongest cluster first.
std::vector<ObjectEstimate> localize(const PointCloud& cloud, const DbscanParams& params,
                                     const HistogramConfig& cfg);

}  // namespace constel
