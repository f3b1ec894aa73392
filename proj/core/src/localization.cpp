#include "constel/localization.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <unordered_map>

namespace constel {

int compute_min_pts(double alpha, const SensorModel& m, double t_meas_s) {
    if (!(alpha > 0.0) || alpha > 1.0) {
        throw std::invalid_argument("compute_min_pts: alpha must lie in (0, 1]");
    }
    // The lowest-density area (maximum range) bounds the clustering performance.
    return static_cast<int>(std::ceil(alpha * expected_point_count(m, t_meas_s, m.dist_max_m)));
}

namespace {

constexpr int kUnvisited = -2;
constexpr int kNoise = -1;

// Uniform grid over the Cartesian embedding for epsilon-neighborhood queries.
// Membership is decided with the chord-distance formula so results match a
// plain all-pairs scan exactly.
class NeighborIndex {
public:
    NeighborIndex(const std::vector<CloudPoint>& pts, const std::vector<int>& ids, double eps)
        : points_(pts), ids_(ids), eps_(eps) {
        xy_.resize(ids.size());
        cells_.reserve(ids.size());
        for (std::size_t k = 0; k < ids_.size(); ++k) {
            const CloudPoint& p = points_[ids_[k]];
            xy_[k] = to_cartesian({p.theta_deg, p.rho_m});
            cells_[key(cell_of(xy_[k].x_m), cell_of(xy_[k].y_m))].push_back(static_cast<int>(k));
        }
    }

    // Local indices (into ids_) within eps of local point k, ascending, self included.
    std::vector<int> query(int k) const {
        const CloudPoint& a = points_[ids_[k]];
        const PolarPoint pa{a.theta_deg, a.rho_m};
        const int cx = cell_of(xy_[k].x_m);
        const int cy = cell_of(xy_[k].y_m);
        std::vector<int> out;
        for (int dx = -1; dx <= 1; ++dx) {
            for (int dy = -1; dy <= 1; ++dy) {
                auto it = cells_.find(key(cx + dx, cy + dy));
                if (it == cells_.end()) continue;
                for (int j : it->second) {
                    const CloudPoint& b = points_[ids_[j]];
                    if (distance_m(pa, {b.theta_deg, b.rho_m}) <= eps_) {
                        out.push_back(j);
                    }
                }
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    int cell_of(double v) const { return static_cast<int>(std::floor(v / eps_)); }
    static long long key(int cx, int cy) {
        return (static_cast<long long>(cx) << 32) ^ static_cast<unsigned>(cy);
    }

    const std::vector<CloudPoint>& points_;
    const std::vector<int>& ids_;
    double eps_;
    std::vector<CartesianPoint> xy_;
    std::unordered_map<long long, std::vector<int>> cells_;
};

}  // namespace

DbscanResult dbscan(const PointCloud& cloud, const DbscanParams& params) {
    if (!(params.epsilon_m > 0.0) || params.min_pts < 1 || !(params.dist_max_m > 0.0)) {
        throw std::invalid_argument("dbscan: epsilon and dist_max must be > 0, min_pts >= 1");
    }

    DbscanResult result;
    const int n = static_cast<int>(cloud.points.size());

    std::vector<int> in_range;  // indices into cloud, ascending
    in_range.reserve(n);
    for (int i = 0; i < n; ++i) {
        if (cloud.points[i].rho_m > params.dist_max_m) {
            result.noise.push_back(i);
        } else {
            in_range.push_back(i);
        }
    }
    if (in_range.empty()) {
        return result;
    }

    NeighborIndex index(cloud.points, in_range, params.epsilon_m);
    const int m = static_cast<int>(in_range.size());
    std::vector<int> label(m, kUnvisited);
    int next_cluster = 0;

    for (int i = 0; i < m; ++i) {
        if (label[i] != kUnvisited) continue;
        std::vector<int> nbh = index.query(i);
        if (static_cast<int>(nbh.size()) < params.min_pts) {
            label[i] = kNoise;
            continue;
        }
        const int cid = next_cluster++;
        label[i] = cid;
        std::deque<int> queue(nbh.begin(), nbh.end());
        while (!queue.empty()) {
            const int j = queue.front();
            queue.pop_front();
            if (label[j] == kNoise) {
                label[j] = cid;  // border point, claimed by the first core that reached it
                continue;
            }
            if (label[j] != kUnvisited) continue;
            label[j] = cid;
            std::vector<int> nj = index.query(j);
            if (static_cast<int>(nj.size()) >= params.min_pts) {
                queue.insert(queue.end(), nj.begin(), nj.end());
            }
        }
    }

    result.clusters.resize(next_cluster);
    for (int k = 0; k < m; ++k) {
        const int i = in_range[k];
        if (label[k] == kNoise) {
            result.noise.push_back(i);
        } else {
            result.clusters[label[k]].member_indices.push_back(i);
            result.clusters[label[k]].power_mass += cloud.points[i].power;
        }
    }
    std::sort(result.noise.begin(), result.noise.end());
    return result;
}

namespace {

// Heaviest bin center along one axis; ties go to the bin nearer the
// power-weighted mean, then to the lower bin.
double histogram_argmax(const std::vector<double>& values, const std::vector<double>& weights,
                        double bin_width) {
    std::unordered_map<long long, double> mass;
    double weighted_sum = 0.0;
    double total_weight = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        mass[static_cast<long long>(std::floor(values[i] / bin_width))] += weights[i];
        weighted_sum += values[i] * weights[i];
        total_weight += weights[i];
    }
    const double mean = weighted_sum / total_weight;

    std::vector<std::pair<long long, double>> bins(mass.begin(), mass.end());
    std::sort(bins.begin(), bins.end());

    double best_mass = -1.0;
    double best_center = 0.0;
    double best_dist = 0.0;
    for (const auto& [bin, bin_mass] : bins) {
        const double center = (static_cast<double>(bin) + 0.5) * bin_width;
        const double dist = std::abs(center - mean);
        if (bin_mass > best_mass || (bin_mass == best_mass && dist < best_dist)) {
            best_mass = bin_mass;
            best_center = center;
            best_dist = dist;
        }
    }
    return best_center;
}

}  // namespace

PolarPoint estimate_position(const PointCloud& cloud, const Cluster& cluster,
                             const HistogramConfig& cfg) {
    if (cluster.member_indices.empty()) {
        throw std::invalid_argument("estimate_position: empty cluster");
    }
    if (!(cfg.bin_width_theta_deg > 0.0) || !(cfg.bin_width_rho_m > 0.0)) {
        throw std::invalid_argument("estimate_position: bin widths must be > 0");
    }
    std::vector<double> thetas, rhos, weights;
    thetas.reserve(cluster.member_indices.size());
    rhos.reserve(cluster.member_indices.size());
    weights.reserve(cluster.member_indices.size());
    for (int i : cluster.member_indices) {
        const CloudPoint& p = cloud.points.at(i);
        thetas.push_back(p.theta_deg);
        rhos.push_back(p.rho_m);
        weights.push_back(p.power);
    }
    return {histogram_argmax(thetas, weights, cfg.bin_width_theta_deg),
            histogram_argmax(rhos, weights, cfg.bin_width_rho_m)};
}

std::vector<ObjectEstimate> localize(const PointCloud& cloud, const DbscanParams& params,
                                     const HistogramConfig& cfg) {
    if (cloud.points.empty()) {
        return {};
    }
    DbscanResult clustering = dbscan(cloud, params);
    std::vector<ObjectEstimate> estimates;
    estimates.reserve(clustering.clusters.size());
    for (Cluster& cluster : clustering.clusters) {
        cluster.estimate = estimate_position(cloud, cluster, cfg);
        estimates.push_back({cluster.estimate, cluster.power_mass,
                             static_cast<int>(cluster.member_indices.size())});
    }
    std::stable_sort(estimates.begin(), estimates.end(),
                     [](const ObjectEstimate& a, const ObjectEstimate& b) {
                         return a.power_mass > b.power_mass;
                     });
    return estimates;
}

}  // namespace constel
