#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>

namespace oracles {

double q_simpson(double x) {
    if (x > 40.0) return 0.0;
    if (x < -40.0) return 1.0;
    const double a = x;
    const double b = 40.0;
    const int n = 400000;  // even
    const double h = (b - a) / n;
    auto phi = [](double t) {
        return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi);
    };
    double sum = phi(a) + phi(b);
    for (int i = 1; i < n; ++i) {
        sum += phi(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    }
    return sum * h / 3.0;
}

constel::DbscanResult dbscan_reference(const constel::PointCloud& cloud,
                                       const constel::DbscanParams& params) {
    using constel::PolarPoint;
    constexpr int kUnvisited = -2;
    constexpr int kNoise = -1;

    constel::DbscanResult result;
    std::vector<int> ids;
    for (int i = 0; i < static_cast<int>(cloud.points.size()); ++i) {
        if (cloud.points[i].rho_m > params.dist_max_m) {
            result.noise.push_back(i);
        } else {
            ids.push_back(i);
        }
    }
    const int m = static_cast<int>(ids.size());
    auto neighbors = [&](int k) {
        std::vector<int> out;
        const auto& a = cloud.points[ids[k]];
        for (int j = 0; j < m; ++j) {
            const auto& b = cloud.points[ids[j]];
            if (constel::distance_m({a.theta_deg, a.rho_m}, {b.theta_deg, b.rho_m}) <=
                params.epsilon_m) {
                out.push_back(j);
            }
        }
        return out;
    };

    std::vector<int> label(m, kUnvisited);
    int next = 0;
    for (int i = 0; i < m; ++i) {
        if (label[i] != kUnvisited) continue;
        const std::vector<int> nbh = neighbors(i);
        if (static_cast<int>(nbh.size()) < params.min_pts) {
            label[i] = kNoise;
            continue;
        }
        const int cid = next++;
        label[i] = cid;
        std::deque<int> queue(nbh.begin(), nbh.end());
        while (!queue.empty()) {
            const int j = queue.front();
            queue.pop_front();
            if (label[j] == kNoise) {
                label[j] = cid;
                continue;
            }
            if (label[j] != kUnvisited) continue;
            label[j] = cid;
            const std::vector<int> nj = neighbors(j);
            if (static_cast<int>(nj.size()) >= params.min_pts) {
                queue.insert(queue.end(), nj.begin(), nj.end());
            }
        }
    }

    result.clusters.resize(next);
    for (int k = 0; k < m; ++k) {
        if (label[k] == kNoise) {
            result.noise.push_back(ids[k]);
        } else {
            result.clusters[label[k]].member_indices.push_back(ids[k]);
            result.clusters[label[k]].power_mass += cloud.points[ids[k]].power;
        }
    }
    std::sort(result.noise.begin(), result.noise.end());
    return result;
}

std::vector<int> best_subset_reference(const std::vector<constel::PolarPoint>& candidates,
                                       int n) {
    const int l = static_cast<int>(candidates.size());
    std::vector<int> pick(n);
    for (int i = 0; i < n; ++i) pick[i] = i;

    std::vector<int> best;
    double best_mean = std::numeric_limits<double>::infinity();
    auto evaluate = [&]() {
        std::vector<constel::PolarPoint> pts;
        for (int i : pick) pts.push_back(candidates[i]);
        const double mean = constel::mean_pairwise_distance_m(pts);
        if (mean < best_mean) {
            best_mean = mean;
            best = pick;
        }
    };
    // next-combination walk in lexicographic order
    while (true) {
        evaluate();
        int i = n - 1;
        while (i >= 0 && pick[i] == l - n + i) --i;
        if (i < 0) break;
        ++pick[i];
        for (int j = i + 1; j < n; ++j) pick[j] = pick[j - 1] + 1;
    }
    return best;
}

}  // namespace oracles
