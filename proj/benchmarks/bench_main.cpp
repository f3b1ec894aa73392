#include <benchmark/benchmark.h>

#include "constel/designer.hpp"
#include "constel/error_model.hpp"
#include "constel/flight.hpp"
#include "constel/localization.hpp"
#include "constel/random.hpp"
#include "constel/sensor.hpp"

using namespace constel;

namespace {

const HoverModel kRtk{0.9, 0.05};
const DesignLimits kLimits{FieldOfView::symmetric(90.0), 12.0};

PointCloud make_cloud(int seeds) {
    SensorModel m;
    m.clutter_rate = 20.0;
    auto rng = make_rng(1);
    PointCloud cloud = synthesize_cloud({0.0, 6.0}, m, kRtk, 2.0, rng);
    for (int s = 1; s < seeds; ++s) {
        const double theta = -60.0 + 15.0 * s;
        const PointCloud extra = synthesize_cloud({theta, 5.0 + 0.5 * s}, m, kRtk, 2.0, rng);
        cloud.points.insert(cloud.points.end(), extra.points.begin(), extra.points.end());
    }
    return cloud;
}

void bm_chord_distance(benchmark::State& state) {
    const PolarPoint a{-9.0, 5.0};
    const PolarPoint b{9.0, 6.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(distance_m(a, b));
    }
}
BENCHMARK(bm_chord_distance);

void bm_dbscan(benchmark::State& state) {
    const PointCloud cloud = make_cloud(static_cast<int>(state.range(0)));
    SensorModel m;
    const DbscanParams params{0.5, compute_min_pts(0.5, m, 2.0), m.dist_max_m};
    for (auto _ : state) {
        benchmark::DoNotOptimize(dbscan(cloud, params));
    }
    state.SetLabel(std::to_string(cloud.points.size()) + " points");
}
BENCHMARK(bm_dbscan)->Arg(1)->Arg(4)->Arg(8);

void bm_localize(benchmark::State& state) {
    const PointCloud cloud = make_cloud(4);
    SensorModel m;
    const DbscanParams params{0.5, compute_min_pts(0.5, m, 2.0), m.dist_max_m};
    const HistogramConfig hist{};
    for (auto _ : state) {
        benchmark::DoNotOptimize(localize(cloud, params, hist));
    }
}
BENCHMARK(bm_localize);

void bm_analytic_pe(benchmark::State& state) {
    Constellation c;
    c.delta_theta_deg = 2.0;
    c.delta_rho_m = 0.2;
    for (int it = 0; it < 8; ++it) {
        for (int ir = 0; ir < 8; ++ir) {
            c.symbols.push_back({-7.0 + it * 2.0, 5.0 + ir * 0.2});
            c.channel_mhz.push_back(900.0 + c.channel_mhz.size());
        }
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(constellation_error_probability(c, kRtk));
    }
}
BENCHMARK(bm_analytic_pe);

void bm_monte_carlo_pe(benchmark::State& state) {
    Constellation c;
    c.delta_theta_deg = 1.8;
    c.delta_rho_m = 0.1;
    c.symbols = {{-0.9, 5.0}, {0.9, 5.0}, {-0.9, 5.1}, {0.9, 5.1}};
    c.channel_mhz = {900.0, 905.0, 910.0, 915.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            monte_carlo_pe(c, kRtk, static_cast<std::uint64_t>(state.range(0)), 7, 1));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_monte_carlo_pe)->Arg(100000)->Arg(1000000);

void bm_exhaustive_search(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const CandidateGrid grid = build_grid({0.0, 5.0}, n, 4.0, 0.4, kLimits);
    for (auto _ : state) {
        benchmark::DoNotOptimize(exhaustive_search(grid, n, 5'000'000'000ULL));
    }
}
BENCHMARK(bm_exhaustive_search)->Arg(4)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);

void bm_heuristic_search(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const CandidateGrid grid = build_grid({0.0, 5.0}, n, 2.0, 0.1, kLimits);
    for (auto _ : state) {
        benchmark::DoNotOptimize(heuristic_search(grid, n));
    }
}
BENCHMARK(bm_heuristic_search)->Arg(8)->Arg(32);

void bm_fly_leg(benchmark::State& state) {
    const PidParams gains{};
    const FlightConfig cfg{};
    for (auto _ : state) {
        benchmark::DoNotOptimize(fly_to({0.0, 5.0}, {0.0, 6.0}, gains, cfg));
    }
}
BENCHMARK(bm_fly_leg);

}  // namespace

BENCHMARK_MAIN();
