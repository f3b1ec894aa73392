#include "constel/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>
#include <string>

#include "constel/random.hpp"

namespace constel {

int decode_symbol(const PolarPoint& estimate, const Constellation& c) {
    if (c.symbols.empty()) {
        throw std::invalid_argument("decode_symbol: empty constellation");
    }
    if (c.size() == 1) {
        return 0;
    }
    if (!(c.delta_theta_deg > 0.0) || !(c.delta_rho_m > 0.0)) {
        throw std::invalid_argument("decode_symbol: constellation spacings must be positive");
    }
    int best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (int i = 0; i < c.size(); ++i) {
        const double dt = (estimate.theta_deg - c.symbols[i].theta_deg) / c.delta_theta_deg;
        const double dr = (estimate.rho_m - c.symbols[i].rho_m) / c.delta_rho_m;
        const double d2 = dt * dt + dr * dr;
        if (d2 < best_d2) {  // strict: boundary ties keep the lower index
            best_d2 = d2;
            best = i;
        }
    }
    return best;
}

const char* to_string(EventKind kind) {
    switch (kind) {
        case EventKind::jam_detected: return "jam_detected";
        case EventKind::move_started: return "move_started";
        case EventKind::symbol_decoded: return "symbol_decoded";
        case EventKind::channel_switched: return "channel_switched";
    }
    return "?";
}

void validate(const ScenarioConfig& cfg) {
    if (cfg.channels_mhz.empty()) {
        throw std::invalid_argument("scenario: channel list is empty");
    }
    if (std::set<double>(cfg.channels_mhz.begin(), cfg.channels_mhz.end()).size() !=
        cfg.channels_mhz.size()) {
        throw std::invalid_argument("scenario: duplicate channels");
    }
    validate(cfg.sensor);
    validate(cfg.constellation, cfg.sensor.fov(), cfg.sensor.dist_max_m);
    const std::multiset<double> a(cfg.channels_mhz.begin(), cfg.channels_mhz.end());
    const std::multiset<double> b(cfg.constellation.channel_mhz.begin(),
                                  cfg.constellation.channel_mhz.end());
    if (a != b) {
        throw std::invalid_argument("scenario: constellation channel map must cover the channel list");
    }
    if (!(cfg.jam_threshold > 0.0) || !(cfg.jam_threshold < 1.0)) {
        throw std::invalid_argument("scenario: jam_threshold must lie in (0, 1)");
    }
    if (cfg.jam_windows < 1) {
        throw std::invalid_argument("scenario: jam_windows must be >= 1");
    }
    if (!(cfg.goodput_window_s > 0.0) || cfg.duration_s < cfg.goodput_window_s) {
        throw std::invalid_argument("scenario: need duration >= goodput_window > 0");
    }
    if (!(cfg.t_meas_s > 0.0) || cfg.goodput_noise < 0.0) {
        throw std::invalid_argument("scenario: t_meas must be > 0 and goodput_noise >= 0");
    }
    if (cfg.initial_channel_mhz != 0.0 &&
        std::find(cfg.channels_mhz.begin(), cfg.channels_mhz.end(), cfg.initial_channel_mhz) ==
            cfg.channels_mhz.end()) {
        throw std::invalid_argument("scenario: initial channel not in the channel list");
    }
    for (const JamInterval& j : cfg.jammers) {
        if (!(j.t_end_s > j.t_start_s)) {
            throw std::invalid_argument("scenario: jammer interval must have t_end > t_start");
        }
    }
}

namespace {

std::string format_mhz(double mhz) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", mhz);
    return buf;
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
    validate(cfg);
    auto rng = make_rng(cfg.seed);

    const auto& channels = cfg.channels_mhz;
    const int n_channels = static_cast<int>(channels.size());
    const double initial =
        cfg.initial_channel_mhz != 0.0 ? cfg.initial_channel_mhz : channels.front();
    int uav_ch = static_cast<int>(
        std::find(channels.begin(), channels.end(), initial) - channels.begin());
    int bs_ch = uav_ch;
    int uav_symbol = *symbol_for_channel(cfg.constellation, channels[uav_ch]);

    DbscanParams db = cfg.dbscan;
    db.dist_max_m = cfg.sensor.dist_max_m;
    if (db.min_pts <= 0) {
        db.min_pts = compute_min_pts(cfg.dbscan_alpha, cfg.sensor, cfg.t_meas_s);
    }

    const auto jammed = [&](double channel, double t) {
        for (const JamInterval& j : cfg.jammers) {
            if (t >= j.t_start_s && t < j.t_end_s &&
                std::find(j.channels_mhz.begin(), j.channels_mhz.end(), channel) !=
                    j.channels_mhz.end()) {
                return true;
            }
        }
        return false;
    };

    ScenarioResult result;
    std::normal_distribution<double> jitter(0.0, 1.0);

    struct PendingMove {
        bool active = false;
        double t_decode = 0.0;
        int target_symbol = 0;
    } pending;

    const auto perform_decode = [&](double t_decode) {
        const PolarPoint true_pos = cfg.constellation.symbols[pending.target_symbol];
        const PointCloud cloud =
            synthesize_cloud(true_pos, cfg.sensor, cfg.hover, cfg.t_meas_s, rng);
        const std::vector<ObjectEstimate> estimates = localize(cloud, db, cfg.hist);
        if (!estimates.empty()) {
            const int decoded = decode_symbol(estimates.front().position, cfg.constellation);
            result.events.push_back(
                {t_decode, EventKind::symbol_decoded, "symbol=" + std::to_string(decoded)});
            const double decoded_channel = cfg.constellation.channel_mhz[decoded];
            bs_ch = static_cast<int>(
                std::find(channels.begin(), channels.end(), decoded_channel) - channels.begin());
            result.events.push_back({t_decode, EventKind::channel_switched,
                                     "channel_mhz=" + format_mhz(decoded_channel)});
        }
        pending.active = false;  // on a missed detection the link simply stays broken
    };

    const double w = cfg.goodput_window_s;
    const int n_windows = static_cast<int>(std::floor(cfg.duration_s / w + 1e-9));
    constexpr int kSubsteps = 100;
    int low_streak = 0;
    bool episode_open = false;  // jam_detected already emitted for this outage

    for (int k = 0; k < n_windows; ++k) {
        const double w0 = k * w;
        int linked_substeps = 0;
        for (int i = 0; i < kSubsteps; ++i) {
            const double tau = w0 + (i + 0.5) * w / kSubsteps;
            if (pending.active && tau >= pending.t_decode) {
                perform_decode(pending.t_decode);
            }
            if (!pending.active && bs_ch == uav_ch && !jammed(channels[bs_ch], tau)) {
                ++linked_substeps;
            }
        }
        double goodput = static_cast<double>(linked_substeps) / kSubsteps;
        if (cfg.goodput_noise > 0.0) {
            goodput = std::clamp(goodput + cfg.goodput_noise * jitter(rng), 0.0, 1.0);
        }
        result.samples.push_back({w0, goodput, channels[bs_ch]});

        const double t_now = w0 + w;
        if (pending.active) {
            continue;  // in transit or sensing; detection logic resumes afterwards
        }
        if (goodput >= cfg.jam_threshold) {
            low_streak = 0;
            episode_open = false;
            continue;
        }
        ++low_streak;
        if (low_streak < cfg.jam_windows && !episode_open) {
            continue;
        }
        if (!episode_open) {
            result.events.push_back({t_now, EventKind::jam_detected,
                                     "channel_mhz=" + format_mhz(channels[uav_ch])});
            episode_open = true;
        }
        // Next unjammed channel, round-robin from the UAV's current one.
        int candidate = -1;
        for (int j = 1; j <= n_channels; ++j) {
            const int idx = (uav_ch + j) % n_channels;
            if (!jammed(channels[idx], t_now)) {
                candidate = idx;
                break;
            }
        }
        if (candidate < 0) {
            continue;  // everything jammed; retry at the next window
        }
        const int target_symbol = *symbol_for_channel(cfg.constellation, channels[candidate]);
        const Trajectory flight = fly_to(cfg.constellation.symbols[uav_symbol],
                                         cfg.constellation.symbols[target_symbol], cfg.pid,
                                         cfg.flight);
        result.events.push_back(
            {t_now, EventKind::move_started,
             "symbol=" + std::to_string(target_symbol) +
                 ";channel_mhz=" + format_mhz(channels[candidate]) +
                 ";flight_time_s=" + std::to_string(flight.travel_time_s)});
        pending.active = true;
        pending.t_decode = t_now + flight.travel_time_s + cfg.t_meas_s;
        pending.target_symbol = target_symbol;
        uav_ch = candidate;
        uav_symbol = target_symbol;
        low_streak = 0;
        episode_open = false;
    }

    result.status = (!result.samples.empty() && result.samples.back().goodput >= cfg.jam_threshold)
                        ? ScenarioStatus::ok
                        : ScenarioStatus::failed;
    return result;
}

}  // namespace constel
