#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "constel/constellation.hpp"
#include "constel/error_model.hpp"
#include "constel/flight.hpp"
#include "constel/localization.hpp"
#include "constel/sensor.hpp"

namespace constel {

/// Decodes a position estimate to the symbol whose decision region contains it:
/// the nearest symbol under per-axis spacing-normalized distance, which on a
/// rectangular lattice coincides with the midpoint region tiling. Exact
/// boundary ties go to the lower symbol index.
int decode_symbol(const PolarPoint& estimate, const Constellation& c);

struct JamInterval {
    double t_start_s = 0.0;
    double t_end_s = 0.0;
    std::vector<double> channels_mhz;  // channels covered by the jammer
};

struct ScenarioConfig {
    std::vector<double> channels_mhz;
    Constellation constellation;
    SensorModel sensor{};
    HoverModel hover{};
    DbscanParams dbscan{};        // min_pts <= 0 selects auto tuning via alpha
    double dbscan_alpha = 0.5;
    HistogramConfig hist{};
    PidParams pid{};
    FlightConfig flight{};
    std::vector<JamInterval> jammers;
    double duration_s = 30.0;
    double goodput_window_s = 0.5;
    double jam_threshold = 0.5;   // goodput fraction that counts as jammed
    int jam_windows = 3;          // consecutive low windows before reacting
    double goodput_noise = 0.02;  // sigma of per-window goodput jitter
    double t_meas_s = 2.0;        // sensing dwell per symbol
    double initial_channel_mhz = 0.0;  // 0 selects channels_mhz.front()
    std::uint64_t seed = 1;
};

void validate(const ScenarioConfig& cfg);

enum class EventKind { jam_detected, move_started, symbol_decoded, channel_switched };
const char* to_string(EventKind kind);

struct ScenarioEvent {
    double t_s;
    EventKind kind;
    std::string payload;
};

struct GoodputSample {
    double t_s;          // window start
    double goodput;      // fraction in [0, 1]
    double channel_mhz;  // base-station channel at window end
};

enum class ScenarioStatus { ok, failed };

struct ScenarioResult {
    std::vector<GoodputSample> samples;
    std::vector<ScenarioEvent> events;
    ScenarioStatus status = ScenarioStatus::ok;
};

/// Event loop over goodput windows: link goodput is near 1 on an unjammed
/// matched channel and near 0 otherwise; after jam_windows consecutive windows
/// below jam_threshold the UAV picks the next unjammed channel (round-robin
/// over the channel list), flies to that channel's constellation point, hovers
/// for t_meas while the sensor pipeline produces an estimate, the base station
/// decodes it, and both sides switch. All randomness derives from the seed.
ScenarioResult run_scenario(const ScenarioConfig& cfg);

}  // namespace constel
