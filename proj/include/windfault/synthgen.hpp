#pragma once

#include "windfault/core.hpp"

#include <utility>

namespace windfault {

// The 22 original SCADA channels, in catalog order.
namespace channels {
inline constexpr const char* wind_speed_min = "wind_speed_min";
inline constexpr const char* wind_speed_avg = "wind_speed_avg";
inline constexpr const char* wind_speed_max = "wind_speed_max";
inline constexpr const char* rotor_speed_min = "rotor_speed_min";
inline constexpr const char* rotor_speed_avg = "rotor_speed_avg";
inline constexpr const char* rotor_speed_max = "rotor_speed_max";
inline constexpr const char* power_min = "power_min";
inline constexpr const char* power_avg = "power_avg";
inline constexpr const char* power_max = "power_max";
inline constexpr const char* energy_total = "energy_total";
inline constexpr const char* energy_diff = "energy_diff";
inline constexpr const char* nacelle_position_avg = "nacelle_position_avg";
inline constexpr const char* temp_gen_stator = "temp_gen_stator";
inline constexpr const char* temp_gen_rotor = "temp_gen_rotor";
inline constexpr const char* temp_nacelle = "temp_nacelle";
inline constexpr const char* temp_front_hub_bearing = "temp_front_hub_bearing";
inline constexpr const char* temp_rear_hub_bearing = "temp_rear_hub_bearing";
inline constexpr const char* temp_nacelle_control_cabinet = "temp_nacelle_control_cabinet";
inline constexpr const char* temp_control_cabinet = "temp_control_cabinet";
inline constexpr const char* temp_tower = "temp_tower";
inline constexpr const char* temp_transformer = "temp_transformer";
inline constexpr const char* ambient_temperature = "ambient_temperature";
}  // namespace channels

const std::vector<std::string>& original_channel_ids();  // size 22

struct FaultEpisode {
    std::size_t start_row = 0;
    std::size_t duration_rows = 1;
    double severity_celsius = 20.0;  // peak excess stator temperature
};

struct SynthConfig {
    std::uint64_t seed = 1;
    std::size_t n_rows = 1008;  // one week
    double rated_power_kw = 900.0;
    double rotor_diameter_m = 52.0;
    double weibull_shape = 2.0;
    double weibull_scale = 8.0;
    std::vector<FaultEpisode> fault_episodes;
    double noise_scale = 1.0;          // multiplies every channel's noise std
    double missing_probability = 0.0;  // per-cell missing injection
    Timestamp start_time = parse_timestamp("2015-01-01T00:00:00");
};

// Deterministic synthetic SCADA generator: 22 original channels plus a
// fault-start / fault-clear StatusEvent pair per episode.
std::pair<TimeSeriesTable, std::vector<StatusEvent>> generate(const SynthConfig& config);

}  // namespace windfault
