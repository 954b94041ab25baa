#include "windfault/synthgen.hpp"

#include <algorithm>
#include <cmath>

namespace windfault {

const std::vector<std::string>& original_channel_ids() {
    static const std::vector<std::string> ids = {
        channels::wind_speed_min, channels::wind_speed_avg, channels::wind_speed_max,
        channels::rotor_speed_min, channels::rotor_speed_avg, channels::rotor_speed_max,
        channels::power_min, channels::power_avg, channels::power_max,
        channels::energy_total, channels::energy_diff,
        channels::nacelle_position_avg,
        channels::temp_gen_stator, channels::temp_gen_rotor, channels::temp_nacelle,
        channels::temp_front_hub_bearing, channels::temp_rear_hub_bearing,
        channels::temp_nacelle_control_cabinet, channels::temp_control_cabinet,
        channels::temp_tower, channels::temp_transformer,
        channels::ambient_temperature,
    };
    return ids;
}

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kAirDensity = 1.225;  // kg/m^3
constexpr double kCp = 0.42;
constexpr double kCutInMs = 3.5;
constexpr double kCutOutMs = 25.0;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

struct TempSensor {
    const char* id;
    double baseline;       // degC at zero load and zero ambient coupling
    double load_gain;      // degC per unit load (P/rated)
    double ambient_gain;   // coupling to ambient temperature
    double noise_std;      // AR(1) innovation std
};

// Stator and rotor share the ambient coupling so their difference cancels it.
constexpr TempSensor kSensors[] = {
    {channels::temp_gen_stator, 30.0, 45.0, 0.8, 0.8},
    {channels::temp_gen_rotor, 28.0, 44.0, 0.8, 0.8},
    {channels::temp_nacelle, 12.0, 8.0, 0.9, 0.5},
    {channels::temp_front_hub_bearing, 18.0, 12.0, 0.7, 0.6},
    {channels::temp_rear_hub_bearing, 17.0, 10.0, 0.7, 0.6},
    {channels::temp_nacelle_control_cabinet, 20.0, 6.0, 0.6, 0.4},
    {channels::temp_control_cabinet, 19.0, 5.0, 0.6, 0.4},
    {channels::temp_tower, 10.0, 3.0, 0.9, 0.4},
    {channels::temp_transformer, 25.0, 25.0, 0.7, 0.7},
};

}  // namespace

std::pair<TimeSeriesTable, std::vector<StatusEvent>> generate(const SynthConfig& config) {
    if (config.n_rows < 12) throw ArgumentError("n_rows must be >= 12");
    if (config.rated_power_kw <= 0 || config.rotor_diameter_m <= 0)
        throw ArgumentError("rated_power and rotor_diameter must be positive");

    auto episodes = config.fault_episodes;
    std::sort(episodes.begin(), episodes.end(),
              [](const FaultEpisode& a, const FaultEpisode& b) { return a.start_row < b.start_row; });
    for (std::size_t i = 0; i < episodes.size(); ++i) {
        const auto& ep = episodes[i];
        if (ep.duration_rows == 0 || ep.severity_celsius <= 0)
            throw ArgumentError("fault episode must have positive duration and severity");
        if (ep.start_row + ep.duration_rows > config.n_rows)
            throw ArgumentError("fault episode extends past n_rows");
        if (i > 0 && ep.start_row < episodes[i - 1].start_row + episodes[i - 1].duration_rows)
            throw ArgumentError("fault episodes must not overlap");
    }

    const std::size_t n = config.n_rows;
    Rng rng(config.seed);

    TimeSeriesTable tbl;
    tbl.start_time = config.start_time;
    tbl.row_count = n;
    for (const auto& id : original_channel_ids())
        tbl.columns.push_back({id, std::vector<double>(n, 0.0)});
    auto col = [&](const char* id) -> std::vector<double>& {
        for (auto& c : tbl.columns)
            if (c.id == id) return c.values;
        throw std::logic_error("channel missing");
    };

    const double area = kPi * (config.rotor_diameter_m / 2.0) * (config.rotor_diameter_m / 2.0);
    auto power_curve = [&](double v) {
        if (v < kCutInMs || v > kCutOutMs) return 0.0;
        return std::min(config.rated_power_kw, 0.5 * kAirDensity * area * v * v * v * kCp / 1000.0);
    };

    // Per-episode excess temperature: linear rise to full severity within a
    // few rows, then a plateau until the episode clears. Rotor lags the
    // stator by one row and sees only a small fraction of the heating.
    auto fault_excess = [&](std::size_t row, double lead_rows, double scale) {
        double excess = 0.0;
        for (const auto& ep : episodes) {
            const double ramp_start = static_cast<double>(ep.start_row) + lead_rows;
            const double ramp_end = static_cast<double>(ep.start_row + ep.duration_rows);
            const double r = static_cast<double>(row);
            if (r < ramp_start || r >= ramp_end) continue;
            const double rise = std::max(1.0, std::min(2.0, (ramp_end - ramp_start) / 4.0));
            excess += scale * ep.severity_celsius * std::min(1.0, (r - ramp_start + 1.0) / rise);
        }
        return excess;
    };

    double wind_z = rng.gaussian();
    double ambient_ar = 0.0;
    double temp_ar[std::size(kSensors)] = {};
    double nacelle_pos = rng.uniform(0.0, 360.0);
    double energy_total = 0.0;
    const double ar = 0.8;
    const double ar_innov = std::sqrt(1.0 - ar * ar);

    for (std::size_t r = 0; r < n; ++r) {
        // wind: AR(1) Gaussian mapped through the Weibull quantile transform
        wind_z = ar * wind_z + ar_innov * rng.gaussian();
        const double u = std::clamp(normal_cdf(wind_z), 1e-12, 1.0 - 1e-12);
        const double v_avg = config.weibull_scale * std::pow(-std::log(1.0 - u), 1.0 / config.weibull_shape);
        const double up_spread = std::abs(0.8 + 0.3 * rng.gaussian() * config.noise_scale);
        const double dn_spread = std::abs(0.8 + 0.3 * rng.gaussian() * config.noise_scale);
        const double v_max = v_avg + up_spread;
        const double v_min = std::max(0.0, v_avg - dn_spread);
        col(channels::wind_speed_min)[r] = v_min;
        col(channels::wind_speed_avg)[r] = v_avg;
        col(channels::wind_speed_max)[r] = v_max;

        // rotor speed follows wind up to a plateau
        auto rotor_of = [&](double v) {
            if (v < kCutInMs) return 0.0;
            return 10.0 + 20.0 * std::min(1.0, v / 14.0);
        };
        double rs[3] = {rotor_of(v_min), rotor_of(v_avg), rotor_of(v_max)};
        for (double& x : rs) x = std::max(0.0, x + 0.2 * rng.gaussian() * config.noise_scale);
        std::sort(rs, rs + 3);
        col(channels::rotor_speed_min)[r] = rs[0];
        col(channels::rotor_speed_avg)[r] = rs[1];
        col(channels::rotor_speed_max)[r] = rs[2];

        double pw[3] = {power_curve(v_min), power_curve(v_avg), power_curve(v_max)};
        for (double& x : pw)
            x = std::clamp(x + 2.0 * rng.gaussian() * config.noise_scale, 0.0, config.rated_power_kw);
        std::sort(pw, pw + 3);
        col(channels::power_min)[r] = pw[0];
        col(channels::power_avg)[r] = pw[1];
        col(channels::power_max)[r] = pw[2];

        const double e_diff = pw[1] / 6.0;  // kWh over 10 min
        energy_total += e_diff;
        col(channels::energy_diff)[r] = e_diff;
        col(channels::energy_total)[r] = energy_total;

        nacelle_pos += 2.0 * rng.gaussian();
        nacelle_pos = std::fmod(std::fmod(nacelle_pos, 360.0) + 360.0, 360.0);
        col(channels::nacelle_position_avg)[r] = nacelle_pos;

        // diurnal ambient with AR(1) noise
        ambient_ar = ar * ambient_ar + ar_innov * rng.gaussian() * 0.8 * config.noise_scale;
        const double ambient =
            10.0 + 6.0 * std::sin(2.0 * kPi * static_cast<double>(r) / 144.0) + ambient_ar;
        col(channels::ambient_temperature)[r] = ambient;

        const double load = pw[1] / config.rated_power_kw;
        for (std::size_t s = 0; s < std::size(kSensors); ++s) {
            const auto& sensor = kSensors[s];
            temp_ar[s] = ar * temp_ar[s] + ar_innov * rng.gaussian() * sensor.noise_std * config.noise_scale;
            double t = sensor.baseline + sensor.load_gain * load + sensor.ambient_gain * ambient + temp_ar[s];
            if (sensor.id == channels::temp_gen_stator) t += fault_excess(r, 0.0, 1.0);
            if (sensor.id == channels::temp_gen_rotor) t += fault_excess(r, 1.0, 0.1);
            col(sensor.id)[r] = t;
        }
    }

    if (config.missing_probability > 0.0) {
        for (auto& c : tbl.columns)
            for (auto& v : c.values)
                if (rng.uniform() < config.missing_probability) v = kMissing;
    }

    std::vector<StatusEvent> events;
    for (const auto& ep : episodes) {
        events.push_back({tbl.time_at(ep.start_row), "GEN_HEATING_FAULT", true});
        events.push_back({tbl.time_at(ep.start_row + ep.duration_rows), "NORMAL", false});
    }

    tbl.validate();
    return {std::move(tbl), std::move(events)};
}

}  // namespace windfault
