#pragma once

#include "windfault/core.hpp"

namespace windfault {

enum class MovingStat { mean, std, median };

std::string moving_stat_name(MovingStat s);

struct KnowledgeConfig {
    double air_density = 1.225;                    // kg/m^3
    double swept_area = 2123.7166338267002;        // m^2, pi*(52/2)^2
};

struct ConstructionConfig {
    std::vector<std::size_t> lag_steps = {1, 2, 3, 4, 5, 6};   // rows (x10 min)
    std::vector<std::size_t> stat_windows = {2, 3, 6};         // rows (x10 min)
    std::vector<MovingStat> stats = {MovingStat::mean, MovingStat::std, MovingStat::median};
    KnowledgeConfig knowledge;
    void validate() const;
};

// Feature ids: lag features are `lag<minutes>_<channel>`, moving statistics
// `mov<stat><minutes>_<channel>`, differences `<a>-<b>`.
std::string lag_feature_id(const std::string& channel, std::size_t steps);
std::string moving_feature_id(const std::string& channel, MovingStat stat, std::size_t window_rows);

// The fixed 17-column difference family.
FeatureMatrix build_difference_features(const TimeSeriesTable& table);

// One column per (channel, lag): value at row t is channel[t-k], missing for t < k.
FeatureMatrix build_lag_features(const TimeSeriesTable& table, const std::vector<std::size_t>& lag_steps);

// Trailing-window statistics ending at the current row (inclusive); std is the
// population standard deviation. Any missing operand in the window, or fewer
// than `window` values so far, yields a missing cell.
FeatureMatrix build_moving_stats(const TimeSeriesTable& table,
                                 const std::vector<std::size_t>& windows,
                                 const std::vector<MovingStat>& stats);

// Available wind power for min/avg/max wind, power/available ratios, and the
// sinusoidal components of nacelle position (8 columns).
FeatureMatrix build_knowledge_features(const TimeSeriesTable& table, const KnowledgeConfig& cfg);

// [originals | differences | lags | moving stats | knowledge]; 377 columns
// with the default configuration and the 22 standard channels.
FeatureMatrix construct_all(const TimeSeriesTable& table, const ConstructionConfig& cfg);

// Moving variance (square of the moving std) for one channel; used by the
// heuristic baseline's fixed feature list.
FeatureMatrix build_moving_variance(const TimeSeriesTable& table, const std::string& channel,
                                    std::size_t window_rows);

void write_catalog(const FeatureMatrix& m, const std::string& path);
void write_feature_csv(const FeatureMatrix& m, const std::vector<Timestamp>& timestamps,
                       const std::string& path);

}  // namespace windfault
