#include "windfault/features.hpp"

#include "windfault/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace windfault {

namespace {

FeatureMatrix empty_matrix(std::size_t n_rows) {
    FeatureMatrix m;
    m.n_rows = n_rows;
    return m;
}

void add_column(FeatureMatrix& m, FeatureDescriptor desc, const std::vector<double>& values) {
    FeatureMatrix one;
    one.n_rows = values.size();
    one.catalog.push_back(std::move(desc));
    one.data = values;
    m.append_columns(one);
}

std::vector<double> subtract(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size(), kMissing);
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!is_missing(a[i]) && !is_missing(b[i])) out[i] = a[i] - b[i];
    return out;
}

}  // namespace

std::string moving_stat_name(MovingStat s) {
    switch (s) {
        case MovingStat::mean: return "mean";
        case MovingStat::std: return "std";
        case MovingStat::median: return "median";
    }
    return "?";
}

void ConstructionConfig::validate() const {
    if (lag_steps.empty() || stat_windows.empty() || stats.empty())
        throw ArgumentError("construction config sets must be non-empty");
    for (auto k : lag_steps)
        if (k < 1) throw ArgumentError("lag steps must be >= 1");
    for (auto w : stat_windows)
        if (w < 2) throw ArgumentError("statistic windows must be >= 2 rows");
}

std::string lag_feature_id(const std::string& channel, std::size_t steps) {
    return "lag" + std::to_string(steps * 10) + "_" + channel;
}

std::string moving_feature_id(const std::string& channel, MovingStat stat, std::size_t window_rows) {
    return "mov" + moving_stat_name(stat) + std::to_string(window_rows * 10) + "_" + channel;
}

FeatureMatrix build_difference_features(const TimeSeriesTable& table) {
    namespace ch = channels;
    // (minuend, subtrahend) pairs; 9 operational triples + 5 generator-related
    // + 3 structural temperature differences = 17
    static const std::pair<const char*, const char*> pairs[] = {
        {ch::wind_speed_max, ch::wind_speed_min},
        {ch::wind_speed_max, ch::wind_speed_avg},
        {ch::wind_speed_avg, ch::wind_speed_min},
        {ch::rotor_speed_max, ch::rotor_speed_min},
        {ch::rotor_speed_max, ch::rotor_speed_avg},
        {ch::rotor_speed_avg, ch::rotor_speed_min},
        {ch::power_max, ch::power_min},
        {ch::power_max, ch::power_avg},
        {ch::power_avg, ch::power_min},
        {ch::temp_gen_stator, ch::temp_gen_rotor},
        {ch::temp_gen_rotor, ch::temp_nacelle},
        {ch::temp_gen_rotor, ch::temp_transformer},
        {ch::temp_gen_stator, ch::temp_nacelle},
        {ch::temp_gen_stator, ch::temp_transformer},
        {ch::temp_front_hub_bearing, ch::temp_rear_hub_bearing},
        {ch::temp_nacelle, ch::temp_tower},
        {ch::temp_nacelle_control_cabinet, ch::temp_control_cabinet},
    };
    FeatureMatrix m = empty_matrix(table.row_count);
    for (const auto& [a, b] : pairs) {
        add_column(m, {std::string(a) + "-" + b, FeatureFamily::difference,
                       std::string(a) + " minus " + b},
                   subtract(table.values_of(a), table.values_of(b)));
    }
    return m;
}

FeatureMatrix build_lag_features(const TimeSeriesTable& table,
                                 const std::vector<std::size_t>& lag_steps) {
    for (auto k : lag_steps) {
        if (k < 1) throw ArgumentError("lag must be >= 1");
        if (k >= table.row_count) throw ArgumentError("lag exceeds row count");
    }
    FeatureMatrix m = empty_matrix(table.row_count);
    for (const auto& c : table.columns) {
        for (auto k : lag_steps) {
            std::vector<double> v(table.row_count, kMissing);
            for (std::size_t t = k; t < table.row_count; ++t) v[t] = c.values[t - k];
            add_column(m, {lag_feature_id(c.id, k), FeatureFamily::lag,
                           c.id + " delayed by " + std::to_string(k * 10) + " min"},
                       v);
        }
    }
    return m;
}

FeatureMatrix build_moving_stats(const TimeSeriesTable& table,
                                 const std::vector<std::size_t>& windows,
                                 const std::vector<MovingStat>& stats) {
    for (auto w : windows)
        if (w < 2) throw ArgumentError("window must be >= 2 rows");
    FeatureMatrix m = empty_matrix(table.row_count);
    std::vector<double> buf;
    for (const auto& c : table.columns) {
        for (auto stat : stats) {
            for (auto w : windows) {
                std::vector<double> v(table.row_count, kMissing);
                for (std::size_t t = w - 1; t < table.row_count; ++t) {
                    buf.assign(c.values.begin() + (t + 1 - w), c.values.begin() + (t + 1));
                    if (std::any_of(buf.begin(), buf.end(), is_missing)) continue;
                    switch (stat) {
                        case MovingStat::mean: {
                            double s = 0;
                            for (double x : buf) s += x;
                            v[t] = s / static_cast<double>(w);
                            break;
                        }
                        case MovingStat::std: {
                            double s = 0;
                            for (double x : buf) s += x;
                            const double mu = s / static_cast<double>(w);
                            double q = 0;
                            for (double x : buf) q += (x - mu) * (x - mu);
                            v[t] = std::sqrt(q / static_cast<double>(w));
                            break;
                        }
                        case MovingStat::median: {
                            std::sort(buf.begin(), buf.end());
                            v[t] = w % 2 ? buf[w / 2] : 0.5 * (buf[w / 2 - 1] + buf[w / 2]);
                            break;
                        }
                    }
                }
                add_column(m, {moving_feature_id(c.id, stat, w), FeatureFamily::moving_stat,
                               std::to_string(w * 10) + "-min moving " + moving_stat_name(stat) +
                                   " of " + c.id},
                           v);
            }
        }
    }
    return m;
}

FeatureMatrix build_knowledge_features(const TimeSeriesTable& table, const KnowledgeConfig& cfg) {
    if (cfg.air_density <= 0 || cfg.swept_area <= 0)
        throw ArgumentError("air density and swept area must be positive");
    namespace ch = channels;
    static const char* wind_ids[] = {ch::wind_speed_min, ch::wind_speed_avg, ch::wind_speed_max};
    static const char* power_ids[] = {ch::power_min, ch::power_avg, ch::power_max};
    static const char* suffix[] = {"min", "avg", "max"};

    FeatureMatrix m = empty_matrix(table.row_count);
    std::vector<std::vector<double>> avail_w(3);  // watts, for the ratio guard
    for (int i = 0; i < 3; ++i) {
        const auto& v = table.values_of(wind_ids[i]);
        std::vector<double> p_kw(table.row_count, kMissing);
        avail_w[i].assign(table.row_count, kMissing);
        for (std::size_t t = 0; t < table.row_count; ++t) {
            if (is_missing(v[t])) continue;
            const double w = 0.5 * cfg.air_density * cfg.swept_area * v[t] * v[t] * v[t];
            avail_w[i][t] = w;
            p_kw[t] = w / 1000.0;
        }
        add_column(m, {std::string("p_avail_wind_") + suffix[i], FeatureFamily::knowledge,
                       std::string("available wind power (kW) at ") + wind_ids[i]},
                   p_kw);
    }
    for (int i = 0; i < 3; ++i) {
        const auto& p = table.values_of(power_ids[i]);
        std::vector<double> ratio(table.row_count, kMissing);
        for (std::size_t t = 0; t < table.row_count; ++t) {
            if (is_missing(p[t]) || is_missing(avail_w[i][t]) || avail_w[i][t] < 1.0) continue;
            ratio[t] = p[t] * 1000.0 / avail_w[i][t];
        }
        add_column(m, {std::string("power_ratio_") + suffix[i], FeatureFamily::knowledge,
                       std::string(power_ids[i]) + " over available wind power"},
                   ratio);
    }
    const auto& pos = table.values_of(ch::nacelle_position_avg);
    std::vector<double> s(table.row_count, kMissing), c(table.row_count, kMissing);
    for (std::size_t t = 0; t < table.row_count; ++t) {
        if (is_missing(pos[t])) continue;
        const double rad = pos[t] * 3.14159265358979323846 / 180.0;
        s[t] = std::sin(rad);
        c[t] = std::cos(rad);
    }
    add_column(m, {"nacelle_pos_sin", FeatureFamily::knowledge, "sine of nacelle position"}, s);
    add_column(m, {"nacelle_pos_cos", FeatureFamily::knowledge, "cosine of nacelle position"}, c);
    return m;
}

FeatureMatrix construct_all(const TimeSeriesTable& table, const ConstructionConfig& cfg) {
    cfg.validate();
    FeatureMatrix m = empty_matrix(table.row_count);
    for (const auto& c : table.columns)
        add_column(m, {c.id, FeatureFamily::original, "SCADA channel"}, c.values);
    m.append_columns(build_difference_features(table));
    m.append_columns(build_lag_features(table, cfg.lag_steps));
    m.append_columns(build_moving_stats(table, cfg.stat_windows, cfg.stats));
    m.append_columns(build_knowledge_features(table, cfg.knowledge));
    return m;
}

FeatureMatrix build_moving_variance(const TimeSeriesTable& table, const std::string& channel,
                                    std::size_t window_rows) {
    TimeSeriesTable one;
    one.start_time = table.start_time;
    one.row_count = table.row_count;
    one.columns.push_back({channel, table.values_of(channel)});
    FeatureMatrix stds = build_moving_stats(one, {window_rows}, {MovingStat::std});
    FeatureMatrix m = empty_matrix(table.row_count);
    std::vector<double> var(table.row_count, kMissing);
    for (std::size_t t = 0; t < table.row_count; ++t) {
        const double sd = stds.at(t, 0);
        if (!is_missing(sd)) var[t] = sd * sd;
    }
    add_column(m, {"movvar" + std::to_string(window_rows * 10) + "_" + channel,
                   FeatureFamily::moving_stat,
                   std::to_string(window_rows * 10) + "-min moving variance of " + channel},
               var);
    return m;
}

void write_catalog(const FeatureMatrix& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write catalog: " + path);
    for (const auto& d : m.catalog)
        out << d.id << '\t' << family_name(d.family) << '\t' << d.provenance << '\n';
}

void write_feature_csv(const FeatureMatrix& m, const std::vector<Timestamp>& timestamps,
                       const std::string& path) {
    if (timestamps.size() != m.rows())
        throw ArgumentError("timestamp count must match feature rows");
    std::ofstream out(path);
    if (!out) throw DataError("cannot write feature CSV: " + path);
    out << "timestamp";
    for (const auto& d : m.catalog) out << ',' << d.id;
    out << '\n';
    for (std::size_t r = 0; r < m.rows(); ++r) {
        out << format_timestamp(timestamps[r]);
        for (std::size_t c = 0; c < m.cols(); ++c) {
            out << ',';
            if (!is_missing(m.at(r, c))) out << format_double(m.at(r, c));
        }
        out << '\n';
    }
}

}  // namespace windfault
