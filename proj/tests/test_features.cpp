#include "windfault/features.hpp"
#include "windfault/synthgen.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

using namespace windfault;

namespace {

TimeSeriesTable synth_table(std::size_t rows, std::uint64_t seed = 1) {
    SynthConfig cfg;
    cfg.seed = seed;
    cfg.n_rows = rows;
    return generate(cfg).first;
}

}  // namespace

TEST_CASE("differences: triple arithmetic and identity case") {
    auto table = synth_table(20);
    for (auto& c : table.columns) {
        if (c.id == channels::wind_speed_min) c.values[0] = 3;
        if (c.id == channels::wind_speed_avg) c.values[0] = 5;
        if (c.id == channels::wind_speed_max) c.values[0] = 9;
        if (c.id == channels::temp_gen_stator) c.values[0] = 70;
        if (c.id == channels::temp_gen_rotor) c.values[0] = 70;
    }
    const auto m = build_difference_features(table);
    CHECK(m.cols() == 17);
    CHECK(m.at(0, static_cast<std::size_t>(m.column_index("wind_speed_max-wind_speed_min"))) == 6);
    CHECK(m.at(0, static_cast<std::size_t>(m.column_index("wind_speed_max-wind_speed_avg"))) == 4);
    CHECK(m.at(0, static_cast<std::size_t>(m.column_index("wind_speed_avg-wind_speed_min"))) == 2);
    CHECK(m.at(0, static_cast<std::size_t>(m.column_index("temp_gen_stator-temp_gen_rotor"))) == 0);
}

TEST_CASE("differences: missing source channel names the channel") {
    auto table = synth_table(20);
    table.columns.erase(table.columns.begin());  // drop wind_speed_min
    CHECK_THROWS_WITH_AS(build_difference_features(table),
                         doctest::Contains("wind_speed_min"), ConfigError);
}

TEST_CASE("lags: shift semantics") {
    TimeSeriesTable t;
    t.row_count = 3;
    t.columns.push_back({"c", {10, 20, 30}});
    const auto m = build_lag_features(t, {1});
    REQUIRE(m.cols() == 1);
    CHECK(m.catalog[0].id == "lag10_c");
    CHECK(is_missing(m.at(0, 0)));
    CHECK(m.at(1, 0) == 10);
    CHECK(m.at(2, 0) == 20);
    CHECK_THROWS_AS(build_lag_features(t, {0}), ArgumentError);
}

TEST_CASE("lags: 22 channels x 6 lags = 132 columns") {
    const auto m = build_lag_features(synth_table(30), {1, 2, 3, 4, 5, 6});
    CHECK(m.cols() == 132);
}

TEST_CASE("moving stats: worked values under the population convention") {
    TimeSeriesTable t;
    t.row_count = 3;
    t.columns.push_back({"c", {1, 2, 3}});
    const auto means = build_moving_stats(t, {3}, {MovingStat::mean});
    CHECK(is_missing(means.at(1, 0)));
    CHECK(means.at(2, 0) == 2.0);

    TimeSeriesTable t2;
    t2.row_count = 2;
    t2.columns.push_back({"c", {0, 2}});
    const auto stds = build_moving_stats(t2, {2}, {MovingStat::std});
    CHECK(stds.at(1, 0) == 1.0);  // population std of {0,2}
}

TEST_CASE("moving stats: 22 channels x 3 windows x 3 stats = 198 columns") {
    const auto m = build_moving_stats(synth_table(30), {2, 3, 6},
                                      {MovingStat::mean, MovingStat::std, MovingStat::median});
    CHECK(m.cols() == 198);
}

TEST_CASE("moving mean matches a brute-force recomputation") {
    const auto table = synth_table(300, 9);
    const std::vector<std::size_t> windows = {2, 3, 6};
    const auto m = build_moving_stats(table, windows, {MovingStat::mean});
    for (const auto& c : table.columns) {
        for (std::size_t w : windows) {
            const auto j = static_cast<std::size_t>(
                m.column_index(moving_feature_id(c.id, MovingStat::mean, w)));
            for (std::size_t t = 0; t < table.row_count; ++t) {
                if (t + 1 < w) {
                    CHECK(is_missing(m.at(t, j)));
                    continue;
                }
                double sum = 0;
                for (std::size_t k = t + 1 - w; k <= t; ++k) sum += c.values[k];
                CHECK(m.at(t, j) == doctest::Approx(sum / static_cast<double>(w)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("knowledge: guards and quadrant identities") {
    auto table = synth_table(20);
    for (auto& c : table.columns) {
        if (c.id == channels::wind_speed_min) c.values[0] = 0;
        if (c.id == channels::nacelle_position_avg) c.values[0] = 90;
    }
    const auto m = build_knowledge_features(table, KnowledgeConfig{});
    CHECK(m.cols() == 8);
    CHECK(m.at(0, static_cast<std::size_t>(m.column_index("p_avail_wind_min"))) == 0.0);
    CHECK(is_missing(m.at(0, static_cast<std::size_t>(m.column_index("power_ratio_min")))));
    CHECK(m.at(0, static_cast<std::size_t>(m.column_index("nacelle_pos_sin"))) == doctest::Approx(1.0));
    CHECK(m.at(0, static_cast<std::size_t>(m.column_index("nacelle_pos_cos"))) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("construct_all: 377 columns with family counts") {
    const auto m = construct_all(synth_table(30), ConstructionConfig{});
    CHECK(m.cols() == 377);
    std::map<FeatureFamily, int> counts;
    for (const auto& d : m.catalog) ++counts[d.family];
    CHECK(counts[FeatureFamily::original] == 22);
    CHECK(counts[FeatureFamily::difference] == 17);
    CHECK(counts[FeatureFamily::lag] == 132);
    CHECK(counts[FeatureFamily::moving_stat] == 198);
    CHECK(counts[FeatureFamily::knowledge] == 8);
}

TEST_CASE("construct_all: reduced configuration count arithmetic") {
    ConstructionConfig cfg;
    cfg.lag_steps = {1};
    cfg.stat_windows = {3};
    cfg.stats = {MovingStat::mean};
    const auto m = construct_all(synth_table(30), cfg);
    CHECK(m.cols() == 22 + 17 + 22 + 22 + 8);
}

TEST_CASE("missing operands propagate to missing outputs") {
    auto table = synth_table(30, 4);
    for (auto& c : table.columns) c.values[10] = kMissing;
    const auto m = construct_all(table, ConstructionConfig{});
    // row 10 itself: differences and knowledge all missing
    for (std::size_t j = 0; j < m.cols(); ++j) {
        const auto fam = m.catalog[j].family;
        if (fam == FeatureFamily::difference || fam == FeatureFamily::knowledge ||
            fam == FeatureFamily::original)
            CHECK(is_missing(m.at(10, j)));
    }
    // lag-1 columns are missing at row 11, moving windows covering row 10 too
    const auto lag_col = static_cast<std::size_t>(m.column_index("lag10_power_avg"));
    CHECK(is_missing(m.at(11, lag_col)));
    const auto mov_col = static_cast<std::size_t>(m.column_index("movmean60_power_avg"));
    for (std::size_t r = 10; r < 16; ++r) CHECK(is_missing(m.at(r, mov_col)));
    CHECK(!is_missing(m.at(16, mov_col)));
}
