#include "windfault/scada.hpp"
#include "windfault/synthgen.hpp"

#include <doctest.h>

#include <sstream>

using namespace windfault;

namespace {

IngestResult ingest_str(const std::string& csv, const std::vector<std::string>& schema = {}) {
    std::istringstream in(csv);
    return ingest_csv(in, schema);
}

}  // namespace

TEST_CASE("ingest: consecutive rows pass through") {
    const auto res = ingest_str(
        "timestamp,a,b\n"
        "2015-01-01T00:00:00,1,2\n"
        "2015-01-01T00:10:00,3,4\n"
        "2015-01-01T00:20:00,5,6\n");
    CHECK(res.table.row_count == 3);
    CHECK(res.table.values_of("a") == std::vector<double>{1, 3, 5});
    CHECK(res.table.values_of("b") == std::vector<double>{2, 4, 6});
    for (const auto& c : res.table.columns)
        for (double v : c.values) CHECK(!is_missing(v));
}

TEST_CASE("ingest: timestamp gaps become all-missing rows") {
    const auto res = ingest_str(
        "timestamp,a\n"
        "2015-01-01T00:00:00,1\n"
        "2015-01-01T00:30:00,4\n");
    REQUIRE(res.table.row_count == 4);
    const auto& a = res.table.values_of("a");
    CHECK(a[0] == 1);
    CHECK(is_missing(a[1]));
    CHECK(is_missing(a[2]));
    CHECK(a[3] == 4);
}

TEST_CASE("ingest: bad timestamp reports the line number") {
    std::string csv = "timestamp,a\n";
    for (int i = 0; i < 5; ++i)
        csv += format_timestamp(parse_timestamp("2015-01-01T00:00:00") + i * kPeriodSeconds) + ",1\n";
    csv += "not-a-time,1\n";  // line 7
    CHECK_THROWS_WITH_AS(ingest_str(csv), doctest::Contains("line 7"), ParseError);
}

TEST_CASE("ingest: duplicate timestamp and empty file are data errors") {
    CHECK_THROWS_AS(ingest_str("timestamp,a\n2015-01-01T00:00:00,1\n2015-01-01T00:00:00,2\n"),
                    DataError);
    CHECK_THROWS_AS(ingest_str(""), DataError);
    CHECK_THROWS_AS(ingest_str("timestamp,a\n"), DataError);
}

TEST_CASE("ingest: channels outside the schema are counted, not loaded") {
    const auto res = ingest_str(
        "timestamp,a,extra,b\n"
        "2015-01-01T00:00:00,1,9,2\n",
        {"a", "b"});
    CHECK(res.ignored_channels == 1);
    CHECK(res.table.columns.size() == 2);
    CHECK(res.table.find("extra") == nullptr);
}

TEST_CASE("ingest/emit round trip is identical") {
    SynthConfig cfg;
    cfg.seed = 7;
    cfg.n_rows = 50;
    cfg.missing_probability = 0.05;
    const auto [table, events] = generate(cfg);

    std::ostringstream out;
    write_csv(table, out);
    const auto back = ingest_str(out.str()).table;

    REQUIRE(back.row_count == table.row_count);
    REQUIRE(back.columns.size() == table.columns.size());
    CHECK(back.start_time == table.start_time);
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        CHECK(back.columns[c].id == table.columns[c].id);
        for (std::size_t r = 0; r < table.row_count; ++r) {
            const double x = table.columns[c].values[r];
            const double y = back.columns[c].values[r];
            if (is_missing(x))
                CHECK(is_missing(y));
            else
                CHECK(x == y);  // bit-identical via 17-digit decimals
        }
    }
}

namespace {

TimeSeriesTable tiny_table(std::size_t rows) {
    TimeSeriesTable t;
    t.start_time = parse_timestamp("2015-01-01T00:00:00");
    t.row_count = rows;
    t.columns.push_back({"a", std::vector<double>(rows, 1.0)});
    return t;
}

StatusEvent ev(const char* time, bool fault) {
    return {parse_timestamp(time), fault ? "GEN_HEATING_FAULT" : "NORMAL", fault};
}

}  // namespace

TEST_CASE("align: no events means all labels 0") {
    const auto res = align_status_labels(tiny_table(6), {});
    CHECK(res.dataset.labels == std::vector<int>(6, 0));
}

TEST_CASE("align: fault 00:05-00:25 marks the first three intervals") {
    const auto res = align_status_labels(
        tiny_table(6), {ev("2015-01-01T00:05:00", true), ev("2015-01-01T00:25:00", false)});
    CHECK(res.dataset.labels == std::vector<int>{1, 1, 1, 0, 0, 0});
}

TEST_CASE("align: unterminated fault stays active to the end") {
    const auto res = align_status_labels(tiny_table(6), {ev("2015-01-01T00:30:00", true)});
    CHECK(res.dataset.labels == std::vector<int>{0, 0, 0, 1, 1, 1});
}

TEST_CASE("align: events outside the span are ignored with a count") {
    const auto res = align_status_labels(
        tiny_table(3), {ev("2014-12-31T00:00:00", true), ev("2015-02-01T00:00:00", true)});
    CHECK(res.ignored_events == 2);
    CHECK(res.dataset.labels == std::vector<int>{0, 0, 0});
}

TEST_CASE("align: adding a fault event never flips labels 1 to 0") {
    Rng rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t rows = 10 + rng.index(20);
        const auto t = tiny_table(rows);
        std::vector<StatusEvent> events;
        const Timestamp t0 = t.start_time;
        for (std::size_t i = 0; i < 4; ++i)
            events.push_back({t0 + static_cast<Timestamp>(rng.index(rows * 600)),
                              "X", rng.uniform() < 0.5});
        std::sort(events.begin(), events.end(),
                  [](const auto& a, const auto& b) { return a.event_time < b.event_time; });
        const auto before = align_status_labels(t, events).dataset.labels;

        // flip one non-fault event into a fault
        auto extended = events;
        bool changed = false;
        for (auto& e : extended)
            if (!e.is_generator_heating_fault) {
                e.is_generator_heating_fault = true;
                changed = true;
                break;
            }
        if (!changed) continue;
        const auto after = align_status_labels(t, extended).dataset.labels;
        for (std::size_t i = 0; i < before.size(); ++i)
            if (before[i] == 1) CHECK(after[i] == 1);
    }
}

TEST_CASE("split: floor arithmetic and error contract") {
    LabeledDataset ds;
    ds.features.n_rows = 10;
    ds.features.catalog.push_back({"a", FeatureFamily::original, ""});
    ds.features.data.assign(10, 0.0);
    for (int i = 0; i < 10; ++i) {
        ds.features.data[static_cast<std::size_t>(i)] = i;
        ds.labels.push_back(i % 2);
        ds.timestamps.push_back(i * kPeriodSeconds);
    }
    auto [a, b] = chronological_split(ds, 0.7);
    CHECK(a.size() == 7);
    CHECK(b.size() == 3);
    auto [c, d] = chronological_split(ds, 0.99);
    CHECK(c.size() == 9);
    CHECK(d.size() == 1);
    CHECK_THROWS_AS(chronological_split(ds, 1.0), ArgumentError);
    CHECK_THROWS_AS(chronological_split(ds, 0.0), ArgumentError);

    // concatenating the halves reproduces the input exactly
    for (std::size_t i = 0; i < 10; ++i) {
        const double v = i < 7 ? a.features.at(i, 0) : b.features.at(i - 7, 0);
        CHECK(v == static_cast<double>(i));
        const int lbl = i < 7 ? a.labels[i] : b.labels[i - 7];
        CHECK(lbl == ds.labels[i]);
    }
}
