#include "windfault/scada.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace windfault {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_cell(const std::string& s, std::size_t line_no) {
    if (s.empty()) return kMissing;
    double v;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw ParseError("line " + std::to_string(line_no) + ": bad numeric value '" + s + "'");
    return v;
}

}  // namespace

IngestResult ingest_csv(const std::string& path, const std::vector<std::string>& schema) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open data CSV: " + path);
    return ingest_csv(in, schema);
}

IngestResult ingest_csv(std::istream& in, const std::vector<std::string>& schema) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty data CSV");
    const auto header = split_csv_line(line);
    if (header.empty() || header[0] != "timestamp")
        throw DataError("data CSV must start with a 'timestamp' column");

    // column -> output channel slot, or -1 for ignored extras
    std::vector<std::string> channel_ids;
    std::vector<int> slot_of_column(header.size(), -1);
    std::size_t ignored = 0;
    if (schema.empty()) {
        for (std::size_t c = 1; c < header.size(); ++c) {
            slot_of_column[c] = static_cast<int>(channel_ids.size());
            channel_ids.push_back(header[c]);
        }
    } else {
        channel_ids = schema;
        for (std::size_t c = 1; c < header.size(); ++c) {
            auto it = std::find(schema.begin(), schema.end(), header[c]);
            if (it == schema.end())
                ++ignored;
            else
                slot_of_column[c] = static_cast<int>(it - schema.begin());
        }
        for (const auto& id : schema)
            if (std::find(header.begin() + 1, header.end(), id) == header.end())
                throw DataError("data CSV lacks schema channel: " + id);
    }

    std::vector<Timestamp> stamps;
    std::vector<std::vector<double>> rows;  // per parsed row, one value per channel slot
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(header.size()) + " fields, got " +
                             std::to_string(cells.size()));
        Timestamp t;
        try {
            t = parse_timestamp(cells[0]);
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        }
        if (!stamps.empty()) {
            if (t == stamps.back())
                throw DataError("line " + std::to_string(line_no) + ": duplicate timestamp " + cells[0]);
            if (t < stamps.back())
                throw DataError("line " + std::to_string(line_no) + ": timestamps not increasing");
            if ((t - stamps.front()) % kPeriodSeconds != 0)
                throw DataError("line " + std::to_string(line_no) + ": timestamp off the 10-min cadence");
        }
        std::vector<double> row(channel_ids.size(), kMissing);
        for (std::size_t c = 1; c < cells.size(); ++c)
            if (slot_of_column[c] >= 0) row[static_cast<std::size_t>(slot_of_column[c])] = parse_cell(cells[c], line_no);
        stamps.push_back(t);
        rows.push_back(std::move(row));
    }
    if (stamps.empty()) throw DataError("data CSV has no rows");

    IngestResult res;
    res.ignored_channels = ignored;
    TimeSeriesTable& tbl = res.table;
    tbl.start_time = stamps.front();
    tbl.row_count = static_cast<std::size_t>((stamps.back() - stamps.front()) / kPeriodSeconds) + 1;
    tbl.columns.reserve(channel_ids.size());
    for (const auto& id : channel_ids)
        tbl.columns.push_back({id, std::vector<double>(tbl.row_count, kMissing)});
    for (std::size_t i = 0; i < stamps.size(); ++i) {
        const auto r = static_cast<std::size_t>((stamps[i] - tbl.start_time) / kPeriodSeconds);
        for (std::size_t c = 0; c < channel_ids.size(); ++c) tbl.columns[c].values[r] = rows[i][c];
    }
    tbl.validate();
    return res;
}

void write_csv(const TimeSeriesTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write data CSV: " + path);
    write_csv(table, out);
}

void write_csv(const TimeSeriesTable& table, std::ostream& out) {
    out << "timestamp";
    for (const auto& c : table.columns) out << ',' << c.id;
    out << '\n';
    for (std::size_t r = 0; r < table.row_count; ++r) {
        out << format_timestamp(table.time_at(r));
        for (const auto& c : table.columns) {
            out << ',';
            if (!is_missing(c.values[r])) out << format_double(c.values[r]);
        }
        out << '\n';
    }
}

std::vector<StatusEvent> read_status_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open status CSV: " + path);
    return read_status_csv(in);
}

std::vector<StatusEvent> read_status_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty status CSV");
    const auto header = split_csv_line(line);
    if (header.size() != 3 || header[0] != "timestamp" || header[1] != "code" ||
        header[2] != "is_heating_fault")
        throw DataError("status CSV header must be timestamp,code,is_heating_fault");
    std::vector<StatusEvent> events;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != 3)
            throw ParseError("line " + std::to_string(line_no) + ": expected 3 fields");
        StatusEvent ev;
        try {
            ev.event_time = parse_timestamp(cells[0]);
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        }
        ev.code = cells[1];
        if (cells[2] != "0" && cells[2] != "1")
            throw ParseError("line " + std::to_string(line_no) + ": is_heating_fault must be 0 or 1");
        ev.is_generator_heating_fault = cells[2] == "1";
        events.push_back(std::move(ev));
    }
    return events;
}

void write_status_csv(const std::vector<StatusEvent>& events, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write status CSV: " + path);
    out << "timestamp,code,is_heating_fault\n";
    for (const auto& ev : events)
        out << format_timestamp(ev.event_time) << ',' << ev.code << ','
            << (ev.is_generator_heating_fault ? '1' : '0') << '\n';
}

AlignResult align_status_labels(const TimeSeriesTable& table,
                                const std::vector<StatusEvent>& events) {
    for (std::size_t i = 1; i < events.size(); ++i)
        if (events[i].event_time < events[i - 1].event_time)
            throw ArgumentError("status events must be sorted by event_time");

    const Timestamp t0 = table.start_time;
    const Timestamp t_end = table.time_at(table.row_count);  // one-past-last interval start
    AlignResult res;

    // Active fault windows [start, end); an unterminated fault stays active.
    std::vector<std::pair<Timestamp, Timestamp>> windows;
    const Timestamp far = t_end + kPeriodSeconds;
    for (std::size_t i = 0; i < events.size(); ++i) {
        const auto& ev = events[i];
        if (ev.event_time < t0 || ev.event_time >= t_end + kPeriodSeconds) {
            ++res.ignored_events;
            continue;
        }
        if (!ev.is_generator_heating_fault) continue;
        const Timestamp end = i + 1 < events.size() ? events[i + 1].event_time : far;
        windows.emplace_back(ev.event_time, end);
    }

    LabeledDataset& ds = res.dataset;
    ds.labels.assign(table.row_count, 0);
    ds.timestamps.resize(table.row_count);
    for (std::size_t r = 0; r < table.row_count; ++r) {
        const Timestamp lo = table.time_at(r);
        const Timestamp hi = lo + table.period_seconds;
        ds.timestamps[r] = lo;
        for (const auto& [s, e] : windows)
            if (s < hi && e > lo) {
                ds.labels[r] = 1;
                break;
            }
    }

    ds.features.n_rows = table.row_count;
    ds.features.catalog.reserve(table.columns.size());
    ds.features.data.resize(table.row_count * table.columns.size());
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        ds.features.catalog.push_back({table.columns[c].id, FeatureFamily::original, "SCADA channel"});
    for (std::size_t r = 0; r < table.row_count; ++r)
        for (std::size_t c = 0; c < table.columns.size(); ++c)
            ds.features.at(r, c) = table.columns[c].values[r];
    ds.validate();
    return res;
}

std::pair<LabeledDataset, LabeledDataset> chronological_split(const LabeledDataset& ds,
                                                              double train_fraction) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw ArgumentError("train_fraction must lie in (0,1)");
    if (ds.size() < 2) throw ArgumentError("need at least 2 rows to split");
    const auto n = ds.size();
    const auto n_train = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(n)));

    auto slice = [&](std::size_t lo, std::size_t hi) {
        LabeledDataset out;
        out.features.catalog = ds.features.catalog;
        out.features.n_rows = hi - lo;
        const std::size_t c = ds.features.cols();
        out.features.data.assign(ds.features.data.begin() + lo * c, ds.features.data.begin() + hi * c);
        out.labels.assign(ds.labels.begin() + lo, ds.labels.begin() + hi);
        out.timestamps.assign(ds.timestamps.begin() + lo, ds.timestamps.begin() + hi);
        return out;
    };
    return {slice(0, n_train), slice(n_train, n)};
}

}  // namespace windfault
