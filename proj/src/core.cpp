#include "windfault/core.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <unordered_set>

namespace windfault {

namespace {

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
    static const int d[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) return 29;
    return d[m - 1];
}

std::int64_t days_from_civil(int y, int m, int d) {
    // Howard Hinnant's algorithm, valid for the proleptic Gregorian calendar
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2) / 5 + static_cast<unsigned>(d) - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yy + (m <= 2));
}

}  // namespace

Timestamp parse_timestamp(const std::string& iso) {
    int y, mo, d, h, mi, s;
    char sep;
    if (std::sscanf(iso.c_str(), "%d-%d-%d%c%d:%d:%d", &y, &mo, &d, &sep, &h, &mi, &s) != 7 ||
        (sep != 'T' && sep != ' '))
        throw ParseError("unparseable timestamp: '" + iso + "'");
    if (mo < 1 || mo > 12 || d < 1 || d > days_in_month(y, mo) || h < 0 || h > 23 ||
        mi < 0 || mi > 59 || s < 0 || s > 60)
        throw ParseError("timestamp out of range: '" + iso + "'");
    return days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + s;
}

std::string format_timestamp(Timestamp t) {
    std::int64_t days = t / 86400;
    std::int64_t sod = t % 86400;
    if (sod < 0) {
        sod += 86400;
        --days;
    }
    int y, m, d;
    civil_from_days(days, y, m, d);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02" PRId64 ":%02" PRId64 ":%02" PRId64,
                  y, m, d, sod / 3600, (sod % 3600) / 60, sod % 60);
    return buf;
}

const std::vector<double>& TimeSeriesTable::values_of(const std::string& id) const {
    const Channel* c = find(id);
    if (!c) throw ConfigError("missing source channel: " + id);
    return c->values;
}

void TimeSeriesTable::validate() const {
    if (period_seconds != kPeriodSeconds)
        throw DataError("table period must be 600 s");
    std::unordered_set<std::string> seen;
    for (const auto& c : columns) {
        if (c.id.empty()) throw DataError("empty channel id");
        if (!seen.insert(c.id).second) throw DataError("duplicate channel id: " + c.id);
        if (c.values.size() != row_count)
            throw DataError("column length mismatch for channel " + c.id);
    }
}

std::string family_name(FeatureFamily f) {
    switch (f) {
        case FeatureFamily::original: return "original";
        case FeatureFamily::difference: return "difference";
        case FeatureFamily::lag: return "lag";
        case FeatureFamily::moving_stat: return "moving_stat";
        case FeatureFamily::knowledge: return "knowledge";
    }
    return "?";
}

FeatureFamily family_from_name(const std::string& s) {
    if (s == "original") return FeatureFamily::original;
    if (s == "difference") return FeatureFamily::difference;
    if (s == "lag") return FeatureFamily::lag;
    if (s == "moving_stat") return FeatureFamily::moving_stat;
    if (s == "knowledge") return FeatureFamily::knowledge;
    throw ParseError("unknown feature family: " + s);
}

int FeatureMatrix::column_index(const std::string& id) const {
    for (std::size_t i = 0; i < catalog.size(); ++i)
        if (catalog[i].id == id) return static_cast<int>(i);
    return -1;
}

void FeatureMatrix::append_columns(const FeatureMatrix& other) {
    if (catalog.empty() && n_rows == 0) {
        *this = other;
        return;
    }
    if (other.n_rows != n_rows)
        throw ArgumentError("row count mismatch when appending feature columns");
    const std::size_t c0 = cols();
    const std::size_t c1 = other.cols();
    std::vector<double> merged(n_rows * (c0 + c1));
    for (std::size_t r = 0; r < n_rows; ++r) {
        std::copy_n(data.begin() + r * c0, c0, merged.begin() + r * (c0 + c1));
        std::copy_n(other.data.begin() + r * c1, c1, merged.begin() + r * (c0 + c1) + c0);
    }
    data = std::move(merged);
    catalog.insert(catalog.end(), other.catalog.begin(), other.catalog.end());
    validate();
}

void FeatureMatrix::validate() const {
    if (data.size() != n_rows * catalog.size())
        throw DataError("feature matrix size does not match catalog");
    std::unordered_set<std::string> seen;
    for (const auto& d : catalog)
        if (!seen.insert(d.id).second) throw DataError("duplicate feature id: " + d.id);
}

void LabeledDataset::validate() const {
    features.validate();
    if (labels.size() != features.rows() || timestamps.size() != labels.size())
        throw DataError("labels/timestamps/features length mismatch");
    for (int v : labels)
        if (v != 0 && v != 1) throw DataError("labels must be 0 or 1");
}

std::uint64_t fnv1a64(const std::string& s, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace windfault
