#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace windfault {

// Missing cells are encoded as quiet NaN; CSV renders them as empty fields.
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

inline bool is_missing(double v) { return std::isnan(v); }

// Error categories map onto CLI exit codes: ArgumentError/ConfigError -> 2,
// DataError/ParseError -> 3.
struct ArgumentError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Seconds since the Unix epoch; SCADA rows are spaced kPeriodSeconds apart.
using Timestamp = std::int64_t;
inline constexpr std::int64_t kPeriodSeconds = 600;

Timestamp parse_timestamp(const std::string& iso);  // YYYY-MM-DDThh:mm:ss
std::string format_timestamp(Timestamp t);

struct Channel {
    std::string id;
    std::vector<double> values;
};

struct TimeSeriesTable {
    Timestamp start_time = 0;
    std::int64_t period_seconds = kPeriodSeconds;
    std::vector<Channel> columns;
    std::size_t row_count = 0;

    Timestamp time_at(std::size_t row) const {
        return start_time + static_cast<Timestamp>(row) * period_seconds;
    }
    const Channel* find(const std::string& id) const {
        for (const auto& c : columns)
            if (c.id == id) return &c;
        return nullptr;
    }
    const std::vector<double>& values_of(const std::string& id) const;
    void validate() const;  // throws DataError on invariant violation
};

struct StatusEvent {
    Timestamp event_time = 0;
    std::string code;
    bool is_generator_heating_fault = false;
};

enum class FeatureFamily { original, difference, lag, moving_stat, knowledge };

std::string family_name(FeatureFamily f);
FeatureFamily family_from_name(const std::string& s);

struct FeatureDescriptor {
    std::string id;
    FeatureFamily family = FeatureFamily::original;
    std::string provenance;
};

// Row-major matrix of real-or-missing values plus a feature catalog.
struct FeatureMatrix {
    std::vector<FeatureDescriptor> catalog;
    std::vector<double> data;  // row-major, rows() x cols()
    std::size_t n_rows = 0;

    std::size_t cols() const { return catalog.size(); }
    std::size_t rows() const { return n_rows; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols() + c]; }
    double& at(std::size_t r, std::size_t c) { return data[r * cols() + c]; }

    int column_index(const std::string& id) const;  // -1 if absent

    // Appends all columns of `other`; row counts must match, ids stay unique.
    void append_columns(const FeatureMatrix& other);
    void validate() const;
};

struct LabeledDataset {
    FeatureMatrix features;
    std::vector<int> labels;  // 0 = normal, 1 = fault
    std::vector<Timestamp> timestamps;

    std::size_t size() const { return labels.size(); }
    void validate() const;
};

// Deterministic RNG used everywhere randomness is needed. Gaussian draws go
// through an explicit Box-Muller transform so sequences do not depend on the
// standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

    std::uint64_t next_u64() {
        // xorshift64* — small, fast, reproducible across platforms
        std::uint64_t x = state_;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        state_ = x;
        return x * 0x2545f4914f6cdd1dull;
    }
    double uniform() {  // in (0,1)
        return (static_cast<double>(next_u64() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(next_u64() % n); }
    double gaussian() {
        double u1 = uniform();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

private:
    std::uint64_t state_;
};

// FNV-1a, used for subset-derived seeds and config digests.
std::uint64_t fnv1a64(const std::string& s, std::uint64_t seed = 0xcbf29ce484222325ull);

// 17-significant-digit decimal rendering; round-trips doubles exactly.
std::string format_double(double v);

}  // namespace windfault
