#pragma once

#include "windfault/core.hpp"

#include <iosfwd>
#include <utility>

namespace windfault {

struct IngestResult {
    TimeSeriesTable table;
    std::size_t ignored_channels = 0;  // columns present in the file but not in the schema
};

// Reads a data CSV (first column `timestamp`, empty field = missing) into a
// table at exact 10-min cadence. Gaps are filled with all-missing rows. An
// empty schema accepts every channel in the header.
IngestResult ingest_csv(const std::string& path, const std::vector<std::string>& schema = {});
IngestResult ingest_csv(std::istream& in, const std::vector<std::string>& schema = {});

void write_csv(const TimeSeriesTable& table, const std::string& path);
void write_csv(const TimeSeriesTable& table, std::ostream& out);

// Status CSV: columns timestamp,code,is_heating_fault
std::vector<StatusEvent> read_status_csv(const std::string& path);
std::vector<StatusEvent> read_status_csv(std::istream& in);
void write_status_csv(const std::vector<StatusEvent>& events, const std::string& path);

struct AlignResult {
    LabeledDataset dataset;
    std::size_t ignored_events = 0;  // events outside the table span
};

// Labels each 10-min interval [t, t+period) with 1 iff a generator-heating
// fault status is active at any instant within it. A status is active from
// its event_time until the next event (of any kind).
AlignResult align_status_labels(const TimeSeriesTable& table,
                                const std::vector<StatusEvent>& events);

// First floor(train_fraction * n) rows become the training set; no shuffling.
std::pair<LabeledDataset, LabeledDataset> chronological_split(const LabeledDataset& ds,
                                                              double train_fraction);

}  // namespace windfault
