#pragma once

#include "windfault/core.hpp"

#include <optional>

namespace windfault {

struct ConfusionMatrix {
    std::uint64_t tp = 0, tn = 0, fp = 0, fn = 0;
    std::uint64_t total() const { return tp + tn + fp + fn; }
};

// Zero-denominator metrics carry no value rather than a silent 0 or 1.
struct MetricsReport {
    std::optional<double> accuracy;
    std::optional<double> specificity;
    std::optional<double> recall;
    std::optional<double> precision;
    std::optional<double> f_score;
    std::uint64_t false_alarm_minutes = 0;
};

ConfusionMatrix confusion(const std::vector<int>& pred, const std::vector<int>& truth);

// accuracy = (tp+tn)/total, specificity = tn/(fp+tn), recall = tp/(tp+fn),
// precision = tp/(tp+fp), f = 2tp/(2tp+fp+fn);
// false_alarm_minutes = fp * sample_period_minutes.
MetricsReport compute_metrics(const ConfusionMatrix& cm, std::uint64_t sample_period_minutes = 10);

void write_metrics_report(const MetricsReport& r, std::ostream& out);
void write_metrics_report(const MetricsReport& r, const std::string& path);

}  // namespace windfault
