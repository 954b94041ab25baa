#include "windfault/metrics.hpp"

#include <fstream>
#include <ostream>

namespace windfault {

ConfusionMatrix confusion(const std::vector<int>& pred, const std::vector<int>& truth) {
    if (pred.size() != truth.size()) throw ArgumentError("prediction/truth length mismatch");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (pred[i] != 0 && pred[i] != 1) throw ArgumentError("predictions must be binary");
        if (truth[i] != 0 && truth[i] != 1) throw ArgumentError("truth labels must be binary");
        if (truth[i]) {
            pred[i] ? ++cm.tp : ++cm.fn;
        } else {
            pred[i] ? ++cm.fp : ++cm.tn;
        }
    }
    return cm;
}

MetricsReport compute_metrics(const ConfusionMatrix& cm, std::uint64_t sample_period_minutes) {
    if (cm.total() == 0) throw ArgumentError("confusion matrix is empty");
    if (sample_period_minutes == 0) throw ArgumentError("sample period must be positive");
    auto ratio = [](std::uint64_t num, std::uint64_t denom) -> std::optional<double> {
        if (denom == 0) return std::nullopt;
        return static_cast<double>(num) / static_cast<double>(denom);
    };
    MetricsReport r;
    r.accuracy = ratio(cm.tp + cm.tn, cm.total());
    r.specificity = ratio(cm.tn, cm.fp + cm.tn);
    r.recall = ratio(cm.tp, cm.tp + cm.fn);
    r.precision = ratio(cm.tp, cm.tp + cm.fp);
    r.f_score = ratio(2 * cm.tp, 2 * cm.tp + cm.fp + cm.fn);
    r.false_alarm_minutes = cm.fp * sample_period_minutes;
    return r;
}

void write_metrics_report(const MetricsReport& r, std::ostream& out) {
    auto line = [&](const char* name, const std::optional<double>& v) {
        out << name << '\t' << (v ? format_double(*v) : "undefined") << '\n';
    };
    line("accuracy", r.accuracy);
    line("specificity", r.specificity);
    line("recall", r.recall);
    line("precision", r.precision);
    line("f_score", r.f_score);
    out << "false_alarm_minutes\t" << r.false_alarm_minutes << '\n';
}

void write_metrics_report(const MetricsReport& r, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write metrics report: " + path);
    write_metrics_report(r, out);
}

}  // namespace windfault
