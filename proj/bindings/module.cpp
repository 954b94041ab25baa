#include "windfault/pipeline.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace windfault;

namespace {

FeatureMatrix matrix_of(const std::vector<std::vector<double>>& cols) {
    if (cols.empty()) throw ArgumentError("need at least one feature column");
    FeatureMatrix m;
    m.n_rows = cols[0].size();
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (cols[j].size() != m.n_rows) throw ArgumentError("ragged feature columns");
        m.catalog.push_back({"f" + std::to_string(j), FeatureFamily::original, ""});
    }
    m.data.resize(m.n_rows * cols.size());
    for (std::size_t r = 0; r < m.n_rows; ++r)
        for (std::size_t j = 0; j < cols.size(); ++j) m.at(r, j) = cols[j][r];
    return m;
}

PipelineConfig config_from_dict(const std::map<std::string, std::string>& kv) {
    PipelineConfig cfg;
    apply_config(cfg, kv);
    return cfg;
}

py::dict metrics_dict(const MetricsReport& r, const ConfusionMatrix& cm,
                      const std::vector<std::string>& subset) {
    py::dict d;
    auto put = [&](const char* k, const std::optional<double>& v) {
        if (v)
            d[k] = *v;
        else
            d[k] = py::none();
    };
    put("accuracy", r.accuracy);
    put("specificity", r.specificity);
    put("recall", r.recall);
    put("precision", r.precision);
    put("f_score", r.f_score);
    d["false_alarm_minutes"] = r.false_alarm_minutes;
    d["tp"] = cm.tp;
    d["tn"] = cm.tn;
    d["fp"] = cm.fp;
    d["fn"] = cm.fn;
    d["subset"] = subset;
    return d;
}

}  // namespace

PYBIND11_MODULE(_windfault, m) {
    m.doc() = "wind-turbine generator heating fault detection pipeline";

    py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DataError>(m, "DataError", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_RuntimeError);

    m.def(
        "generate",
        [](std::uint64_t seed, std::size_t n_rows,
           const std::vector<std::tuple<std::size_t, std::size_t, double>>& episodes,
           const std::string& data_csv, const std::string& status_csv,
           double missing_probability) {
            SynthConfig sc;
            sc.seed = seed;
            sc.n_rows = n_rows;
            sc.missing_probability = missing_probability;
            for (const auto& [start, rows, severity] : episodes)
                sc.fault_episodes.push_back({start, rows, severity});
            auto [table, events] = generate(sc);
            write_csv(table, data_csv);
            write_status_csv(events, status_csv);
            return table.row_count;
        },
        py::arg("seed"), py::arg("n_rows"), py::arg("episodes"), py::arg("data_csv"),
        py::arg("status_csv"), py::arg("missing_probability") = 0.0,
        "Write a synthetic SCADA data/status CSV pair; returns the row count.");

    m.def(
        "fisher_scores",
        [](const std::vector<std::vector<double>>& cols, const std::vector<int>& labels) {
            return fisher_score(matrix_of(cols), labels).scores;
        },
        py::arg("columns"), py::arg("labels"));

    m.def(
        "relief_scores",
        [](const std::vector<std::vector<double>>& cols, const std::vector<int>& labels,
           std::size_t m_samples, std::uint64_t seed) {
            ReliefConfig cfg;
            cfg.m_samples = m_samples ? m_samples : labels.size();
            cfg.seed = seed;
            return relief_score(matrix_of(cols), labels, cfg).scores;
        },
        py::arg("columns"), py::arg("labels"), py::arg("m_samples") = 0, py::arg("seed") = 1);

    m.def(
        "mutual_information_scores",
        [](const std::vector<std::vector<double>>& cols, const std::vector<int>& labels) {
            return mutual_information_score(matrix_of(cols), labels).scores;
        },
        py::arg("columns"), py::arg("labels"));

    m.def(
        "correlation_scores",
        [](const std::vector<std::vector<double>>& cols, const std::vector<int>& labels) {
            return correlation_score(matrix_of(cols), labels).scores;
        },
        py::arg("columns"), py::arg("labels"));

    m.def(
        "metrics",
        [](std::uint64_t tp, std::uint64_t tn, std::uint64_t fp, std::uint64_t fn) {
            const ConfusionMatrix cm{tp, tn, fp, fn};
            return metrics_dict(compute_metrics(cm), cm, {});
        },
        py::arg("tp"), py::arg("tn"), py::arg("fp"), py::arg("fn"));

    m.def(
        "run_pipeline",
        [](const std::map<std::string, std::string>& config) {
            const auto res = run_pipeline(config_from_dict(config));
            return metrics_dict(res.test_metrics, res.test_confusion, res.best_subset.subset);
        },
        py::arg("config"),
        "Full pipeline from a config mapping (same keys as the config file); "
        "returns held-out metrics and the selected subset.");

    m.def(
        "run_comparison",
        [](const std::map<std::string, std::string>& config) {
            const auto res = run_comparison(config_from_dict(config));
            py::dict d;
            d["proposed"] = metrics_dict(res.proposed.test_metrics, res.proposed.test_confusion,
                                         res.proposed.best_subset.subset);
            d["heuristic"] = metrics_dict(res.heuristic.test_metrics, res.heuristic.test_confusion,
                                          res.heuristic.best_subset.subset);
            return d;
        },
        py::arg("config"));

    m.def("heuristic_feature_ids", &heuristic_feature_ids);
    m.def("original_channel_ids", [] { return original_channel_ids(); });
}
