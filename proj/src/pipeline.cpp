#include "windfault/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace windfault {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, ',')) {
        cur = trim(cur);
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t pos;
        const auto r = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
    }
}

double parse_real(const std::string& key, const std::string& v) {
    try {
        std::size_t pos;
        const double r = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a number, got '" + v + "'");
    }
}

std::vector<std::size_t> parse_minutes_list(const std::string& key, const std::string& v) {
    std::vector<std::size_t> rows;
    for (const auto& item : split_list(v)) {
        const auto minutes = parse_u64(key, item);
        if (minutes % 10 != 0 || minutes == 0)
            throw ConfigError(key + ": values must be positive multiples of 10 minutes");
        rows.push_back(minutes / 10);
    }
    return rows;
}

// Fault episodes: start:duration:severity groups separated by ';'
std::vector<FaultEpisode> parse_episodes(const std::string& key, const std::string& v) {
    std::vector<FaultEpisode> out;
    std::istringstream in(v);
    std::string group;
    while (std::getline(in, group, ';')) {
        group = trim(group);
        if (group.empty()) continue;
        FaultEpisode ep;
        std::size_t a = group.find(':');
        std::size_t b = group.find(':', a == std::string::npos ? a : a + 1);
        if (a == std::string::npos || b == std::string::npos)
            throw ConfigError(key + ": expected start:duration:severity, got '" + group + "'");
        ep.start_row = parse_u64(key, group.substr(0, a));
        ep.duration_rows = parse_u64(key, group.substr(a + 1, b - a - 1));
        ep.severity_celsius = parse_real(key, group.substr(b + 1));
        out.push_back(ep);
    }
    return out;
}

void apply_one(PipelineConfig& cfg, const std::string& key, const std::string& value) {
    auto& c = cfg;
    if (key == "paths.data_csv") c.data_csv = value;
    else if (key == "paths.status_csv") c.status_csv = value;
    else if (key == "paths.output_dir") c.output_dir = value;
    else if (key == "construction.lag_steps") c.construction.lag_steps = parse_minutes_list(key, value);
    else if (key == "construction.stat_windows") c.construction.stat_windows = parse_minutes_list(key, value);
    else if (key == "construction.stats") {
        c.construction.stats.clear();
        for (const auto& s : split_list(value)) {
            if (s == "mean") c.construction.stats.push_back(MovingStat::mean);
            else if (s == "std") c.construction.stats.push_back(MovingStat::std);
            else if (s == "median") c.construction.stats.push_back(MovingStat::median);
            else throw ConfigError(key + ": unknown statistic '" + s + "'");
        }
    } else if (key == "construction.air_density") c.construction.knowledge.air_density = parse_real(key, value);
    else if (key == "construction.swept_area") c.construction.knowledge.swept_area = parse_real(key, value);
    else if (key == "filter.methods") {
        c.filter_methods.clear();
        for (const auto& s : split_list(value)) c.filter_methods.push_back(filter_method_from_name(s));
    } else if (key == "filter.k_per_method") c.k_per_method = parse_u64(key, value);
    else if (key == "filter.relief_samples") c.relief_samples = parse_u64(key, value);
    else if (key == "filter.relief_sampling") {
        if (value == "uniform") c.relief_sampling = ReliefSampling::uniform;
        else if (value == "stratified") c.relief_sampling = ReliefSampling::stratified;
        else throw ConfigError(key + ": expected uniform or stratified");
    } else if (key == "wrapper.learning_rate") c.wrapper.training.learning_rate = parse_real(key, value);
    else if (key == "wrapper.momentum") c.wrapper.training.momentum = parse_real(key, value);
    else if (key == "wrapper.max_epochs") c.wrapper.training.max_epochs = parse_u64(key, value);
    else if (key == "wrapper.patience") c.wrapper.training.patience = parse_u64(key, value);
    else if (key == "wrapper.restarts") c.wrapper.training.restarts = parse_u64(key, value);
    else if (key == "wrapper.class_weighting") {
        if (value == "none") c.wrapper.training.class_weighting = ClassWeighting::none;
        else if (value == "inverse_frequency") c.wrapper.training.class_weighting = ClassWeighting::inverse_frequency;
        else throw ConfigError(key + ": expected none or inverse_frequency");
    } else if (key == "wrapper.decision_threshold") c.wrapper.training.decision_threshold = parse_real(key, value);
    else if (key == "wrapper.hidden") c.wrapper.architecture.n_hidden = parse_u64(key, value);
    else if (key == "wrapper.activation") c.wrapper.architecture.hidden_activation = activation_from_name(value);
    else if (key == "wrapper.min_size") c.min_subset_size = parse_u64(key, value);
    else if (key == "final.hidden_min") c.final_model.hidden_min = parse_u64(key, value);
    else if (key == "final.hidden_max") c.final_model.hidden_max = parse_u64(key, value);
    else if (key == "final.activations") {
        c.final_model.activations.clear();
        for (const auto& s : split_list(value)) c.final_model.activations.push_back(activation_from_name(s));
    } else if (key == "final.learning_rate") c.final_model.training.learning_rate = parse_real(key, value);
    else if (key == "final.momentum") c.final_model.training.momentum = parse_real(key, value);
    else if (key == "final.max_epochs") c.final_model.training.max_epochs = parse_u64(key, value);
    else if (key == "final.patience") c.final_model.training.patience = parse_u64(key, value);
    else if (key == "final.restarts") c.final_model.training.restarts = parse_u64(key, value);
    else if (key == "final.class_weighting") {
        if (value == "none") c.final_model.training.class_weighting = ClassWeighting::none;
        else if (value == "inverse_frequency") c.final_model.training.class_weighting = ClassWeighting::inverse_frequency;
        else throw ConfigError(key + ": expected none or inverse_frequency");
    } else if (key == "final.decision_threshold") c.final_model.training.decision_threshold = parse_real(key, value);
    else if (key == "split.train_fraction") {
        const double f = parse_real(key, value);
        if (!(f > 0 && f < 1)) throw ConfigError(key + ": must lie in (0,1)");
        c.train_fraction = f;
    } else if (key == "seed") c.master_seed = parse_u64(key, value);
    else if (key == "synth.n_rows") c.synth.n_rows = parse_u64(key, value);
    else if (key == "synth.rated_power") c.synth.rated_power_kw = parse_real(key, value);
    else if (key == "synth.rotor_diameter") c.synth.rotor_diameter_m = parse_real(key, value);
    else if (key == "synth.weibull_shape") c.synth.weibull_shape = parse_real(key, value);
    else if (key == "synth.weibull_scale") c.synth.weibull_scale = parse_real(key, value);
    else if (key == "synth.noise_scale") c.synth.noise_scale = parse_real(key, value);
    else if (key == "synth.missing_probability") c.synth.missing_probability = parse_real(key, value);
    else if (key == "synth.fault_episodes") c.synth.fault_episodes = parse_episodes(key, value);
    else if (key == "synth.start_time") c.synth.start_time = parse_timestamp(value);
    else throw ConfigError("unknown configuration key: " + key);
}

std::string settings_string(const PipelineConfig& c) {
    std::ostringstream s;
    s << "construction.lag_steps=";
    for (auto v : c.construction.lag_steps) s << v << ',';
    s << "\nconstruction.stat_windows=";
    for (auto v : c.construction.stat_windows) s << v << ',';
    s << "\nconstruction.stats=";
    for (auto v : c.construction.stats) s << moving_stat_name(v) << ',';
    s << "\nconstruction.air_density=" << format_double(c.construction.knowledge.air_density);
    s << "\nconstruction.swept_area=" << format_double(c.construction.knowledge.swept_area);
    s << "\nfilter.methods=";
    for (auto m : c.filter_methods) s << filter_method_name(m) << ',';
    s << "\nfilter.k_per_method=" << c.k_per_method;
    s << "\nfilter.relief_samples=" << c.relief_samples;
    s << "\nfilter.relief_sampling=" << (c.relief_sampling == ReliefSampling::uniform ? "uniform" : "stratified");
    const auto& w = c.wrapper.training;
    s << "\nwrapper=" << format_double(w.learning_rate) << ' ' << format_double(w.momentum) << ' '
      << w.max_epochs << ' ' << w.patience << ' ' << w.restarts << ' '
      << (w.class_weighting == ClassWeighting::none ? "none" : "inverse_frequency") << ' '
      << format_double(w.decision_threshold) << ' ' << c.wrapper.architecture.n_hidden << ' '
      << activation_name(c.wrapper.architecture.hidden_activation) << ' ' << c.min_subset_size;
    const auto& f = c.final_model;
    s << "\nfinal=" << f.hidden_min << ' ' << f.hidden_max << ' ';
    for (auto a : f.activations) s << activation_name(a) << ',';
    s << ' ' << format_double(f.training.learning_rate) << ' ' << f.training.max_epochs << ' '
      << f.training.patience << ' ' << f.training.restarts << ' '
      << (f.training.class_weighting == ClassWeighting::none ? "none" : "inverse_frequency") << ' '
      << format_double(f.training.decision_threshold);
    s << "\nsplit.train_fraction=" << format_double(c.train_fraction);
    s << "\nseed=" << c.master_seed;
    return s.str();
}

// Tracks artifacts so a failing stage can mark everything written so far.
class ArtifactSet {
public:
    explicit ArtifactSet(std::string dir) : dir_(std::move(dir)) {
        fs::create_directories(dir_);
    }
    std::string path(const std::string& name) {
        written_.push_back(dir_ + "/" + name);
        return written_.back();
    }
    void mark_failed() {
        for (const auto& p : written_) {
            std::error_code ec;
            if (fs::exists(p, ec)) fs::rename(p, p + ".failed", ec);
        }
    }

private:
    std::string dir_;
    std::vector<std::string> written_;
};

enum class RunMode { proposed, heuristic };

PipelineResult run_impl(const PipelineConfig& cfg, RunMode mode, const std::string& out_dir) {
    ArtifactSet artifacts(out_dir);
    const std::string digest = config_digest(cfg);
    const std::string stamp = "# seed\t" + std::to_string(cfg.master_seed) + "\tconfig_digest\t" + digest + "\n";

    auto stage = [&](const std::string& name, auto&& fn) {
        try {
            return fn();
        } catch (const StageError&) {
            artifacts.mark_failed();
            throw;
        } catch (const std::exception& e) {
            artifacts.mark_failed();
            throw StageError(name, e.what());
        }
    };

    {
        std::ofstream info(artifacts.path("run_info.txt"));
        info << "seed\t" << cfg.master_seed << "\nconfig_digest\t" << digest << "\nmode\t"
             << (mode == RunMode::proposed ? "proposed" : "heuristic") << '\n';
    }

    TimeSeriesTable table = stage("ingest", [&] {
        if (cfg.data_csv.empty()) throw DataError("no data CSV configured");
        return ingest_csv(cfg.data_csv).table;
    });

    LabeledDataset labeled = stage("align", [&] {
        if (cfg.status_csv.empty()) throw DataError("no status CSV configured");
        return align_status_labels(table, read_status_csv(cfg.status_csv)).dataset;
    });

    LabeledDataset ds = stage("construct", [&] {
        FeatureMatrix fm = construct_all(table, cfg.construction);
        if (mode == RunMode::heuristic) {
            fm.append_columns(build_moving_variance(table, channels::temp_gen_stator, 6));
            fm.append_columns(build_moving_variance(table, channels::temp_gen_rotor, 6));
        }
        LabeledDataset out;
        out.features = std::move(fm);
        out.labels = labeled.labels;
        out.timestamps = labeled.timestamps;
        const auto path = artifacts.path("catalog.tsv");
        {
            std::ofstream f(path);
            f << stamp;
        }
        std::ofstream f(path, std::ios::app);
        for (const auto& d : out.features.catalog)
            f << d.id << '\t' << family_name(d.family) << '\t' << d.provenance << '\n';
        return out;
    });

    auto [train_ds, test_ds] = stage("split", [&] { return chronological_split(ds, cfg.train_fraction); });

    std::vector<std::string> candidates;
    if (mode == RunMode::heuristic) {
        candidates = stage("select", [&] {
            auto ids = heuristic_feature_ids();
            for (const auto& id : ids)
                if (train_ds.features.column_index(id) < 0)
                    throw ConfigError("heuristic feature not in catalog: " + id);
            write_subset(ids, artifacts.path("candidates.txt"));
            return ids;
        });
    } else {
        std::vector<FeatureRanking> rankings = stage("rank", [&] {
            std::vector<FeatureRanking> out;
            for (auto m : cfg.filter_methods) {
                FeatureRanking r;
                switch (m) {
                    case FilterMethod::fisher:
                        r = fisher_score(train_ds.features, train_ds.labels);
                        break;
                    case FilterMethod::relief: {
                        ReliefConfig rc;
                        rc.m_samples = std::min(cfg.relief_samples, train_ds.size());
                        rc.sampling = cfg.relief_sampling;
                        rc.seed = fnv1a64("relief", cfg.master_seed);
                        r = relief_score(train_ds.features, train_ds.labels, rc);
                        break;
                    }
                    case FilterMethod::mutual_info:
                        r = mutual_information_score(train_ds.features, train_ds.labels);
                        break;
                    case FilterMethod::correlation:
                        r = correlation_score(train_ds.features, train_ds.labels);
                        break;
                }
                write_ranking(r, artifacts.path("ranking_" + filter_method_name(m) + ".tsv"));
                out.push_back(std::move(r));
            }
            return out;
        });
        candidates = stage("select", [&] {
            auto ids = select_candidates(rankings, cfg.k_per_method);
            write_subset(ids, artifacts.path("candidates.txt"));
            return ids;
        });
    }

    PipelineResult result;
    result.candidates = candidates;

    std::tie(result.best_subset, result.trace) = stage("search", [&] {
        WrapperConfig wc = cfg.wrapper;
        wc.training.seed = fnv1a64(mode == RunMode::heuristic ? "wrapper-heuristic" : "wrapper",
                                   cfg.master_seed);
        auto out = sbfs_search(candidates, train_ds, wc, cfg.min_subset_size);
        write_subset(out.first.subset, artifacts.path("subset.txt"));
        const auto trace_path = artifacts.path("trace.tsv");
        {
            std::ofstream f(trace_path);
            f << stamp;
        }
        std::ofstream f(trace_path, std::ios::app);
        f << "# evaluations\t" << out.second.evaluations << "\tcache_hits\t" << out.second.cache_hits << '\n';
        for (const auto& s : out.second.steps)
            f << s.step_index << '\t'
              << (s.action == SearchAction::remove ? "remove" : "conditional_include") << '\t'
              << s.feature_id << '\t' << format_double(s.criterion) << '\n';
        return out;
    });

    result.final_model = stage("train", [&] {
        FinalModelConfig fc = cfg.final_model;
        fc.training.seed = fnv1a64("final", cfg.master_seed);
        TrainedModel m = scan_architectures(train_ds, result.best_subset.subset, fc);
        save_model(m, artifacts.path("model.txt"));
        return m;
    });

    stage("evaluate", [&] {
        DenseView view = dense_view(test_ds.features, test_ds.labels, result.best_subset.subset);
        if (view.y.empty()) throw DataError("no complete test rows for the selected subset");
        const Prediction pred = predict(result.final_model, view.X, view.feature_ids);
        result.test_confusion = confusion(pred.labels, view.y);
        result.test_metrics = compute_metrics(result.test_confusion);
        const auto path = artifacts.path("metrics.tsv");
        {
            std::ofstream f(path);
            f << stamp;
        }
        std::ofstream f(path, std::ios::app);
        write_metrics_report(result.test_metrics, f);
        f << "tp\t" << result.test_confusion.tp << "\ntn\t" << result.test_confusion.tn << "\nfp\t"
          << result.test_confusion.fp << "\nfn\t" << result.test_confusion.fn << '\n';
        return 0;
    });

    return result;
}

}  // namespace

std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

void apply_config(PipelineConfig& cfg, const std::map<std::string, std::string>& kv) {
    for (const auto& [k, v] : kv) apply_one(cfg, k, v);
}

std::string config_digest(const PipelineConfig& cfg) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(settings_string(cfg))));
    return buf;
}

std::vector<std::string> heuristic_feature_ids() {
    return {
        channels::wind_speed_min,
        channels::wind_speed_avg,
        channels::rotor_speed_min,
        channels::rotor_speed_avg,
        channels::power_min,
        channels::power_max,
        channels::temp_gen_rotor,
        channels::temp_gen_stator,
        "movvar60_temp_gen_stator",
        "movvar60_temp_gen_rotor",
    };
}

TrainedModel scan_architectures(const LabeledDataset& train,
                                const std::vector<std::string>& subset,
                                const FinalModelConfig& cfg, double inner_fraction) {
    if (cfg.hidden_min < 1 || cfg.hidden_max < cfg.hidden_min)
        throw ArgumentError("invalid hidden-size range");
    if (cfg.activations.empty()) throw ArgumentError("activation set must be non-empty");

    DenseView view = dense_view(train.features, train.labels, subset);
    const auto boundary = static_cast<std::size_t>(
        std::floor(inner_fraction * static_cast<double>(train.size())));
    std::size_t n_inner = 0;
    while (n_inner < view.row_index.size() && view.row_index[n_inner] < boundary) ++n_inner;
    const std::size_t n_val = view.row_index.size() - n_inner;
    if (n_inner == 0 || n_val == 0)
        throw DataError("architecture scan: empty inner split after dropping incomplete rows");

    const Eigen::MatrixXd X_inner = view.X.topRows(static_cast<Eigen::Index>(n_inner));
    std::vector<int> y_inner(view.y.begin(), view.y.begin() + static_cast<std::ptrdiff_t>(n_inner));
    Holdout val;
    val.X = view.X.bottomRows(static_cast<Eigen::Index>(n_val));
    val.y.assign(view.y.begin() + static_cast<std::ptrdiff_t>(n_inner), view.y.end());

    TrainedModel best;
    double best_f = -1.0;
    for (std::size_t h = cfg.hidden_min; h <= cfg.hidden_max; ++h) {
        for (auto act : cfg.activations) {
            MlpArchitecture arch{subset.size(), h, act};
            TrainingConfig tc = cfg.training;
            tc.seed = fnv1a64("arch:" + std::to_string(h) + ":" + activation_name(act),
                              cfg.training.seed);
            TrainedModel m;
            try {
                m = windfault::train(X_inner, y_inner, view.feature_ids, arch, tc, val);
            } catch (const DataError&) {
                continue;  // all restarts diverged for this architecture
            }
            const Prediction pred = predict(m, val.X, view.feature_ids);
            const MetricsReport rep = compute_metrics(confusion(pred.labels, val.y));
            const double f = rep.f_score.value_or(0.0);
            if (f > best_f) {
                best_f = f;
                best = std::move(m);
            }
        }
    }
    if (best_f < 0) throw DataError("architecture scan: training failed for every architecture");
    return best;
}

PipelineResult run_pipeline(const PipelineConfig& cfg) {
    if (cfg.output_dir.empty()) throw ConfigError("no output directory configured");
    return run_impl(cfg, RunMode::proposed, cfg.output_dir);
}

ComparisonResult run_comparison(const PipelineConfig& cfg) {
    if (cfg.output_dir.empty()) throw ConfigError("no output directory configured");
    ComparisonResult res;
    res.proposed = run_impl(cfg, RunMode::proposed, cfg.output_dir + "/proposed");
    res.heuristic = run_impl(cfg, RunMode::heuristic, cfg.output_dir + "/heuristic");

    std::ofstream f(cfg.output_dir + "/comparison.tsv");
    if (!f) throw DataError("cannot write comparison report");
    f << "# seed\t" << cfg.master_seed << "\tconfig_digest\t" << config_digest(cfg) << '\n';
    f << "method\trecall\tprecision\tf_score\tfalse_alarm_minutes\n";
    auto row = [&](const char* name, const PipelineResult& r) {
        auto val = [](const std::optional<double>& v) {
            return v ? format_double(*v) : std::string("undefined");
        };
        f << name << '\t' << val(r.test_metrics.recall) << '\t' << val(r.test_metrics.precision)
          << '\t' << val(r.test_metrics.f_score) << '\t' << r.test_metrics.false_alarm_minutes
          << '\n';
    };
    row("proposed", res.proposed);
    row("heuristic", res.heuristic);
    return res;
}

}  // namespace windfault
