#include "windfault/pipeline.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace wf = windfault;

namespace {

// Every pipeline config key is exposed as a same-named command-line flag;
// flag values override the config file.
const std::vector<std::string> kConfigKeys = {
    "paths.data_csv", "paths.status_csv", "paths.output_dir",
    "construction.lag_steps", "construction.stat_windows", "construction.stats",
    "construction.air_density", "construction.swept_area",
    "filter.methods", "filter.k_per_method", "filter.relief_samples", "filter.relief_sampling",
    "wrapper.learning_rate", "wrapper.momentum", "wrapper.max_epochs", "wrapper.patience",
    "wrapper.restarts", "wrapper.class_weighting", "wrapper.decision_threshold",
    "wrapper.hidden", "wrapper.activation", "wrapper.min_size",
    "final.hidden_min", "final.hidden_max", "final.activations", "final.learning_rate",
    "final.momentum", "final.max_epochs", "final.patience", "final.restarts",
    "split.train_fraction", "seed",
    "synth.n_rows", "synth.rated_power", "synth.rotor_diameter", "synth.weibull_shape",
    "synth.weibull_scale", "synth.noise_scale", "synth.missing_probability",
    "synth.fault_episodes", "synth.start_time",
};

struct ConfigOptions {
    std::string config_path;
    std::map<std::string, std::string> overrides;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "plain-text key = value configuration file");
        for (const auto& key : kConfigKeys) {
            cmd->add_option_function<std::string>(
                "--" + key, [this, key](const std::string& v) { overrides[key] = v; },
                "override config key " + key);
        }
    }
    wf::PipelineConfig resolve() const {
        wf::PipelineConfig cfg;
        if (!config_path.empty()) wf::apply_config(cfg, wf::parse_config_file(config_path));
        wf::apply_config(cfg, overrides);
        return cfg;
    }
};

wf::LabeledDataset load_labeled_features(const std::string& features_csv,
                                         const std::string& status_csv) {
    const auto table = wf::ingest_csv(features_csv).table;
    auto ds = wf::align_status_labels(table, wf::read_status_csv(status_csv)).dataset;
    return ds;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"wind-turbine generator heating fault detection pipeline"};
    app.require_subcommand(1);

    ConfigOptions cfg_opts;

    // generate
    auto* gen = app.add_subcommand("generate", "write synthetic SCADA data and status CSVs");
    std::string gen_data = "data.csv", gen_status = "status.csv";
    gen->add_option("--out-data", gen_data, "output data CSV path");
    gen->add_option("--out-status", gen_status, "output status CSV path");

    // construct
    auto* con = app.add_subcommand("construct", "build the feature matrix from a data CSV");
    std::string con_data, con_out = "features.csv", con_catalog = "catalog.tsv";
    con->add_option("--data", con_data, "input data CSV")->required();
    con->add_option("--out", con_out, "output feature CSV");
    con->add_option("--catalog", con_catalog, "output catalog sidecar");

    // rank
    auto* rnk = app.add_subcommand("rank", "score features with a filter method");
    std::string rnk_features, rnk_status, rnk_method = "fisher", rnk_out = "ranking.tsv";
    rnk->add_option("--features", rnk_features, "feature CSV (from construct)")->required();
    rnk->add_option("--status", rnk_status, "status CSV")->required();
    rnk->add_option("--method", rnk_method, "fisher|relief|mutual_info|correlation");
    rnk->add_option("--out", rnk_out, "output ranking file");

    // select
    auto* sel = app.add_subcommand("select", "SBFS feature-subset search");
    std::string sel_features, sel_status, sel_out = "subset.txt", sel_trace = "trace.tsv";
    std::vector<std::string> sel_rankings;
    std::string sel_candidates;
    sel->add_option("--features", sel_features, "feature CSV")->required();
    sel->add_option("--status", sel_status, "status CSV")->required();
    sel->add_option("--ranking", sel_rankings, "ranking file(s); top-k union forms candidates");
    sel->add_option("--candidates", sel_candidates, "explicit candidate list file");
    sel->add_option("--out-subset", sel_out, "output subset file");
    sel->add_option("--out-trace", sel_trace, "output trace file");

    // train
    auto* trn = app.add_subcommand("train", "architecture scan + final model training");
    std::string trn_features, trn_status, trn_subset, trn_out = "model.txt";
    trn->add_option("--features", trn_features, "feature CSV")->required();
    trn->add_option("--status", trn_status, "status CSV")->required();
    trn->add_option("--subset", trn_subset, "feature subset file")->required();
    trn->add_option("--out-model", trn_out, "output model file");

    // evaluate
    auto* evl = app.add_subcommand("evaluate", "score a model and print the metrics report");
    std::string evl_features, evl_status, evl_model, evl_out = "metrics.tsv";
    evl->add_option("--features", evl_features, "feature CSV")->required();
    evl->add_option("--status", evl_status, "status CSV")->required();
    evl->add_option("--model", evl_model, "model file")->required();
    evl->add_option("--out", evl_out, "output report file");

    // pipeline / compare
    auto* pip = app.add_subcommand("pipeline", "run the full proposed pipeline");
    auto* cmp = app.add_subcommand("compare", "proposed pipeline vs heuristic baseline");

    for (auto* cmd : {gen, con, rnk, sel, trn, evl, pip, cmp}) cfg_opts.attach(cmd);

    CLI11_PARSE(app, argc, argv);

    if (gen->parsed()) {
        wf::PipelineConfig cfg = cfg_opts.resolve();
        cfg.synth.seed = cfg.master_seed;
        auto [table, events] = wf::generate(cfg.synth);
        wf::write_csv(table, gen_data);
        wf::write_status_csv(events, gen_status);
        std::cout << "rows\t" << table.row_count << "\nstatus_events\t" << events.size() << '\n';
        return 0;
    }
    if (con->parsed()) {
        wf::PipelineConfig cfg = cfg_opts.resolve();
        const auto table = wf::ingest_csv(con_data).table;
        const auto fm = wf::construct_all(table, cfg.construction);
        std::vector<wf::Timestamp> stamps(table.row_count);
        for (std::size_t r = 0; r < table.row_count; ++r) stamps[r] = table.time_at(r);
        wf::write_feature_csv(fm, stamps, con_out);
        wf::write_catalog(fm, con_catalog);
        std::cout << "features\t" << fm.cols() << "\nrows\t" << fm.rows() << '\n';
        return 0;
    }
    if (rnk->parsed()) {
        wf::PipelineConfig cfg = cfg_opts.resolve();
        const auto ds = load_labeled_features(rnk_features, rnk_status);
        wf::FeatureRanking r;
        switch (wf::filter_method_from_name(rnk_method)) {
            case wf::FilterMethod::fisher:
                r = wf::fisher_score(ds.features, ds.labels);
                break;
            case wf::FilterMethod::relief: {
                wf::ReliefConfig rc;
                rc.m_samples = std::min(cfg.relief_samples, ds.size());
                rc.sampling = cfg.relief_sampling;
                rc.seed = wf::fnv1a64("relief", cfg.master_seed);
                r = wf::relief_score(ds.features, ds.labels, rc);
                break;
            }
            case wf::FilterMethod::mutual_info:
                r = wf::mutual_information_score(ds.features, ds.labels);
                break;
            case wf::FilterMethod::correlation:
                r = wf::correlation_score(ds.features, ds.labels);
                break;
        }
        wf::write_ranking(r, rnk_out);
        std::cout << "ranked\t" << r.ids.size() << '\n';
        return 0;
    }
    if (sel->parsed()) {
        wf::PipelineConfig cfg = cfg_opts.resolve();
        const auto ds = load_labeled_features(sel_features, sel_status);
        std::vector<std::string> candidates;
        if (!sel_candidates.empty()) {
            candidates = wf::read_subset(sel_candidates);
        } else if (!sel_rankings.empty()) {
            // ranking files: rank<TAB>id<TAB>method<TAB>score
            std::vector<wf::FeatureRanking> rankings;
            for (const auto& path : sel_rankings) {
                std::ifstream in(path);
                if (!in) throw wf::DataError("cannot open ranking file: " + path);
                wf::FeatureRanking r;
                std::string line;
                while (std::getline(in, line)) {
                    std::istringstream t(line);
                    std::string rank, id, method, score;
                    if (std::getline(t, rank, '\t') && std::getline(t, id, '\t') &&
                        std::getline(t, method, '\t') && std::getline(t, score)) {
                        r.method = wf::filter_method_from_name(method);
                        r.order.push_back(r.ids.size());
                        r.ids.push_back(id);
                        r.scores.push_back(std::stod(score));
                    }
                }
                rankings.push_back(std::move(r));
            }
            candidates = wf::select_candidates(rankings, cfg.k_per_method);
        } else {
            throw wf::ArgumentError("select needs --candidates or at least one --ranking");
        }
        wf::WrapperConfig wc = cfg.wrapper;
        wc.training.seed = wf::fnv1a64("wrapper", cfg.master_seed);
        auto [best, trace] = wf::sbfs_search(candidates, ds, wc, cfg.min_subset_size);
        wf::write_subset(best.subset, sel_out);
        wf::write_trace(trace, sel_trace);
        std::cout << "subset_size\t" << best.subset.size() << "\ncriterion\t"
                  << wf::format_double(best.criterion) << '\n';
        return 0;
    }
    if (trn->parsed()) {
        wf::PipelineConfig cfg = cfg_opts.resolve();
        const auto ds = load_labeled_features(trn_features, trn_status);
        const auto subset = wf::read_subset(trn_subset);
        wf::FinalModelConfig fc = cfg.final_model;
        fc.training.seed = wf::fnv1a64("final", cfg.master_seed);
        const auto model = wf::scan_architectures(ds, subset, fc);
        wf::save_model(model, trn_out);
        std::cout << "hidden\t" << model.arch.n_hidden << "\nactivation\t"
                  << wf::activation_name(model.arch.hidden_activation) << "\nval_loss\t"
                  << wf::format_double(model.summary.best_loss) << '\n';
        return 0;
    }
    if (evl->parsed()) {
        const auto ds = load_labeled_features(evl_features, evl_status);
        const auto model = wf::load_model(evl_model);
        const auto view = wf::dense_view(ds.features, ds.labels, model.feature_ids);
        if (view.y.empty()) throw wf::DataError("no complete rows for the model's features");
        const auto pred = wf::predict(model, view.X, view.feature_ids);
        const auto report = wf::compute_metrics(wf::confusion(pred.labels, view.y));
        wf::write_metrics_report(report, std::cout);
        wf::write_metrics_report(report, evl_out);
        return 0;
    }
    if (pip->parsed()) {
        const auto result = wf::run_pipeline(cfg_opts.resolve());
        std::cout << "subset_size\t" << result.best_subset.subset.size() << '\n';
        wf::write_metrics_report(result.test_metrics, std::cout);
        return 0;
    }
    if (cmp->parsed()) {
        const auto result = wf::run_comparison(cfg_opts.resolve());
        auto line = [](const char* name, const wf::PipelineResult& r) {
            auto v = [](const std::optional<double>& x) {
                return x ? wf::format_double(*x) : std::string("undefined");
            };
            std::cout << name << '\t' << v(r.test_metrics.recall) << '\t'
                      << v(r.test_metrics.precision) << '\t' << v(r.test_metrics.f_score) << '\t'
                      << r.test_metrics.false_alarm_minutes << '\n';
        };
        std::cout << "method\trecall\tprecision\tf_score\tfalse_alarm_minutes\n";
        line("proposed", result.proposed);
        line("heuristic", result.heuristic);
        return 0;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const wf::StageError& e) {
        std::cerr << "pipeline stage failed: " << e.what() << '\n';
        return 4;
    } catch (const wf::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const wf::ArgumentError& e) {
        std::cerr << "argument error: " << e.what() << '\n';
        return 2;
    } catch (const wf::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return 3;
    } catch (const wf::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
