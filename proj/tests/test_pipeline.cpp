#include "windfault/pipeline.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace windfault;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

// Small planted dataset on disk plus a pipeline config sized for fast tests.
PipelineConfig small_config(const fs::path& dir, std::uint64_t seed) {
    SynthConfig sc;
    sc.seed = seed;
    sc.n_rows = 1500;
    sc.fault_episodes = {{400, 30, 25.0}, {900, 25, 25.0}, {1300, 30, 25.0}};
    auto [table, events] = generate(sc);
    write_csv(table, (dir / "data.csv").string());
    write_status_csv(events, (dir / "status.csv").string());

    PipelineConfig cfg;
    cfg.data_csv = (dir / "data.csv").string();
    cfg.status_csv = (dir / "status.csv").string();
    cfg.construction.lag_steps = {1};
    cfg.construction.stat_windows = {3};
    cfg.construction.stats = {MovingStat::mean};
    cfg.k_per_method = 3;
    cfg.relief_samples = 64;
    cfg.wrapper.training.max_epochs = 40;
    cfg.wrapper.training.patience = 6;
    cfg.wrapper.training.restarts = 1;
    cfg.wrapper.training.learning_rate = 0.1;
    cfg.wrapper.architecture.n_hidden = 3;
    cfg.min_subset_size = 2;
    cfg.final_model.hidden_min = 3;
    cfg.final_model.hidden_max = 4;
    cfg.final_model.training.max_epochs = 60;
    cfg.final_model.training.patience = 8;
    cfg.final_model.training.restarts = 1;
    cfg.final_model.training.learning_rate = 0.1;
    cfg.master_seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("config files parse into settings, unknown keys are rejected") {
    TempDir tmp("windfault_cfg_test");
    const auto cfg_path = tmp.path / "run.conf";
    {
        std::ofstream f(cfg_path);
        f << "# comment line\n"
          << "seed = 42\n"
          << "\n"
          << "filter.k_per_method = 7\n"
          << "construction.stat_windows = 20, 30,60\n"
          << "wrapper.activation = tanh\n"
          << "split.train_fraction = 0.6\n"
          << "paths.output_dir = out\n";
    }
    const auto kv = parse_config_file(cfg_path.string());
    CHECK(kv.at("seed") == "42");
    CHECK(kv.size() == 6);

    PipelineConfig cfg;
    apply_config(cfg, kv);
    CHECK(cfg.master_seed == 42);
    CHECK(cfg.k_per_method == 7);
    CHECK(cfg.construction.stat_windows == std::vector<std::size_t>{2, 3, 6});
    CHECK(cfg.wrapper.architecture.hidden_activation == Activation::tanh_);
    CHECK(cfg.train_fraction == 0.6);
    CHECK(cfg.output_dir == "out");

    CHECK_THROWS_AS(apply_config(cfg, {{"no.such.key", "1"}}), ConfigError);
    CHECK_THROWS_AS(apply_config(cfg, {{"construction.stat_windows", "25"}}), ConfigError);
    CHECK_THROWS_AS(apply_config(cfg, {{"split.train_fraction", "1.5"}}), ConfigError);
    CHECK_THROWS_AS(parse_config_file((tmp.path / "missing.conf").string()), ConfigError);
}

TEST_CASE("config digest tracks settings, not paths") {
    PipelineConfig a, b;
    a.data_csv = "x.csv";
    b.data_csv = "y.csv";
    CHECK(config_digest(a) == config_digest(b));
    b.master_seed = 99;
    CHECK(config_digest(a) != config_digest(b));
    b = a;
    b.k_per_method += 1;
    CHECK(config_digest(a) != config_digest(b));
}

TEST_CASE("heuristic feature list is the fixed ten") {
    const auto ids = heuristic_feature_ids();
    CHECK(ids.size() == 10);
    CHECK(std::count(ids.begin(), ids.end(), "temp_gen_stator") == 1);
    CHECK(std::count(ids.begin(), ids.end(), "movvar60_temp_gen_stator") == 1);
    CHECK(std::count(ids.begin(), ids.end(), "movvar60_temp_gen_rotor") == 1);
}

TEST_CASE("pipeline end to end: artifacts exist and repeat runs are byte-identical") {
    TempDir tmp("windfault_pipe_test");
    auto cfg = small_config(tmp.path, 404);

    cfg.output_dir = (tmp.path / "run_a").string();
    const auto res_a = run_pipeline(cfg);
    cfg.output_dir = (tmp.path / "run_b").string();
    const auto res_b = run_pipeline(cfg);

    for (const char* name : {"run_info.txt", "catalog.tsv", "ranking_fisher.tsv",
                             "ranking_relief.tsv", "candidates.txt", "subset.txt", "trace.tsv",
                             "model.txt", "metrics.tsv"}) {
        INFO(name);
        CHECK(slurp(tmp.path / "run_a" / name) == slurp(tmp.path / "run_b" / name));
    }
    CHECK(res_a.best_subset.criterion == res_b.best_subset.criterion);
    CHECK(res_a.test_metrics.false_alarm_minutes == res_b.test_metrics.false_alarm_minutes);
    CHECK(res_a.best_subset.subset.size() >= cfg.min_subset_size);
    CHECK(res_a.candidates.size() <= cfg.k_per_method * 2);
}

TEST_CASE("a failing stage renames written artifacts and names itself") {
    TempDir tmp("windfault_fail_test");
    auto cfg = small_config(tmp.path, 5);
    cfg.data_csv = (tmp.path / "nonexistent.csv").string();
    cfg.output_dir = (tmp.path / "run").string();
    try {
        run_pipeline(cfg);
        FAIL("expected a stage failure");
    } catch (const StageError& e) {
        CHECK(e.stage == "ingest");
    }
    CHECK(fs::exists(tmp.path / "run" / "run_info.txt.failed"));
    CHECK(!fs::exists(tmp.path / "run" / "run_info.txt"));
}

TEST_CASE("comparison writes both runs plus a summary table") {
    TempDir tmp("windfault_cmp_test");
    auto cfg = small_config(tmp.path, 777);
    cfg.output_dir = (tmp.path / "cmp").string();
    const auto res = run_comparison(cfg);

    CHECK(fs::exists(tmp.path / "cmp" / "proposed" / "metrics.tsv"));
    CHECK(fs::exists(tmp.path / "cmp" / "heuristic" / "metrics.tsv"));
    const auto table = slurp(tmp.path / "cmp" / "comparison.tsv");
    CHECK(table.find("proposed") != std::string::npos);
    CHECK(table.find("heuristic") != std::string::npos);
    CHECK(table.find("false_alarm_minutes") != std::string::npos);
    CHECK(res.heuristic.best_subset.subset.size() <= 10);
}
