#pragma once

#include "windfault/features.hpp"
#include "windfault/filter_rank.hpp"
#include "windfault/metrics.hpp"
#include "windfault/sbfs.hpp"
#include "windfault/scada.hpp"
#include "windfault/synthgen.hpp"

#include <map>

namespace windfault {

// A pipeline stage failed; `stage` names the stage for the CLI abort message.
struct StageError : std::runtime_error {
    std::string stage;
    StageError(std::string stage_, const std::string& cause)
        : std::runtime_error(stage_ + ": " + cause), stage(std::move(stage_)) {}
};

struct FinalModelConfig {
    std::size_t hidden_min = 2;
    std::size_t hidden_max = 15;
    std::vector<Activation> activations = {Activation::logistic, Activation::tanh_};
    TrainingConfig training;
};

struct PipelineConfig {
    std::string data_csv;
    std::string status_csv;
    std::string output_dir;
    ConstructionConfig construction;
    std::vector<FilterMethod> filter_methods = {FilterMethod::fisher, FilterMethod::relief};
    std::size_t k_per_method = 15;
    std::size_t relief_samples = 256;
    ReliefSampling relief_sampling = ReliefSampling::stratified;
    WrapperConfig wrapper;
    std::size_t min_subset_size = 2;
    FinalModelConfig final_model;
    double train_fraction = 0.7;
    std::uint64_t master_seed = 1;
    SynthConfig synth;  // used only by the `generate` subcommand
};

// Plain-text `key = value` configuration with dotted section prefixes.
std::map<std::string, std::string> parse_config_file(const std::string& path);
void apply_config(PipelineConfig& cfg, const std::map<std::string, std::string>& kv);
std::string config_digest(const PipelineConfig& cfg);  // hex digest of all settings

// Fixed heuristic baseline feature list (requires the two moving-variance
// columns the heuristic path constructs on top of the standard families).
std::vector<std::string> heuristic_feature_ids();

struct PipelineResult {
    std::vector<std::string> candidates;
    SubsetEvaluation best_subset;
    SearchTrace trace;
    TrainedModel final_model;
    ConfusionMatrix test_confusion;
    MetricsReport test_metrics;
};

// ingest -> align -> construct -> split -> rank -> candidates -> SBFS ->
// architecture scan -> test evaluation; persists every artifact under
// cfg.output_dir. Failures surface as StageError and any artifact written so
// far is renamed with a `.failed` suffix.
PipelineResult run_pipeline(const PipelineConfig& cfg);

struct ComparisonResult {
    PipelineResult proposed;
    PipelineResult heuristic;
};

// Proposed pipeline vs the heuristic baseline (fixed 10-feature list refined
// by a backward floating search over only those features) on identical
// splits and seeds. Writes comparison.tsv next to the other artifacts.
ComparisonResult run_comparison(const PipelineConfig& cfg);

// Architecture scan used for the final detector: hidden sizes x activations,
// picked by inner-validation F-score (ties: fewer hidden units, logistic
// before tanh).
TrainedModel scan_architectures(const LabeledDataset& train,
                                const std::vector<std::string>& subset,
                                const FinalModelConfig& cfg, double inner_fraction = 0.8);

}  // namespace windfault
