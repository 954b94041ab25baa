#pragma once

#include "windfault/core.hpp"
#include "windfault/metrics.hpp"
#include "windfault/mlp.hpp"

#include <functional>
#include <map>

namespace windfault {

struct SubsetEvaluation {
    std::vector<std::string> subset;  // as requested, original order
    double criterion = 0.0;           // inner-validation F-score, higher is better
    bool degenerate = false;          // a split lacked a class after row dropping
    std::size_t restart_index = 0;
    ConfusionMatrix validation_confusion;
};

enum class SearchAction { remove, conditional_include };

struct SearchStep {
    std::size_t step_index = 0;
    SearchAction action = SearchAction::remove;
    std::string feature_id;
    double criterion = 0.0;
};

struct SearchTrace {
    std::vector<SearchStep> steps;
    std::map<std::size_t, SubsetEvaluation> best_per_size;
    std::size_t evaluations = 0;  // distinct subsets evaluated (cache misses)
    std::size_t cache_hits = 0;
};

// Criterion used by the search; must be a deterministic function of the
// (order-insensitive) subset.
using SubsetCriterion = std::function<SubsetEvaluation(const std::vector<std::string>&)>;

// Caching wrapper: results are keyed by the sorted subset.
class CachedCriterion {
public:
    explicit CachedCriterion(SubsetCriterion fn) : fn_(std::move(fn)) {}
    SubsetEvaluation operator()(const std::vector<std::string>& subset);
    std::size_t misses() const { return misses_; }
    std::size_t hits() const { return hits_; }

private:
    SubsetCriterion fn_;
    std::map<std::vector<std::string>, SubsetEvaluation> cache_;
    std::size_t misses_ = 0;
    std::size_t hits_ = 0;
};

struct WrapperConfig {
    TrainingConfig training;       // seed acts as the master seed
    MlpArchitecture architecture;  // fixed inside the wrapper; n_inputs is per-subset
    double inner_train_fraction = 0.8;
};

// Trains the fixed wrapper MLP on an 80/20 chronological split of `train`
// and scores the subset by inner-validation F-score at threshold 0.5. The
// per-subset seed is derived by hashing the sorted subset with the master
// seed. A degenerate split yields criterion 0 instead of an error.
SubsetEvaluation evaluate_subset(const std::vector<std::string>& subset,
                                 const LabeledDataset& train, const WrapperConfig& cfg);

// Returns a criterion closure over (train, cfg) suitable for sbfs_search.
SubsetCriterion make_wrapper_criterion(const LabeledDataset& train, const WrapperConfig& cfg);

// Classic SBFS: repeated least-significant-feature exclusion with conditional
// re-inclusions that strictly improve the best recorded subset of that size.
// Returns the global-best evaluation across all visited sizes, ties broken by
// smaller size then lexicographic feature order.
std::pair<SubsetEvaluation, SearchTrace> sbfs_search(const std::vector<std::string>& candidates,
                                                     const SubsetCriterion& criterion,
                                                     std::size_t min_size = 2);

std::pair<SubsetEvaluation, SearchTrace> sbfs_search(const std::vector<std::string>& candidates,
                                                     const LabeledDataset& train,
                                                     const WrapperConfig& cfg,
                                                     std::size_t min_size = 2);

void write_subset(const std::vector<std::string>& subset, const std::string& path);
std::vector<std::string> read_subset(const std::string& path);
void write_trace(const SearchTrace& trace, const std::string& path);

}  // namespace windfault
