#include "windfault/sbfs.hpp"

#include <algorithm>
#include <fstream>

namespace windfault {

namespace {

std::vector<std::string> sorted_copy(std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

SubsetEvaluation CachedCriterion::operator()(const std::vector<std::string>& subset) {
    auto key = sorted_copy(subset);
    auto it = cache_.find(key);
    if (it != cache_.end()) {
        ++hits_;
        return it->second;
    }
    ++misses_;
    SubsetEvaluation ev = fn_(subset);
    cache_.emplace(std::move(key), ev);
    return ev;
}

SubsetEvaluation evaluate_subset(const std::vector<std::string>& subset,
                                 const LabeledDataset& train, const WrapperConfig& cfg) {
    if (subset.empty()) throw ArgumentError("subset must be non-empty");
    SubsetEvaluation ev;
    ev.subset = subset;

    DenseView view = dense_view(train.features, train.labels, subset);
    const auto boundary = static_cast<std::size_t>(
        std::floor(cfg.inner_train_fraction * static_cast<double>(train.size())));

    std::size_t n_inner = 0;
    while (n_inner < view.row_index.size() && view.row_index[n_inner] < boundary) ++n_inner;
    const std::size_t n_val = view.row_index.size() - n_inner;

    auto has_both = [&](std::size_t lo, std::size_t hi) {
        bool c0 = false, c1 = false;
        for (std::size_t i = lo; i < hi; ++i) (view.y[i] ? c1 : c0) = true;
        return c0 && c1;
    };
    if (n_inner == 0 || n_val == 0 || !has_both(0, n_inner) ||
        !has_both(n_inner, view.row_index.size())) {
        ev.degenerate = true;
        return ev;
    }

    TrainingConfig tc = cfg.training;
    std::string key;
    for (const auto& id : sorted_copy(subset)) key += id + "\x1f";
    tc.seed = fnv1a64(key, cfg.training.seed ^ 0x517cc1b727220a95ull);
    tc.decision_threshold = 0.5;

    MlpArchitecture arch = cfg.architecture;
    arch.n_inputs = subset.size();

    const Eigen::MatrixXd X_inner = view.X.topRows(static_cast<Eigen::Index>(n_inner));
    std::vector<int> y_inner(view.y.begin(), view.y.begin() + static_cast<std::ptrdiff_t>(n_inner));
    Holdout val;
    val.X = view.X.bottomRows(static_cast<Eigen::Index>(n_val));
    val.y.assign(view.y.begin() + static_cast<std::ptrdiff_t>(n_inner), view.y.end());

    TrainedModel model;
    try {
        model = windfault::train(X_inner, y_inner, view.feature_ids, arch, tc, val);
    } catch (const DataError&) {
        ev.degenerate = true;  // every restart diverged; keep the search alive
        return ev;
    }

    const Prediction pred = predict(model, val.X, view.feature_ids);
    ev.validation_confusion = confusion(pred.labels, val.y);
    const MetricsReport rep = compute_metrics(ev.validation_confusion);
    ev.criterion = rep.f_score.value_or(0.0);
    ev.restart_index = model.summary.restart_index;
    return ev;
}

SubsetCriterion make_wrapper_criterion(const LabeledDataset& train, const WrapperConfig& cfg) {
    return [&train, cfg](const std::vector<std::string>& subset) {
        return evaluate_subset(subset, train, cfg);
    };
}

std::pair<SubsetEvaluation, SearchTrace> sbfs_search(const std::vector<std::string>& candidates,
                                                     const SubsetCriterion& criterion,
                                                     std::size_t min_size) {
    if (min_size < 1) throw ArgumentError("min_size must be >= 1");
    if (candidates.size() < min_size)
        throw ArgumentError("candidate count must be >= min_size");
    {
        auto s = sorted_copy(candidates);
        if (std::adjacent_find(s.begin(), s.end()) != s.end())
            throw ArgumentError("duplicate candidate feature id");
    }

    CachedCriterion cache(criterion);
    SearchTrace trace;
    std::vector<std::string> current = candidates;

    auto record_best = [&](const SubsetEvaluation& ev) {
        auto it = trace.best_per_size.find(ev.subset.size());
        if (it == trace.best_per_size.end() || ev.criterion > it->second.criterion)
            trace.best_per_size[ev.subset.size()] = ev;
    };

    record_best(cache(current));
    std::size_t step_index = 0;

    while (current.size() > min_size) {
        // exclusion: drop the least significant feature
        SubsetEvaluation best_removal;
        std::size_t best_pos = current.size();
        for (std::size_t i = 0; i < current.size(); ++i) {
            std::vector<std::string> sub = current;
            sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(i));
            SubsetEvaluation ev = cache(sub);
            // ties drop the later (lower-ranked) candidate, keeping the head of the ranking
            if (best_pos == current.size() || ev.criterion >= best_removal.criterion) {
                best_removal = std::move(ev);
                best_pos = i;
            }
        }
        trace.steps.push_back({step_index++, SearchAction::remove, current[best_pos],
                               best_removal.criterion});
        current.erase(current.begin() + static_cast<std::ptrdiff_t>(best_pos));
        record_best(best_removal);

        // floating: re-include excluded features while that strictly improves
        // the best subset recorded at the grown size
        while (current.size() < candidates.size()) {
            SubsetEvaluation best_incl;
            std::size_t incl_pos = candidates.size();
            for (std::size_t i = 0; i < candidates.size(); ++i) {
                const auto& g = candidates[i];
                if (std::find(current.begin(), current.end(), g) != current.end()) continue;
                std::vector<std::string> sub = current;
                // keep candidate order inside the subset
                auto at = sub.begin();
                for (const auto& c : candidates) {
                    if (at != sub.end() && *at == c) ++at;
                    if (c == g) break;
                }
                sub.insert(at, g);
                SubsetEvaluation ev = cache(sub);
                if (incl_pos == candidates.size() || ev.criterion > best_incl.criterion) {
                    best_incl = std::move(ev);
                    incl_pos = i;
                }
            }
            const auto grown = current.size() + 1;
            auto it = trace.best_per_size.find(grown);
            if (it != trace.best_per_size.end() && best_incl.criterion <= it->second.criterion)
                break;
            trace.steps.push_back({step_index++, SearchAction::conditional_include,
                                   candidates[incl_pos], best_incl.criterion});
            current = best_incl.subset;
            record_best(best_incl);
        }
    }

    trace.evaluations = cache.misses();
    trace.cache_hits = cache.hits();

    const SubsetEvaluation* best = nullptr;
    for (const auto& [size, ev] : trace.best_per_size) {
        if (!best || ev.criterion > best->criterion ||
            (ev.criterion == best->criterion &&
             (ev.subset.size() < best->subset.size() ||
              (ev.subset.size() == best->subset.size() &&
               sorted_copy(ev.subset) < sorted_copy(best->subset)))))
            best = &ev;
    }
    return {*best, std::move(trace)};
}

std::pair<SubsetEvaluation, SearchTrace> sbfs_search(const std::vector<std::string>& candidates,
                                                     const LabeledDataset& train,
                                                     const WrapperConfig& cfg,
                                                     std::size_t min_size) {
    return sbfs_search(candidates, make_wrapper_criterion(train, cfg), min_size);
}

void write_subset(const std::vector<std::string>& subset, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write subset file: " + path);
    for (const auto& id : subset) out << id << '\n';
}

std::vector<std::string> read_subset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open subset file: " + path);
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) out.push_back(line);
    return out;
}

void write_trace(const SearchTrace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write trace file: " + path);
    out << "# evaluations\t" << trace.evaluations << "\tcache_hits\t" << trace.cache_hits << '\n';
    for (const auto& s : trace.steps)
        out << s.step_index << '\t'
            << (s.action == SearchAction::remove ? "remove" : "conditional_include") << '\t'
            << s.feature_id << '\t' << format_double(s.criterion) << '\n';
}

}  // namespace windfault
