#pragma once

#include "windfault/core.hpp"
#include "windfault/sbfs.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace testutil {

// Cheap deterministic stand-in for the wrapper criterion: per-feature weights
// plus pairwise interactions, squashed into [0,1]. Value depends only on the
// subset as a set.
struct SurrogateCriterion {
    std::vector<std::string> universe;
    std::map<std::string, std::size_t> pos;
    std::vector<double> weight;                  // per feature
    std::vector<std::vector<double>> interact;   // symmetric, per pair

    SurrogateCriterion(std::size_t n_features, std::uint64_t seed) {
        windfault::Rng rng(seed);
        for (std::size_t i = 0; i < n_features; ++i) {
            universe.push_back("f" + std::to_string(i));
            pos[universe.back()] = i;
            weight.push_back(rng.uniform(-1.0, 1.0));
        }
        interact.assign(n_features, std::vector<double>(n_features, 0.0));
        for (std::size_t i = 0; i < n_features; ++i)
            for (std::size_t j = i + 1; j < n_features; ++j)
                interact[i][j] = interact[j][i] = rng.uniform(-0.25, 0.25);
    }

    double raw(const std::vector<std::string>& subset) const {
        double v = 0.0;
        for (std::size_t a = 0; a < subset.size(); ++a) {
            const std::size_t i = pos.at(subset[a]);
            v += weight[i];
            for (std::size_t b = a + 1; b < subset.size(); ++b)
                v += interact[i][pos.at(subset[b])];
        }
        return v;
    }

    windfault::SubsetEvaluation operator()(const std::vector<std::string>& subset) const {
        windfault::SubsetEvaluation ev;
        ev.subset = subset;
        ev.criterion = 1.0 / (1.0 + std::exp(-raw(subset)));
        return ev;
    }
};

// Exhaustive best criterion value over all subsets of size >= min_size.
inline double exhaustive_best(const SurrogateCriterion& crit, std::size_t min_size) {
    const std::size_t n = crit.universe.size();
    double best = -1.0;
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
        std::vector<std::string> subset;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (std::size_t{1} << i)) subset.push_back(crit.universe[i]);
        if (subset.size() < min_size) continue;
        best = std::max(best, crit(subset).criterion);
    }
    return best;
}

// Plain (non-floating) sequential backward elimination; returns the best
// criterion value recorded at each visited size.
inline std::map<std::size_t, double> plain_backward(const std::vector<std::string>& candidates,
                                                    const windfault::SubsetCriterion& criterion,
                                                    std::size_t min_size) {
    std::vector<std::string> current = candidates;
    std::map<std::size_t, double> per_size;
    per_size[current.size()] = criterion(current).criterion;
    while (current.size() > min_size) {
        double best = -1.0;
        std::size_t best_pos = 0;
        for (std::size_t i = 0; i < current.size(); ++i) {
            std::vector<std::string> sub = current;
            sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(i));
            const double v = criterion(sub).criterion;
            if (v > best) {
                best = v;
                best_pos = i;
            }
        }
        current.erase(current.begin() + static_cast<std::ptrdiff_t>(best_pos));
        per_size[current.size()] = best;
    }
    return per_size;
}

}  // namespace testutil
