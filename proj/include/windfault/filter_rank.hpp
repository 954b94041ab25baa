#pragma once

#include "windfault/core.hpp"

namespace windfault {

enum class FilterMethod { fisher, relief, mutual_info, correlation };

std::string filter_method_name(FilterMethod m);
FilterMethod filter_method_from_name(const std::string& s);

struct FeatureRanking {
    FilterMethod method = FilterMethod::fisher;
    std::vector<std::string> ids;     // catalog order
    std::vector<double> scores;       // aligned with ids
    std::vector<std::size_t> order;   // indices into ids, best first

    std::vector<std::string> top(std::size_t k) const;
};

enum class ReliefSampling { uniform, stratified };

struct ReliefConfig {
    std::size_t m_samples = 256;  // clamped to the number of usable rows
    ReliefSampling sampling = ReliefSampling::stratified;
    std::uint64_t seed = 1;
};

// F(i) = sum_k n_k (mu_k - mu)^2 / sum_k n_k sigma_k^2 with population
// variances. Zero denominator with positive numerator scores +inf; both zero
// scores 0. Rows with a missing cell are excluded per feature.
FeatureRanking fisher_score(const FeatureMatrix& X, const std::vector<int>& y);

// Relief over min-max scaled features with Euclidean nearest hit/miss;
// missing cells are imputed to the scaled median for distance purposes.
// m_samples == row count means every row is used once, in order.
FeatureRanking relief_score(const FeatureMatrix& X, const std::vector<int>& y,
                            const ReliefConfig& cfg);

// Plug-in mutual information (nats) over a 16-bin equal-width discretization.
FeatureRanking mutual_information_score(const FeatureMatrix& X, const std::vector<int>& y);

// Absolute point-biserial correlation with the binary label.
FeatureRanking correlation_score(const FeatureMatrix& X, const std::vector<int>& y);

// Union of the top-k features of each ranking, ordered by best rank across
// methods, ties broken by catalog index.
std::vector<std::string> select_candidates(const std::vector<FeatureRanking>& rankings,
                                           std::size_t k_per_method);

void write_ranking(const FeatureRanking& r, const std::string& path);

}  // namespace windfault
