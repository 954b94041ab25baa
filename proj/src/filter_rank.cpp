#include "windfault/filter_rank.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

namespace windfault {

namespace {

void check_binary_labels(const FeatureMatrix& X, const std::vector<int>& y) {
    if (X.rows() != y.size()) throw ArgumentError("label count must match feature rows");
    bool has0 = false, has1 = false;
    for (int v : y) (v ? has1 : has0) = true;
    if (!has0 || !has1) throw ArgumentError("degenerate labels: only one class present");
}

std::vector<std::size_t> rank_order(const std::vector<double>& scores) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });
    return order;
}

FeatureRanking make_ranking(FilterMethod method, const FeatureMatrix& X,
                            std::vector<double> scores) {
    FeatureRanking r;
    r.method = method;
    r.ids.reserve(X.cols());
    for (const auto& d : X.catalog) r.ids.push_back(d.id);
    r.order = rank_order(scores);
    r.scores = std::move(scores);
    return r;
}

}  // namespace

std::string filter_method_name(FilterMethod m) {
    switch (m) {
        case FilterMethod::fisher: return "fisher";
        case FilterMethod::relief: return "relief";
        case FilterMethod::mutual_info: return "mutual_info";
        case FilterMethod::correlation: return "correlation";
    }
    return "?";
}

FilterMethod filter_method_from_name(const std::string& s) {
    if (s == "fisher") return FilterMethod::fisher;
    if (s == "relief") return FilterMethod::relief;
    if (s == "mutual_info") return FilterMethod::mutual_info;
    if (s == "correlation") return FilterMethod::correlation;
    throw ArgumentError("unknown filter method: " + s);
}

std::vector<std::string> FeatureRanking::top(std::size_t k) const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < std::min(k, order.size()); ++i) out.push_back(ids[order[i]]);
    return out;
}

FeatureRanking fisher_score(const FeatureMatrix& X, const std::vector<int>& y) {
    check_binary_labels(X, y);
    std::vector<double> scores(X.cols(), 0.0);
    for (std::size_t i = 0; i < X.cols(); ++i) {
        double n[2] = {0, 0}, sum[2] = {0, 0}, sq[2] = {0, 0};
        for (std::size_t r = 0; r < X.rows(); ++r) {
            const double v = X.at(r, i);
            if (is_missing(v)) continue;
            const int k = y[r];
            n[k] += 1;
            sum[k] += v;
            sq[k] += v * v;
        }
        if (n[0] == 0 || n[1] == 0) continue;  // not scorable; stays 0
        const double total = n[0] + n[1];
        const double mu = (sum[0] + sum[1]) / total;
        double num = 0, denom = 0;
        for (int k = 0; k < 2; ++k) {
            const double mu_k = sum[k] / n[k];
            const double var_k = std::max(0.0, sq[k] / n[k] - mu_k * mu_k);
            num += n[k] * (mu_k - mu) * (mu_k - mu);
            denom += n[k] * var_k;
        }
        if (denom > 0)
            scores[i] = num / denom;
        else
            scores[i] = num > 0 ? std::numeric_limits<double>::infinity() : 0.0;
    }
    return make_ranking(FilterMethod::fisher, X, std::move(scores));
}

FeatureRanking relief_score(const FeatureMatrix& X, const std::vector<int>& y,
                            const ReliefConfig& cfg) {
    check_binary_labels(X, y);
    const std::size_t n = X.rows();
    const std::size_t d = X.cols();
    std::size_t class_count[2] = {0, 0};
    for (int v : y) ++class_count[v];
    if (class_count[0] < 2 || class_count[1] < 2)
        throw ArgumentError("insufficient class support: each class needs >= 2 instances");
    if (cfg.m_samples < 1 || cfg.m_samples > n)
        throw ArgumentError("relief sample count must lie in [1, rows]");

    // min-max scale; missing cells take the scaled median
    std::vector<double> scaled(n * d);
    std::vector<double> buf;
    for (std::size_t i = 0; i < d; ++i) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (std::size_t r = 0; r < n; ++r) {
            const double v = X.at(r, i);
            if (is_missing(v)) continue;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        const double span = hi - lo;
        buf.clear();
        for (std::size_t r = 0; r < n; ++r) {
            const double v = X.at(r, i);
            if (!is_missing(v)) buf.push_back(span > 0 ? (v - lo) / span : 0.0);
        }
        double med = 0.0;
        if (!buf.empty()) {
            std::sort(buf.begin(), buf.end());
            med = buf.size() % 2 ? buf[buf.size() / 2]
                                 : 0.5 * (buf[buf.size() / 2 - 1] + buf[buf.size() / 2]);
        }
        for (std::size_t r = 0; r < n; ++r) {
            const double v = X.at(r, i);
            scaled[r * d + i] = is_missing(v) ? med : (span > 0 ? (v - lo) / span : 0.0);
        }
    }

    // sampled instance indices
    std::vector<std::size_t> samples;
    Rng rng(cfg.seed);
    if (cfg.m_samples == n) {
        samples.resize(n);
        std::iota(samples.begin(), samples.end(), 0);
    } else if (cfg.sampling == ReliefSampling::uniform) {
        std::vector<std::size_t> pool(n);
        std::iota(pool.begin(), pool.end(), 0);
        for (std::size_t i = 0; i < cfg.m_samples; ++i) {
            std::swap(pool[i], pool[i + rng.index(n - i)]);
            samples.push_back(pool[i]);
        }
    } else {
        // proportional per class, at least one from each
        std::size_t m1 = std::clamp<std::size_t>(
            static_cast<std::size_t>(std::llround(static_cast<double>(cfg.m_samples) *
                                                  static_cast<double>(class_count[1]) /
                                                  static_cast<double>(n))),
            1, std::min(cfg.m_samples - 1, class_count[1]));
        std::size_t m0 = std::min(cfg.m_samples - m1, class_count[0]);
        std::vector<std::size_t> pools[2];
        for (std::size_t r = 0; r < n; ++r) pools[y[r]].push_back(r);
        const std::size_t want[2] = {m0, m1};
        for (int k = 0; k < 2; ++k) {
            auto& pool = pools[k];
            for (std::size_t i = 0; i < want[k]; ++i) {
                std::swap(pool[i], pool[i + rng.index(pool.size() - i)]);
                samples.push_back(pool[i]);
            }
        }
        std::sort(samples.begin(), samples.end());
    }

    std::vector<double> scores(d, 0.0);
    for (std::size_t t : samples) {
        const double* xt = &scaled[t * d];
        std::size_t hit = n, miss = n;
        double hit_d = std::numeric_limits<double>::infinity();
        double miss_d = hit_d;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == t) continue;
            const double* xr = &scaled[r * d];
            double dist2 = 0;
            for (std::size_t i = 0; i < d; ++i) {
                const double diff = xt[i] - xr[i];
                dist2 += diff * diff;
            }
            if (y[r] == y[t]) {
                if (dist2 < hit_d) {
                    hit_d = dist2;
                    hit = r;
                }
            } else if (dist2 < miss_d) {
                miss_d = dist2;
                miss = r;
            }
        }
        const double* xh = &scaled[hit * d];
        const double* xm = &scaled[miss * d];
        for (std::size_t i = 0; i < d; ++i)
            scores[i] += std::abs(xt[i] - xm[i]) - std::abs(xt[i] - xh[i]);
    }
    for (double& s : scores) s *= 0.5;
    return make_ranking(FilterMethod::relief, X, std::move(scores));
}

FeatureRanking mutual_information_score(const FeatureMatrix& X, const std::vector<int>& y) {
    check_binary_labels(X, y);
    constexpr int kBins = 16;
    std::vector<double> scores(X.cols(), 0.0);
    for (std::size_t i = 0; i < X.cols(); ++i) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (std::size_t r = 0; r < X.rows(); ++r) {
            const double v = X.at(r, i);
            if (is_missing(v)) continue;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (!(hi > lo)) continue;  // constant or all-missing -> 0
        double joint[kBins][2] = {};
        double total = 0;
        for (std::size_t r = 0; r < X.rows(); ++r) {
            const double v = X.at(r, i);
            if (is_missing(v)) continue;
            int b = static_cast<int>((v - lo) / (hi - lo) * kBins);
            b = std::clamp(b, 0, kBins - 1);
            joint[b][y[r]] += 1;
            total += 1;
        }
        double py[2] = {0, 0};
        double pb[kBins] = {};
        for (int b = 0; b < kBins; ++b)
            for (int k = 0; k < 2; ++k) {
                pb[b] += joint[b][k];
                py[k] += joint[b][k];
            }
        double mi = 0;
        for (int b = 0; b < kBins; ++b)
            for (int k = 0; k < 2; ++k) {
                const double pxy = joint[b][k] / total;
                if (pxy <= 0) continue;
                mi += pxy * std::log(pxy * total * total / (pb[b] * py[k]));
            }
        scores[i] = std::max(0.0, mi);
    }
    return make_ranking(FilterMethod::mutual_info, X, std::move(scores));
}

FeatureRanking correlation_score(const FeatureMatrix& X, const std::vector<int>& y) {
    check_binary_labels(X, y);
    std::vector<double> scores(X.cols(), 0.0);
    for (std::size_t i = 0; i < X.cols(); ++i) {
        double n = 0, sx = 0, sxx = 0, sy = 0, syy = 0, sxy = 0;
        for (std::size_t r = 0; r < X.rows(); ++r) {
            const double v = X.at(r, i);
            if (is_missing(v)) continue;
            const double lbl = y[r];
            n += 1;
            sx += v;
            sxx += v * v;
            sy += lbl;
            syy += lbl * lbl;
            sxy += v * lbl;
        }
        if (n < 2) continue;
        const double vx = sxx - sx * sx / n;
        const double vy = syy - sy * sy / n;
        if (vx <= 0 || vy <= 0) continue;
        scores[i] = std::abs((sxy - sx * sy / n) / std::sqrt(vx * vy));
    }
    return make_ranking(FilterMethod::correlation, X, std::move(scores));
}

std::vector<std::string> select_candidates(const std::vector<FeatureRanking>& rankings,
                                           std::size_t k_per_method) {
    if (rankings.empty()) throw ArgumentError("at least one ranking required");
    if (k_per_method == 0) throw ArgumentError("k_per_method must be positive");
    // (best rank, catalog index) per selected feature
    std::vector<std::pair<std::size_t, std::size_t>> keys;
    std::vector<std::string> names;
    for (const auto& r : rankings) {
        const std::size_t k = std::min(k_per_method, r.order.size());
        for (std::size_t rank = 0; rank < k; ++rank) {
            const std::size_t idx = r.order[rank];
            const auto& id = r.ids[idx];
            auto it = std::find(names.begin(), names.end(), id);
            if (it == names.end()) {
                names.push_back(id);
                keys.emplace_back(rank, idx);
            } else {
                auto& key = keys[static_cast<std::size_t>(it - names.begin())];
                key.first = std::min(key.first, rank);
            }
        }
    }
    std::vector<std::size_t> order(names.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return keys[a] != keys[b] ? keys[a] < keys[b] : names[a] < names[b];
    });
    std::vector<std::string> out;
    for (auto i : order) out.push_back(names[i]);
    return out;
}

void write_ranking(const FeatureRanking& r, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write ranking: " + path);
    for (std::size_t rank = 0; rank < r.order.size(); ++rank) {
        const auto idx = r.order[rank];
        out << rank + 1 << '\t' << r.ids[idx] << '\t' << filter_method_name(r.method) << '\t'
            << format_double(r.scores[idx]) << '\n';
    }
}

}  // namespace windfault
