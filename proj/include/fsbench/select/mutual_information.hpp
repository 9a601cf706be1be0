#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "fsbench/core/error.hpp"
#include "fsbench/core/timer.hpp"
#include "fsbench/data/dataset.hpp"
#include "fsbench/select/feature_scores.hpp"

namespace fsbench {

struct DiscreteCodes {
    std::vector<int> codes; // one per train row, in train-index order
    int n_levels = 0;
};

namespace detail {

/// Type-1 empirical quantile: Q(p) = v[ceil(p*m) - 1] on sorted values.
inline double quantile_type1(const std::vector<double>& sorted, double p) {
    const std::size_t m = sorted.size();
    std::size_t idx = static_cast<std::size_t>(
        std::ceil(p * static_cast<double>(m)));
    if (idx == 0) idx = 1;
    return sorted[std::min(idx, m) - 1];
}

} // namespace detail

/// Discretize one original feature over the train partition: categorical
/// features keep their level codes, numeric features get equal-frequency
/// bins from train quantiles (duplicate edges collapsed).
inline DiscreteCodes discretize_feature(const Dataset& ds, const Split& split,
                                        std::size_t feature, int bins = 10) {
    DiscreteCodes out;
    const auto& idx = split.train_indices;
    out.codes.reserve(idx.size());

    if (ds.features[feature].kind == FeatureKind::categorical) {
        const auto& levels = ds.levels[feature];
        for (const std::size_t i : idx) {
            std::string v = ds.raw[i][feature];
            if (detail::is_missing_token(v)) v = detail::kMissingLevel;
            const auto it = std::find(levels.begin(), levels.end(), v);
            if (it == levels.end())
                throw DataError("discretize: unseen level '" + v + "'");
            out.codes.push_back(static_cast<int>(it - levels.begin()));
        }
        out.n_levels = static_cast<int>(levels.size());
        return out;
    }

    const std::size_t col = ds.column_groups[feature][0];
    std::vector<double> train_vals;
    train_vals.reserve(idx.size());
    for (const std::size_t i : idx) {
        const double v = ds.X(i, col);
        if (std::isnan(v)) throw DataError("discretize: missing values not imputed");
        train_vals.push_back(v);
    }
    std::vector<double> sorted = train_vals;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> edges;
    for (int k = 1; k < bins; ++k) {
        const double e =
            detail::quantile_type1(sorted, static_cast<double>(k) / static_cast<double>(bins));
        if (edges.empty() || e != edges.back()) edges.push_back(e);
    }
    for (const double v : train_vals) {
        int code = 0;
        for (const double e : edges)
            if (e < v) ++code;
        out.codes.push_back(code);
    }
    out.n_levels = static_cast<int>(edges.size()) + 1;
    return out;
}

/// Plug-in mutual information in nats from paired discrete codes.
inline double mutual_information(const std::vector<int>& a, int ka, const std::vector<int>& b,
                                 int kb) {
    if (a.size() != b.size()) throw DataError("mutual_information: size mismatch");
    const std::size_t n = a.size();
    if (n == 0) throw DataError("mutual_information: empty input");
    std::vector<std::size_t> joint(static_cast<std::size_t>(ka) * static_cast<std::size_t>(kb),
                                   0);
    std::vector<std::size_t> ca(static_cast<std::size_t>(ka), 0),
        cb(static_cast<std::size_t>(kb), 0);
    for (std::size_t i = 0; i < n; ++i) {
        joint[static_cast<std::size_t>(a[i]) * static_cast<std::size_t>(kb) +
              static_cast<std::size_t>(b[i])]++;
        ca[static_cast<std::size_t>(a[i])]++;
        cb[static_cast<std::size_t>(b[i])]++;
    }
    const double dn = static_cast<double>(n);
    double mi = 0.0;
    for (int i = 0; i < ka; ++i)
        for (int j = 0; j < kb; ++j) {
            const std::size_t c = joint[static_cast<std::size_t>(i) *
                                            static_cast<std::size_t>(kb) +
                                        static_cast<std::size_t>(j)];
            if (c == 0) continue;
            const double pij = static_cast<double>(c) / dn;
            mi += pij * std::log(pij * dn * dn /
                                 (static_cast<double>(ca[static_cast<std::size_t>(i)]) *
                                  static_cast<double>(cb[static_cast<std::size_t>(j)])));
        }
    return std::max(mi, 0.0);
}

namespace detail {

inline std::vector<DiscreteCodes> discretize_all(const Dataset& ds, const Split& split,
                                                 int bins = 10) {
    const Dataset imputed = impute_missing(ds, split);
    std::vector<DiscreteCodes> out;
    out.reserve(ds.n_features());
    for (std::size_t f = 0; f < ds.n_features(); ++f)
        out.push_back(discretize_feature(imputed, split, f, bins));
    return out;
}

} // namespace detail

/// Per-feature plug-in I(f; y) estimates on the train partition.
inline FeatureScores mutual_information_scores(const Dataset& ds, const Split& split,
                                               std::uint64_t seed = 0) {
    const auto start = SteadyClock::now();
    const auto codes = detail::discretize_all(ds, split);
    const auto ytr = detail::train_labels(ds, split);
    std::vector<double> values(ds.n_features());
    for (std::size_t f = 0; f < ds.n_features(); ++f)
        values[f] = mutual_information(codes[f].codes, codes[f].n_levels, ytr, 2);
    auto fs = make_feature_scores("mi", ds.name, ds.feature_names(), values, seed);
    fs.runtime_seconds = elapsed_seconds(start);
    return fs;
}

/// Greedy MID-variant mRMR: first pick maximizes relevance I(f;y), each next
/// pick maximizes I(f;y) minus mean redundancy with the already-selected set.
/// Step-value ties prefer the lower-redundancy candidate, then the lower
/// feature index. Reported scores are the step values made non-increasing
/// and rescaled to [0, 1].
inline FeatureScores mrmr_ranking(const Dataset& ds, const Split& split,
                                  std::uint64_t seed = 0) {
    const auto start = SteadyClock::now();
    const std::size_t l = ds.n_features();
    if (l == 0) throw DataError("mrmr_ranking: no features");
    const auto codes = detail::discretize_all(ds, split);
    const auto ytr = detail::train_labels(ds, split);

    std::vector<double> relevance(l);
    for (std::size_t f = 0; f < l; ++f)
        relevance[f] = mutual_information(codes[f].codes, codes[f].n_levels, ytr, 2);

    std::vector<std::vector<double>> pair_mi(l, std::vector<double>(l, -1.0));
    auto feature_mi = [&](std::size_t a, std::size_t b) {
        if (pair_mi[a][b] < 0.0) {
            pair_mi[a][b] = mutual_information(codes[a].codes, codes[a].n_levels,
                                               codes[b].codes, codes[b].n_levels);
            pair_mi[b][a] = pair_mi[a][b];
        }
        return pair_mi[a][b];
    };

    std::vector<bool> selected(l, false);
    std::vector<std::size_t> order;
    std::vector<double> step_values;
    while (order.size() < l) {
        bool have_best = false;
        std::size_t best = 0;
        double best_value = 0.0, best_red = 0.0;
        for (std::size_t f = 0; f < l; ++f) {
            if (selected[f]) continue;
            double red = 0.0;
            for (const std::size_t s : order) red += feature_mi(f, s);
            if (!order.empty()) red /= static_cast<double>(order.size());
            const double value = relevance[f] - red;
            const bool better =
                !have_best || value > best_value ||
                (value == best_value && (red < best_red || (red == best_red && f < best)));
            if (better) {
                have_best = true;
                best = f;
                best_value = value;
                best_red = red;
            }
        }
        selected[best] = true;
        order.push_back(best);
        step_values.push_back(best_value);
    }

    // Monotone repair + rescale so ranking stays consistent with scores.
    for (std::size_t i = 1; i < step_values.size(); ++i)
        step_values[i] = std::min(step_values[i], step_values[i - 1]);
    const double lo = *std::min_element(step_values.begin(), step_values.end());
    for (double& v : step_values) v -= lo;
    const double hi = *std::max_element(step_values.begin(), step_values.end());
    if (hi > 0.0)
        for (double& v : step_values) v /= hi;

    FeatureScores fs;
    fs.method = "mrmr";
    fs.dataset = ds.name;
    fs.seed = seed;
    const auto names = ds.feature_names();
    for (std::size_t r = 0; r < order.size(); ++r) {
        fs.ranking.push_back(names[order[r]]);
        fs.scores[names[order[r]]] = step_values[r];
    }
    fs.runtime_seconds = elapsed_seconds(start);
    return fs;
}

} // namespace fsbench
