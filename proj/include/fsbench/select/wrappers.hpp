#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "fsbench/core/error.hpp"
#include "fsbench/core/timer.hpp"
#include "fsbench/data/dataset.hpp"
#include "fsbench/model/cv.hpp"
#include "fsbench/model/logreg.hpp"
#include "fsbench/select/feature_scores.hpp"

namespace fsbench {

namespace detail {

// Inner model for the wrapper selectors: ell-2 logistic regression with a
// fixed C=1, distinct from the grid-searched downstream evaluator.
inline constexpr double kWrapperC = 1.0;

inline std::vector<std::size_t> concat_groups(const Dataset& ds,
                                              const std::vector<std::size_t>& features) {
    std::vector<std::size_t> cols;
    for (const std::size_t f : features)
        cols.insert(cols.end(), ds.column_groups[f].begin(), ds.column_groups[f].end());
    std::sort(cols.begin(), cols.end());
    return cols;
}

} // namespace detail

/// Recursive feature elimination: repeatedly fit on the standardized
/// remaining features and drop the original feature with the smallest
/// coefficient norm (ties drop the higher index).
inline FeatureScores rfe_ranking(const Dataset& ds, const Split& split,
                                 std::uint64_t seed = 0) {
    const auto start = SteadyClock::now();
    const std::size_t l = ds.n_features();
    if (l == 0) throw DataError("rfe_ranking: no features");

    const Dataset sds = standardize(ds, split);
    const Matrix x_train = sds.X.select_rows(split.train_indices);
    const auto y_train = detail::train_labels(ds, split);

    std::vector<std::size_t> remaining(l);
    std::iota(remaining.begin(), remaining.end(), std::size_t{0});
    std::vector<std::size_t> eliminated;

    while (remaining.size() > 1) {
        const auto cols = detail::concat_groups(sds, remaining);
        LogRegModel model;
        try {
            model = fit_logreg(x_train.select_cols(cols), y_train, Penalty::l2,
                               detail::kWrapperC);
        } catch (const Error& e) {
            throw EvalError("rfe: fit failed at elimination step " +
                            std::to_string(eliminated.size() + 1) + ": " + e.what());
        }
        // Euclidean norm over each feature's encoded coefficients
        std::size_t weakest = remaining[0];
        double weakest_norm = 0.0;
        bool first = true;
        for (const std::size_t f : remaining) {
            double norm_sq = 0.0;
            for (const std::size_t c : sds.column_groups[f]) {
                const auto pos = std::lower_bound(cols.begin(), cols.end(), c) - cols.begin();
                const double w = model.weights[static_cast<std::size_t>(pos)];
                norm_sq += w * w;
            }
            const double norm = std::sqrt(norm_sq);
            if (first || norm < weakest_norm || (norm == weakest_norm && f > weakest)) {
                weakest = f;
                weakest_norm = norm;
                first = false;
            }
        }
        eliminated.push_back(weakest);
        remaining.erase(std::find(remaining.begin(), remaining.end(), weakest));
    }
    eliminated.push_back(remaining[0]); // survivor

    const auto names = ds.feature_names();
    std::vector<std::string> order;
    for (auto it = eliminated.rbegin(); it != eliminated.rend(); ++it)
        order.push_back(names[*it]);
    auto fs = scores_from_ranking("rfe", ds.name, names, order, seed);
    fs.runtime_seconds = elapsed_seconds(start);
    return fs;
}

enum class SequentialDirection { forward, backward };

/// Greedy sequential selection; the step criterion is the mean 3-fold CV
/// AUROC of the inner ell-2 model on the train partition.
inline FeatureScores sequential_ranking(const Dataset& ds, const Split& split,
                                        SequentialDirection direction,
                                        std::uint64_t seed = 0) {
    const auto start = SteadyClock::now();
    const std::size_t l = ds.n_features();
    if (l == 0) throw DataError("sequential_ranking: no features");

    const Dataset sds = standardize(ds, split);
    const Matrix x_train = sds.X.select_rows(split.train_indices);
    const auto y_train = detail::train_labels(ds, split);
    const auto folds =
        stratified_folds(y_train, 3, Rng::derive(seed, "seqcv").next_u64());

    auto subset_score = [&](const std::vector<std::size_t>& features) {
        const auto cols = detail::concat_groups(sds, features);
        return cv_mean_auroc(x_train.select_cols(cols), y_train, folds, Penalty::l2,
                             detail::kWrapperC);
    };

    const auto names = ds.feature_names();
    std::vector<std::string> order;

    if (direction == SequentialDirection::forward) {
        std::vector<std::size_t> selected;
        std::vector<bool> in(l, false);
        while (selected.size() < l) {
            std::size_t best = l;
            double best_score = 0.0;
            for (std::size_t f = 0; f < l; ++f) {
                if (in[f]) continue;
                auto trial = selected;
                trial.push_back(f);
                const double s = subset_score(trial);
                if (best == l || s > best_score) {
                    best = f;
                    best_score = s;
                }
            }
            in[best] = true;
            selected.push_back(best);
            order.push_back(names[best]);
        }
    } else {
        std::vector<std::size_t> selected(l);
        std::iota(selected.begin(), selected.end(), std::size_t{0});
        std::vector<std::size_t> removed;
        while (selected.size() > 1) {
            std::size_t best = l;
            double best_score = 0.0;
            for (const std::size_t f : selected) {
                std::vector<std::size_t> trial;
                for (const std::size_t g : selected)
                    if (g != f) trial.push_back(g);
                const double s = subset_score(trial);
                // ties remove the higher index, keeping lower indices ranked better
                if (best == l || s > best_score || (s == best_score && f > best)) {
                    best = f;
                    best_score = s;
                }
            }
            removed.push_back(best);
            selected.erase(std::find(selected.begin(), selected.end(), best));
        }
        removed.push_back(selected[0]);
        for (auto it = removed.rbegin(); it != removed.rend(); ++it)
            order.push_back(names[*it]);
    }

    const std::string method =
        direction == SequentialDirection::forward ? "forward" : "backward";
    auto fs = scores_from_ranking(method, ds.name, names, order, seed);
    fs.runtime_seconds = elapsed_seconds(start);
    return fs;
}

} // namespace fsbench
