#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "fsbench/core/error.hpp"
#include "fsbench/core/timer.hpp"
#include "fsbench/data/dataset.hpp"
#include "fsbench/model/logreg.hpp"
#include "fsbench/select/feature_scores.hpp"

namespace fsbench {

struct LassoPathResult {
    double lambda_max = 0.0;
    std::vector<double> lambdas;              // descending
    std::vector<std::vector<double>> weights; // per path point, encoded columns
    std::vector<int> entry_index;             // per encoded column, -1 = never enters
};

/// Smallest lambda at which the all-zero weight vector is optimal:
/// max_j (1/n) |x_j . (y - ybar)| with the intercept at its optimum.
inline double lasso_lambda_max(const Matrix& x, const std::vector<int>& y) {
    const std::size_t n = x.rows();
    double ybar = 0.0;
    for (const int v : y) ybar += v;
    ybar /= static_cast<double>(n);
    double lmax = 0.0;
    for (std::size_t j = 0; j < x.cols(); ++j) {
        double g = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            g += x(i, j) * (static_cast<double>(y[i]) - ybar);
        lmax = std::max(lmax, std::fabs(g) / static_cast<double>(n));
    }
    return lmax;
}

/// Warm-started ell-1 regularization path over a decreasing logarithmic
/// lambda grid from lambda_max down to lambda_max / 10^decades.
inline LassoPathResult lasso_logreg_path(const Matrix& x, const std::vector<int>& y,
                                         std::size_t n_points = 50, double decades = 4.0,
                                         double entry_tol = 1e-8) {
    LassoPathResult path;
    path.lambda_max = lasso_lambda_max(x, y);
    if (path.lambda_max <= 0.0) {
        // no column correlates with the target at all; an empty path keeps
        // every feature "never entered"
        path.lambda_max = std::numeric_limits<double>::min();
    }
    path.entry_index.assign(x.cols(), -1);

    std::vector<double> warm_w(x.cols(), 0.0);
    double ybar = 0.0;
    for (const int v : y) ybar += v;
    ybar /= static_cast<double>(y.size());
    double warm_b = detail::logit(ybar);

    for (std::size_t k = 0; k < n_points; ++k) {
        const double t = n_points > 1
                             ? static_cast<double>(k) / static_cast<double>(n_points - 1)
                             : 0.0;
        const double lambda = path.lambda_max * std::pow(10.0, -decades * t);
        const auto model = detail::fit_l1_cd(x, y, lambda, 1e-8, 200, &warm_w, &warm_b);
        warm_w = model.weights;
        warm_b = model.intercept;
        path.lambdas.push_back(lambda);
        path.weights.push_back(model.weights);
        for (std::size_t j = 0; j < x.cols(); ++j)
            if (path.entry_index[j] < 0 && std::fabs(model.weights[j]) > entry_tol)
                path.entry_index[j] = static_cast<int>(k);
    }
    return path;
}

/// Rank original features by the path index at which any of their encoded
/// columns first becomes nonzero; features that never enter rank last by
/// index. Requires standardized input.
inline FeatureScores lasso_path_ranking(const Dataset& ds, const Split& split,
                                        std::uint64_t seed = 0) {
    const auto start = SteadyClock::now();
    if (ds.n_features() == 0) throw DataError("lasso_path_ranking: no features");
    if (!ds.standardized)
        throw DataError("lasso_path_ranking: input must be standardized");

    const Matrix x_train = ds.X.select_rows(split.train_indices);
    const auto y_train = detail::train_labels(ds, split);
    const auto path = lasso_logreg_path(x_train, y_train);

    const std::size_t l = ds.n_features();
    std::vector<long> feature_entry(l, std::numeric_limits<long>::max());
    for (std::size_t f = 0; f < l; ++f)
        for (const std::size_t c : ds.column_groups[f])
            if (path.entry_index[c] >= 0)
                feature_entry[f] = std::min(feature_entry[f],
                                            static_cast<long>(path.entry_index[c]));

    std::vector<std::size_t> order(l);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return feature_entry[a] < feature_entry[b];
    });

    const auto names = ds.feature_names();
    std::vector<std::string> ranked;
    for (const std::size_t f : order) ranked.push_back(names[f]);
    auto fs = scores_from_ranking("lasso", ds.name, names, ranked, seed);
    fs.runtime_seconds = elapsed_seconds(start);
    return fs;
}

} // namespace fsbench
