#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "fsbench/core/error.hpp"
#include "fsbench/core/matrix.hpp"
#include "fsbench/core/rng.hpp"
#include "fsbench/model/logreg.hpp"
#include "fsbench/model/metrics.hpp"

namespace fsbench {

struct CvGridResult {
    std::vector<double> grid;
    std::vector<double> mean_scores;
    double best_c = 0.0;
    std::size_t folds = 0;
};

inline const std::vector<double> kDefaultCGrid = {1e-4, 1e-3, 1e-2, 1e-1, 1.0,
                                                  1e1,  1e2,  1e3,  1e4};

/// Stratified fold assignment: per class, shuffled indices dealt round-robin.
inline std::vector<std::vector<std::size_t>> stratified_folds(const std::vector<int>& y,
                                                              std::size_t folds,
                                                              std::uint64_t seed) {
    if (folds < 2) throw EvalError("cross-validation needs at least 2 folds");
    std::vector<std::vector<std::size_t>> out(folds);
    for (int cls = 0; cls <= 1; ++cls) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < y.size(); ++i)
            if (y[i] == cls) idx.push_back(i);
        auto rng = Rng::derive(seed, "folds", static_cast<std::uint64_t>(cls));
        rng.shuffle(idx);
        for (std::size_t i = 0; i < idx.size(); ++i) out[i % folds].push_back(idx[i]);
    }
    for (auto& f : out) std::sort(f.begin(), f.end());
    return out;
}

/// Mean validation AUROC of one (penalty, C) setting over stratified folds.
inline double cv_mean_auroc(const Matrix& x, const std::vector<int>& y,
                            const std::vector<std::vector<std::size_t>>& folds,
                            Penalty penalty, double c, double tol = 1e-6,
                            std::size_t max_iter = 1000) {
    double total = 0.0;
    for (std::size_t f = 0; f < folds.size(); ++f) {
        std::vector<std::size_t> train_idx;
        for (std::size_t g = 0; g < folds.size(); ++g)
            if (g != f) train_idx.insert(train_idx.end(), folds[g].begin(), folds[g].end());
        std::sort(train_idx.begin(), train_idx.end());
        const auto& val_idx = folds[f];

        std::vector<int> y_train, y_val;
        for (const std::size_t i : train_idx) y_train.push_back(y[i]);
        for (const std::size_t i : val_idx) y_val.push_back(y[i]);
        auto has_both = [](const std::vector<int>& v) {
            bool pos = false, neg = false;
            for (const int b : v) (b ? pos : neg) = true;
            return pos && neg;
        };
        if (!has_both(y_train) || !has_both(y_val))
            throw EvalError("degenerate cross-validation fold (single class)");

        const auto model = fit_logreg(x.select_rows(train_idx), y_train, penalty, c, tol,
                                      max_iter);
        const auto scores = decision_function(model, x.select_rows(val_idx));
        total += auroc(scores, y_val);
    }
    return total / static_cast<double>(folds.size());
}

/// Grid search over C by mean validation AUROC. Ties prefer the smaller C
/// (stronger regularization).
inline CvGridResult grid_search_cv(const Matrix& x, const std::vector<int>& y,
                                   const std::vector<double>& grid, std::size_t folds,
                                   Penalty penalty, std::uint64_t seed, double tol = 1e-6,
                                   std::size_t max_iter = 1000) {
    if (grid.empty()) throw EvalError("grid_search_cv: empty C grid");
    const auto fold_idx = stratified_folds(y, folds, seed);

    CvGridResult result;
    result.grid = grid;
    result.folds = folds;
    result.mean_scores.resize(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g)
        result.mean_scores[g] = cv_mean_auroc(x, y, fold_idx, penalty, grid[g], tol, max_iter);

    std::vector<std::size_t> order(grid.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return grid[a] < grid[b]; });
    std::size_t best = order[0];
    for (const std::size_t g : order)
        if (result.mean_scores[g] > result.mean_scores[best]) best = g;
    result.best_c = grid[best];
    return result;
}

} // namespace fsbench
