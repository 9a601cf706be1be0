#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "fsbench/core/error.hpp"
#include "fsbench/core/rng.hpp"
#include "fsbench/core/timer.hpp"
#include "fsbench/data/dataset.hpp"
#include "fsbench/model/forest.hpp"
#include "fsbench/select/feature_scores.hpp"
#include "fsbench/select/lasso_path.hpp"
#include "fsbench/select/mutual_information.hpp"
#include "fsbench/select/wrappers.hpp"

namespace fsbench {

/// Seeded uniform shuffle of the original features.
inline FeatureScores random_ranking(const Dataset& ds, std::uint64_t seed) {
    const auto start = SteadyClock::now();
    const auto names = ds.feature_names();
    std::vector<std::size_t> order(names.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto rng = Rng::derive(seed, "random-selector");
    rng.shuffle(order);
    std::vector<std::string> ranked;
    for (const std::size_t f : order) ranked.push_back(names[f]);
    auto fs = scores_from_ranking("random", ds.name, names, ranked, seed);
    fs.runtime_seconds = elapsed_seconds(start);
    return fs;
}

/// Random-forest selector: fit on the (imputed) train partition, score
/// original features by grouped Gini importance.
inline FeatureScores rf_ranking(const Dataset& ds, const Split& split, std::uint64_t seed,
                                const ForestParams& params = {}) {
    const auto start = SteadyClock::now();
    const Dataset imputed = impute_missing(ds, split);
    const Matrix x_train = imputed.X.select_rows(split.train_indices);
    const auto y_train = detail::train_labels(ds, split);
    const auto model = fit_forest(x_train, y_train, params, Rng::derive(seed, "rf").next_u64());
    auto fs = forest_feature_scores(model, ds, seed);
    fs.runtime_seconds = elapsed_seconds(start);
    return fs;
}

inline const std::vector<std::string> kClassicalSelectors = {
    "mi", "mrmr", "rfe", "forward", "backward", "lasso", "rf", "random"};

inline bool is_classical_selector(const std::string& name) {
    return std::find(kClassicalSelectors.begin(), kClassicalSelectors.end(), name) !=
           kClassicalSelectors.end();
}

inline FeatureScores run_classical_selector(const std::string& name, const Dataset& ds,
                                            const Split& split, std::uint64_t seed) {
    if (name == "mi") return mutual_information_scores(ds, split, seed);
    if (name == "mrmr") return mrmr_ranking(ds, split, seed);
    if (name == "rfe") return rfe_ranking(ds, split, seed);
    if (name == "forward")
        return sequential_ranking(ds, split, SequentialDirection::forward, seed);
    if (name == "backward")
        return sequential_ranking(ds, split, SequentialDirection::backward, seed);
    if (name == "lasso") {
        const auto start = SteadyClock::now();
        auto fs = lasso_path_ranking(standardize(ds, split), split, seed);
        fs.runtime_seconds = elapsed_seconds(start);
        return fs;
    }
    if (name == "rf") return rf_ranking(ds, split, seed);
    if (name == "random") return random_ranking(ds, seed);
    std::string valid;
    for (const auto& s : kClassicalSelectors) valid += (valid.empty() ? "" : ", ") + s;
    throw ConfigError("unknown selector '" + name + "'; valid selectors: " + valid);
}

} // namespace fsbench
