#pragma once

#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "json.hpp"

#include "fsbench/core/error.hpp"

namespace fsbench {

/// Per-original-feature importance scores plus the total ranking for one
/// method run. Ranking is always a permutation of the original features,
/// ordered by non-increasing score with ties broken by ascending feature
/// index.
struct FeatureScores {
    std::string method;
    std::string dataset;
    std::map<std::string, double> scores;
    std::vector<std::string> ranking;
    double runtime_seconds = 0.0;
    std::uint64_t seed = 0;

    nlohmann::json to_json() const {
        return nlohmann::json{{"method", method},
                              {"dataset", dataset},
                              {"seed", seed},
                              {"runtime_seconds", runtime_seconds},
                              {"scores", scores},
                              {"ranking", ranking}};
    }

    static FeatureScores from_json(const nlohmann::json& j) {
        FeatureScores out;
        out.method = j.at("method").get<std::string>();
        out.dataset = j.at("dataset").get<std::string>();
        out.seed = j.at("seed").get<std::uint64_t>();
        out.runtime_seconds = j.at("runtime_seconds").get<double>();
        out.scores = j.at("scores").get<std::map<std::string, double>>();
        out.ranking = j.at("ranking").get<std::vector<std::string>>();
        return out;
    }
};

/// Order features by score descending, ties by ascending original index.
inline std::vector<std::string> ranking_from_scores(const std::vector<std::string>& names,
                                                    const std::vector<double>& values) {
    if (names.size() != values.size())
        throw DataError("ranking_from_scores: size mismatch");
    std::vector<std::size_t> order(names.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return values[a] > values[b];
    });
    std::vector<std::string> out;
    out.reserve(names.size());
    for (const std::size_t i : order) out.push_back(names[i]);
    return out;
}

inline FeatureScores make_feature_scores(std::string method, std::string dataset,
                                         const std::vector<std::string>& names,
                                         const std::vector<double>& values,
                                         std::uint64_t seed) {
    FeatureScores fs;
    fs.method = std::move(method);
    fs.dataset = std::move(dataset);
    fs.seed = seed;
    for (std::size_t i = 0; i < names.size(); ++i) fs.scores[names[i]] = values[i];
    fs.ranking = ranking_from_scores(names, values);
    return fs;
}

/// Score for rank r (1-based) out of l features, in [1/l, 1].
inline double rank_score(std::size_t rank, std::size_t l) {
    return static_cast<double>(l - rank + 1) / static_cast<double>(l);
}

/// Scores derived from an explicit ranking order (best first).
inline FeatureScores scores_from_ranking(std::string method, std::string dataset,
                                         const std::vector<std::string>& all_names,
                                         const std::vector<std::string>& order,
                                         std::uint64_t seed) {
    if (order.size() != all_names.size())
        throw DataError("scores_from_ranking: ranking is not a permutation");
    FeatureScores fs;
    fs.method = std::move(method);
    fs.dataset = std::move(dataset);
    fs.seed = seed;
    fs.ranking = order;
    for (std::size_t r = 0; r < order.size(); ++r)
        fs.scores[order[r]] = rank_score(r + 1, order.size());
    if (fs.scores.size() != all_names.size())
        throw DataError("scores_from_ranking: duplicate feature in ranking");
    return fs;
}

} // namespace fsbench
