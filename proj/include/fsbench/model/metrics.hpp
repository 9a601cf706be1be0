#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

#include "fsbench/core/error.hpp"

namespace fsbench {

/// Rank (Mann-Whitney) AUROC: probability a random positive outscores a
/// random negative, ties counting one half.
inline double auroc(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size()) throw DataError("auroc: size mismatch");
    std::size_t n_pos = 0, n_neg = 0;
    for (const int y : labels) (y ? n_pos : n_neg)++;
    if (n_pos == 0 || n_neg == 0) throw DataError("auroc: one class absent");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Average ranks over tied runs, accumulate positive ranks.
    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
        const double avg_rank = 0.5 * static_cast<double>(i + 1 + j); // 1-based mean of [i+1, j]
        for (std::size_t k = i; k < j; ++k)
            if (labels[order[k]]) rank_sum_pos += avg_rank;
        i = j;
    }
    const double u = rank_sum_pos -
                     0.5 * static_cast<double>(n_pos) * static_cast<double>(n_pos + 1);
    return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

} // namespace fsbench
