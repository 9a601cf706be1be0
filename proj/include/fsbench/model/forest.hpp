#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "fsbench/core/error.hpp"
#include "fsbench/core/matrix.hpp"
#include "fsbench/core/rng.hpp"
#include "fsbench/data/dataset.hpp"
#include "fsbench/select/feature_scores.hpp"

namespace fsbench {

struct TreeNode {
    int column = -1; // -1 for leaves
    double threshold = 0.0;
    int left = -1, right = -1;
    std::array<std::uint32_t, 2> class_counts{0, 0};
};

struct Tree {
    std::vector<TreeNode> nodes;
};

struct ForestModel {
    std::vector<Tree> trees;
    std::size_t n_trees = 0;
    std::uint64_t seed = 0;
    std::vector<double> importances; // per encoded column, sums to 1 (or all zero)
};

namespace detail {

inline double gini(std::uint32_t n0, std::uint32_t n1) {
    const double n = static_cast<double>(n0) + static_cast<double>(n1);
    if (n == 0.0) return 0.0;
    const double p0 = static_cast<double>(n0) / n;
    const double p1 = static_cast<double>(n1) / n;
    return 1.0 - p0 * p0 - p1 * p1;
}

struct SplitChoice {
    double gain = 0.0;
    std::size_t column = 0;
    double threshold = 0.0;
    bool found = false;

    bool better_than(const SplitChoice& o) const {
        if (!o.found) return found;
        if (gain != o.gain) return gain > o.gain;
        if (column != o.column) return column < o.column;
        return threshold < o.threshold;
    }
};

struct TreeBuilder {
    const Matrix& x;
    const std::vector<int>& y;
    std::size_t max_depth; // 0 = unbounded
    std::size_t min_leaf;
    std::size_t n_candidates;
    Rng rng;
    Tree tree;
    std::vector<double> decrease; // per encoded column, this tree
    double n_root = 1.0;

    TreeBuilder(const Matrix& x_, const std::vector<int>& y_, std::size_t max_depth_,
                std::size_t min_leaf_, std::size_t n_candidates_, Rng rng_)
        : x(x_), y(y_), max_depth(max_depth_), min_leaf(min_leaf_),
          n_candidates(n_candidates_), rng(rng_), decrease(x_.cols(), 0.0) {}

    SplitChoice best_split_on(const std::vector<std::uint32_t>& rows, std::size_t col,
                              std::uint32_t total0, std::uint32_t total1) const {
        std::vector<std::pair<double, int>> vals;
        vals.reserve(rows.size());
        for (const std::uint32_t r : rows) vals.emplace_back(x(r, col), y[r]);
        std::sort(vals.begin(), vals.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });

        SplitChoice best;
        const double parent = gini(total0, total1);
        const double n = static_cast<double>(rows.size());
        std::uint32_t left0 = 0, left1 = 0;
        for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
            (vals[i].second ? left1 : left0)++;
            if (vals[i].first == vals[i + 1].first) continue; // not a boundary
            const std::uint32_t nl = left0 + left1;
            const std::uint32_t nr = static_cast<std::uint32_t>(rows.size()) - nl;
            if (nl < min_leaf || nr < min_leaf) continue;
            const double wl = static_cast<double>(nl) / n;
            const double wr = static_cast<double>(nr) / n;
            const double g =
                parent - wl * gini(left0, left1) - wr * gini(total0 - left0, total1 - left1);
            SplitChoice cand{g, col, 0.5 * (vals[i].first + vals[i + 1].first), g > 0.0};
            if (cand.found && cand.better_than(best)) best = cand;
        }
        return best;
    }

    int build(const std::vector<std::uint32_t>& rows, std::size_t depth) {
        std::uint32_t c0 = 0, c1 = 0;
        for (const std::uint32_t r : rows) (y[r] ? c1 : c0)++;

        const int node_id = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back(TreeNode{-1, 0.0, -1, -1, {c0, c1}});

        const bool pure = c0 == 0 || c1 == 0;
        const bool depth_capped = max_depth > 0 && depth >= max_depth;
        if (pure || depth_capped || rows.size() < 2 * min_leaf) return node_id;

        // random subset of ceil(sqrt(d)) encoded columns
        std::vector<std::size_t> cols(x.cols());
        std::iota(cols.begin(), cols.end(), std::size_t{0});
        for (std::size_t i = 0; i < n_candidates && i < cols.size(); ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng.below(cols.size() - i));
            std::swap(cols[i], cols[j]);
        }

        SplitChoice best;
        for (std::size_t i = 0; i < n_candidates && i < cols.size(); ++i) {
            const auto cand = best_split_on(rows, cols[i], c0, c1);
            if (cand.found && cand.better_than(best)) best = cand;
        }
        if (!best.found) return node_id;

        std::vector<std::uint32_t> left_rows, right_rows;
        for (const std::uint32_t r : rows)
            (x(r, best.column) <= best.threshold ? left_rows : right_rows).push_back(r);

        const double n = static_cast<double>(rows.size());
        const double impurity_drop =
            n * gini(c0, c1) -
            [&] {
                std::uint32_t l0 = 0, l1 = 0;
                for (const std::uint32_t r : left_rows) (y[r] ? l1 : l0)++;
                const double gl = static_cast<double>(left_rows.size()) * gini(l0, l1);
                const double gr =
                    static_cast<double>(right_rows.size()) * gini(c0 - l0, c1 - l1);
                return gl + gr;
            }();
        decrease[best.column] += impurity_drop / n_root;

        tree.nodes[static_cast<std::size_t>(node_id)].column = static_cast<int>(best.column);
        tree.nodes[static_cast<std::size_t>(node_id)].threshold = best.threshold;
        const int left_id = build(left_rows, depth + 1);
        tree.nodes[static_cast<std::size_t>(node_id)].left = left_id;
        const int right_id = build(right_rows, depth + 1);
        tree.nodes[static_cast<std::size_t>(node_id)].right = right_id;
        return node_id;
    }
};

/// Rows sorted by (feature values, label) so bootstrap draws are invariant
/// under any permutation of the training rows.
inline std::vector<std::uint32_t> canonical_row_order(const Matrix& x,
                                                      const std::vector<int>& y) {
    std::vector<std::uint32_t> order(x.rows());
    std::iota(order.begin(), order.end(), std::uint32_t{0});
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        const auto ra = x.row(a), rb = x.row(b);
        for (std::size_t j = 0; j < ra.size(); ++j)
            if (ra[j] != rb[j]) return ra[j] < rb[j];
        return y[a] < y[b];
    });
    return order;
}

} // namespace detail

struct ForestParams {
    std::size_t n_trees = 100;
    std::size_t max_depth = 0; // unbounded
    std::size_t min_leaf = 1;
};

/// Breiman-style random forest on encoded columns: bootstrap resample per
/// tree, ceil(sqrt(d)) random columns per node, best Gini-decrease split,
/// ties broken by lowest column index then lowest threshold.
inline ForestModel fit_forest(const Matrix& x, const std::vector<int>& y,
                              const ForestParams& params, std::uint64_t seed) {
    if (params.n_trees == 0) throw DataError("fit_forest: n_trees must be positive");
    if (x.rows() != y.size()) throw DataError("fit_forest: X/y size mismatch");
    bool pos = false, neg = false;
    for (const int v : y) (v ? pos : neg) = true;
    if (!pos || !neg) throw DataError("fit_forest: single-class labels");

    const std::size_t n = x.rows(), d = x.cols();
    const auto n_candidates = static_cast<std::size_t>(
        std::ceil(std::sqrt(static_cast<double>(d))));
    const auto canon = detail::canonical_row_order(x, y);

    ForestModel model;
    model.n_trees = params.n_trees;
    model.seed = seed;
    model.importances.assign(d, 0.0);

    for (std::size_t t = 0; t < params.n_trees; ++t) {
        auto rng = Rng::derive(seed, "tree", t);
        std::vector<std::uint32_t> rows(n);
        for (std::size_t i = 0; i < n; ++i)
            rows[i] = canon[static_cast<std::size_t>(rng.below(n))];

        detail::TreeBuilder builder(x, y, params.max_depth, params.min_leaf, n_candidates,
                                    rng);
        builder.n_root = static_cast<double>(n);
        builder.build(rows, 0);
        model.trees.push_back(std::move(builder.tree));
        for (std::size_t j = 0; j < d; ++j) model.importances[j] += builder.decrease[j];
    }

    double total = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        model.importances[j] /= static_cast<double>(params.n_trees);
        total += model.importances[j];
    }
    if (total > 0.0)
        for (double& v : model.importances) v /= total;
    return model;
}

inline ForestModel fit_forest(const Matrix& x, const std::vector<int>& y, std::uint64_t seed) {
    return fit_forest(x, y, ForestParams{}, seed);
}

/// Original-feature scores: sum of encoded-column importances per group,
/// renormalized to sum 1.
inline std::vector<double> group_importances(const ForestModel& m,
                                             const std::vector<std::vector<std::size_t>>& groups) {
    std::vector<double> out(groups.size(), 0.0);
    double total = 0.0;
    for (std::size_t f = 0; f < groups.size(); ++f) {
        for (const std::size_t j : groups[f]) {
            if (j >= m.importances.size())
                throw DataError("group_importances: column group out of range");
            out[f] += m.importances[j];
        }
        total += out[f];
    }
    if (total > 0.0)
        for (double& v : out) v /= total;
    return out;
}

inline FeatureScores forest_feature_scores(const ForestModel& m, const Dataset& ds,
                                           std::uint64_t seed) {
    const auto values = group_importances(m, ds.column_groups);
    return make_feature_scores("rf", ds.name, ds.feature_names(), values, seed);
}

} // namespace fsbench
