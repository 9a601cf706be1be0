#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "fsbench/core/error.hpp"
#include "fsbench/core/timer.hpp"
#include "fsbench/data/dataset.hpp"
#include "fsbench/model/cv.hpp"
#include "fsbench/model/logreg.hpp"
#include "fsbench/model/metrics.hpp"
#include "fsbench/select/feature_scores.hpp"
#include "fsbench/select/lasso_path.hpp"

namespace fsbench {

struct EvalPoint {
    double proportion = 0.0;
    std::size_t k = 0;
    double auroc_value = 0.0;
    double best_c = 0.0;
    std::vector<std::string> selected; // top-k prefix in ranking order
    bool degenerate = false;
};

struct EvalCurve {
    std::string method;
    std::string dataset;
    std::vector<EvalPoint> points;
    double selector_runtime_seconds = 0.0;
    double eval_runtime_seconds = 0.0;
    std::uint64_t seed = 0;
    bool lasso_special = false;
};

struct EvalOptions {
    std::vector<double> c_grid = kDefaultCGrid;
    std::size_t cv_folds = 5;
    double tol = 1e-6;
    std::size_t max_iter = 1000;
};

/// k for a proportion of t tenths, in exact integer arithmetic:
/// round-half-up(t/10 * n), floored at 1.
inline std::size_t k_for_tenths(int tenths, std::size_t n_features) {
    const std::size_t k =
        (static_cast<std::size_t>(tenths) * n_features + 5) / 10;
    return std::max<std::size_t>(k, 1);
}

/// The 10%..100% proportion grid with duplicate k values collapsed. Interior
/// duplicates keep the smallest proportion; the full-feature point always
/// keeps proportion 1.0 so every curve ends at the common baseline.
inline std::vector<std::pair<double, std::size_t>> proportions_to_k(std::size_t n_features) {
    if (n_features < 1) throw DataError("proportions_to_k: need at least one feature");
    std::vector<std::pair<double, std::size_t>> out;
    for (int t = 1; t <= 10; ++t) {
        const std::size_t k = k_for_tenths(t, n_features);
        if (!out.empty() && out.back().second == k) continue;
        out.emplace_back(static_cast<double>(t) / 10.0, k);
    }
    out.back().first = 1.0; // the full-feature baseline always sits at p = 1.0
    return out;
}

/// Evaluate a top-k selection: restrict to the selected features' encoded
/// columns, standardize on train, grid-search C with stratified CV, refit on
/// the full train partition and score AUROC on the held-out test rows.
inline EvalPoint evaluate_selection(const Dataset& ds, const Split& split,
                                    const std::vector<std::string>& ranking, std::size_t k,
                                    const EvalOptions& options, std::uint64_t seed,
                                    Penalty downstream = Penalty::l2) {
    if (k == 0 || k > ds.n_features())
        throw EvalError("evaluate_selection: k out of range");
    if (ranking.size() != ds.n_features())
        throw EvalError("evaluate_selection: ranking is not a full permutation");

    EvalPoint point;
    point.k = k;
    point.selected.assign(ranking.begin(), ranking.begin() + static_cast<long>(k));

    // Columns in ascending index order, independent of ranking order, so the
    // full-feature point is bit-identical across methods.
    std::vector<std::size_t> feature_idx;
    for (const auto& name : point.selected) feature_idx.push_back(ds.feature_index(name));
    std::sort(feature_idx.begin(), feature_idx.end());
    std::vector<std::size_t> cols;
    for (const std::size_t f : feature_idx)
        cols.insert(cols.end(), ds.column_groups[f].begin(), ds.column_groups[f].end());
    std::sort(cols.begin(), cols.end());

    const Dataset sds = standardize(ds, split);
    const Matrix x_train = sds.X.select_rows(split.train_indices).select_cols(cols);
    const Matrix x_test = sds.X.select_rows(split.test_indices).select_cols(cols);
    std::vector<int> y_train, y_test;
    for (const std::size_t i : split.train_indices) y_train.push_back(ds.y[i]);
    for (const std::size_t i : split.test_indices) y_test.push_back(ds.y[i]);

    bool any_varying = false;
    for (std::size_t j = 0; j < x_train.cols() && !any_varying; ++j)
        for (std::size_t i = 1; i < x_train.rows(); ++i)
            if (x_train(i, j) != x_train(0, j)) { any_varying = true; break; }
    if (!any_varying) {
        point.auroc_value = 0.5;
        point.degenerate = true;
        return point;
    }

    const auto cv = grid_search_cv(x_train, y_train, options.c_grid, options.cv_folds,
                                   downstream, Rng::derive(seed, "evalcv").next_u64(),
                                   options.tol, options.max_iter);
    point.best_c = cv.best_c;
    const auto model = fit_logreg(x_train, y_train, downstream, cv.best_c, options.tol,
                                  options.max_iter);
    point.auroc_value = auroc(decision_function(model, x_test), y_test);
    return point;
}

/// Sweep the proportion grid for one method's ranking. Selector runtime is
/// carried from the FeatureScores record; evaluation runtime is measured here.
inline EvalCurve run_curve(const Dataset& ds, const Split& split, const FeatureScores& scores,
                           const EvalOptions& options = {}) {
    const auto start = SteadyClock::now();
    EvalCurve curve;
    curve.method = scores.method;
    curve.dataset = ds.name;
    curve.seed = scores.seed;
    curve.selector_runtime_seconds = scores.runtime_seconds;
    for (const auto& [p, k] : proportions_to_k(ds.n_features())) {
        auto point = evaluate_selection(ds, split, scores.ranking, k, options, scores.seed);
        point.proportion = p;
        curve.points.push_back(std::move(point));
    }
    curve.eval_runtime_seconds = elapsed_seconds(start);
    return curve;
}

/// LASSO gets its own downstream model: an ell-1 logistic regression
/// grid-searched at every k over the path ranking.
inline EvalCurve run_lasso_curve(const Dataset& ds, const Split& split,
                                 const EvalOptions& options = {}, std::uint64_t seed = 0) {
    const auto scores = [&] {
        const auto t0 = SteadyClock::now();
        auto fs = lasso_path_ranking(standardize(ds, split), split, seed);
        fs.runtime_seconds = elapsed_seconds(t0);
        return fs;
    }();

    const auto start = SteadyClock::now();
    EvalCurve curve;
    curve.method = scores.method;
    curve.dataset = ds.name;
    curve.seed = seed;
    curve.lasso_special = true;
    curve.selector_runtime_seconds = scores.runtime_seconds;
    for (const auto& [p, k] : proportions_to_k(ds.n_features())) {
        auto point = evaluate_selection(ds, split, scores.ranking, k, options, seed,
                                        Penalty::l1);
        point.proportion = p;
        curve.points.push_back(std::move(point));
    }
    curve.eval_runtime_seconds = elapsed_seconds(start);
    return curve;
}

// ---------------------------------------------------------------------------

struct AggregateReport {
    std::vector<std::string> methods;     // sorted
    std::vector<std::string> datasets;    // sorted
    std::vector<double> proportions;      // common to every dataset, ascending
    std::map<std::string, std::vector<double>> mean_auroc;   // per method
    std::map<std::string, double> summary;                   // mean over proportions
    std::map<std::string, double> selector_runtime_seconds;  // total per method
    // selection paths at 10%/20%/30%: dataset -> method -> proportion label -> features
    std::map<std::string, std::map<std::string, std::map<std::string, std::vector<std::string>>>>
        paths;
};

/// Cross-dataset aggregation. Means are computed only over proportions
/// present for every (method, dataset) cell being compared.
inline AggregateReport aggregate(const std::vector<EvalCurve>& curves) {
    if (curves.empty()) throw EvalError("aggregate: no curves");

    std::set<std::string> method_set, dataset_set;
    for (const auto& c : curves) {
        method_set.insert(c.method);
        dataset_set.insert(c.dataset);
    }

    // All curves of one dataset must share one proportion grid.
    std::map<std::string, std::vector<double>> dataset_props;
    for (const auto& c : curves) {
        std::vector<double> props;
        for (const auto& pt : c.points) props.push_back(pt.proportion);
        auto [it, inserted] = dataset_props.emplace(c.dataset, props);
        if (!inserted && it->second != props)
            throw EvalError("aggregate: inconsistent proportions across curves for dataset " +
                            c.dataset);
    }

    AggregateReport report;
    report.methods.assign(method_set.begin(), method_set.end());
    report.datasets.assign(dataset_set.begin(), dataset_set.end());

    std::set<double> common(dataset_props.begin()->second.begin(),
                            dataset_props.begin()->second.end());
    for (const auto& [ds, props] : dataset_props) {
        std::set<double> here(props.begin(), props.end());
        std::set<double> kept;
        std::set_intersection(common.begin(), common.end(), here.begin(), here.end(),
                              std::inserter(kept, kept.begin()));
        common = std::move(kept);
    }
    report.proportions.assign(common.begin(), common.end());

    for (const auto& m : report.methods) {
        std::vector<double> means;
        for (const double p : report.proportions) {
            double total = 0.0;
            std::size_t count = 0;
            for (const auto& c : curves) {
                if (c.method != m) continue;
                for (const auto& pt : c.points)
                    if (pt.proportion == p) {
                        total += pt.auroc_value;
                        ++count;
                    }
            }
            if (count != report.datasets.size())
                throw EvalError("aggregate: method " + m + " is missing a cell at p=" +
                                std::to_string(p));
            means.push_back(total / static_cast<double>(count));
        }
        report.mean_auroc[m] = means;
        double s = 0.0;
        for (const double v : means) s += v;
        report.summary[m] = means.empty() ? 0.0 : s / static_cast<double>(means.size());

        double runtime = 0.0;
        for (const auto& c : curves)
            if (c.method == m) runtime += c.selector_runtime_seconds;
        report.selector_runtime_seconds[m] = runtime;
    }

    // Fig-7-style selection paths over the low proportions.
    for (const auto& c : curves) {
        std::size_t n_features = 0;
        for (const auto& pt : c.points) n_features = std::max(n_features, pt.k);
        for (const int t : {1, 2, 3}) {
            const std::size_t k = k_for_tenths(t, n_features);
            for (const auto& pt : c.points) {
                if (pt.k != k) continue;
                std::vector<std::string> prefix(pt.selected.begin(),
                                                pt.selected.begin() +
                                                    static_cast<long>(k));
                const std::string label = "0." + std::to_string(t);
                report.paths[c.dataset][c.method][label] = std::move(prefix);
                break;
            }
        }
    }
    return report;
}

inline nlohmann::json curve_to_json(const EvalCurve& c) {
    nlohmann::json points = nlohmann::json::array();
    for (const auto& p : c.points) {
        points.push_back({{"proportion", p.proportion},
                          {"k", p.k},
                          {"auroc", p.auroc_value},
                          {"best_c", p.best_c},
                          {"selected", p.selected},
                          {"degenerate", p.degenerate}});
    }
    return nlohmann::json{{"method", c.method},
                          {"dataset", c.dataset},
                          {"seed", c.seed},
                          {"lasso_special", c.lasso_special},
                          {"selector_runtime_seconds", c.selector_runtime_seconds},
                          {"eval_runtime_seconds", c.eval_runtime_seconds},
                          {"points", points}};
}

inline EvalCurve curve_from_json(const nlohmann::json& j) {
    EvalCurve c;
    c.method = j.at("method").get<std::string>();
    c.dataset = j.at("dataset").get<std::string>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.lasso_special = j.at("lasso_special").get<bool>();
    c.selector_runtime_seconds = j.at("selector_runtime_seconds").get<double>();
    c.eval_runtime_seconds = j.at("eval_runtime_seconds").get<double>();
    for (const auto& p : j.at("points")) {
        EvalPoint pt;
        pt.proportion = p.at("proportion").get<double>();
        pt.k = p.at("k").get<std::size_t>();
        pt.auroc_value = p.at("auroc").get<double>();
        pt.best_c = p.at("best_c").get<double>();
        pt.selected = p.at("selected").get<std::vector<std::string>>();
        pt.degenerate = p.at("degenerate").get<bool>();
        c.points.push_back(std::move(pt));
    }
    return c;
}

inline nlohmann::json report_to_json(const AggregateReport& r) {
    return nlohmann::json{{"methods", r.methods},
                          {"datasets", r.datasets},
                          {"proportions", r.proportions},
                          {"mean_auroc", r.mean_auroc},
                          {"summary", r.summary},
                          {"selector_runtime_seconds", r.selector_runtime_seconds},
                          {"paths", r.paths}};
}

/// CSV matrix: one row per method, one column per proportion, plus the
/// mean-over-proportions summary.
inline std::string report_to_csv(const AggregateReport& r) {
    std::string out = "method";
    char buf[32];
    for (const double p : r.proportions) {
        std::snprintf(buf, sizeof(buf), ",p=%.2g", p);
        out += buf;
    }
    out += ",mean\n";
    for (const auto& m : r.methods) {
        out += csv_quote(m);
        for (const double v : r.mean_auroc.at(m)) {
            std::snprintf(buf, sizeof(buf), ",%.6f", v);
            out += buf;
        }
        std::snprintf(buf, sizeof(buf), ",%.6f\n", r.summary.at(m));
        out += buf;
    }
    return out;
}

} // namespace fsbench
