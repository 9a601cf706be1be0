#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>

#include "fsbench/model/forest.hpp"

#include "support.hpp"

using namespace fsbench;

namespace {

/// X with column 0 equal to y plus noise columns.
Dataset copy_feature_dataset(std::size_t n, std::size_t d, std::uint64_t seed) {
    auto rng = Rng::derive(seed, "copy-feature");
    std::vector<std::vector<double>> cols(d, std::vector<double>(n));
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = static_cast<int>(i % 2);
        cols[0][i] = static_cast<double>(y[i]);
        for (std::size_t j = 1; j < d; ++j) cols[j][i] = rng.normal();
    }
    std::vector<std::string> names;
    for (std::size_t j = 0; j < d; ++j) names.push_back("f" + std::to_string(j));
    return testsupport::dataset_from_columns(names, cols, y);
}

} // namespace

TEST_CASE("copy feature dominates importances") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto ds = copy_feature_dataset(200, 4, seed);
        const auto model = fit_forest(ds.X, ds.y, seed);
        REQUIRE(model.importances[0] >= 0.9);
    }
}

TEST_CASE("pure noise spreads importance thin") {
    double worst = 0.0;
    const std::size_t d = 10;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto ds = testsupport::make_noise_dataset(300, d, 500 + seed);
        const auto model = fit_forest(ds.X, ds.y, seed);
        worst += *std::max_element(model.importances.begin(), model.importances.end());
    }
    worst /= 20.0;
    REQUIRE(worst <= 3.0 / static_cast<double>(d));
}

TEST_CASE("forest is deterministic and importances normalize") {
    const auto ds = copy_feature_dataset(150, 5, 3);
    const auto a = fit_forest(ds.X, ds.y, 17);
    const auto b = fit_forest(ds.X, ds.y, 17);
    REQUIRE(a.importances == b.importances);
    REQUIRE(a.trees.size() == 100);
    const double total =
        std::accumulate(a.importances.begin(), a.importances.end(), 0.0);
    REQUIRE(total == Catch::Approx(1.0).margin(1e-9));
    for (const double v : a.importances) REQUIRE(v >= 0.0);

    const auto c = fit_forest(ds.X, ds.y, 18);
    REQUIRE(c.importances != a.importances);
}

TEST_CASE("row permutation leaves importances unchanged") {
    const auto ds = copy_feature_dataset(120, 4, 6);
    std::vector<std::size_t> perm(ds.n_samples());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    auto rng = Rng::derive(99, "perm");
    rng.shuffle(perm);
    const Matrix shuffled = ds.X.select_rows(perm);
    std::vector<int> y_shuffled;
    for (const std::size_t i : perm) y_shuffled.push_back(ds.y[i]);

    const auto a = fit_forest(ds.X, ds.y, 5);
    const auto b = fit_forest(shuffled, y_shuffled, 5);
    REQUIRE(a.importances == b.importances);
}

TEST_CASE("forest rejects bad inputs") {
    const auto ds = copy_feature_dataset(40, 3, 1);
    ForestParams params;
    params.n_trees = 0;
    REQUIRE_THROWS_AS(fit_forest(ds.X, ds.y, params, 1), DataError);
    REQUIRE_THROWS_AS(fit_forest(ds.X, std::vector<int>(40, 1), 1), DataError);
}

TEST_CASE("max_depth and min_leaf bound the trees") {
    const auto ds = copy_feature_dataset(200, 4, 2);
    ForestParams params;
    params.n_trees = 10;
    params.max_depth = 1;
    const auto model = fit_forest(ds.X, ds.y, params, 4);
    for (const auto& tree : model.trees)
        REQUIRE(tree.nodes.size() <= 3); // a root split and two leaves at most
}

TEST_CASE("grouped scores: single feature scores one") {
    std::vector<std::vector<double>> cols{{0, 1, 0, 1, 0, 1, 1, 0}};
    const std::vector<int> y{0, 1, 0, 1, 0, 1, 1, 0};
    const auto ds = testsupport::dataset_from_columns({"only"}, cols, y);
    const auto model = fit_forest(ds.X, ds.y, 2);
    const auto fs = forest_feature_scores(model, ds, 2);
    REQUIRE(fs.scores.at("only") == 1.0);
    REQUIRE(fs.ranking == std::vector<std::string>{"only"});
}

TEST_CASE("grouped scores sum to one and split across twin one-hot groups") {
    // two interchangeable categorical features (independent draws from the
    // same class-conditional distribution) plus a noise column; the twins
    // should share importance roughly evenly over seeds. Bitwise-identical
    // columns would instead always lose the gain tie to the lower index.
    auto rng = Rng::derive(31, "twins");
    const std::size_t n = 300;
    std::string csv = "cat_a,cat_b,noise,t\n";
    for (std::size_t i = 0; i < n; ++i) {
        const int cls = static_cast<int>(i % 2);
        auto draw = [&]() {
            return cls ? (rng.next_double() < 0.85 ? "hi" : "lo")
                       : (rng.next_double() < 0.85 ? "lo" : "hi");
        };
        csv += std::string(draw()) + "," + draw() + "," +
               testsupport::fmt_full(rng.normal()) + "," + std::to_string(cls) + "\n";
    }
    const auto ds = dataset_from_csv_text(csv, "t");

    double gap = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto model = fit_forest(ds.X, ds.y, seed);
        const auto fs = forest_feature_scores(model, ds, seed);
        double total = 0.0;
        for (const auto& [_, v] : fs.scores) total += v;
        REQUIRE(total == Catch::Approx(1.0).margin(1e-9));
        gap += std::fabs(fs.scores.at("cat_a") - fs.scores.at("cat_b"));
    }
    REQUIRE(gap / 20.0 <= 0.15);
}

TEST_CASE("duplicating a column does not inflate unrelated importances") {
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto base = copy_feature_dataset(200, 3, 40 + seed);
        // duplicate the informative column as f3
        Matrix wide(base.n_samples(), 4);
        for (std::size_t i = 0; i < base.n_samples(); ++i) {
            for (std::size_t j = 0; j < 3; ++j) wide(i, j) = base.X(i, j);
            wide(i, 3) = base.X(i, 0);
        }
        const auto narrow_model = fit_forest(base.X, base.y, seed);
        const auto wide_model = fit_forest(wide, base.y, seed);
        const double unrelated_before = narrow_model.importances[1] +
                                        narrow_model.importances[2];
        const double unrelated_after =
            wide_model.importances[1] + wide_model.importances[2];
        worst = std::max(worst, unrelated_after - unrelated_before);
    }
    REQUIRE(worst <= 0.1);
}
