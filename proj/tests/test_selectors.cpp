#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <set>

#include "fsbench/select/registry.hpp"

#include "support.hpp"

using namespace fsbench;

namespace {

Split full_train_split(const Dataset& ds) {
    Split split;
    split.train_indices.resize(ds.n_samples());
    std::iota(split.train_indices.begin(), split.train_indices.end(), std::size_t{0});
    return split;
}

/// Numeric feature equal to the target plus noise columns, alternating labels.
Dataset copy_of_y_dataset(std::size_t n, std::size_t d, std::uint64_t seed) {
    auto rng = Rng::derive(seed, "sel-copy");
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

// ---------------------------------------------------------------------------
// mutual information

TEST_CASE("MI of a binary copy of a balanced target is ln 2") {
    const auto ds = copy_of_y_dataset(100, 2, 1);
    const auto split = stratified_split(ds, 0.2, 1); // train is 40/40 balanced
    const auto fs = mutual_information_scores(ds, split);
    REQUIRE(fs.scores.at("f0") == Catch::Approx(std::log(2.0)).margin(1e-9));
    REQUIRE(fs.ranking[0] == "f0");
    REQUIRE(fs.runtime_seconds > 0.0);
}

TEST_CASE("MI of a perfectly balanced independent feature is zero") {
    std::vector<std::vector<double>> cols{{0, 1, 0, 1, 0, 1, 0, 1}};
    const std::vector<int> y{0, 0, 1, 1, 0, 0, 1, 1};
    const auto ds = testsupport::dataset_from_columns({"f"}, cols, y);
    const auto fs = mutual_information_scores(ds, full_train_split(ds));
    REQUIRE(fs.scores.at("f") == 0.0);
}

TEST_CASE("MI matches the direct-summation oracle on a 3-level feature") {
    // joint counts: level x class
    const std::vector<std::vector<double>> counts{{10, 5}, {3, 12}, {7, 7}};
    std::string csv = "f,t\n";
    const char* levels[] = {"a", "b", "c"};
    for (std::size_t a = 0; a < 3; ++a)
        for (int cls = 0; cls < 2; ++cls)
            for (int r = 0; r < static_cast<int>(counts[a][static_cast<std::size_t>(cls)]); ++r)
                csv += std::string(levels[a]) + "," + std::to_string(cls) + "\n";
    const auto ds = dataset_from_csv_text(csv, "t");
    const auto fs = mutual_information_scores(ds, full_train_split(ds));
    const double expected = testsupport::mi_direct_summation(counts);
    REQUIRE(fs.scores.at("f") == Catch::Approx(expected).margin(1e-12));
}

TEST_CASE("pairwise MI is symmetric") {
    auto rng = Rng::derive(17, "mi-sym");
    std::vector<int> a(500), b(500);
    for (std::size_t i = 0; i < 500; ++i) {
        a[i] = static_cast<int>(rng.below(4));
        b[i] = (a[i] + static_cast<int>(rng.below(3))) % 3;
    }
    REQUIRE(mutual_information(a, 4, b, 3) ==
            Catch::Approx(mutual_information(b, 3, a, 4)).margin(1e-12));
}

// ---------------------------------------------------------------------------
// mRMR

TEST_CASE("mRMR starts at the MI argmax and penalizes duplicates") {
    auto rng = Rng::derive(23, "mrmr");
    const std::size_t n = 200;
    std::vector<std::vector<double>> cols(3, std::vector<double>(n));
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = static_cast<int>(i % 2);
        cols[0][i] = static_cast<double>(y[i]); // f1 = y
        cols[1][i] = static_cast<double>(y[i]); // f2 = y (duplicate)
        cols[2][i] = rng.normal();              // f3 = noise
    }
    const auto ds = testsupport::dataset_from_columns({"f1", "f2", "f3"}, cols, y);
    const auto split = stratified_split(ds, 0.2, 2);

    const auto mi = mutual_information_scores(ds, split);
    const auto fs = mrmr_ranking(ds, split);
    REQUIRE(fs.ranking[0] == mi.ranking[0]);
    REQUIRE(fs.ranking == std::vector<std::string>{"f1", "f3", "f2"});

    // reported scores rescaled to [0,1] and consistent with the order
    REQUIRE(fs.scores.at(fs.ranking[0]) == 1.0);
    for (std::size_t r = 1; r < fs.ranking.size(); ++r)
        REQUIRE(fs.scores.at(fs.ranking[r]) <= fs.scores.at(fs.ranking[r - 1]));
}

TEST_CASE("mRMR with a single feature ranks it first") {
    std::vector<std::vector<double>> cols{{0, 1, 0, 1, 1, 0}};
    const std::vector<int> y{0, 1, 0, 1, 1, 0};
    const auto ds = testsupport::dataset_from_columns({"solo"}, cols, y);
    const auto fs = mrmr_ranking(ds, full_train_split(ds));
    REQUIRE(fs.ranking == std::vector<std::string>{"solo"});
}

// ---------------------------------------------------------------------------
// RFE and sequential selection

TEST_CASE("RFE keeps a copy of the target until the end") {
    int successes = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto ds = copy_of_y_dataset(200, 4, 100 + seed);
        const auto split = stratified_split(ds, 0.2, seed);
        const auto fs = rfe_ranking(ds, split, seed);
        successes += fs.ranking[0] == "f0";
    }
    REQUIRE(successes >= 19);
}

TEST_CASE("single-feature RFE and sequential rankings are trivial") {
    std::vector<std::vector<double>> cols{{0, 1, 0, 1, 1, 0, 0, 1}};
    const std::vector<int> y{0, 1, 0, 1, 1, 0, 0, 1};
    const auto ds = testsupport::dataset_from_columns({"solo"}, cols, y);
    const auto split = stratified_split(ds, 0.25, 4);
    const auto rfe = rfe_ranking(ds, split);
    REQUIRE(rfe.ranking == std::vector<std::string>{"solo"});
    REQUIRE(rfe.scores.at("solo") == 1.0);

    const auto fwd = sequential_ranking(ds, split, SequentialDirection::forward);
    const auto bwd = sequential_ranking(ds, split, SequentialDirection::backward);
    REQUIRE(fwd.ranking == bwd.ranking);
    REQUIRE(fwd.scores == bwd.scores);
}

TEST_CASE("forward selection picks the copy of the target first") {
    int successes = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto ds = copy_of_y_dataset(150, 3, 200 + seed);
        const auto split = stratified_split(ds, 0.2, seed);
        const auto fs = sequential_ranking(ds, split, SequentialDirection::forward, seed);
        successes += fs.ranking[0] == "f0";
    }
    REQUIRE(successes >= 19);
}

TEST_CASE("backward selection ranks the copy of the target first") {
    const auto ds = copy_of_y_dataset(150, 3, 7);
    const auto split = stratified_split(ds, 0.2, 7);
    const auto fs = sequential_ranking(ds, split, SequentialDirection::backward, 7);
    REQUIRE(fs.ranking[0] == "f0");
    REQUIRE(fs.method == "backward");
}

// ---------------------------------------------------------------------------
// LASSO path

TEST_CASE("coefficients are exactly zero at and above lambda_max") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto ds = testsupport::make_logistic_dataset(
            {.n = 80, .d = 4, .informative_weights = {1.5, -1.0}, .seed = 300 + seed});
        const auto split = full_train_split(ds);
        const auto sds = standardize(ds, split);
        const double lmax = lasso_lambda_max(sds.X, ds.y);
        for (const double factor : {1.0, 1.5, 10.0}) {
            const auto m = detail::fit_l1_cd(sds.X, ds.y, lmax * factor, 1e-8, 200);
            for (const double w : m.weights) REQUIRE(w == 0.0);
        }
    }
}

TEST_CASE("lambda_max matches the closed form for centered single-feature data") {
    auto rng = Rng::derive(9, "lmax");
    const std::size_t n = 64;
    std::vector<double> x(n);
    std::vector<int> y(n);
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = rng.normal();
        mean += x[i];
        y[i] = rng.next_double() < 0.5;
    }
    y[0] = 0;
    y[1] = 1;
    mean /= static_cast<double>(n);
    for (double& v : x) v -= mean;

    Matrix xm(n, 1);
    double ybar = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        xm(i, 0) = x[i];
        ybar += y[i];
    }
    ybar /= static_cast<double>(n);
    double expected = 0.0;
    for (std::size_t i = 0; i < n; ++i) expected += x[i] * (y[i] - ybar);
    expected = std::fabs(expected) / static_cast<double>(n);
    REQUIRE(lasso_lambda_max(xm, y) == Catch::Approx(expected).margin(1e-9));
}

TEST_CASE("a copy of the target enters the path first") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto ds = copy_of_y_dataset(120, 4, 400 + seed);
        const auto split = stratified_split(ds, 0.2, seed);
        const auto fs = lasso_path_ranking(standardize(ds, split), split, seed);
        REQUIRE(fs.ranking[0] == "f0");
    }
}

TEST_CASE("lasso path requires standardized input") {
    const auto ds = copy_of_y_dataset(60, 2, 5);
    const auto split = stratified_split(ds, 0.2, 5);
    REQUIRE_THROWS_AS(lasso_path_ranking(ds, split), DataError);
}

// ---------------------------------------------------------------------------
// random selector

TEST_CASE("random ranking is a seeded shuffle") {
    const auto ds = copy_of_y_dataset(40, 5, 6);
    const auto a = random_ranking(ds, 11);
    const auto b = random_ranking(ds, 11);
    REQUIRE(a.ranking == b.ranking);
    REQUIRE(random_ranking(ds, 12).ranking != a.ranking);

    std::map<std::string, int> first_counts;
    for (std::uint64_t seed = 0; seed < 1000; ++seed)
        first_counts[random_ranking(ds, seed).ranking[0]]++;
    for (const auto& f : ds.feature_names()) {
        const double frequency = first_counts[f] / 1000.0;
        REQUIRE(frequency == Catch::Approx(1.0 / 5.0).margin(0.05));
    }
}

// ---------------------------------------------------------------------------
// cross-selector invariants

TEST_CASE("every selector emits a consistent permutation with positive runtime") {
    // mixed numeric/categorical dataset keeps the column-group path honest
    auto rng = Rng::derive(77, "mixed");
    std::string csv = "num1,cat1,num2,t\n";
    for (std::size_t i = 0; i < 120; ++i) {
        const int cls = static_cast<int>(i % 2);
        const double v1 = rng.normal() + (cls ? 1.2 : 0.0);
        const char* level = rng.next_double() < (cls ? 0.7 : 0.3) ? "hi" : "lo";
        csv += testsupport::fmt_full(v1) + "," + level + "," +
               testsupport::fmt_full(rng.normal()) + "," + std::to_string(cls) + "\n";
    }
    const auto ds = dataset_from_csv_text(csv, "t");
    const auto split = stratified_split(ds, 0.2, 3);

    for (const auto& name : kClassicalSelectors) {
        const auto fs = run_classical_selector(name, ds, split, 5);
        INFO("selector " << name);
        REQUIRE(fs.runtime_seconds > 0.0);
        REQUIRE(fs.method == name);
        REQUIRE(fs.dataset == ds.name);

        // permutation of the original features
        std::set<std::string> seen(fs.ranking.begin(), fs.ranking.end());
        REQUIRE(fs.ranking.size() == ds.n_features());
        REQUIRE(seen.size() == ds.n_features());
        for (const auto& f : ds.feature_names()) REQUIRE(seen.count(f) == 1);

        // ranking consistent with non-increasing scores
        for (std::size_t r = 1; r < fs.ranking.size(); ++r)
            REQUIRE(fs.scores.at(fs.ranking[r]) <= fs.scores.at(fs.ranking[r - 1]));

        // deterministic given the seed
        const auto again = run_classical_selector(name, ds, split, 5);
        REQUIRE(again.ranking == fs.ranking);
        REQUIRE(again.scores == fs.scores);

        // nested top-k sets
        for (std::size_t k = 1; k < fs.ranking.size(); ++k) {
            const std::set<std::string> small(fs.ranking.begin(), fs.ranking.begin() + k);
            const std::set<std::string> large(fs.ranking.begin(),
                                              fs.ranking.begin() + k + 1);
            for (const auto& f : small) REQUIRE(large.count(f) == 1);
        }
    }
    REQUIRE_THROWS_AS(run_classical_selector("nope", ds, split, 5), ConfigError);
}

TEST_CASE("rankings are invariant to positive scaling of a numeric feature") {
    auto rng = Rng::derive(91, "scaling");
    const std::size_t n = 150;
    std::vector<double> base(n);
    std::string csv_a = "s,g,h,t\n", csv_b = "s,g,h,t\n";
    for (std::size_t i = 0; i < n; ++i) {
        const int cls = static_cast<int>(i % 2);
        const double s = rng.normal() + (cls ? 0.8 : 0.0);
        const double g = rng.normal() + (cls ? 0.0 : 0.5);
        const double h = rng.normal();
        base[i] = s;
        csv_a += testsupport::fmt_full(s) + "," + testsupport::fmt_full(g) + "," +
                 testsupport::fmt_full(h) + "," + std::to_string(cls) + "\n";
        // scale by a power of two so the arithmetic is bitwise-compatible
        csv_b += testsupport::fmt_full(s * 4.0) + "," + testsupport::fmt_full(g) + "," +
                 testsupport::fmt_full(h) + "," + std::to_string(cls) + "\n";
    }
    const auto ds_a = dataset_from_csv_text(csv_a, "t");
    const auto ds_b = dataset_from_csv_text(csv_b, "t");
    const auto split = stratified_split(ds_a, 0.2, 8);

    for (const std::string name : {"mi", "mrmr", "random", "rfe", "lasso", "forward"}) {
        INFO("selector " << name);
        const auto fa = run_classical_selector(name, ds_a, split, 9);
        const auto fb = run_classical_selector(name, ds_b, split, 9);
        REQUIRE(fa.ranking == fb.ranking);
    }
}
