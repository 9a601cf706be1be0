#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "fsbench/data/dataset.hpp"

#include "support.hpp"

using namespace fsbench;
using testsupport::data_path;

TEST_CASE("pima loads with the published shape") {
    const auto ds = load_dataset(load_manifest(data_path("pima.manifest.json")));
    REQUIRE(ds.n_samples() == 768);
    REQUIRE(ds.n_features() == 8);
    REQUIRE(ds.name == "pima");
    for (const auto& f : ds.features) REQUIRE(f.kind == FeatureKind::numeric);
    bool pos = false, neg = false;
    for (const int v : ds.y) (v ? pos : neg) = true;
    REQUIRE((pos && neg));
}

TEST_CASE("credit-g loads with the published shape and mixed kinds") {
    const auto ds = load_dataset(load_manifest(data_path("credit-g.manifest.json")));
    REQUIRE(ds.n_samples() == 1000);
    REQUIRE(ds.n_features() == 20);
    REQUIRE(ds.positive_label == "bad");
    std::size_t numeric = 0, categorical = 0;
    for (const auto& f : ds.features)
        (f.kind == FeatureKind::numeric ? numeric : categorical)++;
    REQUIRE(numeric == 7);
    REQUIRE(categorical == 13);
    REQUIRE(ds.n_encoded() > ds.n_features());
}

TEST_CASE("column_groups partitions the encoded columns") {
    const auto ds = load_dataset(load_manifest(data_path("credit-g.manifest.json")));
    std::vector<int> owner(ds.n_encoded(), 0);
    std::size_t total = 0;
    for (const auto& group : ds.column_groups)
        for (const std::size_t c : group) {
            owner[c]++;
            ++total;
        }
    REQUIRE(total == ds.n_encoded());
    for (const int count : owner) REQUIRE(count == 1);
}

TEST_CASE("degenerate targets are rejected") {
    REQUIRE_THROWS_AS(dataset_from_csv_text("a,t\n1,x\n2,x\n", "t"), DataError);
    REQUIRE_THROWS_AS(dataset_from_csv_text("a,t\n1,x\n2,y\n3,z\n", "t"), DataError);
    REQUIRE_THROWS_AS(dataset_from_csv_text("a,t\n1,0\n2,1\n", "missing"), DataError);
    REQUIRE_THROWS_AS(dataset_from_csv_text("a,t\n1,\n2,1\n", "t"), DataError);
}

TEST_CASE("target encoding prefers the lexicographically greater label") {
    const auto ds = dataset_from_csv_text("a,t\n1,no\n2,yes\n3,no\n", "t");
    REQUIRE(ds.positive_label == "yes");
    REQUIRE(ds.y == std::vector<int>{0, 1, 0});

    LoadOptions opt;
    opt.positive_label = "no";
    const auto flipped = dataset_from_csv_text("a,t\n1,no\n2,yes\n3,no\n", "t", {}, opt);
    REQUIRE(flipped.y == std::vector<int>{1, 0, 1});
}

TEST_CASE("kind overrides are validated and applied") {
    const std::string csv = "a,b,t\n1,x,0\n2,y,1\n3,x,0\n";
    const auto ds = dataset_from_csv_text(csv, "t", {{"a", FeatureKind::categorical}});
    REQUIRE(ds.features[0].kind == FeatureKind::categorical);
    REQUIRE(ds.column_groups[0].size() == 3); // levels 1, 2, 3
    REQUIRE_THROWS_AS(dataset_from_csv_text(csv, "t", {{"nope", FeatureKind::numeric}}),
                      DataError);
    REQUIRE_THROWS_AS(dataset_from_csv_text(csv, "t", {{"b", FeatureKind::numeric}}),
                      DataError);
}

TEST_CASE("unnamed and dropped columns are excluded") {
    const std::string csv = ",a,junk,t\n0,1,9,0\n1,2,8,1\n";
    LoadOptions opt;
    opt.drop_columns = {"junk"};
    const auto ds = dataset_from_csv_text(csv, "t", {}, opt);
    REQUIRE(ds.n_features() == 1);
    REQUIRE(ds.features[0].name == "a");
}

TEST_CASE("missing values: numeric stays NaN until imputation, categorical gets a level") {
    const std::string csv = "num,cat,t\n1,x,0\n,?,1\n3,y,0\n4,x,1\n";
    const auto ds = dataset_from_csv_text(csv, "t");
    REQUIRE(std::isnan(ds.X(1, 0)));
    const auto& levels = ds.levels[1];
    REQUIRE(std::find(levels.begin(), levels.end(), "(missing)") != levels.end());

    Split split;
    split.train_indices = {0, 1, 2, 3};
    const auto imputed = impute_missing(ds, split);
    REQUIRE(imputed.X(1, 0) == 3.0); // median of {1,3,4}
}

TEST_CASE("stratified split honors per-class round-half-up") {
    const auto ds = load_dataset(load_manifest(data_path("pima.manifest.json")));
    const auto split = stratified_split(ds, 0.2, 7);
    REQUIRE(split.test_indices.size() == 154);
    REQUIRE(split.train_indices.size() == 614);

    // disjoint and covering
    std::set<std::size_t> all(split.train_indices.begin(), split.train_indices.end());
    for (const std::size_t i : split.test_indices) REQUIRE(all.insert(i).second);
    REQUIRE(all.size() == 768);

    // both partitions keep both classes
    for (const auto* part : {&split.train_indices, &split.test_indices}) {
        bool pos = false, neg = false;
        for (const std::size_t i : *part) (ds.y[i] ? pos : neg) = true;
        REQUIRE((pos && neg));
    }
}

TEST_CASE("stratified split is deterministic and stratified") {
    const auto ds = load_dataset(load_manifest(data_path("pima.manifest.json")));
    const auto a = stratified_split(ds, 0.2, 42);
    const auto b = stratified_split(ds, 0.2, 42);
    REQUIRE(a.train_indices == b.train_indices);
    REQUIRE(a.test_indices == b.test_indices);
    REQUIRE(stratified_split(ds, 0.2, 43).test_indices != a.test_indices);

    double overall = 0.0, test = 0.0;
    for (const int v : ds.y) overall += v;
    overall /= static_cast<double>(ds.n_samples());
    for (const std::size_t i : a.test_indices) test += ds.y[i];
    test /= static_cast<double>(a.test_indices.size());
    REQUIRE(std::fabs(test - overall) <=
            1.0 / static_cast<double>(a.test_indices.size()));
}

TEST_CASE("ten rows five per class give one test row per class") {
    std::vector<std::vector<double>> cols{{1, 2, 3, 4, 5, 6, 7, 8, 9, 10}};
    const std::vector<int> y{0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
    const auto ds = testsupport::dataset_from_columns({"a"}, cols, y);
    const auto split = stratified_split(ds, 0.2, 3);
    REQUIRE(split.test_indices.size() == 2);
    int pos = 0;
    for (const std::size_t i : split.test_indices) pos += ds.y[i];
    REQUIRE(pos == 1);
}

TEST_CASE("split rejects classes with fewer than two members") {
    const auto ds = dataset_from_csv_text("a,t\n1,0\n2,1\n3,0\n", "t");
    REQUIRE_THROWS_AS(stratified_split(ds, 0.3, 1), DataError);
}

TEST_CASE("sample_for_prompt produces the prompt CSV contract") {
    const auto ds = load_dataset(load_manifest(data_path("pima.manifest.json")));
    const auto split = stratified_split(ds, 0.2, 42);
    const auto csv = sample_for_prompt(ds, 200, 1, &split);
    const auto table = parse_csv(csv);
    REQUIRE(table.header.size() == 9);
    REQUIRE(table.header.back() == "Class");
    REQUIRE(table.header[0] == "Pregnancies");
    REQUIRE(table.rows.size() == 200);

    // byte-identical re-render, different seeds differ
    REQUIRE(sample_for_prompt(ds, 200, 1, &split) == csv);
    REQUIRE(sample_for_prompt(ds, 200, 2, &split) != csv);
    REQUIRE_THROWS_AS(sample_for_prompt(ds, 0, 1, &split), DataError);
    REQUIRE_THROWS_AS(sample_for_prompt(ds, ds.n_samples() + 1, 1, &split), DataError);

    // train rows only
    auto row_key = [](const std::vector<std::string>& cells, const std::string& target) {
        std::string key;
        for (const auto& cell : cells) key += cell + "\x1f";
        return key + target;
    };
    std::set<std::string> train_rows;
    for (const std::size_t i : split.train_indices)
        train_rows.insert(row_key(ds.raw[i], ds.raw_target[i]));
    for (const auto& r : table.rows) {
        const std::vector<std::string> cells(r.begin(), r.end() - 1);
        REQUIRE(train_rows.count(row_key(cells, r.back())) == 1);
    }
}

TEST_CASE("sample with n equal to n_samples is a permutation of all rows") {
    const auto ds = dataset_from_csv_text("a,t\n1,0\n2,1\n3,0\n4,1\n", "t");
    const auto csv = sample_for_prompt(ds, 4, 9);
    const auto table = parse_csv(csv);
    std::multiset<std::string> values;
    for (const auto& r : table.rows) values.insert(r[0]);
    REQUIRE(values == std::multiset<std::string>{"1", "2", "3", "4"});
}

TEST_CASE("round trip: serialized full sample reloads to the same matrix") {
    const auto ds = load_dataset(load_manifest(data_path("credit-g.manifest.json")));
    const auto csv = sample_for_prompt(ds, ds.n_samples(), 5);
    LoadOptions opt;
    opt.positive_label = ds.positive_label;
    const auto back = dataset_from_csv_text(csv, "Class", {}, opt);
    REQUIRE(back.n_samples() == ds.n_samples());
    REQUIRE(back.n_features() == ds.n_features());

    // the sample is row-permuted; compare sorted per-column multisets by
    // encoded column name (encoding order may differ)
    for (std::size_t j = 0; j < ds.n_encoded(); ++j) {
        const auto& name = ds.encoded_names[j];
        const auto it = std::find(back.encoded_names.begin(), back.encoded_names.end(), name);
        REQUIRE(it != back.encoded_names.end());
        const auto jb = static_cast<std::size_t>(it - back.encoded_names.begin());
        auto a = ds.X.column(j);
        auto b = back.X.column(jb);
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        REQUIRE(a == b);
    }
}

TEST_CASE("standardize uses train population statistics") {
    std::vector<std::vector<double>> cols{{1, 2, 3, 100, -50}};
    const std::vector<int> y{0, 1, 0, 1, 0};
    const auto ds = testsupport::dataset_from_columns({"a"}, cols, y);
    Split split;
    split.train_indices = {0, 1, 2};
    split.test_indices = {3, 4};
    const auto sds = standardize(ds, split);
    REQUIRE(sds.X(0, 0) == Catch::Approx(-1.224744871391589).epsilon(1e-9));
    REQUIRE(sds.X(1, 0) == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(sds.X(2, 0) == Catch::Approx(1.224744871391589).epsilon(1e-9));
    // test rows scaled by the same train statistics
    REQUIRE(sds.X(3, 0) == Catch::Approx((100.0 - 2.0) / 0.816496580927726).epsilon(1e-9));

    SECTION("idempotent on the train portion") {
        const auto twice = standardize(sds, split);
        for (const std::size_t i : split.train_indices)
            REQUIRE(twice.X(i, 0) == Catch::Approx(sds.X(i, 0)).margin(1e-9));
    }
}

TEST_CASE("standardize maps constant columns to zero and skips one-hot") {
    const std::string csv = "num,cat,t\n5,x,0\n5,y,1\n5,x,0\n5,y,1\n";
    const auto ds = dataset_from_csv_text(csv, "t");
    Split split;
    split.train_indices = {0, 1, 2, 3};
    const auto sds = standardize(ds, split);
    for (std::size_t i = 0; i < 4; ++i) REQUIRE(sds.X(i, 0) == 0.0);
    // one-hot untouched
    for (std::size_t i = 0; i < 4; ++i)
        REQUIRE((sds.X(i, 1) == 0.0 || sds.X(i, 1) == 1.0));
}
