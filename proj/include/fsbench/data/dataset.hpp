#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "fsbench/core/csv.hpp"
#include "fsbench/core/error.hpp"
#include "fsbench/core/matrix.hpp"
#include "fsbench/core/rng.hpp"

namespace fsbench {

enum class FeatureKind { numeric, categorical };

struct Feature {
    std::string name;
    FeatureKind kind = FeatureKind::numeric;
};

/// Canonical numeric form of a tabular dataset: categoricals one-hot encoded,
/// numerics passed through (missing entries kept as NaN until imputation).
/// Scores and rankings always refer to original features; column_groups maps
/// each original feature to its encoded columns.
struct Dataset {
    std::string name;
    std::vector<Feature> features;                        // original features
    std::vector<std::vector<std::string>> levels;         // per feature; empty for numeric
    std::vector<std::string> encoded_names;
    std::vector<bool> encoded_numeric;                    // false for one-hot columns
    std::vector<std::vector<std::size_t>> column_groups;  // original -> encoded columns
    Matrix X;                                             // n_samples x n_encoded
    std::vector<int> y;                                   // {0,1}
    std::vector<std::vector<std::string>> raw;            // original cell text, per row
    std::vector<std::string> raw_target;
    std::string target_name;
    std::string positive_label, negative_label;
    bool standardized = false;

    std::size_t n_samples() const { return X.rows(); }
    std::size_t n_features() const { return features.size(); }
    std::size_t n_encoded() const { return X.cols(); }

    std::size_t feature_index(const std::string& fname) const {
        for (std::size_t i = 0; i < features.size(); ++i)
            if (features[i].name == fname) return i;
        throw DataError("unknown feature: " + fname);
    }

    std::vector<std::string> feature_names() const {
        std::vector<std::string> out;
        out.reserve(features.size());
        for (const auto& f : features) out.push_back(f.name);
        return out;
    }
};

struct Split {
    std::vector<std::size_t> train_indices;
    std::vector<std::size_t> test_indices;
    std::uint64_t seed = 0;
};

namespace detail {

inline bool is_missing_token(const std::string& cell) {
    const std::string t = trim(cell);
    return t.empty() || t == "?" || t == "NA" || t == "N/A" || t == "na" || t == "n/a" ||
           t == "nan" || t == "NaN";
}

inline const std::string kMissingLevel = "(missing)";

inline double round_half_up(double x) { return std::floor(x + 0.5); }

} // namespace detail

struct LoadOptions {
    std::string dataset_name;
    std::string positive_label;              // default: lexicographically greater label
    std::vector<std::string> drop_columns;   // dropped in addition to unnamed columns
};

/// Build a Dataset from parsed CSV. Numeric kind is inferred when every
/// non-missing cell parses as a number; overrides win. Columns with an empty
/// header name are dropped (e.g. exported row indices).
inline Dataset dataset_from_table(const CsvTable& table, const std::string& target_column,
                                  const std::map<std::string, FeatureKind>& kind_overrides = {},
                                  const LoadOptions& options = {}) {
    std::optional<std::size_t> target_pos;
    std::vector<std::size_t> feature_cols;
    for (std::size_t j = 0; j < table.header.size(); ++j) {
        const std::string name = trim(table.header[j]);
        if (name == target_column) {
            if (target_pos) throw DataError("duplicate target column: " + target_column);
            target_pos = j;
            continue;
        }
        if (name.empty()) continue;
        if (std::find(options.drop_columns.begin(), options.drop_columns.end(), name) !=
            options.drop_columns.end())
            continue;
        feature_cols.push_back(j);
    }
    if (!target_pos) throw DataError("target column not found: " + target_column);
    if (table.rows.empty()) throw DataError("dataset has no rows");

    for (const auto& [name, kind] : kind_overrides) {
        bool known = false;
        for (const std::size_t j : feature_cols)
            if (trim(table.header[j]) == name) known = true;
        if (!known) throw DataError("kind override names unknown column: " + name);
    }

    Dataset ds;
    ds.name = options.dataset_name;
    ds.target_name = trim(table.header[*target_pos]);

    const std::size_t n = table.rows.size();
    const std::size_t l = feature_cols.size();

    // Target binarization: exactly two distinct labels, positive class is the
    // lexicographically greater one unless overridden.
    ds.raw_target.reserve(n);
    std::set<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) {
        const std::string v = trim(table.rows[i][*target_pos]);
        if (detail::is_missing_token(v))
            throw DataError("missing target value at row " + std::to_string(i + 2));
        ds.raw_target.push_back(v);
        labels.insert(v);
    }
    if (labels.size() < 2) throw DataError("constant target column: " + target_column);
    if (labels.size() > 2)
        throw DataError("target has " + std::to_string(labels.size()) +
                        " distinct values; expected 2");
    ds.negative_label = *labels.begin();
    ds.positive_label = *labels.rbegin();
    if (!options.positive_label.empty()) {
        if (!labels.count(options.positive_label))
            throw DataError("positive label '" + options.positive_label +
                            "' not present in target column");
        ds.positive_label = options.positive_label;
        ds.negative_label =
            (ds.positive_label == *labels.begin()) ? *labels.rbegin() : *labels.begin();
    }
    ds.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) ds.y[i] = ds.raw_target[i] == ds.positive_label ? 1 : 0;

    // Infer kinds and collect raw cells.
    ds.raw.assign(n, std::vector<std::string>(l));
    ds.features.resize(l);
    ds.levels.resize(l);
    std::vector<std::vector<double>> numeric_values(l);
    for (std::size_t f = 0; f < l; ++f) {
        const std::size_t j = feature_cols[f];
        const std::string name = trim(table.header[j]);
        ds.features[f].name = name;

        bool all_numeric = true;
        bool any_value = false;
        numeric_values[f].assign(n, std::numeric_limits<double>::quiet_NaN());
        for (std::size_t i = 0; i < n; ++i) {
            const std::string& cell = table.rows[i][j];
            ds.raw[i][f] = trim(cell);
            if (detail::is_missing_token(cell)) continue;
            any_value = true;
            double v;
            if (parse_number(cell, v)) numeric_values[f][i] = v;
            else all_numeric = false;
        }
        FeatureKind kind = (all_numeric && any_value) ? FeatureKind::numeric
                                                      : FeatureKind::categorical;
        const auto it = kind_overrides.find(name);
        if (it != kind_overrides.end()) {
            if (it->second == FeatureKind::numeric && !all_numeric)
                throw DataError("column '" + name +
                                "' overridden to numeric but has non-numeric values");
            kind = it->second;
        }
        ds.features[f].kind = kind;

        if (kind == FeatureKind::categorical) {
            std::set<std::string> lv;
            bool any_missing = false;
            for (std::size_t i = 0; i < n; ++i) {
                if (detail::is_missing_token(ds.raw[i][f])) any_missing = true;
                else lv.insert(ds.raw[i][f]);
            }
            if (any_missing) lv.insert(detail::kMissingLevel);
            ds.levels[f].assign(lv.begin(), lv.end());
        }
    }

    // Encode: numeric pass-through, categorical one-hot (one column per level,
    // levels in sorted order).
    std::size_t n_encoded = 0;
    for (std::size_t f = 0; f < l; ++f)
        n_encoded += ds.features[f].kind == FeatureKind::numeric ? 1 : ds.levels[f].size();
    ds.X = Matrix(n, n_encoded);
    ds.column_groups.resize(l);
    std::size_t col = 0;
    for (std::size_t f = 0; f < l; ++f) {
        if (ds.features[f].kind == FeatureKind::numeric) {
            ds.column_groups[f] = {col};
            ds.encoded_names.push_back(ds.features[f].name);
            ds.encoded_numeric.push_back(true);
            for (std::size_t i = 0; i < n; ++i) ds.X(i, col) = numeric_values[f][i];
            ++col;
        } else {
            for (std::size_t k = 0; k < ds.levels[f].size(); ++k) {
                ds.column_groups[f].push_back(col + k);
                ds.encoded_names.push_back(ds.features[f].name + "=" + ds.levels[f][k]);
                ds.encoded_numeric.push_back(false);
            }
            for (std::size_t i = 0; i < n; ++i) {
                std::string v = ds.raw[i][f];
                if (detail::is_missing_token(v)) v = detail::kMissingLevel;
                const auto it2 = std::find(ds.levels[f].begin(), ds.levels[f].end(), v);
                const std::size_t k =
                    static_cast<std::size_t>(it2 - ds.levels[f].begin());
                ds.X(i, col + k) = 1.0;
            }
            col += ds.levels[f].size();
        }
    }
    return ds;
}

inline Dataset dataset_from_csv_text(const std::string& text, const std::string& target_column,
                                     const std::map<std::string, FeatureKind>& overrides = {},
                                     const LoadOptions& options = {}) {
    return dataset_from_table(parse_csv(text), target_column, overrides, options);
}

inline Dataset load_csv(const std::string& path, const std::string& target_column,
                        const std::map<std::string, FeatureKind>& kind_overrides = {},
                        LoadOptions options = {}) {
    if (options.dataset_name.empty()) {
        // default name: file stem
        std::size_t slash = path.find_last_of("/\\");
        std::string stem = slash == std::string::npos ? path : path.substr(slash + 1);
        const std::size_t dot = stem.find_last_of('.');
        if (dot != std::string::npos) stem = stem.substr(0, dot);
        options.dataset_name = stem;
    }
    return dataset_from_table(read_csv_file(path), target_column, kind_overrides, options);
}

/// Per-class proportional test allocation, rounded half-up and clamped so both
/// partitions keep both classes. Deterministic for a fixed seed.
inline Split stratified_split(const Dataset& ds, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw DataError("test_fraction must be in (0, 1)");
    Split split;
    split.seed = seed;
    for (int cls = 0; cls <= 1; ++cls) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < ds.n_samples(); ++i)
            if (ds.y[i] == cls) idx.push_back(i);
        if (idx.size() < 2)
            throw DataError("class " + std::to_string(cls) + " has fewer than 2 members");
        auto rng = Rng::derive(seed, "split", static_cast<std::uint64_t>(cls));
        rng.shuffle(idx);
        auto n_test = static_cast<std::size_t>(
            detail::round_half_up(test_fraction * static_cast<double>(idx.size())));
        n_test = std::clamp<std::size_t>(n_test, 1, idx.size() - 1);
        for (std::size_t i = 0; i < idx.size(); ++i)
            (i < n_test ? split.test_indices : split.train_indices).push_back(idx[i]);
    }
    std::sort(split.train_indices.begin(), split.train_indices.end());
    std::sort(split.test_indices.begin(), split.test_indices.end());
    return split;
}

namespace detail {

inline std::vector<int> train_labels(const Dataset& ds, const Split& split) {
    std::vector<int> out;
    out.reserve(split.train_indices.size());
    for (const std::size_t i : split.train_indices) out.push_back(ds.y[i]);
    return out;
}

inline double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size();
    return m % 2 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

} // namespace detail

/// Replace missing numeric entries with the train-partition median.
inline Dataset impute_missing(const Dataset& ds, const Split& split) {
    Dataset out = ds;
    for (std::size_t j = 0; j < ds.n_encoded(); ++j) {
        if (!ds.encoded_numeric[j]) continue;
        bool any_nan = false;
        for (std::size_t i = 0; i < ds.n_samples(); ++i)
            if (std::isnan(ds.X(i, j))) { any_nan = true; break; }
        if (!any_nan) continue;
        std::vector<double> train_vals;
        for (const std::size_t i : split.train_indices)
            if (!std::isnan(ds.X(i, j))) train_vals.push_back(ds.X(i, j));
        const double med = detail::median(std::move(train_vals));
        for (std::size_t i = 0; i < ds.n_samples(); ++i)
            if (std::isnan(out.X(i, j))) out.X(i, j) = med;
    }
    return out;
}

/// Shift/scale numeric columns by train mean and train population standard
/// deviation; zero-variance columns map to all-zeros; one-hot columns pass
/// through untouched.
inline Dataset standardize(const Dataset& ds, const Split& split) {
    Dataset out = impute_missing(ds, split);
    const std::size_t n_train = split.train_indices.size();
    if (n_train == 0) throw DataError("standardize: empty train partition");
    for (std::size_t j = 0; j < out.n_encoded(); ++j) {
        if (!out.encoded_numeric[j]) continue;
        double mean = 0.0;
        for (const std::size_t i : split.train_indices) mean += out.X(i, j);
        mean /= static_cast<double>(n_train);
        double var = 0.0;
        for (const std::size_t i : split.train_indices) {
            const double d = out.X(i, j) - mean;
            var += d * d;
        }
        var /= static_cast<double>(n_train);
        const double sd = std::sqrt(var);
        if (sd == 0.0) {
            for (std::size_t i = 0; i < out.n_samples(); ++i) out.X(i, j) = 0.0;
        } else {
            for (std::size_t i = 0; i < out.n_samples(); ++i)
                out.X(i, j) = (out.X(i, j) - mean) / sd;
        }
    }
    out.standardized = true;
    return out;
}

/// Stratified CSV sample for LLM prompts: original feature names and raw
/// values, target under header "Class". Rows come from the train partition
/// when a split is given, in ascending original row order.
inline std::string sample_for_prompt(const Dataset& ds, std::size_t n, std::uint64_t seed,
                                     const Split* split = nullptr) {
    if (n == 0) throw DataError("sample_for_prompt: n must be positive");
    if (n > ds.n_samples())
        throw DataError("sample_for_prompt: n exceeds dataset size");
    std::vector<std::size_t> pool;
    if (split) pool = split->train_indices;
    else {
        pool.resize(ds.n_samples());
        for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
    }
    const std::size_t m = std::min(n, pool.size());

    std::vector<std::vector<std::size_t>> by_class(2);
    for (const std::size_t i : pool) by_class[static_cast<std::size_t>(ds.y[i])].push_back(i);

    // Per-class quotas: floor of the proportional share, remainder to the
    // larger fractional part (ties to class 0).
    std::array<std::size_t, 2> quota{};
    std::array<double, 2> frac{};
    std::size_t assigned = 0;
    for (int c = 0; c < 2; ++c) {
        const double share =
            static_cast<double>(m) * static_cast<double>(by_class[c].size()) /
            static_cast<double>(pool.size());
        quota[c] = static_cast<std::size_t>(std::floor(share));
        frac[c] = share - std::floor(share);
        assigned += quota[c];
    }
    while (assigned < m) {
        const int c = (frac[0] >= frac[1]) ? 0 : 1;
        ++quota[c];
        frac[c] = -1.0;
        ++assigned;
    }
    for (int c = 0; c < 2; ++c) {
        if (quota[c] > by_class[c].size()) {
            const std::size_t excess = quota[c] - by_class[c].size();
            quota[c] = by_class[c].size();
            quota[1 - c] += excess;
        }
    }

    std::vector<std::size_t> chosen;
    for (int c = 0; c < 2; ++c) {
        auto rng = Rng::derive(seed, "sample", static_cast<std::uint64_t>(c));
        auto idx = by_class[c];
        rng.shuffle(idx);
        chosen.insert(chosen.end(), idx.begin(), idx.begin() + quota[c]);
    }
    std::sort(chosen.begin(), chosen.end());

    CsvTable table;
    for (const auto& f : ds.features) table.header.push_back(f.name);
    table.header.push_back("Class");
    for (const std::size_t i : chosen) {
        std::vector<std::string> row = ds.raw[i];
        row.push_back(ds.raw_target[i]);
        table.rows.push_back(std::move(row));
    }
    return write_csv(table);
}

// ---------------------------------------------------------------------------
// Dataset manifest: JSON file declaring path, target column, kind overrides.

struct DatasetManifest {
    std::string name;
    std::string path;
    std::string target_column;
    std::map<std::string, FeatureKind> kind_overrides;
    std::string positive_label;
    std::vector<std::string> drop_columns;
};

inline DatasetManifest load_manifest(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw ConfigError("cannot open dataset manifest: " + manifest_path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError("manifest " + manifest_path + ": " + e.what());
    }
    DatasetManifest m;
    try {
        m.path = j.at("path").get<std::string>();
        m.target_column = j.at("target_column").get<std::string>();
        m.name = j.value("name", std::string());
        m.positive_label = j.value("positive_label", std::string());
        if (j.contains("drop_columns"))
            m.drop_columns = j["drop_columns"].get<std::vector<std::string>>();
        if (j.contains("kind_overrides")) {
            for (const auto& [key, val] : j["kind_overrides"].items()) {
                const std::string k = val.get<std::string>();
                if (k == "numeric") m.kind_overrides[key] = FeatureKind::numeric;
                else if (k == "categorical") m.kind_overrides[key] = FeatureKind::categorical;
                else throw ConfigError("manifest kind must be numeric|categorical, got " + k);
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("manifest " + manifest_path + ": " + e.what());
    }
    // Relative data paths resolve against the manifest's directory.
    if (!m.path.empty() && m.path[0] != '/') {
        const std::size_t slash = manifest_path.find_last_of("/\\");
        if (slash != std::string::npos) m.path = manifest_path.substr(0, slash + 1) + m.path;
    }
    if (m.name.empty()) m.name = m.path;
    return m;
}

inline Dataset load_dataset(const DatasetManifest& m) {
    LoadOptions opt;
    opt.dataset_name = m.name;
    opt.positive_label = m.positive_label;
    opt.drop_columns = m.drop_columns;
    return load_csv(m.path, m.target_column, m.kind_overrides, opt);
}

} // namespace fsbench
