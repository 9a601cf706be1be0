#pragma once

// Shared helpers for the test suites: paths into the source tree, synthetic
// dataset builders, and the independent oracles used to freeze expected
// values.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fsbench/core/rng.hpp"
#include "fsbench/data/dataset.hpp"
#include "fsbench/model/logreg.hpp"

namespace testsupport {

inline std::string source_dir() {
#ifdef FSBENCH_SOURCE_DIR
    return FSBENCH_SOURCE_DIR;
#else
    return ".";
#endif
}

inline std::string data_path(const std::string& name) {
    return source_dir() + "/data/" + name;
}

inline std::string golden_path(const std::string& name) {
    return source_dir() + "/tests/golden/" + name;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline std::string strip_trailing_newline(std::string s) {
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
    return s;
}

inline std::string fmt_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Build a Dataset through the CSV loader from numeric columns, so tests
/// exercise the same construction path as production data.
inline fsbench::Dataset dataset_from_columns(const std::vector<std::string>& names,
                                             const std::vector<std::vector<double>>& cols,
                                             const std::vector<int>& y,
                                             const std::string& name = "synthetic") {
    std::string csv;
    for (std::size_t j = 0; j < names.size(); ++j) csv += names[j] + ",";
    csv += "Class\n";
    for (std::size_t i = 0; i < y.size(); ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j) csv += fmt_full(cols[j][i]) + ",";
        csv += std::to_string(y[i]) + "\n";
    }
    fsbench::LoadOptions opt;
    opt.dataset_name = name;
    return fsbench::dataset_from_csv_text(csv, "Class", {}, opt);
}

struct SyntheticSpec {
    std::size_t n = 500;
    std::size_t d = 6;
    std::vector<double> informative_weights; // weight per leading feature
    double bias = 0.0;
    std::uint64_t seed = 1;
};

/// Logistic generative model: X ~ N(0,1), P(y=1) = sigmoid(X w + b).
inline fsbench::Dataset make_logistic_dataset(const SyntheticSpec& spec,
                                              const std::string& name = "synthetic") {
    auto rng = fsbench::Rng::derive(spec.seed, "synthetic-data");
    std::vector<std::vector<double>> cols(spec.d, std::vector<double>(spec.n));
    std::vector<int> y(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) {
        double z = spec.bias;
        for (std::size_t j = 0; j < spec.d; ++j) {
            cols[j][i] = rng.normal();
            if (j < spec.informative_weights.size())
                z += spec.informative_weights[j] * cols[j][i];
        }
        y[i] = rng.next_double() < 1.0 / (1.0 + std::exp(-z)) ? 1 : 0;
    }
    std::vector<std::string> names;
    for (std::size_t j = 0; j < spec.d; ++j) names.push_back("f" + std::to_string(j));
    return dataset_from_columns(names, cols, y, name);
}

inline fsbench::Dataset make_noise_dataset(std::size_t n, std::size_t d, std::uint64_t seed,
                                           const std::string& name = "noise") {
    SyntheticSpec spec;
    spec.n = n;
    spec.d = d;
    spec.seed = seed;
    return make_logistic_dataset(spec, name);
}

// ---------------------------------------------------------------------------
// Oracles (independent of the implementation paths they check).

/// AUROC by brute-force pair counting: concordant pairs count 1, ties 1/2.
inline double auroc_pair_counting(const std::vector<double>& scores,
                                  const std::vector<int>& labels) {
    double wins = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!labels[i]) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j]) continue;
            ++pairs;
            if (scores[i] > scores[j]) wins += 1.0;
            else if (scores[i] == scores[j]) wins += 0.5;
        }
    }
    return wins / static_cast<double>(pairs);
}

/// Plug-in mutual information by direct summation over a joint count table.
inline double mi_direct_summation(const std::vector<std::vector<double>>& joint_counts) {
    double n = 0.0;
    std::vector<double> row_sum(joint_counts.size(), 0.0);
    std::vector<double> col_sum(joint_counts[0].size(), 0.0);
    for (std::size_t a = 0; a < joint_counts.size(); ++a)
        for (std::size_t b = 0; b < joint_counts[a].size(); ++b) {
            n += joint_counts[a][b];
            row_sum[a] += joint_counts[a][b];
            col_sum[b] += joint_counts[a][b];
        }
    double mi = 0.0;
    for (std::size_t a = 0; a < joint_counts.size(); ++a)
        for (std::size_t b = 0; b < joint_counts[a].size(); ++b) {
            const double c = joint_counts[a][b];
            if (c == 0.0) continue;
            const double p_ab = c / n;
            const double p_a = row_sum[a] / n;
            const double p_b = col_sum[b] / n;
            mi += p_ab * std::log(p_ab / (p_a * p_b));
        }
    return mi;
}

/// Central finite differences of the regularized logistic objective.
inline std::vector<double> fd_gradient(const fsbench::Matrix& x, const std::vector<int>& y,
                                       const std::vector<double>& w, double b, double c) {
    const double h = 1e-6;
    std::vector<double> grad(w.size() + 1);
    auto obj = [&](const std::vector<double>& wv, double bv) {
        return fsbench::detail::l2_objective(x, y, wv, bv, c);
    };
    for (std::size_t j = 0; j < w.size(); ++j) {
        auto wp = w, wm = w;
        wp[j] += h;
        wm[j] -= h;
        grad[j] = (obj(wp, b) - obj(wm, b)) / (2.0 * h);
    }
    grad[w.size()] = (obj(w, b + h) - obj(w, b - h)) / (2.0 * h);
    return grad;
}

/// Minimal XML well-formedness check: tag balance, attribute quoting, one root.
inline bool xml_well_formed(const std::string& text) {
    std::vector<std::string> stack;
    std::size_t i = text.find('<');
    int roots = 0;
    while (i != std::string::npos) {
        const std::size_t end = text.find('>', i);
        if (end == std::string::npos) return false;
        std::string tag = text.substr(i + 1, end - i - 1);
        if (!tag.empty() && tag[0] == '?') { // declaration
            i = text.find('<', end);
            continue;
        }
        const bool closing = !tag.empty() && tag[0] == '/';
        const bool self_closing = !tag.empty() && tag.back() == '/';
        std::string name = tag;
        if (closing) name = name.substr(1);
        if (self_closing) name.pop_back();
        name = name.substr(0, name.find_first_of(" \t\n"));
        if (name.empty()) return false;
        if (closing) {
            if (stack.empty() || stack.back() != name) return false;
            stack.pop_back();
            if (stack.empty()) ++roots;
        } else if (!self_closing) {
            stack.push_back(name);
        } else if (stack.empty()) {
            ++roots;
        }
        i = text.find('<', end);
    }
    return stack.empty() && roots >= 1;
}

} // namespace testsupport
