#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "fsbench/bench/harness.hpp"
#include "fsbench/bench/runner.hpp"
#include "fsbench/bench/svg.hpp"
#include "fsbench/core/error.hpp"

namespace fsbench {

/// Render a results directory into SVG figures: per-dataset AUROC lines, the
/// cross-dataset average bars (descending), the runtime-vs-AUROC scatter and
/// per-dataset selection-path tables. Returns the written file names.
inline std::vector<std::string> plot_results(const std::string& results_dir,
                                             const std::string& out_dir) {
    namespace fs = std::filesystem;
    if (!fs::exists(results_dir)) throw DataError("results directory not found: " + results_dir);
    fs::create_directories(out_dir);

    std::vector<EvalCurve> curves;
    std::vector<std::pair<std::string, nlohmann::json>> aggregates; // (suffix, json)
    std::vector<fs::path> entries;
    for (const auto& e : fs::directory_iterator(results_dir)) entries.push_back(e.path());
    std::sort(entries.begin(), entries.end());
    for (const auto& path : entries) {
        const auto name = path.filename().string();
        if (path.extension() != ".json") continue;
        std::ifstream in(path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const std::exception& e) {
            throw DataError(path.string() + ": " + e.what());
        }
        if (name.rfind("curve_", 0) == 0) curves.push_back(curve_from_json(j));
        else if (name.rfind("aggregate", 0) == 0) {
            auto suffix = path.stem().string().substr(std::string("aggregate").size());
            aggregates.emplace_back(suffix, j);
        }
    }
    if (curves.empty()) throw DataError("no curve files in " + results_dir);

    std::vector<std::string> written;
    auto emit = [&](const std::string& name, const std::string& body) {
        write_text_file(fs::path(out_dir) / name, body);
        written.push_back(name);
    };

    // per-dataset line charts
    std::map<std::string, std::vector<const EvalCurve*>> by_dataset;
    for (const auto& c : curves) by_dataset[c.dataset].push_back(&c);
    for (const auto& [dataset, group] : by_dataset) {
        std::vector<svg::Series> series;
        for (const EvalCurve* c : group) {
            svg::Series s;
            s.name = c->method;
            for (const auto& p : c->points) s.points.emplace_back(p.proportion, p.auroc_value);
            series.push_back(std::move(s));
        }
        std::sort(series.begin(), series.end(),
                  [](const auto& a, const auto& b) { return a.name < b.name; });
        emit("auroc_" + file_slug(dataset) + ".svg",
             svg_line_chart("AUROC vs selected proportion: " + dataset,
                            "proportion of features", "test AUROC", series));
    }

    for (const auto& [suffix, j] : aggregates) {
        const auto summary = j.at("summary").get<std::map<std::string, double>>();
        std::vector<std::pair<std::string, double>> bars(summary.begin(), summary.end());
        std::sort(bars.begin(), bars.end(), [](const auto& a, const auto& b) {
            return a.second != b.second ? a.second > b.second : a.first < b.first;
        });
        emit("average_auroc" + suffix + ".svg",
             svg_bar_chart("Average AUROC across datasets", "mean test AUROC", bars));

        const auto runtimes =
            j.at("selector_runtime_seconds").get<std::map<std::string, double>>();
        std::vector<std::tuple<std::string, double, double>> marks;
        for (const auto& [method, mean] : summary)
            marks.emplace_back(method, runtimes.at(method), mean);
        emit("runtime_vs_auroc" + suffix + ".svg",
             svg_scatter("Selector runtime vs mean AUROC", "selector runtime (s)",
                         "mean test AUROC", marks));

        if (j.contains("paths")) {
            for (const auto& [dataset, methods] : j.at("paths").items()) {
                std::vector<std::vector<std::string>> rows;
                for (const auto& [method, props] : methods.items()) {
                    for (const auto& [label, feats] : props.items()) {
                        std::string joined;
                        for (const auto& f : feats) {
                            if (!joined.empty()) joined += ", ";
                            joined += f.get<std::string>();
                        }
                        rows.push_back({method, label, joined});
                    }
                }
                emit("paths_" + file_slug(dataset) + suffix + ".svg",
                     svg_table("Selection paths: " + dataset,
                               {"method", "proportion", "selected features"}, rows));
            }
        }
    }
    return written;
}

} // namespace fsbench
