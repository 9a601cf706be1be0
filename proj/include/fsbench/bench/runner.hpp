#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "fsbench/bench/config.hpp"
#include "fsbench/bench/harness.hpp"
#include "fsbench/core/error.hpp"
#include "fsbench/llm/cache.hpp"
#include "fsbench/llm/pipeline.hpp"
#include "fsbench/select/registry.hpp"

namespace fsbench {

inline std::string file_slug(std::string s) {
    for (char& c : s)
        if (c == '/' || c == ':' || c == ' ') c = '-';
    return s;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc | std::ios::binary);
    if (!out) throw EvalError("cannot write " + path.string());
    out << text;
}

inline void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

/// Run one method on one dataset and return its evaluation curve.
inline EvalCurve run_method_curve(const MethodSpec& method, const Dataset& ds,
                                  const Split& split, const RunConfig& cfg,
                                  std::uint64_t seed, ExchangeCache* cache) {
    EvalOptions options;
    options.c_grid = cfg.c_grid;
    options.cv_folds = cfg.cv_folds;

    if (!method.is_llm) {
        if (method.selector == "lasso") return run_lasso_curve(ds, split, options, seed);
        const auto scores = run_classical_selector(method.selector, ds, split, seed);
        return run_curve(ds, split, scores, options);
    }
    const auto& provider_cfg = cfg.provider(method.provider);
    const auto provider = make_provider(provider_cfg, &ds);
    const auto scores =
        llm_feature_scores(ds, split, method.pipeline, provider_cfg, seed, *provider, cache);
    return run_curve(ds, split, scores, options);
}

struct BenchResult {
    std::size_t cells_run = 0;
    std::vector<std::string> failures; // "method @ dataset: error"
    int exit_code = 0;
};

/// The bench command: every (method, dataset, seed) cell, one curve file per
/// cell, one aggregate report per seed. Cell failures are recorded and do not
/// stop the sweep.
inline BenchResult run_bench(const RunConfig& cfg, std::ostream& log = std::cerr) {
    std::filesystem::create_directories(cfg.output_dir);
    ExchangeCache cache(cfg.cache_dir);

    BenchResult result;
    std::vector<Dataset> datasets;
    for (const auto& manifest : cfg.datasets) datasets.push_back(load_dataset(manifest));

    nlohmann::json failures = nlohmann::json::array();
    for (const std::uint64_t seed : cfg.seeds) {
        std::vector<EvalCurve> curves;
        for (const auto& ds : datasets) {
            const auto split = stratified_split(ds, cfg.test_fraction, seed);
            for (const auto& method : cfg.methods) {
                ++result.cells_run;
                try {
                    auto curve = run_method_curve(method, ds, split, cfg, seed, &cache);
                    if (!cfg.record_timing) {
                        curve.selector_runtime_seconds = 0.0;
                        curve.eval_runtime_seconds = 0.0;
                    }
                    const auto name = "curve_" + file_slug(curve.method) + "_" +
                                      file_slug(ds.name) + "_s" + std::to_string(seed) +
                                      ".json";
                    write_json_file(std::filesystem::path(cfg.output_dir) / name,
                                    curve_to_json(curve));
                    log << "bench: " << method.id << " @ " << ds.name << " seed " << seed
                        << " done\n";
                    curves.push_back(std::move(curve));
                } catch (const std::exception& e) {
                    log << "bench: " << method.id << " @ " << ds.name << " seed " << seed
                        << " FAILED: " << e.what() << "\n";
                    result.failures.push_back(method.id + " @ " + ds.name + ": " + e.what());
                    failures.push_back({{"method", method.id},
                                        {"dataset", ds.name},
                                        {"seed", seed},
                                        {"error", e.what()}});
                    if (result.exit_code == 0) {
                        try { throw; }
                        catch (const Error& err) { result.exit_code = exit_code_for(err); }
                        catch (...) { result.exit_code = 5; }
                    }
                }
            }
        }
        if (!curves.empty()) {
            const auto report = aggregate(curves);
            const auto suffix = "_s" + std::to_string(seed);
            write_json_file(std::filesystem::path(cfg.output_dir) /
                                ("aggregate" + suffix + ".json"),
                            report_to_json(report));
            write_text_file(std::filesystem::path(cfg.output_dir) /
                                ("aggregate" + suffix + ".csv"),
                            report_to_csv(report));
        }
    }
    if (!result.failures.empty())
        write_json_file(std::filesystem::path(cfg.output_dir) / "failures.json", failures);
    return result;
}

} // namespace fsbench
