// Command-line front end: select / bench / plot / cache subcommands.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "fsbench/fsbench.hpp"

namespace {

fsbench::FeatureScores run_select(const fsbench::RunConfig& cfg,
                                  const fsbench::MethodSpec& method,
                                  const fsbench::Dataset& ds, std::uint64_t seed) {
    const auto split = fsbench::stratified_split(ds, cfg.test_fraction, seed);
    if (!method.is_llm)
        return fsbench::run_classical_selector(method.selector, ds, split, seed);
    const auto& provider_cfg = cfg.provider(method.provider);
    const auto provider = fsbench::make_provider(provider_cfg, &ds);
    fsbench::ExchangeCache cache(cfg.cache_dir);
    return fsbench::llm_feature_scores(ds, split, method.pipeline, provider_cfg, seed,
                                       *provider, &cache);
}

const fsbench::DatasetManifest& find_dataset(const fsbench::RunConfig& cfg,
                                             const std::string& name) {
    for (const auto& m : cfg.datasets)
        if (m.name == name) return m;
    std::string known;
    for (const auto& m : cfg.datasets) known += (known.empty() ? "" : ", ") + m.name;
    throw fsbench::ConfigError("unknown dataset '" + name + "'; configured datasets: " +
                               known);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fsbench: feature-selection benchmarking toolkit"};
    app.require_subcommand(1);

    std::string config_path, method_id, dataset_name, out_path, results_dir;
    std::uint64_t seed_arg = 0;
    bool seed_given = false;

    auto* select = app.add_subcommand("select", "run one selector on one dataset");
    select->add_option("--config", config_path, "run configuration (JSON)")->required();
    select->add_option("--method", method_id, "method id (e.g. mi, lasso, mock-rf-hybrid)")
        ->required();
    select->add_option("--dataset", dataset_name, "dataset name from the config")->required();
    select->add_option("--seed", seed_arg, "seed override")->each([&](const std::string&) {
        seed_given = true;
    });
    select->add_option("--out", out_path, "output file for the scores JSON");

    auto* bench = app.add_subcommand("bench", "run every configured (method, dataset) cell");
    bench->add_option("--config", config_path, "run configuration (JSON)")->required();
    bench->add_option("--out", out_path, "output directory override");

    auto* plot = app.add_subcommand("plot", "render SVG charts from a results directory");
    plot->add_option("--results", results_dir, "results directory")->required();
    plot->add_option("--out", out_path, "chart output directory (default: <results>/plots)");

    auto* cache_cmd = app.add_subcommand("cache", "inspect or clear the LLM exchange cache");
    cache_cmd->require_subcommand(1);
    auto* cache_ls = cache_cmd->add_subcommand("ls", "list cached exchanges");
    cache_ls->add_option("--config", config_path, "run configuration (JSON)")->required();
    auto* cache_clear = cache_cmd->add_subcommand("clear", "delete cached exchanges");
    cache_clear->add_option("--config", config_path, "run configuration (JSON)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (select->parsed()) {
            auto cfg = fsbench::load_run_config(config_path);
            const auto method = fsbench::detail::parse_method(method_id);
            if (method.is_llm && !cfg.providers.count(method.provider))
                throw fsbench::ConfigError("method '" + method_id +
                                           "' references unknown provider '" +
                                           method.provider + "'");
            const auto& manifest = find_dataset(cfg, dataset_name);
            const auto ds = fsbench::load_dataset(manifest);
            const std::uint64_t seed = seed_given ? seed_arg : cfg.seeds.front();
            auto scores = run_select(cfg, method, ds, seed);
            if (!cfg.record_timing) scores.runtime_seconds = 0.0;
            if (out_path.empty()) {
                std::filesystem::create_directories(cfg.output_dir);
                out_path = cfg.output_dir + "/scores_" + fsbench::file_slug(scores.method) +
                           "_" + fsbench::file_slug(ds.name) + "_s" + std::to_string(seed) +
                           ".json";
            }
            fsbench::write_json_file(out_path, scores.to_json());
            std::cout << out_path << "\n";
            return 0;
        }
        if (bench->parsed()) {
            auto cfg = fsbench::load_run_config(config_path);
            if (!out_path.empty()) {
                cfg.output_dir = out_path;
                if (!cfg.cache_dir_explicit) cfg.cache_dir = out_path + "/llm-cache";
            }
            const auto result = fsbench::run_bench(cfg);
            std::cout << "bench: " << result.cells_run - result.failures.size() << "/"
                      << result.cells_run << " cells succeeded; results in "
                      << cfg.output_dir << "\n";
            return result.exit_code;
        }
        if (plot->parsed()) {
            if (out_path.empty()) out_path = results_dir + "/plots";
            const auto written = fsbench::plot_results(results_dir, out_path);
            for (const auto& name : written) std::cout << out_path << "/" << name << "\n";
            return 0;
        }
        if (cache_ls->parsed()) {
            const auto cfg = fsbench::load_run_config(config_path);
            fsbench::ExchangeCache cache(cfg.cache_dir);
            for (const auto& entry : cache.list())
                std::cout << entry.key << "  provider=" << entry.provider
                          << "  model=" << entry.model
                          << "  valid=" << (entry.valid ? "true" : "false") << "\n";
            return 0;
        }
        if (cache_clear->parsed()) {
            const auto cfg = fsbench::load_run_config(config_path);
            fsbench::ExchangeCache cache(cfg.cache_dir);
            std::cout << "removed " << cache.clear() << " cached exchanges\n";
            return 0;
        }
    } catch (const fsbench::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return fsbench::exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
