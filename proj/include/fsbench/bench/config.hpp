#pragma once

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "fsbench/core/error.hpp"
#include "fsbench/data/dataset.hpp"
#include "fsbench/llm/pipeline.hpp"
#include "fsbench/llm/provider.hpp"
#include "fsbench/model/cv.hpp"
#include "fsbench/select/registry.hpp"

namespace fsbench {

/// A method entry from the run configuration: either one classical selector
/// or an (LLM provider, pipeline) pair.
struct MethodSpec {
    std::string id;        // as written in the config
    bool is_llm = false;
    std::string selector;  // classical selector name
    std::string provider;  // provider key
    LlmPipeline pipeline = LlmPipeline::hybrid;
};

/// The single source of experiment determinism: datasets, methods, seeds,
/// grids and provider settings.
struct RunConfig {
    std::vector<DatasetManifest> datasets;
    std::vector<MethodSpec> methods;
    std::vector<std::uint64_t> seeds = {42};
    double test_fraction = 0.2;
    std::vector<double> c_grid = kDefaultCGrid;
    std::size_t cv_folds = 5;
    std::map<std::string, ProviderConfig> providers;
    std::string output_dir = "results";
    std::string cache_dir; // defaults to <output_dir>/llm-cache
    bool cache_dir_explicit = false;
    bool record_timing = true;

    const ProviderConfig& provider(const std::string& key) const {
        const auto it = providers.find(key);
        if (it == providers.end()) throw ConfigError("unknown provider: " + key);
        return it->second;
    }
};

namespace detail {

/// Replace ${VAR} references in every string value; missing variables are
/// configuration errors.
inline void interpolate_env(nlohmann::json& j) {
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        std::size_t pos = 0;
        while ((pos = s.find("${", pos)) != std::string::npos) {
            const std::size_t end = s.find('}', pos + 2);
            if (end == std::string::npos) break;
            const std::string var = s.substr(pos + 2, end - pos - 2);
            const char* value = std::getenv(var.c_str());
            if (!value)
                throw ConfigError("environment variable not set: " + var);
            s = s.substr(0, pos) + value + s.substr(end + 1);
            pos += std::strlen(value);
        }
        j = s;
        return;
    }
    if (j.is_object() || j.is_array())
        for (auto& child : j) interpolate_env(child);
}

inline MethodSpec parse_method(const std::string& id) {
    MethodSpec m;
    m.id = id;
    if (is_classical_selector(id)) {
        m.selector = id;
        return m;
    }
    if (id == "mock-rf-hybrid") { // built-in offline hybrid pipeline
        m.is_llm = true;
        m.provider = "mock-rf";
        m.pipeline = LlmPipeline::hybrid;
        return m;
    }
    if (id.rfind("llm:", 0) == 0) {
        m.is_llm = true;
        const std::string rest = id.substr(4);
        const std::size_t colon = rest.find(':');
        m.provider = rest.substr(0, colon == std::string::npos ? rest.size() : colon);
        if (colon != std::string::npos) {
            const std::string pipe = rest.substr(colon + 1);
            if (pipe == "direct") m.pipeline = LlmPipeline::direct;
            else if (pipe == "hybrid") m.pipeline = LlmPipeline::hybrid;
            else
                throw ConfigError("method '" + id + "': pipeline must be direct or hybrid");
        }
        if (m.provider.empty())
            throw ConfigError("method '" + id + "': missing provider name");
        return m;
    }
    std::string valid;
    for (const auto& s : kClassicalSelectors) valid += s + ", ";
    throw ConfigError("unknown method '" + id + "'; valid methods: " + valid +
                      "mock-rf-hybrid, llm:<provider>[:direct|hybrid]");
}

inline std::string resolve_relative(const std::string& base_file, const std::string& path) {
    if (path.empty() || path[0] == '/') return path;
    const auto dir = std::filesystem::path(base_file).parent_path();
    return (dir / path).string();
}

} // namespace detail

/// Load, interpolate and fail-fast validate a run configuration. Every
/// referenced dataset manifest and provider must resolve before execution.
inline RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError("config " + path + ": " + e.what());
    }
    detail::interpolate_env(j);

    RunConfig cfg;
    try {
        if (!j.contains("datasets") || !j["datasets"].is_array() || j["datasets"].empty())
            throw ConfigError("config needs a non-empty 'datasets' array");
        for (const auto& d : j["datasets"]) {
            const auto manifest_path =
                detail::resolve_relative(path, d.get<std::string>());
            cfg.datasets.push_back(load_manifest(manifest_path));
        }
        if (!j.contains("methods") || !j["methods"].is_array() || j["methods"].empty())
            throw ConfigError("config needs a non-empty 'methods' array");
        for (const auto& m : j["methods"])
            cfg.methods.push_back(detail::parse_method(m.get<std::string>()));

        if (j.contains("seeds")) {
            cfg.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
            if (cfg.seeds.empty()) throw ConfigError("'seeds' must be non-empty");
        } else if (j.contains("seed")) {
            cfg.seeds = {j["seed"].get<std::uint64_t>()};
        }
        cfg.test_fraction = j.value("test_fraction", 0.2);
        if (!(cfg.test_fraction > 0.0 && cfg.test_fraction < 1.0))
            throw ConfigError("test_fraction must be in (0, 1)");
        if (j.contains("c_grid")) {
            cfg.c_grid = j["c_grid"].get<std::vector<double>>();
            if (cfg.c_grid.empty()) throw ConfigError("'c_grid' must be non-empty");
            for (const double c : cfg.c_grid)
                if (!(c > 0.0)) throw ConfigError("'c_grid' values must be positive");
        }
        cfg.cv_folds = j.value("cv_folds", std::size_t{5});
        if (cfg.cv_folds < 2) throw ConfigError("cv_folds must be >= 2");

        if (j.contains("providers")) {
            if (j["providers"].is_string()) {
                const auto provider_path =
                    detail::resolve_relative(path, j["providers"].get<std::string>());
                std::ifstream pin(provider_path);
                if (!pin) throw ConfigError("cannot open provider config: " + provider_path);
                nlohmann::json pj;
                pin >> pj;
                detail::interpolate_env(pj);
                for (const auto& [name, val] : pj.items())
                    cfg.providers.emplace(name, ProviderConfig::from_json(val, name));
            } else {
                for (const auto& [name, val] : j["providers"].items())
                    cfg.providers.emplace(name, ProviderConfig::from_json(val, name));
            }
        }
        // implicit provider backing the built-in offline method
        if (!cfg.providers.count("mock-rf")) {
            ProviderConfig mock;
            mock.name = "mock-rf";
            mock.type = "mock-rf";
            cfg.providers.emplace("mock-rf", mock);
        }

        cfg.output_dir = j.contains("output_dir")
                             ? detail::resolve_relative(path, j["output_dir"].get<std::string>())
                             : "results";
        cfg.cache_dir_explicit = j.contains("cache_dir");
        cfg.cache_dir = cfg.cache_dir_explicit
                            ? detail::resolve_relative(path, j["cache_dir"].get<std::string>())
                            : cfg.output_dir + "/llm-cache";
        const std::string timing = j.value("timing", std::string("wall"));
        if (timing == "wall") cfg.record_timing = true;
        else if (timing == "none") cfg.record_timing = false;
        else throw ConfigError("'timing' must be wall or none");
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config " + path + ": " + e.what());
    }

    for (const auto& m : cfg.methods)
        if (m.is_llm && !cfg.providers.count(m.provider))
            throw ConfigError("method '" + m.id + "' references unknown provider '" +
                              m.provider + "'");
    for (const auto& d : cfg.datasets)
        if (!std::filesystem::exists(d.path))
            throw ConfigError("dataset file does not exist: " + d.path);
    return cfg;
}

} // namespace fsbench
