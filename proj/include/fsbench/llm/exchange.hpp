#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "json.hpp"

#include "fsbench/core/hash.hpp"
#include "fsbench/llm/prompt.hpp"
#include "fsbench/llm/score_parse.hpp"

namespace fsbench {

/// One provider round trip: prompt, verbatim raw response, parsed entries,
/// validation verdict and latency. Serialized as the cache record.
struct LlmExchange {
    std::string provider;
    std::string model;
    double temperature = 0.0;
    PromptSpec prompt;
    std::string raw_response;
    std::vector<LlmScoreEntry> entries;
    bool valid = false;
    double latency_seconds = 0.0;
    std::string cache_key;
    bool from_cache = false; // transient, not serialized
};

inline std::string exchange_cache_key(const std::string& model, double temperature,
                                      const std::string& rendered_prompt) {
    char temp_buf[32];
    std::snprintf(temp_buf, sizeof(temp_buf), "%.17g", temperature);
    std::uint64_t h = fnv1a64(model);
    h = fnv1a64("\x1f", h);
    h = fnv1a64(temp_buf, h);
    h = fnv1a64("\x1f", h);
    h = fnv1a64(rendered_prompt, h);
    return hex64(h);
}

inline nlohmann::json exchange_to_json(const LlmExchange& ex) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : ex.entries)
        entries.push_back({{"concept", e.feature_name}, {"reasoning", e.reasoning},
                           {"score", e.score}});
    return nlohmann::json{
        {"provider", ex.provider},
        {"model", ex.model},
        {"temperature", ex.temperature},
        {"prompt",
         {{"kind", ex.prompt.kind == PromptKind::direct ? "direct" : "hybrid"},
          {"feature", ex.prompt.feature},
          {"rendered", ex.prompt.rendered}}},
        {"raw_response", ex.raw_response},
        {"entries", entries},
        {"valid", ex.valid},
        {"latency_seconds", ex.latency_seconds},
        {"cache_key", ex.cache_key}};
}

inline LlmExchange exchange_from_json(const nlohmann::json& j) {
    LlmExchange ex;
    ex.provider = j.at("provider").get<std::string>();
    ex.model = j.at("model").get<std::string>();
    ex.temperature = j.at("temperature").get<double>();
    ex.prompt.kind = j.at("prompt").at("kind").get<std::string>() == "hybrid"
                         ? PromptKind::hybrid
                         : PromptKind::direct;
    ex.prompt.feature = j.at("prompt").value("feature", std::string());
    ex.prompt.rendered = j.at("prompt").at("rendered").get<std::string>();
    ex.raw_response = j.at("raw_response").get<std::string>();
    for (const auto& e : j.at("entries")) {
        LlmScoreEntry entry;
        entry.feature_name = e.at("concept").get<std::string>();
        entry.reasoning = e.value("reasoning", std::string());
        entry.score = e.at("score").get<double>();
        ex.entries.push_back(std::move(entry));
    }
    ex.valid = j.at("valid").get<bool>();
    ex.latency_seconds = j.at("latency_seconds").get<double>();
    ex.cache_key = j.at("cache_key").get<std::string>();
    return ex;
}

} // namespace fsbench
