#pragma once

#include <chrono>
#include <future>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "fsbench/core/error.hpp"
#include "fsbench/core/timer.hpp"
#include "fsbench/data/dataset.hpp"
#include "fsbench/llm/cache.hpp"
#include "fsbench/llm/exchange.hpp"
#include "fsbench/llm/prompt.hpp"
#include "fsbench/llm/provider.hpp"
#include "fsbench/llm/score_parse.hpp"
#include "fsbench/select/feature_scores.hpp"

namespace fsbench {

/// Blocking token-bucket rate limiter shared by concurrent provider calls.
class TokenBucket {
public:
    explicit TokenBucket(double per_second) : rate_(per_second), tokens_(per_second) {}

    void acquire() {
        if (rate_ <= 0.0) return;
        for (;;) {
            std::unique_lock<std::mutex> lock(mu_);
            refill();
            if (tokens_ >= 1.0) {
                tokens_ -= 1.0;
                return;
            }
            lock.unlock();
            std::this_thread::sleep_for(std::chrono::milliseconds(10));
        }
    }

private:
    void refill() {
        const auto now = SteadyClock::now();
        const std::chrono::duration<double> dt = now - last_;
        tokens_ = std::min(rate_, tokens_ + dt.count() * rate_);
        last_ = now;
    }

    double rate_;
    double tokens_;
    SteadyClock::time_point last_ = SteadyClock::now();
    std::mutex mu_;
};

/// One provider exchange: consult the cache first, otherwise make the call
/// and persist the record. An empty response body is an error and caches
/// nothing. `bypass_cache_read` forces a fresh call (used by re-prompts).
inline LlmExchange call_provider(const PromptSpec& spec, Provider& provider,
                                 const ProviderConfig& cfg, ExchangeCache* cache = nullptr,
                                 bool bypass_cache_read = false) {
    LlmExchange ex;
    ex.provider = cfg.name;
    ex.model = cfg.model_id();
    ex.temperature = cfg.temperature;
    ex.prompt = spec;
    ex.cache_key = exchange_cache_key(ex.model, ex.temperature, spec.rendered);

    if (cache && !bypass_cache_read) {
        if (auto hit = cache->lookup(ex.cache_key)) return *hit;
    }
    const auto result = provider.complete(spec);
    if (result.raw.empty()) throw ProviderError("provider returned an empty body");
    ex.raw_response = result.raw;
    ex.latency_seconds = result.latency_seconds;
    ex.from_cache = false;
    if (cache) cache->store(ex);
    return ex;
}

enum class LlmPipeline { direct, hybrid };

inline const char* to_string(LlmPipeline p) {
    return p == LlmPipeline::direct ? "direct" : "hybrid";
}

/// Editable text blocks for the direct pipeline (defaults are generated from
/// the dataset when left empty).
struct DirectPromptAssets {
    std::string context;
    std::string description;
    std::string examples;
    std::string cot;
};

namespace detail {

inline std::string default_direct_context(const Dataset& ds) {
    return "Rate how important each feature of the dataset \"" + ds.name +
           "\" is for predicting \"Class\".";
}

inline std::string default_description(const Dataset& ds) {
    std::string out = "The dataset \"" + ds.name + "\" has " +
                      std::to_string(ds.n_features()) + " features: ";
    for (std::size_t f = 0; f < ds.n_features(); ++f) {
        if (f) out += ", ";
        out += ds.features[f].name;
    }
    out += ". The target column is \"Class\".";
    return out;
}

inline std::string default_hybrid_context(const Dataset& ds) {
    return "Dataset: " + ds.name + ".";
}

/// Validate, tag and (re-)store one exchange. Throws ScoreValidationError and
/// evicts the record on failure so a re-prompt reaches the provider again.
inline void validate_exchange(LlmExchange& ex, const std::vector<std::string>& expected,
                              ExchangeCache* cache) {
    try {
        ex.entries = parse_scores(ex.raw_response, expected);
        ex.valid = true;
        if (cache && !ex.from_cache) cache->store(ex);
    } catch (const ScoreValidationError&) {
        ex.valid = false;
        if (cache) cache->evict(ex.cache_key);
        throw;
    }
}

inline LlmExchange exchange_with_retries(const PromptSpec& spec, Provider& provider,
                                         const ProviderConfig& cfg, ExchangeCache* cache,
                                         const std::vector<std::string>& expected) {
    for (int attempt = 0;; ++attempt) {
        auto ex = call_provider(spec, provider, cfg, cache, /*bypass=*/attempt > 0);
        try {
            validate_exchange(ex, expected, cache);
            return ex;
        } catch (const ScoreValidationError&) {
            if (attempt >= cfg.retry_budget) throw;
        }
    }
}

} // namespace detail

/// Run one LLM selection pipeline and assemble FeatureScores. The direct
/// pipeline makes one call per feature (optionally concurrent, rate limited);
/// the hybrid pipeline sends one prompt with a stratified CSV sample. Invalid
/// payloads are re-prompted up to the retry budget. Recorded runtime is the
/// summed latency of fresh (non-cached) calls.
inline FeatureScores llm_feature_scores(const Dataset& ds, const Split& split,
                                        LlmPipeline pipeline, const ProviderConfig& cfg,
                                        std::uint64_t seed, Provider& provider,
                                        ExchangeCache* cache = nullptr,
                                        const DirectPromptAssets& assets = {}) {
    const auto names = ds.feature_names();
    double fresh_latency = 0.0;
    std::vector<double> values(names.size(), 0.0);

    if (pipeline == LlmPipeline::hybrid) {
        const std::size_t n = std::min<std::size_t>(cfg.sample_rows,
                                                    split.train_indices.size());
        const auto csv = sample_for_prompt(ds, n, seed, &split);
        const auto spec = build_hybrid_prompt(ds, csv, detail::default_hybrid_context(ds));
        const auto ex = detail::exchange_with_retries(spec, provider, cfg, cache, names);
        if (!ex.from_cache) fresh_latency += ex.latency_seconds;
        for (std::size_t f = 0; f < names.size(); ++f) values[f] = ex.entries[f].score;
    } else {
        const std::string context =
            assets.context.empty() ? detail::default_direct_context(ds) : assets.context;
        const std::string description =
            assets.description.empty() ? detail::default_description(ds) : assets.description;

        TokenBucket bucket(cfg.requests_per_second);
        std::mutex latency_mu;
        auto score_one = [&](std::size_t f) {
            const auto spec = build_direct_prompt(ds, names[f], context, description,
                                                  assets.examples, assets.cot);
            bucket.acquire();
            const auto ex = detail::exchange_with_retries(spec, provider, cfg, cache,
                                                          {names[f]});
            if (!ex.from_cache) {
                std::lock_guard<std::mutex> lock(latency_mu);
                fresh_latency += ex.latency_seconds;
            }
            values[f] = ex.entries[0].score;
        };

        if (cfg.max_in_flight <= 1) {
            for (std::size_t f = 0; f < names.size(); ++f) score_one(f);
        } else {
            std::vector<std::future<void>> running;
            for (std::size_t f = 0; f < names.size(); ++f) {
                if (running.size() >= static_cast<std::size_t>(cfg.max_in_flight)) {
                    running.front().get();
                    running.erase(running.begin());
                }
                running.push_back(std::async(std::launch::async, score_one, f));
            }
            for (auto& fut : running) fut.get();
        }
    }

    auto fs = make_feature_scores(cfg.name + "/" + cfg.model_id() + "/" + to_string(pipeline),
                                  ds.name, names, values, seed);
    fs.runtime_seconds = std::max(fresh_latency, 1e-9);
    return fs;
}

} // namespace fsbench
