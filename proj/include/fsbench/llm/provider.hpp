#pragma once

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "httplib.h"
#include "json.hpp"

#include "fsbench/core/error.hpp"
#include "fsbench/core/timer.hpp"
#include "fsbench/data/dataset.hpp"
#include "fsbench/model/forest.hpp"
#include "fsbench/llm/prompt.hpp"

namespace fsbench {

struct ProviderConfig {
    std::string name = "provider";
    std::string type = "http"; // http | mock-rf | mock-echo | mock-malformed
    std::string endpoint;
    std::string model;
    double temperature = 0.1;
    std::string auth_env;              // environment variable holding the API token
    int retry_budget = 3;              // transport retries and invalid-payload re-prompts
    int max_in_flight = 1;             // direct-pipeline concurrency limit
    double requests_per_second = 0.0;  // token bucket; 0 = unlimited
    double http_timeout_seconds = 120.0;
    std::string fixture_path;          // mock-echo
    std::string malformed_kind = "no_json"; // mock-malformed
    std::uint64_t mock_seed = 7;       // mock-rf forest seed
    std::size_t sample_rows = 200;     // hybrid prompt sample size

    /// Model identifier used in cache keys and method tags.
    std::string model_id() const {
        if (!model.empty()) return model;
        if (type == "mock-rf") return "rf-oracle";
        if (type == "mock-echo") return "echo-fixture";
        if (type == "mock-malformed") return "malformed-" + malformed_kind;
        return type;
    }

    static ProviderConfig from_json(const nlohmann::json& j, const std::string& name) {
        ProviderConfig cfg;
        cfg.name = name;
        cfg.type = j.value("type", std::string("http"));
        cfg.endpoint = j.value("endpoint", std::string());
        cfg.model = j.value("model", std::string());
        cfg.temperature = j.value("temperature", 0.1);
        cfg.auth_env = j.value("auth_env", std::string());
        cfg.retry_budget = j.value("retry_budget", 3);
        cfg.max_in_flight = j.value("max_in_flight", 1);
        cfg.requests_per_second = j.value("requests_per_second", 0.0);
        cfg.http_timeout_seconds = j.value("http_timeout_seconds", 120.0);
        cfg.fixture_path = j.value("fixture_path", std::string());
        cfg.malformed_kind = j.value("malformed_kind", std::string("no_json"));
        cfg.mock_seed = j.value("mock_seed", std::uint64_t{7});
        cfg.sample_rows = j.value("sample_rows", std::size_t{200});
        if (cfg.type != "http" && cfg.type != "mock-rf" && cfg.type != "mock-echo" &&
            cfg.type != "mock-malformed")
            throw ConfigError("provider '" + name + "': unknown type '" + cfg.type + "'");
        if (cfg.type == "http" && cfg.endpoint.empty())
            throw ConfigError("provider '" + name + "': http provider needs an endpoint");
        if (cfg.type == "mock-echo" && cfg.fixture_path.empty())
            throw ConfigError("provider '" + name + "': mock-echo needs fixture_path");
        if (cfg.retry_budget < 0) throw ConfigError("retry_budget must be >= 0");
        return cfg;
    }
};

struct ProviderResult {
    std::string raw;
    double latency_seconds = 0.0;
};

class Provider {
public:
    virtual ~Provider() = default;
    virtual ProviderResult complete(const PromptSpec& spec) = 0;
    /// Number of complete() calls served so far (used by tests and accounting).
    std::size_t calls_made() const { return calls_; }

protected:
    std::size_t calls_ = 0;
};

/// Chat-completion client: POST {model, temperature, messages:[...]} to the
/// configured endpoint, bearer token from the environment. Transport failures
/// retry with exponential backoff; non-2xx responses fail immediately with
/// the provider payload attached.
class HttpProvider : public Provider {
public:
    explicit HttpProvider(ProviderConfig cfg) : cfg_(std::move(cfg)) {
        const auto scheme_end = cfg_.endpoint.find("://");
        if (scheme_end == std::string::npos)
            throw ConfigError("provider endpoint must include a scheme: " + cfg_.endpoint);
        const auto path_start = cfg_.endpoint.find('/', scheme_end + 3);
        if (path_start == std::string::npos) {
            base_ = cfg_.endpoint;
            path_ = "/";
        } else {
            base_ = cfg_.endpoint.substr(0, path_start);
            path_ = cfg_.endpoint.substr(path_start);
        }
    }

    ProviderResult complete(const PromptSpec& spec) override {
        ++calls_;
        const nlohmann::json body = {
            {"model", cfg_.model},
            {"temperature", cfg_.temperature},
            {"messages", nlohmann::json::array({nlohmann::json{
                            {"role", "user"}, {"content", spec.rendered}}})}};
        httplib::Headers headers;
        if (!cfg_.auth_env.empty()) {
            const char* token = std::getenv(cfg_.auth_env.c_str());
            if (!token)
                throw ProviderError("auth token environment variable not set: " +
                                    cfg_.auth_env);
            headers.emplace("Authorization", std::string("Bearer ") + token);
        }

        const auto start = SteadyClock::now();
        std::string last_error;
        for (int attempt = 0; attempt <= cfg_.retry_budget; ++attempt) {
            if (attempt > 0)
                std::this_thread::sleep_for(std::chrono::milliseconds(
                    250 * (1LL << (attempt - 1))));
            httplib::Client client(base_);
            client.set_connection_timeout(static_cast<int>(cfg_.http_timeout_seconds));
            client.set_read_timeout(static_cast<int>(cfg_.http_timeout_seconds));
            auto res = client.Post(path_, headers, body.dump(), "application/json");
            if (!res) {
                last_error = httplib::to_string(res.error());
                continue; // transport failure: retry
            }
            if (res->status < 200 || res->status >= 300)
                throw ProviderError("provider returned HTTP " +
                                    std::to_string(res->status) + ": " + res->body);
            const auto parsed = nlohmann::json::parse(res->body, nullptr, false);
            if (parsed.is_discarded() || !parsed.contains("choices") ||
                !parsed["choices"].is_array() || parsed["choices"].empty() ||
                !parsed["choices"][0].contains("message"))
                throw ProviderError("unexpected provider response shape: " + res->body);
            return {parsed["choices"][0]["message"].value("content", std::string()),
                    elapsed_seconds(start)};
        }
        throw ProviderError("network failure after " + std::to_string(cfg_.retry_budget) +
                            " retries: " + last_error);
    }

private:
    ProviderConfig cfg_;
    std::string base_, path_;
};

/// Deterministic offline stand-in: parses the CSV sample back out of the
/// hybrid prompt, runs the random-forest selector on it, and answers with the
/// importance scores in the required JSON shape. Tied scores are nudged apart
/// in 1e-6 steps so the distinctness rule holds without reordering.
class RfOracleMockProvider : public Provider {
public:
    explicit RfOracleMockProvider(std::uint64_t seed = 7) : seed_(seed) {}

    ProviderResult complete(const PromptSpec& spec) override {
        ++calls_;
        const std::string csv =
            spec.kind == PromptKind::hybrid && !spec.sample_csv.empty()
                ? spec.sample_csv
                : extract_sample_csv(spec.rendered);
        const Dataset sample = dataset_from_csv_text(csv, "Class", {}, {});
        Split all_train;
        all_train.train_indices.resize(sample.n_samples());
        std::iota(all_train.train_indices.begin(), all_train.train_indices.end(),
                  std::size_t{0});
        const Dataset imputed = impute_missing(sample, all_train);
        const auto model = fit_forest(imputed.X, imputed.y, ForestParams{}, seed_);
        auto values = group_importances(model, sample.column_groups);

        const auto names = sample.feature_names();
        const auto ranking = ranking_from_scores(names, values);
        std::vector<double> ranked_scores;
        for (const auto& n : ranking)
            ranked_scores.push_back(values[sample.feature_index(n)]);
        for (std::size_t i = ranked_scores.size(); i-- > 1;) {
            // walk worst-to-best, forcing strict decrease toward the tail
            if (ranked_scores[i - 1] <= ranked_scores[i])
                ranked_scores[i - 1] = ranked_scores[i] + 1e-6;
        }

        nlohmann::json payload = nlohmann::json::array();
        for (std::size_t r = 0; r < ranking.size(); ++r) {
            payload.push_back(
                {{"concept-" + std::to_string(r + 1), ranking[r]},
                 {"reasoning",
                  "The feature importance score is calculated using a random forest "
                  "classifier. A higher score indicates greater importance in "
                  "predicting the target variable."},
                 {"score", ranked_scores[r]}});
        }
        return {payload.dump(2), 0.0};
    }

private:
    std::uint64_t seed_;
};

/// Replays a stored response file.
class EchoFixtureProvider : public Provider {
public:
    explicit EchoFixtureProvider(std::string fixture_path)
        : fixture_path_(std::move(fixture_path)) {}

    ProviderResult complete(const PromptSpec&) override {
        ++calls_;
        std::ifstream in(fixture_path_, std::ios::binary);
        if (!in) throw ProviderError("cannot open fixture: " + fixture_path_);
        std::ostringstream buf;
        buf << in.rdbuf();
        return {buf.str(), 0.0};
    }

private:
    std::string fixture_path_;
};

/// Emits one of the invalid payload shapes for error-path tests.
class MalformedMockProvider : public Provider {
public:
    MalformedMockProvider(std::string kind, std::vector<std::string> features)
        : kind_(std::move(kind)), features_(std::move(features)) {
        if (kind_ != "no_json" && kind_ != "missing_feature" && kind_ != "out_of_range" &&
            kind_ != "duplicate_scores")
            throw ConfigError("mock-malformed: unknown kind '" + kind_ + "'");
    }

    ProviderResult complete(const PromptSpec&) override {
        ++calls_;
        if (kind_ == "no_json")
            return {"I am unable to provide importance scores at this time.", 0.0};
        nlohmann::json payload = nlohmann::json::array();
        const std::size_t n = features_.size();
        for (std::size_t i = 0; i < n; ++i) {
            if (kind_ == "missing_feature" && i + 1 == n) break;
            double score =
                0.9 - 0.8 * static_cast<double>(i) / static_cast<double>(std::max<std::size_t>(n, 2) - 1);
            if (kind_ == "out_of_range" && i == 0) score = 1.2;
            if (kind_ == "duplicate_scores") score = 0.5;
            payload.push_back({{"concept-" + std::to_string(i + 1), features_[i]},
                               {"reasoning", "mock"},
                               {"score", score}});
        }
        return {payload.dump(2), 0.0};
    }

private:
    std::string kind_;
    std::vector<std::string> features_;
};

/// Build a provider from configuration. The dataset supplies feature names
/// for the malformed mock and may be null for the other types.
inline std::unique_ptr<Provider> make_provider(const ProviderConfig& cfg,
                                               const Dataset* ds = nullptr) {
    if (cfg.type == "http") return std::make_unique<HttpProvider>(cfg);
    if (cfg.type == "mock-rf") return std::make_unique<RfOracleMockProvider>(cfg.mock_seed);
    if (cfg.type == "mock-echo") return std::make_unique<EchoFixtureProvider>(cfg.fixture_path);
    if (cfg.type == "mock-malformed") {
        if (!ds) throw ConfigError("mock-malformed provider needs a dataset context");
        return std::make_unique<MalformedMockProvider>(cfg.malformed_kind,
                                                       ds->feature_names());
    }
    throw ConfigError("unknown provider type: " + cfg.type);
}

} // namespace fsbench
