#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "fsbench/core/error.hpp"
#include "fsbench/llm/exchange.hpp"

namespace fsbench {

struct CacheEntryInfo {
    std::string key;
    std::string provider;
    std::string model;
    bool valid = false;
};

/// Directory of JSON exchange records keyed by hex hash. Writes are
/// serialized and go through a temp-file rename so concurrent readers never
/// observe a partial record.
class ExchangeCache {
public:
    explicit ExchangeCache(std::filesystem::path dir) : dir_(std::move(dir)) {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec) throw ConfigError("cannot create cache directory " + dir_.string());
    }

    const std::filesystem::path& dir() const { return dir_; }

    std::optional<LlmExchange> lookup(const std::string& key) const {
        const auto path = record_path(key);
        std::ifstream in(path);
        if (!in) return std::nullopt;
        try {
            nlohmann::json j;
            in >> j;
            auto ex = exchange_from_json(j);
            ex.from_cache = true;
            return ex;
        } catch (const std::exception&) {
            return std::nullopt; // unreadable record behaves like a miss
        }
    }

    void store(const LlmExchange& ex) {
        std::lock_guard<std::mutex> lock(mu_);
        const auto path = record_path(ex.cache_key);
        const auto tmp = path.string() + ".tmp";
        {
            std::ofstream out(tmp, std::ios::trunc);
            if (!out) throw ProviderError("cannot write cache record " + path.string());
            out << exchange_to_json(ex).dump(2) << '\n';
        }
        std::filesystem::rename(tmp, path);
    }

    void evict(const std::string& key) {
        std::lock_guard<std::mutex> lock(mu_);
        std::error_code ec;
        std::filesystem::remove(record_path(key), ec);
    }

    std::vector<CacheEntryInfo> list() const {
        std::vector<CacheEntryInfo> out;
        for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
            if (entry.path().extension() != ".json") continue;
            std::ifstream in(entry.path());
            if (!in) continue;
            try {
                nlohmann::json j;
                in >> j;
                const auto ex = exchange_from_json(j);
                out.push_back({ex.cache_key, ex.provider, ex.model, ex.valid});
            } catch (const std::exception&) {
                out.push_back({entry.path().stem().string(), "?", "?", false});
            }
        }
        std::sort(out.begin(), out.end(),
                  [](const auto& a, const auto& b) { return a.key < b.key; });
        return out;
    }

    std::size_t clear() {
        std::lock_guard<std::mutex> lock(mu_);
        std::size_t removed = 0;
        for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
            if (entry.path().extension() != ".json") continue;
            std::error_code ec;
            if (std::filesystem::remove(entry.path(), ec)) ++removed;
        }
        return removed;
    }

private:
    std::filesystem::path record_path(const std::string& key) const {
        return dir_ / (key + ".json");
    }

    std::filesystem::path dir_;
    mutable std::mutex mu_;
};

} // namespace fsbench
