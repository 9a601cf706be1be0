#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "fsbench/core/csv.hpp"
#include "fsbench/core/error.hpp"

namespace fsbench {

struct LlmScoreEntry {
    std::string feature_name;
    std::string reasoning;
    double score = 0.0;
};

enum class ScoreErrorKind {
    no_json_array,
    missing_feature,
    out_of_range,
    duplicate_score,
    unknown_feature,
    duplicate_feature,
};

inline const char* to_string(ScoreErrorKind k) {
    switch (k) {
    case ScoreErrorKind::no_json_array: return "no_json_array";
    case ScoreErrorKind::missing_feature: return "missing_feature";
    case ScoreErrorKind::out_of_range: return "out_of_range";
    case ScoreErrorKind::duplicate_score: return "duplicate_score";
    case ScoreErrorKind::unknown_feature: return "unknown_feature";
    case ScoreErrorKind::duplicate_feature: return "duplicate_feature";
    }
    return "?";
}

class ScoreValidationError : public ProviderError {
public:
    ScoreValidationError(ScoreErrorKind kind, const std::string& message,
                         std::string feature = "", double value = 0.0)
        : ProviderError("score validation (" + std::string(to_string(kind)) + "): " + message),
          kind_(kind), feature_(std::move(feature)), value_(value) {}

    ScoreErrorKind kind() const { return kind_; }
    const std::string& feature() const { return feature_; }
    double value() const { return value_; }

private:
    ScoreErrorKind kind_;
    std::string feature_;
    double value_;
};

namespace detail {

/// First parseable JSON array in free text, tolerating surrounding prose and
/// code fences. Bracket matching is string-aware; candidates that fail to
/// parse are skipped.
inline std::optional<nlohmann::json> extract_first_json_array(const std::string& text) {
    for (std::size_t pos = text.find('['); pos != std::string::npos;
         pos = text.find('[', pos + 1)) {
        int depth = 0;
        bool in_string = false, escaped = false;
        for (std::size_t i = pos; i < text.size(); ++i) {
            const char c = text[i];
            if (in_string) {
                if (escaped) escaped = false;
                else if (c == '\\') escaped = true;
                else if (c == '"') in_string = false;
                continue;
            }
            if (c == '"') in_string = true;
            else if (c == '[' || c == '{') ++depth;
            else if (c == ']' || c == '}') {
                --depth;
                if (depth == 0) {
                    const auto parsed = nlohmann::json::parse(
                        text.substr(pos, i - pos + 1), nullptr, false);
                    if (parsed.is_array()) return parsed;
                    break;
                }
            }
        }
    }
    return std::nullopt;
}

inline std::optional<LlmScoreEntry> entry_from_element(const nlohmann::json& el) {
    if (!el.is_object()) return std::nullopt;
    LlmScoreEntry entry;
    bool have_concept = false, have_score = false;
    for (const auto& [key, val] : el.items()) {
        if (!have_concept && (key == "concept" || key.rfind("concept-", 0) == 0) &&
            val.is_string()) {
            entry.feature_name = val.get<std::string>();
            have_concept = true;
        } else if (key == "reasoning" && val.is_string()) {
            entry.reasoning = val.get<std::string>();
        } else if (key == "score") {
            if (val.is_number()) {
                entry.score = val.get<double>();
                have_score = true;
            } else if (val.is_string()) {
                double v;
                if (parse_number(val.get<std::string>(), v)) {
                    entry.score = v;
                    have_score = true;
                }
            }
        }
    }
    if (!have_concept || !have_score) return std::nullopt;
    return entry;
}

} // namespace detail

/// Extract and validate score entries: every expected feature exactly once,
/// scores inside [0, 1], all values pairwise distinct. Returns entries in
/// expected-feature order.
inline std::vector<LlmScoreEntry> parse_scores(const std::string& raw,
                                               const std::vector<std::string>& expected) {
    const auto array = detail::extract_first_json_array(raw);
    if (!array)
        throw ScoreValidationError(ScoreErrorKind::no_json_array,
                                   "response contains no JSON array");

    std::vector<LlmScoreEntry> found;
    for (const auto& el : *array) {
        const auto entry = detail::entry_from_element(el);
        if (!entry) continue; // malformed element: surfaces as a missing feature
        const bool known =
            std::find(expected.begin(), expected.end(), entry->feature_name) != expected.end();
        if (!known)
            throw ScoreValidationError(ScoreErrorKind::unknown_feature,
                                       "unexpected feature '" + entry->feature_name + "'",
                                       entry->feature_name);
        for (const auto& prev : found)
            if (prev.feature_name == entry->feature_name)
                throw ScoreValidationError(ScoreErrorKind::duplicate_feature,
                                           "feature '" + entry->feature_name + "' scored twice",
                                           entry->feature_name);
        found.push_back(*entry);
    }

    std::vector<LlmScoreEntry> ordered;
    for (const auto& name : expected) {
        const auto it = std::find_if(found.begin(), found.end(),
                                     [&](const auto& e) { return e.feature_name == name; });
        if (it == found.end())
            throw ScoreValidationError(ScoreErrorKind::missing_feature,
                                       "feature '" + name + "' is missing", name);
        ordered.push_back(*it);
    }
    for (const auto& e : ordered)
        if (!(e.score >= 0.0 && e.score <= 1.0))
            throw ScoreValidationError(ScoreErrorKind::out_of_range,
                                       "score " + std::to_string(e.score) + " for '" +
                                           e.feature_name + "' outside [0, 1]",
                                       e.feature_name, e.score);
    for (std::size_t i = 0; i < ordered.size(); ++i)
        for (std::size_t j = i + 1; j < ordered.size(); ++j)
            if (ordered[i].score == ordered[j].score)
                throw ScoreValidationError(ScoreErrorKind::duplicate_score,
                                           "features '" + ordered[i].feature_name + "' and '" +
                                               ordered[j].feature_name + "' share score " +
                                               std::to_string(ordered[i].score),
                                           ordered[j].feature_name, ordered[j].score);
    return ordered;
}

} // namespace fsbench
