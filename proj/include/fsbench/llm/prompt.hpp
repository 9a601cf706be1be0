#pragma once

#include <string>
#include <string_view>

#include "fsbench/core/csv.hpp"
#include "fsbench/core/error.hpp"
#include "fsbench/data/dataset.hpp"

namespace fsbench {

enum class PromptKind { direct, hybrid };

// Hybrid main system prompt and response-format block. These are fixed wire
// text: downstream validation and the golden-file tests depend on the exact
// bytes, including the doubled typographic quotes around Class.
inline constexpr std::string_view kHybridSystemPrompt =
    "Please apply *random forest*, *forward sequential selection*, *backward "
    "sequential selection*, *recursive feature elimination (RFE)*, *minimum "
    "redundancy maximum relevance (MRMR)*, and *mutual information (MI)* separately "
    "to analyze the dataset samples. This is a classification task, where "
    "‘‘Class’’ represents the classification. Please analyze the "
    "importance scores of all features. The score range is [0.0, 1.0], and the score "
    "of each feature should be different. The output format is as follows, in JSON "
    "file format.";

inline constexpr std::string_view kHybridResponseFormat =
    "[\n"
    "  {\n"
    "    \"concept-1\": \"Glucose\",\n"
    "    \"reasoning\": \"The feature importance score is calculated using a random "
    "forest classifier. A higher score indicates greater importance in predicting "
    "the target variable.\",\n"
    "    \"score\": 0.95\n"
    "  }\n"
    "]";

/// One prompt for one provider call. For the direct pipeline the optional
/// description / examples / chain-of-thought blocks precede the context; the
/// hybrid pipeline carries the sample CSV instead.
struct PromptSpec {
    PromptKind kind = PromptKind::direct;
    std::string context;     // task description instruction context
    std::string description; // direct only, may be empty
    std::string examples;    // direct only, may be empty
    std::string cot;         // direct only, may be empty
    std::string sample_csv;  // hybrid only
    std::string feature;     // direct only: the feature being scored
    std::string rendered;
};

/// Per-feature semantic scoring prompt: description, few-shot examples and
/// chain-of-thought blocks (each omitted when empty) followed by the context
/// and a fixed single-entry response instruction.
inline PromptSpec build_direct_prompt(const Dataset& ds, const std::string& feature,
                                      const std::string& context,
                                      const std::string& description = "",
                                      const std::string& examples = "",
                                      const std::string& cot = "") {
    ds.feature_index(feature); // throws on unknown feature
    PromptSpec spec;
    spec.kind = PromptKind::direct;
    spec.context = context;
    spec.description = description;
    spec.examples = examples;
    spec.cot = cot;
    spec.feature = feature;

    std::string out;
    for (const std::string* block : {&description, &examples, &cot, &context}) {
        if (block->empty()) continue;
        if (!out.empty()) out += "\n\n";
        out += *block;
    }
    if (!out.empty()) out += "\n\n";
    out += "Provide the importance score of the feature \"" + feature +
           "\" for predicting \"Class\". The output format is as follows, in JSON "
           "file format.\n\n"
           "[\n"
           "  {\n"
           "    \"concept\": \"" + feature + "\",\n"
           "    \"reasoning\": \"...\",\n"
           "    \"score\": 0.0\n"
           "  }\n"
           "]\n\n"
           "The score range is [0.0, 1.0].";
    spec.rendered = std::move(out);
    return spec;
}

/// Hybrid prompt: context, then the verbatim system prompt and response
/// format, then the CSV sample. The sample must carry a "Class" header.
inline PromptSpec build_hybrid_prompt(const Dataset& ds, const std::string& sample_csv,
                                      const std::string& context) {
    (void)ds;
    if (sample_csv.empty()) throw DataError("build_hybrid_prompt: empty sample");
    const auto table = parse_csv(sample_csv);
    if (std::find(table.header.begin(), table.header.end(), "Class") == table.header.end())
        throw DataError("build_hybrid_prompt: sample is missing the \"Class\" header");

    PromptSpec spec;
    spec.kind = PromptKind::hybrid;
    spec.context = context;
    spec.sample_csv = sample_csv;

    std::string out;
    if (!context.empty()) out += context + "\n\n";
    out += "Main System Prompt\n\n";
    out += kHybridSystemPrompt;
    out += "\n\nFormat for Response\n\n";
    out += kHybridResponseFormat;
    out += "\n\nDataset Samples\n\n";
    out += sample_csv;
    spec.rendered = std::move(out);
    return spec;
}

/// Marker used to locate the CSV payload inside a rendered hybrid prompt.
inline constexpr std::string_view kDatasetSamplesMarker = "\n\nDataset Samples\n\n";

inline std::string extract_sample_csv(const std::string& rendered) {
    const auto pos = rendered.find(kDatasetSamplesMarker);
    if (pos == std::string::npos)
        throw ProviderError("prompt has no dataset samples section");
    return rendered.substr(pos + kDatasetSamplesMarker.size());
}

} // namespace fsbench
