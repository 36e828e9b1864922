#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "lexdrift/feedback.hpp"
#include "lexdrift/metrics.hpp"
#include "lexdrift/porter.hpp"

namespace lexdrift {

enum class QueryCategory { Thematic, Plot, Genre };

[[nodiscard]] std::string_view to_string(QueryCategory c) noexcept;

struct QueryEntry {
    std::string keyword;
    QueryCategory category = QueryCategory::Thematic;
};

/// Keywords with their category; keywords are unique.
struct QuerySet {
    std::vector<QueryEntry> entries;

    /// The 25 keywords used by default, grouped thematic / plot / genre.
    [[nodiscard]] static QuerySet defaults();

    /// Lines of `keyword<TAB or spaces>category`; '#' starts a comment.
    [[nodiscard]] static QuerySet parse(std::string_view contents);
    [[nodiscard]] static QuerySet load(std::filesystem::path const& path);

    [[nodiscard]] std::vector<std::string> keywords() const;
};

/// Everything that determines the numbers in a report.
struct PipelineParams {
    FeedbackConfig feedback;
    /// Depth of the second-stage ranked lists compared with Kendall's tau.
    std::size_t depth = 1000;
    /// Terms per row in the term tables.
    std::size_t top_n = 15;
    LogBase js_base = LogBase::Two;
    unsigned threads = 0;

    /// Canonical `key=value` rendering; threads is excluded since it never
    /// changes results.
    [[nodiscard]] std::string canonical() const;
};

/// Parsed experiment config file.
///
/// Format: one `key = value` per line, '#' comments, blank lines ignored.
/// Numeric keys: fb_docs, fb_terms, lambda, mu, k1, b, depth, top_n,
/// js_base (2 or e), threads. Path keys (relative to the config file):
/// manifest, index_dir, queries, stopwords. Also porter = original | reference-c.
struct ExperimentConfig {
    PipelineParams params;
    std::filesystem::path manifest;
    std::filesystem::path index_dir;
    std::filesystem::path queries;
    std::filesystem::path stopwords;
    PorterVariant porter = PorterVariant::Original;

    [[nodiscard]] static ExperimentConfig parse(std::string_view contents,
                                                std::filesystem::path const& base_dir = {});
    [[nodiscard]] static ExperimentConfig load(std::filesystem::path const& path);
};

} // namespace lexdrift
