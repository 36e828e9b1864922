#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lexdrift/decade.hpp"
#include "lexdrift/index.hpp"

namespace lexdrift {

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;
};

/// Term -> non-negative weight. Keyword queries use weight 1 per term.
struct WeightedQuery {
    std::map<std::string, double> terms;
    Decade origin = Decade::Full;

    [[nodiscard]] static WeightedQuery keywords(std::span<std::string const> terms,
                                                Decade origin = Decade::Full);

    /// Throws ValidationError unless weights are finite, non-negative and at
    /// least one is positive.
    void validate() const;
};

struct ScoredDoc {
    std::string doc_id;
    double score = 0.0;

    friend bool operator==(ScoredDoc const&, ScoredDoc const&) = default;
};

/// Scores are non-increasing; ties are ordered by ascending doc_id.
struct RankedList {
    std::vector<ScoredDoc> entries;
    std::size_t depth = 0;

    [[nodiscard]] bool empty() const noexcept { return entries.empty(); }
    [[nodiscard]] std::size_t size() const noexcept { return entries.size(); }

    friend bool operator==(RankedList const&, RankedList const&) = default;
};

/// ln(1 + (N - df + 0.5) / (df + 0.5)); always positive.
[[nodiscard]] double bm25_idf(std::uint64_t num_docs, std::uint64_t df) noexcept;

/// Saturated, length-normalised tf component times idf.
[[nodiscard]] double bm25_weight(double idf, std::uint32_t tf, std::uint32_t doc_len,
                                 double avg_doc_len, Bm25Params params) noexcept;

/// 0 when the term does not occur in the document. Throws NotFoundError for
/// an unknown doc_id.
[[nodiscard]] double bm25_term_score(Index const& index, std::string_view term,
                                     std::string_view doc_id, Bm25Params params = {});

/// Term-at-a-time BM25 over the query's indexed terms; only documents
/// containing at least one query term are ranked. A query with no indexed
/// terms yields an empty list.
[[nodiscard]] RankedList search(Index const& index, WeightedQuery const& query, std::size_t k,
                                Bm25Params params = {});

} // namespace lexdrift
