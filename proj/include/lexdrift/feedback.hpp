#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lexdrift/collection.hpp"
#include "lexdrift/decade.hpp"
#include "lexdrift/index.hpp"
#include "lexdrift/retrieval.hpp"

namespace lexdrift {

/// Term -> probability. Ordered by term so every traversal is deterministic.
using TermDistribution = std::map<std::string, double>;

struct WeightedTerm {
    std::string term;
    double weight = 0.0;

    friend bool operator==(WeightedTerm const&, WeightedTerm const&) = default;
};

/// Original-query weight used when RM3 interpolation is switched on without
/// an explicit lambda.
inline constexpr double kRm3Lambda = 0.6;

struct FeedbackConfig {
    std::size_t fb_docs = 100;
    std::size_t fb_terms = 100;
    /// Dirichlet prior used inside the query likelihood P(Q|d).
    double mu = 1000.0;
    /// Weight of the original query in the RM3 mixture; 0 keeps pure RM1.
    double lambda = 0.0;
    Bm25Params bm25;
};

/// Expansion terms estimated for one keyword on one collection, or the
/// absent marker when the keyword does not occur in that collection.
struct ExpandedQuery {
    bool absent = true;
    std::string query;
    Decade origin = Decade::Full;
    /// Weight-descending, ties broken by term; weights sum to 1.
    std::vector<WeightedTerm> terms;
    std::size_t fb_docs = 0;
    std::size_t fb_terms = 0;

    [[nodiscard]] static ExpandedQuery make_absent(std::string query, Decade origin);

    [[nodiscard]] std::set<std::string> term_set() const;
    [[nodiscard]] std::set<std::string> top_terms(std::size_t n) const;
    [[nodiscard]] TermDistribution distribution() const;
    [[nodiscard]] WeightedQuery to_weighted_query() const;

    friend bool operator==(ExpandedQuery const&, ExpandedQuery const&) = default;
};

/// Relevance model (RM1) over the top `fb_docs` first-stage BM25 results:
///
///   P(w|R) ∝ Σ_d P_ml(w|d) · Π_q (tf(q,d) + μ·cf(q)/|C|) / (|d| + μ)
///
/// normalised over every term occurring in the feedback documents. Returns
/// nullopt when any query term is out of vocabulary. Fewer matching
/// documents than `fb_docs` is allowed and logged.
[[nodiscard]] std::optional<TermDistribution> estimate_rm1(Index const& index,
                                                           std::span<std::string const> query_terms,
                                                           std::size_t fb_docs, double mu,
                                                           Bm25Params params = {});

/// Keeps the `fb_terms` heaviest terms (ties by term) and rescales them to sum to 1.
[[nodiscard]] std::vector<WeightedTerm> truncate_renormalize(TermDistribution const& dist,
                                                             std::size_t fb_terms);

/// λ·uniform(original) + (1-λ)·rm1, renormalised.
[[nodiscard]] TermDistribution interpolate_rm3(std::span<std::string const> original,
                                               TermDistribution const& rm1, double lambda);

/// Analyzes the keyword, estimates the relevance model on the chosen
/// collection's index, optionally mixes in the original query, and truncates.
/// Throws NotFoundError for a collection that is not part of the corpus and
/// ValidationError for a keyword with no indexable terms.
[[nodiscard]] ExpandedQuery expand_query(PartitionedCorpus const& corpus, Decade collection,
                                         std::string_view keyword, FeedbackConfig const& config);

} // namespace lexdrift
