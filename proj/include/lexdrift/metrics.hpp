#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lexdrift/decade.hpp"
#include "lexdrift/feedback.hpp"
#include "lexdrift/retrieval.hpp"

namespace lexdrift {

enum class Metric { Jaccard, Jsd, Tau };

[[nodiscard]] std::string_view to_string(Metric m) noexcept;
[[nodiscard]] std::optional<Metric> parse_metric(std::string_view name) noexcept;

enum class LogBase { Two, E };

/// |a ∩ b| / |a ∪ b|; 1 when both sets are empty.
[[nodiscard]] double jaccard(std::set<std::string> const& a, std::set<std::string> const& b);

/// Kendall's τ-b between two ranked lists over the union of their documents.
///
/// A document's rank variable is its position in the list, with equal scores
/// sharing the rank of the first of them; a document missing from a list is
/// ranked depth+1 there, so all absentees tie. Ties are corrected for in the
/// τ-b denominator. If either side has no rank variation at all the
/// denominator vanishes and the result is 0.
///
/// O(n log n) via Knight's merge-sort algorithm. Throws ValidationError when
/// both lists are empty.
[[nodiscard]] double kendall_tau(RankedList const& a, RankedList const& b);

/// Rank variables for kendall_tau, exposed for inspection and testing.
struct RankPairs {
    std::vector<std::string> docs;
    std::vector<double> rank_a;
    std::vector<double> rank_b;
};
[[nodiscard]] RankPairs align_rankings(RankedList const& a, RankedList const& b);

/// Jensen-Shannon divergence with zero fill over the union of supports.
/// With base 2 the value lies in [0, 1]. Throws ValidationError when either
/// input does not sum to 1 within 1e-9 or holds a negative weight.
[[nodiscard]] double js_divergence(TermDistribution const& p, TermDistribution const& q,
                                   LogBase base = LogBase::Two);

struct MetricCell {
    Metric metric = Metric::Jaccard;
    double mean = 0.0;
    double std = 0.0;
    std::size_t n = 0;

    [[nodiscard]] bool absent() const noexcept { return n == 0; }

    friend bool operator==(MetricCell const&, MetricCell const&) = default;
};

/// Mean and population standard deviation. Empty input gives an absent cell.
[[nodiscard]] MetricCell aggregate(std::span<double const> values, Metric metric);

/// Mean/std of a metric for every ordered pair of collections.
struct ComparisonMatrix {
    Metric metric = Metric::Jaccard;
    std::vector<Decade> labels;
    std::map<std::pair<Decade, Decade>, MetricCell> cells;

    [[nodiscard]] MetricCell const& at(Decade row, Decade col) const { return cells.at({row, col}); }
};

} // namespace lexdrift
