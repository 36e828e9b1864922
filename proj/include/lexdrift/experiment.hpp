#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lexdrift/collection.hpp"
#include "lexdrift/config.hpp"
#include "lexdrift/feedback.hpp"
#include "lexdrift/metrics.hpp"

namespace lexdrift {

/// All results for one keyword.
struct QueryResult {
    QueryEntry entry;
    /// One expansion per collection label (decades and FULL).
    std::map<Decade, ExpandedQuery> expansions;
    /// τ between the FULL-collection ranked lists retrieved with the FULL
    /// expansion and with each decade's expansion. nullopt marks an absent
    /// keyword, never a zero.
    std::map<Decade, std::optional<double>> tau;
};

struct ReportBundle {
    PipelineParams params;
    /// Populated decades followed by FULL.
    std::vector<Decade> labels;
    std::vector<QueryResult> queries;
    ComparisonMatrix jaccard;
    ComparisonMatrix jsd;

    [[nodiscard]] std::vector<Decade> decades() const;
    /// Throws NotFoundError for an unknown keyword.
    [[nodiscard]] QueryResult const& query(std::string_view keyword) const;
};

/// Runs the comparison protocol for every keyword:
///   1. expand the keyword on FULL and on every decade;
///   2. retrieve from the FULL index with each expansion to `params.depth`;
///   3. τ between the FULL-expansion list and each decade-expansion list;
///   4. per collection pair, Jaccard of the term sets and JSD of the weights;
///   5. aggregate both over the keywords into mean/std matrices.
/// Absent expansions are excluded from aggregation and propagate as markers.
[[nodiscard]] ReportBundle run_pipeline(PartitionedCorpus const& corpus, QuerySet const& queries,
                                        PipelineParams const& params);

/// Builds one comparison matrix from per-query expansions. Shared by the
/// pipeline and the service so both report identical numbers.
[[nodiscard]] ComparisonMatrix pair_matrix(std::vector<QueryResult> const& queries,
                                           std::vector<Decade> const& labels, Metric metric,
                                           LogBase js_base);

struct TermCell {
    std::string term;
    double weight = 0.0;
    /// Also among the top-n of at least one other collection for this keyword.
    bool shared = false;
};

struct TermTableRow {
    Decade collection = Decade::Full;
    bool absent = false;
    std::vector<TermCell> terms;
};

/// Rows for every collection with the top_n terms and overlap marks.
[[nodiscard]] std::vector<TermTableRow> term_table(ReportBundle const& bundle,
                                                   std::string_view keyword, std::size_t top_n);

/// Markdown table for one keyword: shared terms in bold, absent rows marked.
[[nodiscard]] std::string render_term_table(ReportBundle const& bundle, std::string_view keyword,
                                            std::size_t top_n);
[[nodiscard]] std::string render_term_tables(ReportBundle const& bundle);

[[nodiscard]] std::string render_tau_csv(ReportBundle const& bundle);

/// `row,col,mean,std,n`, one line per ordered label pair.
[[nodiscard]] std::string render_pair_csv(ComparisonMatrix const& matrix);

/// Combined markdown matrix: Jaccard above the diagonal, JSD below, each
/// cell as a mean row over a "(std)" row, diagonal "1" over "(0)".
[[nodiscard]] std::string render_matrix_markdown(ReportBundle const& bundle);

/// Mean/std cell text at four decimals, e.g. {"0.4491", "(0.1484)"}.
[[nodiscard]] std::pair<std::string, std::string> format_cell(MetricCell const& cell);

inline constexpr std::string_view kAbsentMarker = "absent";

/// Writes term_tables.md, tau.csv, pairs_jaccard.csv, pairs_jsd.csv and matrix.md.
void write_reports(ReportBundle const& bundle, std::filesystem::path const& out_dir);

} // namespace lexdrift
