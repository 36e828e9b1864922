#include "lexdrift/experiment.hpp"

#include <fstream>
#include <set>

#include <fmt/format.h>

#include "lexdrift/errors.hpp"
#include "lexdrift/parallel.hpp"

namespace lexdrift {

namespace {

std::string fixed4(double v) { return fmt::format("{:.4f}", v); }

void write_file(std::filesystem::path const& path, std::string const& contents)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out << contents;
}

} // namespace

std::vector<Decade> ReportBundle::decades() const
{
    std::vector<Decade> out;
    for (auto d : labels) {
        if (d != Decade::Full) {
            out.push_back(d);
        }
    }
    return out;
}

QueryResult const& ReportBundle::query(std::string_view keyword) const
{
    for (auto const& q : queries) {
        if (q.entry.keyword == keyword) {
            return q;
        }
    }
    throw NotFoundError("unknown query '" + std::string(keyword) + "'");
}

ComparisonMatrix pair_matrix(std::vector<QueryResult> const& queries,
                             std::vector<Decade> const& labels, Metric metric, LogBase js_base)
{
    if (metric == Metric::Tau) {
        throw ValidationError("tau is reported per query and decade, not per collection pair");
    }
    ComparisonMatrix m;
    m.metric = metric;
    m.labels = labels;
    for (auto row : labels) {
        for (auto col : labels) {
            std::vector<double> values;
            for (auto const& q : queries) {
                auto const& a = q.expansions.at(row);
                auto const& b = q.expansions.at(col);
                if (a.absent || b.absent) {
                    continue;
                }
                values.push_back(metric == Metric::Jaccard
                                     ? jaccard(a.term_set(), b.term_set())
                                     : js_divergence(a.distribution(), b.distribution(), js_base));
            }
            m.cells.emplace(std::pair{row, col}, aggregate(values, metric));
        }
    }
    return m;
}

ReportBundle run_pipeline(PartitionedCorpus const& corpus, QuerySet const& queries,
                          PipelineParams const& params)
{
    ReportBundle bundle;
    bundle.params = params;
    bundle.labels = corpus.labels();
    auto const decades = corpus.decades();
    auto const& full = corpus.require_index(Decade::Full);

    auto const nq = queries.entries.size();
    auto const nl = bundle.labels.size();

    std::vector<ExpandedQuery> expansions(nq * nl);
    parallel_for(nq * nl, params.threads, [&](std::size_t i) {
        auto const& kw = queries.entries[i / nl].keyword;
        expansions[i] = expand_query(corpus, bundle.labels[i % nl], kw, params.feedback);
    });

    // Second stage: every expansion retrieves from the full collection.
    std::vector<std::optional<RankedList>> lists(nq * nl);
    parallel_for(nq * nl, params.threads, [&](std::size_t i) {
        if (!expansions[i].absent) {
            lists[i] = search(full, expansions[i].to_weighted_query(), params.depth,
                              params.feedback.bm25);
        }
    });

    std::size_t const full_slot = nl - 1;
    bundle.queries.resize(nq);
    for (std::size_t q = 0; q < nq; ++q) {
        auto& result = bundle.queries[q];
        result.entry = queries.entries[q];
        for (std::size_t l = 0; l < nl; ++l) {
            result.expansions.emplace(bundle.labels[l], std::move(expansions[q * nl + l]));
        }
        auto const& full_list = lists[q * nl + full_slot];
        for (std::size_t l = 0; l < decades.size(); ++l) {
            auto const& decade_list = lists[q * nl + l];
            std::optional<double> tau;
            if (full_list && decade_list && !(full_list->empty() && decade_list->empty())) {
                tau = kendall_tau(*full_list, *decade_list);
            }
            result.tau.emplace(decades[l], tau);
        }
    }

    bundle.jaccard = pair_matrix(bundle.queries, bundle.labels, Metric::Jaccard, params.js_base);
    bundle.jsd = pair_matrix(bundle.queries, bundle.labels, Metric::Jsd, params.js_base);
    return bundle;
}

std::vector<TermTableRow> term_table(ReportBundle const& bundle, std::string_view keyword,
                                     std::size_t top_n)
{
    auto const& q = bundle.query(keyword);
    std::vector<TermTableRow> rows;
    for (auto d : bundle.labels) {
        auto const& eq = q.expansions.at(d);
        TermTableRow row;
        row.collection = d;
        row.absent = eq.absent;
        for (std::size_t i = 0; i < std::min(top_n, eq.terms.size()); ++i) {
            row.terms.push_back({eq.terms[i].term, eq.terms[i].weight, false});
        }
        rows.push_back(std::move(row));
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (auto& cell : rows[r].terms) {
            for (std::size_t o = 0; o < rows.size() && !cell.shared; ++o) {
                if (o == r) {
                    continue;
                }
                for (auto const& other : rows[o].terms) {
                    if (other.term == cell.term) {
                        cell.shared = true;
                        break;
                    }
                }
            }
        }
    }
    return rows;
}

std::string render_term_table(ReportBundle const& bundle, std::string_view keyword,
                              std::size_t top_n)
{
    auto const& q = bundle.query(keyword);
    std::string out = fmt::format("## {} ({})\n\n", q.entry.keyword, to_string(q.entry.category));
    out += "| Collection | Years | Feedback terms |\n|---|---|---|\n";
    for (auto const& row : term_table(bundle, keyword, top_n)) {
        out += fmt::format("| {} | {} | ", to_string(row.collection), year_span(row.collection));
        if (row.absent) {
            out += "_absent_";
        } else {
            for (std::size_t i = 0; i < row.terms.size(); ++i) {
                if (i > 0) {
                    out += ", ";
                }
                auto const& cell = row.terms[i];
                out += cell.shared ? fmt::format("**{}**", cell.term) : cell.term;
            }
        }
        out += " |\n";
    }
    return out;
}

std::string render_term_tables(ReportBundle const& bundle)
{
    std::string out = fmt::format(
        "# Top {} feedback terms per collection\n\n"
        "Bold terms also appear in the top {} of another collection for the same keyword. "
        "_absent_ marks a collection where the keyword does not occur.\n\n",
        bundle.params.top_n, bundle.params.top_n);
    for (auto const& q : bundle.queries) {
        out += render_term_table(bundle, q.entry.keyword, bundle.params.top_n);
        out += '\n';
    }
    return out;
}

std::string render_tau_csv(ReportBundle const& bundle)
{
    std::string out = "query";
    auto const decades = bundle.decades();
    for (auto d : decades) {
        out += ',';
        out += to_string(d);
    }
    out += '\n';
    for (auto const& q : bundle.queries) {
        out += q.entry.keyword;
        for (auto d : decades) {
            out += ',';
            auto const& tau = q.tau.at(d);
            out += tau ? fixed4(*tau) : std::string(kAbsentMarker);
        }
        out += '\n';
    }
    return out;
}

std::string render_pair_csv(ComparisonMatrix const& matrix)
{
    std::string out = "row,col,mean,std,n\n";
    for (auto row : matrix.labels) {
        for (auto col : matrix.labels) {
            auto const& cell = matrix.at(row, col);
            if (cell.absent()) {
                out += fmt::format("{},{},{},{},0\n", to_string(row), to_string(col), kAbsentMarker,
                                   kAbsentMarker);
            } else {
                out += fmt::format("{},{},{},{},{}\n", to_string(row), to_string(col),
                                   fixed4(cell.mean), fixed4(cell.std), cell.n);
            }
        }
    }
    return out;
}

std::pair<std::string, std::string> format_cell(MetricCell const& cell)
{
    if (cell.absent()) {
        return {"–", ""};
    }
    return {fixed4(cell.mean), "(" + fixed4(cell.std) + ")"};
}

std::string render_matrix_markdown(ReportBundle const& bundle)
{
    auto const& labels = bundle.labels;
    std::string out = fmt::format(
        "# Feedback term distributions across collections\n\n"
        "Upper triangle: Jaccard similarity of the expansion term sets. "
        "Lower triangle: JS divergence (log base {}) of the expansion weights. "
        "Each cell is the mean over keywords with the population standard deviation in "
        "brackets.\n\n",
        bundle.params.js_base == LogBase::Two ? "2" : "e");

    out += "|  |";
    for (auto d : labels) {
        out += fmt::format(" {} |", to_string(d));
    }
    out += "\n|---|";
    for (std::size_t i = 0; i < labels.size(); ++i) {
        out += "---|";
    }
    out += '\n';

    for (std::size_t r = 0; r < labels.size(); ++r) {
        std::string means = fmt::format("| {} |", to_string(labels[r]));
        std::string stds = "|  |";
        for (std::size_t c = 0; c < labels.size(); ++c) {
            std::pair<std::string, std::string> text;
            if (r == c) {
                auto const& cell = bundle.jaccard.at(labels[r], labels[c]);
                text = cell.absent() ? format_cell(cell)
                                     : std::pair<std::string, std::string>{"1", "(0)"};
            } else if (c > r) {
                text = format_cell(bundle.jaccard.at(labels[r], labels[c]));
            } else {
                text = format_cell(bundle.jsd.at(labels[r], labels[c]));
            }
            means += fmt::format(" {} |", text.first);
            stds += fmt::format(" {} |", text.second);
        }
        out += means + '\n' + stds + '\n';
    }
    return out;
}

void write_reports(ReportBundle const& bundle, std::filesystem::path const& out_dir)
{
    std::filesystem::create_directories(out_dir);
    write_file(out_dir / "term_tables.md", render_term_tables(bundle));
    write_file(out_dir / "tau.csv", render_tau_csv(bundle));
    write_file(out_dir / "pairs_jaccard.csv", render_pair_csv(bundle.jaccard));
    write_file(out_dir / "pairs_jsd.csv", render_pair_csv(bundle.jsd));
    write_file(out_dir / "matrix.md", render_matrix_markdown(bundle));
}

} // namespace lexdrift
