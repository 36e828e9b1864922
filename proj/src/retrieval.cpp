#include "lexdrift/retrieval.hpp"

#include <algorithm>
#include <cmath>

#include "lexdrift/errors.hpp"

namespace lexdrift {

WeightedQuery WeightedQuery::keywords(std::span<std::string const> terms, Decade origin)
{
    WeightedQuery q;
    q.origin = origin;
    for (auto const& t : terms) {
        q.terms[t] = 1.0;
    }
    return q;
}

void WeightedQuery::validate() const
{
    bool any_positive = false;
    for (auto const& [term, w] : terms) {
        if (!std::isfinite(w) || w < 0.0) {
            throw ValidationError("query weight for '" + term + "' must be finite and >= 0");
        }
        any_positive = any_positive || w > 0.0;
    }
    if (!any_positive) {
        throw ValidationError("query needs at least one positive weight");
    }
}

double bm25_idf(std::uint64_t num_docs, std::uint64_t df) noexcept
{
    auto const n = static_cast<double>(num_docs);
    auto const f = static_cast<double>(df);
    return std::log(1.0 + (n - f + 0.5) / (f + 0.5));
}

double bm25_weight(double idf, std::uint32_t tf, std::uint32_t doc_len, double avg_doc_len,
                   Bm25Params params) noexcept
{
    auto const f = static_cast<double>(tf);
    auto const norm = 1.0 - params.b + params.b * static_cast<double>(doc_len) / avg_doc_len;
    return idf * (f * (params.k1 + 1.0)) / (f + params.k1 * norm);
}

double bm25_term_score(Index const& index, std::string_view term, std::string_view doc_id,
                       Bm25Params params)
{
    auto const doc = index.find_doc(doc_id);
    if (!doc) {
        throw NotFoundError("unknown doc id '" + std::string(doc_id) + "'");
    }
    auto const tid = index.term_id(term);
    if (!tid) {
        return 0.0;
    }
    auto const tf = index.term_frequency(*doc, *tid);
    if (tf == 0) {
        return 0.0;
    }
    return bm25_weight(bm25_idf(index.num_docs(), index.df(*tid)), tf, index.doc_length(*doc),
                       index.avg_doc_len(), params);
}

RankedList search(Index const& index, WeightedQuery const& query, std::size_t k, Bm25Params params)
{
    if (k == 0) {
        throw ValidationError("search depth k must be >= 1");
    }
    query.validate();

    RankedList result;
    result.depth = k;

    std::vector<double> acc(index.num_docs(), 0.0);
    std::vector<char> seen(index.num_docs(), 0);
    std::vector<DocNo> touched;
    double const avgdl = index.avg_doc_len();

    // std::map iteration keeps the per-document summation order fixed.
    for (auto const& [term, weight] : query.terms) {
        if (weight == 0.0) {
            continue;
        }
        auto const tid = index.term_id(term);
        if (!tid) {
            continue;
        }
        double const idf = bm25_idf(index.num_docs(), index.df(*tid));
        for (auto const& p : index.postings(*tid)) {
            acc[p.doc] += weight * bm25_weight(idf, p.tf, index.doc_length(p.doc), avgdl, params);
            if (!seen[p.doc]) {
                seen[p.doc] = 1;
                touched.push_back(p.doc);
            }
        }
    }

    // Document numbers follow doc_id order, so comparing numbers breaks ties by doc_id.
    auto const better = [&](DocNo a, DocNo b) {
        if (acc[a] != acc[b]) {
            return acc[a] > acc[b];
        }
        return a < b;
    };
    auto const n = std::min(k, touched.size());
    std::partial_sort(touched.begin(), touched.begin() + static_cast<std::ptrdiff_t>(n),
                      touched.end(), better);
    result.entries.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        result.entries.push_back({index.doc_id(touched[i]), acc[touched[i]]});
    }
    return result;
}

} // namespace lexdrift
