#include "lexdrift/feedback.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <spdlog/spdlog.h>

#include "lexdrift/errors.hpp"

namespace lexdrift {

ExpandedQuery ExpandedQuery::make_absent(std::string query, Decade origin)
{
    ExpandedQuery q;
    q.absent = true;
    q.query = std::move(query);
    q.origin = origin;
    return q;
}

std::set<std::string> ExpandedQuery::term_set() const
{
    std::set<std::string> out;
    for (auto const& t : terms) {
        out.insert(t.term);
    }
    return out;
}

std::set<std::string> ExpandedQuery::top_terms(std::size_t n) const
{
    std::set<std::string> out;
    for (std::size_t i = 0; i < std::min(n, terms.size()); ++i) {
        out.insert(terms[i].term);
    }
    return out;
}

TermDistribution ExpandedQuery::distribution() const
{
    TermDistribution out;
    for (auto const& t : terms) {
        out.emplace(t.term, t.weight);
    }
    return out;
}

WeightedQuery ExpandedQuery::to_weighted_query() const
{
    WeightedQuery q;
    q.origin = origin;
    for (auto const& t : terms) {
        q.terms.emplace(t.term, t.weight);
    }
    return q;
}

std::optional<TermDistribution> estimate_rm1(Index const& index,
                                             std::span<std::string const> query_terms,
                                             std::size_t fb_docs, double mu, Bm25Params params)
{
    if (query_terms.empty()) {
        throw ValidationError("relevance model needs at least one query term");
    }
    if (fb_docs == 0) {
        throw ValidationError("fb_docs must be >= 1");
    }
    if (!(mu >= 0.0) || !std::isfinite(mu)) {
        throw ValidationError("mu must be finite and >= 0");
    }

    std::vector<TermId> qids;
    qids.reserve(query_terms.size());
    for (auto const& t : query_terms) {
        auto id = index.term_id(t);
        if (!id) {
            return std::nullopt;
        }
        qids.push_back(*id);
    }

    auto const first_stage = search(index, WeightedQuery::keywords(query_terms), fb_docs, params);
    if (first_stage.size() < fb_docs) {
        spdlog::warn("only {} of {} feedback documents matched", first_stage.size(), fb_docs);
    }

    auto const total = static_cast<double>(index.total_tokens());
    std::vector<DocNo> docs;
    std::vector<double> log_likelihood;
    docs.reserve(first_stage.size());
    for (auto const& entry : first_stage.entries) {
        auto const d = *index.find_doc(entry.doc_id);
        auto const dl = static_cast<double>(index.doc_length(d));
        double ll = 0.0;
        for (auto const q : qids) {
            auto const tf = static_cast<double>(index.term_frequency(d, q));
            auto const background = static_cast<double>(index.cf(q)) / total;
            ll += std::log((tf + mu * background) / (dl + mu));
        }
        docs.push_back(d);
        log_likelihood.push_back(ll);
    }

    // P(Q|d) is only needed up to a constant, so shift by the maximum to stay
    // clear of underflow for long queries.
    double const max_ll = *std::max_element(log_likelihood.begin(), log_likelihood.end());

    std::vector<double> mass(index.vocabulary_size(), 0.0);
    std::vector<char> seen(index.vocabulary_size(), 0);
    std::vector<TermId> touched;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        double const doc_weight = std::exp(log_likelihood[i] - max_ll);
        auto const dl = static_cast<double>(index.doc_length(docs[i]));
        for (auto const& tc : index.doc_terms(docs[i])) {
            if (!seen[tc.term]) {
                seen[tc.term] = 1;
                touched.push_back(tc.term);
            }
            mass[tc.term] += doc_weight * (static_cast<double>(tc.tf) / dl);
        }
    }

    std::sort(touched.begin(), touched.end());
    double norm = 0.0;
    for (auto const t : touched) {
        norm += mass[t];
    }
    TermDistribution dist;
    for (auto const t : touched) {
        dist.emplace_hint(dist.end(), index.term(t), mass[t] / norm);
    }
    return dist;
}

std::vector<WeightedTerm> truncate_renormalize(TermDistribution const& dist, std::size_t fb_terms)
{
    std::vector<WeightedTerm> ranked;
    ranked.reserve(dist.size());
    for (auto const& [term, w] : dist) {
        ranked.push_back({term, w});
    }
    auto const heavier = [](WeightedTerm const& a, WeightedTerm const& b) {
        if (a.weight != b.weight) {
            return a.weight > b.weight;
        }
        return a.term < b.term;
    };
    auto const keep = std::min(fb_terms, ranked.size());
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep),
                      ranked.end(), heavier);
    ranked.resize(keep);

    double sum = 0.0;
    for (auto const& t : ranked) {
        sum += t.weight;
    }
    if (sum > 0.0) {
        double const scale = 1.0 / sum;
        for (auto& t : ranked) {
            t.weight *= scale;
        }
    }
    return ranked;
}

TermDistribution interpolate_rm3(std::span<std::string const> original,
                                 TermDistribution const& rm1, double lambda)
{
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw ValidationError("lambda must lie in [0, 1]");
    }
    std::set<std::string> const distinct(original.begin(), original.end());
    if (distinct.empty() && lambda > 0.0) {
        throw ValidationError("RM3 interpolation needs at least one original term");
    }

    TermDistribution mixed;
    for (auto const& [term, w] : rm1) {
        double const v = (1.0 - lambda) * w;
        if (v > 0.0) {
            mixed[term] += v;
        }
    }
    if (lambda > 0.0) {
        double const share = lambda / static_cast<double>(distinct.size());
        for (auto const& term : distinct) {
            mixed[term] += share;
        }
    }

    double sum = 0.0;
    for (auto const& [term, w] : mixed) {
        sum += w;
    }
    if (sum > 0.0) {
        double const scale = 1.0 / sum;
        for (auto& [term, w] : mixed) {
            w *= scale;
        }
    }
    return mixed;
}

ExpandedQuery expand_query(PartitionedCorpus const& corpus, Decade collection,
                           std::string_view keyword, FeedbackConfig const& config)
{
    if (!corpus.has_collection(collection)) {
        throw NotFoundError("unknown collection '" + std::string(to_string(collection)) + "'");
    }
    auto const terms = corpus.analyzer().analyze(keyword);
    if (terms.empty()) {
        throw ValidationError("keyword '" + std::string(keyword) + "' has no indexable terms");
    }

    auto const* index = corpus.index(collection);
    if (index == nullptr) {
        return ExpandedQuery::make_absent(std::string(keyword), collection);
    }
    auto rm1 = estimate_rm1(*index, terms, config.fb_docs, config.mu, config.bm25);
    if (!rm1) {
        return ExpandedQuery::make_absent(std::string(keyword), collection);
    }
    auto const dist = config.lambda > 0.0 ? interpolate_rm3(terms, *rm1, config.lambda) : *rm1;

    ExpandedQuery q;
    q.absent = false;
    q.query = std::string(keyword);
    q.origin = collection;
    q.terms = truncate_renormalize(dist, config.fb_terms);
    q.fb_docs = config.fb_docs;
    q.fb_terms = config.fb_terms;
    return q;
}

} // namespace lexdrift
