#include <doctest.h>

#include <cmath>
#include <random>

#include <fmt/format.h>

#include "lexdrift/collection.hpp"
#include "lexdrift/errors.hpp"
#include "lexdrift/feedback.hpp"
#include "lexdrift/synthetic.hpp"
#include "oracles.hpp"

using namespace lexdrift;

namespace {

Paragraph para(std::string id, std::vector<std::string> tokens)
{
    Paragraph p;
    p.doc_id = std::move(id);
    p.novel_id = "n";
    p.tokens = std::move(tokens);
    return p;
}

double sum(TermDistribution const& d)
{
    double s = 0;
    for (auto const& [t, w] : d) {
        s += w;
    }
    return s;
}

PartitionedCorpus small_corpus()
{
    std::vector<NovelText> novels{
        {{"a", "A", 1845, ""}, "A murder in the lane.\n\nThe villain fled the murder.\n\nA quiet garden.\n"},
        {{"b", "B", 1872, ""}, "An immigrant ship.\n\nThe immigrant farm and the colony.\n\nA murder trial.\n"},
    };
    return PartitionedCorpus::build(ingest(novels, Analyzer{}, 1), Analyzer{}, 1);
}

} // namespace

TEST_CASE("with one feedback document the model is that document's tf vector")
{
    std::vector<Paragraph> ps{para("a", {"crime", "man", "man", "dog"}), para("b", {"cat"}), para("c", {"crime", "crime", "x"})};
    auto const idx = Index::build(ps);
    std::vector<std::string> q{"crime"};
    auto const top = search(idx, WeightedQuery::keywords(q), 1);
    REQUIRE(top.size() == 1);
    auto const rm = estimate_rm1(idx, q, 1, 1000.0);
    REQUIRE(rm.has_value());
    auto const doc = idx.find_doc(top.entries[0].doc_id);
    auto const dl = static_cast<double>(idx.doc_length(*doc));
    REQUIRE(rm->size() == idx.doc_terms(*doc).size());
    for (auto const& tc : idx.doc_terms(*doc)) {
        CHECK(rm->at(idx.term(tc.term)) == doctest::Approx(tc.tf / dl).epsilon(1e-14));
    }
}

TEST_CASE("out-of-vocabulary query terms give no model")
{
    std::vector<Paragraph> ps{para("a", {"crime"})};
    auto const idx = Index::build(ps);
    std::vector<std::string> q{"crime", "unseen"};
    CHECK_FALSE(estimate_rm1(idx, q, 10, 1000.0).has_value());
    std::vector<std::string> none;
    CHECK_THROWS_AS((void)estimate_rm1(idx, none, 10, 1000.0), ValidationError);
    std::vector<std::string> ok{"crime"};
    CHECK_THROWS_AS((void)estimate_rm1(idx, ok, 0, 1000.0), ValidationError);
}

TEST_CASE("fewer matching documents than fb_docs uses them all")
{
    std::vector<Paragraph> ps{para("a", {"crime", "x"}), para("b", {"crime", "y"}), para("c", {"z"})};
    auto const idx = Index::build(ps);
    std::vector<std::string> q{"crime"};
    auto const rm = estimate_rm1(idx, q, 100, 1000.0);
    REQUIRE(rm.has_value());
    CHECK(rm->size() == 3);
    CHECK_FALSE(rm->contains("z"));
    CHECK(sum(*rm) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("relevance model agrees with the brute-force evaluator")
{
    std::mt19937_64 rng(31);
    for (double mu : {100.0, 500.0, 1000.0}) {
        for (int trial = 0; trial < 60; ++trial) {
            auto const ps = oracle::random_paragraphs(rng, 30, 15, 12);
            auto const idx = Index::build(ps);
            auto const docs = oracle::raw_docs(ps);
            std::vector<std::string> q{ps[0].tokens[0]};
            if (ps.back().tokens.back() != q[0] && trial % 2 == 0) {
                q.push_back(ps.back().tokens.back());
            }
            std::size_t const fb_docs = 1 + static_cast<std::size_t>(trial % 7);
            auto const got = estimate_rm1(idx, q, fb_docs, mu);
            REQUIRE(got.has_value());
            auto const want = oracle::rm1_bruteforce(docs, q, fb_docs, mu);
            REQUIRE(got->size() == want.size());
            for (auto const& [term, w] : want) {
                REQUIRE(got->contains(term));
                CHECK(std::abs(got->at(term) - w) <= 1e-10);
            }
            CHECK(std::abs(sum(*got) - 1.0) <= 1e-9);
        }
    }
}

TEST_CASE("planted co-occurring terms surface in the expansion")
{
    std::vector<std::string> planted{"alpha", "beta", "gamma", "delta"};
    std::mt19937_64 rng(4);
    std::vector<Paragraph> ps;
    std::uniform_int_distribution<int> bg(0, 199);
    for (int i = 0; i < 300; ++i) {
        std::vector<std::string> tokens;
        for (int j = 0; j < 15; ++j) {
            tokens.push_back("bg" + std::to_string(bg(rng)));
        }
        if (i % 10 == 0) {
            tokens.push_back("keyword");
            for (auto const& t : planted) {
                tokens.push_back(t);
            }
        }
        ps.push_back(para(make_doc_id("n", static_cast<std::size_t>(i)), tokens));
    }
    auto const idx = Index::build(ps);
    std::vector<std::string> q{"keyword"};
    auto const rm = estimate_rm1(idx, q, 100, 1000.0);
    REQUIRE(rm.has_value());
    auto const top = truncate_renormalize(*rm, 6);
    std::set<std::string> names;
    for (auto const& wt : top) {
        names.insert(wt.term);
    }
    for (auto const& t : planted) {
        CHECK(names.contains(t));
    }
    CHECK(names.contains("keyword"));
}

TEST_CASE("truncate_renormalize")
{
    SUBCASE("short distributions are unchanged")
    {
        TermDistribution d{{"a", 0.5}, {"b", 0.3}, {"c", 0.2}};
        auto const t = truncate_renormalize(d, 100);
        REQUIRE(t.size() == 3);
        CHECK(t[0] == WeightedTerm{"a", 0.5});
        CHECK(t[1] == WeightedTerm{"b", 0.3});
        CHECK(t[2] == WeightedTerm{"c", 0.2});
    }
    SUBCASE("two of three renormalise exactly")
    {
        TermDistribution d{{"a", 0.5}, {"b", 0.3}, {"c", 0.2}};
        auto const t = truncate_renormalize(d, 2);
        REQUIRE(t.size() == 2);
        CHECK(t[0].term == "a");
        CHECK(t[0].weight == 0.625);
        CHECK(t[1].term == "b");
        CHECK(t[1].weight == 0.375);
    }
    SUBCASE("uniform ties keep the lexicographically smallest terms")
    {
        TermDistribution d;
        for (int i = 0; i < 200; ++i) {
            d[fmt::format("t{:03d}", i)] = 1.0 / 200;
        }
        auto const t = truncate_renormalize(d, 100);
        REQUIRE(t.size() == 100);
        for (int i = 0; i < 100; ++i) {
            CHECK(t[static_cast<std::size_t>(i)].term == fmt::format("t{:03d}", i));
            CHECK(t[static_cast<std::size_t>(i)].weight == doctest::Approx(0.01).epsilon(1e-12));
        }
    }
    SUBCASE("ordering is weight-descending with lexicographic ties")
    {
        TermDistribution d{{"b", 0.25}, {"a", 0.25}, {"c", 0.4}, {"d", 0.1}};
        auto const t = truncate_renormalize(d, 10);
        REQUIRE(t.size() == 4);
        CHECK(t[0].term == "c");
        CHECK(t[1].term == "a");
        CHECK(t[2].term == "b");
        CHECK(t[3].term == "d");
    }
}

TEST_CASE("RM3 interpolation")
{
    TermDistribution const rm1{{"q", 0.2}, {"x", 0.8}};
    std::vector<std::string> const original{"q"};
    CHECK(interpolate_rm3(original, rm1, 0.0) == rm1);
    auto const all = interpolate_rm3(original, rm1, 1.0);
    CHECK(all == TermDistribution{{"q", 1.0}});
    auto const half = interpolate_rm3(original, rm1, 0.5);
    CHECK(half.at("q") == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(half.at("x") == doctest::Approx(0.4).epsilon(1e-15));
    std::vector<std::string> const two{"q", "y"};
    auto const mixed = interpolate_rm3(two, rm1, 0.5);
    CHECK(mixed.at("y") == doctest::Approx(0.25));
    CHECK(sum(mixed) == doctest::Approx(1.0));
}

TEST_CASE("expand_query on a built corpus")
{
    auto const corpus = small_corpus();
    FeedbackConfig config;

    SUBCASE("keyword missing from a decade is absent")
    {
        auto const eq = expand_query(corpus, Decade::d1840s, "immigrant", config);
        CHECK(eq.absent);
        CHECK(eq.terms.empty());
        CHECK(eq.origin == Decade::d1840s);
    }
    SUBCASE("present keyword gives a normalised expansion")
    {
        for (auto d : corpus.labels()) {
            auto const eq = expand_query(corpus, d, "murder", config);
            REQUIRE_FALSE(eq.absent);
            CHECK(eq.terms.size() <= 100);
            double s = 0;
            for (std::size_t i = 0; i < eq.terms.size(); ++i) {
                CHECK(eq.terms[i].weight > 0.0);
                CHECK(eq.terms[i].weight <= 1.0);
                s += eq.terms[i].weight;
                if (i > 0) {
                    auto const& prev = eq.terms[i - 1];
                    CHECK((prev.weight > eq.terms[i].weight
                           || (prev.weight == eq.terms[i].weight && prev.term < eq.terms[i].term)));
                }
            }
            CHECK(std::abs(s - 1.0) <= 1e-9);
            CHECK(eq.term_set().contains("murder"));
            CHECK(eq.fb_docs == 100);
            CHECK(eq.fb_terms == 100);
        }
    }
    SUBCASE("expansion is deterministic")
    {
        CHECK(expand_query(corpus, Decade::Full, "murder", config) == expand_query(corpus, Decade::Full, "murder", config));
    }
    SUBCASE("fb_terms bounds the term list")
    {
        config.fb_terms = 3;
        auto const eq = expand_query(corpus, Decade::Full, "murder", config);
        CHECK(eq.terms.size() == 3);
        CHECK(eq.top_terms(2).size() == 2);
    }
    SUBCASE("errors")
    {
        CHECK_THROWS_AS((void)expand_query(corpus, Decade::d1830s, "murder", config), NotFoundError);
        CHECK_THROWS_AS((void)expand_query(corpus, Decade::Full, "the of", config), ValidationError);
    }
    SUBCASE("rm3 keeps the original term weight at least lambda")
    {
        config.lambda = kRm3Lambda;
        auto const eq = expand_query(corpus, Decade::Full, "murder", config);
        REQUIRE_FALSE(eq.absent);
        CHECK(eq.terms[0].term == "murder");
        CHECK(eq.terms[0].weight >= kRm3Lambda);
    }
    SUBCASE("weighted query and distribution views agree")
    {
        auto const eq = expand_query(corpus, Decade::Full, "immigrant", config);
        auto const wq = eq.to_weighted_query();
        auto const dist = eq.distribution();
        CHECK(wq.terms == std::map<std::string, double>(dist.begin(), dist.end()));
        CHECK(wq.origin == Decade::Full);
    }
}

TEST_CASE("multi-term keywords are absent when any stem is missing")
{
    auto const corpus = small_corpus();
    CHECK_FALSE(expand_query(corpus, Decade::d1870s, "immigrant colony", {}).absent);
    CHECK(expand_query(corpus, Decade::d1840s, "murder immigrant", {}).absent);
}
