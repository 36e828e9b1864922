#include <doctest.h>

#include "lexdrift/config.hpp"
#include "lexdrift/errors.hpp"
#include "temp_dir.hpp"

using namespace lexdrift;

TEST_CASE("the default query set has the 25 keywords in three categories")
{
    auto const qs = QuerySet::defaults();
    REQUIRE(qs.entries.size() == 25);
    std::size_t thematic = 0;
    std::size_t plot = 0;
    std::size_t genre = 0;
    for (auto const& e : qs.entries) {
        thematic += e.category == QueryCategory::Thematic;
        plot += e.category == QueryCategory::Plot;
        genre += e.category == QueryCategory::Genre;
    }
    CHECK(thematic == 8);
    CHECK(plot == 12);
    CHECK(genre == 5);
    CHECK(qs.entries.front().keyword == "immigrant");
    CHECK(qs.entries.back().keyword == "adventure");
}

TEST_CASE("the shipped query file equals the built-in set")
{
    auto const file = QuerySet::load(std::string(LEXDRIFT_DATA_DIR) + "/queries.tsv");
    auto const builtin = QuerySet::defaults();
    REQUIRE(file.entries.size() == builtin.entries.size());
    for (std::size_t i = 0; i < file.entries.size(); ++i) {
        CHECK(file.entries[i].keyword == builtin.entries[i].keyword);
        CHECK(file.entries[i].category == builtin.entries[i].category);
    }
}

TEST_CASE("query file parsing")
{
    auto const qs = QuerySet::parse("# comment\nmurder\tgenre\n\nwedding   plot # trailing\n");
    REQUIRE(qs.entries.size() == 2);
    CHECK(qs.entries[0].keyword == "murder");
    CHECK(qs.entries[1].category == QueryCategory::Plot);
    CHECK_THROWS_AS((void)QuerySet::parse("murder genre\nmurder plot\n"), ValidationError);
    CHECK_THROWS_AS((void)QuerySet::parse("murder comedy\n"), ParseError);
    CHECK_THROWS_AS((void)QuerySet::parse("murder\n"), ParseError);
}

TEST_CASE("experiment config parsing")
{
    auto const cfg = ExperimentConfig::parse(R"(
# protocol
fb_docs = 50
fb_terms = 20
lambda = 0.6
mu = 500
k1 = 0.9
b = 0.4
depth = 200
top_n = 10
js_base = e
threads = 3
porter = reference-c
manifest = corpus/manifest.jsonl
index_dir = /abs/index
)",
                                             "/base");
    CHECK(cfg.params.feedback.fb_docs == 50);
    CHECK(cfg.params.feedback.fb_terms == 20);
    CHECK(cfg.params.feedback.lambda == 0.6);
    CHECK(cfg.params.feedback.mu == 500);
    CHECK(cfg.params.feedback.bm25.k1 == 0.9);
    CHECK(cfg.params.feedback.bm25.b == 0.4);
    CHECK(cfg.params.depth == 200);
    CHECK(cfg.params.top_n == 10);
    CHECK(cfg.params.js_base == LogBase::E);
    CHECK(cfg.params.threads == 3);
    CHECK(cfg.porter == PorterVariant::ReferenceC);
    CHECK(cfg.manifest == std::filesystem::path("/base/corpus/manifest.jsonl"));
    CHECK(cfg.index_dir == std::filesystem::path("/abs/index"));
    CHECK(cfg.queries.empty());
}

TEST_CASE("defaults follow the protocol")
{
    auto const cfg = ExperimentConfig::parse("");
    CHECK(cfg.params.feedback.fb_docs == 100);
    CHECK(cfg.params.feedback.fb_terms == 100);
    CHECK(cfg.params.feedback.lambda == 0.0);
    CHECK(cfg.params.feedback.mu == 1000.0);
    CHECK(cfg.params.feedback.bm25.k1 == 1.2);
    CHECK(cfg.params.feedback.bm25.b == 0.75);
    CHECK(cfg.params.depth == 1000);
    CHECK(cfg.params.top_n == 15);
    CHECK(cfg.params.js_base == LogBase::Two);
    CHECK(cfg.porter == PorterVariant::Original);
}

TEST_CASE("the shipped config loads and matches the defaults")
{
    auto const cfg = ExperimentConfig::load(std::string(LEXDRIFT_DATA_DIR) + "/experiment.conf");
    CHECK(cfg.params.canonical() == PipelineParams{}.canonical());
    CHECK(std::filesystem::exists(cfg.queries));
    CHECK(std::filesystem::exists(cfg.stopwords));
}

TEST_CASE("config errors")
{
    CHECK_THROWS_AS((void)ExperimentConfig::parse("colour = red\n"), ParseError);
    CHECK_THROWS_AS((void)ExperimentConfig::parse("fb_docs 100\n"), ParseError);
    CHECK_THROWS_AS((void)ExperimentConfig::parse("fb_docs = many\n"), ParseError);
    CHECK_THROWS_AS((void)ExperimentConfig::parse("fb_docs = -3\n"), ParseError);
    CHECK_THROWS_AS((void)ExperimentConfig::parse("js_base = 10\n"), ParseError);
    CHECK_THROWS_AS((void)ExperimentConfig::parse("porter = snowball\n"), ParseError);
    CHECK_THROWS_AS((void)ExperimentConfig::parse("fb_docs = 0\n"), ValidationError);
    CHECK_THROWS_AS((void)ExperimentConfig::parse("lambda = 1.5\n"), ValidationError);
    CHECK_THROWS_AS((void)ExperimentConfig::parse("mu = 0\n"), ValidationError);
    CHECK_THROWS_AS((void)ExperimentConfig::parse("b = 2\n"), ValidationError);
    CHECK_THROWS_AS((void)ExperimentConfig::load("/nonexistent.conf"), NotFoundError);
    try {
        (void)ExperimentConfig::parse("fb_docs = 10\n\ncolour = red\n");
        FAIL("expected an error");
    } catch (ParseError const& e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("canonical form ignores threads and tracks every result-changing parameter")
{
    PipelineParams a;
    PipelineParams b;
    b.threads = 7;
    CHECK(a.canonical() == b.canonical());
    b.feedback.mu = 999;
    CHECK(a.canonical() != b.canonical());
    PipelineParams c;
    c.js_base = LogBase::E;
    CHECK(a.canonical() != c.canonical());
}
