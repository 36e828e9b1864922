#include <doctest.h>

#include <filesystem>

#include "lexdrift/collection.hpp"
#include "lexdrift/errors.hpp"
#include "temp_dir.hpp"

using namespace lexdrift;

namespace {

PartitionedCorpus two_decade_corpus()
{
    std::vector<NovelText> novels{
        {{"a", "A", 1845, ""}, "A murder.\n\nThe villain fled.\n"},
        {{"b", "B", 1848, ""}, "A wedding.\n"},
        {{"c", "C", 1885, ""}, "A murder mystery.\n\nThe suitor.\n\nA proposal.\n"},
    };
    return PartitionedCorpus::build(ingest(novels, Analyzer{}, 1), Analyzer{}, 2);
}

} // namespace

TEST_CASE("a two-decade corpus has two decade collections plus FULL")
{
    auto const corpus = two_decade_corpus();
    CHECK(corpus.labels() == std::vector<Decade>{Decade::d1840s, Decade::d1880s, Decade::Full});
    CHECK(corpus.decades() == std::vector<Decade>{Decade::d1840s, Decade::d1880s});
    CHECK(corpus.has_collection(Decade::Full));
    CHECK(corpus.has_collection(Decade::d1840s));
    CHECK_FALSE(corpus.has_collection(Decade::d1830s));
    CHECK(corpus.index(Decade::d1830s) == nullptr);
    CHECK_THROWS_AS((void)corpus.require_index(Decade::d1830s), NotFoundError);

    auto const infos = corpus.collections();
    REQUIRE(infos.size() == 3);
    CHECK(infos[0].num_novels == 2);
    CHECK(infos[0].num_paragraphs == 3);
    CHECK(infos[1].num_novels == 1);
    CHECK(infos[1].num_paragraphs == 3);
    CHECK(infos[2].label == Decade::Full);
    CHECK(infos[2].num_novels == 3);
    CHECK(infos[2].num_paragraphs == 6);
}

TEST_CASE("FULL index stats are the merge of the decade stats")
{
    auto const corpus = two_decade_corpus();
    std::vector<IndexStats> parts;
    for (auto d : corpus.decades()) {
        parts.push_back(corpus.require_index(d).stats());
    }
    auto const merged = merge_stats(parts);
    auto const full = corpus.require_index(Decade::Full).stats();
    CHECK(merged.num_docs == full.num_docs);
    CHECK(merged.total_tokens == full.total_tokens);
    CHECK(merged.df == full.df);
    CHECK(merged.cf == full.cf);
}

TEST_CASE("corpus directories round-trip")
{
    testing::TempDir dir;
    auto const corpus = two_decade_corpus();
    corpus.save(dir.path());
    CHECK(std::filesystem::exists(dir / "collections.json"));
    CHECK(std::filesystem::exists(dir / "stopwords.txt"));
    auto const loaded = PartitionedCorpus::load(dir.path());
    CHECK(loaded.labels() == corpus.labels());
    for (auto d : corpus.labels()) {
        CHECK(loaded.info(d).num_novels == corpus.info(d).num_novels);
        CHECK(loaded.info(d).num_paragraphs == corpus.info(d).num_paragraphs);
        CHECK(loaded.require_index(d).serialize() == corpus.require_index(d).serialize());
    }
    CHECK(loaded.analyzer().stopwords().words() == corpus.analyzer().stopwords().words());
    CHECK(loaded.analyzer().variant() == corpus.analyzer().variant());
}

TEST_CASE("a missing index file is reported with its collection")
{
    testing::TempDir dir;
    two_decade_corpus().save(dir.path());
    std::filesystem::remove(dir / "1880s.idx");
    try {
        (void)PartitionedCorpus::load(dir.path());
        FAIL("expected an error");
    } catch (NotFoundError const& e) {
        CHECK(std::string(e.what()).find("1880s") != std::string::npos);
    }
    CHECK_THROWS_AS((void)PartitionedCorpus::load(dir / "nowhere"), NotFoundError);
}

TEST_CASE("a decade whose novels yield no paragraphs is present but unindexed")
{
    std::vector<NovelText> novels{
        {{"a", "A", 1845, ""}, "A murder.\n"},
        {{"b", "B", 1875, ""}, "the of and\n\n1875\n"},
    };
    auto const corpus = PartitionedCorpus::build(ingest(novels, Analyzer{}, 1), Analyzer{}, 1);
    CHECK(corpus.has_collection(Decade::d1870s));
    CHECK(corpus.index(Decade::d1870s) == nullptr);
    CHECK(corpus.info(Decade::d1870s).num_novels == 1);
    CHECK(corpus.info(Decade::d1870s).num_paragraphs == 0);

    testing::TempDir dir;
    corpus.save(dir.path());
    auto const loaded = PartitionedCorpus::load(dir.path());
    CHECK(loaded.has_collection(Decade::d1870s));
    CHECK(loaded.index(Decade::d1870s) == nullptr);
}

TEST_CASE("a corpus with no paragraphs cannot be built")
{
    std::vector<NovelText> novels{{{"a", "A", 1845, ""}, "\n\n"}};
    CHECK_THROWS_AS((void)PartitionedCorpus::build(ingest(novels, Analyzer{}, 1), Analyzer{}, 1), ValidationError);
}
