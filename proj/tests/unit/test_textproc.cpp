#include <doctest.h>

#include <string>
#include <vector>

#include "lexdrift/errors.hpp"
#include "lexdrift/textproc.hpp"
#include "temp_dir.hpp"

using namespace lexdrift;
using Tokens = std::vector<std::string>;

TEST_CASE("tokenize lowercases and splits on non-letters")
{
    CHECK(tokenize("Murder!") == Tokens{"murder"});
    CHECK(tokenize("nineteenth-century") == Tokens{"nineteenth", "century"});
    CHECK(tokenize("1845").empty());
    CHECK(tokenize("").empty());
    CHECK(tokenize("  Mr. Dickens, 1812--1870 ") == Tokens{"mr", "dickens"});
    CHECK(tokenize("don't") == Tokens{"don", "t"});
}

TEST_CASE("non-ASCII bytes act as separators")
{
    CHECK(tokenize("caf\xc3\xa9 society") == Tokens{"caf", "society"});
    CHECK(tokenize("m\xc3\xa9salliance") == Tokens{"m", "salliance"});
}

TEST_CASE("every token is a non-empty lowercase ASCII word")
{
    std::string text;
    for (int c = 0; c < 256; ++c) {
        text.push_back(static_cast<char>(c));
        text.push_back(static_cast<char>(255 - c));
    }
    for (auto const& tok : tokenize(text)) {
        REQUIRE_FALSE(tok.empty());
        for (char ch : tok) {
            CHECK((ch >= 'a' && ch <= 'z'));
        }
    }
}

TEST_CASE("sanitize_text repairs invalid UTF-8 and normalises line endings")
{
    CHECK(sanitize_text("a\r\nb\rc\n") == "a\nb\nc\n");
    CHECK(sanitize_text("ok \xff end") == "ok \xef\xbf\xbd end");
    CHECK(sanitize_text("caf\xc3\xa9") == "caf\xc3\xa9");
    CHECK(sanitize_text("trunc\xc3") == "trunc\xef\xbf\xbd");
}

TEST_CASE("remove_stopwords keeps order and the feedback-table words")
{
    auto const list = StopwordList::english();
    Tokens const in{"the", "man"};
    CHECK(remove_stopwords(in, list) == Tokens{"man"});
    Tokens const mr{"mr", "dickens"};
    CHECK(remove_stopwords(mr, list) == mr);
    CHECK(remove_stopwords(Tokens{}, list).empty());
    for (auto const* kept : {"mr", "man", "time", "year", "good", "great"}) {
        CHECK_FALSE(list.contains(kept));
    }
    CHECK(list.size() >= 30);
    CHECK(list.size() <= 50);
}

TEST_CASE("the shipped stopword file matches the built-in list")
{
    auto const file = StopwordList::load(std::string(LEXDRIFT_DATA_DIR) + "/stopwords.txt");
    CHECK(file.words() == StopwordList::english().words());
}

TEST_CASE("stopword files skip comments and blank lines")
{
    testing::TempDir dir;
    testing::write_file(dir / "stop.txt", "# header\n\nfoo\n  bar  \n");
    auto const list = StopwordList::load(dir / "stop.txt");
    CHECK(list.words() == Tokens{"bar", "foo"});
    CHECK_THROWS_AS((void)StopwordList::load(dir / "missing.txt"), NotFoundError);
}

TEST_CASE("stem applies the Porter rules")
{
    CHECK(stem("country") == "countri");
    CHECK(stem("colonies") == "coloni");
    CHECK(stem("man") == "man");
}

TEST_CASE("analyzer runs tokenize, stopword removal and stemming")
{
    Analyzer const analyzer;
    CHECK(analyzer.analyze("The Colonies of the Country!") == Tokens{"coloni", "countri"});
    CHECK(analyzer.analyze("A man. A crime.") == Tokens{"man", "crime"});
    CHECK(analyzer.analyze("the of and").empty());
    CHECK(analyzer.analyze("1845, 1846").empty());
}

TEST_CASE("every analyzed term is reproducible from its surface token")
{
    Analyzer const analyzer;
    std::string const text = "Immigrants arrived; the colonists' lovers eloped. Murders, mysteries and villains!";
    auto const terms = analyzer.analyze(text);
    Tokens expected;
    for (auto const& tok : remove_stopwords(tokenize(text), analyzer.stopwords())) {
        expected.push_back(stem(tok));
    }
    CHECK(terms == expected);
    CHECK(analyzer.analyze(text) == terms);
}
