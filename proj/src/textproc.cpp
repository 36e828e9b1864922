#include "lexdrift/textproc.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>

#include "lexdrift/errors.hpp"

namespace lexdrift {

namespace {

constexpr std::string_view kReplacement = "\xEF\xBF\xBD";

constexpr std::array<std::string_view, 50> kEnglishStopwords = {
    "a",    "an",   "and",   "are",  "as",    "at",   "be",   "been", "but",  "by",
    "for",  "from", "had",   "has",  "have",  "he",   "her",  "him",  "his",  "i",
    "if",   "in",   "into",  "is",   "it",    "its",  "me",   "my",   "not",  "of",
    "on",   "or",   "s",     "she",  "so",    "that", "the",  "their", "them", "they",
    "this", "to",   "was",   "we",   "were",  "which", "with", "you",  "your", "all",
};

bool is_ascii_letter(unsigned char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

/// Length of the valid UTF-8 sequence starting at s[i], or 0 if invalid.
std::size_t utf8_sequence_length(std::string_view s, std::size_t i)
{
    auto const b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) {
        return 1;
    }
    std::size_t len = 0;
    unsigned char lo = 0x80;
    unsigned char hi = 0xBF;
    if (b0 >= 0xC2 && b0 <= 0xDF) {
        len = 2;
    } else if (b0 >= 0xE0 && b0 <= 0xEF) {
        len = 3;
        if (b0 == 0xE0) {
            lo = 0xA0;
        } else if (b0 == 0xED) {
            hi = 0x9F;
        }
    } else if (b0 >= 0xF0 && b0 <= 0xF4) {
        len = 4;
        if (b0 == 0xF0) {
            lo = 0x90;
        } else if (b0 == 0xF4) {
            hi = 0x8F;
        }
    } else {
        return 0;
    }
    if (i + len > s.size()) {
        return 0;
    }
    auto const b1 = static_cast<unsigned char>(s[i + 1]);
    if (b1 < lo || b1 > hi) {
        return 0;
    }
    for (std::size_t k = 2; k < len; ++k) {
        auto const b = static_cast<unsigned char>(s[i + k]);
        if (b < 0x80 || b > 0xBF) {
            return 0;
        }
    }
    return len;
}

} // namespace

std::vector<std::string> tokenize(std::string_view text)
{
    std::vector<std::string> tokens;
    std::string current;
    for (char ch : text) {
        auto const c = static_cast<unsigned char>(ch);
        if (is_ascii_letter(c)) {
            current.push_back(static_cast<char>(c | 0x20));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) {
        tokens.push_back(std::move(current));
    }
    return tokens;
}

std::string sanitize_text(std::string_view raw)
{
    std::string out;
    out.reserve(raw.size());
    std::size_t i = 0;
    while (i < raw.size()) {
        if (raw[i] == '\r') {
            out.push_back('\n');
            i += (i + 1 < raw.size() && raw[i + 1] == '\n') ? 2 : 1;
            continue;
        }
        std::size_t const len = utf8_sequence_length(raw, i);
        if (len == 0) {
            out.append(kReplacement);
            ++i;
        } else {
            out.append(raw.substr(i, len));
            i += len;
        }
    }
    return out;
}

StopwordList::StopwordList(std::vector<std::string> words)
{
    for (auto& w : words) {
        words_.insert(std::move(w));
    }
}

StopwordList StopwordList::english()
{
    std::vector<std::string> words(kEnglishStopwords.begin(), kEnglishStopwords.end());
    return StopwordList(std::move(words));
}

StopwordList StopwordList::load(std::filesystem::path const& path)
{
    std::ifstream in(path);
    if (!in) {
        throw NotFoundError("cannot open stopword list " + path.string());
    }
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        auto const first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        auto const last = line.find_last_not_of(" \t\r");
        std::string word = line.substr(first, last - first + 1);
        std::transform(word.begin(), word.end(), word.begin(), [](unsigned char c) {
            return static_cast<char>(std::tolower(c));
        });
        words.push_back(std::move(word));
    }
    return StopwordList(std::move(words));
}

bool StopwordList::contains(std::string_view token) const
{
    return words_.find(std::string(token)) != words_.end();
}

std::vector<std::string> StopwordList::words() const
{
    std::vector<std::string> out(words_.begin(), words_.end());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> remove_stopwords(std::span<std::string const> tokens,
                                          StopwordList const& stopwords)
{
    std::vector<std::string> kept;
    kept.reserve(tokens.size());
    for (auto const& t : tokens) {
        if (!stopwords.contains(t)) {
            kept.push_back(t);
        }
    }
    return kept;
}

std::string stem(std::string_view token, PorterVariant variant)
{
    return porter_stem(token, variant);
}

std::vector<std::string> Analyzer::analyze(std::string_view text) const
{
    auto tokens = tokenize(text);
    std::vector<std::string> terms;
    terms.reserve(tokens.size());
    for (auto& t : tokens) {
        if (stopwords_.contains(t)) {
            continue;
        }
        auto s = porter_stem(t, variant_);
        if (!s.empty()) {
            terms.push_back(std::move(s));
        }
    }
    return terms;
}

} // namespace lexdrift
