#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "lexdrift/porter.hpp"

namespace lexdrift {

/// Lowercases and splits on every character that is not an ASCII letter.
/// Digits, punctuation and non-ASCII bytes all act as separators.
[[nodiscard]] std::vector<std::string> tokenize(std::string_view text);

/// Replaces invalid UTF-8 sequences with U+FFFD and turns CRLF / lone CR into LF.
[[nodiscard]] std::string sanitize_text(std::string_view raw);

class StopwordList {
public:
    StopwordList() = default;
    explicit StopwordList(std::vector<std::string> words);

    /// Built-in English list (identical to data/stopwords.txt).
    [[nodiscard]] static StopwordList english();

    /// One word per line; blank lines and lines starting with '#' are ignored.
    [[nodiscard]] static StopwordList load(std::filesystem::path const& path);

    [[nodiscard]] bool contains(std::string_view token) const;
    [[nodiscard]] std::vector<std::string> words() const;
    [[nodiscard]] std::size_t size() const noexcept { return words_.size(); }

private:
    std::unordered_set<std::string> words_;
};

[[nodiscard]] std::vector<std::string> remove_stopwords(std::span<std::string const> tokens,
                                                        StopwordList const& stopwords);

[[nodiscard]] std::string stem(std::string_view token,
                               PorterVariant variant = PorterVariant::Original);

/// tokenize -> remove_stopwords -> stem. Tokens whose stem is empty are dropped.
class Analyzer {
public:
    Analyzer() : Analyzer(StopwordList::english()) {}
    explicit Analyzer(StopwordList stopwords, PorterVariant variant = PorterVariant::Original)
        : stopwords_(std::move(stopwords)), variant_(variant)
    {}

    [[nodiscard]] std::vector<std::string> analyze(std::string_view text) const;

    [[nodiscard]] StopwordList const& stopwords() const noexcept { return stopwords_; }
    [[nodiscard]] PorterVariant variant() const noexcept { return variant_; }

private:
    StopwordList stopwords_;
    PorterVariant variant_;
};

} // namespace lexdrift
