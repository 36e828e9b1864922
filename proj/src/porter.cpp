#include "lexdrift/porter.hpp"

#include <array>
#include <cstddef>
#include <utility>

namespace lexdrift {

namespace {

struct Rule {
    std::string_view suffix;
    std::string_view replacement;
};

class Stemmer {
public:
    Stemmer(std::string_view word, PorterVariant variant) : w_(word), variant_(variant) {}

    std::string run() &&
    {
        if (variant_ == PorterVariant::ReferenceC && w_.size() <= 2) {
            return std::move(w_);
        }
        step1a();
        step1b();
        step1c();
        step2();
        step3();
        step4();
        step5a();
        step5b();
        return std::move(w_);
    }

private:
    std::string w_;
    PorterVariant variant_;

    [[nodiscard]] bool is_consonant(std::size_t i) const
    {
        switch (w_[i]) {
        case 'a':
        case 'e':
        case 'i':
        case 'o':
        case 'u':
            return false;
        case 'y':
            return i == 0 || !is_consonant(i - 1);
        default:
            return true;
        }
    }

    /// Number of VC sequences in w_[0, len).
    [[nodiscard]] int measure(std::size_t len) const
    {
        int m = 0;
        std::size_t i = 0;
        while (i < len && is_consonant(i)) {
            ++i;
        }
        while (i < len) {
            while (i < len && !is_consonant(i)) {
                ++i;
            }
            if (i >= len) {
                break;
            }
            while (i < len && is_consonant(i)) {
                ++i;
            }
            ++m;
        }
        return m;
    }

    [[nodiscard]] bool has_vowel(std::size_t len) const
    {
        for (std::size_t i = 0; i < len; ++i) {
            if (!is_consonant(i)) {
                return true;
            }
        }
        return false;
    }

    [[nodiscard]] bool ends_double_consonant(std::size_t len) const
    {
        return len >= 2 && w_[len - 1] == w_[len - 2] && is_consonant(len - 1);
    }

    /// consonant-vowel-consonant ending where the final consonant is not w, x or y.
    [[nodiscard]] bool ends_cvc(std::size_t len) const
    {
        if (len < 3) {
            return false;
        }
        if (!is_consonant(len - 1) || is_consonant(len - 2) || !is_consonant(len - 3)) {
            return false;
        }
        char const c = w_[len - 1];
        return c != 'w' && c != 'x' && c != 'y';
    }

    [[nodiscard]] bool ends_with(std::string_view s) const
    {
        return w_.size() >= s.size() && std::string_view(w_).substr(w_.size() - s.size()) == s;
    }

    void replace_suffix(std::size_t suffix_len, std::string_view replacement)
    {
        w_.resize(w_.size() - suffix_len);
        w_.append(replacement);
    }

    /// The longest matching suffix wins; if its condition fails nothing else is tried.
    template <std::size_t N, typename Cond>
    void apply_first_match(std::array<Rule, N> const& rules, Cond&& cond)
    {
        for (auto const& rule : rules) {
            if (ends_with(rule.suffix)) {
                std::size_t const stem_len = w_.size() - rule.suffix.size();
                if (cond(stem_len)) {
                    replace_suffix(rule.suffix.size(), rule.replacement);
                }
                return;
            }
        }
    }

    void step1a()
    {
        if (ends_with("sses")) {
            replace_suffix(4, "ss");
        } else if (ends_with("ies")) {
            replace_suffix(3, "i");
        } else if (ends_with("ss")) {
            // unchanged
        } else if (ends_with("s")) {
            replace_suffix(1, "");
        }
    }

    void step1b()
    {
        if (ends_with("eed")) {
            if (measure(w_.size() - 3) > 0) {
                replace_suffix(3, "ee");
            }
            return;
        }
        std::size_t cut = 0;
        if (ends_with("ed")) {
            cut = 2;
        } else if (ends_with("ing")) {
            cut = 3;
        } else {
            return;
        }
        if (!has_vowel(w_.size() - cut)) {
            return;
        }
        replace_suffix(cut, "");

        if (ends_with("at") || ends_with("bl") || ends_with("iz")) {
            w_.push_back('e');
        } else if (ends_double_consonant(w_.size())) {
            char const last = w_.back();
            if (last != 'l' && last != 's' && last != 'z') {
                w_.pop_back();
            }
        } else if (measure(w_.size()) == 1 && ends_cvc(w_.size())) {
            w_.push_back('e');
        }
    }

    void step1c()
    {
        if (ends_with("y") && has_vowel(w_.size() - 1)) {
            w_.back() = 'i';
        }
    }

    void step2()
    {
        auto const positive = [this](std::size_t len) { return measure(len) > 0; };
        static constexpr std::array<Rule, 20> kOriginal = {{
            {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},  {"anci", "ance"},
            {"izer", "ize"},    {"abli", "able"},   {"alli", "al"},    {"entli", "ent"},
            {"eli", "e"},       {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
            {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"}, {"fulness", "ful"},
            {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},  {"biliti", "ble"},
        }};
        static constexpr std::array<Rule, 21> kReferenceC = {{
            {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},  {"anci", "ance"},
            {"izer", "ize"},    {"bli", "ble"},     {"alli", "al"},    {"entli", "ent"},
            {"eli", "e"},       {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
            {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"}, {"fulness", "ful"},
            {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},  {"biliti", "ble"},
            {"logi", "log"},
        }};
        if (variant_ == PorterVariant::ReferenceC) {
            apply_first_match(kReferenceC, positive);
        } else {
            apply_first_match(kOriginal, positive);
        }
    }

    void step3()
    {
        static constexpr std::array<Rule, 7> kRules = {{
            {"icate", "ic"},
            {"ative", ""},
            {"alize", "al"},
            {"iciti", "ic"},
            {"ical", "ic"},
            {"ful", ""},
            {"ness", ""},
        }};
        apply_first_match(kRules, [this](std::size_t len) { return measure(len) > 0; });
    }

    void step4()
    {
        // "ement" precedes "ment" and "ent" so the longest suffix is seen first.
        static constexpr std::array<Rule, 19> kRules = {{
            {"al", ""},   {"ance", ""}, {"ence", ""}, {"er", ""},   {"ic", ""},
            {"able", ""}, {"ible", ""}, {"ant", ""},  {"ement", ""}, {"ment", ""},
            {"ent", ""},  {"ion", ""},  {"ou", ""},   {"ism", ""},  {"ate", ""},
            {"iti", ""},  {"ous", ""},  {"ive", ""},  {"ize", ""},
        }};
        for (auto const& rule : kRules) {
            if (!ends_with(rule.suffix)) {
                continue;
            }
            std::size_t const stem_len = w_.size() - rule.suffix.size();
            bool ok = measure(stem_len) > 1;
            if (rule.suffix == "ion") {
                ok = ok && stem_len > 0 && (w_[stem_len - 1] == 's' || w_[stem_len - 1] == 't');
            }
            if (ok) {
                replace_suffix(rule.suffix.size(), "");
            }
            return;
        }
    }

    void step5a()
    {
        if (!ends_with("e")) {
            return;
        }
        std::size_t const stem_len = w_.size() - 1;
        int const m = measure(stem_len);
        if (m > 1 || (m == 1 && !ends_cvc(stem_len))) {
            w_.pop_back();
        }
    }

    void step5b()
    {
        if (measure(w_.size()) > 1 && ends_double_consonant(w_.size()) && w_.back() == 'l') {
            w_.pop_back();
        }
    }
};

} // namespace

std::string porter_stem(std::string_view word, PorterVariant variant)
{
    return Stemmer(word, variant).run();
}

} // namespace lexdrift
