#include "lexdrift/synthetic.hpp"

#include <algorithm>
#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

#include "lexdrift/config.hpp"
#include "lexdrift/errors.hpp"
#include "lexdrift/textproc.hpp"

namespace lexdrift::synthetic {

namespace {

using Rng = std::mt19937_64;

constexpr std::string_view kConsonants = "bcdfgklmnprstvz";
constexpr std::string_view kVowels = "aeiou";

/// Distinct pseudo-words whose stems are distinct from each other and from `reserved`.
class Lexicon {
public:
    explicit Lexicon(Rng& rng, std::set<std::string> reserved) : rng_(rng)
    {
        for (auto const& r : reserved) {
            used_stems_.insert(stem(r));
        }
    }

    std::vector<std::string> words(std::size_t n)
    {
        std::vector<std::string> out;
        std::uniform_int_distribution<int> syllables(2, 4);
        std::uniform_int_distribution<std::size_t> cons(0, kConsonants.size() - 1);
        std::uniform_int_distribution<std::size_t> vow(0, kVowels.size() - 1);
        std::bernoulli_distribution closed(0.4);
        while (out.size() < n) {
            std::string w;
            auto const k = syllables(rng_);
            for (int i = 0; i < k; ++i) {
                w.push_back(kConsonants[cons(rng_)]);
                w.push_back(kVowels[vow(rng_)]);
            }
            if (closed(rng_)) {
                w.push_back(kConsonants[cons(rng_)]);
            }
            if (used_stems_.insert(stem(w)).second) {
                out.push_back(std::move(w));
            }
        }
        return out;
    }

private:
    Rng& rng_;
    std::set<std::string> used_stems_;
};

class Zipf {
public:
    explicit Zipf(std::size_t n)
    {
        std::vector<double> weights(n);
        for (std::size_t r = 0; r < n; ++r) {
            weights[r] = 1.0 / static_cast<double>(r + 1);
        }
        dist_ = std::discrete_distribution<std::size_t>(weights.begin(), weights.end());
    }
    std::size_t operator()(Rng& rng) { return dist_(rng); }

private:
    std::discrete_distribution<std::size_t> dist_;
};

std::string join_paragraph(std::vector<std::string> words, Rng& rng)
{
    std::shuffle(words.begin(), words.end(), rng);
    std::string out;
    std::uniform_int_distribution<int> sentence_len(6, 14);
    int until_stop = sentence_len(rng);
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (i > 0) {
            out.push_back(' ');
        }
        out += words[i];
        if (--until_stop == 0 || i + 1 == words.size()) {
            out.push_back('.');
            until_stop = sentence_len(rng);
        }
    }
    return out;
}

void add_background(std::vector<std::string>& words, std::vector<std::string> const& vocab,
                    Zipf& zipf, std::size_t count, Rng& rng)
{
    for (std::size_t i = 0; i < count; ++i) {
        words.push_back(vocab[zipf(rng)]);
    }
}

void add_sample(std::vector<std::string>& words, std::vector<std::string> const& pool,
                std::size_t count, Rng& rng)
{
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (std::size_t i = 0; i < count; ++i) {
        words.push_back(pool[pick(rng)]);
    }
}

int year_of(Decade d, std::size_t novel)
{
    return kFirstYear + static_cast<int>(d) * 10 + static_cast<int>(novel % 9);
}

} // namespace

std::vector<NovelText> drift_corpus(DriftSpec const& spec)
{
    Rng rng(spec.seed);
    Lexicon lex(rng, {spec.drifting_keyword, spec.stable_keyword});
    auto const background = lex.words(spec.background_vocabulary);
    auto const drift_early = lex.words(spec.neighbourhood_size);
    auto const drift_late = lex.words(spec.neighbourhood_size);
    auto const stable = lex.words(spec.neighbourhood_size);
    Zipf zipf(background.size());

    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> kw_count(1, 2);
    std::uniform_int_distribution<std::size_t> nb_count(5, 8);
    std::uniform_int_distribution<std::size_t> bg_short(15, 30);
    std::uniform_int_distribution<std::size_t> bg_long(20, 40);

    std::vector<NovelText> out;
    for (auto const partition : {Decade::d1850s, Decade::d1880s}) {
        auto const& drifting = partition == Decade::d1850s ? drift_early : drift_late;
        for (std::size_t n = 0; n < spec.novels_per_partition; ++n) {
            NovelText novel;
            novel.record.novel_id = std::string(to_string(partition)) + "-n" + std::to_string(n);
            novel.record.title = "Synthetic novel " + novel.record.novel_id;
            novel.record.year = year_of(partition, n);
            for (std::size_t p = 0; p < spec.paragraphs_per_novel; ++p) {
                std::vector<std::string> words;
                double const r = coin(rng);
                if (r < spec.keyword_rate) {
                    add_sample(words, {spec.drifting_keyword}, kw_count(rng), rng);
                    add_sample(words, drifting, nb_count(rng), rng);
                    add_background(words, background, zipf, bg_short(rng), rng);
                } else if (r < 2 * spec.keyword_rate) {
                    add_sample(words, {spec.stable_keyword}, kw_count(rng), rng);
                    add_sample(words, stable, nb_count(rng), rng);
                    add_background(words, background, zipf, bg_short(rng), rng);
                } else {
                    add_background(words, background, zipf, bg_long(rng), rng);
                }
                if (p > 0) {
                    novel.text += "\n\n";
                }
                novel.text += join_paragraph(std::move(words), rng);
            }
            novel.text.push_back('\n');
            out.push_back(std::move(novel));
        }
    }
    return out;
}

std::vector<NovelText> protocol_corpus(ProtocolSpec const& spec)
{
    if (spec.keywords.empty()) {
        throw ValidationError("protocol corpus needs at least one keyword");
    }
    Rng rng(spec.seed);
    std::set<std::string> reserved(spec.keywords.begin(), spec.keywords.end());
    Lexicon lex(rng, reserved);
    auto const background = lex.words(spec.background_vocabulary);
    Zipf zipf(background.size());

    // Each keyword keeps a core neighbourhood throughout the century and gets
    // a fresh decade-specific one in every decade.
    std::map<std::string, std::vector<std::string>> core;
    std::map<std::pair<std::string, Decade>, std::vector<std::string>> local;
    for (auto const& kw : spec.keywords) {
        core[kw] = lex.words(6);
        for (auto d : kDecades) {
            local[{kw, d}] = lex.words(8);
        }
    }

    std::size_t total_novels = 0;
    for (auto const& [d, n] : spec.novels_per_decade) {
        total_novels += n;
    }
    if (total_novels == 0) {
        throw ValidationError("protocol corpus needs at least one novel");
    }
    std::size_t const per_novel = std::max<std::size_t>(1, spec.total_paragraphs / total_novels);
    std::size_t remainder = spec.total_paragraphs > per_novel * total_novels
                                ? spec.total_paragraphs - per_novel * total_novels
                                : 0;

    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> kw_count(1, 2);
    std::uniform_int_distribution<std::size_t> core_count(2, 4);
    std::uniform_int_distribution<std::size_t> local_count(2, 5);
    std::uniform_int_distribution<std::size_t> bg_short(15, 30);
    std::uniform_int_distribution<std::size_t> bg_long(20, 40);

    std::vector<NovelText> out;
    for (auto const& [decade, count] : spec.novels_per_decade) {
        std::vector<std::string> present;
        for (auto const& kw : spec.keywords) {
            auto it = spec.absent.find(kw);
            if (it == spec.absent.end() || !it->second.contains(decade)) {
                present.push_back(kw);
            }
        }
        for (std::size_t n = 0; n < count; ++n) {
            NovelText novel;
            novel.record.novel_id = std::string(to_string(decade)) + "-n" + std::to_string(n);
            novel.record.title = "Synthetic novel " + novel.record.novel_id;
            novel.record.year = year_of(decade, n);
            std::size_t paragraphs = per_novel;
            if (remainder > 0) {
                ++paragraphs;
                --remainder;
            }
            for (std::size_t p = 0; p < paragraphs; ++p) {
                std::vector<std::string> words;
                if (!present.empty() && coin(rng) < spec.keyword_rate) {
                    std::uniform_int_distribution<std::size_t> pick(0, present.size() - 1);
                    auto const& kw = present[pick(rng)];
                    add_sample(words, {kw}, kw_count(rng), rng);
                    add_sample(words, core.at(kw), core_count(rng), rng);
                    add_sample(words, local.at({kw, decade}), local_count(rng), rng);
                    add_background(words, background, zipf, bg_short(rng), rng);
                } else {
                    add_background(words, background, zipf, bg_long(rng), rng);
                }
                if (p > 0) {
                    novel.text += "\n\n";
                }
                novel.text += join_paragraph(std::move(words), rng);
            }
            novel.text.push_back('\n');
            out.push_back(std::move(novel));
        }
    }
    return out;
}

ProtocolSpec standard_protocol(std::uint64_t seed, std::size_t total_paragraphs)
{
    ProtocolSpec spec;
    spec.seed = seed;
    spec.total_paragraphs = total_paragraphs;
    spec.keywords = QuerySet::defaults().keywords();
    for (auto const* kw : {"immigrant", "vampire", "mesalliance", "eviction"}) {
        spec.absent[kw] = {Decade::d1830s};
    }
    return spec;
}

std::filesystem::path write_corpus(std::vector<NovelText> const& novels,
                                   std::filesystem::path const& dir)
{
    auto const texts = dir / "texts";
    std::filesystem::create_directories(texts);
    auto const manifest_path = dir / "manifest.jsonl";
    std::ofstream manifest(manifest_path, std::ios::trunc);
    for (auto const& novel : novels) {
        auto const rel = std::filesystem::path("texts") / (novel.record.novel_id + ".txt");
        std::ofstream(dir / rel, std::ios::binary | std::ios::trunc) << novel.text;
        nlohmann::json rec;
        rec["id"] = novel.record.novel_id;
        rec["title"] = novel.record.title;
        rec["year"] = novel.record.year;
        rec["path"] = rel.string();
        manifest << rec.dump() << '\n';
    }
    if (!manifest) {
        throw Error("failed writing " + manifest_path.string());
    }
    return manifest_path;
}

} // namespace lexdrift::synthetic
