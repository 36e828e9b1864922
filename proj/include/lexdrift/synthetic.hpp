#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "lexdrift/corpus.hpp"
#include "lexdrift/decade.hpp"

namespace lexdrift::synthetic {

/// Two-partition corpus (1850s vs 1880s) with one keyword whose co-occurring
/// vocabulary is swapped between partitions and one whose vocabulary is
/// identical in both.
struct DriftSpec {
    std::uint64_t seed = 1;
    std::string drifting_keyword = "vampire";
    std::string stable_keyword = "murder";
    std::size_t novels_per_partition = 4;
    std::size_t paragraphs_per_novel = 60;
    std::size_t background_vocabulary = 400;
    std::size_t neighbourhood_size = 12;
    /// Share of paragraphs mentioning each keyword.
    double keyword_rate = 0.2;
};

[[nodiscard]] std::vector<NovelText> drift_corpus(DriftSpec const& spec);

/// Multi-decade corpus over a keyword list, with per-decade drift in each
/// keyword's neighbourhood and chosen keywords missing from chosen decades.
struct ProtocolSpec {
    std::uint64_t seed = 7;
    std::size_t total_paragraphs = 10000;
    std::vector<std::string> keywords;
    /// keyword -> decades in which it never occurs.
    std::map<std::string, std::set<Decade>> absent;
    std::map<Decade, std::size_t> novels_per_decade = {
        {Decade::d1830s, 2}, {Decade::d1840s, 3}, {Decade::d1850s, 5}, {Decade::d1860s, 6},
        {Decade::d1870s, 8}, {Decade::d1880s, 10}, {Decade::d1890s, 14},
    };
    std::size_t background_vocabulary = 2000;
    double keyword_rate = 0.3;
};

[[nodiscard]] std::vector<NovelText> protocol_corpus(ProtocolSpec const& spec);

/// The default 25 keywords, with immigrant, vampire, mesalliance and eviction
/// missing from the 1830s.
[[nodiscard]] ProtocolSpec standard_protocol(std::uint64_t seed = 7,
                                             std::size_t total_paragraphs = 10000);

/// Writes `texts/<id>.txt` for every novel plus `manifest.jsonl` under dir.
/// Returns the manifest path.
std::filesystem::path write_corpus(std::vector<NovelText> const& novels,
                                   std::filesystem::path const& dir);

} // namespace lexdrift::synthetic
