#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "lexdrift/decade.hpp"
#include "lexdrift/textproc.hpp"

namespace lexdrift {

struct ManifestRecord {
    std::string novel_id;
    std::string title;
    int year = 0;
    std::filesystem::path path;
};

/// A paragraph of one novel; the retrieval unit.
struct Paragraph {
    std::string doc_id;
    std::string novel_id;
    Decade decade = Decade::d1830s;
    std::vector<std::string> tokens;

    [[nodiscard]] std::size_t length() const noexcept { return tokens.size(); }
};

/// Parses a JSON-lines manifest with one {"id", "title", "year", "path"}
/// object per line. Relative paths resolve against the manifest's directory.
/// Blank lines are skipped. Throws ParseError on malformed JSON and
/// ValidationError on missing fields or duplicate ids.
[[nodiscard]] std::vector<ManifestRecord> load_manifest(std::filesystem::path const& path);

[[nodiscard]] std::vector<ManifestRecord> parse_manifest(std::string_view contents,
                                                         std::filesystem::path const& base_dir);

[[nodiscard]] std::string make_doc_id(std::string_view novel_id, std::size_t ordinal);

/// Paragraphs are maximal runs of non-blank lines. Runs that analyze to zero
/// terms are dropped and ordinals stay consecutive over the kept ones.
[[nodiscard]] std::vector<Paragraph> segment_paragraphs(std::string_view raw_text,
                                                        std::string_view novel_id, Decade decade,
                                                        Analyzer const& analyzer);

struct ExcludedNovel {
    std::string novel_id;
    std::string reason;
};

/// Result of reading every manifest entry: paragraphs grouped by decade plus
/// per-decade novel counts.
struct IngestResult {
    std::array<std::vector<Paragraph>, kDecades.size()> paragraphs;
    std::array<std::size_t, kDecades.size()> novels{};
    std::vector<ExcludedNovel> excluded;

    [[nodiscard]] std::vector<Paragraph> const& of(Decade d) const
    {
        return paragraphs[static_cast<std::size_t>(d)];
    }
    [[nodiscard]] std::size_t total_paragraphs() const;
    [[nodiscard]] std::size_t total_novels() const;
};

/// In-memory source text for a novel, used when texts do not live on disk.
struct NovelText {
    ManifestRecord record;
    std::string text;
};

/// Reads each manifest file, assigns decades and segments paragraphs. Novels
/// whose year falls outside the corpus span are excluded with a warning.
/// `threads == 0` picks the hardware concurrency.
[[nodiscard]] IngestResult ingest(std::vector<ManifestRecord> const& records,
                                  Analyzer const& analyzer, unsigned threads = 0);

[[nodiscard]] IngestResult ingest(std::vector<NovelText> const& novels, Analyzer const& analyzer,
                                  unsigned threads = 0);

} // namespace lexdrift
