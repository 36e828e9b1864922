#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <vector>

#include "lexdrift/corpus.hpp"
#include "lexdrift/decade.hpp"
#include "lexdrift/index.hpp"
#include "lexdrift/textproc.hpp"

namespace lexdrift {

struct CollectionInfo {
    Decade label = Decade::Full;
    std::size_t num_novels = 0;
    std::size_t num_paragraphs = 0;
};

/// The full collection plus its decade sub-collections, each with its own
/// index. Immutable once built; safe to share between threads.
///
/// A decade that has novels but no paragraphs is still part of the corpus;
/// it just has no index, and every query against it is absent.
class PartitionedCorpus {
public:
    /// Builds the FULL index and one index per populated decade. Throws
    /// ValidationError if the ingest produced no paragraphs at all.
    [[nodiscard]] static PartitionedCorpus build(IngestResult const& ingested, Analyzer analyzer,
                                                 unsigned threads = 0);

    /// Directory layout: collections.json, stopwords.txt and one
    /// `<label>.idx` file per indexed collection.
    void save(std::filesystem::path const& dir) const;
    [[nodiscard]] static PartitionedCorpus load(std::filesystem::path const& dir);

    /// True for FULL and for every decade with at least one novel.
    [[nodiscard]] bool has_collection(Decade d) const noexcept;

    /// nullptr when the collection is unknown or has no paragraphs.
    [[nodiscard]] Index const* index(Decade d) const noexcept
    {
        return indices_[static_cast<std::size_t>(d)].get();
    }

    /// Throws NotFoundError naming the collection when it has no index.
    [[nodiscard]] Index const& require_index(Decade d) const;

    /// Populated decades in chronological order followed by FULL.
    [[nodiscard]] std::vector<Decade> labels() const;
    /// Populated decades only.
    [[nodiscard]] std::vector<Decade> decades() const;

    [[nodiscard]] std::vector<CollectionInfo> collections() const;
    [[nodiscard]] CollectionInfo info(Decade d) const;

    [[nodiscard]] Analyzer const& analyzer() const noexcept { return analyzer_; }

private:
    PartitionedCorpus() = default;

    std::array<std::shared_ptr<Index const>, 8> indices_{};
    std::array<std::size_t, 8> novels_{};
    std::array<std::size_t, 8> paragraphs_{};
    Analyzer analyzer_;
};

} // namespace lexdrift
