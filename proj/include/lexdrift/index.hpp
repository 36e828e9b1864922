#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lexdrift/corpus.hpp"

namespace lexdrift {

using TermId = std::uint32_t;
using DocNo = std::uint32_t;

struct Posting {
    std::string doc_id;
    std::uint32_t tf = 0;

    friend bool operator==(Posting const&, Posting const&) = default;
};

/// Posting addressed by internal document number.
struct DocPosting {
    DocNo doc = 0;
    std::uint32_t tf = 0;
};

/// One entry of a document's term vector.
struct TermCount {
    TermId term = 0;
    std::uint32_t tf = 0;
};

struct IndexStats {
    std::uint64_t num_docs = 0;
    double avg_doc_len = 0.0;
    std::uint64_t total_tokens = 0;
    std::map<std::string, std::uint64_t> df;
    std::map<std::string, std::uint64_t> cf;

    friend bool operator==(IndexStats const&, IndexStats const&) = default;
};

/// Sums document counts, token counts, df and cf across indices.
[[nodiscard]] IndexStats merge_stats(std::span<IndexStats const> parts);

inline constexpr std::uint32_t kIndexFormatVersion = 1;

/// Immutable in-memory inverted index over paragraphs.
///
/// Documents are numbered in ascending doc_id order and terms in ascending
/// lexicographic order, so iteration by number is also iteration by name.
/// Each document also keeps its term vector, which feedback estimation needs.
class Index {
public:
    /// Throws ValidationError on empty input or duplicate doc ids.
    [[nodiscard]] static Index build(std::span<Paragraph const> paragraphs);

    [[nodiscard]] std::uint64_t num_docs() const noexcept { return doc_ids_.size(); }
    [[nodiscard]] std::uint64_t total_tokens() const noexcept { return total_tokens_; }
    [[nodiscard]] double avg_doc_len() const noexcept
    {
        return static_cast<double>(total_tokens_) / static_cast<double>(doc_ids_.size());
    }
    [[nodiscard]] std::size_t vocabulary_size() const noexcept { return terms_.size(); }

    [[nodiscard]] std::optional<TermId> term_id(std::string_view term) const;
    [[nodiscard]] bool contains_term(std::string_view term) const { return term_id(term).has_value(); }
    [[nodiscard]] std::string const& term(TermId id) const { return terms_[id]; }

    [[nodiscard]] std::uint64_t df(std::string_view term) const;
    [[nodiscard]] std::uint64_t cf(std::string_view term) const;
    [[nodiscard]] std::uint64_t df(TermId id) const noexcept
    {
        return posting_offsets_[id + 1] - posting_offsets_[id];
    }
    [[nodiscard]] std::uint64_t cf(TermId id) const noexcept { return cf_[id]; }

    /// Empty when the term is unseen; otherwise sorted by doc_id.
    [[nodiscard]] std::vector<Posting> postings(std::string_view term) const;
    [[nodiscard]] std::span<DocPosting const> postings(TermId id) const noexcept
    {
        return {postings_.data() + posting_offsets_[id],
                postings_.data() + posting_offsets_[id + 1]};
    }

    [[nodiscard]] std::optional<DocNo> find_doc(std::string_view doc_id) const;
    [[nodiscard]] std::string const& doc_id(DocNo doc) const { return doc_ids_[doc]; }
    [[nodiscard]] std::uint32_t doc_length(DocNo doc) const noexcept { return doc_lengths_[doc]; }
    [[nodiscard]] std::span<TermCount const> doc_terms(DocNo doc) const noexcept
    {
        return {forward_.data() + forward_offsets_[doc],
                forward_.data() + forward_offsets_[doc + 1]};
    }
    [[nodiscard]] std::uint32_t term_frequency(DocNo doc, TermId term) const noexcept;

    [[nodiscard]] IndexStats stats() const;

    /// Single-file container: magic, format version, payload length,
    /// payload, FNV-1a 64 checksum of the payload.
    void save(std::filesystem::path const& path) const;
    [[nodiscard]] static Index load(std::filesystem::path const& path);

    [[nodiscard]] std::string serialize() const;
    [[nodiscard]] static Index deserialize(std::string_view bytes);

private:
    Index() = default;
    void rebuild_forward();

    std::vector<std::string> doc_ids_;
    std::vector<std::uint32_t> doc_lengths_;
    std::vector<std::string> terms_;
    std::vector<std::uint64_t> cf_;
    std::vector<std::uint64_t> posting_offsets_;
    std::vector<DocPosting> postings_;
    std::vector<std::uint64_t> forward_offsets_;
    std::vector<TermCount> forward_;
    std::uint64_t total_tokens_ = 0;
};

} // namespace lexdrift
