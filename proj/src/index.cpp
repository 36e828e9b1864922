#include "lexdrift/index.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>

#include "lexdrift/errors.hpp"

namespace lexdrift {

namespace {

constexpr char kMagic[8] = {'L', 'X', 'D', 'R', 'I', 'D', 'X', '\n'};
constexpr std::size_t kHeaderSize = sizeof kMagic + 4 + 8;
constexpr std::size_t kTrailerSize = 8;

std::uint64_t fnv1a64(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

class Writer {
public:
    void u32(std::uint32_t v)
    {
        for (int i = 0; i < 4; ++i) {
            buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
        }
    }
    void u64(std::uint64_t v)
    {
        for (int i = 0; i < 8; ++i) {
            buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
        }
    }
    void str(std::string_view s)
    {
        u32(static_cast<std::uint32_t>(s.size()));
        buf_.append(s);
    }
    void raw(std::string_view s) { buf_.append(s); }
    [[nodiscard]] std::string take() && { return std::move(buf_); }

private:
    std::string buf_;
};

class Reader {
public:
    explicit Reader(std::string_view bytes) : bytes_(bytes) {}

    std::uint32_t u32()
    {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
        }
        pos_ += 4;
        return v;
    }
    std::uint64_t u64()
    {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) {
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
        }
        pos_ += 8;
        return v;
    }
    std::string str()
    {
        auto const n = u32();
        need(n);
        std::string s(bytes_.substr(pos_, n));
        pos_ += n;
        return s;
    }
    [[nodiscard]] bool done() const noexcept { return pos_ == bytes_.size(); }

private:
    void need(std::size_t n) const
    {
        if (bytes_.size() - pos_ < n) {
            throw IndexFormatError("index payload ends prematurely");
        }
    }

    std::string_view bytes_;
    std::size_t pos_ = 0;
};

} // namespace

IndexStats merge_stats(std::span<IndexStats const> parts)
{
    IndexStats out;
    for (auto const& p : parts) {
        out.num_docs += p.num_docs;
        out.total_tokens += p.total_tokens;
        for (auto const& [t, v] : p.df) {
            out.df[t] += v;
        }
        for (auto const& [t, v] : p.cf) {
            out.cf[t] += v;
        }
    }
    out.avg_doc_len = out.num_docs == 0
                          ? 0.0
                          : static_cast<double>(out.total_tokens) / static_cast<double>(out.num_docs);
    return out;
}

Index Index::build(std::span<Paragraph const> paragraphs)
{
    if (paragraphs.empty()) {
        throw ValidationError("cannot index an empty paragraph set");
    }

    std::vector<std::size_t> order(paragraphs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return paragraphs[a].doc_id < paragraphs[b].doc_id;
    });
    for (std::size_t i = 1; i < order.size(); ++i) {
        if (paragraphs[order[i]].doc_id == paragraphs[order[i - 1]].doc_id) {
            throw ValidationError("duplicate doc id '" + paragraphs[order[i]].doc_id + "'");
        }
    }

    Index idx;
    for (auto const& p : paragraphs) {
        for (auto const& t : p.tokens) {
            idx.terms_.push_back(t);
        }
    }
    std::sort(idx.terms_.begin(), idx.terms_.end());
    idx.terms_.erase(std::unique(idx.terms_.begin(), idx.terms_.end()), idx.terms_.end());

    idx.doc_ids_.reserve(order.size());
    idx.doc_lengths_.reserve(order.size());
    idx.forward_offsets_.reserve(order.size() + 1);
    idx.forward_offsets_.push_back(0);

    std::vector<TermId> ids;
    for (auto const pi : order) {
        auto const& p = paragraphs[pi];
        if (p.tokens.empty()) {
            throw ValidationError("paragraph '" + p.doc_id + "' has no tokens");
        }
        idx.doc_ids_.push_back(p.doc_id);
        idx.doc_lengths_.push_back(static_cast<std::uint32_t>(p.tokens.size()));
        idx.total_tokens_ += p.tokens.size();

        ids.clear();
        for (auto const& t : p.tokens) {
            auto it = std::lower_bound(idx.terms_.begin(), idx.terms_.end(), t);
            ids.push_back(static_cast<TermId>(it - idx.terms_.begin()));
        }
        std::sort(ids.begin(), ids.end());
        for (std::size_t i = 0; i < ids.size();) {
            std::size_t j = i;
            while (j < ids.size() && ids[j] == ids[i]) {
                ++j;
            }
            idx.forward_.push_back({ids[i], static_cast<std::uint32_t>(j - i)});
            i = j;
        }
        idx.forward_offsets_.push_back(idx.forward_.size());
    }

    // Invert the forward index; documents are visited in order so postings
    // come out sorted by doc number.
    std::vector<std::uint64_t> df(idx.terms_.size(), 0);
    idx.cf_.assign(idx.terms_.size(), 0);
    for (auto const& tc : idx.forward_) {
        ++df[tc.term];
        idx.cf_[tc.term] += tc.tf;
    }
    idx.posting_offsets_.assign(idx.terms_.size() + 1, 0);
    for (std::size_t t = 0; t < df.size(); ++t) {
        idx.posting_offsets_[t + 1] = idx.posting_offsets_[t] + df[t];
    }
    idx.postings_.resize(idx.forward_.size());
    std::vector<std::uint64_t> cursor(idx.posting_offsets_.begin(), idx.posting_offsets_.end() - 1);
    for (DocNo d = 0; d < idx.doc_ids_.size(); ++d) {
        for (auto const& tc : idx.doc_terms(d)) {
            idx.postings_[cursor[tc.term]++] = {d, tc.tf};
        }
    }
    return idx;
}

std::optional<TermId> Index::term_id(std::string_view term) const
{
    auto it = std::lower_bound(terms_.begin(), terms_.end(), term,
                               [](std::string const& a, std::string_view b) { return a < b; });
    if (it == terms_.end() || *it != term) {
        return std::nullopt;
    }
    return static_cast<TermId>(it - terms_.begin());
}

std::uint64_t Index::df(std::string_view term) const
{
    auto id = term_id(term);
    return id ? df(*id) : 0;
}

std::uint64_t Index::cf(std::string_view term) const
{
    auto id = term_id(term);
    return id ? cf_[*id] : 0;
}

std::vector<Posting> Index::postings(std::string_view term) const
{
    std::vector<Posting> out;
    auto id = term_id(term);
    if (!id) {
        return out;
    }
    for (auto const& p : postings(*id)) {
        out.push_back({doc_ids_[p.doc], p.tf});
    }
    return out;
}

std::optional<DocNo> Index::find_doc(std::string_view doc_id) const
{
    auto it = std::lower_bound(doc_ids_.begin(), doc_ids_.end(), doc_id,
                               [](std::string const& a, std::string_view b) { return a < b; });
    if (it == doc_ids_.end() || *it != doc_id) {
        return std::nullopt;
    }
    return static_cast<DocNo>(it - doc_ids_.begin());
}

std::uint32_t Index::term_frequency(DocNo doc, TermId term) const noexcept
{
    auto terms = doc_terms(doc);
    auto it = std::lower_bound(terms.begin(), terms.end(), term,
                               [](TermCount const& a, TermId b) { return a.term < b; });
    return (it != terms.end() && it->term == term) ? it->tf : 0;
}

IndexStats Index::stats() const
{
    IndexStats s;
    s.num_docs = num_docs();
    s.total_tokens = total_tokens_;
    s.avg_doc_len = avg_doc_len();
    for (TermId t = 0; t < terms_.size(); ++t) {
        s.df.emplace(terms_[t], df(t));
        s.cf.emplace(terms_[t], cf_[t]);
    }
    return s;
}

std::string Index::serialize() const
{
    Writer payload;
    payload.u64(doc_ids_.size());
    for (std::size_t d = 0; d < doc_ids_.size(); ++d) {
        payload.str(doc_ids_[d]);
        payload.u32(doc_lengths_[d]);
    }
    payload.u64(terms_.size());
    for (TermId t = 0; t < terms_.size(); ++t) {
        payload.str(terms_[t]);
        payload.u64(cf_[t]);
        auto const list = postings(t);
        payload.u64(list.size());
        for (auto const& p : list) {
            payload.u32(p.doc);
            payload.u32(p.tf);
        }
    }
    auto body = std::move(payload).take();

    Writer file;
    file.raw(std::string_view(kMagic, sizeof kMagic));
    file.u32(kIndexFormatVersion);
    file.u64(body.size());
    file.raw(body);
    file.u64(fnv1a64(body));
    return std::move(file).take();
}

Index Index::deserialize(std::string_view bytes)
{
    if (bytes.size() < kHeaderSize || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
        throw IndexFormatError("not an index file (bad magic bytes)");
    }
    Reader header(bytes.substr(sizeof kMagic, 12));
    auto const version = header.u32();
    auto const payload_size = header.u64();
    if (version > kIndexFormatVersion) {
        throw IndexFormatError("index format version " + std::to_string(version)
                               + " is newer than supported version "
                               + std::to_string(kIndexFormatVersion));
    }
    if (version != kIndexFormatVersion) {
        throw IndexFormatError("unsupported index format version " + std::to_string(version));
    }
    if (bytes.size() - kHeaderSize < kTrailerSize
        || payload_size != bytes.size() - kHeaderSize - kTrailerSize) {
        throw IndexFormatError("checksum failure: index file truncated or padded");
    }
    auto const body = bytes.substr(kHeaderSize, payload_size);
    Reader trailer(bytes.substr(kHeaderSize + payload_size));
    if (trailer.u64() != fnv1a64(body)) {
        throw IndexFormatError("checksum failure: index payload corrupted");
    }

    Reader in(body);
    Index idx;
    auto const num_docs = in.u64();
    if (num_docs == 0) {
        throw IndexFormatError("index holds no documents");
    }
    for (std::uint64_t d = 0; d < num_docs; ++d) {
        idx.doc_ids_.push_back(in.str());
        idx.doc_lengths_.push_back(in.u32());
        idx.total_tokens_ += idx.doc_lengths_.back();
    }
    auto const num_terms = in.u64();
    idx.posting_offsets_.push_back(0);
    for (std::uint64_t t = 0; t < num_terms; ++t) {
        idx.terms_.push_back(in.str());
        idx.cf_.push_back(in.u64());
        auto const n = in.u64();
        for (std::uint64_t i = 0; i < n; ++i) {
            DocPosting p;
            p.doc = in.u32();
            p.tf = in.u32();
            if (p.doc >= num_docs || p.tf == 0) {
                throw IndexFormatError("posting out of range");
            }
            idx.postings_.push_back(p);
        }
        idx.posting_offsets_.push_back(idx.postings_.size());
    }
    if (!in.done()) {
        throw IndexFormatError("trailing bytes in index payload");
    }
    idx.rebuild_forward();
    return idx;
}

void Index::rebuild_forward()
{
    std::vector<std::uint64_t> counts(doc_ids_.size(), 0);
    for (auto const& p : postings_) {
        ++counts[p.doc];
    }
    forward_offsets_.assign(doc_ids_.size() + 1, 0);
    for (std::size_t d = 0; d < counts.size(); ++d) {
        forward_offsets_[d + 1] = forward_offsets_[d] + counts[d];
    }
    forward_.resize(postings_.size());
    std::vector<std::uint64_t> cursor(forward_offsets_.begin(), forward_offsets_.end() - 1);
    for (TermId t = 0; t < terms_.size(); ++t) {
        for (auto const& p : postings(t)) {
            forward_[cursor[p.doc]++] = {t, p.tf};
        }
    }
}

void Index::save(std::filesystem::path const& path) const
{
    auto const bytes = serialize();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write index file " + path.string());
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw Error("failed writing index file " + path.string());
    }
}

Index Index::load(std::filesystem::path const& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw NotFoundError("cannot open index file " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    auto const bytes = buf.str();
    try {
        return deserialize(bytes);
    } catch (IndexFormatError const& e) {
        throw IndexFormatError(path.string() + ": " + e.what());
    }
}

} // namespace lexdrift
