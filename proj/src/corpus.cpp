#include "lexdrift/corpus.hpp"

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "lexdrift/errors.hpp"
#include "lexdrift/parallel.hpp"

namespace lexdrift {

namespace {

using json = nlohmann::json;

bool is_blank(std::string_view line)
{
    return line.find_first_not_of(" \t\r\f\v") == std::string_view::npos;
}

std::string read_file(std::filesystem::path const& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw NotFoundError("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string required_string(json const& obj, char const* key, std::size_t line_no)
{
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
        throw ValidationError("manifest line " + std::to_string(line_no) + ": missing field '"
                              + key + "'");
    }
    if (!it->is_string()) {
        throw ValidationError("manifest line " + std::to_string(line_no) + ": field '" + key
                              + "' must be a string");
    }
    return it->get<std::string>();
}

struct NovelParagraphs {
    std::optional<Decade> decade;
    std::vector<Paragraph> paragraphs;
    std::string exclusion;
};

NovelParagraphs process_novel(ManifestRecord const& record, std::string_view text,
                              Analyzer const& analyzer)
{
    NovelParagraphs out;
    try {
        out.decade = assign_decade(record.year);
    } catch (OutOfRangeError const& e) {
        out.exclusion = e.what();
        return out;
    }
    out.paragraphs = segment_paragraphs(text, record.novel_id, *out.decade, analyzer);
    return out;
}

template <typename Source>
IngestResult ingest_impl(std::vector<Source> const& items, unsigned threads, auto&& record_of,
                         auto&& text_of, Analyzer const& analyzer)
{
    std::vector<NovelParagraphs> per_novel(items.size());
    parallel_for(items.size(), threads, [&](std::size_t i) {
        per_novel[i] = process_novel(record_of(items[i]), text_of(items[i]), analyzer);
    });

    IngestResult result;
    for (std::size_t i = 0; i < items.size(); ++i) {
        auto& novel = per_novel[i];
        auto const& record = record_of(items[i]);
        if (!novel.decade) {
            spdlog::warn("excluding novel '{}': {}", record.novel_id, novel.exclusion);
            result.excluded.push_back({record.novel_id, novel.exclusion});
            continue;
        }
        auto const slot = static_cast<std::size_t>(*novel.decade);
        ++result.novels[slot];
        auto& bucket = result.paragraphs[slot];
        bucket.insert(bucket.end(), std::make_move_iterator(novel.paragraphs.begin()),
                      std::make_move_iterator(novel.paragraphs.end()));
    }
    return result;
}

} // namespace

std::vector<ManifestRecord> parse_manifest(std::string_view contents,
                                           std::filesystem::path const& base_dir)
{
    std::vector<ManifestRecord> records;
    std::unordered_set<std::string> seen;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < contents.size()) {
        auto end = contents.find('\n', pos);
        if (end == std::string_view::npos) {
            end = contents.size();
        }
        auto const line = contents.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (is_blank(line)) {
            continue;
        }

        json obj;
        try {
            obj = json::parse(line);
        } catch (json::parse_error const& e) {
            throw ParseError(std::string("malformed manifest record: ") + e.what(), line_no);
        }
        if (!obj.is_object()) {
            throw ParseError("manifest record is not an object", line_no);
        }

        ManifestRecord rec;
        rec.novel_id = required_string(obj, "id", line_no);
        if (auto t = obj.find("title"); t != obj.end() && t->is_string()) {
            rec.title = t->get<std::string>();
        }
        auto year = obj.find("year");
        if (year == obj.end() || year->is_null()) {
            throw ValidationError("manifest line " + std::to_string(line_no)
                                  + ": missing field 'year'");
        }
        if (!year->is_number_integer()) {
            throw ValidationError("manifest line " + std::to_string(line_no)
                                  + ": field 'year' must be an integer");
        }
        rec.year = year->get<int>();
        auto path = required_string(obj, "path", line_no);
        if (path.empty()) {
            throw ValidationError("manifest line " + std::to_string(line_no) + ": empty path");
        }
        rec.path = std::filesystem::path(path);
        if (rec.path.is_relative() && !base_dir.empty()) {
            rec.path = base_dir / rec.path;
        }
        if (rec.novel_id.empty()) {
            throw ValidationError("manifest line " + std::to_string(line_no) + ": empty id");
        }
        if (!seen.insert(rec.novel_id).second) {
            throw ValidationError("manifest line " + std::to_string(line_no)
                                  + ": duplicate novel id '" + rec.novel_id + "'");
        }
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<ManifestRecord> load_manifest(std::filesystem::path const& path)
{
    auto const contents = read_file(path);
    return parse_manifest(contents, path.parent_path());
}

std::string make_doc_id(std::string_view novel_id, std::size_t ordinal)
{
    char buf[16];
    std::snprintf(buf, sizeof buf, "%06zu", ordinal);
    std::string id(novel_id);
    id.push_back('#');
    id.append(buf);
    return id;
}

std::vector<Paragraph> segment_paragraphs(std::string_view raw_text, std::string_view novel_id,
                                          Decade decade, Analyzer const& analyzer)
{
    auto const text = sanitize_text(raw_text);
    std::vector<Paragraph> out;
    std::string block;

    auto flush = [&] {
        if (block.empty()) {
            return;
        }
        auto terms = analyzer.analyze(block);
        block.clear();
        if (terms.empty()) {
            return;
        }
        Paragraph p;
        p.doc_id = make_doc_id(novel_id, out.size());
        p.novel_id = std::string(novel_id);
        p.decade = decade;
        p.tokens = std::move(terms);
        out.push_back(std::move(p));
    };

    std::size_t pos = 0;
    std::string_view view(text);
    while (pos <= view.size()) {
        auto end = view.find('\n', pos);
        if (end == std::string_view::npos) {
            end = view.size();
        }
        auto const line = view.substr(pos, end - pos);
        if (is_blank(line)) {
            flush();
        } else {
            block.append(line);
            block.push_back('\n');
        }
        pos = end + 1;
    }
    flush();
    return out;
}

std::size_t IngestResult::total_paragraphs() const
{
    std::size_t n = 0;
    for (auto const& v : paragraphs) {
        n += v.size();
    }
    return n;
}

std::size_t IngestResult::total_novels() const
{
    std::size_t n = 0;
    for (auto c : novels) {
        n += c;
    }
    return n;
}

IngestResult ingest(std::vector<ManifestRecord> const& records, Analyzer const& analyzer,
                    unsigned threads)
{
    return ingest_impl(
        records, threads, [](ManifestRecord const& r) -> ManifestRecord const& { return r; },
        [](ManifestRecord const& r) { return read_file(r.path); }, analyzer);
}

IngestResult ingest(std::vector<NovelText> const& novels, Analyzer const& analyzer,
                    unsigned threads)
{
    return ingest_impl(
        novels, threads, [](NovelText const& n) -> ManifestRecord const& { return n.record; },
        [](NovelText const& n) -> std::string_view { return n.text; }, analyzer);
}

} // namespace lexdrift
