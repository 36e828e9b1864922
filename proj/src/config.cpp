#include "lexdrift/config.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "lexdrift/errors.hpp"

namespace lexdrift {

namespace {

constexpr std::array<std::pair<std::string_view, QueryCategory>, 25> kDefaultQueries = {{
    {"immigrant", QueryCategory::Thematic},  {"emigrant", QueryCategory::Thematic},
    {"foreign", QueryCategory::Thematic},    {"newcomer", QueryCategory::Thematic},
    {"alien", QueryCategory::Thematic},      {"enslaved", QueryCategory::Thematic},
    {"colony", QueryCategory::Thematic},     {"vampire", QueryCategory::Thematic},
    {"engagement", QueryCategory::Plot},     {"proposal", QueryCategory::Plot},
    {"wedding", QueryCategory::Plot},        {"suitor", QueryCategory::Plot},
    {"lover", QueryCategory::Plot},          {"betrothal", QueryCategory::Plot},
    {"eligible", QueryCategory::Plot},       {"consent", QueryCategory::Plot},
    {"love", QueryCategory::Plot},           {"mesalliance", QueryCategory::Plot},
    {"heiress", QueryCategory::Plot},        {"eviction", QueryCategory::Plot},
    {"crime", QueryCategory::Genre},         {"murder", QueryCategory::Genre},
    {"mystery", QueryCategory::Genre},       {"villain", QueryCategory::Genre},
    {"adventure", QueryCategory::Genre},
}};

std::string_view trim(std::string_view s)
{
    auto const first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    auto const last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string read_text(std::filesystem::path const& path)
{
    std::ifstream in(path);
    if (!in) {
        throw NotFoundError("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

template <typename Fn>
void for_each_line(std::string_view contents, Fn&& fn)
{
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < contents.size()) {
        auto end = contents.find('\n', pos);
        if (end == std::string_view::npos) {
            end = contents.size();
        }
        auto line = contents.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (!line.empty()) {
            fn(line, line_no);
        }
    }
}

template <typename T>
T parse_number(std::string_view key, std::string_view value, std::size_t line_no)
{
    T out{};
    auto const* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end) {
        throw ParseError("invalid value '" + std::string(value) + "' for " + std::string(key),
                         line_no);
    }
    return out;
}

} // namespace

std::string_view to_string(QueryCategory c) noexcept
{
    switch (c) {
    case QueryCategory::Thematic:
        return "thematic";
    case QueryCategory::Plot:
        return "plot";
    case QueryCategory::Genre:
        return "genre";
    }
    return "?";
}

QuerySet QuerySet::defaults()
{
    QuerySet qs;
    for (auto const& [kw, cat] : kDefaultQueries) {
        qs.entries.push_back({std::string(kw), cat});
    }
    return qs;
}

QuerySet QuerySet::parse(std::string_view contents)
{
    QuerySet qs;
    std::set<std::string> seen;
    for_each_line(contents, [&](std::string_view line, std::size_t line_no) {
        auto const split = line.find_first_of(" \t");
        if (split == std::string_view::npos) {
            throw ParseError("expected 'keyword category'", line_no);
        }
        std::string keyword(line.substr(0, split));
        auto const cat = trim(line.substr(split));
        QueryEntry entry;
        entry.keyword = keyword;
        if (cat == "thematic") {
            entry.category = QueryCategory::Thematic;
        } else if (cat == "plot") {
            entry.category = QueryCategory::Plot;
        } else if (cat == "genre") {
            entry.category = QueryCategory::Genre;
        } else {
            throw ParseError("unknown query category '" + std::string(cat) + "'", line_no);
        }
        if (!seen.insert(keyword).second) {
            throw ValidationError("duplicate query keyword '" + keyword + "'");
        }
        qs.entries.push_back(std::move(entry));
    });
    return qs;
}

QuerySet QuerySet::load(std::filesystem::path const& path) { return parse(read_text(path)); }

std::vector<std::string> QuerySet::keywords() const
{
    std::vector<std::string> out;
    for (auto const& e : entries) {
        out.push_back(e.keyword);
    }
    return out;
}

std::string PipelineParams::canonical() const
{
    return fmt::format("fb_docs={};fb_terms={};lambda={};mu={};k1={};b={};depth={};top_n={};"
                       "js_base={}",
                       feedback.fb_docs, feedback.fb_terms, feedback.lambda, feedback.mu,
                       feedback.bm25.k1, feedback.bm25.b, depth, top_n,
                       js_base == LogBase::Two ? "2" : "e");
}

ExperimentConfig ExperimentConfig::parse(std::string_view contents,
                                         std::filesystem::path const& base_dir)
{
    ExperimentConfig cfg;
    auto const resolve = [&](std::string_view v) {
        std::filesystem::path p{std::string(v)};
        return (p.is_relative() && !base_dir.empty()) ? base_dir / p : p;
    };

    for_each_line(contents, [&](std::string_view line, std::size_t line_no) {
        auto const eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError("expected 'key = value'", line_no);
        }
        auto const key = trim(line.substr(0, eq));
        auto const value = trim(line.substr(eq + 1));
        auto& p = cfg.params;
        if (key == "fb_docs") {
            p.feedback.fb_docs = parse_number<std::size_t>(key, value, line_no);
        } else if (key == "fb_terms") {
            p.feedback.fb_terms = parse_number<std::size_t>(key, value, line_no);
        } else if (key == "lambda") {
            p.feedback.lambda = parse_number<double>(key, value, line_no);
        } else if (key == "mu") {
            p.feedback.mu = parse_number<double>(key, value, line_no);
        } else if (key == "k1") {
            p.feedback.bm25.k1 = parse_number<double>(key, value, line_no);
        } else if (key == "b") {
            p.feedback.bm25.b = parse_number<double>(key, value, line_no);
        } else if (key == "depth") {
            p.depth = parse_number<std::size_t>(key, value, line_no);
        } else if (key == "top_n") {
            p.top_n = parse_number<std::size_t>(key, value, line_no);
        } else if (key == "threads") {
            p.threads = parse_number<unsigned>(key, value, line_no);
        } else if (key == "js_base") {
            if (value == "2") {
                p.js_base = LogBase::Two;
            } else if (value == "e") {
                p.js_base = LogBase::E;
            } else {
                throw ParseError("js_base must be 2 or e", line_no);
            }
        } else if (key == "porter") {
            if (value == "original") {
                cfg.porter = PorterVariant::Original;
            } else if (value == "reference-c") {
                cfg.porter = PorterVariant::ReferenceC;
            } else {
                throw ParseError("porter must be original or reference-c", line_no);
            }
        } else if (key == "manifest") {
            cfg.manifest = resolve(value);
        } else if (key == "index_dir") {
            cfg.index_dir = resolve(value);
        } else if (key == "queries") {
            cfg.queries = resolve(value);
        } else if (key == "stopwords") {
            cfg.stopwords = resolve(value);
        } else {
            throw ParseError("unknown config key '" + std::string(key) + "'", line_no);
        }
    });

    auto const& p = cfg.params;
    if (p.feedback.fb_docs == 0 || p.feedback.fb_terms == 0 || p.depth == 0 || p.top_n == 0) {
        throw ValidationError("fb_docs, fb_terms, depth and top_n must all be >= 1");
    }
    if (p.feedback.lambda < 0.0 || p.feedback.lambda > 1.0) {
        throw ValidationError("lambda must lie in [0, 1]");
    }
    if (!(p.feedback.mu > 0.0)) {
        throw ValidationError("mu must be positive");
    }
    if (p.feedback.bm25.k1 < 0.0 || p.feedback.bm25.b < 0.0 || p.feedback.bm25.b > 1.0) {
        throw ValidationError("k1 must be >= 0 and b must lie in [0, 1]");
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::load(std::filesystem::path const& path)
{
    return parse(read_text(path), path.parent_path());
}

} // namespace lexdrift
