#include "lexdrift/collection.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lexdrift/errors.hpp"
#include "lexdrift/parallel.hpp"

namespace lexdrift {

namespace {

using json = nlohmann::json;

constexpr int kLayoutVersion = 1;

std::size_t slot(Decade d) { return static_cast<std::size_t>(d); }

std::string index_file_name(Decade d) { return std::string(to_string(d)) + ".idx"; }

} // namespace

PartitionedCorpus PartitionedCorpus::build(IngestResult const& ingested, Analyzer analyzer,
                                           unsigned threads)
{
    if (ingested.total_paragraphs() == 0) {
        throw ValidationError("corpus contains no paragraphs");
    }
    PartitionedCorpus corpus;
    corpus.analyzer_ = std::move(analyzer);

    std::vector<Paragraph> all;
    all.reserve(ingested.total_paragraphs());
    for (auto d : kDecades) {
        auto const& ps = ingested.of(d);
        corpus.novels_[slot(d)] = ingested.novels[slot(d)];
        corpus.paragraphs_[slot(d)] = ps.size();
        all.insert(all.end(), ps.begin(), ps.end());
    }
    corpus.novels_[slot(Decade::Full)] = ingested.total_novels();
    corpus.paragraphs_[slot(Decade::Full)] = all.size();

    // FULL plus each decade; every index is built independently.
    std::vector<Decade> jobs{Decade::Full};
    for (auto d : kDecades) {
        if (!ingested.of(d).empty()) {
            jobs.push_back(d);
        }
    }
    parallel_for(jobs.size(), threads, [&](std::size_t i) {
        auto const d = jobs[i];
        auto const& ps = d == Decade::Full ? all : ingested.of(d);
        corpus.indices_[slot(d)] = std::make_shared<Index const>(Index::build(ps));
    });
    return corpus;
}

bool PartitionedCorpus::has_collection(Decade d) const noexcept
{
    return d == Decade::Full || novels_[slot(d)] > 0;
}

Index const& PartitionedCorpus::require_index(Decade d) const
{
    if (auto const* idx = index(d)) {
        return *idx;
    }
    throw NotFoundError("no index for collection '" + std::string(to_string(d)) + "'");
}

std::vector<Decade> PartitionedCorpus::decades() const
{
    std::vector<Decade> out;
    for (auto d : kDecades) {
        if (has_collection(d)) {
            out.push_back(d);
        }
    }
    return out;
}

std::vector<Decade> PartitionedCorpus::labels() const
{
    auto out = decades();
    out.push_back(Decade::Full);
    return out;
}

CollectionInfo PartitionedCorpus::info(Decade d) const
{
    return {d, novels_[slot(d)], paragraphs_[slot(d)]};
}

std::vector<CollectionInfo> PartitionedCorpus::collections() const
{
    std::vector<CollectionInfo> out;
    for (auto d : labels()) {
        out.push_back(info(d));
    }
    return out;
}

void PartitionedCorpus::save(std::filesystem::path const& dir) const
{
    std::filesystem::create_directories(dir);
    json manifest;
    manifest["layout_version"] = kLayoutVersion;
    manifest["porter_variant"] =
        analyzer_.variant() == PorterVariant::Original ? "original" : "reference-c";
    manifest["collections"] = json::array();
    for (auto d : labels()) {
        json entry;
        entry["label"] = std::string(to_string(d));
        entry["num_novels"] = novels_[slot(d)];
        entry["num_paragraphs"] = paragraphs_[slot(d)];
        if (auto const* idx = index(d)) {
            entry["file"] = index_file_name(d);
            idx->save(dir / index_file_name(d));
        } else {
            entry["file"] = nullptr;
        }
        manifest["collections"].push_back(std::move(entry));
    }
    std::ofstream(dir / "collections.json") << manifest.dump(2) << '\n';

    std::ofstream stop(dir / "stopwords.txt");
    for (auto const& w : analyzer_.stopwords().words()) {
        stop << w << '\n';
    }
}

PartitionedCorpus PartitionedCorpus::load(std::filesystem::path const& dir)
{
    auto const manifest_path = dir / "collections.json";
    std::ifstream in(manifest_path);
    if (!in) {
        throw NotFoundError("no collections.json in index directory " + dir.string());
    }
    json manifest;
    try {
        manifest = json::parse(in);
    } catch (json::parse_error const& e) {
        throw IndexFormatError(manifest_path.string() + ": " + e.what());
    }
    if (manifest.value("layout_version", 0) != kLayoutVersion) {
        throw IndexFormatError(manifest_path.string() + ": unsupported layout version");
    }

    PartitionedCorpus corpus;
    auto const variant = manifest.value("porter_variant", std::string("original")) == "reference-c"
                             ? PorterVariant::ReferenceC
                             : PorterVariant::Original;
    auto stop_path = dir / "stopwords.txt";
    corpus.analyzer_ = Analyzer(std::filesystem::exists(stop_path) ? StopwordList::load(stop_path)
                                                                   : StopwordList::english(),
                                variant);

    for (auto const& entry : manifest.at("collections")) {
        auto const label = entry.at("label").get<std::string>();
        auto const d = decade_from_label(label);
        corpus.novels_[slot(d)] = entry.at("num_novels").get<std::size_t>();
        corpus.paragraphs_[slot(d)] = entry.at("num_paragraphs").get<std::size_t>();
        if (entry.contains("file") && entry["file"].is_string()) {
            auto const path = dir / entry["file"].get<std::string>();
            if (!std::filesystem::exists(path)) {
                throw NotFoundError("missing index for collection '" + label + "': "
                                    + path.string());
            }
            corpus.indices_[slot(d)] = std::make_shared<Index const>(Index::load(path));
        }
    }
    if (!corpus.index(Decade::Full)) {
        throw NotFoundError("missing index for collection 'FULL' in " + dir.string());
    }
    return corpus;
}

} // namespace lexdrift
