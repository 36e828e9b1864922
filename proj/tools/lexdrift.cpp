#include <atomic>
#include <chrono>
#include <csignal>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <httplib.h>
#include <spdlog/spdlog.h>

#include "lexdrift/collection.hpp"
#include "lexdrift/config.hpp"
#include "lexdrift/corpus.hpp"
#include "lexdrift/errors.hpp"
#include "lexdrift/experiment.hpp"
#include "lexdrift/feedback.hpp"
#include "lexdrift/retrieval.hpp"
#include "lexdrift/service.hpp"
#include "lexdrift/synthetic.hpp"

namespace fs = std::filesystem;
using namespace lexdrift;

namespace {

httplib::Server* g_server = nullptr;

void stop_server(int)
{
    if (g_server != nullptr) {
        g_server->stop();
    }
}

PorterVariant porter_from_flag(std::string const& name)
{
    if (name == "original") {
        return PorterVariant::Original;
    }
    if (name == "reference-c") {
        return PorterVariant::ReferenceC;
    }
    throw ValidationError("unknown porter variant '" + name + "'");
}

LogBase log_base_from_flag(std::string const& name)
{
    if (name == "2") {
        return LogBase::Two;
    }
    if (name == "e") {
        return LogBase::E;
    }
    throw ValidationError("js-base must be 2 or e");
}

PartitionedCorpus build_corpus(fs::path const& manifest, std::optional<fs::path> const& stopwords,
                               PorterVariant porter, unsigned threads)
{
    auto const list = stopwords ? StopwordList::load(*stopwords) : StopwordList::english();
    Analyzer analyzer(list, porter);
    auto const records = load_manifest(manifest);
    auto const ingested = ingest(records, analyzer, threads);
    spdlog::info("ingested {} novels, {} paragraphs ({} excluded)", ingested.total_novels(),
                 ingested.total_paragraphs(), ingested.excluded.size());
    return PartitionedCorpus::build(ingested, analyzer, threads);
}

/// Loads the configured index directory when it holds a built corpus,
/// otherwise builds from the manifest (and saves to index_dir if one is set).
PartitionedCorpus corpus_for(ExperimentConfig const& config)
{
    if (!config.index_dir.empty() && fs::exists(config.index_dir / "collections.json")) {
        return PartitionedCorpus::load(config.index_dir);
    }
    if (config.manifest.empty()) {
        throw ValidationError("config needs either an index_dir holding a built index or a manifest");
    }
    std::optional<fs::path> stopwords;
    if (!config.stopwords.empty()) {
        stopwords = config.stopwords;
    }
    auto corpus = build_corpus(config.manifest, stopwords, config.porter, config.params.threads);
    if (!config.index_dir.empty()) {
        corpus.save(config.index_dir);
    }
    return corpus;
}

QuerySet queries_for(ExperimentConfig const& config)
{
    return config.queries.empty() ? QuerySet::defaults() : QuerySet::load(config.queries);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Vocabulary drift across decade sub-collections via pseudo-relevance feedback"};
    app.require_subcommand(1);
    bool verbose = false;
    app.add_flag("-v,--verbose", verbose, "Debug logging");

    // index build
    auto* index_cmd = app.add_subcommand("index", "Index management");
    index_cmd->require_subcommand(1);
    auto* build_cmd = index_cmd->add_subcommand("build", "Ingest a manifest and write the indices");
    fs::path manifest;
    fs::path out_dir;
    std::optional<fs::path> stopwords;
    std::string porter = "original";
    unsigned threads = 0;
    build_cmd->add_option("--manifest", manifest, "JSON-lines manifest")->required();
    build_cmd->add_option("--out", out_dir, "Index directory")->required();
    build_cmd->add_option("--stopwords", stopwords, "Stopword list (default: built-in English)");
    build_cmd->add_option("--porter", porter, "Porter variant")
        ->check(CLI::IsMember({"original", "reference-c"}));
    build_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");

    // search
    auto* search_cmd = app.add_subcommand("search", "BM25 search over one collection");
    fs::path index_dir;
    std::string collection = "FULL";
    std::string query;
    std::size_t k = 100;
    Bm25Params bm25;
    search_cmd->add_option("--index", index_dir, "Index directory")->required();
    search_cmd->add_option("--collection", collection, "1830s..1890s or FULL");
    search_cmd->add_option("--query", query, "Keyword query")->required();
    search_cmd->add_option("--k", k, "Result depth")->check(CLI::PositiveNumber);
    search_cmd->add_option("--k1", bm25.k1, "BM25 k1");
    search_cmd->add_option("--b", bm25.b, "BM25 b");

    // expand
    auto* expand_cmd = app.add_subcommand("expand", "Relevance-model expansion of a keyword");
    FeedbackConfig feedback;
    std::size_t top = 15;
    expand_cmd->add_option("--index", index_dir, "Index directory")->required();
    expand_cmd->add_option("--collection", collection, "1830s..1890s or FULL");
    expand_cmd->add_option("--query", query, "Keyword")->required();
    expand_cmd->add_option("--fb-docs", feedback.fb_docs, "Feedback documents")->check(CLI::PositiveNumber);
    expand_cmd->add_option("--fb-terms", feedback.fb_terms, "Expansion terms kept")->check(CLI::PositiveNumber);
    expand_cmd->add_option("--top", top, "Terms printed")->check(CLI::PositiveNumber);
    expand_cmd->add_option("--mu", feedback.mu, "Dirichlet prior")->check(CLI::PositiveNumber);
    auto* lambda_opt = expand_cmd->add_option("--lambda", feedback.lambda, "Original query weight (0 = pure RM1)")
                           ->check(CLI::Range(0.0, 1.0));
    bool rm3 = false;
    expand_cmd->add_flag("--rm3", rm3, "Interpolate with the original query (lambda 0.6 unless --lambda is given)");
    expand_cmd->add_option("--k1", feedback.bm25.k1, "BM25 k1");
    expand_cmd->add_option("--b", feedback.bm25.b, "BM25 b");

    // experiment run
    auto* experiment_cmd = app.add_subcommand("experiment", "Comparison experiments");
    experiment_cmd->require_subcommand(1);
    auto* run_cmd = experiment_cmd->add_subcommand("run", "Run the full protocol and write reports");
    fs::path config_path;
    std::optional<std::string> js_base;
    std::optional<unsigned> thread_override;
    run_cmd->add_option("--config", config_path, "Experiment config")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--out", out_dir, "Report directory")->required();
    run_cmd->add_option("--js-base", js_base, "Log base for JS divergence")->check(CLI::IsMember({"2", "e"}));
    run_cmd->add_option("--threads", thread_override, "Worker threads (0 = all cores)");

    // serve
    auto* serve_cmd = app.add_subcommand("serve", "HTTP JSON API over a built index");
    int port = 8080;
    std::string host = "127.0.0.1";
    std::optional<fs::path> serve_config;
    std::optional<fs::path> static_dir;
    serve_cmd->add_option("--port", port, "Listen port");
    serve_cmd->add_option("--host", host, "Listen address");
    serve_cmd->add_option("--index-dir", index_dir, "Index directory")->required();
    serve_cmd->add_option("--config", serve_config, "Experiment config for pipeline parameters")
        ->check(CLI::ExistingFile);
    serve_cmd->add_option("--static-dir", static_dir, "Serve explorer assets from here")
        ->check(CLI::ExistingDirectory);
    serve_cmd->add_option("--js-base", js_base, "Log base for JS divergence")->check(CLI::IsMember({"2", "e"}));

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic corpus with a manifest");
    std::string kind = "protocol";
    std::uint64_t seed = 7;
    std::size_t paragraphs = 10000;
    synth_cmd->add_option("kind", kind, "drift or protocol")->check(CLI::IsMember({"drift", "protocol"}));
    synth_cmd->add_option("--out", out_dir, "Output directory")->required();
    synth_cmd->add_option("--seed", seed, "Random seed");
    synth_cmd->add_option("--paragraphs", paragraphs, "Total paragraphs (protocol only)");

    CLI11_PARSE(app, argc, argv);
    spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);

    try {
        if (build_cmd->parsed()) {
            auto const corpus = build_corpus(manifest, stopwords, porter_from_flag(porter), threads);
            corpus.save(out_dir);
            for (auto const& info : corpus.collections()) {
                fmt::print("{}\t{}\t{}\n", to_string(info.label), info.num_novels, info.num_paragraphs);
            }
        } else if (search_cmd->parsed()) {
            auto const corpus = PartitionedCorpus::load(index_dir);
            auto const& index = corpus.require_index(decade_from_label(collection));
            auto const terms = corpus.analyzer().analyze(query);
            auto const ranked = search(index, WeightedQuery::keywords(terms), k, bm25);
            for (std::size_t i = 0; i < ranked.entries.size(); ++i) {
                fmt::print("{}\t{}\t{:.17g}\n", i + 1, ranked.entries[i].doc_id, ranked.entries[i].score);
            }
        } else if (expand_cmd->parsed()) {
            if (rm3 && lambda_opt->count() == 0) {
                feedback.lambda = kRm3Lambda;
            }
            auto const corpus = PartitionedCorpus::load(index_dir);
            auto const eq = expand_query(corpus, decade_from_label(collection), query, feedback);
            if (eq.absent) {
                fmt::print("{}\n", kAbsentMarker);
            } else {
                for (std::size_t i = 0; i < std::min(top, eq.terms.size()); ++i) {
                    fmt::print("{}\t{:.17g}\n", eq.terms[i].term, eq.terms[i].weight);
                }
            }
        } else if (run_cmd->parsed()) {
            auto config = ExperimentConfig::load(config_path);
            if (js_base) {
                config.params.js_base = log_base_from_flag(*js_base);
            }
            if (thread_override) {
                config.params.threads = *thread_override;
            }
            auto const corpus = corpus_for(config);
            auto const bundle = run_pipeline(corpus, queries_for(config), config.params);
            write_reports(bundle, out_dir);
            spdlog::info("reports written to {}", out_dir.string());
        } else if (serve_cmd->parsed()) {
            auto config = serve_config ? ExperimentConfig::load(*serve_config) : ExperimentConfig{};
            if (js_base) {
                config.params.js_base = log_base_from_flag(*js_base);
            }
            ApiService service(config.params, queries_for(config));
            httplib::Server server;
            service.mount(server, static_dir);
            g_server = &server;
            std::signal(SIGINT, stop_server);
            std::signal(SIGTERM, stop_server);

            // Listen straight away so clients see not_ready rather than a refused connection.
            std::atomic<bool> listen_returned{false};
            std::jthread loader([&] {
                try {
                    service.set_corpus(std::make_shared<PartitionedCorpus const>(
                        PartitionedCorpus::load(index_dir)));
                    spdlog::info("corpus loaded from {}", index_dir.string());
                } catch (std::exception const& e) {
                    spdlog::error("loading {} failed: {}", index_dir.string(), e.what());
                    while (!server.is_running() && !listen_returned) {
                        std::this_thread::sleep_for(std::chrono::milliseconds(10));
                    }
                    server.stop();
                }
            });
            spdlog::info("listening on http://{}:{}", host, port);
            bool const ok = server.listen(host, port);
            listen_returned = true;
            if (!ok) {
                spdlog::error("cannot listen on {}:{}", host, port);
                return 1;
            }
        } else if (synth_cmd->parsed()) {
            auto const novels = kind == "drift"
                                    ? synthetic::drift_corpus({.seed = seed})
                                    : synthetic::protocol_corpus(synthetic::standard_protocol(seed, paragraphs));
            auto const path = synthetic::write_corpus(novels, out_dir);
            fmt::print("{}\n", path.string());
        }
    } catch (std::exception const& e) {
        spdlog::error("{}", e.what());
        return 1;
    }
    return 0;
}
