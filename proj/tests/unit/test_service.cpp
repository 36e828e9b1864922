#include <doctest.h>

#include <thread>

#include <httplib.h>

#include "lexdrift/service.hpp"
#include "lexdrift/synthetic.hpp"

using namespace lexdrift;
using json = nlohmann::json;

namespace {

std::shared_ptr<PartitionedCorpus const> drift_corpus()
{
    static auto const corpus = [] {
        auto const novels = synthetic::drift_corpus({});
        return std::make_shared<PartitionedCorpus const>(
            PartitionedCorpus::build(ingest(novels, Analyzer{}, 2), Analyzer{}, 2));
    }();
    return corpus;
}

QuerySet queries() { return QuerySet::parse("vampire thematic\nmurder genre\nimmigrant thematic\n"); }

std::unique_ptr<ApiService> ready_service()
{
    auto service = std::make_unique<ApiService>(PipelineParams{}, queries());
    service->set_corpus(drift_corpus());
    return service;
}

void check_error(ApiResponse const& r, int status, std::string const& code)
{
    CHECK(r.status == status);
    CHECK(r.body.at("code") == code);
    CHECK(r.body.at("message").is_string());
}

} // namespace

TEST_CASE("error codes map to HTTP statuses")
{
    CHECK(http_status(ApiErrorCode::NotReady) == 503);
    CHECK(http_status(ApiErrorCode::UnknownCollection) == 404);
    CHECK(http_status(ApiErrorCode::BadRequest) == 400);
    CHECK(http_status(ApiErrorCode::UnknownQueryTermAbsent) == 422);
    CHECK(to_string(ApiErrorCode::UnknownQueryTermAbsent) == "unknown_query_term_absent");
}

TEST_CASE("requests before the corpus is loaded are not_ready")
{
    ApiService service(PipelineParams{}, queries());
    CHECK_FALSE(service.ready());
    check_error(service.get("/api/collections", {}), 503, "not_ready");
    check_error(service.get("/api/expand", {{"q", "murder"}}), 503, "not_ready");
    check_error(service.get("/api/compare", {{"q", "murder"}, {"a", "1850s"}, {"b", "FULL"}}), 503, "not_ready");
    check_error(service.get("/api/matrix", {{"metric", "jaccard"}}), 503, "not_ready");
    service.set_corpus(drift_corpus());
    CHECK(service.ready());
}

TEST_CASE("collections lists the populated decades plus FULL with ingest counts")
{
    auto const owned = ready_service();
    auto const& service = *owned;
    auto const r = service.get("/api/collections", {});
    REQUIRE(r.status == 200);
    REQUIRE(r.body.size() == 3);
    CHECK(r.body[0].at("label") == "1850s");
    CHECK(r.body[1].at("label") == "1880s");
    CHECK(r.body[2].at("label") == "FULL");
    synthetic::DriftSpec const spec;
    CHECK(r.body[0].at("num_novels") == spec.novels_per_partition);
    CHECK(r.body[0].at("num_paragraphs") == spec.novels_per_partition * spec.paragraphs_per_novel);
    CHECK(r.body[2].at("num_novels") == 2 * spec.novels_per_partition);
}

TEST_CASE("expand")
{
    auto const owned = ready_service();
    auto const& service = *owned;
    SUBCASE("defaults to the top 15 on FULL")
    {
        auto const r = service.get("/api/expand", {{"q", "murder"}});
        REQUIRE(r.status == 200);
        CHECK(r.body.at("absent") == false);
        CHECK(r.body.at("collection") == "FULL");
        CHECK(r.body.at("terms").size() == 15);
        CHECK(r.body.at("fb_docs") == 100);
        CHECK(r.body.at("fb_terms") == 100);
    }
    SUBCASE("matches the library call bit for bit")
    {
        auto const r = service.get("/api/expand", {{"q", "vampire"}, {"collection", "1850s"}, {"top", "100"}});
        REQUIRE(r.status == 200);
        auto const eq = expand_query(*drift_corpus(), Decade::d1850s, "vampire", FeedbackConfig{});
        REQUIRE(r.body.at("terms").size() == eq.terms.size());
        for (std::size_t i = 0; i < eq.terms.size(); ++i) {
            CHECK(r.body["terms"][i].at("term") == eq.terms[i].term);
            CHECK(r.body["terms"][i].at("weight").get<double>() == eq.terms[i].weight);
        }
        // Survives a JSON text round trip unchanged.
        auto const reparsed = json::parse(r.body.dump());
        CHECK(reparsed["terms"][0].at("weight").get<double>() == eq.terms[0].weight);
    }
    SUBCASE("absent keyword is a 200 with absent=true")
    {
        auto const r = service.get("/api/expand", {{"q", "immigrant"}, {"collection", "1880s"}});
        CHECK(r.status == 200);
        CHECK(r.body.at("absent") == true);
        CHECK_FALSE(r.body.contains("terms"));
    }
    SUBCASE("identical requests give identical bodies")
    {
        QueryParams const p{{"q", "vampire"}, {"collection", "1880s"}};
        CHECK(service.get("/api/expand", p).body.dump() == service.get("/api/expand", p).body.dump());
    }
    SUBCASE("errors")
    {
        check_error(service.get("/api/expand", {}), 400, "bad_request");
        check_error(service.get("/api/expand", {{"q", ""}}), 400, "bad_request");
        check_error(service.get("/api/expand", {{"q", "murder"}, {"collection", "1830s"}}), 404, "unknown_collection");
        check_error(service.get("/api/expand", {{"q", "murder"}, {"collection", "1999s"}}), 404, "unknown_collection");
        check_error(service.get("/api/expand", {{"q", "murder"}, {"top", "0"}}), 400, "bad_request");
        check_error(service.get("/api/expand", {{"q", "murder"}, {"top", "ten"}}), 400, "bad_request");
        check_error(service.get("/api/expand", {{"q", "the of"}}), 422, "unknown_query_term_absent");
        check_error(service.get("/api/unknown", {}), 400, "bad_request");
    }
}

TEST_CASE("compare")
{
    auto const owned = ready_service();
    auto const& service = *owned;
    SUBCASE("self comparison")
    {
        auto const r = service.get("/api/compare", {{"q", "vampire"}, {"a", "1850s"}, {"b", "1850s"}});
        REQUIRE(r.status == 200);
        CHECK(r.body.at("jaccard") == 1.0);
        CHECK(r.body.at("jsd") == 0.0);
        CHECK(r.body.at("tau") == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(r.body.at("a_only").empty());
        CHECK(r.body.at("b_only").empty());
    }
    SUBCASE("absent side is flagged and metrics omitted")
    {
        auto const r = service.get("/api/compare", {{"q", "immigrant"}, {"a", "1850s"}, {"b", "FULL"}});
        REQUIRE(r.status == 200);
        CHECK(r.body.at("a_absent") == true);
        CHECK(r.body.at("b_absent") == true);
        CHECK_FALSE(r.body.contains("jaccard"));
        CHECK_FALSE(r.body.contains("tau"));
    }
    SUBCASE("overlap and exclusive sets partition the union, metrics equal library calls")
    {
        auto const r = service.get("/api/compare", {{"q", "vampire"}, {"a", "1850s"}, {"b", "1880s"}});
        REQUIRE(r.status == 200);
        auto const& corpus = *drift_corpus();
        auto const ea = expand_query(corpus, Decade::d1850s, "vampire", {});
        auto const eb = expand_query(corpus, Decade::d1880s, "vampire", {});
        auto const sa = ea.term_set();
        auto const sb = eb.term_set();
        std::set<std::string> overlap;
        std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::inserter(overlap, overlap.end()));
        CHECK(r.body.at("overlap_terms").get<std::set<std::string>>() == overlap);
        CHECK(r.body.at("a_only").size() + overlap.size() == sa.size());
        CHECK(r.body.at("b_only").size() + overlap.size() == sb.size());
        CHECK(r.body.at("jaccard").get<double>() == jaccard(sa, sb));
        CHECK(r.body.at("jsd").get<double>() == js_divergence(ea.distribution(), eb.distribution()));
        auto const& full = corpus.require_index(Decade::Full);
        CHECK(r.body.at("tau").get<double>()
              == kendall_tau(search(full, ea.to_weighted_query(), 1000), search(full, eb.to_weighted_query(), 1000)));
    }
    SUBCASE("errors")
    {
        check_error(service.get("/api/compare", {{"q", "vampire"}, {"a", "1850s"}}), 400, "bad_request");
        check_error(service.get("/api/compare", {{"q", "vampire"}, {"a", "1850s"}, {"b", "1870s"}}), 404, "unknown_collection");
    }
}

TEST_CASE("matrix")
{
    auto const owned = ready_service();
    auto const& service = *owned;
    auto const bundle = service.bundle();
    CHECK(service.bundle() == bundle);

    SUBCASE("jaccard is symmetric with unit diagonal and equals the bundle")
    {
        auto const r = service.get("/api/matrix", {{"metric", "jaccard"}});
        REQUIRE(r.status == 200);
        CHECK(r.body.at("labels") == json::array({"1850s", "1880s", "FULL"}));
        auto const& cells = r.body.at("cells");
        REQUIRE(cells.size() == 9);
        std::map<std::pair<std::string, std::string>, json> by_pos;
        for (auto const& c : cells) {
            by_pos[{c.at("row"), c.at("col")}] = c;
        }
        for (auto const& [pos, c] : by_pos) {
            auto const& mirror = by_pos.at({pos.second, pos.first});
            CHECK(c.at("mean").get<double>() == doctest::Approx(mirror.at("mean").get<double>()).epsilon(1e-15));
            auto const& lib = bundle->jaccard.at(decade_from_label(pos.first), decade_from_label(pos.second));
            CHECK(c.at("mean").get<double>() == lib.mean);
            CHECK(c.at("std").get<double>() == lib.std);
            CHECK(c.at("n") == lib.n);
            if (pos.first == pos.second) {
                CHECK(c.at("mean") == 1.0);
            }
        }
    }
    SUBCASE("jsd diagonal is zero")
    {
        auto const r = service.get("/api/matrix", {{"metric", "jsd"}});
        REQUIRE(r.status == 200);
        for (auto const& c : r.body.at("cells")) {
            if (c.at("row") == c.at("col")) {
                CHECK(c.at("mean") == 0.0);
            }
        }
    }
    SUBCASE("tau is a query by decade table with absent markers")
    {
        auto const r = service.get("/api/matrix", {{"metric", "tau"}});
        REQUIRE(r.status == 200);
        CHECK(r.body.at("decades") == json::array({"1850s", "1880s"}));
        REQUIRE(r.body.at("rows").size() == 3);
        auto const& immigrant = r.body["rows"][2];
        CHECK(immigrant.at("query") == "immigrant");
        for (auto const& v : immigrant.at("values")) {
            CHECK(v.at("absent") == true);
            CHECK(v.at("tau").is_null());
        }
        auto const& vampire = r.body["rows"][0];
        CHECK(vampire.at("values")[0].at("tau").get<double>() == *bundle->queries[0].tau.at(Decade::d1850s));
    }
    SUBCASE("unknown metric")
    {
        check_error(service.get("/api/matrix", {{"metric", "rbo"}}), 400, "bad_request");
        check_error(service.get("/api/matrix", {}), 400, "bad_request");
    }
}

TEST_CASE("matrix bundles are cached per configuration and shared across threads")
{
    auto const owned = ready_service();
    auto const& service = *owned;
    std::vector<std::shared_ptr<ReportBundle const>> seen(8);
    {
        std::vector<std::jthread> threads;
        for (std::size_t i = 0; i < seen.size(); ++i) {
            threads.emplace_back([&, i] { seen[i] = service.bundle(); });
        }
    }
    for (auto const& b : seen) {
        CHECK(b == seen[0]);
    }
    ApiService other(PipelineParams{.depth = 10}, queries());
    CHECK(other.config_key() != service.config_key());
}

TEST_CASE("HTTP facade")
{
    auto const owned = ready_service();
    auto const& service = *owned;
    httplib::Server server;
    service.mount(server);
    int const port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::jthread worker([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    httplib::Client client("127.0.0.1", port);
    SUBCASE("JSON body and CORS header")
    {
        auto const res = client.Get("/api/expand?q=vampire&collection=1850s");
        REQUIRE(res);
        CHECK(res->status == 200);
        CHECK(res->get_header_value("Access-Control-Allow-Origin") == "*");
        CHECK(res->get_header_value("Content-Type") == "application/json");
        auto const direct = service.get("/api/expand", {{"q", "vampire"}, {"collection", "1850s"}});
        CHECK(res->body == direct.body.dump());
    }
    SUBCASE("error statuses travel over HTTP")
    {
        auto const res = client.Get("/api/expand?q=murder&collection=1830s");
        REQUIRE(res);
        CHECK(res->status == 404);
        CHECK(json::parse(res->body).at("code") == "unknown_collection");
        auto const bad = client.Get("/api/matrix?metric=nope");
        REQUIRE(bad);
        CHECK(bad->status == 400);
    }
    SUBCASE("preflight")
    {
        auto const res = client.Options("/api/matrix");
        REQUIRE(res);
        CHECK(res->status == 204);
        CHECK(res->get_header_value("Access-Control-Allow-Origin") == "*");
    }
    SUBCASE("percent-encoded multi-word queries")
    {
        auto const res = client.Get("/api/compare?q=vampire%20murder&a=1850s&b=FULL");
        REQUIRE(res);
        CHECK(res->status == 200);
    }
    server.stop();
}
