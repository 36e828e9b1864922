#include "lexdrift/service.hpp"

#include <algorithm>
#include <charconv>
#include <functional>

#include <fmt/format.h>
#include <httplib.h>

#include "lexdrift/errors.hpp"

namespace lexdrift {

namespace {

using json = nlohmann::json;

std::optional<std::string> param(QueryParams const& params, std::string const& key)
{
    auto it = params.find(key);
    if (it == params.end() || it->second.empty()) {
        return std::nullopt;
    }
    return it->second;
}

json terms_json(ExpandedQuery const& eq, std::size_t top)
{
    json out = json::array();
    for (std::size_t i = 0; i < std::min(top, eq.terms.size()); ++i) {
        out.push_back({{"term", eq.terms[i].term}, {"weight", eq.terms[i].weight}});
    }
    return out;
}

json cell_json(Decade row, Decade col, MetricCell const& cell)
{
    json out = {{"row", std::string(to_string(row))},
                {"col", std::string(to_string(col))},
                {"n", cell.n},
                {"absent", cell.absent()}};
    if (cell.absent()) {
        out["mean"] = nullptr;
        out["std"] = nullptr;
    } else {
        out["mean"] = cell.mean;
        out["std"] = cell.std;
    }
    return out;
}

json sorted_array(std::vector<std::string> v)
{
    std::sort(v.begin(), v.end());
    return json(v);
}

} // namespace

std::string_view to_string(ApiErrorCode code) noexcept
{
    switch (code) {
    case ApiErrorCode::UnknownCollection:
        return "unknown_collection";
    case ApiErrorCode::UnknownQueryTermAbsent:
        return "unknown_query_term_absent";
    case ApiErrorCode::BadRequest:
        return "bad_request";
    case ApiErrorCode::NotReady:
        return "not_ready";
    }
    return "bad_request";
}

int http_status(ApiErrorCode code) noexcept
{
    switch (code) {
    case ApiErrorCode::UnknownCollection:
        return 404;
    case ApiErrorCode::UnknownQueryTermAbsent:
        return 422;
    case ApiErrorCode::BadRequest:
        return 400;
    case ApiErrorCode::NotReady:
        return 503;
    }
    return 400;
}

ApiResponse api_error(ApiErrorCode code, std::string message)
{
    return {http_status(code), {{"code", std::string(to_string(code))}, {"message", std::move(message)}}};
}

ApiService::ApiService(PipelineParams params, QuerySet queries)
    : params_(std::move(params)), queries_(std::move(queries))
{}

void ApiService::set_corpus(std::shared_ptr<PartitionedCorpus const> corpus)
{
    {
        std::lock_guard lock(corpus_mutex_);
        corpus_ = std::move(corpus);
    }
    ready_ = corpus_ != nullptr;
}

bool ApiService::ready() const noexcept { return ready_; }

std::shared_ptr<PartitionedCorpus const> ApiService::corpus() const
{
    std::lock_guard lock(corpus_mutex_);
    return corpus_;
}

std::string ApiService::config_key() const
{
    std::string canonical = params_.canonical();
    for (auto const& e : queries_.entries) {
        canonical += '|';
        canonical += e.keyword;
    }
    return fmt::format("{:016x}", std::hash<std::string>{}(canonical));
}

std::shared_ptr<ReportBundle const> ApiService::bundle() const
{
    auto const key = config_key();
    std::promise<std::shared_ptr<ReportBundle const>> promise;
    std::shared_future<std::shared_ptr<ReportBundle const>> future;
    bool owner = false;
    {
        std::lock_guard lock(cache_mutex_);
        auto it = cache_.find(key);
        if (it == cache_.end()) {
            future = promise.get_future().share();
            cache_.emplace(key, future);
            owner = true;
        } else {
            future = it->second;
        }
    }
    if (owner) {
        try {
            auto const c = corpus();
            if (!c) {
                throw Error("corpus not loaded");
            }
            promise.set_value(std::make_shared<ReportBundle const>(run_pipeline(*c, queries_, params_)));
        } catch (...) {
            promise.set_exception(std::current_exception());
            std::lock_guard lock(cache_mutex_);
            cache_.erase(key);
        }
    }
    return future.get();
}

ApiResponse ApiService::get(std::string_view path, QueryParams const& params) const
{
    try {
        if (path == "/api/collections") {
            return collections();
        }
        if (path == "/api/expand") {
            return expand(params);
        }
        if (path == "/api/compare") {
            return compare(params);
        }
        if (path == "/api/matrix") {
            return matrix(params);
        }
        return api_error(ApiErrorCode::BadRequest, "unknown endpoint " + std::string(path));
    } catch (NotFoundError const& e) {
        return api_error(ApiErrorCode::UnknownCollection, e.what());
    } catch (ValidationError const& e) {
        return api_error(ApiErrorCode::BadRequest, e.what());
    }
}

ApiResponse ApiService::collections() const
{
    auto const c = corpus();
    if (!c) {
        return api_error(ApiErrorCode::NotReady, "corpus is still loading");
    }
    json out = json::array();
    for (auto const& info : c->collections()) {
        out.push_back({{"label", std::string(to_string(info.label))},
                       {"num_novels", info.num_novels},
                       {"num_paragraphs", info.num_paragraphs}});
    }
    return {200, out};
}

ApiResponse ApiService::expand(QueryParams const& params) const
{
    auto const c = corpus();
    if (!c) {
        return api_error(ApiErrorCode::NotReady, "corpus is still loading");
    }
    auto const q = param(params, "q");
    if (!q) {
        return api_error(ApiErrorCode::BadRequest, "missing parameter q");
    }
    auto const label = param(params, "collection").value_or("FULL");
    auto const collection = parse_decade(label);
    if (!collection || !c->has_collection(*collection)) {
        return api_error(ApiErrorCode::UnknownCollection, "unknown collection '" + label + "'");
    }
    std::size_t top = params_.top_n;
    if (auto t = param(params, "top")) {
        auto [ptr, ec] = std::from_chars(t->data(), t->data() + t->size(), top);
        if (ec != std::errc() || ptr != t->data() + t->size() || top == 0) {
            return api_error(ApiErrorCode::BadRequest, "top must be a positive integer");
        }
    }
    if (c->analyzer().analyze(*q).empty()) {
        return api_error(ApiErrorCode::UnknownQueryTermAbsent,
                         "query '" + *q + "' has no indexable terms");
    }

    auto const eq = expand_query(*c, *collection, *q, params_.feedback);
    json out = {{"query", *q}, {"collection", std::string(to_string(*collection))}, {"absent", eq.absent}};
    if (!eq.absent) {
        out["fb_docs"] = eq.fb_docs;
        out["fb_terms"] = eq.fb_terms;
        out["top"] = top;
        out["terms"] = terms_json(eq, top);
    }
    return {200, out};
}

ApiResponse ApiService::compare(QueryParams const& params) const
{
    auto const c = corpus();
    if (!c) {
        return api_error(ApiErrorCode::NotReady, "corpus is still loading");
    }
    auto const q = param(params, "q");
    auto const a_label = param(params, "a");
    auto const b_label = param(params, "b");
    if (!q || !a_label || !b_label) {
        return api_error(ApiErrorCode::BadRequest, "compare needs q, a and b");
    }
    auto const a = parse_decade(*a_label);
    auto const b = parse_decade(*b_label);
    if (!a || !c->has_collection(*a)) {
        return api_error(ApiErrorCode::UnknownCollection, "unknown collection '" + *a_label + "'");
    }
    if (!b || !c->has_collection(*b)) {
        return api_error(ApiErrorCode::UnknownCollection, "unknown collection '" + *b_label + "'");
    }
    if (c->analyzer().analyze(*q).empty()) {
        return api_error(ApiErrorCode::UnknownQueryTermAbsent,
                         "query '" + *q + "' has no indexable terms");
    }

    auto const ea = expand_query(*c, *a, *q, params_.feedback);
    auto const eb = expand_query(*c, *b, *q, params_.feedback);
    json out = {{"query", *q},
                {"a", std::string(to_string(*a))},
                {"b", std::string(to_string(*b))},
                {"a_absent", ea.absent},
                {"b_absent", eb.absent}};
    if (ea.absent || eb.absent) {
        return {200, out};
    }

    auto const sa = ea.term_set();
    auto const sb = eb.term_set();
    std::vector<std::string> overlap;
    std::vector<std::string> a_only;
    std::vector<std::string> b_only;
    std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(overlap));
    std::set_difference(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(a_only));
    std::set_difference(sb.begin(), sb.end(), sa.begin(), sa.end(), std::back_inserter(b_only));

    auto const& full = c->require_index(Decade::Full);
    auto const list_a = search(full, ea.to_weighted_query(), params_.depth, params_.feedback.bm25);
    auto const list_b = search(full, eb.to_weighted_query(), params_.depth, params_.feedback.bm25);

    out["jaccard"] = jaccard(sa, sb);
    out["jsd"] = js_divergence(ea.distribution(), eb.distribution(), params_.js_base);
    out["tau"] = kendall_tau(list_a, list_b);
    out["overlap_terms"] = sorted_array(std::move(overlap));
    out["a_only"] = sorted_array(std::move(a_only));
    out["b_only"] = sorted_array(std::move(b_only));
    return {200, out};
}

ApiResponse ApiService::matrix(QueryParams const& params) const
{
    if (!corpus()) {
        return api_error(ApiErrorCode::NotReady, "corpus is still loading");
    }
    auto const name = param(params, "metric").value_or("");
    auto const metric = parse_metric(name);
    if (!metric) {
        return api_error(ApiErrorCode::BadRequest,
                         "metric must be one of jaccard, jsd, tau (got '" + name + "')");
    }
    auto const b = bundle();
    json out = {{"metric", std::string(to_string(*metric))}, {"config_key", config_key()}};

    if (*metric == Metric::Tau) {
        json decades = json::array();
        for (auto d : b->decades()) {
            decades.push_back(std::string(to_string(d)));
        }
        json rows = json::array();
        for (auto const& q : b->queries) {
            json values = json::array();
            for (auto d : b->decades()) {
                auto const& tau = q.tau.at(d);
                values.push_back({{"decade", std::string(to_string(d))},
                                  {"absent", !tau.has_value()},
                                  {"tau", tau ? json(*tau) : json(nullptr)}});
            }
            rows.push_back({{"query", q.entry.keyword},
                            {"category", std::string(to_string(q.entry.category))},
                            {"values", std::move(values)}});
        }
        out["decades"] = std::move(decades);
        out["rows"] = std::move(rows);
        return {200, out};
    }

    auto const& m = *metric == Metric::Jaccard ? b->jaccard : b->jsd;
    json labels = json::array();
    for (auto d : m.labels) {
        labels.push_back(std::string(to_string(d)));
    }
    json cells = json::array();
    for (auto row : m.labels) {
        for (auto col : m.labels) {
            cells.push_back(cell_json(row, col, m.at(row, col)));
        }
    }
    out["labels"] = std::move(labels);
    out["cells"] = std::move(cells);
    return {200, out};
}

void ApiService::mount(httplib::Server& server, std::optional<std::filesystem::path> static_dir) const
{
    auto const handler = [this](httplib::Request const& req, httplib::Response& res) {
        QueryParams params;
        for (auto const& [k, v] : req.params) {
            params.emplace(k, v);
        }
        auto const response = get(req.path, params);
        res.status = response.status;
        res.set_content(response.body.dump(), "application/json");
    };
    for (auto const* route : {"/api/collections", "/api/expand", "/api/compare", "/api/matrix"}) {
        server.Get(route, handler);
    }
    server.Options(R"(/api/.*)", [](httplib::Request const&, httplib::Response& res) {
        res.status = 204;
    });
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Methods", "GET, OPTIONS"},
                                {"Access-Control-Allow-Headers", "Content-Type"}});
    if (static_dir) {
        server.set_mount_point("/", static_dir->string());
    }
}

} // namespace lexdrift
