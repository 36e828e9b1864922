#pragma once

#include <atomic>
#include <filesystem>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "lexdrift/collection.hpp"
#include "lexdrift/config.hpp"
#include "lexdrift/experiment.hpp"

namespace httplib {
class Server;
}

namespace lexdrift {

enum class ApiErrorCode { UnknownCollection, UnknownQueryTermAbsent, BadRequest, NotReady };

[[nodiscard]] std::string_view to_string(ApiErrorCode code) noexcept;
[[nodiscard]] int http_status(ApiErrorCode code) noexcept;

struct ApiResponse {
    int status = 200;
    nlohmann::json body;
};

using QueryParams = std::map<std::string, std::string>;

/// Read-only JSON views over a loaded corpus. Every number is taken
/// straight from the library call that computes it.
///
/// Routes: /api/collections, /api/expand, /api/compare, /api/matrix.
/// Errors come back as {code, message}; an absent keyword is a 200.
class ApiService {
public:
    ApiService(PipelineParams params, QuerySet queries);

    /// Publishes the corpus; requests before this answer not_ready.
    void set_corpus(std::shared_ptr<PartitionedCorpus const> corpus);
    [[nodiscard]] bool ready() const noexcept;

    /// Dispatches a GET on `path`. Thread-safe.
    [[nodiscard]] ApiResponse get(std::string_view path, QueryParams const& params) const;

    [[nodiscard]] ApiResponse collections() const;
    [[nodiscard]] ApiResponse expand(QueryParams const& params) const;
    [[nodiscard]] ApiResponse compare(QueryParams const& params) const;
    [[nodiscard]] ApiResponse matrix(QueryParams const& params) const;

    /// Cache key for the current pipeline parameters and query set.
    [[nodiscard]] std::string config_key() const;

    /// Precomputed or cached bundle; computed on first use.
    [[nodiscard]] std::shared_ptr<ReportBundle const> bundle() const;

    /// Registers the routes (plus CORS headers and, optionally, a static
    /// directory at "/") on an httplib server.
    void mount(httplib::Server& server, std::optional<std::filesystem::path> static_dir = {}) const;

    [[nodiscard]] PipelineParams const& params() const noexcept { return params_; }

private:
    [[nodiscard]] std::shared_ptr<PartitionedCorpus const> corpus() const;

    PipelineParams params_;
    QuerySet queries_;
    std::shared_ptr<PartitionedCorpus const> corpus_;
    mutable std::mutex corpus_mutex_;
    std::atomic<bool> ready_{false};

    mutable std::mutex cache_mutex_;
    mutable std::map<std::string, std::shared_future<std::shared_ptr<ReportBundle const>>> cache_;
};

[[nodiscard]] ApiResponse api_error(ApiErrorCode code, std::string message);

} // namespace lexdrift
