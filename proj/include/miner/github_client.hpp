#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "miner/issue.hpp"
#include "miner/time.hpp"

namespace miner {

struct HttpResponse {
    int status = 0;
    std::map<std::string, std::string> headers;  // keys lowercased
    std::string body;
};

/// Abstract HTTP GET transport. Tests script one; production wraps httplib.
class HttpTransport {
public:
    virtual ~HttpTransport() = default;

    /// Performs a GET; connection-level failures should throw (any exception
    /// is mapped to TransportError by the client).
    virtual HttpResponse get(const std::string& url,
                             const std::vector<std::pair<std::string, std::string>>& headers) = 0;
};

struct FetchConfig {
    std::string base_url = "https://api.github.com";
    std::string token;  // from COHORT_MINER_TOKEN, never a CLI flag
    int per_page = 100;
    int max_rate_limit_retries = 3;
};

/// Fetches a repository's issues with their non-comment events and comments
/// into a Snapshot. Pagination uses fixed-size pages; rate-limit responses
/// (403/429 with x-ratelimit-remaining: 0) sleep until the advertised reset
/// and retry. Deterministic given identical remote state.
class TrackerClient {
public:
    using Sleeper = std::function<void(std::chrono::seconds)>;
    using Clock = std::function<Timestamp()>;

    /// Sleeper and clock are injectable so tests never wait on real time.
    TrackerClient(HttpTransport& transport, FetchConfig config, Sleeper sleeper = {},
                  Clock clock = {});

    Snapshot fetch_snapshot(const std::string& repo_id);

private:
    HttpResponse get_with_retry(const std::string& url);

    HttpTransport& transport_;
    FetchConfig config_;
    Sleeper sleeper_;
    Clock clock_;
};

/// Real transport backed by cpp-httplib (TLS-enabled).
std::unique_ptr<HttpTransport> make_httplib_transport();

}  // namespace miner
