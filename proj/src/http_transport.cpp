#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "miner/errors.hpp"
#include "miner/github_client.hpp"
#include "miner/text.hpp"

namespace miner {

namespace {

class HttplibTransport : public HttpTransport {
public:
    HttpResponse get(const std::string& url,
                     const std::vector<std::pair<std::string, std::string>>& headers) override {
        const auto scheme_end = url.find("://");
        if (scheme_end == std::string::npos)
            throw TransportError(url, "URL must start with http:// or https://");
        const auto path_start = url.find('/', scheme_end + 3);
        const std::string origin = path_start == std::string::npos ? url : url.substr(0, path_start);
        const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

        httplib::Client client(origin);
        client.set_connection_timeout(30);
        client.set_read_timeout(60);
        client.set_follow_location(true);

        httplib::Headers request_headers;
        for (const auto& [key, value] : headers) request_headers.emplace(key, value);

        auto result = client.Get(path, request_headers);
        if (!result)
            throw TransportError(url, "request failed: " + httplib::to_string(result.error()));

        HttpResponse response;
        response.status = result->status;
        response.body = result->body;
        for (const auto& [key, value] : result->headers) response.headers[to_lower(key)] = value;
        return response;
    }
};

}  // namespace

std::unique_ptr<HttpTransport> make_httplib_transport() {
    return std::make_unique<HttplibTransport>();
}

}  // namespace miner
