#include "miner/github_client.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <thread>

#include <json.hpp>

#include "miner/errors.hpp"
#include "miner/text.hpp"

namespace miner {

namespace {

using nlohmann::json;

std::string header_value(const HttpResponse& r, const std::string& key) {
    auto it = r.headers.find(key);
    return it == r.headers.end() ? std::string{} : it->second;
}

json parse_array(const std::string& url, const std::string& body) {
    json doc = json::parse(body, nullptr, false);
    if (doc.is_discarded() || !doc.is_array())
        throw PayloadError(url, "expected a JSON array in the response body");
    return doc;
}

std::string json_string_or(const json& j, const char* key, const std::string& fallback) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return fallback;
    if (!it->is_string()) return fallback;
    return it->get<std::string>();
}

// Deleted accounts surface as null actors; the service's own placeholder
// login is used so downstream identity handling stays total.
constexpr const char* kGhostLogin = "ghost";

std::string login_of(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null() || !it->is_object()) return kGhostLogin;
    return json_string_or(*it, "login", kGhostLogin);
}

Timestamp time_field(const std::string& url, const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string())
        throw PayloadError(url, std::string("missing timestamp field \"") + key + "\"");
    try {
        return parse_iso8601_utc(it->get<std::string>());
    } catch (const ValidationError& e) {
        throw PayloadError(url, e.what());
    }
}

}  // namespace

TrackerClient::TrackerClient(HttpTransport& transport, FetchConfig config, Sleeper sleeper,
                             Clock clock)
    : transport_(transport), config_(std::move(config)), sleeper_(std::move(sleeper)),
      clock_(std::move(clock)) {
    if (!sleeper_)
        sleeper_ = [](std::chrono::seconds s) { std::this_thread::sleep_for(s); };
    if (!clock_)
        clock_ = [] {
            return std::chrono::time_point_cast<std::chrono::seconds>(
                std::chrono::system_clock::now());
        };
}

HttpResponse TrackerClient::get_with_retry(const std::string& url) {
    std::vector<std::pair<std::string, std::string>> headers = {
        {"Accept", "application/vnd.github+json"},
        {"User-Agent", "cohort-miner"},
    };
    if (!config_.token.empty()) headers.emplace_back("Authorization", "token " + config_.token);

    for (int attempt = 0;; ++attempt) {
        HttpResponse response;
        try {
            response = transport_.get(url, headers);
        } catch (const std::exception& e) {
            throw TransportError(url, std::string("transport failure: ") + e.what());
        }

        if (response.status >= 200 && response.status < 300) return response;

        const bool limit_exhausted = header_value(response, "x-ratelimit-remaining") == "0";
        if ((response.status == 403 || response.status == 429) && limit_exhausted) {
            if (attempt >= config_.max_rate_limit_retries)
                throw RateLimitError(url, "rate limit still exhausted after " +
                                              std::to_string(attempt) + " retries");
            std::chrono::seconds wait{1};
            const std::string reset = header_value(response, "x-ratelimit-reset");
            long long reset_epoch = 0;
            auto [ptr, ec] = std::from_chars(reset.data(), reset.data() + reset.size(), reset_epoch);
            if (ec == std::errc{} && ptr == reset.data() + reset.size() && !reset.empty()) {
                const auto now = clock_().time_since_epoch().count();
                if (reset_epoch > now) wait = std::chrono::seconds{reset_epoch - now};
            }
            sleeper_(wait);
            continue;
        }
        if (response.status == 401 || response.status == 403)
            throw AuthError(url, "authentication or permission failure (HTTP " +
                                     std::to_string(response.status) + ")");
        throw TransportError(url, "unexpected HTTP status " + std::to_string(response.status));
    }
}

Snapshot TrackerClient::fetch_snapshot(const std::string& repo_id) {
    const std::string repo_base = config_.base_url + "/repos/" + repo_id;

    auto paginate = [&](const std::string& endpoint, auto&& consume) {
        for (int page = 1;; ++page) {
            const std::string url = repo_base + endpoint +
                                    (endpoint.find('?') == std::string::npos ? "?" : "&") +
                                    "per_page=" + std::to_string(config_.per_page) +
                                    "&page=" + std::to_string(page);
            HttpResponse response = get_with_retry(url);
            json items = parse_array(url, response.body);
            for (const json& item : items) consume(url, item);
            if (items.size() < static_cast<std::size_t>(config_.per_page)) break;
        }
    };

    std::map<std::uint64_t, IssueRecord> issues;
    paginate("/issues?state=all", [&](const std::string& url, const json& item) {
        if (!item.is_object() || !item.contains("number") || !item["number"].is_number_unsigned())
            throw PayloadError(url, "issue item without a numeric \"number\" field");
        IssueRecord rec;
        rec.number = item["number"].get<std::uint64_t>();
        rec.title = json_string_or(item, "title", "");
        rec.body = json_string_or(item, "body", "");
        rec.opener = login_of(item, "user");
        rec.opened_at = time_field(url, item, "created_at");
        rec.is_pull_request = item.contains("pull_request") && !item["pull_request"].is_null();
        if (auto it = item.find("closed_at"); it != item.end() && it->is_string()) {
            try {
                rec.closed_at = parse_iso8601_utc(it->get<std::string>());
            } catch (const ValidationError& e) {
                throw PayloadError(url, e.what());
            }
        }
        if (auto it = item.find("closed_by"); it != item.end() && it->is_object())
            rec.closer = json_string_or(*it, "login", kGhostLogin);
        const std::uint64_t number = rec.number;
        if (!issues.emplace(number, std::move(rec)).second)
            throw PayloadError(url,
                               "duplicate issue number " + std::to_string(number) + " in listing");
    });

    paginate("/issues/events", [&](const std::string& url, const json& item) {
        if (!item.is_object()) throw PayloadError(url, "event item is not an object");
        auto issue_it = item.find("issue");
        if (issue_it == item.end() || !issue_it->is_object() || !issue_it->contains("number"))
            return;  // events detached from an issue carry nothing we track
        const auto number = (*issue_it)["number"].get<std::uint64_t>();
        auto target = issues.find(number);
        if (target == issues.end()) return;

        IssueEvent event;
        event.kind = json_string_or(item, "event", "");
        if (event.kind.empty() || event.kind == "commented") return;
        if (auto actor = item.find("actor"); actor != item.end() && actor->is_object())
            event.actor = json_string_or(*actor, "login", kGhostLogin);
        event.at = time_field(url, item, "created_at");
        target->second.events.push_back(std::move(event));
    });

    paginate("/issues/comments", [&](const std::string& url, const json& item) {
        if (!item.is_object()) throw PayloadError(url, "comment item is not an object");
        const std::string issue_url = json_string_or(item, "issue_url", "");
        const auto slash = issue_url.rfind('/');
        if (slash == std::string::npos) throw PayloadError(url, "comment without an issue_url");
        std::uint64_t number = 0;
        const char* first = issue_url.data() + slash + 1;
        const char* last = issue_url.data() + issue_url.size();
        auto [ptr, ec] = std::from_chars(first, last, number);
        if (ec != std::errc{} || ptr != last)
            throw PayloadError(url, "comment issue_url does not end in an issue number");
        auto target = issues.find(number);
        if (target == issues.end()) return;

        IssueComment comment;
        comment.actor = login_of(item, "user");
        comment.at = time_field(url, item, "created_at");
        comment.length_chars = utf8_scalar_count(json_string_or(item, "body", ""));
        target->second.comments.push_back(std::move(comment));
    });

    Snapshot snapshot;
    snapshot.repo_id = repo_id;
    snapshot.fetched_at = clock_();
    snapshot.issues.reserve(issues.size());
    for (auto& [number, rec] : issues) {
        if (rec.closed_at && !rec.closer) {
            // closed_by is only present on some payloads; fall back to the
            // actor of the last closed event.
            const IssueEvent* last_closed = nullptr;
            for (const IssueEvent& e : rec.events)
                if (e.kind == "closed" && (!last_closed || e.at >= last_closed->at))
                    last_closed = &e;
            if (!last_closed)
                throw PayloadError(repo_base,
                                   "issue " + std::to_string(number) +
                                       " is closed but has no closed_by field and no closed event");
            rec.closer = last_closed->actor ? *last_closed->actor : kGhostLogin;
        }
        snapshot.issues.push_back(std::move(rec));
    }
    return snapshot;
}

}  // namespace miner
