#pragma once

// HTTP/JSON consultation service. `Service::handle` is transport-independent;
// service_http.hpp binds it to cpp-httplib.

#include "rcses/inference.hpp"
#include "rcses/snapshot.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>

namespace rcses {

/// Seconds since an arbitrary epoch.
using Clock = std::function<std::int64_t()>;

std::int64_t system_clock_seconds();

struct ServiceConfig {
    std::string listen_host = "127.0.0.1";
    int listen_port = 8080;
    std::filesystem::path kb_dir;
    std::optional<std::string> admin_token;
    bool strict_kb = false;
    std::int64_t session_ttl = 3600;
    std::size_t session_capacity = 10000;
    NormalizationPolicy policy;
};

/// Server-side sessions with idle TTL and least-recently-active eviction.
/// Each session has its own mutex, so mutations on one session are serialized.
class SessionStore {
public:
    SessionStore(std::int64_t ttl_seconds, std::size_t capacity, Clock clock);

    /// Stores the session under a fresh opaque id and returns the id.
    std::string add(SessionState state);

    /// Runs `fn` with the live session locked. Returns false when the id is
    /// unknown or expired (expired entries are dropped).
    bool with_session(const std::string& id, const std::function<void(SessionState&)>& fn);

    std::size_t size() const;
    void sweep_expired();

private:
    struct Entry {
        std::mutex mutex;
        SessionState state;
        std::int64_t last_active = 0;
        std::list<std::string>::iterator lru;
    };

    std::string fresh_id();
    bool expired(const Entry& e, std::int64_t now) const { return now - e.last_active > ttl_; }
    void erase_locked(std::unordered_map<std::string, std::shared_ptr<Entry>>::iterator it);

    std::int64_t ttl_;
    std::size_t capacity_;
    Clock clock_;
    mutable std::mutex mutex_;
    std::unordered_map<std::string, std::shared_ptr<Entry>> sessions_;
    std::list<std::string> lru_;  // front = most recently active
};

struct HttpRequest {
    std::string method;
    std::string path;  // already percent-decoded
    std::map<std::string, std::string> query;
    std::map<std::string, std::string> headers;  // lowercase names
    std::string body;

    std::string header(const std::string& lowercase_name) const;
};

struct HttpResponse {
    int status = 200;
    std::string content_type = "application/json; charset=utf-8";
    std::string body;
    std::map<std::string, std::string> headers;
};

class Service {
public:
    /// Loads the KB directory; throws std::runtime_error if it does not parse.
    explicit Service(ServiceConfig config, Clock clock = system_clock_seconds);

    HttpResponse handle(const HttpRequest& request);

    KbSnapshotPtr snapshot() const;
    std::string etag() const;
    SessionStore& sessions() { return sessions_; }
    const ServiceConfig& config() const { return config_; }

    static constexpr std::size_t kQuestionsPerStep = 5;

private:
    HttpResponse list_models();
    HttpResponse create_session(const HttpRequest& req);
    HttpResponse post_finding(const std::string& id, const HttpRequest& req);
    HttpResponse delete_finding(const std::string& id, const std::string& concept_name, const HttpRequest& req);
    HttpResponse results(const std::string& id);
    HttpResponse explanation(const std::string& id, const HttpRequest& req);
    HttpResponse get_document(bool ontology);
    HttpResponse put_document(bool ontology, const HttpRequest& req);
    HttpResponse lint();

    ServiceConfig config_;
    Clock clock_;
    SessionStore sessions_;
    mutable std::shared_mutex kb_mutex_;
    KbSnapshotPtr kb_;
    std::mutex writer_mutex_;
};

}  // namespace rcses
