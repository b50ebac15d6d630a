#include "rcses/service.hpp"

#include "rcses/json_io.hpp"
#include "rcses/kb_builder.hpp"
#include "rcses/kb_xml.hpp"
#include "rcses/lexicon_check.hpp"

#include <openssl/rand.h>

#include <chrono>
#include <set>
#include <stdexcept>
#include <tuple>

namespace rcses {

std::int64_t system_clock_seconds() {
    using namespace std::chrono;
    return duration_cast<seconds>(steady_clock::now().time_since_epoch()).count();
}

// --- SessionStore ----------------------------------------------------------

SessionStore::SessionStore(std::int64_t ttl_seconds, std::size_t capacity, Clock clock)
    : ttl_(ttl_seconds), capacity_(capacity == 0 ? 1 : capacity), clock_(std::move(clock)) {}

std::string SessionStore::fresh_id() {
    static const char* hex = "0123456789abcdef";
    for (;;) {
        unsigned char bytes[16];
        if (RAND_bytes(bytes, sizeof bytes) != 1) throw std::runtime_error("RAND_bytes failed");
        std::string id;
        for (unsigned char b : bytes) {
            id.push_back(hex[b >> 4]);
            id.push_back(hex[b & 0xF]);
        }
        if (!sessions_.contains(id)) return id;
    }
}

void SessionStore::erase_locked(std::unordered_map<std::string, std::shared_ptr<Entry>>::iterator it) {
    lru_.erase(it->second->lru);
    sessions_.erase(it);
}

std::string SessionStore::add(SessionState state) {
    std::lock_guard lock(mutex_);
    const std::int64_t now = clock_();
    if (sessions_.size() >= capacity_) {
        for (auto it = sessions_.begin(); it != sessions_.end();) {
            auto next = std::next(it);
            if (expired(*it->second, now)) erase_locked(it);
            it = next;
        }
    }
    while (sessions_.size() >= capacity_) erase_locked(sessions_.find(lru_.back()));

    auto entry = std::make_shared<Entry>();
    std::string id = fresh_id();
    state.id = id;
    state.created_at = now;
    state.last_active = now;
    entry->state = std::move(state);
    entry->last_active = now;
    lru_.push_front(id);
    entry->lru = lru_.begin();
    sessions_.emplace(id, std::move(entry));
    return id;
}

bool SessionStore::with_session(const std::string& id, const std::function<void(SessionState&)>& fn) {
    std::shared_ptr<Entry> entry;
    const std::int64_t now = clock_();
    {
        std::lock_guard lock(mutex_);
        auto it = sessions_.find(id);
        if (it == sessions_.end()) return false;
        if (expired(*it->second, now)) {
            erase_locked(it);
            return false;
        }
        entry = it->second;
        entry->last_active = now;
        lru_.splice(lru_.begin(), lru_, entry->lru);
    }
    std::lock_guard session_lock(entry->mutex);
    entry->state.last_active = now;
    fn(entry->state);
    return true;
}

std::size_t SessionStore::size() const {
    std::lock_guard lock(mutex_);
    return sessions_.size();
}

void SessionStore::sweep_expired() {
    std::lock_guard lock(mutex_);
    const std::int64_t now = clock_();
    for (auto it = sessions_.begin(); it != sessions_.end();) {
        auto next = std::next(it);
        if (expired(*it->second, now)) erase_locked(it);
        it = next;
    }
}

// --- Service -----------------------------------------------------------------

std::string HttpRequest::header(const std::string& name) const {
    auto it = headers.find(name);
    return it == headers.end() ? std::string{} : it->second;
}

namespace {

HttpResponse json_response(int status, const Json& body) { return {status, "application/json; charset=utf-8", dump_json(body), {}}; }

HttpResponse error_response(int status, const std::string& error, const std::string& detail, Json extra = Json::object()) {
    Json body = {{"error", error}, {"detail", detail}};
    for (auto it = extra.begin(); it != extra.end(); ++it) body[it.key()] = it.value();
    return json_response(status, body);
}

HttpResponse session_not_found(const std::string& id) {
    return error_response(404, "SessionNotFound", "no live session '" + id + "'");
}

Json inference_error_extra(const InferenceError& e) {
    Json extra = Json::object();
    if (e.slot()) extra["slot"] = to_json(*e.slot());
    return extra;
}

int status_for(InferenceErrc code) {
    switch (code) {
        case InferenceErrc::StaleKb: return 409;
        default: return 422;
    }
}

std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= path.size()) {
        std::size_t slash = path.find('/', start);
        if (slash == std::string::npos) slash = path.size();
        if (slash > start) parts.push_back(path.substr(start, slash - start));
        start = slash + 1;
    }
    return parts;
}

std::string unquote_etag(std::string v) {
    if (v.starts_with("W/")) v = v.substr(2);
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
    return v;
}

using ViolationKey = std::tuple<std::string, std::string, std::string, std::string>;

std::multiset<ViolationKey> error_keys(const LintReport& report) {
    std::multiset<ViolationKey> keys;
    for (const auto& v : report.violations) {
        if (v.severity == Severity::Error) keys.insert({v.code, v.model, v.rule, v.token});
    }
    return keys;
}

}  // namespace

Service::Service(ServiceConfig config, Clock clock)
    : config_(std::move(config)),
      clock_(std::move(clock)),
      sessions_(config_.session_ttl, config_.session_capacity, clock_) {
    KbDirectory kb = load_kb_dir(config_.kb_dir, config_.policy);
    if (!kb.ok()) {
        std::string msg = "knowledge base in " + config_.kb_dir.string() + " does not parse:";
        for (const auto* issues : {&kb.ontology.issues, &kb.rules.issues}) {
            for (const auto& i : *issues) {
                if (i.severity == Severity::Error) msg += "\n  " + i.code + " " + i.path + ": " + i.message;
            }
        }
        throw std::runtime_error(msg);
    }
    kb_ = make_snapshot(std::move(*kb.ontology.value), std::move(*kb.rules.value), 1, config_.policy);
}

KbSnapshotPtr Service::snapshot() const {
    std::shared_lock lock(kb_mutex_);
    return kb_;
}

std::string Service::etag() const { return "\"" + snapshot()->fingerprint() + "\""; }

HttpResponse Service::handle(const HttpRequest& req) {
    try {
        auto parts = split_path(req.path);
        const auto& m = req.method;
        if (parts.size() < 3 || parts[0] != "api" || parts[1] != "v1") {
            return error_response(404, "NotFound", "no route for " + req.path);
        }
        auto method_not_allowed = [&] { return error_response(405, "MethodNotAllowed", m + " " + req.path); };

        if (parts.size() == 3 && parts[2] == "models") {
            return m == "GET" ? list_models() : method_not_allowed();
        }
        if (parts[2] == "sessions") {
            if (parts.size() == 3) return m == "POST" ? create_session(req) : method_not_allowed();
            const std::string& id = parts[3];
            if (parts.size() == 5 && parts[4] == "findings") return m == "POST" ? post_finding(id, req) : method_not_allowed();
            if (parts.size() == 5 && parts[4] == "results") return m == "GET" ? results(id) : method_not_allowed();
            if (parts.size() == 5 && parts[4] == "explanation") return m == "GET" ? explanation(id, req) : method_not_allowed();
            if (parts.size() >= 6 && parts[4] == "findings") {
                if (m != "DELETE") return method_not_allowed();
                // The concept is everything after ".../findings/" so names containing '/' survive.
                const std::string marker = "/findings/";
                std::string concept_name = req.path.substr(req.path.find(marker) + marker.size());
                return delete_finding(id, concept_name, req);
            }
        }
        if (parts[2] == "kb" && parts.size() == 4) {
            if (parts[3] == "ontology" || parts[3] == "rules") {
                bool ontology = parts[3] == "ontology";
                if (m == "GET") return get_document(ontology);
                if (m == "PUT") return put_document(ontology, req);
                return method_not_allowed();
            }
            if (parts[3] == "lint") return m == "POST" ? lint() : method_not_allowed();
        }
        return error_response(404, "NotFound", "no route for " + req.path);
    } catch (const std::exception& e) {
        return error_response(500, "InternalError", e.what());
    }
}

HttpResponse Service::list_models() {
    auto kb = snapshot();
    Json out = Json::array();
    for (const auto& model : kb->rulebase().models) out.push_back({{"model", model.name}, {"rule_count", model.rules.size()}});
    return json_response(200, out);
}

HttpResponse Service::create_session(const HttpRequest& req) {
    Json body = Json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object() || !body.contains("model") || !body["model"].is_string()) {
        return error_response(400, "BadRequest", "expected a JSON object with a string field 'model'");
    }
    auto kb = snapshot();
    try {
        SessionState state = new_session(kb, body["model"].get<std::string>());
        Json questions = to_json(next_questions(state, kQuestionsPerStep));
        std::string model = state.model_name;
        std::string id = sessions_.add(std::move(state));
        return json_response(201, {{"session_id", id}, {"kb_version", kb->version()}, {"model", model},
                                   {"next_questions", questions}});
    } catch (const InferenceError& e) {
        return error_response(422, to_string(e.code()), e.what());
    }
}

HttpResponse Service::post_finding(const std::string& id, const HttpRequest& req) {
    Json body = Json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object() || !body.contains("concept") || !body["concept"].is_string() ||
        !body.contains("value") || !body["value"].is_string() ||
        (body.contains("property") && !body["property"].is_string())) {
        return error_response(400, "BadRequest", "expected {concept, property?, value} strings");
    }
    const std::string concept_name = body["concept"].get<std::string>();
    const std::string property = body.value("property", std::string(kDefaultProperty));
    const std::string value = body["value"].get<std::string>();

    AssertOptions options;
    if (config_.strict_kb) options.require_kb_version = snapshot()->version();

    HttpResponse response;
    bool found = sessions_.with_session(id, [&](SessionState& s) {
        try {
            assert_finding(s, concept_name, property, value, options);
            response = json_response(200, {{"evaluation", to_json(evaluate(s))},
                                           {"next_questions", to_json(next_questions(s, kQuestionsPerStep))}});
        } catch (const InferenceError& e) {
            response = error_response(status_for(e.code()), to_string(e.code()), e.what(), inference_error_extra(e));
        }
    });
    return found ? response : session_not_found(id);
}

HttpResponse Service::delete_finding(const std::string& id, const std::string& concept_name, const HttpRequest& req) {
    auto prop = req.query.find("property");
    const std::string property = prop == req.query.end() ? std::string(kDefaultProperty) : prop->second;
    HttpResponse response;
    bool found = sessions_.with_session(id, [&](SessionState& s) {
        try {
            retract_finding(s, concept_name, property);
            response = json_response(200, {{"evaluation", to_json(evaluate(s))},
                                           {"next_questions", to_json(next_questions(s, kQuestionsPerStep))}});
        } catch (const InferenceError& e) {
            response = error_response(status_for(e.code()), to_string(e.code()), e.what(), inference_error_extra(e));
        }
    });
    return found ? response : session_not_found(id);
}

HttpResponse Service::results(const std::string& id) {
    HttpResponse response;
    bool found = sessions_.with_session(id, [&](SessionState& s) { response = json_response(200, to_json(evaluate(s))); });
    return found ? response : session_not_found(id);
}

HttpResponse Service::explanation(const std::string& id, const HttpRequest& req) {
    auto rule = req.query.find("rule");
    if (rule == req.query.end()) return error_response(400, "BadRequest", "query parameter 'rule' is required");
    HttpResponse response;
    bool found = sessions_.with_session(id, [&](SessionState& s) {
        try {
            response = {200, "text/html; charset=utf-8", render_trace_html(explain(s, rule->second)), {}};
        } catch (const InferenceError& e) {
            response = error_response(422, to_string(e.code()), e.what());
        }
    });
    return found ? response : session_not_found(id);
}

HttpResponse Service::get_document(bool ontology) {
    auto kb = snapshot();
    HttpResponse r;
    r.content_type = "application/xml; charset=utf-8";
    r.body = ontology ? serialize_ontology(kb->ontology()).bytes : serialize_rulebase(kb->rulebase()).bytes;
    r.headers["ETag"] = "\"" + kb->fingerprint() + "\"";
    return r;
}

HttpResponse Service::put_document(bool ontology, const HttpRequest& req) {
    if (!config_.admin_token || config_.admin_token->empty()) {
        return error_response(401, "Unauthorized", "KB updates are disabled: no admin token configured");
    }
    std::string token = req.header("x-admin-token");
    if (std::string auth = req.header("authorization"); auth.starts_with("Bearer ")) token = auth.substr(7);
    if (token != *config_.admin_token) return error_response(401, "Unauthorized", "missing or invalid admin token");

    std::lock_guard writer(writer_mutex_);
    auto current = snapshot();
    if (std::string if_match = req.header("if-match"); !if_match.empty() && if_match != "*" &&
                                                        unquote_etag(if_match) != current->fingerprint()) {
        return error_response(409, "EtagMismatch", "KB changed since it was read",
                              {{"etag", "\"" + current->fingerprint() + "\""}});
    }

    Ontology next_ontology = current->ontology();
    RuleBase next_rules = current->rulebase();
    IssueList issues;
    if (ontology) {
        auto parsed = parse_ontology(req.body, config_.policy);
        issues = parsed.issues;
        if (parsed.value) next_ontology = std::move(*parsed.value);
    } else {
        auto parsed = parse_rulebase(req.body, config_.policy);
        issues = parsed.issues;
        if (parsed.value) next_rules = std::move(*parsed.value);
    }
    if (has_errors(issues)) {
        return error_response(422, "ParseError", "document rejected", {{"issues", to_json(issues)}});
    }

    // Lint gate: the update may not introduce error-severity violations the current KB does not already have.
    LintReport before = check_rulebase(current->rulebase(), current->ontology(), config_.policy);
    LintReport after = check_rulebase(next_rules, next_ontology, config_.policy);
    auto old_keys = error_keys(before);
    LintReport introduced;
    for (const auto& v : after.violations) {
        if (v.severity != Severity::Error) continue;
        auto it = old_keys.find({v.code, v.model, v.rule, v.token});
        if (it != old_keys.end()) {
            old_keys.erase(it);
            continue;
        }
        ++introduced.counts[v.code];
        introduced.violations.push_back(v);
    }
    if (!introduced.empty()) {
        return error_response(422, "LintError", "update introduces unresolved references",
                              {{"issues", to_json(issues)}, {"report", to_json(introduced)}});
    }

    {
        KbDirLock dir_lock(config_.kb_dir);
        write_file_atomic(config_.kb_dir / (ontology ? kOntologyFile : kRulesFile),
                          ontology ? serialize_ontology(next_ontology).bytes : serialize_rulebase(next_rules).bytes);
    }
    auto next = make_snapshot(std::move(next_ontology), std::move(next_rules), current->version() + 1, config_.policy);
    {
        std::unique_lock lock(kb_mutex_);
        kb_ = next;
    }
    HttpResponse r{204, "", "", {}};
    r.headers["ETag"] = "\"" + next->fingerprint() + "\"";
    r.headers["X-KB-Version"] = std::to_string(next->version());
    return r;
}

HttpResponse Service::lint() {
    auto kb = snapshot();
    Json body = to_json(check_rulebase(kb->rulebase(), kb->ontology(), config_.policy));
    body["kb_version"] = kb->version();
    return json_response(200, body);
}

}  // namespace rcses
