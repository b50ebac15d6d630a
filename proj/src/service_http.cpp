#include "rcses/service_http.hpp"

#include <httplib.h>

#include <cctype>
#include <chrono>
#include <cstdio>

namespace rcses {

void mount_service(httplib::Server& server, Service& service, RequestLogger log) {
    auto handler = [&service, log](const httplib::Request& req, httplib::Response& res) {
        const auto start = std::chrono::steady_clock::now();
        HttpRequest request;
        request.method = req.method;
        request.path = req.path;
        request.body = req.body;
        for (const auto& [k, v] : req.params) request.query.emplace(k, v);
        for (const auto& [k, v] : req.headers) {
            std::string name = k;
            for (auto& c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            request.headers[name] = v;
        }

        HttpResponse response = service.handle(request);
        res.status = response.status;
        for (const auto& [k, v] : response.headers) res.set_header(k, v);
        if (response.status != 204) res.set_content(response.body, response.content_type);

        if (log) {
            const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.2f", ms);
            log(req.method + " " + req.path + " " + std::to_string(response.status) + " " + buf + "ms");
        }
    };
    // Small JSON responses on keep-alive connections otherwise stall on Nagle + delayed ACK.
    server.set_tcp_nodelay(true);
    const char* pattern = R"(/api/v1/.*)";
    server.Get(pattern, handler);
    server.Post(pattern, handler);
    server.Put(pattern, handler);
    server.Delete(pattern, handler);
}

}  // namespace rcses
