// rcses-server: HTTP consultation service over a KB directory.

#include "rcses/service.hpp"
#include "rcses/service_http.hpp"

#include <CLI11.hpp>
#include <httplib.h>

#include <cstdlib>
#include <iostream>
#include <mutex>

int main(int argc, char** argv) {
    CLI::App app{"Expert-system consultation service"};
    std::string kb_dir;
    std::string listen = "127.0.0.1:8080";
    std::int64_t ttl = 3600;
    std::size_t capacity = 10000;
    bool strict = false;
    std::string ui_dir;
    app.add_option("--kb", kb_dir, "KB directory holding ontology.xml and rules.xml")->required();
    app.add_option("--listen", listen, "host:port to listen on");
    app.add_option("--session-ttl", ttl, "idle session lifetime in seconds");
    app.add_option("--session-capacity", capacity, "maximum number of live sessions");
    app.add_flag("--strict-kb", strict, "reject findings on sessions pinned to an outdated KB");
    app.add_option("--ui-dir", ui_dir, "static web client served under /ui/");
    CLI11_PARSE(app, argc, argv);

    rcses::ServiceConfig config;
    auto colon = listen.rfind(':');
    if (colon == std::string::npos) {
        std::cerr << "--listen expects host:port\n";
        return 2;
    }
    config.listen_host = listen.substr(0, colon);
    try {
        config.listen_port = std::stoi(listen.substr(colon + 1));
    } catch (const std::exception&) {
        std::cerr << "bad port in --listen\n";
        return 2;
    }
    config.kb_dir = kb_dir;
    config.session_ttl = ttl;
    config.session_capacity = capacity;
    config.strict_kb = strict;
    if (const char* token = std::getenv("RCSES_ADMIN_TOKEN"); token != nullptr && *token != '\0') {
        config.admin_token = token;
    }

    std::unique_ptr<rcses::Service> service;
    try {
        service = std::make_unique<rcses::Service>(config);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    httplib::Server server;
    std::mutex log_mutex;
    rcses::mount_service(server, *service, [&](const std::string& line) {
        std::lock_guard lock(log_mutex);
        std::cerr << line << std::endl;
    });
    if (!ui_dir.empty() && !server.set_mount_point("/ui", ui_dir)) {
        std::cerr << "cannot serve UI directory " << ui_dir << "\n";
        return 2;
    }

    std::cerr << "listening on " << config.listen_host << ":" << config.listen_port << " (KB version "
              << service->snapshot()->version() << ")" << std::endl;
    if (!server.listen(config.listen_host, config.listen_port)) {
        std::cerr << "cannot listen on " << listen << "\n";
        return 2;
    }
    return 0;
}
