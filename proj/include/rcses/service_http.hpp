#pragma once

#include "rcses/service.hpp"

#include <functional>
#include <string>

namespace httplib {
class Server;
}

namespace rcses {

using RequestLogger = std::function<void(const std::string& line)>;

/// Routes every /api/v1 request on `server` through `service.handle` and logs
/// one line per request: "<method> <path> <status> <millis>ms". Also enables
/// TCP_NODELAY on the server.
void mount_service(httplib::Server& server, Service& service, RequestLogger log = {});

}  // namespace rcses
