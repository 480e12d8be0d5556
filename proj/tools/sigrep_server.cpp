// sigrep-server: stateless HTTP calculator.
//
// Environment: SIGREP_ADDR (default 0.0.0.0), SIGREP_PORT (default 8080),
// SIGREP_CORS_ORIGIN (default *), SIGREP_UI_DIR (static assets, optional).

#include <cstdlib>
#include <iostream>
#include <string>

#include "sigrep/api.hpp"
#include "sigrep/service.hpp"

namespace {

std::string env_or(const char* name, const char* fallback) {
    const char* value = std::getenv(name);
    return value && *value ? value : fallback;
}

}  // namespace

int main() {
    const std::string addr = env_or("SIGREP_ADDR", "0.0.0.0");
    const std::string port_text = env_or("SIGREP_PORT", "8080");
    int port = 0;
    try {
        port = std::stoi(port_text);
    } catch (const std::exception&) {
        port = -1;
    }
    if (port < 0 || port > 65535) {
        std::cerr << "error: SIGREP_PORT must be a port number, got '" << port_text << "'\n";
        return 2;
    }

    sigrep::service::Options options;
    options.cors_origin = env_or("SIGREP_CORS_ORIGIN", "*");
    options.ui_dir = env_or("SIGREP_UI_DIR", "");

    httplib::Server server;
    sigrep::service::register_routes(server, options);
    std::cerr << "sigrep-server " << sigrep::api::kVersion << " listening on " << addr << ":"
              << port << '\n';
    if (!server.listen(addr, port)) {
        std::cerr << "error: cannot listen on " << addr << ":" << port << '\n';
        return 1;
    }
    return 0;
}
