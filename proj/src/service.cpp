#include "sigrep/service.hpp"

#include <exception>

#include "sigrep/api.hpp"

namespace sigrep::service {

namespace {

void send_json(httplib::Response& res, int status, const nlohmann::json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json; charset=utf-8");
}

}  // namespace

void register_routes(httplib::Server& server, const Options& options) {
    server.set_default_headers({{"Access-Control-Allow-Origin", options.cors_origin},
                                {"Access-Control-Allow-Methods", "GET, OPTIONS"},
                                {"Access-Control-Allow-Headers", "Content-Type"}});

    server.Options(R"(/api/v1/.*)", [](const httplib::Request&, httplib::Response& res) {
        res.status = 204;
    });

    server.Get("/api/v1/health", [](const httplib::Request&, httplib::Response& res) {
        send_json(res, 200, {{"status", "ok"}, {"version", api::kVersion}});
    });

    for (const char* command : {"pvalue", "prep", "kbound", "decide", "curve"}) {
        const std::string name = command;
        server.Get("/api/v1/" + name, [name](const httplib::Request& req, httplib::Response& res) {
            api::Params params;
            for (const auto& [key, value] : req.params) params[key] = value;
            try {
                const auto record = api::run(name, params);
                if (name == "curve" && params.contains("emit") && params["emit"] == "csv") {
                    res.set_content(api::render_csv(record), "text/csv; charset=utf-8");
                    return;
                }
                send_json(res, 200, record);
            } catch (const api::ValidationError& e) {
                send_json(res, 400, api::error_payload(e));
            } catch (const api::CapExceeded& e) {
                send_json(res, 422, api::error_payload(e));
            } catch (const std::exception& e) {
                send_json(res, 500, {{"error", "internal"}, {"message", e.what()},
                                     {"version", api::kVersion}});
            }
        });
    }

    if (!options.ui_dir.empty()) server.set_mount_point("/", options.ui_dir);
}

}  // namespace sigrep::service
