// HTTP facade over the calculator commands.
//
//   GET /api/v1/{pvalue,prep,kbound,decide,curve}  query parameters as CLI flags
//   GET /api/v1/health
//
// 200 with the output record, 400 for validation errors, 422 when a
// computation cap is reached. Handlers are stateless.

#ifndef SIGREP_SERVICE_HPP
#define SIGREP_SERVICE_HPP

#include <string>

#include "httplib.h"

namespace sigrep::service {

struct Options {
    /// Value of Access-Control-Allow-Origin on every response.
    std::string cors_origin = "*";
    /// Directory of static UI assets mounted at "/", if non-empty.
    std::string ui_dir;
};

void register_routes(httplib::Server& server, const Options& options = {});

}  // namespace sigrep::service

#endif  // SIGREP_SERVICE_HPP
