// Request handling shared by the command-line tool and the HTTP service.
//
// Each command takes string parameters (CLI flags or query parameters, same
// names) and returns the JSON output record, so both surfaces serialize
// identical payloads.

#ifndef SIGREP_API_HPP
#define SIGREP_API_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace sigrep::api {

inline constexpr const char* kVersion = "0.1.0";

/// Per-request computation limits.
inline constexpr long long kMaxSampleSize = 1'000'000;
inline constexpr long long kMaxShape = 10'000'000;
inline constexpr long long kMaxCurveRows = 100'000;
inline constexpr long long kMaxTrials = 100'000'000;

using Params = std::map<std::string, std::string, std::less<>>;

struct FieldError {
    std::string field;
    std::string message;
};

/// Invalid or malformed input (CLI exit 2, HTTP 400).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<FieldError> errors);
    const std::vector<FieldError>& errors() const noexcept { return errors_; }

private:
    std::vector<FieldError> errors_;
};

/// Request exceeds a computation cap or a search is undecided at its cap
/// (CLI exit 3, HTTP 422).
class CapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

nlohmann::json cmd_pvalue(const Params& params);
nlohmann::json cmd_prep(const Params& params);
nlohmann::json cmd_kbound(const Params& params);
nlohmann::json cmd_decide(const Params& params);
nlohmann::json cmd_simulate(const Params& params);
/// {"rows": [...], "columns": [...], ...}; see render_csv for the tabular form.
nlohmann::json cmd_curve(const Params& params);

/// Dispatches by command name; throws ValidationError for unknown commands.
nlohmann::json run(std::string_view command, const Params& params);

/// Header row plus one line per curve row; null cells are empty.
std::string render_csv(const nlohmann::json& curve);
/// One "key: value" line per field; null renders as "nil".
std::string render_text(const nlohmann::json& record);

nlohmann::json error_payload(const ValidationError& error);
nlohmann::json error_payload(const CapExceeded& error);

/// Rounds to 6 significant digits so that rendering and re-parsing is exact.
double round_probability(double value);

}  // namespace sigrep::api

#endif  // SIGREP_API_HPP
