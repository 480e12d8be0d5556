#include "sigrep/api.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <optional>
#include <set>
#include <sstream>

#include "sigrep/nhst.hpp"
#include "sigrep/oracle.hpp"
#include "sigrep/replication.hpp"

namespace sigrep::api {

using nlohmann::json;

namespace {

struct IntRange {
    long long lo = 0;
    long long hi = 0;
    long long step = 1;

    long long size() const { return (hi - lo) / step + 1; }
};

// Collects field errors while reading parameters; throws once at the end.
class Reader {
public:
    Reader(const Params& params, std::set<std::string, std::less<>> allowed)
        : params_(params), allowed_(std::move(allowed)) {
        for (const auto& [key, value] : params_) {
            if (!allowed_.contains(key)) fail(key, "unknown parameter");
        }
    }

    std::optional<std::string_view> raw(std::string_view name) const {
        const auto it = params_.find(name);
        if (it == params_.end()) return std::nullopt;
        return std::string_view(it->second);
    }

    std::optional<long long> integer(std::string_view name, std::optional<long long> fallback,
                                     long long min, long long max) {
        const auto text = raw(name);
        if (!text) {
            if (!fallback) fail(name, "is required");
            return fallback;
        }
        long long value = 0;
        const auto [end, ec] = std::from_chars(text->data(), text->data() + text->size(), value);
        if (ec != std::errc{} || end != text->data() + text->size()) {
            fail(name, "must be an integer, got '" + std::string(*text) + "'");
            return std::nullopt;
        }
        if (value < min || value > max) {
            fail(name, "must lie in [" + std::to_string(min) + ", " + std::to_string(max) +
                           "], got " + std::to_string(value));
            return std::nullopt;
        }
        return value;
    }

    std::optional<std::uint64_t> unsigned_integer(std::string_view name, std::uint64_t fallback) {
        const auto text = raw(name);
        if (!text) return fallback;
        std::uint64_t value = 0;
        const auto [end, ec] = std::from_chars(text->data(), text->data() + text->size(), value);
        if (ec != std::errc{} || end != text->data() + text->size()) {
            fail(name, "must be a non-negative 64-bit integer, got '" + std::string(*text) + "'");
            return std::nullopt;
        }
        return value;
    }

    // Probability strictly inside (0, 1).
    std::optional<double> probability(std::string_view name, double fallback) {
        const auto text = raw(name);
        if (!text) return fallback;
        const auto value = parse_double(*text);
        if (!value) {
            fail(name, "must be a number, got '" + std::string(*text) + "'");
            return std::nullopt;
        }
        if (!(*value > 0.0 && *value < 1.0)) {
            fail(name, "must lie strictly between 0 and 1");
            return std::nullopt;
        }
        return value;
    }

    // Null shape: a number >= 1 or "inf" for the point null.
    std::optional<NullSpec> shape(std::string_view name, std::optional<std::string_view> fallback) {
        auto text = raw(name);
        if (!text) text = fallback;
        if (!text) {
            fail(name, "is required");
            return std::nullopt;
        }
        if (*text == "inf" || *text == "infinity" || *text == "Inf") return NullSpec::point();
        const auto value = parse_double(*text);
        if (!value || !std::isfinite(*value)) {
            fail(name, "must be a number >= 1 or 'inf', got '" + std::string(*text) + "'");
            return std::nullopt;
        }
        if (*value < 1.0) {
            fail(name, "must be >= 1");
            return std::nullopt;
        }
        if (*value > static_cast<double>(kMaxShape)) {
            throw CapExceeded("shape a above the computation cap " + std::to_string(kMaxShape));
        }
        return NullSpec::beta(*value);
    }

    std::optional<std::string> choice(std::string_view name, std::string_view fallback,
                                      std::initializer_list<std::string_view> options) {
        const std::string_view text = raw(name).value_or(fallback);
        for (const auto option : options) {
            if (text == option) return std::string(text);
        }
        std::string list;
        for (const auto option : options) {
            if (!list.empty()) list += ", ";
            list += option;
        }
        fail(name, "must be one of {" + list + "}, got '" + std::string(text) + "'");
        return std::nullopt;
    }

    std::optional<IntRange> range(std::string_view name, long long min, long long max) {
        const auto text = raw(name);
        if (!text) return std::nullopt;
        IntRange r;
        const char* p = text->data();
        const char* end = p + text->size();
        auto take = [&](long long& out) {
            const auto [next, ec] = std::from_chars(p, end, out);
            if (ec != std::errc{}) return false;
            p = next;
            return true;
        };
        bool ok = take(r.lo) && p != end && *p++ == ':' && take(r.hi);
        if (ok && p != end) ok = *p++ == ':' && take(r.step);
        ok = ok && p == end;
        if (!ok) {
            fail(name, "must be lo:hi or lo:hi:step, got '" + std::string(*text) + "'");
            return std::nullopt;
        }
        if (r.step < 1 || r.lo > r.hi || r.lo < min || r.hi > max) {
            fail(name, "needs " + std::to_string(min) + " <= lo <= hi <= " + std::to_string(max) +
                           " and step >= 1");
            return std::nullopt;
        }
        return r;
    }

    void fail(std::string_view field, std::string message) {
        errors_.push_back({std::string(field), std::move(message)});
    }

    void finish() const {
        if (!errors_.empty()) throw ValidationError(errors_);
    }

private:
    static std::optional<double> parse_double(std::string_view text) {
        if (text.empty()) return std::nullopt;
        const std::string copy(text);
        char* end = nullptr;
        const double value = std::strtod(copy.c_str(), &end);
        if (end != copy.c_str() + copy.size() || std::isnan(value)) return std::nullopt;
        return value;
    }

    const Params& params_;
    std::set<std::string, std::less<>> allowed_;
    std::vector<FieldError> errors_;
};

json shape_json(const NullSpec& null) {
    if (null.is_point()) return "inf";
    const double a = null.shape();
    if (a == std::floor(a)) return static_cast<long long>(a);
    return a;
}

template <typename T>
json optional_json(const std::optional<T>& value) {
    return value ? json(*value) : json(nullptr);
}

json optional_probability(const std::optional<double>& value) {
    return value ? json(round_probability(*value)) : json(nullptr);
}

const char* sided_name(Sidedness sided) {
    return sided == Sidedness::two_sided ? "two" : "one";
}

void check_sample_size(long long n) {
    if (n > kMaxSampleSize) {
        throw CapExceeded("sample size n above the computation cap " +
                          std::to_string(kMaxSampleSize));
    }
}

SearchLimits request_limits() { return SearchLimits{kMaxShape}; }

}  // namespace

ValidationError::ValidationError(std::vector<FieldError> errors)
    : std::runtime_error([&] {
          std::string what = "validation error";
          for (const auto& e : errors) what += "; " + e.field + ": " + e.message;
          return what;
      }()),
      errors_(std::move(errors)) {}

double round_probability(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.6g", value);
    return std::strtod(buffer, nullptr);
}

json cmd_pvalue(const Params& params) {
    Reader in(params, {"n", "k", "a", "alpha", "sided"});
    const auto n = in.integer("n", std::nullopt, 1, std::numeric_limits<long long>::max());
    const auto k = in.integer("k", std::nullopt, 0, std::numeric_limits<long long>::max());
    const auto null = in.shape("a", "inf");
    const auto alpha = in.probability("alpha", 0.05);
    const auto sided = in.choice("sided", "one", {"one", "two"});
    if (n && k && *k > *n) in.fail("k", "must be <= n (" + std::to_string(*k) + " > " +
                                            std::to_string(*n) + ")");
    in.finish();
    check_sample_size(*n);

    const TestConfig config{*alpha, *sided == "two" ? Sidedness::two_sided : Sidedness::one_sided};
    const Experiment obs{*n, *k};
    json out;
    out["n"] = *n;
    out["k"] = *k;
    out["a"] = shape_json(*null);
    out["alpha"] = *alpha;
    out["sided"] = sided_name(config.sided);
    out["p_sig"] = round_probability(p_value(obs, *null, config));
    out["k_crit"] = optional_json(critical_value(*n, *null, config));
    out["version"] = kVersion;
    return out;
}

json cmd_prep(const Params& params) {
    Reader in(params, {"n", "k1", "a", "alpha"});
    const auto n = in.integer("n", std::nullopt, 1, std::numeric_limits<long long>::max());
    const auto k1 = in.integer("k1", std::nullopt, 0, std::numeric_limits<long long>::max());
    const auto null = in.shape("a", std::nullopt);
    const auto alpha = in.probability("alpha", 0.05);
    if (n && k1 && *k1 > *n) in.fail("k1", "must be <= n (" + std::to_string(*k1) + " > " +
                                              std::to_string(*n) + ")");
    if (null && null->is_point()) {
        in.fail("a", "replication needs a finite shape; the point null has no posterior");
    }
    in.finish();
    check_sample_size(*n);

    const TestConfig config{*alpha, Sidedness::one_sided};
    const CriticalValue k_crit = critical_value(*n, *null, config);
    if (!k_crit) {
        std::ostringstream msg;
        msg << "no critical value exists under Beta(" << null->shape() << "," << null->shape()
            << ") at n=" << *n << ", alpha=" << *alpha;
        in.fail("a", msg.str());
        in.finish();
    }
    json out;
    out["n"] = *n;
    out["k"] = *k1;
    out["a"] = shape_json(*null);
    out["alpha"] = *alpha;
    out["sided"] = "one";
    out["p_sig"] = round_probability(p_value(Experiment{*n, *k1}, *null, config));
    out["k_crit"] = *k_crit;
    out["p_rep"] = round_probability(p_rep(*k1, *n, *null, *k_crit));
    out["p_rep_point"] = round_probability(p_rep_point_form(*k1, *n, *k_crit));
    out["version"] = kVersion;
    return out;
}

json cmd_kbound(const Params& params) {
    Reader in(params, {"n", "alpha", "beta"});
    const auto n = in.integer("n", std::nullopt, 1, std::numeric_limits<long long>::max());
    const auto alpha = in.probability("alpha", 0.05);
    const auto beta = in.probability("beta", 0.5);
    in.finish();
    check_sample_size(*n);

    const DecisionCriteria criteria{*alpha, *beta};
    std::optional<Count> bound;
    try {
        bound = k_bound(*n, criteria, request_limits());
    } catch (const UndecidedAtCap& e) {
        throw CapExceeded(e.what());
    }
    json out;
    out["n"] = *n;
    out["alpha"] = *alpha;
    out["beta"] = *beta;
    out["sided"] = "one";
    out["k_bin"] = optional_json(critical_value(*n, NullSpec::point(), TestConfig{*alpha}));
    out["k_bound"] = optional_json(bound);
    out["version"] = kVersion;
    return out;
}

json cmd_decide(const Params& params) {
    Reader in(params, {"n", "k", "alpha", "beta"});
    const auto n = in.integer("n", std::nullopt, 1, std::numeric_limits<long long>::max());
    const auto k = in.integer("k", std::nullopt, 0, std::numeric_limits<long long>::max());
    const auto alpha = in.probability("alpha", 0.05);
    const auto beta = in.probability("beta", 0.5);
    if (n && k && *k > *n) in.fail("k", "must be <= n (" + std::to_string(*k) + " > " +
                                            std::to_string(*n) + ")");
    in.finish();
    check_sample_size(*n);

    TestReport report;
    try {
        report = real_effect(Experiment{*n, *k}, DecisionCriteria{*alpha, *beta}, request_limits());
    } catch (const UndecidedAtCap& e) {
        throw CapExceeded(e.what());
    }
    json out;
    out["n"] = *n;
    out["k"] = *k;
    out["a"] = shape_json(report.null);
    out["alpha"] = *alpha;
    out["beta"] = *beta;
    out["sided"] = "one";
    out["p_sig"] = round_probability(report.p_sig);
    out["k_crit"] = optional_json(report.k_crit);
    out["min_a"] = optional_json(report.min_a);
    out["p_rep"] = optional_probability(report.p_rep);
    out["k_bound"] = optional_json(report.k_bound);
    out["decision"] = to_string(report.decision);
    out["witness_a"] = optional_json(report.witness_a);
    out["p_sig_point"] = round_probability(report.p_sig_point);
    out["k_bin"] = optional_json(report.k_bin);
    out["p_rep_point"] = optional_probability(report.p_rep_point);
    out["version"] = kVersion;
    return out;
}

json cmd_simulate(const Params& params) {
    Reader in(params, {"n", "a", "trials", "seed", "mode", "k1", "k-crit", "alpha"});
    const auto n = in.integer("n", std::nullopt, 1, std::numeric_limits<long long>::max());
    const auto mode = in.choice("mode", "experiment", {"experiment", "replication"});
    const auto null = in.shape("a", "inf");
    const auto trials = in.integer("trials", 100'000, 1, kMaxTrials);
    const auto seed = in.unsigned_integer("seed", 0);
    const auto alpha = in.probability("alpha", 0.05);
    const bool replication = mode && *mode == "replication";
    std::optional<long long> k1;
    std::optional<long long> k_crit;
    if (replication) {
        k1 = in.integer("k1", std::nullopt, 0, std::numeric_limits<long long>::max());
        if (in.raw("k-crit")) k_crit = in.integer("k-crit", std::nullopt, 0,
                                                  std::numeric_limits<long long>::max());
        if (n && k1 && *k1 > *n) in.fail("k1", "must be <= n");
        if (n && k_crit && *k_crit > *n) in.fail("k-crit", "must be <= n");
        if (null && null->is_point()) in.fail("a", "replication mode needs a finite shape");
    } else {
        if (in.raw("k1")) in.fail("k1", "only valid with mode=replication");
        if (in.raw("k-crit")) in.fail("k-crit", "only valid with mode=replication");
    }
    in.finish();
    check_sample_size(*n);
    if (static_cast<double>(*n) * static_cast<double>(*trials) > 1e10) {
        throw CapExceeded("n * trials above the simulation cap 1e10");
    }

    json out;
    out["mode"] = *mode;
    out["n"] = *n;
    out["a"] = shape_json(*null);
    out["trials"] = *trials;
    out["seed"] = *seed;
    out["rng"] = oracle::SplitMix64::kName;
    const auto trial_count = static_cast<std::uint64_t>(*trials);
    if (!replication) {
        const oracle::EmpiricalPmf pmf = oracle::mc_experiment(*n, *null, trial_count, *seed);
        const CountTail tail = CountTail::under_null(*n, *null);
        json freq = json::array();
        json analytic = json::array();
        for (Count k = 0; k <= *n; ++k) {
            freq.push_back(round_probability(pmf.frequency(k)));
            analytic.push_back(round_probability(tail.pmf(k)));
        }
        out["frequencies"] = std::move(freq);
        out["analytic"] = std::move(analytic);
    } else {
        if (!k_crit) {
            const CriticalValue kc = critical_value(*n, *null, TestConfig{*alpha});
            if (!kc) {
                in.fail("a", "no critical value exists at this alpha; pass k-crit explicitly");
                in.finish();
            }
            k_crit = *kc;
        }
        const oracle::SimulationResult sim =
            oracle::mc_replication(*k1, *n, *null, *k_crit, trial_count, *seed);
        out["k"] = *k1;
        out["k_crit"] = *k_crit;
        out["estimate"] = round_probability(sim.estimate);
        out["std_error"] = round_probability(sim.std_error);
        out["p_rep"] = round_probability(p_rep(*k1, *n, *null, *k_crit));
    }
    out["version"] = kVersion;
    return out;
}

json cmd_curve(const Params& params) {
    Reader in(params, {"n-range", "a-range", "k", "alpha", "beta", "sided", "emit"});
    const auto n_range = in.range("n-range", 1, kMaxSampleSize);
    const auto a_range = in.range("a-range", 1, kMaxShape);
    const auto alpha = in.probability("alpha", 0.05);
    const auto beta = in.probability("beta", 0.5);
    const auto sided = in.choice("sided", "one", {"one", "two"});
    in.choice("emit", "json", {"json", "csv"});
    std::optional<long long> k;
    if (in.raw("k")) k = in.integer("k", std::nullopt, 0, kMaxSampleSize);
    if (!in.raw("n-range") && !in.raw("a-range")) {
        in.fail("n-range", "at least one of n-range and a-range is required");
    }
    if (k && !(in.raw("n-range") && in.raw("a-range"))) {
        in.fail("k", "needs both n-range and a-range");
    }
    in.finish();
    const long long rows = (n_range ? n_range->size() : 1) * (a_range ? a_range->size() : 1);
    if (rows > kMaxCurveRows) {
        throw CapExceeded("curve has " + std::to_string(rows) + " rows, above the cap " +
                          std::to_string(kMaxCurveRows));
    }

    const TestConfig config{*alpha, *sided == "two" ? Sidedness::two_sided : Sidedness::one_sided};
    const DecisionCriteria criteria{*alpha, *beta};
    std::vector<std::optional<long long>> ns;
    if (n_range) {
        for (long long n = n_range->lo; n <= n_range->hi; n += n_range->step) ns.emplace_back(n);
    } else {
        ns.emplace_back(std::nullopt);
    }
    std::vector<std::optional<long long>> as;
    if (a_range) {
        for (long long a = a_range->lo; a <= a_range->hi; a += a_range->step) as.emplace_back(a);
    } else {
        as.emplace_back(std::nullopt);
    }

    json table = json::array();
    for (const auto& n : ns) {
        json bound = nullptr;
        if (n) {
            try {
                bound = optional_json(k_bound(*n, criteria, request_limits()));
            } catch (const UndecidedAtCap& e) {
                throw CapExceeded(e.what());
            }
        }
        for (const auto& a : as) {
            json row;
            row["n"] = optional_json(n);
            row["a"] = optional_json(a);
            row["k_crit"] = nullptr;
            row["effect_bound"] = nullptr;
            row["p_sig"] = nullptr;
            row["p_rep"] = nullptr;
            row["k_bound"] = bound;
            if (a) {
                const NullSpec null = NullSpec::beta(static_cast<double>(*a));
                row["effect_bound"] = round_probability(effect_size_bound(null, config));
                if (n) {
                    const CriticalValue kc = critical_value(*n, null, config);
                    row["k_crit"] = optional_json(kc);
                    if (k && *k <= *n) {
                        row["p_sig"] = round_probability(p_value(Experiment{*n, *k}, null, config));
                        if (kc) row["p_rep"] = round_probability(p_rep(*k, *n, null, *kc));
                    }
                }
            }
            table.push_back(std::move(row));
        }
    }

    json out;
    out["alpha"] = *alpha;
    out["beta"] = *beta;
    out["sided"] = *sided;
    out["k"] = optional_json(k);
    out["columns"] = {"n", "a", "k_crit", "effect_bound", "p_sig", "p_rep", "k_bound"};
    out["rows"] = std::move(table);
    out["version"] = kVersion;
    return out;
}

json run(std::string_view command, const Params& params) {
    if (command == "pvalue") return cmd_pvalue(params);
    if (command == "prep") return cmd_prep(params);
    if (command == "kbound") return cmd_kbound(params);
    if (command == "decide") return cmd_decide(params);
    if (command == "simulate") return cmd_simulate(params);
    if (command == "curve") return cmd_curve(params);
    throw ValidationError({{"command", "unknown command '" + std::string(command) + "'"}});
}

std::string render_csv(const json& curve) {
    std::ostringstream out;
    const auto& columns = curve.at("columns");
    for (std::size_t i = 0; i < columns.size(); ++i) {
        out << (i ? "," : "") << columns[i].get<std::string>();
    }
    out << '\n';
    for (const auto& row : curve.at("rows")) {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            const auto& cell = row.at(columns[i].get<std::string>());
            out << (i ? "," : "");
            if (!cell.is_null()) out << cell.dump();
        }
        out << '\n';
    }
    return out.str();
}

std::string render_text(const json& record) {
    std::ostringstream out;
    for (const auto& [key, value] : record.items()) {
        out << key << ": ";
        if (value.is_null()) {
            out << "nil";
        } else if (value.is_string()) {
            out << value.get<std::string>();
        } else if (value.is_array()) {
            for (std::size_t i = 0; i < value.size(); ++i) out << (i ? " " : "") << value[i].dump();
        } else {
            out << value.dump();
        }
        out << '\n';
    }
    return out.str();
}

json error_payload(const ValidationError& error) {
    json fields = json::array();
    for (const auto& e : error.errors()) fields.push_back({{"field", e.field}, {"message", e.message}});
    return {{"error", "validation"}, {"fields", fields}, {"version", kVersion}};
}

json error_payload(const CapExceeded& error) {
    return {{"error", "undecided-at-cap"}, {"message", error.what()}, {"version", kVersion}};
}

}  // namespace sigrep::api
