#include <string>

#include "doctest.h"
#include "sigrep/api.hpp"

using namespace sigrep;
using nlohmann::json;

namespace {

std::vector<std::string> error_fields(const api::Params& params, const std::string& command) {
    try {
        api::run(command, params);
    } catch (const api::ValidationError& e) {
        std::vector<std::string> fields;
        for (const auto& f : e.errors()) fields.push_back(f.field);
        return fields;
    }
    return {};
}

}  // namespace

TEST_CASE("pvalue command") {
    const json point = api::run("pvalue", {{"n", "8"}, {"k", "0"}, {"a", "inf"}});
    CHECK(point["p_sig"] == 0.00390625);
    CHECK(point["a"] == "inf");
    CHECK(point["k_crit"] == 1);
    CHECK(point["sided"] == "one");
    CHECK(point["version"] == api::kVersion);

    const json beta3 = api::run("pvalue", {{"n", "8"}, {"k", "0"}, {"a", "3"}});
    CHECK(beta3["p_sig"] == 0.034965);
    CHECK(beta3["a"] == 3);
    CHECK(beta3["k_crit"] == 0);

    const json two = api::run("pvalue", {{"n", "8"}, {"k", "0"}, {"sided", "two"}});
    CHECK(two["p_sig"] == 0.0078125);

    CHECK(error_fields({{"n", "8"}, {"k", "9"}}, "pvalue") == std::vector<std::string>{"k"});
}

TEST_CASE("prep command") {
    const json n8 = api::run("prep", {{"n", "8"}, {"k1", "0"}, {"a", "3"}, {"alpha", "0.05"}});
    CHECK(n8["p_rep"] == 0.215038);
    CHECK(n8["k_crit"] == 0);
    const json n16 = api::run("prep", {{"n", "16"}, {"k1", "0"}, {"a", "4"}});
    CHECK(n16["p_rep"] == 0.521645);
    CHECK(n16["p_rep_point"] == 1.0);
    CHECK(error_fields({{"n", "8"}, {"k1", "0"}, {"a", "1"}}, "prep") == std::vector<std::string>{"a"});
    CHECK(error_fields({{"n", "8"}, {"k1", "0"}, {"a", "inf"}}, "prep") == std::vector<std::string>{"a"});
}

TEST_CASE("kbound and decide commands") {
    CHECK(api::run("kbound", {{"n", "8"}})["k_bound"].is_null());
    CHECK(api::run("kbound", {{"n", "16"}})["k_bound"] == 0);
    CHECK(api::run("kbound", {{"n", "16"}, {"beta", "0.99"}})["k_bound"].is_null());

    const json n16 = api::run("decide", {{"n", "16"}, {"k", "0"}});
    CHECK(n16["decision"] == "real-effect");
    CHECK(n16["witness_a"] == 4);
    CHECK(n16["p_rep"] == 0.521645);
    const json n8 = api::run("decide", {{"n", "8"}, {"k", "0"}});
    CHECK(n8["decision"] == "not-real-effect");
    CHECK(n8["a"] == 3);
    CHECK(n8["p_rep"] == 0.215038);
    CHECK(n8["witness_a"].is_null());
    CHECK(api::run("decide", {{"n", "16"}, {"k", "8"}})["decision"] == "never-significant");
}

TEST_CASE("validation collects every bad field") {
    const auto fields = error_fields({{"n", "x"}, {"k", "-1"}, {"alpha", "1.5"}, {"sided", "up"}}, "pvalue");
    CHECK(fields == std::vector<std::string>{"n", "k", "alpha", "sided"});
    CHECK(error_fields({{"n", "8"}, {"k", "0"}, {"bogus", "1"}}, "pvalue") ==
          std::vector<std::string>{"bogus"});
    CHECK(error_fields({{"n", "8"}, {"k", "0"}, {"a", "0.5"}}, "pvalue") == std::vector<std::string>{"a"});
    CHECK(error_fields({{"k", "0"}}, "pvalue") == std::vector<std::string>{"n"});
    CHECK(error_fields({}, "frobnicate") == std::vector<std::string>{"command"});
}

TEST_CASE("computation caps") {
    CHECK_THROWS_AS(api::run("pvalue", {{"n", "1000001"}, {"k", "0"}}), api::CapExceeded);
    CHECK_THROWS_AS(api::run("pvalue", {{"n", "10"}, {"k", "0"}, {"a", "2e7"}}), api::CapExceeded);
    CHECK_THROWS_AS(api::run("curve", {{"a-range", "1:200000"}}), api::CapExceeded);
}

TEST_CASE("curve command") {
    const json curve = api::run("curve", {{"a-range", "1:10"}, {"alpha", "0.05"}});
    REQUIRE(curve["rows"].size() == 10);
    CHECK(curve["rows"][0]["a"] == 1);
    CHECK(curve["rows"][0]["effect_bound"] == 0.05);
    CHECK(curve["rows"][1]["effect_bound"] == 0.13535);
    for (const auto& row : curve["rows"]) CHECK(row["a"] != "inf");

    const std::string csv = api::render_csv(curve);
    CHECK(csv.starts_with("n,a,k_crit,effect_bound,p_sig,p_rep,k_bound\n,1,,0.05,,,\n"));

    const json grid = api::run("curve", {{"n-range", "8:16:8"}, {"a-range", "3:4"}, {"k", "0"}});
    REQUIRE(grid["rows"].size() == 4);
    CHECK(grid["rows"][0]["p_rep"] == 0.215038);
    CHECK(grid["rows"][0]["k_bound"].is_null());
    CHECK(grid["rows"][3]["p_rep"] == 0.521645);
    CHECK(grid["rows"][3]["k_bound"] == 0);
    CHECK(error_fields({{"a-range", "3:1"}}, "curve") == std::vector<std::string>{"a-range"});
    CHECK(error_fields({}, "curve") == std::vector<std::string>{"n-range"});
}

TEST_CASE("simulate command") {
    const json sim = api::run("simulate", {{"n", "8"}, {"a", "3"}, {"trials", "20000"}, {"seed", "42"}});
    CHECK(sim["frequencies"].size() == 9);
    CHECK(sim["rng"] == "splitmix64/1");
    CHECK(sim == api::run("simulate", {{"n", "8"}, {"a", "3"}, {"trials", "20000"}, {"seed", "42"}}));
    const json rep = api::run("simulate", {{"n", "16"}, {"a", "4"}, {"mode", "replication"},
                                           {"k1", "0"}, {"trials", "20000"}});
    CHECK(rep["k_crit"] == 2);
    CHECK(rep["p_rep"] == 0.521645);
    CHECK(error_fields({{"n", "8"}, {"k1", "0"}}, "simulate") == std::vector<std::string>{"k1"});
}

TEST_CASE("JSON records round-trip through their rendering") {
    const std::vector<std::pair<std::string, api::Params>> requests = {
        {"pvalue", {{"n", "8"}, {"k", "0"}, {"a", "3"}}},
        {"pvalue", {{"n", "97"}, {"k", "31"}, {"a", "2.75"}, {"sided", "two"}}},
        {"prep", {{"n", "16"}, {"k1", "1"}, {"a", "3"}}},
        {"kbound", {{"n", "40"}, {"alpha", "0.01"}}},
        {"decide", {{"n", "30"}, {"k", "3"}, {"beta", "0.4"}}},
        {"curve", {{"n-range", "10:12"}, {"a-range", "1:3"}, {"k", "1"}}},
    };
    for (const auto& [command, params] : requests) {
        const json record = api::run(command, params);
        CHECK(json::parse(record.dump()) == record);
    }
}

TEST_CASE("probabilities carry 6 significant digits") {
    CHECK(api::round_probability(0.21503759398496242) == 0.215038);
    CHECK(api::round_probability(0.00390625) == 0.00390625);
    CHECK(api::round_probability(1.0) == 1.0);
    CHECK(json(api::round_probability(0.034965034965)).dump() == "0.034965");
}

TEST_CASE("text rendering shows nil for absent values") {
    const std::string text = api::render_text(api::run("kbound", {{"n", "8"}}));
    CHECK(text.find("k_bound: nil\n") != std::string::npos);
}
