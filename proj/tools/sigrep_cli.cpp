// sigrep: significance and replication calculator for counting experiments.
//
//   sigrep pvalue   --n 8 --k 0 --a inf
//   sigrep prep     --n 16 --k1 0 --a 4 --alpha 0.05
//   sigrep kbound   --n 16 --alpha 0.05 --beta 0.5
//   sigrep decide   --n 16 --k 0
//   sigrep simulate --n 8 --a 3 --trials 1000000 --seed 42
//   sigrep curve    --a-range 1:10 --emit csv
//
// Exit status: 0 success, 2 validation error, 3 computation cap reached.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sigrep/api.hpp"

namespace {

struct Flag {
    std::string name;
    std::string help;
    std::string value;
    CLI::Option* option = nullptr;
};

struct Command {
    std::string name;
    CLI::App* app = nullptr;
    std::vector<Flag> flags;
    std::string emit = "text";
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Distributional significance and replication for counting experiments"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("sigrep ") + sigrep::api::kVersion);

    std::vector<Command> commands = {
        {"pvalue", nullptr,
         {{"n", "sample size"},
          {"k", "observed count"},
          {"a", "null shape (number >= 1, or inf for p = 0.5); default inf"},
          {"alpha", "significance criterion; default 0.05"},
          {"sided", "one or two; default one"}}},
        {"prep", nullptr,
         {{"n", "sample size"},
          {"k1", "count observed in the first experiment"},
          {"a", "null shape (number >= 1)"},
          {"alpha", "significance criterion; default 0.05"}}},
        {"kbound", nullptr,
         {{"n", "sample size"},
          {"alpha", "significance criterion; default 0.05"},
          {"beta", "replication criterion; default 0.5"}}},
        {"decide", nullptr,
         {{"n", "sample size"},
          {"k", "observed count"},
          {"alpha", "significance criterion; default 0.05"},
          {"beta", "replication criterion; default 0.5"}}},
        {"simulate", nullptr,
         {{"n", "sample size"},
          {"a", "null shape; default inf (experiment mode only)"},
          {"trials", "number of simulated experiments; default 100000"},
          {"seed", "64-bit seed; default 0"},
          {"mode", "experiment or replication; default experiment"},
          {"k1", "first-experiment count (replication mode)"},
          {"k-crit", "critical value (replication mode); default from alpha"},
          {"alpha", "significance criterion used when k-crit is absent; default 0.05"}}},
        {"curve", nullptr,
         {{"n-range", "sample sizes lo:hi[:step]"},
          {"a-range", "integer null shapes lo:hi[:step]"},
          {"k", "observed count for p_sig and p_rep columns"},
          {"alpha", "significance criterion; default 0.05"},
          {"beta", "replication criterion; default 0.5"},
          {"sided", "one or two; default one"}}},
    };

    const std::string descriptions[] = {
        "p-value and critical value under a symmetric null",
        "replication probability of a first-experiment result",
        "largest count consistent with a real effect (nil if none)",
        "full significance-and-replication report",
        "seeded Monte Carlo check of the analytic values",
        "K_crit / K_bound / p_rep / effect-bound curves",
    };

    for (std::size_t i = 0; i < commands.size(); ++i) {
        auto& command = commands[i];
        command.app = app.add_subcommand(command.name, descriptions[i]);
        for (auto& flag : command.flags) {
            flag.option = command.app->add_option("--" + flag.name, flag.value, flag.help);
        }
        const bool is_curve = command.name == "curve";
        command.app
            ->add_option("--emit", command.emit,
                         is_curve ? "csv or json; default csv" : "text or json; default text")
            ->check(is_curve ? CLI::IsMember({"csv", "json"}) : CLI::IsMember({"text", "json"}));
        if (is_curve) command.emit = "csv";
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    for (const auto& command : commands) {
        if (!command.app->parsed()) continue;
        sigrep::api::Params params;
        for (const auto& flag : command.flags) {
            if (flag.option->count() > 0) params[flag.name] = flag.value;
        }
        try {
            const auto record = sigrep::api::run(command.name, params);
            if (command.emit == "json") {
                std::cout << record.dump() << '\n';
            } else if (command.emit == "csv") {
                std::cout << sigrep::api::render_csv(record);
            } else {
                std::cout << sigrep::api::render_text(record);
            }
            return 0;
        } catch (const sigrep::api::ValidationError& e) {
            std::cerr << "error: validation\n";
            for (const auto& field : e.errors()) {
                std::cerr << "  " << field.field << ": " << field.message << '\n';
            }
            return 2;
        } catch (const sigrep::api::CapExceeded& e) {
            std::cerr << "error: undecided-at-cap\n  " << e.what() << '\n';
            return 3;
        }
    }
    return 2;
}
