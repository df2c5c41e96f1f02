// Command-line front end: runs declarative scenario files describing
// single-species and two-species competition analyses.
//
//   popdyn <equilibria|basins|nullclines|simulate|verify>
//          --scenario <file> [--out <dir>] [--threads <n>] [--seed <u64>]
//
// Exit codes: 0 success, 1 error or failed property suite, 2 hypothesis
// violation, 3 classification budget exhausted.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "popdyn/commands.hpp"
#include "popdyn/planar_analysis.hpp"
#include "popdyn/version.hpp"

int main(int argc, char** argv) {
    CLI::App app{"discrete-time population maps with Allee effects: equilibria, basins, "
                 "nullclines, time series and property suites"};
    app.set_version_flag("--version", popdyn::kVersion);
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir = ".";
    int threads = 1;
    std::optional<uint64_t> seed;

    const char* names[] = {"equilibria", "basins", "nullclines", "simulate", "verify"};
    for (const char* name : names) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--scenario", scenario_path, "scenario file")->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--threads", threads, "worker threads for grid sweeps");
        sub->add_option("--seed", seed, "override the scenario seed");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        const popdyn::Scenario sc = popdyn::load_scenario(scenario_path);
        const std::string cmd = app.get_subcommands().front()->get_name();
        if (sc.get("command", "name") != cmd) {
            std::cerr << "error: scenario command is '" << sc.get("command", "name")
                      << "', invoked as '" << cmd << "'\n";
            return 1;
        }
        const auto res = popdyn::run_scenario(sc, out_dir, threads, seed);
        if (!res.message.empty())
            (res.exit_code == 0 ? std::cout : std::cerr) << res.message << "\n";
        return res.exit_code;
    } catch (const popdyn::HypothesisError& e) {
        std::cerr << "hypothesis violation: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
