#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "popdyn/scenario.hpp"

namespace popdyn {

struct CommandResult {
    int exit_code = 0;  // 0 ok, 1 error/failed suite, 2 hypothesis violation, 3 budget exhausted
    std::string message;
};

// Runs the scenario's command, writing outputs under out_dir. Throws
// ScenarioError for malformed scenarios; HypothesisError is converted to
// exit code 2, an exhausted classification budget to exit code 3.
CommandResult run_scenario(const Scenario& scenario, const std::string& out_dir, int threads,
                           std::optional<uint64_t> seed_override);

}  // namespace popdyn
