#pragma once

#include <json.hpp>

#include "ssinfer/config.hpp"

namespace ssinfer {

struct RunResult {
    nlohmann::json manifest;
    int exit_code = 0;
};

/// Executes the tagged experiment end to end and writes all artifacts plus
/// manifest.json under cfg.out_dir. Module errors are recorded in the
/// manifest and turn the exit code nonzero.
RunResult run_experiment(const ExperimentConfig& cfg);

}  // namespace ssinfer
