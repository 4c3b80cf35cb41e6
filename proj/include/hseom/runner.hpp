// Batch experiment orchestration: thermal-component runs, observable
// assembly, output tree (CSV series + JSON reports + manifest), checkpointing.
#pragma once

#include "hseom/checkpoint.hpp"
#include "hseom/config.hpp"

#include <filesystem>

namespace hseom {

inline constexpr const char* version_string = "0.1.0";

// Executes the configured experiment.  Returns 0 on success; a run stopped at
// a configured checkpoint time also returns 0 after writing the checkpoint.
// Throws ConfigError / MemoryBudgetError / std::runtime_error for the CLI to
// map onto exit codes.
int run_experiment(const ExperimentConfig& cfg);

// Continues a checkpointed run to completion; the emitted outputs are
// byte-identical to an uninterrupted run of the same config.
int resume_experiment(const ExperimentConfig& cfg, const std::filesystem::path& ckp);

} // namespace hseom
