// JSON experiment configuration.  All frequencies are in units of omega0 and
// times in units of 1/omega0; beta accepts a number or the string "inf".
#pragma once

#include "hseom/bath.hpp"
#include "hseom/observables.hpp"
#include "hseom/spin_system.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hseom {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MemoryBudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TwoTimeObservable {
    int site_j = 1;
    int site_k = 1;
    std::optional<SpectrumParams> spectra; // also emits the FDT residual
};

struct ThreeTimeObservable {
    int site_i = 1, site_j = 1, site_k = 1;
    double t_prime = 0.0;
    std::vector<double> sample_times;
};

struct CheckpointConfig {
    std::filesystem::path path;
    double stop_at = -1.0;    // > 0: write checkpoint at this time and stop
    std::size_t every_steps = 0; // > 0: periodic overwrite
};

struct ExperimentConfig {
    SpinSystemSpec system;
    BathSpec bath;
    int n_bessel = 40;
    int depth = 2;
    double dt = 2e-3;
    double t_max = 20.0;
    double record_dt = 0.05;
    double retention = 0.99;
    std::vector<cplx> tls_state; // defaults to (|+> + |->)/sqrt(2)
    bool emit_loschmidt = true;
    bool emit_population = true;
    std::vector<TwoTimeObservable> two_time;
    std::vector<ThreeTimeObservable> three_time;
    std::filesystem::path output_dir = "out";
    ExecPolicy policy = ExecPolicy::Parallel;
    int threads = 0; // 0: library default
    double memory_budget_gb = 8.0;
    std::optional<CheckpointConfig> checkpoint;

    std::string canonical_json;  // sorted-key dump of the parsed config
    std::string config_hash;     // FNV-1a 64 of canonical_json, hex

    int record_stride() const;
    std::size_t n_steps() const;
};

// Parse + cross-field validation; throws ConfigError naming the field.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& json_text);

// State-array footprint (phi+psi) in bytes, and with integrator workspace.
std::size_t state_bytes_estimate(const ExperimentConfig& cfg);
std::size_t total_bytes_estimate(const ExperimentConfig& cfg);

// Throws MemoryBudgetError with the computed estimate when over budget.
void check_memory_budget(const ExperimentConfig& cfg);

std::string fnv1a_hex(const std::string& data);

} // namespace hseom
