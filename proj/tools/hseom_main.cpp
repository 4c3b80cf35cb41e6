// Command-line front end: run / resume / bath-table / validate.
// Exit codes: 0 ok, 2 config error, 3 numeric failure, 4 resource refusal.

#include "hseom/bath.hpp"
#include "hseom/config.hpp"
#include "hseom/runner.hpp"
#include "hseom/series_io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_numeric = 3;
constexpr int exit_resource = 4;

hseom::ExperimentConfig load_with_overrides(const std::string& config_path,
                                            const std::string& output_dir,
                                            int threads) {
    auto cfg = hseom::load_config(config_path);
    if (!output_dir.empty()) cfg.output_dir = output_dir;
    if (threads > 0) cfg.threads = threads;
    return cfg;
}

int cmd_bath_table(const std::string& config_path, const std::string& output_dir,
                   double t_max, int n_points) {
    const auto cfg = hseom::load_config(config_path);
    const auto exp = hseom::bessel_coefficients(cfg.bath, cfg.n_bessel);
    std::filesystem::create_directories(output_dir);

    {
        std::ofstream f(std::filesystem::path(output_dir) / "coefficients.csv",
                        std::ios::binary);
        f << "k,re,im\n";
        for (int k = 0; k < exp.n_terms(); ++k)
            f << k << ',' << hseom::format_double(exp.coeffs[static_cast<size_t>(k)].real())
              << ',' << hseom::format_double(exp.coeffs[static_cast<size_t>(k)].imag())
              << '\n';
    }
    {
        std::ofstream f(std::filesystem::path(output_dir) / "kernel_residual.csv",
                        std::ios::binary);
        f << "t,re_exact,im_exact,re_reconstruction,im_reconstruction\n";
        for (int i = 0; i <= n_points; ++i) {
            const double t = t_max * i / n_points;
            const auto exact = hseom::corr_exact(cfg.bath, t).value;
            const auto recon = hseom::reconstruct_corr(exp, t);
            f << hseom::format_double(t) << ',' << hseom::format_double(exact.real())
              << ',' << hseom::format_double(exact.imag()) << ','
              << hseom::format_double(recon.real()) << ','
              << hseom::format_double(recon.imag()) << '\n';
        }
    }
    std::cout << "wrote coefficients.csv and kernel_residual.csv to " << output_dir
              << "\n";
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Open quantum dynamics of a probe qubit coupled to an XXZ chain "
                 "with a harmonic-bath thermostat (hierarchical wavefunction method)"};
    app.require_subcommand(1);

    std::string config_path, output_dir, checkpoint_path;
    int threads = 0;
    double stop_at = -1.0;
    double table_tmax = 20.0;
    int table_points = 400;

    auto* run = app.add_subcommand("run", "Run an experiment from a JSON config");
    run->add_option("--config", config_path, "Config file")->required();
    run->add_option("--output", output_dir, "Override the output directory");
    run->add_option("--threads", threads, "Worker threads (0 = default)");
    run->add_option("--stop-at", stop_at,
                    "Write the configured checkpoint at this time and stop");

    auto* resume = app.add_subcommand("resume", "Continue from a checkpoint");
    resume->add_option("--config", config_path, "Config file")->required();
    resume->add_option("--checkpoint", checkpoint_path, "Checkpoint file")->required();
    resume->add_option("--output", output_dir, "Override the output directory");
    resume->add_option("--threads", threads, "Worker threads (0 = default)");

    auto* table = app.add_subcommand("bath-table",
                                     "Dump expansion coefficients and kernel residual");
    table->add_option("--config", config_path, "Config file")->required();
    table->add_option("--output", output_dir, "Output directory")->required();
    table->add_option("--t-max", table_tmax, "Residual scan end time");
    table->add_option("--points", table_points, "Residual scan points");

    auto* validate = app.add_subcommand("validate", "Lint a config and print estimates");
    validate->add_option("--config", config_path, "Config file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            auto cfg = load_with_overrides(config_path, output_dir, threads);
            if (stop_at > 0.0) {
                if (!cfg.checkpoint)
                    throw hseom::ConfigError(
                        "config error: --stop-at requires run.checkpoint in the config");
                cfg.checkpoint->stop_at = stop_at;
            }
            return hseom::run_experiment(cfg);
        }
        if (resume->parsed()) {
            auto cfg = load_with_overrides(config_path, output_dir, threads);
            return hseom::resume_experiment(cfg, checkpoint_path);
        }
        if (table->parsed()) return cmd_bath_table(config_path, output_dir, table_tmax,
                                                   table_points);
        if (validate->parsed()) {
            const auto cfg = hseom::load_config(config_path);
            hseom::check_memory_budget(cfg);
            std::cout << "config ok (hash " << cfg.config_hash << ")\n"
                      << "state estimate: "
                      << static_cast<double>(hseom::state_bytes_estimate(cfg)) / 1e9
                      << " GB (" << static_cast<double>(hseom::total_bytes_estimate(cfg)) / 1e9
                      << " GB with integrator workspace)\n";
            return exit_ok;
        }
    } catch (const hseom::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return exit_config;
    } catch (const hseom::MemoryBudgetError& e) {
        std::cerr << e.what() << "\n";
        return exit_resource;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return exit_numeric;
    }
    return exit_ok;
}
