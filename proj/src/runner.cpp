#include "hseom/runner.hpp"

#include "hseom/exact_diag.hpp"
#include "hseom/series_io.hpp"
#include "hseom/thermal.hpp"

#include <json.hpp>
#include <omp.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>

namespace hseom {

namespace {

using nlohmann::json;

struct Preparation {
    std::vector<WeightedKet> runs;
    PreparationReport report;
};

Preparation prepare_initial_states(const ExperimentConfig& cfg) {
    Preparation prep;
    const auto tls = cfg.tls_state.empty() ? default_tls_state() : cfg.tls_state;
    if (cfg.system.n_spins == 0) {
        prep.runs.push_back({tls, 1.0});
        prep.report.total_states = 1;
        prep.report.retained_states = 1;
        prep.report.retained_weight = 1.0;
        prep.report.ground_degeneracy = 1;
        prep.report.beta = cfg.bath.beta;
        return prep;
    }
    const auto chain = chain_spectrum(cfg.system, true);
    std::vector<ThermalComponent> comps;
    if (cfg.bath.zero_temperature())
        comps = ground_components(chain);
    else
        comps = thermal_components(chain, cfg.bath.beta, cfg.retention);
    prep.report = preparation_report(chain, cfg.bath.beta, cfg.retention, comps);
    prep.runs = assemble_runs(comps, tls);
    return prep;
}

void write_preparation_report(const ExperimentConfig& cfg, const Preparation& prep,
                              const std::filesystem::path& dir) {
    json rep;
    rep["total_states"] = prep.report.total_states;
    rep["retained_states"] = prep.report.retained_states;
    rep["retained_weight"] = prep.report.retained_weight;
    rep["ground_energy"] = prep.report.ground_energy;
    rep["ground_degeneracy"] = prep.report.ground_degeneracy;
    rep["partition_function_shifted"] = prep.report.partition_function;
    rep["beta"] = cfg.bath.zero_temperature() ? json("inf") : json(cfg.bath.beta);
    rep["retention"] = cfg.retention;
    rep["config_hash"] = cfg.config_hash;
    std::ofstream f(dir / "preparation.json", std::ios::binary);
    f << rep.dump(2) << '\n';
}

struct MainSeries {
    std::vector<double> grid;
    std::vector<std::array<cplx, 4>> raw; // weighted, unnormalized
};

MainSeries main_series_shell(const ExperimentConfig& cfg) {
    MainSeries m;
    const std::size_t n_rec = cfg.n_steps() / static_cast<std::size_t>(cfg.record_stride()) + 1;
    m.grid.resize(n_rec);
    for (std::size_t i = 0; i < n_rec; ++i)
        m.grid[i] = static_cast<double>(i * static_cast<std::size_t>(cfg.record_stride())) * cfg.dt;
    m.raw.assign(n_rec, std::array<cplx, 4>{});
    return m;
}

std::vector<ObservableSeries> raw_to_series(const MainSeries& m) {
    static const char* names[4] = {"raw_rho_uu", "raw_rho_ul", "raw_rho_lu", "raw_rho_ll"};
    std::vector<ObservableSeries> out(4);
    for (int e = 0; e < 4; ++e) {
        out[static_cast<std::size_t>(e)].kind = SeriesKind::CorrelatorRaw;
        out[static_cast<std::size_t>(e)].name = names[e];
        out[static_cast<std::size_t>(e)].grid = m.grid;
        for (const auto& r : m.raw)
            out[static_cast<std::size_t>(e)].values.push_back(r[static_cast<std::size_t>(e)]);
    }
    return out;
}

void series_to_raw(const std::vector<ObservableSeries>& s, MainSeries& m) {
    if (s.size() != 4 || s[0].grid != m.grid)
        throw std::runtime_error("checkpoint: recorded series do not match the config grid");
    for (std::size_t i = 0; i < m.raw.size(); ++i)
        for (int e = 0; e < 4; ++e)
            m.raw[i][static_cast<std::size_t>(e)] = s[static_cast<std::size_t>(e)].values[i];
}

// Propagates one thermal component, accumulating weighted raw densities at
// record steps.  Returns false if a stop_at checkpoint interrupted the run.
bool propagate_component(HseomEngine& engine, AWFSet& state, double weight,
                         const ExperimentConfig& cfg, MainSeries& m,
                         std::size_t start_step, uint32_t comp_index,
                         uint32_t comp_total) {
    const std::size_t n_steps = cfg.n_steps();
    const auto stride = static_cast<std::size_t>(cfg.record_stride());
    std::size_t stop_step = n_steps + 1;
    if (cfg.checkpoint && cfg.checkpoint->stop_at > 0.0) {
        stop_step = static_cast<std::size_t>(
            std::llround(cfg.checkpoint->stop_at / cfg.dt));
        if (std::abs(static_cast<double>(stop_step) * cfg.dt - cfg.checkpoint->stop_at) > 1e-9)
            throw ConfigError("config error at 'run.checkpoint.stop_at': not a step multiple");
    }

    auto write_ckp = [&](std::size_t step) {
        Checkpoint ckp;
        ckp.config_hash = std::stoull(cfg.config_hash, nullptr, 16);
        ckp.component_index = comp_index;
        ckp.component_total = comp_total;
        ckp.step = step;
        ckp.state = state;
        ckp.recorded = raw_to_series(m);
        write_checkpoint(ckp, cfg.checkpoint->path);
    };

    for (std::size_t step = start_step; step <= n_steps; ++step) {
        const bool already_recorded = step == start_step && start_step > 0;
        if (step % stride == 0 && !already_recorded) {
            const auto rho = engine.reduced_density_raw(state);
            auto& acc = m.raw[step / stride];
            for (int e = 0; e < 4; ++e)
                acc[static_cast<std::size_t>(e)] += weight * rho[static_cast<std::size_t>(e)];
        }
        if (cfg.checkpoint && step == stop_step && step > start_step) {
            write_ckp(step);
            return false;
        }
        if (cfg.checkpoint && cfg.checkpoint->every_steps > 0 && step > start_step &&
            step % cfg.checkpoint->every_steps == 0 && step < n_steps)
            write_ckp(step);
        if (step < n_steps) engine.step(state, cfg.dt);
    }
    return true;
}

void emit_outputs(const ExperimentConfig& cfg, const Preparation& prep,
                  const MainSeries& m, const std::filesystem::path& dir) {
    std::vector<std::string> files;

    // Normalized densities for echo/population; raw trace for solver health.
    std::vector<std::array<cplx, 4>> rho_n;
    rho_n.reserve(m.raw.size());
    ObservableSeries health, herm;
    health.kind = herm.kind = SeriesKind::TraceHealth;
    health.name = "trace_health";
    herm.name = "herm_residual";
    health.grid = herm.grid = m.grid;
    for (const auto& r : m.raw) {
        rho_n.push_back(normalize_density(r));
        health.values.push_back(r[0] + r[3]);
        herm.values.emplace_back(std::abs(r[1] - std::conj(r[2])), 0.0);
    }

    auto emit = [&](const ObservableSeries& s) {
        const auto path = dir / (s.name + ".csv");
        write_series_csv(s, path, cfg.config_hash);
        files.push_back(s.name + ".csv");
    };

    if (cfg.emit_loschmidt) emit(loschmidt(m.grid, rho_n));
    if (cfg.emit_population) {
        auto [up, down] = population(m.grid, rho_n);
        emit(up);
        emit(down);
    }
    emit(health);
    emit(herm);

    // Correlator observables re-propagate with insertions.
    const auto expansion = bessel_coefficients(cfg.bath, cfg.n_bessel);
    InsertionRunParams params;
    params.dt = cfg.dt;
    params.t_max = cfg.t_max;
    params.record_stride = cfg.record_stride();
    params.policy = cfg.policy;
    if (!cfg.two_time.empty() || !cfg.three_time.empty()) {
        HierarchySpace space(cfg.n_bessel, cfg.depth);
        for (const auto& tt : cfg.two_time) {
            auto result = two_time_correlator(cfg.system, space, expansion, prep.runs,
                                              tt.site_j, tt.site_k, params);
            const std::string tag =
                "_j" + std::to_string(tt.site_j) + "_k" + std::to_string(tt.site_k);
            result.fwd.name = "corr_fwd" + tag;
            result.rev.name = "corr_rev" + tag;
            emit(result.fwd);
            emit(result.rev);
            auto combined = combine_two_time(result.fwd, result.rev);
            combined.a_series.name = "corr_A" + tag;
            combined.c_series.name = "corr_C" + tag;
            combined.a_series.meta["hermiticity_residual"] =
                format_double(combined.hermiticity_residual);
            emit(combined.a_series);
            emit(combined.c_series);
            if (tt.spectra) {
                auto c_spec = spectrum(result.fwd, SeriesKind::SpectrumC, *tt.spectra);
                auto a_spec = spectrum(result.fwd, SeriesKind::SpectrumA, *tt.spectra);
                c_spec.name = "spectrum_C" + tag;
                a_spec.name = "spectrum_A" + tag;
                emit(c_spec);
                emit(a_spec);
                auto resid = fdt_ratio(c_spec, a_spec, cfg.bath.beta,
                                       tt.spectra->omega_min);
                resid.name = "fdt_residual" + tag;
                emit(resid);
            }
        }
        for (const auto& tt : cfg.three_time) {
            auto d = three_time_correlator(cfg.system, space, expansion, prep.runs,
                                           tt.site_i, tt.site_j, tt.site_k,
                                           tt.t_prime, tt.sample_times, params);
            d.name = "corr_D_i" + std::to_string(tt.site_i) + "_j" +
                     std::to_string(tt.site_j) + "_k" + std::to_string(tt.site_k);
            emit(d);
        }
    }

    write_preparation_report(cfg, prep, dir);
    files.push_back("preparation.json");

    json manifest;
    manifest["config_hash"] = cfg.config_hash;
    manifest["version"] = version_string;
    manifest["files"] = files;
    const auto now = std::chrono::system_clock::now();
    manifest["finished_unix_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch())
            .count();
    std::ofstream f(dir / "manifest.json", std::ios::binary);
    f << manifest.dump(2) << '\n';
}

int run_main(const ExperimentConfig& cfg, std::size_t start_component,
             std::size_t start_step, const AWFSet* resumed_state,
             const std::vector<ObservableSeries>* resumed_series) {
    if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
    check_memory_budget(cfg);

    std::filesystem::create_directories(cfg.output_dir);
    const Preparation prep = prepare_initial_states(cfg);

    const auto expansion = bessel_coefficients(cfg.bath, cfg.n_bessel);
    HierarchySpace space(cfg.n_bessel, cfg.depth);
    HseomEngine engine(space, build_system_hamiltonian(cfg.system),
                       build_coupling_operator(cfg.system), expansion, cfg.policy);

    MainSeries m = main_series_shell(cfg);
    if (resumed_series) series_to_raw(*resumed_series, m);

    const auto comp_total = static_cast<uint32_t>(prep.runs.size());
    for (std::size_t c = start_component; c < prep.runs.size(); ++c) {
        AWFSet state;
        std::size_t from_step = 0;
        if (resumed_state && c == start_component) {
            state = *resumed_state;
            from_step = start_step;
        } else {
            state = engine.init_awfs(prep.runs[c].state);
        }
        const bool completed =
            propagate_component(engine, state, prep.runs[c].weight, cfg, m, from_step,
                                static_cast<uint32_t>(c), comp_total);
        if (!completed) {
            std::cout << "checkpoint written to " << cfg.checkpoint->path.string()
                      << " at t=" << state.time << " (component " << c + 1 << "/"
                      << comp_total << ")\n";
            return 0;
        }
    }

    emit_outputs(cfg, prep, m, cfg.output_dir);
    return 0;
}

} // namespace

int run_experiment(const ExperimentConfig& cfg) {
    return run_main(cfg, 0, 0, nullptr, nullptr);
}

int resume_experiment(const ExperimentConfig& cfg, const std::filesystem::path& ckp_path) {
    const Checkpoint ckp = read_checkpoint(ckp_path);
    const uint64_t expect = std::stoull(cfg.config_hash, nullptr, 16);
    if (ckp.config_hash != expect) {
        std::ostringstream msg;
        msg << "config error: checkpoint hash mismatch (checkpoint "
            << std::hex << ckp.config_hash << ", config " << expect << ")";
        throw ConfigError(msg.str());
    }
    ExperimentConfig continued = cfg;
    if (continued.checkpoint) continued.checkpoint->stop_at = -1.0; // run to completion
    return run_main(continued, ckp.component_index, ckp.step, &ckp.state,
                    &ckp.recorded);
}

} // namespace hseom
