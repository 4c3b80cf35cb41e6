#include "hseom/config.hpp"

#include "hseom/hierarchy.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace hseom {

using nlohmann::json;

std::string fnv1a_hex(const std::string& data) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

int ExperimentConfig::record_stride() const {
    return static_cast<int>(std::llround(record_dt / dt));
}

std::size_t ExperimentConfig::n_steps() const {
    return static_cast<std::size_t>(std::llround(t_max / dt));
}

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& why) {
    throw ConfigError("config error at '" + field + "': " + why);
}

double require_number(const json& j, const std::string& field) {
    if (!j.contains(field)) fail(field, "missing");
    if (!j[field].is_number()) fail(field, "expected a number");
    return j[field].get<double>();
}

double number_or(const json& j, const std::string& field, double fallback) {
    if (!j.contains(field)) return fallback;
    if (!j[field].is_number()) fail(field, "expected a number");
    return j[field].get<double>();
}

CouplingKind parse_coupling(const std::string& s) {
    if (s == "diagonal") return CouplingKind::Diagonal;
    if (s == "offdiagonal") return CouplingKind::OffDiagonal;
    if (s == "direct_tls") return CouplingKind::DirectTLS;
    if (s == "none") return CouplingKind::None;
    fail("system.coupling", "unknown kind '" + s + "'");
}

} // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config error: invalid JSON: ") + e.what());
    }

    ExperimentConfig cfg;

    const auto& sys = j.contains("system") ? j["system"] : json::object();
    cfg.system.n_spins = static_cast<int>(number_or(sys, "n_spins", 1));
    cfg.system.delta = number_or(sys, "delta", 1.0);
    cfg.system.j_coupling = number_or(sys, "j_coupling", 1.0);
    cfg.system.epsilon0 = number_or(sys, "epsilon0", 1.0);
    cfg.system.coupling_kind =
        parse_coupling(sys.contains("coupling") ? sys["coupling"].get<std::string>()
                                                : "diagonal");
    if (sys.contains("coupled_sites")) {
        for (const auto& v : sys["coupled_sites"])
            cfg.system.coupled_sites.push_back(v.get<int>());
    } else if (cfg.system.coupling_kind == CouplingKind::Diagonal ||
               cfg.system.coupling_kind == CouplingKind::OffDiagonal) {
        cfg.system.coupled_sites.push_back(center_site(cfg.system.n_spins));
    }
    try {
        validate(cfg.system);
    } catch (const std::exception& e) {
        fail("system", e.what());
    }

    const auto& bath = j.contains("bath") ? j["bath"] : json::object();
    cfg.bath.zeta = number_or(bath, "zeta", 0.0);
    cfg.bath.nu = number_or(bath, "nu", 2.0);
    if (bath.contains("beta")) {
        if (bath["beta"].is_string()) {
            if (bath["beta"].get<std::string>() != "inf")
                fail("bath.beta", "expected a positive number or \"inf\"");
            cfg.bath.beta = std::numeric_limits<double>::infinity();
        } else {
            cfg.bath.beta = require_number(bath, "beta");
        }
    }
    cfg.n_bessel = static_cast<int>(number_or(bath, "n_bessel", 40));
    try {
        validate(cfg.bath);
    } catch (const std::exception& e) {
        fail("bath", e.what());
    }
    if (cfg.n_bessel < 4 || cfg.n_bessel % 2 != 0)
        fail("bath.n_bessel", "must be even and >= 4");

    const auto& hier = j.contains("hierarchy") ? j["hierarchy"] : json::object();
    cfg.depth = static_cast<int>(number_or(hier, "depth", 2));
    if (cfg.depth < 0) fail("hierarchy.depth", "must be >= 0");

    const auto& integ = j.contains("integration") ? j["integration"] : json::object();
    cfg.dt = number_or(integ, "dt", 2e-3);
    cfg.t_max = number_or(integ, "t_max", 20.0);
    cfg.record_dt = number_or(integ, "record_dt", 0.05);
    if (!(cfg.dt > 0.0)) fail("integration.dt", "must be > 0");
    if (!(cfg.t_max > 0.0)) fail("integration.t_max", "must be > 0");
    const double stride = cfg.record_dt / cfg.dt;
    if (std::abs(stride - std::llround(stride)) > 1e-9 || std::llround(stride) < 1)
        fail("integration.record_dt", "must be a positive integer multiple of dt");

    const auto& init = j.contains("initial") ? j["initial"] : json::object();
    cfg.retention = number_or(init, "retention", 0.99);
    if (cfg.retention <= 0.0 || cfg.retention > 1.0)
        fail("initial.retention", "must be in (0, 1]");
    if (init.contains("tls")) {
        const auto s = init["tls"].get<std::string>();
        if (s == "plus_superposition") {
            cfg.tls_state.clear();
        } else if (s == "up") {
            cfg.tls_state = {cplx{1.0, 0.0}, cplx{0.0, 0.0}};
        } else if (s == "down") {
            cfg.tls_state = {cplx{0.0, 0.0}, cplx{1.0, 0.0}};
        } else {
            fail("initial.tls", "expected plus_superposition | up | down");
        }
    }

    if (j.contains("observables")) {
        cfg.emit_loschmidt = false;
        cfg.emit_population = false;
        for (const auto& obs : j["observables"]) {
            const auto kind = obs.value("kind", std::string{});
            if (kind == "loschmidt") {
                cfg.emit_loschmidt = true;
            } else if (kind == "population") {
                cfg.emit_population = true;
            } else if (kind == "two_time") {
                TwoTimeObservable tt;
                tt.site_j = static_cast<int>(require_number(obs, "site_j"));
                tt.site_k = static_cast<int>(require_number(obs, "site_k"));
                if (tt.site_j < 1 || tt.site_j > cfg.system.n_spins ||
                    tt.site_k < 1 || tt.site_k > cfg.system.n_spins)
                    fail("observables.two_time", "site out of range [1, n_spins]");
                if (obs.contains("spectra")) {
                    SpectrumParams sp;
                    const auto& s = obs["spectra"];
                    sp.omega_min = number_or(s, "omega_min", 0.0);
                    sp.omega_max = number_or(s, "omega_max", 5.0);
                    sp.d_omega = number_or(s, "d_omega", 0.01);
                    sp.t_window = number_or(s, "t_window", -1.0);
                    tt.spectra = sp;
                }
                cfg.two_time.push_back(tt);
            } else if (kind == "three_time") {
                ThreeTimeObservable tt;
                tt.site_i = static_cast<int>(require_number(obs, "site_i"));
                tt.site_j = static_cast<int>(require_number(obs, "site_j"));
                tt.site_k = static_cast<int>(require_number(obs, "site_k"));
                tt.t_prime = require_number(obs, "t_prime");
                for (int s : {tt.site_i, tt.site_j, tt.site_k})
                    if (s < 1 || s > cfg.system.n_spins)
                        fail("observables.three_time", "site out of range [1, n_spins]");
                if (tt.t_prime < 0.0 || tt.t_prime > cfg.t_max)
                    fail("observables.three_time.t_prime", "must be within [0, t_max]");
                if (!obs.contains("sample_times")) fail("observables.three_time", "missing sample_times");
                for (const auto& v : obs["sample_times"]) {
                    const double tau = v.get<double>();
                    if (tau < 0.0 || tau > cfg.t_max)
                        fail("observables.three_time.sample_times", "outside [0, t_max]");
                    tt.sample_times.push_back(tau);
                }
                cfg.three_time.push_back(tt);
            } else {
                fail("observables.kind", "unknown kind '" + kind + "'");
            }
        }
    }

    const auto& out = j.contains("output") ? j["output"] : json::object();
    if (out.contains("directory")) cfg.output_dir = out["directory"].get<std::string>();

    const auto& run = j.contains("run") ? j["run"] : json::object();
    cfg.threads = static_cast<int>(number_or(run, "threads", 0));
    cfg.memory_budget_gb = number_or(run, "memory_budget_gb", 8.0);
    if (run.contains("engine")) {
        const auto s = run["engine"].get<std::string>();
        if (s == "parallel")
            cfg.policy = ExecPolicy::Parallel;
        else if (s == "serial")
            cfg.policy = ExecPolicy::Serial;
        else
            fail("run.engine", "expected parallel | serial");
    }
    if (run.contains("checkpoint")) {
        CheckpointConfig ck;
        const auto& c = run["checkpoint"];
        if (!c.contains("path")) fail("run.checkpoint.path", "missing");
        ck.path = c["path"].get<std::string>();
        ck.stop_at = number_or(c, "stop_at", -1.0);
        ck.every_steps = static_cast<std::size_t>(number_or(c, "every_steps", 0));
        if (ck.stop_at > cfg.t_max) fail("run.checkpoint.stop_at", "beyond t_max");
        if ((ck.stop_at > 0.0 || ck.every_steps > 0) &&
            (!cfg.two_time.empty() || !cfg.three_time.empty()))
            fail("run.checkpoint", "checkpointing covers the main dynamics run only; "
                                   "remove correlator observables");
        cfg.checkpoint = ck;
    }

    cfg.canonical_json = j.dump();
    cfg.config_hash = fnv1a_hex(cfg.canonical_json);
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("config error: cannot open " + path.string());
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

std::size_t state_bytes_estimate(const ExperimentConfig& cfg) {
    const std::size_t elems = HierarchySpace::count(cfg.n_bessel, cfg.depth);
    return elems * cfg.system.dim() * 2 * sizeof(cplx);
}

std::size_t total_bytes_estimate(const ExperimentConfig& cfg) {
    return 4 * state_bytes_estimate(cfg); // state + RK4 workspace sets
}

void check_memory_budget(const ExperimentConfig& cfg) {
    const double total_gb = static_cast<double>(total_bytes_estimate(cfg)) / 1e9;
    if (total_gb > cfg.memory_budget_gb) {
        std::ostringstream msg;
        msg << "memory budget refused: estimated "
            << static_cast<double>(state_bytes_estimate(cfg)) / 1e9
            << " GB of AWF state (" << total_gb
            << " GB with integrator workspace) exceeds the budget of "
            << cfg.memory_budget_gb << " GB";
        throw MemoryBudgetError(msg.str());
    }
}

} // namespace hseom
