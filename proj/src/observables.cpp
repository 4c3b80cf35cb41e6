#include "hseom/observables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hseom {

ObservableSeries loschmidt(const std::vector<double>& t,
                           const std::vector<std::array<cplx, 4>>& rho) {
    if (t.size() != rho.size() || t.empty())
        throw std::invalid_argument("loschmidt: grid/series mismatch");
    const double ref = std::norm(rho.front()[1]);
    if (ref <= 0.0)
        throw std::invalid_argument("loschmidt: vanishing initial coherence");
    ObservableSeries s;
    s.kind = SeriesKind::LoschmidtEcho;
    s.name = "loschmidt";
    s.grid = t;
    s.values.reserve(t.size());
    for (const auto& r : rho) s.values.emplace_back(std::norm(r[1]) / ref, 0.0);
    return s;
}

std::pair<ObservableSeries, ObservableSeries>
population(const std::vector<double>& t,
           const std::vector<std::array<cplx, 4>>& rho) {
    if (t.size() != rho.size())
        throw std::invalid_argument("population: grid/series mismatch");
    ObservableSeries up, down;
    up.kind = down.kind = SeriesKind::Population;
    up.name = "population_plus";
    down.name = "population_minus";
    up.grid = down.grid = t;
    for (const auto& r : rho) {
        up.values.emplace_back(r[0].real(), r[0].imag());
        down.values.emplace_back(r[3].real(), r[3].imag());
    }
    return {std::move(up), std::move(down)};
}

ObservableSeries spectrum(const ObservableSeries& fwd_series, SeriesKind kind,
                          const SpectrumParams& params) {
    if (kind != SeriesKind::SpectrumC && kind != SeriesKind::SpectrumA)
        throw std::invalid_argument("spectrum: kind must be SpectrumC or SpectrumA");
    const auto& t = fwd_series.grid;
    if (t.size() < 2) throw std::invalid_argument("spectrum: series too short");
    const double dt = t[1] - t[0];
    for (std::size_t i = 1; i < t.size(); ++i)
        if (std::abs((t[i] - t[i - 1]) - dt) > 1e-9 * std::max(1.0, dt))
            throw std::invalid_argument("spectrum: non-uniform time grid");

    std::size_t n = t.size();
    if (params.t_window > 0.0) {
        n = 0;
        while (n < t.size() && t[n] <= params.t_window + 1e-12) ++n;
        if (n < 2) throw std::invalid_argument("spectrum: window shorter than grid step");
    }

    ObservableSeries out;
    out.kind = kind;
    out.name = kind == SeriesKind::SpectrumC ? "spectrum_C" : "spectrum_A";
    out.meta = fwd_series.meta;
    for (double w = params.omega_min; w <= params.omega_max + 1e-12;
         w += params.d_omega) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double weight = (i == 0 || i == n - 1) ? 0.5 : 1.0;
            if (kind == SeriesKind::SpectrumC)
                acc += weight * std::cos(w * t[i]) * fwd_series.values[i].real();
            else
                acc += weight * std::sin(w * t[i]) * (-fwd_series.values[i].imag());
        }
        acc *= dt;
        out.grid.push_back(w);
        out.values.emplace_back((kind == SeriesKind::SpectrumC ? 2.0 : 4.0) * acc, 0.0);
    }
    return out;
}

ObservableSeries fdt_ratio(const ObservableSeries& c_spec,
                           const ObservableSeries& a_spec, double beta,
                           double omega_floor) {
    if (c_spec.grid.size() != a_spec.grid.size())
        throw std::invalid_argument("fdt_ratio: grid mismatch");
    ObservableSeries out;
    out.kind = SeriesKind::FDTRatio;
    out.name = "fdt_residual";
    for (std::size_t i = 0; i < c_spec.grid.size(); ++i) {
        const double w = c_spec.grid[i];
        if (std::abs(w - a_spec.grid[i]) > 1e-12)
            throw std::invalid_argument("fdt_ratio: grid mismatch");
        if (w < omega_floor) continue;
        double coth = 1.0;
        if (std::isfinite(beta)) {
            const double x = 0.5 * beta * w;
            if (x < 1e-12) continue; // excluded band
            coth = 1.0 / std::tanh(x);
        }
        out.grid.push_back(w);
        out.values.push_back(c_spec.values[i] - 0.5 * coth * a_spec.values[i]);
    }
    return out;
}

TwoTimeCombined combine_two_time(const ObservableSeries& fwd,
                                 const ObservableSeries& rev) {
    if (fwd.grid.size() != rev.grid.size())
        throw std::invalid_argument("combine_two_time: grid mismatch");
    TwoTimeCombined out;
    out.a_series.kind = SeriesKind::CorrelatorA;
    out.a_series.name = "corr_A";
    out.c_series.kind = SeriesKind::CorrelatorC;
    out.c_series.name = "corr_C";
    out.a_series.grid = out.c_series.grid = fwd.grid;
    out.a_series.meta = out.c_series.meta = fwd.meta;
    for (std::size_t i = 0; i < fwd.values.size(); ++i) {
        out.a_series.values.push_back(fwd.values[i] - rev.values[i]);
        out.c_series.values.push_back(0.5 * (fwd.values[i] + rev.values[i]));
        out.hermiticity_residual =
            std::max(out.hermiticity_residual,
                     std::abs(fwd.values[i] - std::conj(rev.values[i])));
    }
    return out;
}

namespace {

struct Insertion {
    std::size_t step;
    Branch branch;
    const OperatorRep* op;
};

// Propagates one component, applying insertions at exact step boundaries and
// recording sum_n <psi|obs|phi> every record_stride steps (insertions fire
// before the record at equal times).
std::vector<cplx> propagate_and_record(HseomEngine& engine, AWFSet state,
                                       std::vector<Insertion> inserts,
                                       const OperatorRep& obs,
                                       std::size_t n_steps, double dt,
                                       int record_stride,
                                       std::vector<double>* grid_out) {
    std::sort(inserts.begin(), inserts.end(),
              [](const Insertion& a, const Insertion& b) { return a.step < b.step; });
    std::vector<cplx> recorded;
    std::size_t next_insert = 0;
    for (std::size_t step = 0; step <= n_steps; ++step) {
        while (next_insert < inserts.size() && inserts[next_insert].step == step) {
            engine.insert(state, inserts[next_insert].branch, *inserts[next_insert].op);
            ++next_insert;
        }
        if (step % static_cast<std::size_t>(record_stride) == 0) {
            recorded.push_back(engine.expectation(state, obs));
            if (grid_out) grid_out->push_back(static_cast<double>(step) * dt);
        }
        if (step < n_steps) engine.step(state, dt);
    }
    return recorded;
}

std::size_t step_of(double t, double dt) {
    const auto s = static_cast<std::size_t>(std::llround(t / dt));
    if (std::abs(static_cast<double>(s) * dt - t) > 1e-9)
        throw std::invalid_argument("insertion time is not a step multiple");
    return s;
}

} // namespace

TwoTimeResult two_time_correlator(const SpinSystemSpec& spec,
                                  const HierarchySpace& space,
                                  const BathExpansion& expansion,
                                  const std::vector<WeightedKet>& runs,
                                  int site_j, int site_k,
                                  const InsertionRunParams& params) {
    if (site_j < 1 || site_j > spec.n_spins || site_k < 1 || site_k > spec.n_spins)
        throw std::invalid_argument("two_time_correlator: site out of range");
    const OperatorRep h = build_system_hamiltonian(spec);
    const OperatorRep v = build_coupling_operator(spec);
    const OperatorRep op_j = site_pauli(spec, site_j, PauliAxis::Z);
    const OperatorRep op_k = site_pauli(spec, site_k, PauliAxis::Z);
    HseomEngine engine(space, h, v, expansion, params.policy);

    const auto n_steps = static_cast<std::size_t>(std::llround(params.t_max / params.dt));
    TwoTimeResult out;
    for (const Branch branch : {Branch::Ket, Branch::Bra}) {
        std::vector<double> grid;
        std::vector<cplx> total;
        for (const auto& run : runs) {
            std::vector<double> g;
            auto rec = propagate_and_record(engine, engine.init_awfs(run.state),
                                            {{0, branch, &op_k}}, op_j, n_steps,
                                            params.dt, params.record_stride, &g);
            if (total.empty()) {
                total.assign(rec.size(), cplx{0.0, 0.0});
                grid = g;
            }
            for (std::size_t i = 0; i < rec.size(); ++i) total[i] += run.weight * rec[i];
        }
        ObservableSeries s;
        s.kind = SeriesKind::CorrelatorRaw;
        s.name = branch == Branch::Ket ? "corr_fwd" : "corr_rev";
        s.grid = std::move(grid);
        s.values = std::move(total);
        s.meta["site_j"] = std::to_string(site_j);
        s.meta["site_k"] = std::to_string(site_k);
        (branch == Branch::Ket ? out.fwd : out.rev) = std::move(s);
    }
    return out;
}

ObservableSeries three_time_correlator(const SpinSystemSpec& spec,
                                       const HierarchySpace& space,
                                       const BathExpansion& expansion,
                                       const std::vector<WeightedKet>& runs,
                                       int site_i, int site_j, int site_k,
                                       double t_prime,
                                       const std::vector<double>& sample_times,
                                       const InsertionRunParams& params) {
    for (int s : {site_i, site_j, site_k})
        if (s < 1 || s > spec.n_spins)
            throw std::invalid_argument("three_time_correlator: site out of range");
    const OperatorRep h = build_system_hamiltonian(spec);
    const OperatorRep v = build_coupling_operator(spec);
    const OperatorRep op_i = site_pauli(spec, site_i, PauliAxis::Z);
    const OperatorRep op_j = site_pauli(spec, site_j, PauliAxis::Z);
    const OperatorRep op_k = site_pauli(spec, site_k, PauliAxis::Z);
    HseomEngine engine(space, h, v, expansion, params.policy);

    const std::size_t tp_step = step_of(t_prime, params.dt);

    std::vector<double> early, late;
    for (double tau : sample_times)
        (tau <= t_prime + 1e-12 ? early : late).push_back(tau);
    std::sort(early.begin(), early.end());
    std::sort(late.begin(), late.end());

    ObservableSeries out;
    out.kind = SeriesKind::CorrelatorD;
    out.name = "corr_D";
    out.meta["site_i"] = std::to_string(site_i);
    out.meta["site_j"] = std::to_string(site_j);
    out.meta["site_k"] = std::to_string(site_k);
    out.meta["t_prime"] = std::to_string(t_prime);

    // tau <= t': one propagation per sample; evaluate sigma_i at t'.
    for (double tau : early) {
        const std::size_t tau_step = step_of(tau, params.dt);
        cplx val{0.0, 0.0};
        for (const auto& run : runs) {
            auto rec = propagate_and_record(
                engine, engine.init_awfs(run.state),
                {{0, Branch::Ket, &op_k}, {tau_step, Branch::Ket, &op_j}}, op_i,
                tp_step, params.dt, static_cast<int>(std::max<std::size_t>(tp_step, 1)),
                nullptr);
            val += run.weight * rec.back();
        }
        out.grid.push_back(tau);
        out.values.push_back(val);
    }

    // tau > t': one propagation scanning all samples; sigma_i inserted at t'.
    if (!late.empty()) {
        const std::size_t t_end = step_of(late.back(), params.dt);
        std::vector<double> grid;
        std::vector<cplx> total;
        for (const auto& run : runs) {
            std::vector<double> g;
            auto rec = propagate_and_record(
                engine, engine.init_awfs(run.state),
                {{0, Branch::Ket, &op_k}, {tp_step, Branch::Ket, &op_i}}, op_j,
                t_end, params.dt, 1, &g);
            if (total.empty()) {
                total.assign(rec.size(), cplx{0.0, 0.0});
                grid = g;
            }
            for (std::size_t i = 0; i < rec.size(); ++i) total[i] += run.weight * rec[i];
        }
        for (double tau : late) {
            const std::size_t idx = step_of(tau, params.dt);
            out.grid.push_back(tau);
            out.values.push_back(total[idx]);
        }
    }
    return out;
}

} // namespace hseom
