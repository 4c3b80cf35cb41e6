#include "hseom/thermal.hpp"

#include <cmath>
#include <stdexcept>

namespace hseom {

std::vector<std::vector<cplx>> ground_manifold(const EigenSystem& chain, double tol) {
    if (chain.values.empty() || chain.vectors.empty())
        throw std::invalid_argument("ground_manifold: need spectrum with vectors");
    const double range = std::max(chain.values.back() - chain.values.front(),
                                  std::abs(chain.values.back()));
    const double gap = tol * std::max(range, 1e-300);
    std::vector<std::vector<cplx>> out;
    for (std::size_t i = 0; i < chain.values.size(); ++i) {
        if (chain.values[i] - chain.values.front() > gap) break;
        out.push_back(chain.vectors[i]);
    }
    return out;
}

std::vector<ThermalComponent> ground_components(const EigenSystem& chain, double tol) {
    auto states = ground_manifold(chain, tol);
    std::vector<ThermalComponent> comps;
    comps.reserve(states.size());
    const double w = 1.0 / static_cast<double>(states.size());
    for (std::size_t i = 0; i < states.size(); ++i)
        comps.push_back({i, chain.values.front(), w, std::move(states[i])});
    return comps;
}

std::size_t retained_count(const std::vector<double>& energies_ascending,
                           double beta, double retention) {
    if (!(beta > 0.0) || std::isinf(beta))
        throw std::invalid_argument("retained_count: beta must be finite positive");
    if (retention <= 0.0 || retention > 1.0)
        throw std::invalid_argument("retained_count: retention in (0, 1]");
    // Weights relative to the ground energy; the shift cancels in ratios.
    const double e0 = energies_ascending.front();
    double z = 0.0;
    for (double e : energies_ascending) z += std::exp(-beta * (e - e0));

    const auto groups = group_degenerate(energies_ascending);
    double kept = 0.0;
    std::size_t count = 0;
    for (const auto& [start, n] : groups) {
        if (count > 0 && kept >= retention * z - 1e-12 * z) break;
        for (std::size_t i = start; i < start + n; ++i)
            kept += std::exp(-beta * (energies_ascending[i] - e0));
        count = start + n;
    }
    return count;
}

std::vector<ThermalComponent> thermal_components(const EigenSystem& chain,
                                                 double beta, double retention) {
    if (chain.vectors.empty())
        throw std::invalid_argument("thermal_components: need eigenvectors");
    const std::size_t count = retained_count(chain.values, beta, retention);

    const double e0 = chain.values.front();
    double z = 0.0;
    for (double e : chain.values) z += std::exp(-beta * (e - e0));

    std::vector<ThermalComponent> comps;
    comps.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        comps.push_back({i, chain.values[i],
                         std::exp(-beta * (chain.values[i] - e0)) / z,
                         chain.vectors[i]});
    return comps;
}

PreparationReport preparation_report(const EigenSystem& chain, double beta,
                                     double retention,
                                     const std::vector<ThermalComponent>& comps) {
    PreparationReport rep;
    rep.total_states = chain.values.size();
    rep.retained_states = comps.size();
    for (const auto& c : comps) rep.retained_weight += c.weight;
    rep.ground_energy = chain.values.empty() ? 0.0 : chain.values.front();
    const auto groups = group_degenerate(chain.values);
    rep.ground_degeneracy = groups.empty() ? 0 : groups.front().second;
    if (std::isfinite(beta)) {
        double z = 0.0;
        for (double e : chain.values) z += std::exp(-beta * (e - rep.ground_energy));
        rep.partition_function = z;
    }
    rep.beta = beta;
    rep.retained_weight = rep.retained_weight; // already normalized by Z
    (void)retention;
    return rep;
}

std::vector<cplx> default_tls_state() {
    const double r = 1.0 / std::sqrt(2.0);
    return {cplx{r, 0.0}, cplx{r, 0.0}};
}

std::vector<WeightedKet> assemble_runs(const std::vector<ThermalComponent>& comps,
                                       std::span<const cplx> tls_state) {
    if (tls_state.size() != 2)
        throw std::invalid_argument("assemble_runs: TLS state must have 2 amplitudes");
    double n2 = std::norm(tls_state[0]) + std::norm(tls_state[1]);
    if (std::abs(n2 - 1.0) > 1e-10)
        throw std::invalid_argument("assemble_runs: TLS state not normalized");

    std::vector<WeightedKet> runs;
    runs.reserve(comps.size());
    for (const auto& c : comps) {
        const std::size_t chain_dim = c.chain_state.size();
        WeightedKet run;
        run.weight = c.weight;
        run.state.resize(2 * chain_dim);
        for (std::size_t i = 0; i < chain_dim; ++i) {
            run.state[i] = tls_state[0] * c.chain_state[i];              // TLS up block
            run.state[chain_dim + i] = tls_state[1] * c.chain_state[i];  // TLS down block
        }
        runs.push_back(std::move(run));
    }
    return runs;
}

} // namespace hseom
