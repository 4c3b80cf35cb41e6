// Initial-state preparation: the chain thermal state is decomposed into pure
// eigenstate components with Boltzmann weights; at finite temperature the
// component list is truncated to the shortest prefix holding a given fraction
// of the chain partition function, keeping degenerate blocks whole.
#pragma once

#include "hseom/exact_diag.hpp"
#include "hseom/spin_system.hpp"

#include <string>
#include <vector>

namespace hseom {

struct ThermalComponent {
    std::size_t eigen_index = 0; // position in the ascending chain spectrum
    double energy = 0.0;
    double weight = 0.0;            // exp(-beta*E)/Z over ALL states; 1/deg at beta=inf
    std::vector<cplx> chain_state;  // on the 2^N chain space
};

struct PreparationReport {
    std::size_t total_states = 0;
    std::size_t retained_states = 0;
    double retained_weight = 0.0; // sum of retained weights (<= 1)
    double ground_energy = 0.0;
    std::size_t ground_degeneracy = 0;
    double partition_function = 0.0; // Z relative to the ground energy shift
    double beta = 0.0;               // inf encoded by the caller
};

// All chain eigenvectors within tol of the minimum eigenvalue.
std::vector<std::vector<cplx>> ground_manifold(const EigenSystem& chain,
                                               double tol = 1e-9);

// Finite-beta component list under the retention rule (degenerate blocks are
// atomic).  Pass the full chain spectrum with eigenvectors.
std::vector<ThermalComponent> thermal_components(const EigenSystem& chain,
                                                 double beta,
                                                 double retention = 0.99);

// Number of states the retention rule keeps (no eigenvectors needed).
std::size_t retained_count(const std::vector<double>& energies_ascending,
                           double beta, double retention = 0.99);

// beta = inf variant: uniform weights over the ground manifold.
std::vector<ThermalComponent> ground_components(const EigenSystem& chain,
                                                double tol = 1e-9);

PreparationReport preparation_report(const EigenSystem& chain, double beta,
                                     double retention,
                                     const std::vector<ThermalComponent>& comps);

struct WeightedKet {
    std::vector<cplx> state; // on the full 2^(N+1) space
    double weight = 0.0;
};

// Product states (tls_state on site 0) x (chain component), with weights.
std::vector<WeightedKet> assemble_runs(const std::vector<ThermalComponent>& comps,
                                       std::span<const cplx> tls_state);

// (|+> + |->)/sqrt(2), the default probe preparation.
std::vector<cplx> default_tls_state();

} // namespace hseom
