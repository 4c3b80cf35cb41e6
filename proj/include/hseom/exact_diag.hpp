#pragma once

#include "hseom/pauli.hpp"
#include "hseom/spin_system.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace hseom {

struct EigenSystem {
    std::vector<double> values;       // ascending
    std::vector<std::vector<cplx>> vectors; // orthonormal, full-dimension; empty if not requested
};

// Maps a basis index to an integer sector label; eigenstates within a sector
// never mix.  Used to block-diagonalize conserved-magnetization Hamiltonians.
using SectorFn = std::function<int(std::size_t)>;

struct DiagOptions {
    bool compute_vectors = true;
    std::optional<SectorFn> sector; // verified against the operator, not trusted
    double leakage_tol = 1e-12;
};

// Full spectrum of a Hermitian Pauli-sum operator.  dim must match op and is
// guarded at 2^14.  With a sector function the operator is built and solved
// block by block (cross-sector matrix elements are checked to vanish).
EigenSystem exact_diagonalize(const OperatorRep& op, std::size_t dim,
                              const DiagOptions& opts = {});

// Spectrum of the chain-only XXZ Hamiltonian using total-magnetization
// sectors (always conserved for the chain).
EigenSystem chain_spectrum(const SpinSystemSpec& spec, bool compute_vectors = true);

// Sector label helpers: popcount-based magnetization of all bits / chain bits.
SectorFn total_z_sector(int n_sites);
SectorFn chain_z_sector(int n_sites); // ignores the TLS bit (site 0, MSB)

// Groups ascending eigenvalues into degenerate clusters: relative gap below
// tol * spectral range starts no new group.  Returns (start, count) pairs.
std::vector<std::pair<std::size_t, std::size_t>>
group_degenerate(const std::vector<double>& values, double tol = 1e-9);

} // namespace hseom
