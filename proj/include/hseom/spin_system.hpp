// Model builders for the probe qubit (site 0), the open-boundary XXZ chain
// (sites 1..N), their coupling, and the chain-thermostat coupling operator.
// Units: hbar = 1 and omega0 = 1; all frequencies in units of omega0.
#pragma once

#include "hseom/pauli.hpp"

#include <string>
#include <vector>

namespace hseom {

enum class CouplingKind { Diagonal, OffDiagonal, DirectTLS, None };

struct SpinSystemSpec {
    int n_spins = 1;          // N, chain length (0 allowed for DirectTLS/None)
    double delta = 1.0;       // anisotropy
    double j_coupling = 1.0;  // nearest-neighbour strength, units of omega0
    double omega0 = 1.0;      // fixed internally
    double epsilon0 = 1.0;    // TLS-spin coupling, units of omega0
    CouplingKind coupling_kind = CouplingKind::Diagonal;
    std::vector<int> coupled_sites; // j_mu, 1-based chain sites

    int n_sites() const { return n_spins + 1; } // TLS + chain
    std::size_t dim() const { return std::size_t{1} << n_sites(); }
    std::size_t chain_dim() const { return std::size_t{1} << n_spins; }
};

// Throws std::invalid_argument with a field-naming message on violation.
void validate(const SpinSystemSpec& spec);

// Center site (N+1)/2 for odd N, the convention used for localized coupling.
int center_site(int n_spins);

// H_S + H_S-SE + H_SE on the 2^(N+1)-dimensional space.
OperatorRep build_system_hamiltonian(const SpinSystemSpec& spec);

// Individual pieces (same full space); useful for commutator checks.
OperatorRep build_tls_hamiltonian(const SpinSystemSpec& spec);
OperatorRep build_chain_hamiltonian_full(const SpinSystemSpec& spec);
OperatorRep build_interaction_hamiltonian(const SpinSystemSpec& spec);

// Thermostat coupling V_SE: sum_k (sigma_k^x + sigma_k^y) over chain sites,
// or sigma_0^z for the DirectTLS validation mode.
OperatorRep build_coupling_operator(const SpinSystemSpec& spec);

// Chain-only operators on the 2^N space (chain site s -> register site s-1).
OperatorRep build_chain_hamiltonian(const SpinSystemSpec& spec);

// Single-site Pauli on the full space.
OperatorRep site_pauli(const SpinSystemSpec& spec, int site, PauliAxis axis);

// Total chain magnetization sum_k sigma_k^z on the full space.
OperatorRep chain_magnetization(const SpinSystemSpec& spec);

} // namespace hseom
