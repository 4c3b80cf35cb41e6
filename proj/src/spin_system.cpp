#include "hseom/spin_system.hpp"

#include <set>
#include <stdexcept>

namespace hseom {

namespace {

PauliString one(int site, PauliAxis axis, double coeff) {
    return PauliString{{{site, axis}}, cplx{coeff, 0.0}};
}

PauliString two(int s1, PauliAxis a1, int s2, PauliAxis a2, double coeff) {
    return PauliString{{{s1, a1}, {s2, a2}}, cplx{coeff, 0.0}};
}

} // namespace

void validate(const SpinSystemSpec& spec) {
    if (spec.n_spins < 0)
        throw std::invalid_argument("n_spins: must be >= 0");
    if (spec.n_spins == 0 && spec.coupling_kind != CouplingKind::DirectTLS &&
        spec.coupling_kind != CouplingKind::None)
        throw std::invalid_argument("n_spins: chain coupling requires n_spins >= 1");
    if (spec.n_sites() > 24)
        throw std::invalid_argument("n_spins: state space exceeds 2^24");
    const bool needs_sites = spec.coupling_kind == CouplingKind::Diagonal ||
                             spec.coupling_kind == CouplingKind::OffDiagonal;
    if (needs_sites && spec.coupled_sites.empty())
        throw std::invalid_argument("coupled_sites: must be nonempty for chain coupling");
    std::set<int> seen;
    for (int j : spec.coupled_sites) {
        if (j < 1 || j > spec.n_spins)
            throw std::invalid_argument("coupled_sites: index out of range [1, n_spins]");
        if (!seen.insert(j).second)
            throw std::invalid_argument("coupled_sites: duplicate site index");
    }
}

int center_site(int n_spins) { return (n_spins + 1) / 2; }

OperatorRep build_tls_hamiltonian(const SpinSystemSpec& spec) {
    validate(spec);
    OperatorRep op;
    op.n_sites = spec.n_sites();
    op.terms.push_back(one(0, PauliAxis::Z, -0.5 * spec.omega0));
    return op;
}

OperatorRep build_chain_hamiltonian_full(const SpinSystemSpec& spec) {
    validate(spec);
    OperatorRep op;
    op.n_sites = spec.n_sites();
    const double c = -0.5 * spec.j_coupling;
    for (int j = 1; j <= spec.n_spins - 1; ++j) {
        op.terms.push_back(two(j, PauliAxis::X, j + 1, PauliAxis::X, c));
        op.terms.push_back(two(j, PauliAxis::Y, j + 1, PauliAxis::Y, c));
        op.terms.push_back(two(j, PauliAxis::Z, j + 1, PauliAxis::Z, c * spec.delta));
    }
    return op;
}

OperatorRep build_interaction_hamiltonian(const SpinSystemSpec& spec) {
    validate(spec);
    OperatorRep op;
    op.n_sites = spec.n_sites();
    const double c = -0.5 * spec.epsilon0;
    switch (spec.coupling_kind) {
    case CouplingKind::Diagonal:
        for (int j : spec.coupled_sites)
            op.terms.push_back(two(0, PauliAxis::Z, j, PauliAxis::Z, c));
        break;
    case CouplingKind::OffDiagonal:
        for (int j : spec.coupled_sites) {
            op.terms.push_back(two(0, PauliAxis::X, j, PauliAxis::X, c));
            op.terms.push_back(two(0, PauliAxis::Y, j, PauliAxis::Y, c));
        }
        break;
    case CouplingKind::DirectTLS:
    case CouplingKind::None:
        break;
    }
    return op;
}

OperatorRep build_system_hamiltonian(const SpinSystemSpec& spec) {
    OperatorRep op = build_tls_hamiltonian(spec);
    for (auto& t : build_interaction_hamiltonian(spec).terms) op.terms.push_back(t);
    for (auto& t : build_chain_hamiltonian_full(spec).terms) op.terms.push_back(t);
    return op;
}

OperatorRep build_coupling_operator(const SpinSystemSpec& spec) {
    validate(spec);
    OperatorRep op;
    op.n_sites = spec.n_sites();
    if (spec.coupling_kind == CouplingKind::DirectTLS) {
        op.terms.push_back(one(0, PauliAxis::Z, 1.0));
        return op;
    }
    for (int k = 1; k <= spec.n_spins; ++k) {
        op.terms.push_back(one(k, PauliAxis::X, 1.0));
        op.terms.push_back(one(k, PauliAxis::Y, 1.0));
    }
    return op;
}

OperatorRep build_chain_hamiltonian(const SpinSystemSpec& spec) {
    validate(spec);
    if (spec.n_spins < 1)
        throw std::invalid_argument("build_chain_hamiltonian: n_spins < 1");
    OperatorRep op;
    op.n_sites = spec.n_spins;
    const double c = -0.5 * spec.j_coupling;
    for (int j = 0; j < spec.n_spins - 1; ++j) {
        op.terms.push_back(two(j, PauliAxis::X, j + 1, PauliAxis::X, c));
        op.terms.push_back(two(j, PauliAxis::Y, j + 1, PauliAxis::Y, c));
        op.terms.push_back(two(j, PauliAxis::Z, j + 1, PauliAxis::Z, c * spec.delta));
    }
    return op;
}

OperatorRep site_pauli(const SpinSystemSpec& spec, int site, PauliAxis axis) {
    if (site < 0 || site > spec.n_spins)
        throw std::invalid_argument("site_pauli: site out of range");
    OperatorRep op;
    op.n_sites = spec.n_sites();
    op.terms.push_back(one(site, axis, 1.0));
    return op;
}

OperatorRep chain_magnetization(const SpinSystemSpec& spec) {
    OperatorRep op;
    op.n_sites = spec.n_sites();
    for (int k = 1; k <= spec.n_spins; ++k)
        op.terms.push_back(one(k, PauliAxis::Z, 1.0));
    return op;
}

} // namespace hseom
