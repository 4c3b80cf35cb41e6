// Forward propagation of the paired ket/bra auxiliary wavefunctions.
//
// For every multi-index n the coupled equations are
//   d/dt phi_n = -i H phi_n + sum_{k,k'} eta_{k,k'} n_k phi_{n-e_k+e_k'}
//                - i V [ sum_k a_k phi_{n+e_k} + n_0 phi_{n-e_0} ]
//   d/dt psi_n = -i H psi_n - sum_{k,k'} eta_{k,k'} (n_k+1) psi_{n+e_k-e_k'}
//                - i V [ sum_k b_k psi_{n-e_k} + (n_0+1) psi_{n+e_0} ]
// with a_k = conj(coeffs[k]) (the kernel-expansion coefficient) and
// b_k = coeffs[k] its conjugate; references outside the truncated hierarchy
// are zero, and the basis-at-zero factors collapse onto the k = 0 mode.
// The bra equation is the adjoint of the reversed-contour generator; the
// minus on its ladder term makes the trace exactly conserved up to
// truncation-boundary terms and reproduces the Gaussian dephasing exponent.
//
// Integration is fixed-step classical RK4.  Within one derivative evaluation
// every hierarchy element is independent, which is where the OpenMP
// parallelism lives; a serial per-Pauli-string reference path is kept for
// validation and benchmarking.
#pragma once

#include "hseom/bath.hpp"
#include "hseom/hierarchy.hpp"
#include "hseom/pauli.hpp"

#include <array>
#include <span>
#include <vector>

namespace hseom {

struct AWFSet {
    std::size_t n_elems = 0;
    std::size_t dim = 0;
    std::vector<cplx> phi;
    std::vector<cplx> psi;
    double time = 0.0;

    std::span<cplx> phi_at(std::size_t id) {
        return {phi.data() + id * dim, dim};
    }
    std::span<const cplx> phi_at(std::size_t id) const {
        return {phi.data() + id * dim, dim};
    }
    std::span<cplx> psi_at(std::size_t id) {
        return {psi.data() + id * dim, dim};
    }
    std::span<const cplx> psi_at(std::size_t id) const {
        return {psi.data() + id * dim, dim};
    }
};

enum class Branch { Ket, Bra };

enum class ExecPolicy { Serial, Parallel };

class HseomEngine {
public:
    HseomEngine(const HierarchySpace& space, OperatorRep hamiltonian,
                OperatorRep coupling, const BathExpansion& expansion,
                ExecPolicy policy = ExecPolicy::Parallel);

    // Root AWFs set to the (normalized) initial ket, everything else zero.
    AWFSet init_awfs(std::span<const cplx> initial_ket) const;

    // Derivative of the whole AWF set; policy-selected path.
    void rhs(const AWFSet& in, AWFSet& out) const;

    // Straightforward serial evaluation kept as the testing reference.  With
    // sum_all_basis_at_zero the collapsed k = 0 sums run over every k instead.
    void rhs_reference(const AWFSet& in, AWFSet& out,
                       bool sum_all_basis_at_zero = false) const;

    // One RK4 step; throws std::runtime_error on amplitude overflow.
    void step(AWFSet& state, double dt);

    // Scheduled operator applied to one branch (the bra branch receives the
    // adjoint, i.e. rho -> rho * op).
    void insert(AWFSet& state, Branch branch, const OperatorRep& op) const;

    // tr rho = sum_n <psi_n | phi_n>
    cplx trace(const AWFSet& state) const;

    // Raw (unnormalized) 2x2 reduced density matrix, row major.
    std::array<cplx, 4> reduced_density_raw(const AWFSet& state) const;

    // sum_n <psi_n | op | phi_n>, the multi-time expectation contract.
    cplx expectation(const AWFSet& state, const OperatorRep& op) const;

    // Dense rho over the full spin space (tests; small dims only).
    std::vector<cplx> full_density(const AWFSet& state) const;

    const HierarchySpace& space() const { return space_; }
    std::size_t dim() const { return dim_; }
    double overflow_threshold = 1e6;

private:
    void rhs_parallel(const AWFSet& in, AWFSet& out) const;

    const HierarchySpace& space_;
    OperatorRep h_op_, v_op_;
    CsrOperator h_csr_, v_csr_;
    std::vector<cplx> coeff_ket_, coeff_bra_;
    struct EtaEntry {
        int k, kp;
        double value;
    };
    std::vector<EtaEntry> eta_entries_;
    std::size_t dim_;
    ExecPolicy policy_;

    // RK4 workspace, grown on first use.
    AWFSet deriv_, stage_, accum_;
};

// Normalized 2x2 density from the raw one (divides by the complex trace).
std::array<cplx, 4> normalize_density(const std::array<cplx, 4>& raw);

} // namespace hseom
