// Independent brute-force references used by the test suites.  Everything in
// here works by dense spectral decomposition or direct quadrature and shares
// no code with the hierarchy propagator or the Bessel expansion.
#pragma once

#include "hseom/bath.hpp"
#include "hseom/exact_diag.hpp"
#include "hseom/pauli.hpp"
#include "hseom/thermal.hpp"

#include <vector>

namespace hseom {

// Dense e^{-iHt} via full diagonalization; dim guarded at 2^8.
class SpectralPropagator {
public:
    explicit SpectralPropagator(const OperatorRep& h);

    std::vector<cplx> evolve(std::span<const cplx> v, double t) const;

    // v <- U^dag(t) op U(t) v (Heisenberg-picture application).
    std::vector<cplx> apply_heisenberg(const OperatorRep& op, double t,
                                       std::span<const cplx> v) const;

    std::size_t dim() const { return dim_; }

private:
    std::size_t dim_;
    std::vector<double> evals_;
    std::vector<cplx> evecs_; // column major
};

// |psi(t)> for each requested time.
std::vector<std::vector<cplx>> schrodinger_reference(const OperatorRep& h,
                                                     std::span<const cplx> psi0,
                                                     const std::vector<double>& times);

// Normalized 2x2 reduced density of the weighted pure-state mixture evolved
// unitarily (the zero-coupling reference for echo and populations).
std::vector<std::array<cplx, 4>>
reduced_density_reference(const OperatorRep& h, const std::vector<WeightedKet>& comps,
                          const std::vector<double>& times);

// tr{ O_m(t_m) ... O_1(t_1) rho0 } for the weighted mixture; the (op, time)
// list is given in application order (rightmost/earliest first).
std::vector<cplx> heisenberg_correlator_reference(
    const OperatorRep& h, const std::vector<WeightedKet>& comps,
    const std::vector<std::pair<const OperatorRep*, double>>& ops_in_order);

// Two-time series over a grid: fwd = <op_j(t) op_k(0)>, rev = reversed order.
std::vector<cplx> two_time_reference(const OperatorRep& h,
                                     const std::vector<WeightedKet>& comps,
                                     const OperatorRep& op_j, const OperatorRep& op_k,
                                     const std::vector<double>& times, bool reversed);

// Exact pure-dephasing coherence ratio exp(-Gamma(t)) for a probe qubit with
// sigma_z coupling to the harmonic bath, Gamma(t) = 4 int_0^t (t-s) alpha'(s) ds.
std::vector<double> independent_boson_coherence(const BathSpec& bath,
                                                const std::vector<double>& times);

} // namespace hseom
