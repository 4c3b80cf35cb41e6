// Thermostat kernel: Ohmic spectral density with a circular cutoff, its exact
// two-time correlation alpha(t) = alpha'(t) - i*alpha''(t) by quadrature, and
// the Bessel-basis expansion used by the propagator.
//
// Expansion storage convention: coeffs[k] is real for even k (cosine part,
// the coefficients of alpha' on J_k) and purely imaginary for odd k, with
// Im coeffs[k] holding the sine-part coefficients of alpha'' on J_k.  The
// kernel itself is alpha(t) = sum_even Re(c_k) J_k(nu t)
//                           - i * sum_odd Im(c_k) J_k(nu t),
// so the equation-of-motion coefficient on the ket branch is conj(coeffs[k])
// and on the bra branch coeffs[k] itself.
#pragma once

#include "hseom/pauli.hpp"

#include <limits>
#include <vector>

namespace hseom {

struct BathSpec {
    double zeta = 0.0; // coupling strength (hbar*zeta in units of omega0)
    double nu = 2.0;   // cutoff frequency
    double beta = std::numeric_limits<double>::infinity(); // inverse temperature

    bool zero_temperature() const { return std::isinf(beta); }
};

void validate(const BathSpec& bath);

// J(omega) = zeta * omega * sqrt(1 - (omega/nu)^2) on [0, nu], 0 outside.
double sdf_eval(const BathSpec& bath, double omega);

struct CorrResult {
    cplx value;
    double error_estimate = 0.0;
};

// alpha(t) by adaptive quadrature over [0, nu]; coth -> 1 at beta = inf.
// Throws std::runtime_error on non-convergence (message carries the estimate).
CorrResult corr_exact(const BathSpec& bath, double t);

struct BathExpansion {
    double nu = 0.0;
    std::vector<cplx> coeffs;        // c_0 .. c_{K-1}, parity split as above
    std::vector<double> eta;         // K x K derivative matrix, row major
    int n_terms() const { return static_cast<int>(coeffs.size()); }

    double eta_at(int k, int kp) const {
        return eta[static_cast<size_t>(k) * coeffs.size() + static_cast<size_t>(kp)];
    }
};

// Expansion coefficients via the Jacobi-Anger substitution omega = nu*cos(theta)
// and Gauss-Legendre quadrature in theta (4K nodes).  K >= 4 and even.
BathExpansion bessel_coefficients(const BathSpec& bath, int n_terms);

// Banded derivative matrix: d/dt J_k(nu t) in the truncated J_0..J_{K-1} basis.
std::vector<double> derivative_matrix(double nu, int n_terms);

// sum over the expansion evaluated at time t (cos/sin split as documented).
cplx reconstruct_corr(const BathExpansion& exp, double t);

} // namespace hseom
