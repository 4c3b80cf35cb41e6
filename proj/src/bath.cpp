#include "hseom/bath.hpp"

#include "hseom/bessel.hpp"
#include "hseom/quadrature.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hseom {

namespace {

// x*coth(x) without the 0/0 at the origin.
double x_coth_x(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 + x2 / 3.0 - x2 * x2 / 45.0;
    }
    return x / std::tanh(x);
}

double coth_factor(const BathSpec& bath, double omega) {
    if (bath.zero_temperature()) return 1.0;
    const double x = 0.5 * bath.beta * omega;
    return x_coth_x(x) / x;
}

} // namespace

void validate(const BathSpec& bath) {
    if (bath.zeta < 0.0) throw std::invalid_argument("bath.zeta: must be >= 0");
    if (!(bath.nu > 0.0)) throw std::invalid_argument("bath.nu: must be > 0");
    if (!(bath.beta > 0.0)) throw std::invalid_argument("bath.beta: must be > 0 or inf");
}

double sdf_eval(const BathSpec& bath, double omega) {
    if (omega <= 0.0 || omega >= bath.nu) return 0.0;
    const double r = omega / bath.nu;
    return bath.zeta * omega * std::sqrt(1.0 - r * r);
}

CorrResult corr_exact(const BathSpec& bath, double t) {
    validate(bath);
    if (t < 0.0) throw std::invalid_argument("corr_exact: t < 0");
    if (bath.zeta == 0.0) return {cplx{0.0, 0.0}, 0.0};

    const double scale = bath.zeta * bath.nu * bath.nu;
    const double tol = 1e-14 * std::max(scale, scale / (bath.zero_temperature()
                                                            ? 1.0
                                                            : bath.beta * bath.nu));
    auto re_integrand = [&](double w) {
        return sdf_eval(bath, w) * coth_factor(bath, w) * std::cos(w * t);
    };
    auto im_integrand = [&](double w) { return sdf_eval(bath, w) * std::sin(w * t); };

    const auto re = integrate_adaptive(re_integrand, 0.0, bath.nu, tol, 1e-12, 4000);
    const auto im = integrate_adaptive(im_integrand, 0.0, bath.nu, tol, 1e-12, 4000);
    if (!re.converged || !im.converged) {
        std::ostringstream msg;
        msg << "corr_exact: quadrature did not converge at t=" << t
            << " (error estimates " << re.error_estimate << ", "
            << im.error_estimate << ")";
        throw std::runtime_error(msg.str());
    }
    return {cplx{re.value, -im.value},
            std::max(re.error_estimate, im.error_estimate)};
}

std::vector<double> derivative_matrix(double nu, int n_terms) {
    if (n_terms < 2) throw std::invalid_argument("derivative_matrix: K < 2");
    const auto K = static_cast<size_t>(n_terms);
    std::vector<double> eta(K * K, 0.0);
    eta[0 * K + 1] = -nu; // d/dt J_0(nu t) = -nu J_1(nu t)
    for (size_t k = 1; k < K; ++k) {
        eta[k * K + (k - 1)] = 0.5 * nu;
        if (k + 1 < K) eta[k * K + (k + 1)] = -0.5 * nu; // dropped at the K boundary
    }
    return eta;
}

BathExpansion bessel_coefficients(const BathSpec& bath, int n_terms) {
    validate(bath);
    if (n_terms < 4 || n_terms % 2 != 0)
        throw std::invalid_argument("bessel_coefficients: K must be even and >= 4");

    BathExpansion exp;
    exp.nu = bath.nu;
    exp.coeffs.assign(static_cast<size_t>(n_terms), cplx{0.0, 0.0});
    exp.eta = derivative_matrix(bath.nu, n_terms);
    if (bath.zeta == 0.0) return exp;

    const double pref = bath.zeta * bath.nu * bath.nu;
    const auto rule = gauss_legendre(4 * n_terms, 0.0, 0.5 * M_PI);

    for (int k = 0; k < n_terms; ++k) {
        const int m = k / 2;
        const double parity_sign = (m % 2 == 0) ? 1.0 : -1.0;
        double integral = 0.0;
        if (k % 2 == 0) {
            for (size_t q = 0; q < rule.nodes.size(); ++q) {
                const double th = rule.nodes[q];
                const double c = std::cos(th), s = std::sin(th);
                integral += rule.weights[q] * c * s * s *
                            coth_factor(bath, bath.nu * c) * std::cos(2 * m * th);
            }
            const double front = (m == 0) ? 1.0 : 2.0;
            exp.coeffs[static_cast<size_t>(k)] = cplx{front * parity_sign * pref * integral, 0.0};
        } else {
            for (size_t q = 0; q < rule.nodes.size(); ++q) {
                const double th = rule.nodes[q];
                const double c = std::cos(th), s = std::sin(th);
                integral += rule.weights[q] * c * s * s * std::cos((2 * m + 1) * th);
            }
            exp.coeffs[static_cast<size_t>(k)] = cplx{0.0, 2.0 * parity_sign * pref * integral};
        }
    }
    return exp;
}

cplx reconstruct_corr(const BathExpansion& exp, double t) {
    if (exp.coeffs.empty()) return {0.0, 0.0};
    const auto j = bessel_j_array(exp.nu * std::abs(t),
                                  static_cast<int>(exp.coeffs.size()) - 1);
    double re = 0.0, im = 0.0;
    for (size_t k = 0; k < exp.coeffs.size(); ++k) {
        if (k % 2 == 0)
            re += exp.coeffs[k].real() * j[k];
        else
            im -= exp.coeffs[k].imag() * j[k]; // alpha = alpha' - i*alpha''
    }
    return {re, im};
}

} // namespace hseom
