#include "hseom/bath.hpp"
#include "hseom/bessel.hpp"

#include <doctest.h>

#include <cmath>

using namespace hseom;

namespace {

BathSpec reference_bath(double beta) {
    BathSpec b;
    b.zeta = 0.01;
    b.nu = 2.0;
    b.beta = beta;
    return b;
}

constexpr double inf = std::numeric_limits<double>::infinity();

} // namespace

TEST_CASE("spectral density endpoints and maximum") {
    const auto b = reference_bath(inf);
    CHECK(sdf_eval(b, 0.0) == 0.0);
    CHECK(sdf_eval(b, b.nu) == 0.0);
    CHECK(sdf_eval(b, -1.0) == 0.0);
    CHECK(sdf_eval(b, 3.0) == 0.0);
    // maximum at nu/sqrt(2) with value zeta*nu/2
    const double peak = sdf_eval(b, b.nu / std::sqrt(2.0));
    CHECK(peak == doctest::Approx(0.5 * b.zeta * b.nu).epsilon(1e-12));
    CHECK(sdf_eval(b, b.nu / std::sqrt(2.0) + 1e-4) < peak);
    CHECK(sdf_eval(b, b.nu / std::sqrt(2.0) - 1e-4) < peak);
}

TEST_CASE("imaginary kernel part equals the closed form for any temperature") {
    for (double beta : {0.4, 2.0, inf}) {
        const auto b = reference_bath(beta);
        const double c13 = M_PI * b.zeta * b.nu * b.nu / 8.0;
        for (double t : {0.0, 0.3, 1.7, 6.0, 20.0}) {
            const auto a = corr_exact(b, t);
            const double closed =
                c13 * (bessel_j(1, b.nu * t) + bessel_j(3, b.nu * t));
            CHECK(std::abs(-a.value.imag() - closed) < 1e-10 * c13);
        }
    }
}

TEST_CASE("kernel is zero at zero coupling") {
    BathSpec b = reference_bath(2.0);
    b.zeta = 0.0;
    CHECK(corr_exact(b, 1.0).value == cplx{0.0, 0.0});
    const auto exp = bessel_coefficients(b, 8);
    for (const auto& c : exp.coeffs) CHECK(c == cplx{0.0, 0.0});
}

TEST_CASE("odd coefficients carry pi*zeta*nu^2/8 on k=1,3 only") {
    for (double beta : {2.0, inf}) {
        const auto exp = bessel_coefficients(reference_bath(beta), 16);
        const double c13 = M_PI * 0.01 * 4.0 / 8.0;
        CHECK(exp.coeffs[1].imag() == doctest::Approx(c13).epsilon(1e-12));
        CHECK(exp.coeffs[3].imag() == doctest::Approx(c13).epsilon(1e-12));
        for (int k = 5; k < 16; k += 2)
            CHECK(std::abs(exp.coeffs[static_cast<size_t>(k)].imag()) < 1e-14 * c13);
    }
}

TEST_CASE("parity: odd coefficients purely imaginary, even purely real") {
    const auto exp = bessel_coefficients(reference_bath(2.0), 24);
    for (int k = 0; k < 24; ++k) {
        if (k % 2 == 0)
            CHECK(exp.coeffs[static_cast<size_t>(k)].imag() == 0.0);
        else
            CHECK(exp.coeffs[static_cast<size_t>(k)].real() == 0.0);
    }
}

TEST_CASE("imaginary part is temperature independent") {
    const auto a = bessel_coefficients(reference_bath(0.7), 20);
    const auto b = bessel_coefficients(reference_bath(inf), 20);
    for (int k = 1; k < 20; k += 2)
        CHECK(std::abs(a.coeffs[static_cast<size_t>(k)].imag() -
                       b.coeffs[static_cast<size_t>(k)].imag()) < 1e-12);
}

TEST_CASE("high temperature limit of the even coefficients") {
    BathSpec b = reference_bath(0.005); // beta*nu = 0.01
    const auto exp = bessel_coefficients(b, 12);
    const double limit = M_PI * b.zeta * b.nu / (2.0 * b.beta);
    CHECK(exp.coeffs[0].real() == doctest::Approx(limit).epsilon(1e-4));
    CHECK(exp.coeffs[2].real() == doctest::Approx(limit).epsilon(1e-4));
    for (int k = 4; k < 12; k += 2)
        CHECK(std::abs(exp.coeffs[static_cast<size_t>(k)].real()) < 1e-3 * limit);
}

TEST_CASE("derivative matrix is the banded recurrence") {
    const auto eta = derivative_matrix(2.0, 8);
    auto at = [&](int k, int kp) { return eta[static_cast<size_t>(8 * k + kp)]; };
    CHECK(at(0, 1) == -2.0);
    for (int kp = 0; kp < 8; ++kp)
        if (kp != 1) CHECK(at(0, kp) == 0.0);
    CHECK(at(5, 4) == 1.0);
    CHECK(at(5, 6) == -1.0);
    CHECK(at(7, 6) == 1.0); // boundary row drops the out-of-range column
    // d J_0/dt at t=0 is zero because J_1(0) = 0
    double acc = 0.0;
    for (int kp = 0; kp < 8; ++kp) acc += at(0, kp) * bessel_j(kp, 0.0);
    CHECK(acc == 0.0);
}

TEST_CASE("derivative matrix differentiates the basis numerically") {
    const double nu = 2.0;
    const int K = 12;
    const auto eta = derivative_matrix(nu, K);
    const double t = 1.37, h = 1e-5;
    const auto j0 = bessel_j_array(nu * (t - h), K);
    const auto j1 = bessel_j_array(nu * (t + h), K);
    const auto jc = bessel_j_array(nu * t, K);
    for (int k = 0; k < K - 1; ++k) { // last row is truncated, skip it
        const double numeric = (j1[static_cast<size_t>(k)] - j0[static_cast<size_t>(k)]) / (2 * h);
        double banded = 0.0;
        for (int kp = 0; kp < K; ++kp)
            banded += eta[static_cast<size_t>(K * k + kp)] * jc[static_cast<size_t>(kp)];
        CHECK(numeric == doctest::Approx(banded).epsilon(1e-8).scale(1.0));
    }
}

TEST_CASE("reconstruction at t=0 returns c0") {
    const auto exp = bessel_coefficients(reference_bath(2.0), 12);
    CHECK(reconstruct_corr(exp, 0.0) == exp.coeffs[0]);
}

TEST_CASE("reconstruction matches the exact kernel imaginary part") {
    const auto b = reference_bath(inf);
    const auto exp = bessel_coefficients(b, 6);
    const double scale = std::abs(corr_exact(b, 0.0).value.real());
    for (double t : {0.5, 2.0, 9.0}) {
        const auto exact = corr_exact(b, t);
        const auto recon = reconstruct_corr(exp, t);
        CHECK(std::abs(exact.value.imag() - recon.imag()) < 1e-12 * scale);
    }
}

TEST_CASE("K=40 reconstruction residual over the production window") {
    const auto b = reference_bath(2.0);
    const auto exp = bessel_coefficients(b, 40);
    const double scale = std::abs(corr_exact(b, 0.0).value.real());
    double worst = 0.0;
    for (int i = 0; i <= 200; ++i) {
        const double t = 20.0 * i / 200.0;
        const auto d = reconstruct_corr(exp, t) - corr_exact(b, t).value;
        worst = std::max(worst, std::abs(d));
    }
    CHECK(worst < 1e-4 * scale);
}

TEST_CASE("truncation residual is non-increasing in K") {
    const auto b = reference_bath(2.0);
    double previous = 1e300;
    for (int K : {8, 16, 24, 32, 40}) {
        const auto exp = bessel_coefficients(b, K);
        double worst = 0.0;
        for (int i = 0; i <= 100; ++i) {
            const double t = 15.0 * i / 100.0;
            worst = std::max(worst,
                             std::abs(reconstruct_corr(exp, t) - corr_exact(b, t).value));
        }
        CHECK(worst <= previous * (1.0 + 1e-9) + 1e-15);
        previous = worst;
    }
}

TEST_CASE("bath validation") {
    BathSpec b;
    b.zeta = -1.0;
    CHECK_THROWS_AS(validate(b), std::invalid_argument);
    b.zeta = 0.1;
    b.nu = 0.0;
    CHECK_THROWS_AS(validate(b), std::invalid_argument);
    b.nu = 1.0;
    b.beta = -2.0;
    CHECK_THROWS_AS(validate(b), std::invalid_argument);
    CHECK_THROWS_AS(bessel_coefficients(reference_bath(2.0), 5), std::invalid_argument);
    CHECK_THROWS_AS(bessel_coefficients(reference_bath(2.0), 2), std::invalid_argument);
}
