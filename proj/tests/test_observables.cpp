#include "hseom/observables.hpp"

#include "hseom/oracles.hpp"
#include "hseom/series_io.hpp"

#include <doctest.h>

#include <cmath>

using namespace hseom;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

std::vector<std::array<cplx, 4>> constant_density(std::size_t n,
                                                  const std::array<cplx, 4>& rho) {
    return std::vector<std::array<cplx, 4>>(n, rho);
}

std::vector<double> grid(std::size_t n, double dt) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = static_cast<double>(i) * dt;
    return g;
}

} // namespace

TEST_CASE("echo starts at one and rejects vanishing initial coherence") {
    const auto g = grid(5, 0.1);
    auto rho = constant_density(5, {cplx{0.5, 0}, cplx{0.5, 0}, cplx{0.5, 0}, cplx{0.5, 0}});
    const auto echo = loschmidt(g, rho);
    CHECK(echo.values[0] == cplx{1.0, 0.0});

    rho[0][1] = 0.0;
    CHECK_THROWS_AS(loschmidt(g, rho), std::invalid_argument);
}

TEST_CASE("decoupled probe keeps unit echo") {
    SpinSystemSpec spec;
    spec.n_spins = 2;
    spec.epsilon0 = 0.0;
    spec.coupling_kind = CouplingKind::Diagonal;
    spec.coupled_sites = {1};
    const auto h = build_system_hamiltonian(spec);
    const auto runs = assemble_runs(ground_components(chain_spectrum(spec)),
                                    default_tls_state());
    const auto g = grid(21, 0.25);
    const auto rho = reduced_density_reference(h, runs, g);
    const auto echo = loschmidt(g, rho);
    for (const auto& v : echo.values) CHECK(std::abs(v - cplx{1, 0}) < 1e-10);
}

TEST_CASE("population starts at one half") {
    const auto g = grid(3, 0.05);
    const auto rho = constant_density(3, {cplx{0.5, 0}, cplx{0.5, 0}, cplx{0.5, 0}, cplx{0.5, 0}});
    const auto [up, down] = population(g, rho);
    CHECK(up.values[0].real() == doctest::Approx(0.5));
    CHECK(down.values[0].real() == doctest::Approx(0.5));
}

TEST_CASE("sine spectrum vanishes at zero frequency") {
    ObservableSeries s;
    s.grid = grid(101, 0.1);
    for (double t : s.grid) s.values.emplace_back(std::cos(t), -std::sin(t));
    SpectrumParams p;
    p.omega_max = 2.0;
    const auto a = spectrum(s, SeriesKind::SpectrumA, p);
    CHECK(a.grid.front() == 0.0);
    CHECK(std::abs(a.values.front()) < 1e-14);
}

TEST_CASE("cosine test signal peaks at its frequency with the truncated-transform value") {
    // s(t) = cos(w1 t): C[w1] = 2 * T/2 = T up to the truncation ripple
    const double w1 = 1.0, T = 60.0, dt = 0.01;
    ObservableSeries s;
    const auto n = static_cast<std::size_t>(T / dt) + 1;
    s.grid = grid(n, dt);
    for (double t : s.grid) s.values.emplace_back(std::cos(w1 * t), 0.0);
    SpectrumParams p;
    p.omega_min = 0.5;
    p.omega_max = 1.5;
    p.d_omega = 0.005;
    const auto c = spectrum(s, SeriesKind::SpectrumC, p);
    std::size_t best = 0;
    for (std::size_t i = 0; i < c.values.size(); ++i)
        if (c.values[i].real() > c.values[best].real()) best = i;
    CHECK(c.grid[best] == doctest::Approx(w1).epsilon(1e-9));
    // exact truncated integral at w = w1: T + sin(2 w1 T)/(2 w1)
    const double exact = T + std::sin(2 * w1 * T) / (2 * w1);
    CHECK(c.values[best].real() == doctest::Approx(exact).epsilon(1e-3));
}

TEST_CASE("harmonic-bath kernel satisfies the fluctuation-dissipation relation") {
    // C and A spectra built from the quadrature kernel must cancel in the
    // residual; this fixes the sign convention of the A transform.
    BathSpec bath;
    bath.zeta = 0.01;
    bath.nu = 2.0;
    for (double beta : {2.0, inf}) {
        bath.beta = beta;
        ObservableSeries s;
        const double T = 50.0, dt = 0.02;
        const auto n = static_cast<std::size_t>(T / dt) + 1;
        s.grid = grid(n, dt);
        for (double t : s.grid) s.values.push_back(corr_exact(bath, t).value);
        SpectrumParams p;
        p.omega_min = 0.3;
        p.omega_max = 1.9;
        p.d_omega = 0.01;
        const auto c = spectrum(s, SeriesKind::SpectrumC, p);
        const auto a = spectrum(s, SeriesKind::SpectrumA, p);
        const auto resid = fdt_ratio(c, a, beta, 0.5);
        double peak = 0.0, worst = 0.0;
        for (std::size_t i = 0; i < resid.grid.size(); ++i) {
            if (resid.grid[i] < 0.5 || resid.grid[i] > 1.8) continue;
            worst = std::max(worst, std::abs(resid.values[i]));
        }
        for (std::size_t i = 0; i < c.grid.size(); ++i)
            if (c.grid[i] >= 0.5 && c.grid[i] <= 1.8)
                peak = std::max(peak, std::abs(c.values[i]));
        CHECK(worst < 0.02 * peak);
    }
}

TEST_CASE("a zero A-spectrum makes the residual equal the C-spectrum") {
    ObservableSeries c, a;
    c.grid = a.grid = {0.5, 1.0, 1.5};
    c.values = {cplx{1, 0}, cplx{2, 0}, cplx{3, 0}};
    a.values = {cplx{0, 0}, cplx{0, 0}, cplx{0, 0}};
    const auto resid = fdt_ratio(c, a, 2.0, 0.0);
    for (std::size_t i = 0; i < 3; ++i) CHECK(resid.values[i] == c.values[i]);
}

TEST_CASE("two-time combination: A(0)=0, C(0)=1, hermiticity metric") {
    ObservableSeries fwd, rev;
    fwd.grid = rev.grid = {0.0, 1.0};
    fwd.values = {cplx{1, 0}, cplx{0.3, 0.4}};
    rev.values = {cplx{1, 0}, cplx{0.3, -0.4}};
    const auto combined = combine_two_time(fwd, rev);
    CHECK(combined.a_series.values[0] == cplx{0, 0});
    CHECK(combined.c_series.values[0] == cplx{1, 0});
    CHECK(combined.a_series.values[1] == cplx{0.0, 0.8});
    CHECK(combined.hermiticity_residual < 1e-15);
}

TEST_CASE("hierarchy-path correlators match the spectral oracle at zero coupling") {
    SpinSystemSpec spec;
    spec.n_spins = 3;
    spec.delta = 1.0;
    spec.coupling_kind = CouplingKind::Diagonal;
    spec.coupled_sites = {2};
    BathSpec bath;
    bath.zeta = 0.0;
    bath.nu = 2.0;
    bath.beta = inf;
    const auto expansion = bessel_coefficients(bath, 4);
    HierarchySpace space(4, 2);
    const auto runs = assemble_runs(ground_components(chain_spectrum(spec)),
                                    default_tls_state());

    InsertionRunParams params;
    params.dt = 1e-3;
    params.t_max = 3.0;
    params.record_stride = 250;
    const auto result = two_time_correlator(spec, space, expansion, runs, 2, 2, params);

    const auto h = build_system_hamiltonian(spec);
    const auto sz = site_pauli(spec, 2, PauliAxis::Z);
    const auto fwd_ref = two_time_reference(h, runs, sz, sz, result.fwd.grid, false);
    const auto rev_ref = two_time_reference(h, runs, sz, sz, result.rev.grid, true);
    for (std::size_t i = 0; i < fwd_ref.size(); ++i) {
        CHECK(std::abs(result.fwd.values[i] - fwd_ref[i]) < 1e-8);
        CHECK(std::abs(result.rev.values[i] - rev_ref[i]) < 1e-8);
    }
}

TEST_CASE("three-time series: identity insertions give one, oracle agreement") {
    SpinSystemSpec spec;
    spec.n_spins = 3;
    spec.delta = 1.0;
    spec.epsilon0 = 1.0;
    spec.coupling_kind = CouplingKind::Diagonal;
    spec.coupled_sites = {2};
    BathSpec bath;
    bath.zeta = 0.0;
    bath.nu = 2.0;
    bath.beta = inf;
    const auto expansion = bessel_coefficients(bath, 4);
    HierarchySpace space(4, 2);
    const auto runs = assemble_runs(ground_components(chain_spectrum(spec)),
                                    default_tls_state());

    InsertionRunParams params;
    params.dt = 1e-3;
    params.t_max = 3.0;
    params.record_stride = 100;
    const double t_prime = 1.5;
    const std::vector<double> taus{0.5, 1.0, 1.5, 2.0, 2.5};
    const auto d = three_time_correlator(spec, space, expansion, runs, 1, 3, 2,
                                         t_prime, taus, params);

    const auto h = build_system_hamiltonian(spec);
    const auto s1 = site_pauli(spec, 1, PauliAxis::Z);
    const auto s3 = site_pauli(spec, 3, PauliAxis::Z);
    const auto s2 = site_pauli(spec, 2, PauliAxis::Z);
    for (std::size_t i = 0; i < taus.size(); ++i) {
        // order as written: sigma_1(t') sigma_3(tau) sigma_2(0)
        const auto ref = heisenberg_correlator_reference(
            h, runs, {{&s2, 0.0}, {&s3, taus[i]}, {&s1, t_prime}});
        CHECK(std::abs(d.values[i] - ref[0]) < 1e-8);
    }
}

TEST_CASE("csv rendering uses shortest round-trip decimals") {
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(1.0 / 3.0) == "0.3333333333333333");
    ObservableSeries s;
    s.kind = SeriesKind::LoschmidtEcho;
    s.grid = {0.0, 0.05};
    s.values = {cplx{1, 0}, cplx{0.875, 0}};
    CHECK(series_to_csv(s) == "t,re,im\n0,1,0\n0.05,0.875,0\n");
}
