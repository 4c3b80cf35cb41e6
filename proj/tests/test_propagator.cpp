#include "hseom/propagator.hpp"

#include "hseom/oracles.hpp"
#include "hseom/thermal.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace hseom;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

struct Setup {
    SpinSystemSpec spec;
    BathSpec bath;
    OperatorRep h, v;
    BathExpansion expansion;
    HierarchySpace space;

    Setup(int n_spins, double delta, CouplingKind kind, double zeta, double beta,
          int n_bessel, int depth)
        : space(n_bessel, depth) {
        spec.n_spins = n_spins;
        spec.delta = delta;
        spec.coupling_kind = kind;
        if (kind == CouplingKind::Diagonal || kind == CouplingKind::OffDiagonal)
            spec.coupled_sites = {center_site(n_spins)};
        bath.zeta = zeta;
        bath.nu = 2.0;
        bath.beta = beta;
        h = build_system_hamiltonian(spec);
        v = build_coupling_operator(spec);
        expansion = bessel_coefficients(bath, n_bessel);
    }
};

std::vector<cplx> plus_superposition_state(const SpinSystemSpec& spec) {
    // TLS (|+>+|->)/sqrt(2), chain all spins up.
    std::vector<cplx> state(spec.dim(), cplx{0, 0});
    const double r = 1.0 / std::sqrt(2.0);
    state[0] = r;
    state[spec.chain_dim()] = r;
    return state;
}

void randomize(AWFSet& s, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> dist;
    for (auto& a : s.phi) a = {dist(rng), dist(rng)};
    for (auto& a : s.psi) a = {dist(rng), dist(rng)};
}

double max_diff(const AWFSet& a, const AWFSet& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.phi.size(); ++i)
        worst = std::max(worst, std::abs(a.phi[i] - b.phi[i]));
    for (std::size_t i = 0; i < a.psi.size(); ++i)
        worst = std::max(worst, std::abs(a.psi[i] - b.psi[i]));
    return worst;
}

} // namespace

TEST_CASE("initial AWFs: root only, unit trace, superposition initial density") {
    Setup s(2, 1.0, CouplingKind::Diagonal, 0.01, 2.0, 8, 2);
    HseomEngine engine(s.space, s.h, s.v, s.expansion);
    const auto state = engine.init_awfs(plus_superposition_state(s.spec));

    double root_norm = 0.0;
    for (std::size_t i = 0; i < state.dim; ++i) root_norm += std::norm(state.phi[i]);
    CHECK(root_norm == doctest::Approx(1.0).epsilon(1e-14));
    for (std::size_t i = state.dim; i < state.phi.size(); ++i) {
        CHECK(state.phi[i] == cplx{0, 0});
        CHECK(state.psi[i] == cplx{0, 0});
    }
    CHECK(std::abs(engine.trace(state) - cplx{1, 0}) < 1e-14);

    const auto rho = normalize_density(engine.reduced_density_raw(state));
    for (const auto& e : rho) CHECK(std::abs(e - cplx{0.5, 0.0}) < 1e-14);

    std::vector<cplx> bad(s.spec.dim(), cplx{0, 0});
    bad[0] = 0.9;
    CHECK_THROWS_AS(engine.init_awfs(bad), std::invalid_argument);
}

TEST_CASE("zero coupling: root derivative is pure Schroedinger, bra hierarchy dark") {
    Setup s(2, 1.0, CouplingKind::Diagonal, 0.0, 2.0, 8, 2);
    HseomEngine engine(s.space, s.h, s.v, s.expansion);
    auto state = engine.init_awfs(plus_superposition_state(s.spec));
    AWFSet out;
    engine.rhs(state, out);

    // The root feels only -iH: its upward couplings carry c_k = 0 and its
    // occupation factors vanish.
    std::vector<cplx> expect(state.dim, cplx{0, 0});
    apply_add(s.h, cplx{0, -1}, state.phi_at(0), expect);
    for (std::size_t i = 0; i < state.dim; ++i) {
        CHECK(std::abs(out.phi[i] - expect[i]) < 1e-15);
        CHECK(std::abs(out.psi[i] - expect[i]) < 1e-15);
    }
    // The bra-branch hierarchy has no source at zero coupling (its downward
    // coefficients are conj(c_k) = 0), so every mixed product <psi_n|phi_n>
    // beyond the root vanishes and observables stay exactly unitary.  The
    // ket branch does acquire content through the occupation-weighted k=0
    // ladder term, which carries no coupling coefficient.
    for (std::size_t i = state.dim; i < out.psi.size(); ++i)
        CHECK(out.psi[i] == cplx{0, 0});
    for (int step = 0; step < 50; ++step) engine.step(state, 1e-3);
    for (std::size_t i = state.dim; i < state.psi.size(); ++i)
        CHECK(std::abs(state.psi[i]) == 0.0);
    CHECK(std::abs(engine.trace(state) - cplx{1, 0}) < 1e-12);
}

TEST_CASE("parallel and serial reference derivatives agree") {
    Setup s(3, -1.3, CouplingKind::OffDiagonal, 0.05, 2.0, 8, 2);
    HseomEngine engine(s.space, s.h, s.v, s.expansion, ExecPolicy::Parallel);
    auto state = engine.init_awfs(plus_superposition_state(s.spec));
    randomize(state, 99);
    AWFSet a, b;
    engine.rhs(state, a);
    engine.rhs_reference(state, b);
    double scale = 0.0;
    for (const auto& x : a.phi) scale = std::max(scale, std::abs(x));
    CHECK(max_diff(a, b) < 1e-13 * scale);
}

TEST_CASE("basis-at-zero collapse: summing all modes is bit-identical to k=0 only") {
    Setup s(2, 0.7, CouplingKind::Diagonal, 0.03, 2.0, 6, 2);
    HseomEngine engine(s.space, s.h, s.v, s.expansion);
    auto state = engine.init_awfs(plus_superposition_state(s.spec));
    randomize(state, 123);
    AWFSet a, b;
    engine.rhs_reference(state, a, false);
    engine.rhs_reference(state, b, true);
    for (std::size_t i = 0; i < a.phi.size(); ++i) {
        CHECK(a.phi[i] == b.phi[i]);
        CHECK(a.psi[i] == b.psi[i]);
    }
}

TEST_CASE("zero Hamiltonian and coupling: a step leaves the AWFs bit-identical") {
    OperatorRep h;
    h.n_sites = 2;
    OperatorRep v;
    v.n_sites = 2;
    BathSpec bath;
    bath.zeta = 0.0;
    const auto expansion = bessel_coefficients(bath, 4);
    HierarchySpace space(4, 1);
    HseomEngine engine(space, h, v, expansion);
    std::vector<cplx> ket(4, cplx{0, 0});
    ket[1] = 1.0;
    auto state = engine.init_awfs(ket);
    const auto before = state;
    engine.step(state, 0.1);
    CHECK(max_diff(state, before) == 0.0);
}

TEST_CASE("zero-coupling propagation matches the spectral oracle at 1e-10") {
    Setup s(2, 1.0, CouplingKind::Diagonal, 0.0, inf, 4, 2);
    HseomEngine engine(s.space, s.h, s.v, s.expansion);
    const auto psi0 = plus_superposition_state(s.spec);
    auto state = engine.init_awfs(psi0);
    const double dt = 1e-3;
    for (int i = 0; i < 1000; ++i) engine.step(state, dt);

    const auto ref = schrodinger_reference(s.h, psi0, {1.0})[0];
    for (std::size_t i = 0; i < ref.size(); ++i)
        CHECK(std::abs(state.phi[i] - ref[i]) < 1e-10);
}

TEST_CASE("rk4 error drops ~16x when dt is halved") {
    Setup s(2, 1.0, CouplingKind::Diagonal, 0.0, inf, 4, 0);
    HseomEngine engine(s.space, s.h, s.v, s.expansion);
    const auto psi0 = plus_superposition_state(s.spec);
    const auto ref = schrodinger_reference(s.h, psi0, {2.0})[0];

    auto run_error = [&](double dt) {
        auto state = engine.init_awfs(psi0);
        const auto n = static_cast<int>(std::llround(2.0 / dt));
        for (int i = 0; i < n; ++i) engine.step(state, dt);
        double worst = 0.0;
        for (std::size_t i = 0; i < ref.size(); ++i)
            worst = std::max(worst, std::abs(state.phi[i] - ref[i]));
        return worst;
    };
    const double e1 = run_error(0.04);
    const double e2 = run_error(0.02);
    CHECK(e1 / e2 > 14.0);
    CHECK(e1 / e2 < 18.0);
}

TEST_CASE("free TLS coherence rotates at the level splitting") {
    Setup s(0, 1.0, CouplingKind::DirectTLS, 0.0, inf, 4, 2);
    HseomEngine engine(s.space, s.h, s.v, s.expansion);
    std::vector<cplx> ket{cplx{1 / std::sqrt(2.0), 0}, cplx{1 / std::sqrt(2.0), 0}};
    auto state = engine.init_awfs(ket);
    const double dt = 1e-3;
    for (int i = 0; i < 700; ++i) engine.step(state, dt);
    const auto rho = normalize_density(engine.reduced_density_raw(state));
    const cplx expected = 0.5 * std::exp(cplx{0, 0.7});
    CHECK(std::abs(rho[1] - expected) < 1e-9);
}

TEST_CASE("propagation is linear in the joint initial vector") {
    Setup s(2, -1.0, CouplingKind::OffDiagonal, 0.04, 2.0, 6, 2);
    HseomEngine engine(s.space, s.h, s.v, s.expansion);

    std::vector<cplx> k1(s.spec.dim(), cplx{0, 0}), k2(s.spec.dim(), cplx{0, 0});
    k1[0] = 1.0;
    k2[3] = 1.0;
    const cplx alpha{0.6, 0.0}, beta{0.0, 0.8};

    auto run = [&](const std::vector<cplx>& ket) {
        auto state = engine.init_awfs(ket);
        for (int i = 0; i < 400; ++i) engine.step(state, 2e-3);
        return state;
    };
    auto a = run(k1);
    auto b = run(k2);
    AWFSet direct = a;
    for (std::size_t i = 0; i < direct.phi.size(); ++i) {
        direct.phi[i] = alpha * a.phi[i] + beta * b.phi[i];
        direct.psi[i] = alpha * a.psi[i] + beta * b.psi[i];
    }
    auto mixed = engine.init_awfs(k1);
    for (std::size_t i = 0; i < mixed.dim; ++i) {
        mixed.phi[i] = alpha * k1[i] + beta * k2[i];
        mixed.psi[i] = alpha * k1[i] + beta * k2[i];
    }
    for (int i = 0; i < 400; ++i) engine.step(mixed, 2e-3);
    CHECK(max_diff(mixed, direct) < 1e-11);
}

TEST_CASE("identity insertion is a no-op and equal-time square is one") {
    Setup s(2, 1.0, CouplingKind::Diagonal, 0.02, 2.0, 6, 2);
    HseomEngine engine(s.space, s.h, s.v, s.expansion);
    auto state = engine.init_awfs(plus_superposition_state(s.spec));
    const auto before = state;
    OperatorRep identity;
    identity.n_sites = s.spec.n_sites();
    identity.terms.push_back({{}, cplx{1, 0}});
    engine.insert(state, Branch::Ket, identity);
    engine.insert(state, Branch::Bra, identity);
    CHECK(max_diff(state, before) == 0.0);

    const auto sz = site_pauli(s.spec, 1, PauliAxis::Z);
    engine.insert(state, Branch::Ket, sz);
    CHECK(std::abs(engine.expectation(state, sz) - cplx{1, 0}) < 1e-14);
}

TEST_CASE("zero-coupling trace stays at one to integrator precision") {
    Setup s(3, 2.0, CouplingKind::OffDiagonal, 0.0, inf, 4, 2);
    HseomEngine engine(s.space, s.h, s.v, s.expansion);
    auto state = engine.init_awfs(plus_superposition_state(s.spec));
    for (int i = 0; i < 2000; ++i) engine.step(state, 1e-3);
    CHECK(std::abs(engine.trace(state) - cplx{1, 0}) < 1e-10);
}

TEST_CASE("full density is consistent with the trace and the reduced block") {
    Setup s(2, 0.3, CouplingKind::Diagonal, 0.05, 2.0, 6, 2);
    HseomEngine engine(s.space, s.h, s.v, s.expansion);
    auto state = engine.init_awfs(plus_superposition_state(s.spec));
    for (int i = 0; i < 200; ++i) engine.step(state, 2e-3);

    const auto rho = engine.full_density(state);
    cplx tr{0, 0};
    for (std::size_t i = 0; i < state.dim; ++i) tr += rho[i * state.dim + i];
    CHECK(std::abs(tr - engine.trace(state)) < 1e-13);

    const auto red = engine.reduced_density_raw(state);
    const std::size_t half = state.dim / 2;
    cplx uu{0, 0};
    for (std::size_t c = 0; c < half; ++c) uu += rho[c * state.dim + c];
    CHECK(std::abs(uu - red[0]) < 1e-13);
}

TEST_CASE("normalized density has exactly unit trace") {
    const std::array<cplx, 4> raw{cplx{0.48, 0.001}, cplx{0.1, 0.2}, cplx{0.1, -0.2},
                                  cplx{0.49, -0.003}};
    const auto n = normalize_density(raw);
    CHECK(n[0] + n[3] == cplx{1.0, 0.0});
}

TEST_CASE("pure dephasing against the independent-boson closed form (short window)") {
    // depth 3: the truncation error at this coupling sits near 1e-5
    Setup s(0, 1.0, CouplingKind::DirectTLS, 0.01, 2.0, 16, 3);
    HseomEngine engine(s.space, s.h, s.v, s.expansion);
    std::vector<cplx> ket{cplx{1 / std::sqrt(2.0), 0}, cplx{1 / std::sqrt(2.0), 0}};
    auto state = engine.init_awfs(ket);

    std::vector<double> times;
    std::vector<double> ratio;
    const double dt = 2e-3;
    for (int step = 0; step <= 2000; ++step) {
        if (step % 100 == 0) {
            const auto rho = normalize_density(engine.reduced_density_raw(state));
            times.push_back(step * dt);
            ratio.push_back(std::abs(rho[1]) / 0.5);
        }
        if (step < 2000) engine.step(state, dt);
    }
    const auto oracle = independent_boson_coherence(s.bath, times);
    for (std::size_t i = 0; i < times.size(); ++i)
        CHECK(std::abs(ratio[i] - oracle[i]) < 1e-4);
}

TEST_CASE("amplitude overflow is detected") {
    Setup s(2, 2.0, CouplingKind::OffDiagonal, 1.0, 2.0, 6, 2);
    HseomEngine engine(s.space, s.h, s.v, s.expansion);
    auto state = engine.init_awfs(plus_superposition_state(s.spec));
    bool thrown = false;
    try {
        for (int i = 0; i < 5000; ++i) engine.step(state, 5.0);
    } catch (const std::runtime_error&) {
        thrown = true;
    }
    CHECK(thrown);
}
