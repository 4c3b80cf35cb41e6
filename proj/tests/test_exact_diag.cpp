#include "hseom/exact_diag.hpp"

#include <doctest.h>

#include <cmath>

using namespace hseom;

TEST_CASE("identity operator has all eigenvalues one") {
    OperatorRep op;
    op.n_sites = 3;
    op.terms.push_back({{}, cplx{1.0, 0.0}}); // empty string = identity
    const auto es = exact_diagonalize(op, 8);
    for (double v : es.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("two-spin chain spectrum, sector-blocked and dense agree") {
    SpinSystemSpec spec;
    spec.n_spins = 2;
    spec.coupling_kind = CouplingKind::None;

    SUBCASE("delta 1") {
        spec.delta = 1.0;
        const auto es = chain_spectrum(spec);
        REQUIRE(es.values.size() == 4);
        CHECK(es.values[0] == doctest::Approx(-0.5).epsilon(1e-12));
        CHECK(es.values[1] == doctest::Approx(-0.5).epsilon(1e-12));
        CHECK(es.values[2] == doctest::Approx(-0.5).epsilon(1e-12));
        CHECK(es.values[3] == doctest::Approx(1.5).epsilon(1e-12));
    }
    SUBCASE("delta 2 has a doubly degenerate ferromagnetic ground state") {
        spec.delta = 2.0;
        const auto es = chain_spectrum(spec);
        CHECK(es.values[0] == doctest::Approx(-1.0).epsilon(1e-12));
        CHECK(es.values[1] == doctest::Approx(-1.0).epsilon(1e-12));
        CHECK(es.values[2] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
        CHECK(es.values[3] == doctest::Approx(2.0).epsilon(1e-12));
        const auto groups = group_degenerate(es.values);
        REQUIRE(groups.size() == 3);
        CHECK(groups[0].second == 2);
    }
}

TEST_CASE("eigenvectors satisfy the eigenvalue equation") {
    SpinSystemSpec spec;
    spec.n_spins = 3;
    spec.delta = -1.4;
    spec.coupling_kind = CouplingKind::None;
    const auto h = build_chain_hamiltonian(spec);
    const auto es = chain_spectrum(spec);
    for (std::size_t m = 0; m < es.values.size(); ++m) {
        const auto hv = apply_operator(h, es.vectors[m]);
        for (std::size_t i = 0; i < hv.size(); ++i)
            CHECK(std::abs(hv[i] - es.values[m] * es.vectors[m][i]) < 1e-12);
    }
}

TEST_CASE("eigenvectors are orthonormal") {
    SpinSystemSpec spec;
    spec.n_spins = 3;
    spec.delta = 0.5;
    spec.coupling_kind = CouplingKind::None;
    const auto es = chain_spectrum(spec);
    for (std::size_t a = 0; a < es.vectors.size(); ++a)
        for (std::size_t b = a; b < es.vectors.size(); ++b) {
            cplx acc{0, 0};
            for (std::size_t i = 0; i < es.vectors[a].size(); ++i)
                acc += std::conj(es.vectors[a][i]) * es.vectors[b][i];
            CHECK(std::abs(acc - (a == b ? cplx{1, 0} : cplx{0, 0})) < 1e-12);
        }
}

TEST_CASE("non-hermitian flag and oversized dimension are rejected") {
    OperatorRep op;
    op.n_sites = 1;
    op.hermitian = false;
    CHECK_THROWS_AS(exact_diagonalize(op, 2), std::invalid_argument);
    op.hermitian = true;
    CHECK_THROWS_AS(exact_diagonalize(op, 4), std::invalid_argument); // dim mismatch
}

TEST_CASE("sector function is verified, not trusted") {
    // sigma_x mixes magnetization sectors; blocking by popcount must throw.
    OperatorRep op;
    op.n_sites = 2;
    op.terms.push_back({{{0, PauliAxis::X}}, cplx{1.0, 0.0}});
    DiagOptions opts;
    opts.sector = total_z_sector(2);
    CHECK_THROWS_AS(exact_diagonalize(op, 4, opts), std::invalid_argument);
}

TEST_CASE("degenerate grouping splits well separated levels only") {
    const std::vector<double> vals{-1.0, -1.0 + 1e-12, 0.5, 2.0};
    const auto groups = group_degenerate(vals);
    REQUIRE(groups.size() == 3);
    CHECK(groups[0].second == 2);
}
