// Kernel benchmark: serial reference vs the OpenMP/CSR path for operator
// application and the hierarchy derivative, plus RK4 step throughput.

#include "hseom/bath.hpp"
#include "hseom/hierarchy.hpp"
#include "hseom/propagator.hpp"
#include "hseom/spin_system.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

using namespace hseom;

namespace {

double now_ms() {
    using clk = std::chrono::steady_clock;
    return std::chrono::duration<double, std::milli>(clk::now().time_since_epoch())
        .count();
}

std::vector<cplx> random_state(std::size_t dim, std::mt19937& rng) {
    std::normal_distribution<double> dist;
    std::vector<cplx> v(dim);
    double n2 = 0.0;
    for (auto& a : v) {
        a = {dist(rng), dist(rng)};
        n2 += std::norm(a);
    }
    for (auto& a : v) a /= std::sqrt(n2);
    return v;
}

void fill_random(AWFSet& s, std::mt19937& rng) {
    std::normal_distribution<double> dist;
    for (auto& a : s.phi) a = {dist(rng), dist(rng)};
    for (auto& a : s.psi) a = {dist(rng), dist(rng)};
}

} // namespace

int main(int argc, char** argv) {
    int n_spins = 7;
    int n_bessel = 40;
    int depth = 2;
    int reps = 20;
    if (argc > 1) n_spins = std::atoi(argv[1]);
    if (argc > 2) n_bessel = std::atoi(argv[2]);
    if (argc > 3) depth = std::atoi(argv[3]);
    if (argc > 4) reps = std::atoi(argv[4]);

    SpinSystemSpec spec;
    spec.n_spins = n_spins;
    spec.coupling_kind = CouplingKind::Diagonal;
    spec.coupled_sites = {center_site(n_spins)};

    BathSpec bath;
    bath.zeta = 0.01;
    bath.nu = 2.0;
    bath.beta = 2.0;

    const auto h = build_system_hamiltonian(spec);
    const auto v = build_coupling_operator(spec);
    const auto expansion = bessel_coefficients(bath, n_bessel);
    HierarchySpace space(n_bessel, depth);

    std::mt19937 rng(12345);
    const std::size_t dim = h.dim();
    printf("N=%d (dim %zu), K=%d, L=%d -> %zu hierarchy elements, %d threads\n",
           n_spins, dim, n_bessel, depth, space.size(), omp_get_max_threads());

    // Operator application: per-string reference vs CSR.
    {
        const auto in = random_state(dim, rng);
        std::vector<cplx> out(dim);
        const CsrOperator csr(h);
        const int inner = 2000;

        double t0 = now_ms();
        for (int r = 0; r < inner; ++r) {
            std::fill(out.begin(), out.end(), cplx{0, 0});
            apply_add(h, cplx{1, 0}, in, out);
        }
        const double t_ref = (now_ms() - t0) / inner;

        t0 = now_ms();
        for (int r = 0; r < inner; ++r) {
            std::fill(out.begin(), out.end(), cplx{0, 0});
            csr.apply_add(cplx{1, 0}, in, out);
        }
        const double t_csr = (now_ms() - t0) / inner;
        printf("hamiltonian apply   per-string %8.4f ms   csr %8.4f ms   speedup %.2fx\n",
               t_ref, t_csr, t_ref / t_csr);
    }

    // Hierarchy derivative: serial reference vs OpenMP.
    {
        HseomEngine engine(space, h, v, expansion, ExecPolicy::Parallel);
        AWFSet in = engine.init_awfs(random_state(dim, rng));
        fill_random(in, rng);
        AWFSet out;

        double t0 = now_ms();
        for (int r = 0; r < reps; ++r) engine.rhs_reference(in, out);
        const double t_ser = (now_ms() - t0) / reps;

        t0 = now_ms();
        for (int r = 0; r < reps; ++r) engine.rhs(in, out);
        const double t_par = (now_ms() - t0) / reps;
        printf("hierarchy derivative   serial %8.2f ms   openmp %8.2f ms   speedup %.2fx\n",
               t_ser, t_par, t_ser / t_par);

        double t1 = now_ms();
        for (int r = 0; r < reps; ++r) engine.step(in, 1e-4);
        const double t_step = (now_ms() - t1) / reps;
        printf("rk4 step               %8.2f ms  (%.1f steps/s)\n", t_step,
               1000.0 / t_step);
    }
    return 0;
}
