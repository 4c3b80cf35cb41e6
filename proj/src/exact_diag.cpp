#include "hseom/exact_diag.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace hseom {

SectorFn total_z_sector(int n_sites) {
    (void)n_sites;
    return [](std::size_t i) { return static_cast<int>(std::popcount(i)); };
}

SectorFn chain_z_sector(int n_sites) {
    const std::size_t mask = (std::size_t{1} << (n_sites - 1)) - 1;
    return [mask](std::size_t i) { return static_cast<int>(std::popcount(i & mask)); };
}

namespace {

struct BlockResult {
    std::vector<double> values;
    std::vector<std::size_t> basis; // global indices of the block basis
    Eigen::MatrixXcd vectors;       // block-local, column major (may be empty)
};

void check_hermitian(const OperatorRep& op) {
    if (!op.hermitian)
        throw std::invalid_argument("exact_diagonalize: operator not flagged Hermitian");
}

} // namespace

EigenSystem exact_diagonalize(const OperatorRep& op, std::size_t dim,
                              const DiagOptions& opts) {
    check_hermitian(op);
    if (dim != op.dim())
        throw std::invalid_argument("exact_diagonalize: dimension mismatch");
    if (dim > (std::size_t{1} << 14))
        throw std::invalid_argument("exact_diagonalize: dimension exceeds 2^14 guard");

    // Partition the basis into sectors (a single sector if none given).
    std::map<int, std::vector<std::size_t>> sectors;
    if (opts.sector) {
        for (std::size_t i = 0; i < dim; ++i) sectors[(*opts.sector)(i)].push_back(i);
    } else {
        auto& all = sectors[0];
        all.resize(dim);
        std::iota(all.begin(), all.end(), std::size_t{0});
    }

    std::vector<cplx> basis_vec(dim), image(dim);
    std::vector<BlockResult> blocks;
    double max_abs = 0.0;
    for (auto& [label, basis] : sectors) {
        const std::size_t b = basis.size();
        std::vector<std::size_t> pos(dim, static_cast<std::size_t>(-1));
        for (std::size_t c = 0; c < b; ++c) pos[basis[c]] = c;

        Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(b),
                                                    static_cast<Eigen::Index>(b));
        bool real_block = true;
        for (std::size_t c = 0; c < b; ++c) {
            std::fill(basis_vec.begin(), basis_vec.end(), cplx{0.0, 0.0});
            basis_vec[basis[c]] = 1.0;
            std::fill(image.begin(), image.end(), cplx{0.0, 0.0});
            apply_add(op, cplx{1.0, 0.0}, basis_vec, image);
            for (std::size_t i = 0; i < dim; ++i) {
                const cplx v = image[i];
                if (v == cplx{0.0, 0.0}) continue;
                max_abs = std::max(max_abs, std::abs(v));
                if (pos[i] == static_cast<std::size_t>(-1)) {
                    if (std::abs(v) > opts.leakage_tol * std::max(1.0, max_abs))
                        throw std::invalid_argument(
                            "exact_diagonalize: operator leaks across the given sectors");
                    continue;
                }
                h(static_cast<Eigen::Index>(pos[i]), static_cast<Eigen::Index>(c)) = v;
                if (v.imag() != 0.0) real_block = false;
            }
        }

        BlockResult res;
        res.basis = basis;
        if (real_block) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
                h.real(), opts.compute_vectors ? Eigen::ComputeEigenvectors
                                               : Eigen::EigenvaluesOnly);
            res.values.assign(es.eigenvalues().data(),
                              es.eigenvalues().data() + es.eigenvalues().size());
            if (opts.compute_vectors) res.vectors = es.eigenvectors().cast<cplx>();
        } else {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
                h, opts.compute_vectors ? Eigen::ComputeEigenvectors
                                        : Eigen::EigenvaluesOnly);
            res.values.assign(es.eigenvalues().data(),
                              es.eigenvalues().data() + es.eigenvalues().size());
            if (opts.compute_vectors) res.vectors = es.eigenvectors();
        }
        blocks.push_back(std::move(res));
    }

    // Merge blocks in ascending eigenvalue order.
    struct Entry {
        double value;
        std::size_t block, col;
    };
    std::vector<Entry> entries;
    for (std::size_t bi = 0; bi < blocks.size(); ++bi)
        for (std::size_t c = 0; c < blocks[bi].values.size(); ++c)
            entries.push_back({blocks[bi].values[c], bi, c});
    std::stable_sort(entries.begin(), entries.end(),
                     [](const Entry& a, const Entry& b) { return a.value < b.value; });

    EigenSystem out;
    out.values.reserve(entries.size());
    if (opts.compute_vectors) out.vectors.reserve(entries.size());
    for (const auto& e : entries) {
        out.values.push_back(e.value);
        if (opts.compute_vectors) {
            std::vector<cplx> full(dim, cplx{0.0, 0.0});
            const auto& blk = blocks[e.block];
            for (std::size_t r = 0; r < blk.basis.size(); ++r)
                full[blk.basis[r]] = blk.vectors(static_cast<Eigen::Index>(r),
                                                 static_cast<Eigen::Index>(e.col));
            out.vectors.push_back(std::move(full));
        }
    }
    return out;
}

EigenSystem chain_spectrum(const SpinSystemSpec& spec, bool compute_vectors) {
    const OperatorRep h = build_chain_hamiltonian(spec);
    DiagOptions opts;
    opts.compute_vectors = compute_vectors;
    opts.sector = total_z_sector(spec.n_spins);
    return exact_diagonalize(h, spec.chain_dim(), opts);
}

std::vector<std::pair<std::size_t, std::size_t>>
group_degenerate(const std::vector<double>& values, double tol) {
    std::vector<std::pair<std::size_t, std::size_t>> groups;
    if (values.empty()) return groups;
    const double range =
        std::max(values.back() - values.front(), std::abs(values.back()));
    const double gap = tol * std::max(range, 1e-300);
    std::size_t start = 0;
    for (std::size_t i = 1; i <= values.size(); ++i) {
        if (i == values.size() || values[i] - values[i - 1] > gap) {
            groups.emplace_back(start, i - start);
            start = i;
        }
    }
    return groups;
}

} // namespace hseom
