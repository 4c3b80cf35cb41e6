#include "hseom/oracles.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace hseom {

SpectralPropagator::SpectralPropagator(const OperatorRep& h) : dim_(h.dim()) {
    if (dim_ > 256)
        throw std::invalid_argument("SpectralPropagator: dense oracle limited to dim 2^8");
    const auto mat = dense_matrix(h);
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
    for (std::size_t j = 0; j < dim_; ++j)
        for (std::size_t i = 0; i < dim_; ++i)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = mat[j * dim_ + i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    evals_.assign(es.eigenvalues().data(), es.eigenvalues().data() + dim_);
    evecs_.resize(dim_ * dim_);
    for (std::size_t j = 0; j < dim_; ++j)
        for (std::size_t i = 0; i < dim_; ++i)
            evecs_[j * dim_ + i] = es.eigenvectors()(static_cast<Eigen::Index>(i),
                                                     static_cast<Eigen::Index>(j));
}

std::vector<cplx> SpectralPropagator::evolve(std::span<const cplx> v, double t) const {
    if (v.size() != dim_) throw std::invalid_argument("evolve: dimension mismatch");
    // coefficients in the eigenbasis
    std::vector<cplx> coeff(dim_, cplx{0.0, 0.0});
    for (std::size_t m = 0; m < dim_; ++m) {
        cplx acc{0.0, 0.0};
        const cplx* col = evecs_.data() + m * dim_;
        for (std::size_t i = 0; i < dim_; ++i) acc += std::conj(col[i]) * v[i];
        coeff[m] = acc * std::exp(cplx{0.0, -evals_[m] * t});
    }
    std::vector<cplx> out(dim_, cplx{0.0, 0.0});
    for (std::size_t m = 0; m < dim_; ++m) {
        const cplx* col = evecs_.data() + m * dim_;
        for (std::size_t i = 0; i < dim_; ++i) out[i] += coeff[m] * col[i];
    }
    return out;
}

std::vector<cplx> SpectralPropagator::apply_heisenberg(const OperatorRep& op, double t,
                                                       std::span<const cplx> v) const {
    auto u = evolve(v, t);
    std::vector<cplx> w(dim_, cplx{0.0, 0.0});
    apply_add(op, cplx{1.0, 0.0}, u, w);
    return evolve(w, -t);
}

std::vector<std::vector<cplx>> schrodinger_reference(const OperatorRep& h,
                                                     std::span<const cplx> psi0,
                                                     const std::vector<double>& times) {
    SpectralPropagator prop(h);
    std::vector<std::vector<cplx>> out;
    out.reserve(times.size());
    for (double t : times) out.push_back(prop.evolve(psi0, t));
    return out;
}

std::vector<std::array<cplx, 4>>
reduced_density_reference(const OperatorRep& h, const std::vector<WeightedKet>& comps,
                          const std::vector<double>& times) {
    SpectralPropagator prop(h);
    const std::size_t dim = prop.dim(), half = dim / 2;
    std::vector<std::array<cplx, 4>> out(times.size(), std::array<cplx, 4>{});
    for (const auto& comp : comps) {
        for (std::size_t ti = 0; ti < times.size(); ++ti) {
            const auto psi = prop.evolve(comp.state, times[ti]);
            std::array<cplx, 4> rho{};
            for (std::size_t c = 0; c < half; ++c) {
                rho[0] += psi[c] * std::conj(psi[c]);
                rho[1] += psi[c] * std::conj(psi[half + c]);
                rho[2] += psi[half + c] * std::conj(psi[c]);
                rho[3] += psi[half + c] * std::conj(psi[half + c]);
            }
            for (int e = 0; e < 4; ++e) out[ti][e] += comp.weight * rho[e];
        }
    }
    for (auto& rho : out) {
        const cplx tr = rho[0] + rho[3];
        for (auto& e : rho) e /= tr;
    }
    return out;
}

std::vector<cplx> heisenberg_correlator_reference(
    const OperatorRep& h, const std::vector<WeightedKet>& comps,
    const std::vector<std::pair<const OperatorRep*, double>>& ops_in_order) {
    SpectralPropagator prop(h);
    std::vector<cplx> out(1, cplx{0.0, 0.0});
    for (const auto& comp : comps) {
        std::vector<cplx> v(comp.state.begin(), comp.state.end());
        for (const auto& [op, t] : ops_in_order) v = prop.apply_heisenberg(*op, t, v);
        cplx acc{0.0, 0.0};
        for (std::size_t i = 0; i < v.size(); ++i)
            acc += std::conj(comp.state[i]) * v[i];
        out[0] += comp.weight * acc;
    }
    return out;
}

std::vector<cplx> two_time_reference(const OperatorRep& h,
                                     const std::vector<WeightedKet>& comps,
                                     const OperatorRep& op_j, const OperatorRep& op_k,
                                     const std::vector<double>& times, bool reversed) {
    SpectralPropagator prop(h);
    std::vector<cplx> out(times.size(), cplx{0.0, 0.0});
    for (const auto& comp : comps) {
        for (std::size_t ti = 0; ti < times.size(); ++ti) {
            std::vector<cplx> v(comp.state.begin(), comp.state.end());
            if (!reversed) {
                std::vector<cplx> w(v.size(), cplx{0.0, 0.0});
                apply_add(op_k, cplx{1.0, 0.0}, v, w);
                v = prop.apply_heisenberg(op_j, times[ti], w);
            } else {
                v = prop.apply_heisenberg(op_j, times[ti], v);
                std::vector<cplx> w(v.size(), cplx{0.0, 0.0});
                apply_add(op_k, cplx{1.0, 0.0}, v, w);
                v = std::move(w);
            }
            cplx acc{0.0, 0.0};
            for (std::size_t i = 0; i < v.size(); ++i)
                acc += std::conj(comp.state[i]) * v[i];
            out[ti] += comp.weight * acc;
        }
    }
    return out;
}

std::vector<double> independent_boson_coherence(const BathSpec& bath,
                                                const std::vector<double>& times) {
    double t_max = 0.0;
    for (double t : times) {
        if (t < 0.0) throw std::invalid_argument("independent_boson_coherence: t < 0");
        t_max = std::max(t_max, t);
    }
    if (bath.zeta == 0.0) return std::vector<double>(times.size(), 1.0);

    // Cumulative trapezoid of alpha'(s) and s*alpha'(s) on a fine grid;
    // Gamma(t) = 4 [ t*I1(t) - I2(t) ].
    const double h = 2e-3;
    const auto n = static_cast<std::size_t>(std::ceil(t_max / h)) + 1;
    std::vector<double> a(n + 1), i1(n + 1, 0.0), i2(n + 1, 0.0);
    for (std::size_t i = 0; i <= n; ++i)
        a[i] = corr_exact(bath, static_cast<double>(i) * h).value.real();
    for (std::size_t i = 1; i <= n; ++i) {
        const double s0 = static_cast<double>(i - 1) * h, s1 = static_cast<double>(i) * h;
        i1[i] = i1[i - 1] + 0.5 * h * (a[i - 1] + a[i]);
        i2[i] = i2[i - 1] + 0.5 * h * (s0 * a[i - 1] + s1 * a[i]);
    }

    std::vector<double> out;
    out.reserve(times.size());
    for (double t : times) {
        const double x = t / h;
        const auto lo = std::min(static_cast<std::size_t>(x), n - 1);
        const double frac = x - static_cast<double>(lo);
        const double v1 = i1[lo] + frac * (i1[lo + 1] - i1[lo]);
        const double v2 = i2[lo] + frac * (i2[lo + 1] - i2[lo]);
        out.push_back(std::exp(-4.0 * (t * v1 - v2)));
    }
    return out;
}

} // namespace hseom
