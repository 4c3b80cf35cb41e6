#include "hseom/propagator.hpp"

#include <omp.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hseom {

namespace {

constexpr cplx minus_i{0.0, -1.0};

void resize_like(AWFSet& s, const AWFSet& ref) {
    s.n_elems = ref.n_elems;
    s.dim = ref.dim;
    s.phi.resize(ref.phi.size());
    s.psi.resize(ref.psi.size());
}

} // namespace

HseomEngine::HseomEngine(const HierarchySpace& space, OperatorRep hamiltonian,
                         OperatorRep coupling, const BathExpansion& expansion,
                         ExecPolicy policy)
    : space_(space),
      h_op_(std::move(hamiltonian)),
      v_op_(std::move(coupling)),
      h_csr_(h_op_),
      v_csr_(v_op_),
      dim_(h_op_.dim()),
      policy_(policy) {
    validate(h_op_);
    validate(v_op_);
    if (v_op_.dim() != dim_)
        throw std::invalid_argument("HseomEngine: H and V dimension mismatch");
    if (expansion.n_terms() != space.n_modes())
        throw std::invalid_argument("HseomEngine: expansion size != hierarchy modes");

    const int K = expansion.n_terms();
    coeff_ket_.resize(static_cast<size_t>(K));
    coeff_bra_.resize(static_cast<size_t>(K));
    for (int k = 0; k < K; ++k) {
        coeff_ket_[static_cast<size_t>(k)] = std::conj(expansion.coeffs[static_cast<size_t>(k)]);
        coeff_bra_[static_cast<size_t>(k)] = expansion.coeffs[static_cast<size_t>(k)];
    }
    for (int k = 0; k < K; ++k)
        for (int kp = 0; kp < K; ++kp)
            if (const double v = expansion.eta_at(k, kp); v != 0.0)
                eta_entries_.push_back({k, kp, v});
}

AWFSet HseomEngine::init_awfs(std::span<const cplx> initial_ket) const {
    if (initial_ket.size() != dim_)
        throw std::invalid_argument("init_awfs: dimension mismatch");
    double norm2 = 0.0;
    for (const cplx& a : initial_ket) norm2 += std::norm(a);
    if (std::abs(norm2 - 1.0) > 1e-10)
        throw std::invalid_argument("init_awfs: initial ket not normalized");

    AWFSet s;
    s.n_elems = space_.size();
    s.dim = dim_;
    s.phi.assign(s.n_elems * dim_, cplx{0.0, 0.0});
    s.psi.assign(s.n_elems * dim_, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < dim_; ++i) {
        s.phi[i] = initial_ket[i];
        s.psi[i] = initial_ket[i];
    }
    return s;
}

void HseomEngine::rhs(const AWFSet& in, AWFSet& out) const {
    if (policy_ == ExecPolicy::Serial)
        rhs_reference(in, out);
    else
        rhs_parallel(in, out);
}

void HseomEngine::rhs_parallel(const AWFSet& in, AWFSet& out) const {
    resize_like(out, in);
    out.time = in.time;
    const auto n = static_cast<std::int64_t>(space_.size());
    const int K = space_.n_modes();

#pragma omp parallel
    {
        std::vector<cplx> vbuf(dim_);
#pragma omp for schedule(dynamic, 8)
        for (std::int64_t id = 0; id < n; ++id) {
            const auto uid = static_cast<uint32_t>(id);
            const auto& counts = space_.counts(uid);

            // --- ket branch ---
            auto out_phi = out.phi_at(static_cast<std::size_t>(id));
            std::fill(out_phi.begin(), out_phi.end(), cplx{0.0, 0.0});
            h_csr_.apply_add(minus_i, in.phi_at(static_cast<std::size_t>(id)), out_phi);

            for (const auto& e : eta_entries_) {
                const int nk = counts[static_cast<size_t>(e.k)];
                if (nk == 0) continue;
                const uint32_t src = space_.move(uid, e.k, e.kp);
                if (src == HierarchySpace::outside) continue;
                const auto sp = in.phi_at(src);
                const double w = e.value * nk;
                for (std::size_t i = 0; i < dim_; ++i) out_phi[i] += w * sp[i];
            }

            bool any_v = false;
            std::fill(vbuf.begin(), vbuf.end(), cplx{0.0, 0.0});
            for (int k = 0; k < K; ++k) {
                const cplx c = coeff_ket_[static_cast<size_t>(k)];
                if (c == cplx{0.0, 0.0}) continue;
                const uint32_t up = space_.plus(uid, k);
                if (up == HierarchySpace::outside) continue;
                const auto sp = in.phi_at(up);
                for (std::size_t i = 0; i < dim_; ++i) vbuf[i] += c * sp[i];
                any_v = true;
            }
            if (counts[0] > 0) {
                const auto sp = in.phi_at(space_.minus(uid, 0));
                const double n0 = counts[0];
                for (std::size_t i = 0; i < dim_; ++i) vbuf[i] += n0 * sp[i];
                any_v = true;
            }
            if (any_v) v_csr_.apply_add(minus_i, vbuf, out_phi);

            // --- bra branch ---
            auto out_psi = out.psi_at(static_cast<std::size_t>(id));
            std::fill(out_psi.begin(), out_psi.end(), cplx{0.0, 0.0});
            h_csr_.apply_add(minus_i, in.psi_at(static_cast<std::size_t>(id)), out_psi);

            for (const auto& e : eta_entries_) {
                // n + e_k - e_kp realized as (n - e_kp) + e_k so the
                // intermediate never leaves the truncation.
                uint32_t src;
                if (e.k == e.kp) {
                    src = uid;
                } else {
                    const uint32_t down = space_.minus(uid, e.kp);
                    src = down == HierarchySpace::outside ? HierarchySpace::outside
                                                          : space_.plus(down, e.k);
                }
                if (src == HierarchySpace::outside) continue;
                const auto sp = in.psi_at(src);
                const double w = -e.value * (counts[static_cast<size_t>(e.k)] + 1);
                for (std::size_t i = 0; i < dim_; ++i) out_psi[i] += w * sp[i];
            }

            any_v = false;
            std::fill(vbuf.begin(), vbuf.end(), cplx{0.0, 0.0});
            for (int k = 0; k < K; ++k) {
                const cplx c = coeff_bra_[static_cast<size_t>(k)];
                if (c == cplx{0.0, 0.0}) continue;
                const uint32_t down = space_.minus(uid, k);
                if (down == HierarchySpace::outside) continue;
                const auto sp = in.psi_at(down);
                for (std::size_t i = 0; i < dim_; ++i) vbuf[i] += c * sp[i];
                any_v = true;
            }
            if (const uint32_t up0 = space_.plus(uid, 0); up0 != HierarchySpace::outside) {
                const auto sp = in.psi_at(up0);
                const double w = counts[0] + 1;
                for (std::size_t i = 0; i < dim_; ++i) vbuf[i] += w * sp[i];
                any_v = true;
            }
            if (any_v) v_csr_.apply_add(minus_i, vbuf, out_psi);
        }
    }
}

void HseomEngine::rhs_reference(const AWFSet& in, AWFSet& out,
                                bool sum_all_basis_at_zero) const {
    resize_like(out, in);
    out.time = in.time;
    const int K = space_.n_modes();
    std::vector<cplx> vbuf(dim_);

    for (std::size_t id = 0; id < space_.size(); ++id) {
        const auto uid = static_cast<uint32_t>(id);
        const auto& counts = space_.counts(uid);

        auto out_phi = out.phi_at(id);
        std::fill(out_phi.begin(), out_phi.end(), cplx{0.0, 0.0});
        apply_add(h_op_, minus_i, in.phi_at(id), out_phi);
        for (const auto& e : eta_entries_) {
            const int nk = counts[static_cast<size_t>(e.k)];
            if (nk == 0) continue;
            const uint32_t src = space_.move(uid, e.k, e.kp);
            if (src == HierarchySpace::outside) continue;
            const auto sp = in.phi_at(src);
            for (std::size_t i = 0; i < dim_; ++i) out_phi[i] += e.value * double(nk) * sp[i];
        }
        std::fill(vbuf.begin(), vbuf.end(), cplx{0.0, 0.0});
        for (int k = 0; k < K; ++k) {
            const uint32_t up = space_.plus(uid, k);
            if (up == HierarchySpace::outside) continue;
            const cplx c = coeff_ket_[static_cast<size_t>(k)];
            const auto sp = in.phi_at(up);
            for (std::size_t i = 0; i < dim_; ++i) vbuf[i] += c * sp[i];
        }
        const int kmax_down = sum_all_basis_at_zero ? K : 1;
        for (int k = 0; k < kmax_down; ++k) {
            const double basis0 = k == 0 ? 1.0 : 0.0; // J_k(0)
            const int nk = counts[static_cast<size_t>(k)];
            if (nk == 0) continue;
            const uint32_t down = space_.minus(uid, k);
            const auto sp = in.phi_at(down);
            for (std::size_t i = 0; i < dim_; ++i) vbuf[i] += basis0 * double(nk) * sp[i];
        }
        apply_add(v_op_, minus_i, vbuf, out_phi);

        auto out_psi = out.psi_at(id);
        std::fill(out_psi.begin(), out_psi.end(), cplx{0.0, 0.0});
        apply_add(h_op_, minus_i, in.psi_at(id), out_psi);
        for (const auto& e : eta_entries_) {
            uint32_t src;
            if (e.k == e.kp) {
                src = uid;
            } else {
                const uint32_t down = space_.minus(uid, e.kp);
                src = down == HierarchySpace::outside ? HierarchySpace::outside
                                                      : space_.plus(down, e.k);
            }
            if (src == HierarchySpace::outside) continue;
            const auto sp = in.psi_at(src);
            const double w = -e.value * (counts[static_cast<size_t>(e.k)] + 1);
            for (std::size_t i = 0; i < dim_; ++i) out_psi[i] += w * sp[i];
        }
        std::fill(vbuf.begin(), vbuf.end(), cplx{0.0, 0.0});
        for (int k = 0; k < K; ++k) {
            const uint32_t down = space_.minus(uid, k);
            if (down == HierarchySpace::outside) continue;
            const cplx c = coeff_bra_[static_cast<size_t>(k)];
            const auto sp = in.psi_at(down);
            for (std::size_t i = 0; i < dim_; ++i) vbuf[i] += c * sp[i];
        }
        const int kmax_up = sum_all_basis_at_zero ? K : 1;
        for (int k = 0; k < kmax_up; ++k) {
            const double basis0 = k == 0 ? 1.0 : 0.0;
            const uint32_t up = space_.plus(uid, k);
            if (up == HierarchySpace::outside) continue;
            const auto sp = in.psi_at(up);
            const double w = counts[static_cast<size_t>(k)] + 1;
            for (std::size_t i = 0; i < dim_; ++i) vbuf[i] += basis0 * w * sp[i];
        }
        apply_add(v_op_, minus_i, vbuf, out_psi);
    }
}

void HseomEngine::step(AWFSet& state, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be > 0");
    resize_like(deriv_, state);
    resize_like(stage_, state);
    resize_like(accum_, state);

    const std::size_t total = state.phi.size();
    auto combine = [&](const AWFSet& base, const AWFSet& k, double w, AWFSet& dst) {
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(total); ++i) {
            dst.phi[static_cast<std::size_t>(i)] =
                base.phi[static_cast<std::size_t>(i)] + w * k.phi[static_cast<std::size_t>(i)];
            dst.psi[static_cast<std::size_t>(i)] =
                base.psi[static_cast<std::size_t>(i)] + w * k.psi[static_cast<std::size_t>(i)];
        }
    };
    auto accumulate = [&](const AWFSet& k, double w) {
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(total); ++i) {
            accum_.phi[static_cast<std::size_t>(i)] += w * k.phi[static_cast<std::size_t>(i)];
            accum_.psi[static_cast<std::size_t>(i)] += w * k.psi[static_cast<std::size_t>(i)];
        }
    };

    rhs(state, deriv_); // k1
    combine(state, deriv_, 0.0, accum_);
    accumulate(deriv_, dt / 6.0);
    combine(state, deriv_, 0.5 * dt, stage_);

    rhs(stage_, deriv_); // k2
    accumulate(deriv_, dt / 3.0);
    combine(state, deriv_, 0.5 * dt, stage_);

    rhs(stage_, deriv_); // k3
    accumulate(deriv_, dt / 3.0);
    combine(state, deriv_, dt, stage_);

    rhs(stage_, deriv_); // k4
    accumulate(deriv_, dt / 6.0);

    state.phi.swap(accum_.phi);
    state.psi.swap(accum_.psi);
    state.time += dt;

    double peak = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) peak = std::max(peak, std::abs(state.phi[i]));
    if (!std::isfinite(peak) || peak > overflow_threshold) {
        std::ostringstream msg;
        msg << "amplitude overflow at t=" << state.time << " (|phi_root| peak " << peak
            << "); reduce dt or deepen the hierarchy";
        throw std::runtime_error(msg.str());
    }
}

void HseomEngine::insert(AWFSet& state, Branch branch, const OperatorRep& op) const {
    if (op.dim() != dim_) throw std::invalid_argument("insert: dimension mismatch");
    const OperatorRep applied = branch == Branch::Ket ? op : adjoint(op);
    std::vector<cplx> tmp(dim_);
    for (std::size_t id = 0; id < state.n_elems; ++id) {
        auto vec = branch == Branch::Ket ? state.phi_at(id) : state.psi_at(id);
        std::fill(tmp.begin(), tmp.end(), cplx{0.0, 0.0});
        apply_add(applied, cplx{1.0, 0.0}, vec, tmp);
        std::copy(tmp.begin(), tmp.end(), vec.begin());
    }
}

cplx HseomEngine::trace(const AWFSet& state) const {
    cplx tr{0.0, 0.0};
    for (std::size_t id = 0; id < state.n_elems; ++id) {
        const auto p = state.phi_at(id);
        const auto q = state.psi_at(id);
        cplx acc{0.0, 0.0};
        for (std::size_t i = 0; i < dim_; ++i) acc += std::conj(q[i]) * p[i];
        tr += acc;
    }
    return tr;
}

std::array<cplx, 4> HseomEngine::reduced_density_raw(const AWFSet& state) const {
    const std::size_t half = dim_ / 2;
    std::array<cplx, 4> rho{};
    for (std::size_t id = 0; id < state.n_elems; ++id) {
        const auto p = state.phi_at(id);
        const auto q = state.psi_at(id);
        cplx uu{0, 0}, ul{0, 0}, lu{0, 0}, ll{0, 0};
        for (std::size_t c = 0; c < half; ++c) {
            uu += p[c] * std::conj(q[c]);
            ul += p[c] * std::conj(q[half + c]);
            lu += p[half + c] * std::conj(q[c]);
            ll += p[half + c] * std::conj(q[half + c]);
        }
        rho[0] += uu;
        rho[1] += ul;
        rho[2] += lu;
        rho[3] += ll;
    }
    return rho;
}

cplx HseomEngine::expectation(const AWFSet& state, const OperatorRep& op) const {
    if (op.dim() != dim_) throw std::invalid_argument("expectation: dimension mismatch");
    std::vector<cplx> tmp(dim_);
    cplx acc{0.0, 0.0};
    for (std::size_t id = 0; id < state.n_elems; ++id) {
        std::fill(tmp.begin(), tmp.end(), cplx{0.0, 0.0});
        apply_add(op, cplx{1.0, 0.0}, state.phi_at(id), tmp);
        const auto q = state.psi_at(id);
        cplx dot{0.0, 0.0};
        for (std::size_t i = 0; i < dim_; ++i) dot += std::conj(q[i]) * tmp[i];
        acc += dot;
    }
    return acc;
}

std::vector<cplx> HseomEngine::full_density(const AWFSet& state) const {
    std::vector<cplx> rho(dim_ * dim_, cplx{0.0, 0.0});
    for (std::size_t id = 0; id < state.n_elems; ++id) {
        const auto p = state.phi_at(id);
        const auto q = state.psi_at(id);
        for (std::size_t a = 0; a < dim_; ++a)
            for (std::size_t b = 0; b < dim_; ++b)
                rho[a * dim_ + b] += p[a] * std::conj(q[b]);
    }
    return rho;
}

std::array<cplx, 4> normalize_density(const std::array<cplx, 4>& raw) {
    const cplx tr = raw[0] + raw[3];
    if (std::abs(tr) == 0.0)
        throw std::runtime_error("normalize_density: vanishing trace");
    return {raw[0] / tr, raw[1] / tr, raw[2] / tr, raw[3] / tr};
}

} // namespace hseom
