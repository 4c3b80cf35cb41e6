#include "hseom/pauli.hpp"

#include <bit>
#include <map>
#include <stdexcept>

namespace hseom {

namespace {

struct CompiledString {
    uint64_t flip_mask = 0; // x and y sites
    uint64_t sign_mask = 0; // y and z sites: bit set -> factor -1
    cplx prefactor{1.0, 0.0};
};

CompiledString compile_string(const PauliString& s, int n_sites) {
    CompiledString c;
    c.prefactor = s.coefficient;
    int n_y = 0;
    for (const auto& f : s.factors) {
        if (f.site < 0 || f.site >= n_sites)
            throw std::invalid_argument("PauliString: site index out of range");
        const uint64_t bit = uint64_t{1} << (n_sites - 1 - f.site);
        switch (f.axis) {
        case PauliAxis::X:
            c.flip_mask |= bit;
            break;
        case PauliAxis::Y:
            c.flip_mask |= bit;
            c.sign_mask |= bit;
            ++n_y;
            break;
        case PauliAxis::Z:
            c.sign_mask |= bit;
            break;
        }
    }
    // Each y factor contributes i when the target bit is down (1) and -i when
    // up (0): fold (-i)^{n_y} into the prefactor, sign_mask supplies (-1)^d.
    static const cplx minus_i_pow[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
    c.prefactor *= minus_i_pow[n_y % 4];
    return c;
}

} // namespace

OperatorRep adjoint(const OperatorRep& op) {
    OperatorRep out = op;
    for (auto& t : out.terms) t.coefficient = std::conj(t.coefficient);
    return out;
}

void validate(const OperatorRep& op) {
    if (op.n_sites < 0 || op.n_sites > 62)
        throw std::invalid_argument("OperatorRep: bad n_sites");
    for (const auto& t : op.terms) {
        uint64_t seen = 0;
        for (const auto& f : t.factors) {
            if (f.site < 0 || f.site >= op.n_sites)
                throw std::invalid_argument("OperatorRep: site index out of range");
            const uint64_t bit = uint64_t{1} << f.site;
            if (seen & bit)
                throw std::invalid_argument("OperatorRep: repeated site in string");
            seen |= bit;
        }
    }
}

void apply_add(const OperatorRep& op, cplx scale, std::span<const cplx> in,
               std::span<cplx> out) {
    const std::size_t dim = op.dim();
    if (in.size() != dim || out.size() != dim)
        throw std::invalid_argument("apply_add: dimension mismatch");
    for (const auto& term : op.terms) {
        const CompiledString c = compile_string(term, op.n_sites);
        const cplx pref = scale * c.prefactor;
        for (std::size_t i = 0; i < dim; ++i) {
            const std::size_t j = i ^ c.flip_mask;
            const bool neg = std::popcount(i & c.sign_mask) & 1;
            out[i] += (neg ? -pref : pref) * in[j];
        }
    }
}

std::vector<cplx> apply_operator(const OperatorRep& op, std::span<const cplx> in) {
    std::vector<cplx> out(op.dim(), cplx{0.0, 0.0});
    apply_add(op, cplx{1.0, 0.0}, in, out);
    return out;
}

std::vector<cplx> dense_matrix(const OperatorRep& op) {
    const std::size_t dim = op.dim();
    std::vector<cplx> mat(dim * dim, cplx{0.0, 0.0});
    std::vector<cplx> basis(dim), col(dim);
    for (std::size_t j = 0; j < dim; ++j) {
        std::fill(basis.begin(), basis.end(), cplx{0.0, 0.0});
        basis[j] = 1.0;
        std::fill(col.begin(), col.end(), cplx{0.0, 0.0});
        apply_add(op, cplx{1.0, 0.0}, basis, col);
        for (std::size_t i = 0; i < dim; ++i) mat[j * dim + i] = col[i];
    }
    return mat;
}

CsrOperator::CsrOperator(const OperatorRep& op) {
    dim_ = op.dim();
    std::vector<CompiledString> compiled;
    compiled.reserve(op.terms.size());
    for (const auto& t : op.terms) compiled.push_back(compile_string(t, op.n_sites));

    row_start_.assign(dim_ + 1, 0);
    std::map<uint32_t, cplx> row;
    std::vector<std::pair<uint32_t, cplx>> flat;
    for (std::size_t i = 0; i < dim_; ++i) {
        row.clear();
        for (const auto& c : compiled) {
            const auto j = static_cast<uint32_t>(i ^ c.flip_mask);
            const bool neg = std::popcount(i & c.sign_mask) & 1;
            row[j] += neg ? -c.prefactor : c.prefactor;
        }
        for (const auto& [j, v] : row) flat.emplace_back(j, v);
        row_start_[i + 1] = static_cast<uint32_t>(flat.size());
    }
    cols_.resize(flat.size());
    vals_.resize(flat.size());
    for (std::size_t k = 0; k < flat.size(); ++k) {
        cols_[k] = flat[k].first;
        vals_[k] = flat[k].second;
    }
}

void CsrOperator::apply_add(cplx scale, std::span<const cplx> in,
                            std::span<cplx> out) const {
    if (in.size() != dim_ || out.size() != dim_)
        throw std::invalid_argument("CsrOperator: dimension mismatch");
    for (std::size_t i = 0; i < dim_; ++i) {
        cplx acc{0.0, 0.0};
        for (uint32_t k = row_start_[i]; k < row_start_[i + 1]; ++k)
            acc += vals_[k] * in[cols_[k]];
        out[i] += scale * acc;
    }
}

} // namespace hseom
