// Pauli-string operator representation on a register of spins-1/2.
//
// Basis convention: a state index i runs over 2^n_sites amplitudes.  Site s
// occupies bit (n_sites - 1 - s), so site 0 is the most significant bit.  Bit
// value 0 is spin-up (the sigma_z = +1 eigenstate), and sigma_y |up> = i |down>.
#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace hseom {

using cplx = std::complex<double>;

enum class PauliAxis : uint8_t { X, Y, Z };

struct PauliFactor {
    int site = 0;
    PauliAxis axis = PauliAxis::Z;
};

struct PauliString {
    std::vector<PauliFactor> factors; // distinct sites
    cplx coefficient{1.0, 0.0};
};

struct OperatorRep {
    int n_sites = 0;
    std::vector<PauliString> terms;
    bool hermitian = true;

    std::size_t dim() const { return std::size_t{1} << n_sites; }
};

// op and scale * op^dagger (conjugate coefficients; Pauli strings are
// self-adjoint).
OperatorRep adjoint(const OperatorRep& op);

// Validates site ranges and repeated-site constraints; throws on violation.
void validate(const OperatorRep& op);

// out += scale * op * in, matrix-free, one pass per Pauli string.  This is
// the serial reference path used by tests and the fallback engine.
void apply_add(const OperatorRep& op, cplx scale, std::span<const cplx> in,
               std::span<cplx> out);

// out = op * in (convenience; matrix-free serial path).
std::vector<cplx> apply_operator(const OperatorRep& op, std::span<const cplx> in);

// Dense matrix of op, column-major dim x dim (tests and small oracles only).
std::vector<cplx> dense_matrix(const OperatorRep& op);

// Compressed sparse rows of a Pauli-string sum.  Rows are state indices; each
// row holds at most one entry per term (duplicate columns are merged).  This
// is the hot-path representation used by the parallel propagator.
class CsrOperator {
public:
    CsrOperator() = default;
    explicit CsrOperator(const OperatorRep& op);

    // out += scale * op * in
    void apply_add(cplx scale, std::span<const cplx> in, std::span<cplx> out) const;

    std::size_t dim() const { return dim_; }
    bool empty() const { return dim_ == 0; }

private:
    std::size_t dim_ = 0;
    std::vector<uint32_t> row_start_;
    std::vector<uint32_t> cols_;
    std::vector<cplx> vals_;
};

} // namespace hseom
