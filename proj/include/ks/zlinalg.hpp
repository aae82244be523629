#pragma once

#include <optional>
#include <vector>

#include "ks/matrix.hpp"

namespace ks {

struct SnfResult {
    ZMat U, D, V; // U*M*V = D, U and V unimodular, diagonal divisibility chain
    std::vector<mpz_class> divisors() const; // nonzero diagonal entries
    int rank() const;
};

SnfResult smith_normal_form(const ZMat& M);

// Canonical row Hermite form of the row space: staircase, positive pivots,
// entries above a pivot reduced into [0, pivot). Zero rows dropped.
ZMat hnf_rows(const ZMat& M);

// Rows span the saturated kernel {x : M x = 0} (x a column vector).
ZMat kernel_z(const ZMat& M);

// Kernel over Q of a rational matrix, returned as saturated integer rows.
ZMat kernel_q(const QMat& M);

// Saturation of the row space inside Z^cols, canonical HNF rows.
ZMat saturation_rows(const ZMat& B);

mpz_class det_bareiss(ZMat M);

QMat inverse_q(const QMat& M);
ZMat inverse_unimodular(const ZMat& U);

int rank_q(QMat M);
int rank_z(const ZMat& M);

// Solve A x = b over Q; nullopt when inconsistent.
std::optional<QVec> solve_q(QMat A, QVec b);

struct Signature {
    int pos = 0, neg = 0, zero = 0;
};

// Sylvester signature of a symmetric rational matrix by congruence diagonalization.
Signature signature_symmetric(QMat G);

// v in the integer row space of a canonical HNF matrix.
bool hnf_member(const ZMat& hnf, ZVec v);

// Accumulates integer constraint rows, keeping only a Hermite basis of their span.
class HnfAccumulator {
public:
    explicit HnfAccumulator(int cols) : cols_(cols) {}
    void add_row(const ZVec& v);
    void add_rows(const ZMat& m);
    const ZMat& matrix();

private:
    void fold();
    int cols_;
    std::vector<ZVec> pending_;
    ZMat basis_;
};

// Monic characteristic polynomial of an integer matrix, little-endian
// coefficients c[0] + c[1] x + ... + c[n] x^n with c[n] = 1.
std::vector<mpz_class> char_poly(const ZMat& g);

// Little-endian integer polynomial division; nullopt when not exact.
std::optional<std::vector<mpz_class>> poly_divexact(const std::vector<mpz_class>& num,
                                                    const std::vector<mpz_class>& den);

ZMat poly_eval_matrix(const std::vector<mpz_class>& p, const ZMat& g);

// d-th cyclotomic polynomial, little-endian integer coefficients.
std::vector<mpz_class> cyclotomic(unsigned long d);

// LLL reduction (delta = 3/4) of the lattice spanned by the rows.
ZMat lll_reduce(ZMat B);

// Clear denominators row by row (kernel-preserving).
ZMat clear_row_denominators(const QMat& M);

ZMat vstack(const ZMat& a, const ZMat& b);
ZMat hstack(const ZMat& a, const ZMat& b);

} // namespace ks
