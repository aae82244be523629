#pragma once

#include <optional>
#include <string>

#include "ks/matrix.hpp"
#include "ks/zlinalg.hpp"

namespace ks {

// Finitely generated abelian group by invariant factors d1 | d2 | ... (all >= 2).
struct FiniteAbelianGroup {
    std::vector<mpz_class> invariant_factors;

    static FiniteAbelianGroup from_divisors(const std::vector<mpz_class>& d);
    mpz_class order() const;
    bool trivial() const { return invariant_factors.empty(); }
    std::string str() const;
};

// Integral quadratic lattice: Z^rank with a symmetric integral Gram matrix.
// Sign convention everywhere: Q is the NEGATIVE of the geometric intersection
// form, so the K3 period plane is negative definite for Q.
struct QuadLattice {
    ZMat gram;

    int rank() const { return gram.rows(); }
    void validate(bool allow_degenerate = false) const;
};

// Sublattice given by basis vectors stored as the rows of `basis`
// (coordinates in the ambient lattice).
struct SubLattice {
    ZMat basis;

    int rank() const { return basis.rows(); }
    int ambient_rank() const { return basis.cols(); }
    static SubLattice from_rows(const std::vector<ZVec>& rows, int ambient);
    SubLattice canonical() const { return SubLattice{hnf_rows(basis)}; }
};

mpz_class bilinear(const QuadLattice& L, const ZVec& v, const ZVec& w);
mpq_class bilinear_q(const QuadLattice& L, const QVec& v, const QVec& w);
Scalar bilinear_s(const QuadLattice& L, const SVec& v, const SVec& w);

mpz_class discriminant(const QuadLattice& L);

Signature signature(const QuadLattice& L);

// Gram matrix of the restriction of Q to the sublattice.
ZMat restricted_gram(const QuadLattice& L, const SubLattice& S);

// Saturated orthogonal complement S^perp in L.  When the restriction of Q to S
// is degenerate the complement may meet S; rank(S) + rank(S^perp) still equals
// rank(L) for nondegenerate L, but the sum need not be direct.
SubLattice orthogonal_complement(const QuadLattice& L, const SubLattice& S);

// L/(S+T) for full-rank S+T, via SNF of the stacked basis matrix.
FiniteAbelianGroup cokernel_of_sum(const QuadLattice& L, const SubLattice& S, const SubLattice& T);

SubLattice saturate(const SubLattice& S);

bool sublattice_equal(const SubLattice& a, const SubLattice& b);

// intersection of the two row spans as a saturated-basis-free integer lattice
SubLattice sublattice_intersection(const SubLattice& a, const SubLattice& b);

// standard E8 Cartan Gram matrix: even, positive definite, determinant 1
ZMat e8_gram();

struct K3Data {
    QuadLattice H;  // rank 22, unimodular, signature (19,3) for Q
    ZVec h;         // primitive, Q(h) = -2d
    SubLattice P;   // h^perp, saturated, rank 21
    QuadLattice P_lattice; // restricted Gram on P's basis
};

K3Data k3_period_lattice(long d);

// Pairwise Q-orthogonal vectors spanning a finite-index sublattice, with their
// Q-values and the index.  Optional seed rows are used (and validated) first.
struct OrthoBasis {
    ZMat rows;                 // orthogonal vectors, coordinates in L
    std::vector<mpz_class> q;  // Q(w_i)
    mpz_class index;           // index of the spanned sublattice
};

OrthoBasis orthogonal_basis(const QuadLattice& L, const ZMat& seed_rows = ZMat());

} // namespace ks
