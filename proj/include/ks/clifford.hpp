#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "ks/matrix.hpp"

namespace ks {

// Even Clifford algebra C^+ of a diagonalized quadratic form q_1,...,q_n.
// Basis elements e_S for subsets S of even size, encoded as bitmasks; basis
// order is increasing mask value, so index 0 is the empty set (the unit).
struct CliffordContext {
    std::vector<Scalar> q;          // diagonal values, all nonzero
    int dense_guard = 0;            // 0 means "use default"
    mpz_class sublattice_index = 1; // index of the diagonal sublattice in its source

    int n() const { return static_cast<int>(q.size()); }
    int guard() const;
    void validate() const;
    void check_dense(const char* what) const;

    static int default_guard(); // KS_GUARD_RANK env override, else 13
};

struct CliffordElement {
    std::map<uint32_t, Scalar> terms; // even-popcount masks -> nonzero coefficients

    bool is_zero() const { return terms.empty(); }
    void add_term(uint32_t mask, const Scalar& c);
    Scalar coeff(uint32_t mask) const;
    void validate_even() const;

    static CliffordElement one();
    static CliffordElement scalar(const Scalar& c);

    bool operator==(const CliffordElement& o) const { return terms == o.terms; }
    bool operator!=(const CliffordElement& o) const { return !(*this == o); }
};

int even_dim(int n);
std::vector<uint32_t> even_masks(int n);
int even_mask_index(uint32_t mask, int n);

CliffordElement cl_add(const CliffordElement& a, const CliffordElement& b);
CliffordElement cl_sub(const CliffordElement& a, const CliffordElement& b);
CliffordElement cl_neg(const CliffordElement& a);
CliffordElement cl_scale(const CliffordElement& a, const Scalar& s);

// product of basis monomials e_S * e_T = sign * (prod q over S cap T) * e_{S xor T}
CliffordElement mul_masks(const CliffordContext& ctx, uint32_t S, uint32_t T,
                          const Scalar& coeff);

CliffordElement multiply(const CliffordContext& ctx, const CliffordElement& a,
                         const CliffordElement& b);

// v * w as an even element (scalar part + degree-2 part)
CliffordElement embed_vector_product(const CliffordContext& ctx, const SVec& v, const SVec& w);

// (v*w - w*v)/2, the degree-2 part of v*w
CliffordElement wedge(const CliffordContext& ctx, const SVec& v, const SVec& w);

// reversal anti-involution e_{i1}...e_{ik} -> e_{ik}...e_{i1}
CliffordElement iota(const CliffordElement& a);

// trace of left multiplication on C^+
Scalar cl_trace(const CliffordContext& ctx, const CliffordElement& a);

// dense matrix of x -> a*x on the even basis (guarded)
SMat left_mult_matrix(const CliffordContext& ctx, const CliffordElement& a);
ZMat left_mult_matrix_z(const CliffordContext& ctx, const CliffordElement& a);

// matrix of x -> v * x * e1 on the even basis, v a degree-1 vector (guarded)
SMat sandwich_e1_matrix(const CliffordContext& ctx, const SVec& v);

} // namespace ks
