#pragma once

#include <vector>

#include "ks/galois.hpp"
#include "ks/kuga_satake.hpp"
#include "ks/lattice.hpp"

namespace ks {

// Integer sublattice of an endomorphism (or plain coordinate) lattice,
// stored as flattened rows; side > 0 when the rows are square matrices.
struct EndoLattice {
    int side = 0;
    ZMat flat; // k x (side*side) when side > 0

    int rank() const { return flat.rows(); }
    ZMat matrix_at(int i) const;

    static EndoLattice from_matrices(const std::vector<ZMat>& mats);
    static EndoLattice from_rows(const ZMat& rows); // generic harness form
};

// tu(c): left multiplication by c on C^+, a ring homomorphism
ZMat tu_map(const CliffordContext& ctx, const CliffordElement& c);
SMat tu_map_s(const CliffordContext& ctx, const CliffordElement& c);

// the induced map on the dual (transpose); tu is the primary convention
ZMat u_dual(const CliffordContext& ctx, const CliffordElement& c);

// p(v): y -> v * y * e1 on C^+
SMat p_embedding(const CliffordContext& ctx, const SVec& v);
ZMat p_embedding_z(const CliffordContext& ctx, const ZVec& v);

// type (0,0) <=> commutes with the complex structure
bool hodge_type_00(const SMat& m, const PolarizedTorus& t, const Scalar* eps = nullptr);

struct PicardResult {
    SubLattice lattice; // saturated rows in the diagonal coordinates of P
    bool certified = true;
};

// integer kernel of v -> (Q(v,f1), Q(v,f2)); certified in exact mode
PicardResult picard_from_period(const K3Period& p);

// oracle route: {v : p_embedding(v) commutes with the complex structure}
SubLattice picard_via_commutant(const K3Period& p);

// float-mode candidate search by integer-relation lattice reduction
PicardResult picard_candidates_float(const K3Period& p, const mpz_class& quality);

// saturation of Z*h + (Picard of the period, mapped through the orthogonal
// basis rows `diag_to_p` into P's coordinates and then into H)
struct FullPicard {
    SubLattice lattice; // rows in H coordinates
    mpz_class disc;     // |det| of the restricted Gram
    bool certified = true;
};

FullPicard picard_full(const K3Data& k3, const ZMat& diag_to_p, const K3Period& p);

// integral commutant of c inside End(Z^dim)
EndoLattice commutant(const SMat& c);

// span of left multiplication by wedge(m, t_i) over a basis of T
EndoLattice wedge_family(const CliffordContext& ctx, const ZVec& m, const SubLattice& T);

// primes where reduction of A + B (direct sum assumed over Q) loses injectivity
std::vector<mpz_class> disjointness_exclusion_primes(const EndoLattice& A, const EndoLattice& B);

// exterior power of a module action; k = rank gives the determinant character;
// twist_by_det multiplies every generator by its determinant
GaloisModule top_wedge_twist(const GaloisModule& M, int k, bool twist_by_det = false);

} // namespace ks
