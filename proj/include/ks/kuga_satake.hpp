#pragma once

#include <utility>
#include <vector>

#include "ks/clifford.hpp"
#include "ks/matrix.hpp"

namespace ks {

// Period data: two vectors spanning a negative-definite plane, normalized so
// Q(f1) = Q(f2) = -1 and Q(f1, f2) = 0.
struct K3Period {
    CliffordContext ctx;
    SVec f1;
    SVec f2;
    bool exact = true; // false when the coordinates are big-float
};

Scalar q_bilinear(const CliffordContext& ctx, const SVec& v, const SVec& w);

// validates all period invariants; eps is used only for float coordinates
K3Period make_k3_period(const CliffordContext& ctx, SVec f1, SVec f2,
                        const Scalar* eps = nullptr);

struct PolarizedTorus {
    int rank = 0;            // 2^(n-1)
    SMat complex_structure;  // c with c^2 = -I
    ZMat polarization;       // E alternating integral
    K3Period provenance;
    int alpha_sign = 1;
    bool verified = true;    // false when invariants were checked with tolerance
};

CliffordElement basis_element(uint32_t mask);

// J = f1 * f2; J^2 = -1
CliffordElement complex_structure(const K3Period& p);

// E(v, w) = trace(alpha * iota(v) * w) with alpha = sign * e1e2, on the
// canonical even basis; one nonzero entry per row
ZMat polarization_form(const CliffordContext& ctx, int sign);

// the sign making (x, y) -> E(x, c(y)) positive definite
int choose_alpha_sign(const K3Period& p);

PolarizedTorus kuga_satake_torus(const K3Period& p);

// invariant factors d1 | d2 | ... of an alternating integral form,
// computed by symplectic reduction
std::vector<mpz_class> symplectic_type(const ZMat& E);
std::vector<mpz_class> polarization_type(const PolarizedTorus& t);

// (real dimension, complex dimension) = (2^(n-1), 2^(n-2))
std::pair<mpz_class, mpz_class> dimension_report(int n);

// Sylvester criterion via symmetric elimination pivots; eps == nullptr means
// exact signs, otherwise pivots must exceed *eps
bool symmetric_positive_definite(const SMat& M, const Scalar* eps = nullptr);

// coefficient-wise comparison with tolerance (float-mode support)
bool cl_close(const CliffordElement& a, const CliffordElement& b, const Scalar& eps);

} // namespace ks
