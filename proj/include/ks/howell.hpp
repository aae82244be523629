#pragma once

#include "ks/matrix.hpp"

namespace ks {

// Canonical Howell normal form of a row-generated module over Z/ell^n.
// Pivot of each row is a power of ell; entries above a pivot are reduced
// modulo that pivot; equal modules have byte-identical forms.
struct HowellForm {
    mpz_class ell;
    int n = 0;
    mpz_class modulus;           // ell^n
    ZMat rows;                   // canonical generators, entries in [0, modulus)
    std::vector<int> pivot_col;  // per row
    std::vector<int> pivot_exp;  // valuation a_i of the pivot ell^{a_i}

    // order of the generated module: prod ell^{n - a_i}
    mpz_class module_order() const;
    bool contains(ZVec v) const;
};

HowellForm howell_form(const ZMat& generators, const mpz_class& ell, int n);

// Rows generating {x : A x = 0 over Z/ell^n} (x column vectors), canonical.
HowellForm howell_kernel(const ZMat& A, const mpz_class& ell, int n);

mpz_class kernel_order_mod(const ZMat& A, const mpz_class& ell, int n);

} // namespace ks
