#pragma once

#include <vector>

#include "ks/matrix.hpp"

namespace ks {

struct NeatCertificate {
    int n = 0;
    mpz_class prime;
    mpz_class n_factorial; // recorded so the bound prime - 1 > n! is auditable
};

// smallest prime ell with ell - 1 > n!; the level-ell principal congruence
// subgroup of GL_n(Z) is then neat
NeatCertificate neat_congruence_level(int n);

// finite order <=> characteristic polynomial is a product of cyclotomics and
// the radical of that product annihilates g
bool has_finite_order(const ZMat& g);

// orders d of the cyclotomic factors found by trial division; empty when the
// characteristic polynomial is not a product of cyclotomics
std::vector<unsigned long> cyclotomic_orders(const ZMat& g);

bool congruence_membership(const ZMat& g, const mpz_class& ell);

enum class TriState { yes, no, indeterminate };

// certified evaluation of sum_k 2^(1/k) * k / c(k) <= 1 by outward-rounded
// rational intervals for the roots
TriState fujino_separation_check(int dim, const std::vector<mpq_class>& c,
                                 int precision_bits = 128);

// distinct prime divisors of |n|, increasing; n must be nonzero
std::vector<mpz_class> prime_factors(const mpz_class& n);

bool is_prime(const mpz_class& p);

// largest e with ell^e | n (n nonzero)
int valuation(const mpz_class& n, const mpz_class& ell);

} // namespace ks
