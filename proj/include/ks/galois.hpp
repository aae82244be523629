#pragma once

#include <optional>
#include <vector>

#include "ks/howell.hpp"
#include "ks/lattice.hpp"
#include "ks/matrix.hpp"

namespace ks {

// Finite matrix group acting on Z^rank, optionally preserving a Gram matrix.
struct GaloisModule {
    int rank = 0;
    std::vector<ZMat> gens;
    std::optional<ZMat> gram;
};

inline constexpr int kClosureBound = 10000;

// all group elements by breadth-first closure; identity first; deterministic order
std::vector<ZMat> group_closure(const std::vector<ZMat>& gens, int rank,
                                int bound = kClosureBound);

// validates: square generators of determinant +-1, finite closure, gram preserved
GaloisModule make_galois_module(int rank, std::vector<ZMat> gens,
                                std::optional<ZMat> gram = std::nullopt,
                                int closure_bound = kClosureBound);

// saturated fixed lattice M^Gamma = ker of stacked (g - I)
SubLattice invariants(const GaloisModule& M);

// first cohomology via cocycle linear algebra on the closure graph
FiniteAbelianGroup h1(const GaloisModule& M, int closure_bound = kClosureBound);

// ker(Norm)/im(sigma - 1) for the cyclic group generated by sigma
FiniteAbelianGroup h1_cyclic(const ZMat& sigma, int closure_bound = kClosureBound);

struct TorsionModule {
    mpz_class ell;
    int n = 0;
    mpz_class modulus; // ell^n
    int rank = 0;
    std::vector<ZMat> action; // entries reduced into [0, modulus)
};

TorsionModule reduce_mod(const GaloisModule& M, const mpz_class& ell, int n);

// order of the simultaneous kernel of (g - I) over Z/ell^n
mpz_class torsion_invariant_order(const TorsionModule& T);
HowellForm torsion_invariant_submodule(const TorsionModule& T);

// action of g on the coordinates of a stable sublattice; error when not stable
ZMat restrict_action(const ZMat& g, const SubLattice& S);
GaloisModule restrict_module(const GaloisModule& M, const SubLattice& S);

// (H/ell^n)/(pic/ell^n) with the induced action; pic must be saturated and stable
TorsionModule brauer_model(const GaloisModule& H, const SubLattice& pic,
                           const mpz_class& ell, int n);

struct SievePrimeReport {
    mpz_class ell;
    mpz_class t_invariant_order;      // |(T/ell)^Gamma|
    mpz_class brauer_invariant_order; // invariants of the quotient model
    bool vanishes = false;            // both orders are 1
};

struct SieveReport {
    mpz_class delta;                 // |disc| of pic
    std::vector<mpz_class> excluded; // sorted, deduplicated
    mpz_class ell0;                  // max excluded prime, or 1
    std::vector<SievePrimeReport> good_primes;
};

SieveReport good_prime_sieve(const GaloisModule& H, const SubLattice& pic,
                             const SubLattice& T, const std::vector<mpz_class>& exclusions,
                             const mpz_class& M_mw, int scan_count = 8);

struct SequenceReport {
    mpz_class ell;
    int n = 0;
    mpz_class K_order;            // |Tor_1(K, Z/ell^n)| = |K[ell^n]|
    mpz_class C_invariant_order;  // |C^Gamma| for C = coker(K[ell^n] -> Pic + T / ell^n)
    mpz_class H2_invariant_order; // |(H/ell^n)^Gamma|
    mpz_class pic_quotient_order; // |Pic/ell^n|
    mpz_class T_invariant_order;  // |(T/ell^n)^Gamma|
    mpz_class bound;              // = T_invariant_order
    bool inequality_holds = false;
    bool injective = false;         // K[ell^n] -> Pic/ell^n
    bool exact = false;             // order + containment checks at every joint
    bool splitting_checked = false; // |K| * |C^Gamma| = |Pic/ell^n| * |(T/ell^n)^Gamma|
};

SequenceReport four_term_check(const GaloisModule& H, const SubLattice& pic,
                               const SubLattice& T, const mpz_class& ell, int n);

// stabilized supremum of torsion_invariant_order over n, with certificate data
struct StabilizedBound {
    bool finite = false;
    int exponent = 0; // orders agree from this n on
    mpz_class bound;  // meaningful only when finite
};

StabilizedBound stabilized_invariant_data(const GaloisModule& M, const mpz_class& ell);

// sup over n of |(T/ell^n)^Gamma|; throws when the invariants grow without bound
mpz_class bad_prime_bound(const GaloisModule& H, const SubLattice& pic,
                          const SubLattice& T, const mpz_class& ell);

struct RankOneBound {
    bool finite = false;
    mpz_class bound;
    bool routes_agree = false; // direct vs top-wedge-twist computation
};

RankOneBound rank_one_bound(const GaloisModule& H, const SubLattice& pic,
                            const SubLattice& T, const mpz_class& ell);

} // namespace ks
