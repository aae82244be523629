#include "doctest.h"

#include <random>

#include "ks/galois.hpp"
#include "ks/zlinalg.hpp"

using namespace ks;

namespace {

ZMat swap2() { return ZMat::from_rows({{0, 1}, {1, 0}}); }
ZMat rot4() { return ZMat::from_rows({{0, -1}, {1, 0}}); }
ZMat u_minus_one() { return ZMat::from_rows({{0, -1}, {-1, 0}}); }

// the U(-1) hyperbolic fixture: pic = (1,1), T = (1,-1), swap action
struct SwapFixture {
    GaloisModule H;
    SubLattice pic;
    SubLattice T;
    SwapFixture()
        : H(make_galois_module(2, {swap2()}, u_minus_one())),
          pic(SubLattice::from_rows({{1, 1}}, 2)),
          T(SubLattice::from_rows({{1, -1}}, 2)) {}
};

ZMat random_signed_perm(std::mt19937& rng, int r) {
    std::vector<int> perm(r);
    for (int i = 0; i < r; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::uniform_int_distribution<int> sgn(0, 1);
    ZMat g(r, r);
    for (int i = 0; i < r; ++i) g(perm[i], i) = sgn(rng) ? 1 : -1;
    return g;
}

ZMat random_unimodular(std::mt19937& rng, int r) {
    std::uniform_int_distribution<int> d(-2, 2);
    std::uniform_int_distribution<int> idx(0, r - 1);
    ZMat u = ZMat::identity(r);
    for (int k = 0; k < 2 * r; ++k) {
        int i = idx(rng), j = idx(rng);
        if (i != j) u.add_row(i, j, mpz_class(d(rng)));
    }
    return u;
}

} // namespace

TEST_CASE("group closure") {
    auto sw = group_closure({swap2()}, 2);
    CHECK(sw.size() == 2);
    CHECK(sw[0] == ZMat::identity(2));

    CHECK(group_closure({rot4()}, 2).size() == 4);

    // S3 from a transposition and a 3-cycle
    ZMat t12 = ZMat::from_rows({{0, 1, 0}, {1, 0, 0}, {0, 0, 1}});
    ZMat c123 = ZMat::from_rows({{0, 0, 1}, {1, 0, 0}, {0, 1, 0}});
    CHECK(group_closure({t12, c123}, 3).size() == 6);

    CHECK(group_closure({}, 2).size() == 1);

    ZMat unip = ZMat::from_rows({{1, 1}, {0, 1}});
    CHECK_THROWS_AS(group_closure({unip}, 2, 50), GuardExceeded);
}

TEST_CASE("module construction validates generators") {
    CHECK_THROWS_AS(make_galois_module(2, {ZMat::from_rows({{2, 0}, {0, 1}})}), ValidationError);
    CHECK_THROWS_AS(make_galois_module(2, {ZMat::from_rows({{1, 0}})}), ValidationError);
    // swap does not preserve diag(1, 2)
    ZMat g12 = ZMat::from_rows({{1, 0}, {0, 2}});
    CHECK_THROWS_AS(make_galois_module(2, {swap2()}, g12), ValidationError);
    CHECK_THROWS_AS(make_galois_module(2, {ZMat::from_rows({{1, 1}, {0, 1}})}), GuardExceeded);
    CHECK_NOTHROW(make_galois_module(2, {swap2()}, ZMat::identity(2)));
}

TEST_CASE("invariant sublattices") {
    GaloisModule sw = make_galois_module(2, {swap2()});
    CHECK(sublattice_equal(invariants(sw), SubLattice::from_rows({{1, 1}}, 2)));

    CHECK(invariants(make_galois_module(2, {rot4()})).rank() == 0);

    GaloisModule refl = make_galois_module(2, {ZMat::from_rows({{1, 0}, {0, -1}})});
    CHECK(sublattice_equal(invariants(refl), SubLattice::from_rows({{1, 0}}, 2)));

    CHECK(invariants(make_galois_module(2, {})).rank() == 2);
}

TEST_CASE("first cohomology hand values") {
    // H^1(Z/2, Z with negation) = Z/2
    FiniteAbelianGroup a = h1_cyclic(ZMat::from_rows({{-1}}));
    CHECK(a.invariant_factors == std::vector<mpz_class>{2});

    // H^1(Z/2, Z^2 with swap) = 0
    CHECK(h1_cyclic(swap2()).trivial());
    CHECK(h1(make_galois_module(2, {swap2()})).trivial());

    // H^1(S3, permutation module Z^3) = 0
    ZMat t12 = ZMat::from_rows({{0, 1, 0}, {1, 0, 0}, {0, 0, 1}});
    ZMat c123 = ZMat::from_rows({{0, 0, 1}, {1, 0, 0}, {0, 1, 0}});
    CHECK(h1(make_galois_module(3, {t12, c123})).trivial());

    // H^1(Z/2 x Z/2, Z(chi1) + Z(chi2)) = Z/2 + Z/2
    ZMat g1 = ZMat::from_rows({{-1, 0}, {0, 1}});
    ZMat g2 = ZMat::from_rows({{1, 0}, {0, -1}});
    FiniteAbelianGroup v4 = h1(make_galois_module(2, {g1, g2}));
    CHECK(v4.invariant_factors == std::vector<mpz_class>{2, 2});

    // trivial group
    CHECK(h1(make_galois_module(2, {})).trivial());
}

TEST_CASE("general h1 agrees with the cyclic formula") {
    std::mt19937 rng(71);
    for (int t = 0; t < 20; ++t) {
        int r = 2 + t % 3;
        ZMat sigma = random_signed_perm(rng, r);
        if (t % 2) {
            ZMat u = random_unimodular(rng, r);
            sigma = u * sigma * inverse_unimodular(u);
        }
        FiniteAbelianGroup lhs = h1(make_galois_module(r, {sigma}));
        FiniteAbelianGroup rhs = h1_cyclic(sigma);
        CHECK(lhs.invariant_factors == rhs.invariant_factors);
    }
}

TEST_CASE("torsion reduction") {
    GaloisModule sw = make_galois_module(2, {swap2()});
    TorsionModule t = reduce_mod(sw, 2, 3);
    CHECK(t.modulus == 8);
    CHECK(t.rank == 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            CHECK(t.action[0](i, j) >= 0);
            CHECK(t.action[0](i, j) < 8);
        }
    CHECK_THROWS_AS(reduce_mod(sw, 4, 1), ValidationError);
    CHECK_THROWS_AS(reduce_mod(sw, 2, 0), ValidationError);
}

TEST_CASE("torsion invariant orders") {
    GaloisModule sw = make_galois_module(2, {swap2()});
    CHECK(torsion_invariant_order(reduce_mod(sw, 2, 1)) == 2);
    CHECK(torsion_invariant_order(reduce_mod(sw, 2, 2)) == 4);
    CHECK(torsion_invariant_order(reduce_mod(sw, 3, 1)) == 3);

    GaloisModule neg = make_galois_module(1, {ZMat::from_rows({{-1}})});
    CHECK(torsion_invariant_order(reduce_mod(neg, 2, 1)) == 2);
    CHECK(torsion_invariant_order(reduce_mod(neg, 2, 2)) == 2);
    CHECK(torsion_invariant_order(reduce_mod(neg, 3, 2)) == 1);

    GaloisModule rot = make_galois_module(2, {rot4()});
    CHECK(torsion_invariant_order(reduce_mod(rot, 2, 1)) == 2);
    CHECK(torsion_invariant_order(reduce_mod(rot, 2, 2)) == 2);
    CHECK(torsion_invariant_order(reduce_mod(rot, 2, 3)) == 2);

    HowellForm sub = torsion_invariant_submodule(reduce_mod(sw, 2, 2));
    CHECK(sub.module_order() == 4);
    CHECK(sub.contains(ZVec{1, 1}));
    CHECK(sub.contains(ZVec{3, 3}));
    CHECK(!sub.contains(ZVec{1, 0}));
}

TEST_CASE("restricting actions to stable sublattices") {
    SwapFixture f;
    CHECK(restrict_action(swap2(), f.pic) == ZMat::from_rows({{1}}));
    CHECK(restrict_action(swap2(), f.T) == ZMat::from_rows({{-1}}));
    CHECK_THROWS_AS(restrict_action(swap2(), SubLattice::from_rows({{1, 0}}, 2)),
                    ValidationError);

    GaloisModule tmod = restrict_module(f.H, f.T);
    CHECK(tmod.rank == 1);
    CHECK(tmod.gens[0] == ZMat::from_rows({{-1}}));
    REQUIRE(tmod.gram.has_value());
    CHECK(*tmod.gram == ZMat::from_rows({{2}}));
}

TEST_CASE("brauer quotient model") {
    SwapFixture f;
    TorsionModule b3 = brauer_model(f.H, f.pic, 3, 1);
    CHECK(b3.rank == 1);
    CHECK(b3.action[0] == ZMat::from_rows({{2}})); // -1 mod 3
    CHECK(torsion_invariant_order(b3) == 1);
    CHECK(torsion_invariant_order(reduce_mod(restrict_module(f.H, f.T), 3, 1)) == 1);

    CHECK_THROWS_AS(brauer_model(f.H, SubLattice::from_rows({{2, 2}}, 2), 3, 1),
                    ValidationError); // not saturated
    CHECK_THROWS_AS(brauer_model(f.H, SubLattice::from_rows({{1, 0}}, 2), 3, 1),
                    ValidationError); // not stable
    CHECK_THROWS_AS(brauer_model(f.H, SubLattice::from_rows({{1, 1}, {2, 2}}, 2), 3, 1),
                    ValidationError); // dependent basis rows
}

TEST_CASE("four term sequence on the hyperbolic swap fixture") {
    SwapFixture f;
    for (int n = 1; n <= 4; ++n) {
        SequenceReport r = four_term_check(f.H, f.pic, f.T, 2, n);
        mpz_class pq = mpz_class(1) << n;
        CHECK(r.K_order == 2);
        CHECK(r.pic_quotient_order == pq);
        CHECK(r.H2_invariant_order == pq);
        CHECK(r.C_invariant_order == pq);
        CHECK(r.T_invariant_order == 2);
        CHECK(r.bound == 2);
        CHECK(r.inequality_holds);
        CHECK(r.injective);
        CHECK(r.exact);
        CHECK(r.splitting_checked);
    }
    SequenceReport r3 = four_term_check(f.H, f.pic, f.T, 3, 1);
    CHECK(r3.K_order == 1);
    CHECK(r3.T_invariant_order == 1);
    CHECK(r3.H2_invariant_order == 3); // invariants of (Z/3)^2 under swap
    CHECK(r3.pic_quotient_order == 3);
    CHECK(r3.inequality_holds);
    CHECK(r3.exact);
}

TEST_CASE("four term sequence with nontrivial glue and trivial group") {
    // pic = (2,1), T = (1,2) inside diag(1,-1): glue group K = Z/3
    QuadLattice L{ZMat::from_rows({{1, 0}, {0, -1}})};
    GaloisModule H = make_galois_module(2, {}, L.gram);
    SubLattice pic = SubLattice::from_rows({{2, 1}}, 2);
    SubLattice T = orthogonal_complement(L, pic);
    CHECK(sublattice_equal(T, SubLattice::from_rows({{1, 2}}, 2)));

    SequenceReport r = four_term_check(H, pic, T, 3, 1);
    CHECK(r.K_order == 3);
    CHECK(r.pic_quotient_order == 3);
    CHECK(r.T_invariant_order == 3);
    CHECK(r.H2_invariant_order == 9);
    CHECK(r.C_invariant_order == 3);
    CHECK(r.injective);
    CHECK(r.exact);
    CHECK(r.splitting_checked);
    CHECK(r.inequality_holds);

    SequenceReport r2 = four_term_check(H, pic, T, 2, 1);
    CHECK(r2.K_order == 1);
    CHECK(r2.H2_invariant_order == 4);
    CHECK(r2.C_invariant_order == 4);
    CHECK(r2.splitting_checked);
}

TEST_CASE("k action must be trivial at the glue prime") {
    // -I stabilizes pic and T but acts by -1 on K = Z/3
    QuadLattice L{ZMat::from_rows({{1, 0}, {0, -1}})};
    GaloisModule H = make_galois_module(2, {-ZMat::identity(2)}, L.gram);
    SubLattice pic = SubLattice::from_rows({{2, 1}}, 2);
    SubLattice T = orthogonal_complement(L, pic);
    CHECK_THROWS_AS(four_term_check(H, pic, T, 3, 1), ValidationError);
    // no 3-torsion obstruction at ell = 2
    SequenceReport r = four_term_check(H, pic, T, 2, 1);
    CHECK(r.H2_invariant_order == 4);
    CHECK(r.inequality_holds);
}

TEST_CASE("four term sequence demands a full rank decomposition") {
    SwapFixture f;
    CHECK_THROWS_AS(four_term_check(f.H, f.pic, SubLattice::from_rows({}, 2), 2, 1),
                    ValidationError);
}

TEST_CASE("good prime sieve") {
    SwapFixture f;
    SieveReport r = good_prime_sieve(f.H, f.pic, f.T, {}, 1, 5);
    CHECK(r.delta == 2);
    CHECK(r.excluded == std::vector<mpz_class>{2});
    CHECK(r.ell0 == 2);
    REQUIRE(r.good_primes.size() == 5);
    mpz_class expect[5] = {3, 5, 7, 11, 13};
    for (int i = 0; i < 5; ++i) {
        CHECK(r.good_primes[i].ell == expect[i]);
        CHECK(r.good_primes[i].vanishes);
        CHECK(r.good_primes[i].t_invariant_order == 1);
        CHECK(r.good_primes[i].brauer_invariant_order == 1);
    }

    SieveReport r2 = good_prime_sieve(f.H, f.pic, f.T, {3}, 10, 3);
    CHECK(r2.excluded == std::vector<mpz_class>{2, 3, 5});
    CHECK(r2.ell0 == 5);
    CHECK(r2.good_primes[0].ell == 7);

    CHECK_THROWS_AS(good_prime_sieve(f.H, f.pic, f.T, {4}, 1, 2), ValidationError);
    CHECK_THROWS_AS(good_prime_sieve(f.H, f.pic, f.T, {}, 0, 2), ValidationError);
    GaloisModule nogram = make_galois_module(2, {swap2()});
    CHECK_THROWS_AS(good_prime_sieve(nogram, f.pic, f.T, {}, 1, 2), ValidationError);
}

TEST_CASE("stabilized invariant bounds") {
    GaloisModule rot = make_galois_module(2, {rot4()});
    StabilizedBound b = stabilized_invariant_data(rot, 2);
    CHECK(b.finite);
    CHECK(b.bound == 2);
    CHECK(b.exponent == 1);

    StabilizedBound b3 = stabilized_invariant_data(rot, 3);
    CHECK(b3.finite);
    CHECK(b3.bound == 1);

    GaloisModule triv = make_galois_module(2, {});
    CHECK(!stabilized_invariant_data(triv, 2).finite);

    GaloisModule neg = make_galois_module(1, {ZMat::from_rows({{-1}})});
    StabilizedBound bn = stabilized_invariant_data(neg, 2);
    CHECK(bn.finite);
    CHECK(bn.bound == 2);
}

TEST_CASE("bad prime bound") {
    SwapFixture f;
    CHECK(bad_prime_bound(f.H, f.pic, f.T, 2) == 2);
    CHECK(bad_prime_bound(f.H, f.pic, f.T, 3) == 1);

    // trivial action on T keeps growing with n
    QuadLattice L{ZMat::from_rows({{1, 0}, {0, -1}})};
    GaloisModule H = make_galois_module(2, {}, L.gram);
    SubLattice pic = SubLattice::from_rows({{2, 1}}, 2);
    SubLattice T = orthogonal_complement(L, pic);
    try {
        bad_prime_bound(H, pic, T, 2);
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("unbounded") != std::string::npos);
    }
}

TEST_CASE("rank one bounds agree between routes") {
    SwapFixture f;
    RankOneBound r = rank_one_bound(f.H, f.pic, f.T, 2);
    CHECK(r.finite);
    CHECK(r.bound == 2);
    CHECK(r.routes_agree);
    CHECK(rank_one_bound(f.H, f.pic, f.T, 2).bound == bad_prime_bound(f.H, f.pic, f.T, 2));

    // rank 3 transcendental part with a signed 3-cycle of order 6
    ZMat g(4, 4);
    g(0, 2) = -1;
    g(1, 0) = 1;
    g(2, 1) = 1;
    g(3, 3) = 1;
    GaloisModule H4 = make_galois_module(4, {g}, ZMat::identity(4));
    SubLattice pic4 = SubLattice::from_rows({{0, 0, 0, 1}}, 4);
    SubLattice T4 = SubLattice::from_rows({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}}, 4);
    for (long ell : {2L, 3L, 5L}) {
        RankOneBound r4 = rank_one_bound(H4, pic4, T4, ell);
        CHECK(r4.finite);
        CHECK(r4.routes_agree);
        GaloisModule tmod = restrict_module(H4, T4);
        StabilizedBound direct = stabilized_invariant_data(tmod, ell);
        CHECK(direct.finite);
        CHECK(r4.bound == direct.bound);
    }

    // pic of rank != 1 is rejected
    CHECK_THROWS_AS(rank_one_bound(H4, T4, pic4, 2), ValidationError);
}