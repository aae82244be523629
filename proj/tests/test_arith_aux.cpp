#include "doctest.h"

#include <random>

#include "ks/arith_aux.hpp"
#include "ks/galois.hpp"
#include "ks/zlinalg.hpp"

using namespace ks;

namespace {

ZMat random_signed_perm(std::mt19937& rng, int r) {
    std::vector<int> perm(r);
    for (int i = 0; i < r; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::uniform_int_distribution<int> sgn(0, 1);
    ZMat g(r, r);
    for (int i = 0; i < r; ++i) g(perm[i], i) = sgn(rng) ? 1 : -1;
    return g;
}

unsigned long lcm_ul(unsigned long a, unsigned long b) {
    mpz_class l;
    mpz_lcm_ui(l.get_mpz_t(), mpz_class(a).get_mpz_t(), b);
    return l.get_ui();
}

} // namespace

TEST_CASE("neat congruence levels") {
    NeatCertificate c1 = neat_congruence_level(1);
    CHECK(c1.prime == 3);
    CHECK(c1.n_factorial == 1);
    CHECK(neat_congruence_level(2).prime == 5);
    NeatCertificate c3 = neat_congruence_level(3);
    CHECK(c3.prime == 11);
    CHECK(c3.n_factorial == 6);

    for (int n = 1; n <= 10; ++n) {
        NeatCertificate c = neat_congruence_level(n);
        CHECK(is_prime(c.prime));
        CHECK(c.prime - 1 > c.n_factorial);
        // minimality: no smaller prime satisfies the bound
        mpz_class p = 2;
        while (p < c.prime) {
            CHECK(p - 1 <= c.n_factorial);
            mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
        }
    }
}

TEST_CASE("finite order detection") {
    CHECK(has_finite_order(ZMat::identity(3)));
    CHECK(has_finite_order(ZMat::from_rows({{0, -1}, {1, 0}})));
    CHECK(has_finite_order(ZMat::from_rows({{0, 1}, {1, 0}})));
    CHECK(has_finite_order(ZMat::from_rows({{0, -1}, {1, -1}}))); // order 3
    CHECK(!has_finite_order(ZMat::from_rows({{1, 1}, {0, 1}})));
    CHECK(!has_finite_order(ZMat::from_rows({{2, 0}, {0, 1}})));
    // char poly (x-1)^2 but unipotent: cyclotomic product alone is not enough
    CHECK(!has_finite_order(ZMat::from_rows({{1, 5}, {0, 1}})));
}

TEST_CASE("cyclotomic orders read off the rotation structure") {
    CHECK(cyclotomic_orders(ZMat::from_rows({{0, -1}, {1, 0}})) ==
          std::vector<unsigned long>{4});
    CHECK(cyclotomic_orders(-ZMat::identity(2)) == std::vector<unsigned long>{2, 2});
    CHECK(cyclotomic_orders(ZMat::identity(2)) == std::vector<unsigned long>{1, 1});
    CHECK(cyclotomic_orders(ZMat::from_rows({{2, 0}, {0, 1}})).empty());

    // g^N = I for N = lcm of the orders, and no smaller power of a generator set
    std::mt19937 rng(81);
    for (int t = 0; t < 15; ++t) {
        int r = 2 + t % 4;
        ZMat g = random_signed_perm(rng, r);
        CHECK(has_finite_order(g));
        auto orders = cyclotomic_orders(g);
        CHECK(!orders.empty());
        unsigned long N = 1;
        for (unsigned long d : orders) N = lcm_ul(N, d);
        ZMat p = ZMat::identity(r);
        for (unsigned long i = 0; i < N; ++i) p = p * g;
        CHECK(p == ZMat::identity(r));
    }
}

TEST_CASE("congruence membership") {
    CHECK(congruence_membership(ZMat::identity(2), 3));
    CHECK(congruence_membership(ZMat::from_rows({{4, 3}, {-3, 7}}), 3));
    CHECK(!congruence_membership(ZMat::from_rows({{0, 1}, {1, 0}}), 3));
    CHECK(!congruence_membership(ZMat::from_rows({{1, 1}, {0, 1}}), 3));
}

TEST_CASE("fujino separation evaluations") {
    // dim 1, c = (2): 2^(1/1) * 1 / 2 = 1 <= 1
    CHECK(fujino_separation_check(1, {2}) == TriState::yes);
    // dim 2, c = (4,4): 2/4 + 2*sqrt(2)/4 > 1
    CHECK(fujino_separation_check(2, {4, 4}) == TriState::no);
    // dim 1, c = (19/10): 2/(19/10) = 20/19 > 1
    CHECK(fujino_separation_check(1, {mpq_class(19, 10)}) == TriState::no);

    // raising c keeps a yes a yes (every interval endpoint shrinks)
    CHECK(fujino_separation_check(2, {8, 8}) == TriState::yes);
    CHECK(fujino_separation_check(2, {8, 9}) == TriState::yes);
    CHECK(fujino_separation_check(3, {12, 12, 12}) == TriState::yes);

    CHECK_THROWS_AS(fujino_separation_check(2, {4}), ValidationError);
    CHECK_THROWS_AS(fujino_separation_check(1, {0}), ValidationError);
    CHECK_THROWS_AS(fujino_separation_check(0, {}), ValidationError);
}

TEST_CASE("fujino certificates sharpen with precision") {
    // at very low precision the k >= 2 brackets may be indeterminate, never wrong
    std::vector<mpq_class> c{4, mpq_class(566, 100)};
    // 2/4 + 2 sqrt(2)/5.66: sqrt(2) ~ 1.41421, term2 ~ 0.49972 -> just under 1
    TriState coarse = fujino_separation_check(2, c, 8);
    TriState fine = fujino_separation_check(2, c, 256);
    CHECK(fine == TriState::yes);
    CHECK((coarse == TriState::yes || coarse == TriState::indeterminate));
}

TEST_CASE("prime helpers") {
    CHECK(prime_factors(12) == std::vector<mpz_class>{2, 3});
    CHECK(prime_factors(-30) == std::vector<mpz_class>{2, 3, 5});
    CHECK(prime_factors(1).empty());
    CHECK(prime_factors(97) == std::vector<mpz_class>{97});
    CHECK_THROWS_AS(prime_factors(0), ValidationError);

    CHECK(is_prime(2));
    CHECK(is_prime(97));
    CHECK(!is_prime(1));
    CHECK(!is_prime(91)); // 7 * 13

    CHECK(valuation(48, 2) == 4);
    CHECK(valuation(48, 3) == 1);
    CHECK(valuation(-8, 2) == 3);
    CHECK(valuation(7, 2) == 0);
}
