#include "doctest.h"

#include <random>

#include "ks/clifford.hpp"

using namespace ks;

namespace {

CliffordContext ctx_q(std::vector<long> q) {
    CliffordContext c;
    for (long x : q) c.q.push_back(Scalar(x));
    return c;
}

CliffordElement mono(uint32_t mask, long coeff = 1) {
    CliffordElement e;
    e.add_term(mask, Scalar(coeff));
    return e;
}

CliffordElement random_element(std::mt19937& rng, const CliffordContext& ctx, int nterms) {
    auto masks = even_masks(ctx.n());
    std::uniform_int_distribution<size_t> pick(0, masks.size() - 1);
    std::uniform_int_distribution<int> coeff(-5, 5);
    CliffordElement e;
    for (int i = 0; i < nterms; ++i) e.add_term(masks[pick(rng)], Scalar(coeff(rng)));
    return e;
}

SVec svec(std::vector<long> v) {
    SVec s;
    for (long x : v) s.push_back(Scalar(x));
    return s;
}

// polarization B(v,w) = (Q(v+w) - Q(v) - Q(w))/2 for diagonal q
Scalar diag_bilinear(const CliffordContext& ctx, const SVec& v, const SVec& w) {
    Scalar s(0);
    for (int i = 0; i < ctx.n(); ++i) s += v[i] * w[i] * ctx.q[i];
    return s;
}

} // namespace

TEST_CASE("even basis bookkeeping") {
    CHECK(even_dim(2) == 2);
    CHECK(even_dim(3) == 4);
    CHECK(even_dim(21) == 1 << 20);
    CHECK(even_masks(3) == std::vector<uint32_t>{0, 3, 5, 6});
    for (int n = 2; n <= 6; ++n) {
        auto masks = even_masks(n);
        CHECK(static_cast<int>(masks.size()) == even_dim(n));
        for (size_t i = 0; i < masks.size(); ++i)
            CHECK(even_mask_index(masks[i], n) == static_cast<int>(i));
    }
}

TEST_CASE("context validation and guard") {
    CHECK_THROWS_AS(ctx_q({1, 0, 1}).validate(), ValidationError);
    CliffordContext small = ctx_q({-1, -1, 1, 1, 1});
    small.dense_guard = 4;
    CHECK_THROWS_AS(small.check_dense("test"), GuardExceeded);
    CHECK_THROWS_AS(left_mult_matrix(small, CliffordElement::one()), GuardExceeded);
    small.dense_guard = 5;
    CHECK_NOTHROW(small.check_dense("test"));
}

TEST_CASE("monomial products follow the sign rule") {
    CliffordContext c2 = ctx_q({-1, -1});
    // e12 * e12 = -q1 q2 = -1
    CHECK(multiply(c2, mono(3), mono(3)) == CliffordElement::scalar(Scalar(-1)));

    CliffordContext c3 = ctx_q({-1, -1, 1});
    // e12 * e13 = -q1 e23 = e23
    CHECK(multiply(c3, mono(3), mono(5)) == mono(6));
    // e13 * e12 = q1 e23 = -e23
    CHECK(multiply(c3, mono(5), mono(3)) == mono(6, -1));
    // e23 * e23 = -q2 q3 = 1
    CHECK(multiply(c3, mono(6), mono(6)) == CliffordElement::one());
    // unit is neutral
    CHECK(multiply(c3, CliffordElement::one(), mono(6)) == mono(6));
}

TEST_CASE("algebra laws on random elements") {
    CliffordContext ctx = ctx_q({-1, -1, 1, 2});
    std::mt19937 rng(41);
    for (int t = 0; t < 20; ++t) {
        CliffordElement a = random_element(rng, ctx, 4);
        CliffordElement b = random_element(rng, ctx, 4);
        CliffordElement c = random_element(rng, ctx, 3);
        CHECK(multiply(ctx, multiply(ctx, a, b), c) == multiply(ctx, a, multiply(ctx, b, c)));
        CHECK(multiply(ctx, a, cl_add(b, c)) ==
              cl_add(multiply(ctx, a, b), multiply(ctx, a, c)));
        CHECK(multiply(ctx, cl_sub(a, b), c) ==
              cl_sub(multiply(ctx, a, c), multiply(ctx, b, c)));
        CHECK(cl_scale(multiply(ctx, a, b), Scalar(3)) ==
              multiply(ctx, cl_scale(a, Scalar(3)), b));
        // reversal is an anti-involution
        CHECK(iota(multiply(ctx, a, b)) == multiply(ctx, iota(b), iota(a)));
        CHECK(iota(iota(a)) == a);
    }
}

TEST_CASE("vector products satisfy the clifford relation") {
    CliffordContext ctx = ctx_q({-1, -1, 1, 3});
    std::mt19937 rng(42);
    std::uniform_int_distribution<int> d(-4, 4);
    for (int t = 0; t < 15; ++t) {
        SVec v = svec({d(rng), d(rng), d(rng), d(rng)});
        SVec w = svec({d(rng), d(rng), d(rng), d(rng)});
        // v*v = Q(v)
        CHECK(embed_vector_product(ctx, v, v) ==
              CliffordElement::scalar(diag_bilinear(ctx, v, v)));
        // v*w + w*v = 2 B(v,w)
        CliffordElement sum = cl_add(embed_vector_product(ctx, v, w),
                                     embed_vector_product(ctx, w, v));
        CHECK(sum == CliffordElement::scalar(diag_bilinear(ctx, v, w) * Scalar(2)));
        // wedge is the antisymmetric half
        CliffordElement wd = wedge(ctx, v, w);
        CHECK(cl_add(wd, CliffordElement::scalar(diag_bilinear(ctx, v, w))) ==
              embed_vector_product(ctx, v, w));
    }
}

TEST_CASE("iota on monomials") {
    // iota(e12) = e2 e1 = -e12
    CHECK(iota(mono(3)) == mono(3, -1));
    // iota(e1234) = e4 e3 e2 e1 = e1234 (three transpositions twice: sign +)
    CHECK(iota(mono(15)) == mono(15));
    CHECK(iota(CliffordElement::one()) == CliffordElement::one());
}

TEST_CASE("trace of left multiplication") {
    CliffordContext ctx = ctx_q({-1, -1, 1});
    CHECK(cl_trace(ctx, CliffordElement::one()) == Scalar(4));
    CHECK(cl_trace(ctx, mono(3)) == Scalar(0));
    CHECK(cl_trace(ctx, mono(6, 7)) == Scalar(0));
    // trace is linear
    std::mt19937 rng(43);
    CliffordElement a = random_element(rng, ctx, 3);
    CliffordElement b = random_element(rng, ctx, 3);
    CHECK(cl_trace(ctx, cl_add(a, b)) == cl_trace(ctx, a) + cl_trace(ctx, b));
    // only the unit coefficient contributes
    CHECK(cl_trace(ctx, a) == a.coeff(0) * Scalar(4));
}

TEST_CASE("left multiplication matrices represent the algebra") {
    CliffordContext ctx = ctx_q({-1, -1});
    // basis (1, e12): columns of LM(e12) are e12*1 and e12*e12 = -1
    SMat m = left_mult_matrix(ctx, mono(3));
    CHECK(m(0, 0) == Scalar(0));
    CHECK(m(1, 0) == Scalar(1));
    CHECK(m(0, 1) == Scalar(-1));
    CHECK(m(1, 1) == Scalar(0));

    CliffordContext c4 = ctx_q({-1, -1, 1, 2});
    std::mt19937 rng(44);
    for (int t = 0; t < 8; ++t) {
        CliffordElement a = random_element(rng, c4, 3);
        CliffordElement b = random_element(rng, c4, 3);
        CHECK(left_mult_matrix(c4, a) * left_mult_matrix(c4, b) ==
              left_mult_matrix(c4, multiply(c4, a, b)));
    }

    // integral form agrees when coefficients are integers
    CliffordElement z = mono(3, 2);
    ZMat zm = left_mult_matrix_z(c4, z);
    SMat sm = left_mult_matrix(c4, z);
    for (int i = 0; i < zm.rows(); ++i)
        for (int j = 0; j < zm.cols(); ++j) CHECK(Scalar(zm(i, j)) == sm(i, j));
}

TEST_CASE("sandwich maps square to q1 Q(v)") {
    CliffordContext ctx = ctx_q({-1, -1, 1});
    // S(v) y = v y e1, so S(v)^2 y = v (v y e1) e1 = Q(v) q1 y
    std::mt19937 rng(45);
    std::uniform_int_distribution<int> d(-3, 3);
    for (int t = 0; t < 10; ++t) {
        SVec v = svec({d(rng), d(rng), d(rng)});
        SMat s = sandwich_e1_matrix(ctx, v);
        SMat s2 = s * s;
        Scalar want = diag_bilinear(ctx, v, v) * ctx.q[0];
        for (int i = 0; i < s2.rows(); ++i)
            for (int j = 0; j < s2.cols(); ++j)
                CHECK(s2(i, j) == (i == j ? want : Scalar(0)));
    }
    // frozen rank-2 case: p(e1) on basis (1, e12) is diag(-1, 1)
    CliffordContext c2 = ctx_q({-1, -1});
    SMat p = sandwich_e1_matrix(c2, svec({1, 0}));
    CHECK(p(0, 0) == Scalar(-1));
    CHECK(p(1, 1) == Scalar(1));
    CHECK(p(0, 1) == Scalar(0));
    CHECK(p(1, 0) == Scalar(0));
}
