#include "ks/kuga_satake.hpp"

#include "ks/errors.hpp"
#include "ks/zlinalg.hpp"

namespace ks {

Scalar q_bilinear(const CliffordContext& ctx, const SVec& v, const SVec& w) {
    int n = ctx.n();
    require(static_cast<int>(v.size()) == n && static_cast<int>(w.size()) == n,
            "vector length does not match context rank");
    Scalar acc(0);
    for (int i = 0; i < n; ++i) {
        if (v[i].is_zero() || w[i].is_zero()) continue;
        acc += v[i] * w[i] * ctx.q[i];
    }
    return acc;
}

namespace {

bool scalar_close(const Scalar& a, const Scalar& b, const Scalar* eps) {
    if (eps == nullptr) return a == b;
    return (a - b).within(*eps);
}

} // namespace

K3Period make_k3_period(const CliffordContext& ctx, SVec f1, SVec f2, const Scalar* eps) {
    ctx.validate();
    require(ctx.n() >= 2, "period needs rank at least 2");
    bool exact = true;
    for (const auto& x : f1)
        if (x.mode() == ScalarMode::BigFloat) exact = false;
    for (const auto& x : f2)
        if (x.mode() == ScalarMode::BigFloat) exact = false;
    const Scalar* tol = exact ? nullptr : eps;
    if (!exact) require(eps != nullptr, "float-mode period needs a tolerance");

    Scalar minus_one(-1), zero(0);
    require(scalar_close(q_bilinear(ctx, f1, f1), minus_one, tol), "Q(f1) must be -1");
    require(scalar_close(q_bilinear(ctx, f2, f2), minus_one, tol), "Q(f2) must be -1");
    require(scalar_close(q_bilinear(ctx, f1, f2), zero, tol), "f1 and f2 must be orthogonal");

    K3Period p{ctx, std::move(f1), std::move(f2), exact};
    return p;
}

CliffordElement basis_element(uint32_t mask) {
    CliffordElement e;
    e.add_term(mask, Scalar(1));
    return e;
}

CliffordElement complex_structure(const K3Period& p) {
    CliffordElement J = embed_vector_product(p.ctx, p.f1, p.f2);
    CliffordElement sq = multiply(p.ctx, J, J);
    if (p.exact) {
        check_invariant(sq == CliffordElement::scalar(Scalar(-1)), "J^2 != -1");
    }
    return J;
}

ZMat polarization_form(const CliffordContext& ctx, int sign) {
    ctx.check_dense("polarization_form");
    require(sign == 1 || sign == -1, "sign must be +1 or -1");
    require(ctx.n() >= 2, "polarization needs rank at least 2");
    require(ctx.q[0].sign() < 0 && ctx.q[1].sign() < 0,
            "e1, e2 must span a negative-definite plane");

    int n = ctx.n();
    auto basis = even_masks(n);
    int dim = static_cast<int>(basis.size());
    CliffordElement alpha;
    alpha.add_term(3u, Scalar(sign));

    ZMat E(dim, dim);
    mpz_class half_dim = mpz_class(1) << (n - 1);
    for (int i = 0; i < dim; ++i) {
        uint32_t S = basis[i];
        uint32_t T = S ^ 3u; // the only column with a scalar component
        int j = even_mask_index(T, n);
        CliffordElement prod =
            multiply(ctx, multiply(ctx, alpha, iota(basis_element(S))), basis_element(T));
        Scalar tr = prod.coeff(0) * Scalar(half_dim);
        require(tr.is_rational(), "polarization entry is not rational");
        mpq_class q = tr.as_rational();
        require(q.get_den() == 1, "polarization entry is not an integer");
        E(i, j) = q.get_num();
    }
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            check_invariant(E(i, j) == -E(j, i), "polarization form is not alternating");
    return E;
}

namespace {

// c = matrix of x -> -Jx, G = E(+1) * c; the torus keeps sign * E
struct Assembly {
    SMat c;
    ZMat Eplus;
    SMat Gplus;
};

Assembly assemble(const K3Period& p) {
    p.ctx.check_dense("kuga_satake_torus");
    CliffordElement J = complex_structure(p);
    CliffordElement minusJ = cl_neg(J);
    Assembly a;
    a.c = left_mult_matrix(p.ctx, minusJ);
    a.Eplus = polarization_form(p.ctx, 1);

    int dim = a.c.rows();
    int n = p.ctx.n();
    auto basis = even_masks(n);
    // G = E * c, using the single nonzero E(i, sigma(i))
    a.Gplus = SMat(dim, dim, Scalar(0));
    for (int i = 0; i < dim; ++i) {
        int k = even_mask_index(basis[i] ^ 3u, n);
        Scalar e(a.Eplus(i, k));
        if (e.is_zero()) continue;
        for (int j = 0; j < dim; ++j) a.Gplus(i, j) = e * a.c(k, j);
    }
    return a;
}

} // namespace

bool symmetric_positive_definite(const SMat& M, const Scalar* eps) {
    require(M.rows() == M.cols(), "matrix must be square");
    int n = M.rows();
    SMat W = M;
    for (int k = 0; k < n; ++k) {
        const Scalar& piv = W(k, k);
        if (eps == nullptr) {
            if (piv.sign() <= 0) return false;
        } else {
            if ((piv - *eps).sign() <= 0) return false;
        }
        for (int i = k + 1; i < n; ++i) {
            if (W(i, k).is_zero()) continue;
            Scalar f = W(i, k) / piv;
            for (int j = k + 1; j < n; ++j) {
                if (W(k, j).is_zero()) continue;
                W(i, j) -= f * W(k, j);
            }
        }
    }
    return true;
}

int choose_alpha_sign(const K3Period& p) {
    Assembly a = assemble(p);
    Scalar eps(mpq_class(1, 1000000));
    const Scalar* tol = p.exact ? nullptr : &eps;
    bool plus = symmetric_positive_definite(a.Gplus, tol);
    SMat Gminus = -a.Gplus;
    bool minus = symmetric_positive_definite(Gminus, tol);
    check_invariant(plus != minus, "polarization definiteness is not decided by the sign");
    return plus ? 1 : -1;
}

PolarizedTorus kuga_satake_torus(const K3Period& p) {
    Assembly a = assemble(p);
    int dim = a.c.rows();
    int n = p.ctx.n();

    Scalar eps(mpq_class(1, 1000000));
    const Scalar* tol = p.exact ? nullptr : &eps;

    bool plus = symmetric_positive_definite(a.Gplus, tol);
    int sign;
    if (plus) {
        sign = 1;
    } else {
        SMat Gminus = -a.Gplus;
        check_invariant(symmetric_positive_definite(Gminus, tol),
                        "polarization definiteness is not decided by the sign");
        sign = -1;
    }

    PolarizedTorus t;
    t.rank = dim;
    t.complex_structure = a.c;
    t.polarization = sign == 1 ? a.Eplus : a.Eplus.scaled(mpz_class(-1));
    t.provenance = p;
    t.alpha_sign = sign;
    t.verified = p.exact;

    // c^2 = -I
    SMat c2 = a.c * a.c;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            Scalar want(i == j ? -1 : 0);
            if (p.exact)
                check_invariant(c2(i, j) == want, "c^2 != -I");
            else
                check_invariant((c2(i, j) - want).within(eps), "c^2 != -I");
        }

    // E alternating
    const ZMat& E = t.polarization;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            check_invariant(E(i, j) == -E(j, i), "E is not alternating");

    // E(cx, cy) = E(x, y), as c^T E = -E c (c^{-1} = -c); both sides are
    // cheap because E has one nonzero per row and per column
    auto basis = even_masks(n);
    for (int i = 0; i < dim; ++i) {
        int si = even_mask_index(basis[i] ^ 3u, n);
        Scalar ei(E(i, si));
        for (int j = 0; j < dim; ++j) {
            int sj = even_mask_index(basis[j] ^ 3u, n);
            // (c^T E)(i, j) = c(sj, i) E(sj, j); (E c)(i, j) = E(i, si) c(si, j)
            Scalar lhs = a.c(sj, i) * Scalar(E(sj, j));
            Scalar rhs = ei * a.c(si, j);
            if (p.exact)
                check_invariant(lhs == -rhs, "E(cx, cy) != E(x, y)");
            else
                check_invariant((lhs + rhs).within(eps), "E(cx, cy) != E(x, y)");
        }
    }

    return t;
}

std::vector<mpz_class> symplectic_type(const ZMat& Ein) {
    require(Ein.rows() == Ein.cols(), "form must be square");
    int n = Ein.rows();
    require(n % 2 == 0, "alternating form of odd rank is degenerate");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            require(Ein(i, j) == -Ein(j, i), "form is not alternating");
    require(det_bareiss(Ein) != 0, "form is degenerate");

    ZMat E = Ein;
    std::vector<mpz_class> type;
    int base = 0;
    auto swap_pair = [&](int a, int b) {
        if (a == b) return;
        E.swap_rows(a, b);
        E.swap_cols(a, b);
    };
    auto add_pair = [&](int dst, int src, const mpz_class& f) {
        // congruence: row dst += f * row src, then same on columns
        for (int j = 0; j < n; ++j) E(dst, j) += f * E(src, j);
        for (int i = 0; i < n; ++i) E(i, dst) += f * E(i, src);
    };

    while (base < n) {
        // locate the minimal nonzero entry in the trailing block
        int pi = -1, pj = -1;
        mpz_class best = 0;
        for (int i = base; i < n; ++i)
            for (int j = base; j < n; ++j) {
                if (E(i, j) == 0) continue;
                mpz_class a = abs(E(i, j));
                if (pi < 0 || a < best) {
                    best = a;
                    pi = i;
                    pj = j;
                }
            }
        check_invariant(pi >= 0, "nondegenerate form ran out of pivots");
        swap_pair(base, pi);
        if (pj == base) pj = pi;
        swap_pair(base + 1, pj);
        if (E(base, base + 1) < 0) swap_pair(base, base + 1);
        mpz_class d = E(base, base + 1);

        // reduce the rest of rows base, base+1 modulo d
        bool restart = false;
        for (int j = base + 2; j < n && !restart; ++j) {
            if (E(base, j) % d != 0) {
                mpz_class f = -(E(base, j) / d);
                add_pair(j, base + 1, f);
                restart = true;
            } else if (E(base + 1, j) % d != 0) {
                mpz_class f = E(base + 1, j) / d;
                add_pair(j, base, f);
                restart = true;
            }
        }
        if (restart) continue; // a smaller entry now exists

        // clear rows base, base+1 exactly
        for (int j = base + 2; j < n; ++j) {
            if (E(base, j) != 0) add_pair(j, base + 1, -(E(base, j) / d));
            if (E(base + 1, j) != 0) add_pair(j, base, E(base + 1, j) / d);
        }

        // pull any entry not divisible by d into row base
        bool pulled = false;
        for (int i = base + 2; i < n && !pulled; ++i)
            for (int j = base + 2; j < n && !pulled; ++j)
                if (E(i, j) % d != 0) {
                    add_pair(base, i, 1);
                    pulled = true;
                }
        if (pulled) continue;

        type.push_back(d);
        base += 2;
    }
    for (size_t k = 0; k + 1 < type.size(); ++k)
        check_invariant(type[k + 1] % type[k] == 0, "invariant factors fail divisibility");
    return type;
}

std::vector<mpz_class> polarization_type(const PolarizedTorus& t) {
    return symplectic_type(t.polarization);
}

std::pair<mpz_class, mpz_class> dimension_report(int n) {
    require(n >= 2, "rank must be at least 2");
    mpz_class real_dim = mpz_class(1) << (n - 1);
    mpz_class complex_dim = mpz_class(1) << (n - 2);
    return {real_dim, complex_dim};
}

bool cl_close(const CliffordElement& a, const CliffordElement& b, const Scalar& eps) {
    CliffordElement d = cl_sub(a, b);
    for (const auto& [m, c] : d.terms)
        if (!c.within(eps)) return false;
    return true;
}

} // namespace ks
