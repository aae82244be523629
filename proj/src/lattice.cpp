#include "ks/lattice.hpp"

#include <algorithm>

namespace ks {

FiniteAbelianGroup FiniteAbelianGroup::from_divisors(const std::vector<mpz_class>& d) {
    FiniteAbelianGroup g;
    for (const mpz_class& x : d) {
        mpz_class a = abs(x);
        check_invariant(a != 0, "infinite invariant factor in finite group");
        if (a > 1) g.invariant_factors.push_back(a);
    }
    std::sort(g.invariant_factors.begin(), g.invariant_factors.end());
    for (size_t i = 0; i + 1 < g.invariant_factors.size(); ++i)
        check_invariant(g.invariant_factors[i + 1] % g.invariant_factors[i] == 0,
                        "invariant factors do not form a divisibility chain");
    return g;
}

mpz_class FiniteAbelianGroup::order() const {
    mpz_class o(1);
    for (const mpz_class& d : invariant_factors) o *= d;
    return o;
}

std::string FiniteAbelianGroup::str() const {
    if (trivial()) return "0";
    std::string s;
    for (size_t i = 0; i < invariant_factors.size(); ++i)
        s += (i ? " + " : "") + ("Z/" + invariant_factors[i].get_str());
    return s;
}

void QuadLattice::validate(bool allow_degenerate) const {
    require(gram.is_square(), "Gram matrix must be square");
    require(gram.is_symmetric(), "Gram matrix must be symmetric");
    if (!allow_degenerate)
        require(det_bareiss(gram) != 0, "degenerate lattice");
}

SubLattice SubLattice::from_rows(const std::vector<ZVec>& rows, int ambient) {
    if (rows.empty()) return SubLattice{ZMat(0, ambient)};
    ZMat m = ZMat::from_rows(rows);
    require(m.cols() == ambient, "sublattice ambient rank mismatch");
    return SubLattice{m};
}

mpz_class bilinear(const QuadLattice& L, const ZVec& v, const ZVec& w) {
    int n = L.rank();
    require(static_cast<int>(v.size()) == n && static_cast<int>(w.size()) == n,
            "vector length does not match lattice rank");
    mpz_class s(0);
    for (int i = 0; i < n; ++i) {
        if (v[i] == 0) continue;
        for (int j = 0; j < n; ++j) s += v[i] * L.gram(i, j) * w[j];
    }
    return s;
}

mpq_class bilinear_q(const QuadLattice& L, const QVec& v, const QVec& w) {
    int n = L.rank();
    require(static_cast<int>(v.size()) == n && static_cast<int>(w.size()) == n,
            "vector length does not match lattice rank");
    mpq_class s(0);
    for (int i = 0; i < n; ++i) {
        if (v[i] == 0) continue;
        for (int j = 0; j < n; ++j) s += v[i] * mpq_class(L.gram(i, j)) * w[j];
    }
    return s;
}

Scalar bilinear_s(const QuadLattice& L, const SVec& v, const SVec& w) {
    int n = L.rank();
    require(static_cast<int>(v.size()) == n && static_cast<int>(w.size()) == n,
            "vector length does not match lattice rank");
    Scalar s(0);
    for (int i = 0; i < n; ++i) {
        if (v[i].is_zero()) continue;
        for (int j = 0; j < n; ++j) {
            if (w[j].is_zero() || L.gram(i, j) == 0) continue;
            s += v[i] * w[j] * Scalar(L.gram(i, j));
        }
    }
    return s;
}

mpz_class discriminant(const QuadLattice& L) {
    L.validate();
    return abs(det_bareiss(L.gram));
}

Signature signature(const QuadLattice& L) {
    L.validate(true);
    return signature_symmetric(to_qmat(L.gram));
}

ZMat restricted_gram(const QuadLattice& L, const SubLattice& S) {
    require(S.ambient_rank() == L.rank(), "sublattice does not live in this lattice");
    ZMat B = S.basis;
    ZMat G = B * L.gram * B.transpose();
    return G;
}

SubLattice orthogonal_complement(const QuadLattice& L, const SubLattice& S) {
    L.validate();
    require(S.ambient_rank() == L.rank(), "sublattice does not live in this lattice");
    // rows of (B * gram) are the linear conditions Q(v, s_i) = 0
    ZMat A = S.basis * L.gram;
    ZMat K = kernel_z(A);
    return SubLattice{K};
}

FiniteAbelianGroup cokernel_of_sum(const QuadLattice& L, const SubLattice& S, const SubLattice& T) {
    require(S.ambient_rank() == L.rank() && T.ambient_rank() == L.rank(),
            "sublattice does not live in this lattice");
    ZMat B = vstack(S.basis, T.basis);
    require(rank_z(B) == L.rank(), "S + T does not have full rank");
    SnfResult s = smith_normal_form(B);
    return FiniteAbelianGroup::from_divisors(s.divisors());
}

SubLattice saturate(const SubLattice& S) {
    if (S.rank() == 0) return S;
    return SubLattice{saturation_rows(S.basis)};
}

bool sublattice_equal(const SubLattice& a, const SubLattice& b) {
    if (a.ambient_rank() != b.ambient_rank()) return false;
    return hnf_rows(a.basis) == hnf_rows(b.basis);
}

SubLattice sublattice_intersection(const SubLattice& a, const SubLattice& b) {
    require(a.ambient_rank() == b.ambient_rank(), "ambient rank mismatch");
    int n = a.ambient_rank();
    if (a.rank() == 0 || b.rank() == 0) return SubLattice{ZMat(0, n)};
    // solve x^T a.basis = y^T b.basis
    ZMat M = hstack(a.basis.transpose(), -b.basis.transpose());
    ZMat K = kernel_z(M); // rows (x, y)
    if (K.rows() == 0) return SubLattice{ZMat(0, n)};
    ZMat xs(K.rows(), a.rank());
    for (int i = 0; i < K.rows(); ++i)
        for (int j = 0; j < a.rank(); ++j) xs(i, j) = K(i, j);
    ZMat inter = xs * a.basis;
    return SubLattice{hnf_rows(inter)};
}

ZMat e8_gram() {
    // Cartan matrix of E8: chain 1-2-3-4-5-6-7 with node 8 attached to node 5
    ZMat g(8, 8);
    for (int i = 0; i < 8; ++i) g(i, i) = 2;
    for (int i = 0; i + 1 < 7; ++i) {
        g(i, i + 1) = -1;
        g(i + 1, i) = -1;
    }
    g(4, 7) = -1;
    g(7, 4) = -1;
    return g;
}

K3Data k3_period_lattice(long d) {
    require(d >= 1, "polarization degree must be >= 1");
    K3Data k;
    ZMat g(22, 22);
    // three U(-1) blocks then two E8 blocks (Q = minus the K3 intersection form)
    for (int b = 0; b < 3; ++b) {
        g(2 * b, 2 * b + 1) = -1;
        g(2 * b + 1, 2 * b) = -1;
    }
    ZMat e8 = e8_gram();
    for (int b = 0; b < 2; ++b)
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j) g(6 + 8 * b + i, 6 + 8 * b + j) = e8(i, j);
    k.H = QuadLattice{g};
    k.H.validate();
    check_invariant(abs(det_bareiss(g)) == 1, "K3 lattice must be unimodular");

    k.h = ZVec(22, mpz_class(0));
    k.h[0] = 1;
    k.h[1] = d;
    check_invariant(bilinear(k.H, k.h, k.h) == -2 * d, "Q(h) must equal -2d");

    SubLattice hl = SubLattice::from_rows({k.h}, 22);
    k.P = orthogonal_complement(k.H, hl);
    check_invariant(k.P.rank() == 21, "period lattice must have rank 21");
    k.P_lattice = QuadLattice{restricted_gram(k.H, k.P)};
    return k;
}

OrthoBasis orthogonal_basis(const QuadLattice& L, const ZMat& seed_rows) {
    L.validate();
    int n = L.rank();
    QMat G = to_qmat(L.gram);

    auto q_bilin = [&](const QVec& v, const QVec& w) {
        mpq_class s(0);
        for (int i = 0; i < n; ++i) {
            if (v[i] == 0) continue;
            for (int j = 0; j < n; ++j) s += v[i] * G(i, j) * w[j];
        }
        return s;
    };

    // candidate list: seeds first, then the standard basis
    std::vector<QVec> cand;
    for (int i = 0; i < seed_rows.rows(); ++i) {
        require(seed_rows.cols() == n, "seed vector length mismatch");
        QVec v(n);
        for (int j = 0; j < n; ++j) v[j] = mpq_class(seed_rows(i, j));
        cand.push_back(std::move(v));
    }
    for (int i = 0; i < n; ++i) {
        QVec v(n, mpq_class(0));
        v[i] = 1;
        cand.push_back(std::move(v));
    }

    std::vector<QVec> W;
    auto project_out = [&](QVec v) {
        for (const QVec& w : W) {
            mpq_class c = q_bilin(v, w) / q_bilin(w, w);
            if (c == 0) continue;
            for (int j = 0; j < n; ++j) v[j] -= c * w[j];
        }
        return v;
    };

    size_t next = 0;
    while (static_cast<int>(W.size()) < n) {
        check_invariant(next < cand.size(), "orthogonal basis construction exhausted candidates");
        QVec v = project_out(cand[next]);
        ++next;
        bool zero = std::all_of(v.begin(), v.end(), [](const mpq_class& x) { return x == 0; });
        if (zero) continue;
        if (q_bilin(v, v) == 0) {
            // isotropic residual: mix in a later candidate with nonzero pairing
            bool fixed = false;
            for (size_t m = next; m < cand.size() && !fixed; ++m) {
                QVec u = project_out(cand[m]);
                if (q_bilin(v, u) == 0) continue;
                for (int lam = 1; lam <= 3 && !fixed; ++lam) {
                    QVec t(n);
                    for (int j = 0; j < n; ++j) t[j] = v[j] + lam * u[j];
                    if (q_bilin(t, t) != 0) {
                        v = t;
                        fixed = true;
                    }
                }
            }
            check_invariant(fixed, "could not resolve isotropic vector in orthogonalization");
        }
        W.push_back(std::move(v));
    }

    OrthoBasis ob;
    ob.rows = ZMat(n, n);
    for (int i = 0; i < n; ++i) {
        // clear denominators and make primitive
        mpz_class l(1);
        for (int j = 0; j < n; ++j)
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), W[i][j].get_den().get_mpz_t());
        ZVec vi(n);
        mpz_class g(0);
        for (int j = 0; j < n; ++j) {
            mpq_class x = W[i][j] * l;
            vi[j] = x.get_num();
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), vi[j].get_mpz_t());
        }
        for (int j = 0; j < n; ++j) ob.rows(i, j) = vi[j] / g;
    }
    ob.q.resize(n);
    for (int i = 0; i < n; ++i) {
        ZVec r = ob.rows.row(i);
        ob.q[i] = bilinear(L, r, r);
        check_invariant(ob.q[i] != 0, "orthogonal basis vector with zero norm");
        for (int j = i + 1; j < n; ++j) {
            ZVec s = ob.rows.row(j);
            check_invariant(bilinear(L, r, s) == 0, "orthogonal basis vectors not orthogonal");
        }
    }
    ob.index = abs(det_bareiss(ob.rows));
    check_invariant(ob.index != 0, "orthogonal family does not have full rank");
    return ob;
}

} // namespace ks
