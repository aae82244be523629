#include "ks/correspondence.hpp"

#include <algorithm>
#include <set>

#include "ks/arith_aux.hpp"
#include "ks/errors.hpp"

namespace ks {

namespace {

// ranks small enough to run the dense commutant cross-check routinely
constexpr int kCrossCheckRank = 8;

SVec unit_vector(int n, int i) {
    SVec v(n, Scalar(0));
    v[i] = Scalar(1);
    return v;
}

// (rational part, surd part) of an exact scalar
std::pair<mpq_class, mpq_class> decompose(const Scalar& s) {
    if (s.is_rational()) return {s.as_rational(), mpq_class(0)};
    require(s.mode() == ScalarMode::Quadratic, "expected an exact scalar");
    return {s.rat(), s.surd()};
}

} // namespace

ZMat EndoLattice::matrix_at(int i) const {
    require(side > 0, "lattice rows are not square matrices");
    require(i >= 0 && i < flat.rows(), "basis index out of range");
    ZMat m(side, side);
    for (int a = 0; a < side; ++a)
        for (int b = 0; b < side; ++b) m(a, b) = flat(i, a * side + b);
    return m;
}

EndoLattice EndoLattice::from_matrices(const std::vector<ZMat>& mats) {
    require(!mats.empty(), "no matrices given");
    int side = mats[0].rows();
    require(side == mats[0].cols(), "matrices must be square");
    ZMat flat(0, side * side);
    std::vector<ZVec> rows;
    for (const auto& m : mats) {
        require(m.rows() == side && m.cols() == side, "mixed matrix sizes");
        ZVec r = m.flatten();
        bool zero = std::all_of(r.begin(), r.end(), [](const mpz_class& x) { return x == 0; });
        if (!zero) rows.push_back(std::move(r));
    }
    EndoLattice L;
    L.side = side;
    L.flat = ZMat::from_rows(rows, side * side);
    require(rank_z(L.flat) == L.flat.rows(), "basis matrices are linearly dependent");
    return L;
}

EndoLattice EndoLattice::from_rows(const ZMat& rows) {
    EndoLattice L;
    L.side = 0;
    L.flat = rows;
    require(rank_z(L.flat) == L.flat.rows(), "basis rows are linearly dependent");
    return L;
}

ZMat tu_map(const CliffordContext& ctx, const CliffordElement& c) {
    return left_mult_matrix_z(ctx, c);
}

SMat tu_map_s(const CliffordContext& ctx, const CliffordElement& c) {
    return left_mult_matrix(ctx, c);
}

ZMat u_dual(const CliffordContext& ctx, const CliffordElement& c) {
    return tu_map(ctx, c).transpose();
}

SMat p_embedding(const CliffordContext& ctx, const SVec& v) {
    return sandwich_e1_matrix(ctx, v);
}

ZMat p_embedding_z(const CliffordContext& ctx, const ZVec& v) {
    SVec sv;
    sv.reserve(v.size());
    for (const auto& x : v) sv.emplace_back(x);
    SMat M = p_embedding(ctx, sv);
    ZMat Z(M.rows(), M.cols());
    for (int i = 0; i < M.rows(); ++i)
        for (int j = 0; j < M.cols(); ++j) {
            require(M(i, j).is_rational(), "embedding entry is not rational");
            mpq_class q = M(i, j).as_rational();
            require(q.get_den() == 1, "embedding entry is not an integer");
            Z(i, j) = q.get_num();
        }
    return Z;
}

bool hodge_type_00(const SMat& m, const PolarizedTorus& t, const Scalar* eps) {
    const SMat& c = t.complex_structure;
    require(m.rows() == c.rows() && m.cols() == c.cols(), "endomorphism size mismatch");
    SMat comm = m * c - c * m;
    if (eps == nullptr) return comm.is_zero();
    for (int i = 0; i < comm.rows(); ++i)
        for (int j = 0; j < comm.cols(); ++j)
            if (!comm(i, j).within(*eps)) return false;
    return true;
}

namespace {

// constraint rows over Q for { v integer : Q(v, f) = 0 }, splitting exact
// quadratic values into rational and surd components
void append_period_rows(const CliffordContext& ctx, const SVec& f, std::vector<QVec>& rows) {
    int n = ctx.n();
    QVec rat(n), surd(n);
    bool any_surd = false;
    for (int i = 0; i < n; ++i) {
        Scalar s = ctx.q[i] * f[i];
        auto [a, b] = decompose(s);
        rat[i] = a;
        surd[i] = b;
        if (b != 0) any_surd = true;
    }
    rows.push_back(rat);
    if (any_surd) rows.push_back(surd);
}

} // namespace

SubLattice picard_via_commutant(const K3Period& p) {
    const CliffordContext& ctx = p.ctx;
    require(p.exact, "commutant route needs an exact period");
    int n = ctx.n();
    CliffordElement J = complex_structure(p);
    SMat c = left_mult_matrix(ctx, cl_neg(J));
    int dim = c.rows();

    std::vector<SMat> comms;
    comms.reserve(n);
    for (int i = 0; i < n; ++i) {
        SMat Pi = p_embedding(ctx, unit_vector(n, i));
        comms.push_back(Pi * c - c * Pi);
    }

    HnfAccumulator acc(n);
    for (int a = 0; a < dim; ++a) {
        for (int b = 0; b < dim; ++b) {
            QVec rat(n), surd(n);
            bool any = false, any_surd = false;
            for (int i = 0; i < n; ++i) {
                const Scalar& s = comms[i](a, b);
                if (s.is_zero()) {
                    rat[i] = 0;
                    surd[i] = 0;
                    continue;
                }
                auto [x, y] = decompose(s);
                rat[i] = x;
                surd[i] = y;
                any = true;
                if (y != 0) any_surd = true;
            }
            if (!any) continue;
            std::vector<QVec> rows{rat};
            if (any_surd) rows.push_back(surd);
            acc.add_rows(clear_row_denominators(QMat::from_rows(rows, n)));
        }
    }
    return SubLattice{kernel_z(acc.matrix())};
}

PicardResult picard_from_period(const K3Period& p) {
    const CliffordContext& ctx = p.ctx;
    int n = ctx.n();
    if (!p.exact) return picard_candidates_float(p, mpz_class(1) << 48);

    std::vector<QVec> rows;
    append_period_rows(ctx, p.f1, rows);
    append_period_rows(ctx, p.f2, rows);
    ZMat kernel = kernel_q(QMat::from_rows(rows, n));
    PicardResult res{SubLattice{kernel}, true};

    if (n <= kCrossCheckRank && n <= ctx.guard()) {
        SubLattice oracle = picard_via_commutant(p);
        check_invariant(sublattice_equal(res.lattice, oracle),
                        "kernel and commutant Picard computations disagree");
    }
    return res;
}

PicardResult picard_candidates_float(const K3Period& p, const mpz_class& quality) {
    const CliffordContext& ctx = p.ctx;
    int n = ctx.n();
    require(quality >= 1024, "quality bound too small for relation search");

    // rows [ I | round(C * Q(e_i, f1)) | round(C * Q(e_i, f2)) ]
    ZMat B(n, n + 2);
    unsigned long prec = 256;
    for (int i = 0; i < n; ++i) {
        B(i, i) = 1;
        SVec ei = unit_vector(n, i);
        mpf_class v1 = q_bilinear(ctx, ei, p.f1).to_bigfloat(prec).flt();
        mpf_class v2 = q_bilinear(ctx, ei, p.f2).to_bigfloat(prec).flt();
        mpf_class c1 = v1 * mpf_class(quality, prec);
        mpf_class c2 = v2 * mpf_class(quality, prec);
        mpz_class r1, r2;
        mpf_class half(0.5, prec);
        mpz_set_f(r1.get_mpz_t(), mpf_class(c1 + (c1 >= 0 ? half : -half)).get_mpf_t());
        mpz_set_f(r2.get_mpz_t(), mpf_class(c2 + (c2 >= 0 ? half : -half)).get_mpf_t());
        B(i, n) = r1;
        B(i, n + 1) = r2;
    }
    ZMat R = lll_reduce(B);

    mpz_class threshold = sqrt(quality);
    std::vector<ZVec> cand;
    for (int i = 0; i < R.rows(); ++i) {
        if (abs(R(i, n)) > threshold || abs(R(i, n + 1)) > threshold) continue;
        ZVec full = R.row(i);
        ZVec v(full.begin(), full.begin() + n);
        bool zero = std::all_of(v.begin(), v.end(), [](const mpz_class& x) { return x == 0; });
        if (!zero) cand.push_back(std::move(v));
    }
    SubLattice lat = saturate(SubLattice{ZMat::from_rows(cand, n)});

    PicardResult res{lat, false};
    if (p.exact) {
        // candidates from a reduced exact period can be re-verified
        PicardResult exact = picard_from_period(p);
        res.certified = sublattice_equal(lat, exact.lattice);
    }
    return res;
}

FullPicard picard_full(const K3Data& k3, const ZMat& diag_to_p, const K3Period& p) {
    int m = k3.H.rank();
    int np = k3.P.rank();
    require(diag_to_p.rows() == p.ctx.n() && diag_to_p.cols() == np,
            "diagonal basis rows do not match P");

    PicardResult pic = picard_from_period(p);

    // rows of pic are in diagonal coordinates; map through diag_to_p into P's
    // coordinates, then through P's basis into H
    std::vector<ZVec> rows;
    for (int i = 0; i < pic.lattice.rank(); ++i) {
        ZVec in_p(np, 0);
        for (int j = 0; j < p.ctx.n(); ++j) {
            const mpz_class& cji = pic.lattice.basis(i, j);
            if (cji == 0) continue;
            for (int k = 0; k < np; ++k) in_p[k] += cji * diag_to_p(j, k);
        }
        ZVec in_h(m, 0);
        for (int k = 0; k < np; ++k) {
            if (in_p[k] == 0) continue;
            for (int t = 0; t < m; ++t) in_h[t] += in_p[k] * k3.P.basis(k, t);
        }
        rows.push_back(std::move(in_h));
    }
    rows.push_back(k3.h);

    SubLattice full = saturate(SubLattice{ZMat::from_rows(rows, m)});
    ZMat gram = restricted_gram(k3.H, full);
    FullPicard out;
    out.lattice = full;
    out.disc = abs(det_bareiss(gram));
    out.certified = pic.certified;
    return out;
}

EndoLattice commutant(const SMat& c) {
    int dim = c.rows();
    require(dim == c.cols(), "complex structure must be square");
    int vars = dim * dim;

    // equation (a,b): sum_k X[a][k] c[k][b] - c[a][k] X[k][b] = 0
    std::vector<QVec> rows;
    rows.reserve(2 * vars);
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) {
            QVec rat(vars, mpq_class(0)), surd(vars, mpq_class(0));
            bool any = false, any_surd = false;
            auto put = [&](int i, int j, const Scalar& s, bool negate) {
                if (s.is_zero()) return;
                auto [x, y] = decompose(s);
                if (negate) {
                    x = -x;
                    y = -y;
                }
                rat[i * dim + j] += x;
                surd[i * dim + j] += y;
                any = true;
                if (y != 0) any_surd = true;
            };
            for (int k = 0; k < dim; ++k) {
                put(a, k, c(k, b), false);
                put(k, b, c(a, k), true);
            }
            if (!any) continue;
            rows.push_back(rat);
            if (any_surd) rows.push_back(surd);
        }
    ZMat kern = kernel_q(QMat::from_rows(rows, vars));
    EndoLattice L;
    L.side = dim;
    L.flat = kern;
    return L;
}

EndoLattice wedge_family(const CliffordContext& ctx, const ZVec& m, const SubLattice& T) {
    ctx.check_dense("wedge_family");
    int n = ctx.n();
    require(static_cast<int>(m.size()) == n, "vector length does not match context rank");
    require(T.ambient_rank() == n, "sublattice ambient rank mismatch");

    SVec ms;
    for (const auto& x : m) ms.emplace_back(x);

    std::vector<ZVec> rows;
    int dim = even_dim(n);
    for (int i = 0; i < T.rank(); ++i) {
        SVec ti;
        for (int j = 0; j < n; ++j) ti.emplace_back(T.basis(i, j));
        CliffordElement w = wedge(ctx, ms, ti);
        ZMat M = left_mult_matrix_z(ctx, w);
        ZVec r = M.flatten();
        bool zero = std::all_of(r.begin(), r.end(), [](const mpz_class& x) { return x == 0; });
        if (!zero) rows.push_back(std::move(r));
    }
    EndoLattice L;
    L.side = dim;
    L.flat = ZMat::from_rows(rows, dim * dim);
    return L;
}

std::vector<mpz_class> disjointness_exclusion_primes(const EndoLattice& A, const EndoLattice& B) {
    require(A.flat.cols() == B.flat.cols(), "ambient lattices differ");
    ZMat S = vstack(A.flat, B.flat);
    require(rank_z(S) == A.flat.rows() + B.flat.rows(),
            "sublattices intersect over Q; disjointness fails rationally");

    std::set<mpz_class> primes;
    for (const auto& d : smith_normal_form(S).divisors()) {
        if (d == 1) continue;
        for (const auto& p : prime_factors(d)) primes.insert(p);
    }
    return std::vector<mpz_class>(primes.begin(), primes.end());
}

namespace {

std::vector<std::vector<int>> subsets_of_size(int r, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(k);
    for (int i = 0; i < k; ++i) cur[i] = i;
    if (k == 0) {
        out.push_back({});
        return out;
    }
    while (true) {
        out.push_back(cur);
        int i = k - 1;
        while (i >= 0 && cur[i] == r - k + i) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

} // namespace

GaloisModule top_wedge_twist(const GaloisModule& M, int k, bool twist_by_det) {
    int r = M.rank;
    require(k >= 0 && k <= r, "exterior power index out of range");

    auto subsets = subsets_of_size(r, k);
    int wr = static_cast<int>(subsets.size());
    if (wr > kClosureBound)
        throw GuardExceeded("exterior power rank " + std::to_string(wr) + " exceeds bound");

    std::vector<ZMat> out_gens;
    for (const auto& g : M.gens) {
        mpz_class det = twist_by_det ? det_bareiss(g) : mpz_class(1);
        ZMat W(wr, wr);
        for (int a = 0; a < wr; ++a)
            for (int b = 0; b < wr; ++b) {
                ZMat minor(k, k);
                for (int i = 0; i < k; ++i)
                    for (int j = 0; j < k; ++j) minor(i, j) = g(subsets[a][i], subsets[b][j]);
                W(a, b) = det * (k == 0 ? mpz_class(1) : det_bareiss(minor));
            }
        out_gens.push_back(W);
    }
    return make_galois_module(wr, out_gens);
}

} // namespace ks
