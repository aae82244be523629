#include "ks/clifford.hpp"

#include <bit>
#include <cstdlib>

#include "ks/errors.hpp"

namespace ks {

namespace {

int popcnt(uint32_t m) { return std::popcount(m); }

// sign of e_S * e_T from moving each generator of T past the larger
// generators of S; returns the parity of the total number of swaps
int swap_parity(uint32_t S, uint32_t T) {
    int c = 0;
    uint32_t tt = T;
    while (tt) {
        int t = std::countr_zero(tt);
        c += popcnt(S >> (t + 1));
        tt &= tt - 1;
    }
    return c & 1;
}

} // namespace

int CliffordContext::default_guard() {
    static int cached = [] {
        if (const char* s = std::getenv("KS_GUARD_RANK")) {
            int v = std::atoi(s);
            if (v > 0) return v;
        }
        return 13;
    }();
    return cached;
}

int CliffordContext::guard() const {
    return dense_guard > 0 ? dense_guard : default_guard();
}

void CliffordContext::validate() const {
    require(!q.empty(), "clifford context needs at least one generator");
    require(q.size() <= 30, "clifford context rank exceeds mask width");
    for (const auto& qi : q)
        require(!qi.is_zero(), "clifford context has a zero diagonal value");
    require(sublattice_index > 0, "clifford sublattice index must be positive");
}

void CliffordContext::check_dense(const char* what) const {
    if (n() > guard())
        throw GuardExceeded(std::string(what) + ": rank " + std::to_string(n()) +
                            " exceeds dense guard " + std::to_string(guard()) +
                            " (set KS_GUARD_RANK to raise)");
}

void CliffordElement::add_term(uint32_t mask, const Scalar& c) {
    if (c.is_zero()) return;
    auto it = terms.find(mask);
    if (it == terms.end()) {
        terms.emplace(mask, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms.erase(it);
    }
}

Scalar CliffordElement::coeff(uint32_t mask) const {
    auto it = terms.find(mask);
    return it == terms.end() ? Scalar(0) : it->second;
}

void CliffordElement::validate_even() const {
    for (const auto& [mask, c] : terms) {
        check_invariant(popcnt(mask) % 2 == 0, "odd-degree term in even clifford element");
        check_invariant(!c.is_zero(), "stored zero coefficient");
    }
}

CliffordElement CliffordElement::one() { return scalar(Scalar(1)); }

CliffordElement CliffordElement::scalar(const Scalar& c) {
    CliffordElement e;
    e.add_term(0, c);
    return e;
}

int even_dim(int n) {
    require(n >= 1 && n <= 30, "rank out of range");
    return 1 << (n - 1);
}

std::vector<uint32_t> even_masks(int n) {
    std::vector<uint32_t> out;
    out.reserve(even_dim(n));
    uint32_t lim = uint32_t(1) << n;
    for (uint32_t m = 0; m < lim; ++m)
        if (popcnt(m) % 2 == 0) out.push_back(m);
    return out;
}

int even_mask_index(uint32_t mask, int n) {
    require(popcnt(mask) % 2 == 0, "mask has odd degree");
    require(mask < (uint32_t(1) << n), "mask out of range");
    // each pair {2k, 2k+1} holds exactly one even-popcount mask
    return static_cast<int>(mask / 2);
}

CliffordElement cl_add(const CliffordElement& a, const CliffordElement& b) {
    CliffordElement out = a;
    for (const auto& [m, c] : b.terms) out.add_term(m, c);
    return out;
}

CliffordElement cl_sub(const CliffordElement& a, const CliffordElement& b) {
    CliffordElement out = a;
    for (const auto& [m, c] : b.terms) out.add_term(m, -c);
    return out;
}

CliffordElement cl_neg(const CliffordElement& a) {
    CliffordElement out;
    for (const auto& [m, c] : a.terms) out.terms.emplace(m, -c);
    return out;
}

CliffordElement cl_scale(const CliffordElement& a, const Scalar& s) {
    CliffordElement out;
    if (s.is_zero()) return out;
    for (const auto& [m, c] : a.terms) out.add_term(m, c * s);
    return out;
}

CliffordElement mul_masks(const CliffordContext& ctx, uint32_t S, uint32_t T,
                          const Scalar& coeff) {
    Scalar c = coeff;
    if (swap_parity(S, T)) c = -c;
    uint32_t common = S & T;
    while (common) {
        int i = std::countr_zero(common);
        c = c * ctx.q[i];
        common &= common - 1;
    }
    CliffordElement out;
    out.add_term(S ^ T, c);
    return out;
}

CliffordElement multiply(const CliffordContext& ctx, const CliffordElement& a,
                         const CliffordElement& b) {
    CliffordElement out;
    for (const auto& [S, ca] : a.terms) {
        for (const auto& [T, cb] : b.terms) {
            Scalar c = ca * cb;
            if (swap_parity(S, T)) c = -c;
            uint32_t common = S & T;
            while (common) {
                int i = std::countr_zero(common);
                c = c * ctx.q[i];
                common &= common - 1;
            }
            out.add_term(S ^ T, c);
        }
    }
    return out;
}

CliffordElement embed_vector_product(const CliffordContext& ctx, const SVec& v, const SVec& w) {
    int n = ctx.n();
    require(static_cast<int>(v.size()) == n && static_cast<int>(w.size()) == n,
            "vector length does not match context rank");
    CliffordElement out;
    for (int i = 0; i < n; ++i) {
        if (v[i].is_zero()) continue;
        for (int j = 0; j < n; ++j) {
            if (w[j].is_zero()) continue;
            Scalar c = v[i] * w[j];
            if (i == j) {
                out.add_term(0, c * ctx.q[i]);
            } else if (i < j) {
                out.add_term((uint32_t(1) << i) | (uint32_t(1) << j), c);
            } else {
                out.add_term((uint32_t(1) << j) | (uint32_t(1) << i), -c);
            }
        }
    }
    return out;
}

CliffordElement wedge(const CliffordContext& ctx, const SVec& v, const SVec& w) {
    CliffordElement vw = embed_vector_product(ctx, v, w);
    CliffordElement wv = embed_vector_product(ctx, w, v);
    return cl_scale(cl_sub(vw, wv), Scalar(mpq_class(1, 2)));
}

CliffordElement iota(const CliffordElement& a) {
    CliffordElement out;
    for (const auto& [m, c] : a.terms) {
        int k = popcnt(m);
        // reversing k generators takes k(k-1)/2 swaps
        if ((k / 2) % 2 == 1)
            out.terms.emplace(m, -c);
        else
            out.terms.emplace(m, c);
    }
    return out;
}

Scalar cl_trace(const CliffordContext& ctx, const CliffordElement& a) {
    // left multiplication by e_S permutes the basis with no fixed masks
    // unless S is empty, so only the scalar part contributes
    mpz_class dim = mpz_class(1) << (ctx.n() - 1);
    return a.coeff(0) * Scalar(dim);
}

SMat left_mult_matrix(const CliffordContext& ctx, const CliffordElement& a) {
    ctx.check_dense("left_mult_matrix");
    int n = ctx.n();
    auto basis = even_masks(n);
    int dim = static_cast<int>(basis.size());
    std::vector<int> index(size_t(1) << n, -1);
    for (int i = 0; i < dim; ++i) index[basis[i]] = i;

    SMat M(dim, dim, Scalar(0));
    for (int j = 0; j < dim; ++j) {
        uint32_t T = basis[j];
        for (const auto& [S, c] : a.terms) {
            Scalar cc = c;
            if (swap_parity(S, T)) cc = -cc;
            uint32_t common = S & T;
            while (common) {
                int i = std::countr_zero(common);
                cc = cc * ctx.q[i];
                common &= common - 1;
            }
            int row = index[S ^ T];
            check_invariant(row >= 0, "product left the even subalgebra");
            M(row, j) += cc;
        }
    }
    return M;
}

ZMat left_mult_matrix_z(const CliffordContext& ctx, const CliffordElement& a) {
    SMat M = left_mult_matrix(ctx, a);
    ZMat Z(M.rows(), M.cols());
    for (int i = 0; i < M.rows(); ++i)
        for (int j = 0; j < M.cols(); ++j) {
            const Scalar& s = M(i, j);
            require(s.is_rational(), "matrix entry is not rational");
            mpq_class q = s.as_rational();
            require(q.get_den() == 1, "matrix entry is not an integer");
            Z(i, j) = q.get_num();
        }
    return Z;
}

SMat sandwich_e1_matrix(const CliffordContext& ctx, const SVec& v) {
    ctx.check_dense("sandwich_e1_matrix");
    int n = ctx.n();
    require(static_cast<int>(v.size()) == n, "vector length does not match context rank");
    auto basis = even_masks(n);
    int dim = static_cast<int>(basis.size());
    std::vector<int> index(size_t(1) << n, -1);
    for (int i = 0; i < dim; ++i) index[basis[i]] = i;

    SMat M(dim, dim, Scalar(0));
    for (int j = 0; j < dim; ++j) {
        uint32_t T = basis[j];
        // accumulate v * e_T * e_1 over the nonzero entries of v
        for (int i = 0; i < n; ++i) {
            if (v[i].is_zero()) continue;
            uint32_t S = uint32_t(1) << i;
            Scalar c = v[i];
            if (swap_parity(S, T)) c = -c;
            uint32_t common = S & T;
            while (common) {
                int k = std::countr_zero(common);
                c = c * ctx.q[k];
                common &= common - 1;
            }
            uint32_t mid = S ^ T; // odd degree
            uint32_t E1 = 1;
            if (swap_parity(mid, E1)) c = -c;
            uint32_t common2 = mid & E1;
            while (common2) {
                int k = std::countr_zero(common2);
                c = c * ctx.q[k];
                common2 &= common2 - 1;
            }
            int row = index[mid ^ E1];
            check_invariant(row >= 0, "sandwich product left the even subalgebra");
            M(row, j) += c;
        }
    }
    return M;
}

} // namespace ks
