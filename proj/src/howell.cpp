#include "ks/howell.hpp"

#include <algorithm>

#include "ks/errors.hpp"

namespace ks {

namespace {

int val_at(const mpz_class& x, const mpz_class& ell, int n) {
    if (x == 0) return n;
    mpz_class t = x;
    int v = 0;
    while (v < n && t % ell == 0) {
        t /= ell;
        ++v;
    }
    return v;
}

mpz_class mod_inverse(const mpz_class& u, const mpz_class& N) {
    mpz_class inv;
    int ok = mpz_invert(inv.get_mpz_t(), u.get_mpz_t(), N.get_mpz_t());
    check_invariant(ok != 0, "non-invertible unit in Howell reduction");
    return inv;
}

} // namespace

mpz_class HowellForm::module_order() const {
    mpz_class order(1);
    for (int e : pivot_exp) {
        mpz_class f;
        mpz_pow_ui(f.get_mpz_t(), ell.get_mpz_t(), static_cast<unsigned long>(n - e));
        order *= f;
    }
    return order;
}

bool HowellForm::contains(ZVec v) const {
    require(static_cast<int>(v.size()) == rows.cols(), "member length mismatch");
    for (auto& x : v) {
        x %= modulus;
        if (x < 0) x += modulus;
    }
    for (int i = 0; i < rows.rows(); ++i) {
        int pc = pivot_col[i];
        if (v[pc] == 0) continue;
        mpz_class piv;
        mpz_pow_ui(piv.get_mpz_t(), ell.get_mpz_t(), static_cast<unsigned long>(pivot_exp[i]));
        if (v[pc] % piv != 0) return false;
        mpz_class q = v[pc] / piv;
        for (int j = 0; j < rows.cols(); ++j) {
            v[j] = (v[j] - q * rows(i, j)) % modulus;
            if (v[j] < 0) v[j] += modulus;
        }
    }
    for (const auto& x : v)
        if (x != 0) return false;
    return true;
}

HowellForm howell_form(const ZMat& generators, const mpz_class& ell, int n) {
    require(ell >= 2, "modulus base must be >= 2");
    require(n >= 1, "modulus exponent must be >= 1");
    HowellForm H;
    H.ell = ell;
    H.n = n;
    mpz_pow_ui(H.modulus.get_mpz_t(), ell.get_mpz_t(), static_cast<unsigned long>(n));
    const mpz_class& N = H.modulus;
    int c = generators.cols();

    // echelon state: at most one row per pivot column
    std::vector<ZVec> row_at(c);
    std::vector<int> exp_at(c, -1);

    std::vector<ZVec> stack;
    for (int i = 0; i < generators.rows(); ++i) {
        ZVec v = generators.row(i);
        for (auto& x : v) {
            x %= N;
            if (x < 0) x += N;
        }
        stack.push_back(std::move(v));
    }

    auto normalize = [&](ZVec& v, int col) {
        int a = val_at(v[col], ell, n);
        mpz_class pe;
        mpz_pow_ui(pe.get_mpz_t(), ell.get_mpz_t(), static_cast<unsigned long>(a));
        mpz_class uinv = mod_inverse(v[col] / pe, N);
        for (auto& x : v) {
            x = x * uinv % N;
            if (x < 0) x += N;
        }
        return a;
    };

    while (!stack.empty()) {
        ZVec v = std::move(stack.back());
        stack.pop_back();
        for (;;) {
            int lead = -1;
            for (int j = 0; j < c; ++j)
                if (v[j] != 0) { lead = j; break; }
            if (lead < 0) break;
            int av = val_at(v[lead], ell, n);
            if (exp_at[lead] < 0 || av < exp_at[lead]) {
                normalize(v, lead);
                if (exp_at[lead] >= 0) stack.push_back(std::move(row_at[lead]));
                if (av > 0) {
                    // completion row: ell^{n-av} * v has this pivot killed,
                    // so its leading column lies strictly to the right
                    mpz_class mult;
                    mpz_pow_ui(mult.get_mpz_t(), ell.get_mpz_t(),
                               static_cast<unsigned long>(n - av));
                    ZVec extra(c, mpz_class(0));
                    bool nz = false;
                    for (int j = lead + 1; j < c; ++j) {
                        extra[j] = v[j] * mult % N;
                        if (extra[j] != 0) nz = true;
                    }
                    if (nz) stack.push_back(std::move(extra));
                }
                row_at[lead] = std::move(v);
                exp_at[lead] = av;
                break;
            }
            // reduce against the existing pivot; leading column strictly advances
            mpz_class pe;
            mpz_pow_ui(pe.get_mpz_t(), ell.get_mpz_t(),
                       static_cast<unsigned long>(exp_at[lead]));
            mpz_class q = v[lead] / pe;
            const ZVec& er = row_at[lead];
            for (int j = lead; j < c; ++j) {
                v[j] = (v[j] - q * er[j]) % N;
                if (v[j] < 0) v[j] += N;
            }
        }
    }

    std::vector<ZVec> rows_s;
    std::vector<int> col_s, exp_s;
    for (int col = 0; col < c; ++col) {
        if (exp_at[col] < 0) continue;
        rows_s.push_back(std::move(row_at[col]));
        col_s.push_back(col);
        exp_s.push_back(exp_at[col]);
    }
    // canonical reduction of entries above each pivot
    for (size_t k = 0; k < rows_s.size(); ++k) {
        mpz_class pe;
        mpz_pow_ui(pe.get_mpz_t(), ell.get_mpz_t(), static_cast<unsigned long>(exp_s[k]));
        for (size_t i = 0; i < k; ++i) {
            mpz_class q;
            mpz_fdiv_q(q.get_mpz_t(), rows_s[i][col_s[k]].get_mpz_t(), pe.get_mpz_t());
            if (q == 0) continue;
            for (int j = 0; j < c; ++j) {
                rows_s[i][j] = (rows_s[i][j] - q * rows_s[k][j]) % N;
                if (rows_s[i][j] < 0) rows_s[i][j] += N;
            }
        }
    }
    H.rows = rows_s.empty() ? ZMat(0, c) : ZMat::from_rows(rows_s);
    H.pivot_col = col_s;
    H.pivot_exp = exp_s;
    return H;
}

HowellForm howell_kernel(const ZMat& A, const mpz_class& ell, int n) {
    int s = A.rows(), r = A.cols();
    ZMat G(r, s + r);
    for (int i = 0; i < r; ++i) {
        for (int j = 0; j < s; ++j) G(i, j) = A(j, i);
        G(i, s + i) = 1;
    }
    HowellForm full = howell_form(G, ell, n);
    // rows with vanishing first block carry kernel vectors in the identity block
    std::vector<ZVec> kr;
    for (int i = 0; i < full.rows.rows(); ++i) {
        bool zero_front = true;
        for (int j = 0; j < s; ++j)
            if (full.rows(i, j) != 0) { zero_front = false; break; }
        if (!zero_front) continue;
        ZVec v(r);
        for (int j = 0; j < r; ++j) v[j] = full.rows(i, s + j);
        kr.push_back(std::move(v));
    }
    ZMat K = kr.empty() ? ZMat(0, r) : ZMat::from_rows(kr);
    return howell_form(K, ell, n);
}

mpz_class kernel_order_mod(const ZMat& A, const mpz_class& ell, int n) {
    return howell_kernel(A, ell, n).module_order();
}

} // namespace ks
