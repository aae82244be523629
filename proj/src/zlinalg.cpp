#include "ks/zlinalg.hpp"

#include <algorithm>
#include <map>

namespace ks {

std::vector<mpz_class> SnfResult::divisors() const {
    std::vector<mpz_class> d;
    int m = std::min(D.rows(), D.cols());
    for (int i = 0; i < m; ++i)
        if (D(i, i) != 0) d.push_back(D(i, i));
    return d;
}

int SnfResult::rank() const { return static_cast<int>(divisors().size()); }

namespace {

// find the position of a nonzero entry of minimal absolute value in the
// trailing block starting at (t, t); false when the block is zero
bool min_pivot(const ZMat& D, int t, int& pi, int& pj) {
    bool found = false;
    mpz_class best;
    for (int i = t; i < D.rows(); ++i)
        for (int j = t; j < D.cols(); ++j) {
            if (D(i, j) == 0) continue;
            mpz_class a = abs(D(i, j));
            if (!found || a < best) {
                found = true;
                best = a;
                pi = i;
                pj = j;
            }
        }
    return found;
}

} // namespace

SnfResult smith_normal_form(const ZMat& M) {
    SnfResult r;
    r.D = M;
    r.U = ZMat::identity(M.rows());
    r.V = ZMat::identity(M.cols());
    ZMat& D = r.D;
    ZMat& U = r.U;
    ZMat& V = r.V;
    int m = std::min(D.rows(), D.cols());

    for (int t = 0; t < m; ++t) {
        int pi, pj;
        if (!min_pivot(D, t, pi, pj)) break;
        for (;;) {
            if (pi != t) { D.swap_rows(t, pi); U.swap_rows(t, pi); }
            if (pj != t) { D.swap_cols(t, pj); V.swap_cols(t, pj); }
            bool clean = true;
            for (int i = t + 1; i < D.rows(); ++i) {
                if (D(i, t) == 0) continue;
                mpz_class q = D(i, t) / D(t, t);
                if (q != 0) { D.add_row(i, t, -q); U.add_row(i, t, -q); }
                if (D(i, t) != 0) clean = false;
            }
            for (int j = t + 1; j < D.cols(); ++j) {
                if (D(t, j) == 0) continue;
                mpz_class q = D(t, j) / D(t, t);
                if (q != 0) { D.add_col(j, t, -q); V.add_col(j, t, -q); }
                if (D(t, j) != 0) clean = false;
            }
            if (clean) break;
            if (!min_pivot(D, t, pi, pj)) break;
        }
    }

    // pairwise gcd/lcm passes enforce the divisibility chain
    bool changed = true;
    while (changed) {
        changed = false;
        for (int i = 0; i + 1 < m; ++i) {
            for (int j = i + 1; j < m; ++j) {
                mpz_class a = D(i, i), b = D(j, j);
                if (b == 0) continue;
                if (a != 0 && b % a == 0) continue;
                mpz_class g, x, y;
                mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
                mpz_class ag = a / g, bg = b / g;
                // rows i,j of U*M: [[x, y], [-b/g, a/g]]
                for (int k = 0; k < U.cols(); ++k) {
                    mpz_class ui = U(i, k), uj = U(j, k);
                    U(i, k) = x * ui + y * uj;
                    U(j, k) = -bg * ui + ag * uj;
                }
                // cols i,j of V: [[1, -y*b/g], [1, x*a/g]]
                for (int k = 0; k < V.rows(); ++k) {
                    mpz_class vi = V(k, i), vj = V(k, j);
                    V(k, i) = vi + vj;
                    V(k, j) = -y * bg * vi + x * ag * vj;
                }
                D(i, i) = g;
                D(j, j) = ag * b;
                changed = true;
            }
        }
    }
    for (int i = 0; i < m; ++i) {
        if (D(i, i) < 0) {
            D.scale_row(i, mpz_class(-1));
            U.scale_row(i, mpz_class(-1));
        }
    }
    return r;
}

ZMat hnf_rows(const ZMat& M) {
    ZMat A = M;
    int r = A.rows(), c = A.cols();
    int row = 0;
    for (int col = 0; col < c && row < r; ++col) {
        // combine rows until at most one nonzero entry remains in this column
        int p = -1;
        for (int i = row; i < r; ++i) {
            if (A(i, col) == 0) continue;
            if (p < 0) { p = i; continue; }
            mpz_class a = A(p, col), b = A(i, col);
            mpz_class g, x, y;
            mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
            mpz_class ag = a / g, bg = b / g;
            for (int k = 0; k < c; ++k) {
                mpz_class vp = A(p, k), vi = A(i, k);
                A(p, k) = x * vp + y * vi;
                A(i, k) = -bg * vp + ag * vi;
            }
        }
        if (p < 0) continue;
        if (p != row) A.swap_rows(p, row);
        if (A(row, col) < 0) A.scale_row(row, mpz_class(-1));
        mpz_class piv = A(row, col);
        for (int i = 0; i < row; ++i) {
            mpz_class q;
            mpz_fdiv_q(q.get_mpz_t(), A(i, col).get_mpz_t(), piv.get_mpz_t());
            if (q != 0) A.add_row(i, row, -q);
        }
        ++row;
    }
    ZMat out(row, c);
    for (int i = 0; i < row; ++i)
        for (int j = 0; j < c; ++j) out(i, j) = A(i, j);
    return out;
}

ZMat kernel_z(const ZMat& M) {
    SnfResult s = smith_normal_form(M);
    int m = std::min(M.rows(), M.cols());
    std::vector<int> free_cols;
    for (int i = 0; i < m; ++i)
        if (s.D(i, i) == 0) free_cols.push_back(i);
    for (int i = m; i < M.cols(); ++i) free_cols.push_back(i);
    ZMat K(static_cast<int>(free_cols.size()), M.cols());
    for (size_t t = 0; t < free_cols.size(); ++t)
        for (int i = 0; i < M.cols(); ++i) K(static_cast<int>(t), i) = s.V(i, free_cols[t]);
    return hnf_rows(K);
}

ZMat kernel_q(const QMat& M) { return kernel_z(clear_row_denominators(M)); }

ZMat saturation_rows(const ZMat& B) {
    SnfResult s = smith_normal_form(B);
    int r = s.rank();
    ZMat Vinv = inverse_unimodular(s.V);
    ZMat out(r, B.cols());
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < B.cols(); ++j) out(i, j) = Vinv(i, j);
    return hnf_rows(out);
}

mpz_class det_bareiss(ZMat M) {
    require(M.is_square(), "determinant of non-square matrix");
    int n = M.rows();
    if (n == 0) return 1;
    mpz_class prev(1);
    int sign = 1;
    for (int t = 0; t < n - 1; ++t) {
        if (M(t, t) == 0) {
            int p = -1;
            for (int i = t + 1; i < n; ++i)
                if (M(i, t) != 0) { p = i; break; }
            if (p < 0) return 0;
            M.swap_rows(t, p);
            sign = -sign;
        }
        for (int i = t + 1; i < n; ++i)
            for (int j = t + 1; j < n; ++j) {
                mpz_class v = M(i, j) * M(t, t) - M(i, t) * M(t, j);
                mpz_divexact(M(i, j).get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
            }
        prev = M(t, t);
    }
    return sign * M(n - 1, n - 1);
}

QMat inverse_q(const QMat& M) {
    require(M.is_square(), "inverse of non-square matrix");
    int n = M.rows();
    QMat A = M, I = QMat::identity(n);
    for (int t = 0; t < n; ++t) {
        int p = -1;
        for (int i = t; i < n; ++i)
            if (A(i, t) != 0) { p = i; break; }
        require(p >= 0, "singular matrix");
        if (p != t) { A.swap_rows(t, p); I.swap_rows(t, p); }
        mpq_class inv = 1 / A(t, t);
        A.scale_row(t, inv);
        I.scale_row(t, inv);
        for (int i = 0; i < n; ++i) {
            if (i == t || A(i, t) == 0) continue;
            mpq_class f = -A(i, t);
            A.add_row(i, t, f);
            I.add_row(i, t, f);
        }
    }
    return I;
}

ZMat inverse_unimodular(const ZMat& U) {
    ZMat inv = to_zmat(inverse_q(to_qmat(U)));
    return inv;
}

int rank_q(QMat M) {
    int r = M.rows(), c = M.cols(), rank = 0;
    for (int col = 0; col < c && rank < r; ++col) {
        int p = -1;
        for (int i = rank; i < r; ++i)
            if (M(i, col) != 0) { p = i; break; }
        if (p < 0) continue;
        if (p != rank) M.swap_rows(p, rank);
        for (int i = rank + 1; i < r; ++i) {
            if (M(i, col) == 0) continue;
            M.add_row(i, rank, -M(i, col) / M(rank, col));
        }
        ++rank;
    }
    return rank;
}

int rank_z(const ZMat& M) { return rank_q(to_qmat(M)); }

std::optional<QVec> solve_q(QMat A, QVec b) {
    int r = A.rows(), c = A.cols();
    require(static_cast<int>(b.size()) == r, "solve shape mismatch");
    std::vector<int> pivot_col;
    int rank = 0;
    for (int col = 0; col < c && rank < r; ++col) {
        int p = -1;
        for (int i = rank; i < r; ++i)
            if (A(i, col) != 0) { p = i; break; }
        if (p < 0) continue;
        if (p != rank) { A.swap_rows(p, rank); std::swap(b[p], b[rank]); }
        mpq_class inv = 1 / A(rank, col);
        A.scale_row(rank, inv);
        b[rank] *= inv;
        for (int i = 0; i < r; ++i) {
            if (i == rank || A(i, col) == 0) continue;
            mpq_class f = A(i, col);
            A.add_row(i, rank, -f);
            b[i] -= f * b[rank];
        }
        pivot_col.push_back(col);
        ++rank;
    }
    for (int i = rank; i < r; ++i)
        if (b[i] != 0) return std::nullopt;
    QVec x(c, mpq_class(0));
    for (int i = 0; i < rank; ++i) x[pivot_col[i]] = b[i];
    return x;
}

Signature signature_symmetric(QMat G) {
    require(G.is_square(), "signature of non-square matrix");
    int n = G.rows();
    Signature sig;
    for (int t = 0; t < n; ++t) {
        if (G(t, t) == 0) {
            int p = -1;
            for (int i = t + 1; i < n; ++i)
                if (G(i, i) != 0) { p = i; break; }
            if (p >= 0) {
                G.swap_rows(t, p);
                G.swap_cols(t, p);
            } else {
                // all remaining diagonal entries vanish; pull in an off-diagonal one
                int oi = -1, oj = -1;
                for (int i = t; i < n && oi < 0; ++i)
                    for (int j = i + 1; j < n; ++j)
                        if (G(i, j) != 0) { oi = i; oj = j; break; }
                if (oi < 0) {
                    sig.zero += n - t;
                    return sig;
                }
                if (oi != t) { G.swap_rows(t, oi); G.swap_cols(t, oi); }
                G.add_row(t, oj, mpq_class(1));
                G.add_col(t, oj, mpq_class(1));
            }
        }
        mpq_class p = G(t, t);
        for (int i = t + 1; i < n; ++i) {
            if (G(i, t) == 0) continue;
            mpq_class f = G(i, t) / p;
            G.add_row(i, t, -f);
            G.add_col(i, t, -f);
        }
        if (sgn(p) > 0) ++sig.pos; else ++sig.neg;
    }
    return sig;
}

bool hnf_member(const ZMat& hnf, ZVec v) {
    require(static_cast<int>(v.size()) == hnf.cols(), "member length mismatch");
    for (int i = 0; i < hnf.rows(); ++i) {
        int pc = -1;
        for (int j = 0; j < hnf.cols(); ++j)
            if (hnf(i, j) != 0) { pc = j; break; }
        if (pc < 0) continue;
        if (v[pc] == 0) continue;
        if (v[pc] % hnf(i, pc) != 0) return false;
        mpz_class q = v[pc] / hnf(i, pc);
        for (int j = 0; j < hnf.cols(); ++j) v[j] -= q * hnf(i, j);
    }
    for (const mpz_class& x : v)
        if (x != 0) return false;
    return true;
}

void HnfAccumulator::add_row(const ZVec& v) {
    require(static_cast<int>(v.size()) == cols_, "accumulator row length mismatch");
    pending_.push_back(v);
    if (static_cast<int>(pending_.size()) >= 2 * cols_ + 16) fold();
}

void HnfAccumulator::add_rows(const ZMat& m) {
    for (int i = 0; i < m.rows(); ++i) add_row(m.row(i));
}

void HnfAccumulator::fold() {
    if (pending_.empty()) return;
    ZMat p = ZMat::from_rows(pending_);
    pending_.clear();
    basis_ = basis_.rows() ? hnf_rows(vstack(basis_, p)) : hnf_rows(p);
}

const ZMat& HnfAccumulator::matrix() {
    fold();
    if (basis_.rows() == 0 && basis_.cols() != cols_) basis_ = ZMat(0, cols_);
    return basis_;
}

std::vector<mpz_class> char_poly(const ZMat& g) {
    require(g.is_square(), "characteristic polynomial of non-square matrix");
    int n = g.rows();
    std::vector<mpq_class> c(n + 1);
    c[n] = 1;
    QMat A = to_qmat(g);
    QMat N = A;
    c[n - 1] = -N.trace();
    for (int k = 2; k <= n; ++k) {
        QMat M = N;
        for (int i = 0; i < n; ++i) M(i, i) += c[n - k + 1];
        N = A * M;
        c[n - k] = -N.trace() / k;
    }
    std::vector<mpz_class> out(n + 1);
    for (int i = 0; i <= n; ++i) {
        check_invariant(c[i].get_den() == 1, "characteristic polynomial not integral");
        out[i] = c[i].get_num();
    }
    return out;
}

std::optional<std::vector<mpz_class>> poly_divexact(const std::vector<mpz_class>& num,
                                                    const std::vector<mpz_class>& den) {
    if (den.empty() || den.back() == 0) return std::nullopt;
    if (num.size() < den.size()) return std::nullopt;
    std::vector<mpz_class> rem = num;
    std::vector<mpz_class> quo(num.size() - den.size() + 1, mpz_class(0));
    for (int k = static_cast<int>(quo.size()) - 1; k >= 0; --k) {
        mpz_class lead = rem[k + den.size() - 1];
        if (lead % den.back() != 0) return std::nullopt;
        mpz_class q = lead / den.back();
        quo[k] = q;
        for (size_t i = 0; i < den.size(); ++i) rem[k + i] -= q * den[i];
    }
    for (const mpz_class& x : rem)
        if (x != 0) return std::nullopt;
    return quo;
}

ZMat poly_eval_matrix(const std::vector<mpz_class>& p, const ZMat& g) {
    int n = g.rows();
    ZMat acc(n, n);
    for (int k = static_cast<int>(p.size()) - 1; k >= 0; --k) {
        acc = acc * g;
        for (int i = 0; i < n; ++i) acc(i, i) += p[k];
    }
    return acc;
}

std::vector<mpz_class> cyclotomic(unsigned long d) {
    static std::map<unsigned long, std::vector<mpz_class>> memo;
    auto it = memo.find(d);
    if (it != memo.end()) return it->second;
    // x^d - 1
    std::vector<mpz_class> num(d + 1, mpz_class(0));
    num[0] = -1;
    num[d] = 1;
    for (unsigned long e = 1; e < d; ++e) {
        if (d % e != 0) continue;
        auto q = poly_divexact(num, cyclotomic(e));
        check_invariant(q.has_value(), "cyclotomic division failed");
        num = *q;
    }
    memo[d] = num;
    return num;
}

ZMat lll_reduce(ZMat B) {
    int n = B.rows();
    if (n <= 1) return B;
    int m = B.cols();

    auto dotz = [&](int i, int j) {
        mpz_class s(0);
        for (int k = 0; k < m; ++k) s += B(i, k) * B(j, k);
        return s;
    };

    std::vector<std::vector<mpq_class>> mu(n, std::vector<mpq_class>(n, mpq_class(0)));
    std::vector<mpq_class> Bn(n, mpq_class(0)); // squared norms of GS vectors

    auto gram_schmidt = [&]() {
        std::vector<std::vector<mpq_class>> gs(n, std::vector<mpq_class>(m));
        for (int i = 0; i < n; ++i) {
            for (int k = 0; k < m; ++k) gs[i][k] = mpq_class(B(i, k));
            for (int j = 0; j < i; ++j) {
                mpq_class d(0);
                for (int k = 0; k < m; ++k) d += mpq_class(B(i, k)) * gs[j][k];
                mu[i][j] = Bn[j] == 0 ? mpq_class(0) : d / Bn[j];
                for (int k = 0; k < m; ++k) gs[i][k] -= mu[i][j] * gs[j][k];
            }
            Bn[i] = 0;
            for (int k = 0; k < m; ++k) Bn[i] += gs[i][k] * gs[i][k];
        }
    };

    gram_schmidt();
    (void)dotz;
    int k = 1;
    const mpq_class delta(3, 4);
    int steps = 0;
    while (k < n) {
        if (++steps > 100000) throw GuardExceeded("LLL iteration bound exceeded");
        for (int j = k - 1; j >= 0; --j) {
            mpq_class q = mu[k][j];
            mpz_class r;
            // nearest integer to q
            mpz_class num2 = 2 * q.get_num() + q.get_den();
            mpz_fdiv_q(r.get_mpz_t(), num2.get_mpz_t(), mpz_class(2 * q.get_den()).get_mpz_t());
            if (r != 0) {
                for (int t = 0; t < m; ++t) B(k, t) -= r * B(j, t);
                gram_schmidt();
            }
        }
        if (Bn[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * Bn[k - 1]) {
            ++k;
        } else {
            B.swap_rows(k, k - 1);
            gram_schmidt();
            k = std::max(k - 1, 1);
        }
    }
    return B;
}

ZMat clear_row_denominators(const QMat& M) {
    ZMat Z(M.rows(), M.cols());
    for (int i = 0; i < M.rows(); ++i) {
        mpz_class l(1);
        for (int j = 0; j < M.cols(); ++j)
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), M(i, j).get_den().get_mpz_t());
        for (int j = 0; j < M.cols(); ++j) {
            mpq_class v = M(i, j) * l;
            Z(i, j) = v.get_num();
        }
    }
    return Z;
}

ZMat vstack(const ZMat& a, const ZMat& b) {
    if (a.rows() == 0) return b;
    if (b.rows() == 0) return a;
    require(a.cols() == b.cols(), "vstack width mismatch");
    ZMat m(a.rows() + b.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
    for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) m(a.rows() + i, j) = b(i, j);
    return m;
}

ZMat hstack(const ZMat& a, const ZMat& b) {
    require(a.rows() == b.rows(), "hstack height mismatch");
    ZMat m(a.rows(), a.cols() + b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
        for (int j = 0; j < b.cols(); ++j) m(i, a.cols() + j) = b(i, j);
    }
    return m;
}

} // namespace ks
