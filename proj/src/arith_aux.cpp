#include "ks/arith_aux.hpp"

#include <algorithm>

#include "ks/errors.hpp"
#include "ks/zlinalg.hpp"

namespace ks {

NeatCertificate neat_congruence_level(int n) {
    require(n >= 1, "rank must be positive");
    NeatCertificate cert;
    cert.n = n;
    mpz_fac_ui(cert.n_factorial.get_mpz_t(), static_cast<unsigned long>(n));
    // smallest prime ell with ell - 1 > n!, i.e. the next prime after n! + 1
    mpz_class start = cert.n_factorial + 1;
    mpz_nextprime(cert.prime.get_mpz_t(), start.get_mpz_t());
    return cert;
}

namespace {

int poly_degree(const std::vector<mpz_class>& p) { return static_cast<int>(p.size()) - 1; }

// strips cyclotomic factors off the characteristic polynomial; the leftover
// degree is zero exactly when the polynomial is a product of cyclotomics
std::pair<std::vector<unsigned long>, int> strip_cyclotomics(const ZMat& g) {
    require(g.is_square(), "matrix must be square");
    std::vector<mpz_class> rem = char_poly(g);
    int n = g.rows();
    std::vector<unsigned long> orders;
    // phi(d) >= sqrt(d/2), so every factor of degree <= n has d <= 2n^2
    unsigned long dmax = 2ul * static_cast<unsigned long>(n) * static_cast<unsigned long>(n) + 1;
    for (unsigned long d = 1; d <= dmax && poly_degree(rem) > 0; ++d) {
        std::vector<mpz_class> phi = cyclotomic(d);
        if (poly_degree(phi) > poly_degree(rem)) continue;
        while (true) {
            auto q = poly_divexact(rem, phi);
            if (!q.has_value()) break;
            rem = std::move(*q);
            orders.push_back(d);
            if (poly_degree(rem) == 0) break;
        }
    }
    return {orders, poly_degree(rem)};
}

} // namespace

std::vector<unsigned long> cyclotomic_orders(const ZMat& g) {
    auto [orders, leftover] = strip_cyclotomics(g);
    if (leftover != 0) return {};
    std::sort(orders.begin(), orders.end());
    return orders;
}

bool has_finite_order(const ZMat& g) {
    auto [orders, leftover] = strip_cyclotomics(g);
    if (leftover != 0) return false;
    if (orders.empty()) return true;
    std::sort(orders.begin(), orders.end());
    orders.erase(std::unique(orders.begin(), orders.end()), orders.end());
    // the radical of the characteristic polynomial must annihilate g, which
    // rules out unipotent parts
    std::vector<mpz_class> radical{1};
    for (unsigned long d : orders) {
        std::vector<mpz_class> phi = cyclotomic(d);
        std::vector<mpz_class> prod(radical.size() + phi.size() - 1, 0);
        for (size_t i = 0; i < radical.size(); ++i)
            for (size_t j = 0; j < phi.size(); ++j) prod[i + j] += radical[i] * phi[j];
        radical = std::move(prod);
    }
    return poly_eval_matrix(radical, g).is_zero();
}

bool congruence_membership(const ZMat& g, const mpz_class& ell) {
    require(g.is_square(), "matrix must be square");
    require(ell >= 2, "level must be at least 2");
    for (int i = 0; i < g.rows(); ++i)
        for (int j = 0; j < g.cols(); ++j) {
            mpz_class v = g(i, j);
            if (i == j) v -= 1;
            if (v % ell != 0) return false;
        }
    return true;
}

TriState fujino_separation_check(int dim, const std::vector<mpq_class>& c, int precision_bits) {
    require(dim >= 1, "dimension must be positive");
    require(static_cast<int>(c.size()) == dim, "one coefficient per index is needed");
    require(precision_bits >= 8, "precision too small");
    for (const auto& x : c) require(x > 0, "coefficients must be positive");

    // sum over k of k * 2^(1/k) / c(k), bracketed by outward rational bounds
    mpq_class lo = 0, hi = 0;
    unsigned long t = static_cast<unsigned long>(precision_bits);
    for (int k = 1; k <= dim; ++k) {
        mpq_class weight = mpq_class(k) / c[static_cast<size_t>(k - 1)];
        if (k == 1) {
            lo += 2 * weight;
            hi += 2 * weight;
            continue;
        }
        // floor root of 2^(k t + 1) brackets 2^t * 2^(1/k) between r and r + 1
        mpz_class N;
        mpz_ui_pow_ui(N.get_mpz_t(), 2, static_cast<unsigned long>(k) * t + 1);
        mpz_class r;
        mpz_root(r.get_mpz_t(), N.get_mpz_t(), static_cast<unsigned long>(k));
        mpz_class scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 2, t);
        mpq_class root_lo(r, scale), root_hi(r + 1, scale);
        root_lo.canonicalize();
        root_hi.canonicalize();
        lo += root_lo * weight;
        hi += root_hi * weight;
    }
    if (hi <= 1) return TriState::yes;
    if (lo > 1) return TriState::no;
    return TriState::indeterminate;
}

std::vector<mpz_class> prime_factors(const mpz_class& n) {
    require(n != 0, "zero has no factorization");
    mpz_class m = abs(n);
    std::vector<mpz_class> out;
    auto push = [&](const mpz_class& p) {
        if (out.empty() || out.back() != p) out.push_back(p);
    };
    while (m % 2 == 0) {
        push(2);
        m /= 2;
    }
    mpz_class d = 3;
    while (d * d <= m) {
        if (m % d == 0) {
            push(d);
            while (m % d == 0) m /= d;
        } else {
            d += 2;
        }
    }
    if (m > 1) push(m);
    return out;
}

bool is_prime(const mpz_class& p) {
    if (p < 2) return false;
    return mpz_probab_prime_p(p.get_mpz_t(), 40) > 0;
}

int valuation(const mpz_class& n, const mpz_class& ell) {
    require(n != 0, "valuation of zero is infinite");
    require(ell >= 2, "valuation base must be at least 2");
    mpz_class m = abs(n);
    int v = 0;
    while (m % ell == 0) {
        m /= ell;
        ++v;
    }
    return v;
}

} // namespace ks
