#pragma once

#include <gmpxx.h>
#include <string>

#include "ks/errors.hpp"

namespace ks {

enum class ScalarMode { Rational, Quadratic, BigFloat };

std::string scalar_mode_name(ScalarMode m);

// Exact scalar in one of three modes:
//   Rational   -- a, an mpq
//   Quadratic  -- a + b*sqrt(D) with D squarefree >= 2, real embedding sqrt(D) > 0
//   BigFloat   -- arbitrary-precision float; results derived from it are unverified
// Rational values mix freely into quadratic arithmetic (canonical inclusion).
// Exact/float mixing and mismatched radicands are errors.
class Scalar {
public:
    Scalar() : mode_(ScalarMode::Rational) {}
    Scalar(long v) : mode_(ScalarMode::Rational), a_(v) {}
    Scalar(int v) : mode_(ScalarMode::Rational), a_(v) {}
    Scalar(const mpz_class& v) : mode_(ScalarMode::Rational), a_(v) {}
    Scalar(const mpq_class& v) : mode_(ScalarMode::Rational), a_(v) { a_.canonicalize(); }

    static Scalar quadratic(const mpq_class& a, const mpq_class& b, unsigned long d);
    static Scalar bigfloat(const mpf_class& f);

    ScalarMode mode() const { return mode_; }
    unsigned long radicand() const { return d_; }
    unsigned long precision() const { return prec_; }

    bool is_zero() const;
    int sign() const;              // exact in both exact modes
    bool is_rational() const;      // no surd part and not float
    mpq_class as_rational() const; // error when surd part nonzero or float mode
    const mpq_class& rat() const { return a_; }
    const mpq_class& surd() const { return b_; }
    const mpf_class& flt() const { return f_; }

    Scalar conj() const;           // a - b*sqrt(D); identity in other modes
    Scalar to_bigfloat(unsigned long prec) const;
    std::string str() const;

    Scalar operator-() const;
    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);
    Scalar& operator/=(const Scalar& o);

    friend Scalar operator+(Scalar x, const Scalar& y) { x += y; return x; }
    friend Scalar operator-(Scalar x, const Scalar& y) { x -= y; return x; }
    friend Scalar operator*(Scalar x, const Scalar& y) { x *= y; return x; }
    friend Scalar operator/(Scalar x, const Scalar& y) { x /= y; return x; }

    bool operator==(const Scalar& o) const;
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    Scalar abs() const { return sign() < 0 ? -*this : *this; }

    // |x| <= eps in float mode, exact zero otherwise
    bool within(const mpq_class& eps) const;
    bool within(const Scalar& eps) const; // |x| <= eps, any mode mix

private:
    static void align(Scalar& x, Scalar& y);

    ScalarMode mode_;
    mpq_class a_, b_;
    unsigned long d_ = 0;
    mpf_class f_;
    unsigned long prec_ = 0;
};

bool is_squarefree(unsigned long d);

} // namespace ks
