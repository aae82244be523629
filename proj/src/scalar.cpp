#include "ks/scalar.hpp"

#include <algorithm>

namespace ks {

std::string scalar_mode_name(ScalarMode m) {
    switch (m) {
        case ScalarMode::Rational: return "rational";
        case ScalarMode::Quadratic: return "quadratic";
        case ScalarMode::BigFloat: return "float";
    }
    return "?";
}

bool is_squarefree(unsigned long d) {
    for (unsigned long p = 2; p * p <= d; ++p) {
        unsigned long sq = p * p;
        if (d % sq == 0) return false;
    }
    return true;
}

Scalar Scalar::quadratic(const mpq_class& a, const mpq_class& b, unsigned long d) {
    require(d >= 2, "quadratic radicand must be >= 2");
    require(is_squarefree(d), "quadratic radicand must be squarefree");
    Scalar s;
    s.mode_ = ScalarMode::Quadratic;
    s.a_ = a;
    s.b_ = b;
    s.a_.canonicalize();
    s.b_.canonicalize();
    s.d_ = d;
    return s;
}

Scalar Scalar::bigfloat(const mpf_class& f) {
    Scalar s;
    s.mode_ = ScalarMode::BigFloat;
    // assignment alone would keep f_'s default (lower) precision and truncate
    s.f_.set_prec(f.get_prec());
    s.f_ = f;
    s.prec_ = f.get_prec();
    return s;
}

bool Scalar::is_zero() const {
    switch (mode_) {
        case ScalarMode::Rational: return a_ == 0;
        case ScalarMode::Quadratic: return a_ == 0 && b_ == 0;
        case ScalarMode::BigFloat: return f_ == 0;
    }
    return false;
}

int Scalar::sign() const {
    switch (mode_) {
        case ScalarMode::Rational:
            return sgn(a_);
        case ScalarMode::BigFloat:
            return sgn(f_);
        case ScalarMode::Quadratic: {
            int sa = sgn(a_), sb = sgn(b_);
            if (sb == 0) return sa;
            if (sa == 0) return sb;
            if (sa == sb) return sa;
            // opposite signs: compare a^2 against b^2 D; the larger magnitude wins
            mpq_class lhs = a_ * a_, rhs = b_ * b_ * d_;
            int c = cmp(lhs, rhs);
            if (c == 0) throw InvariantViolation("sqrt(D) rational, radicand not squarefree");
            return c > 0 ? sa : sb;
        }
    }
    return 0;
}

bool Scalar::is_rational() const {
    return mode_ == ScalarMode::Rational || (mode_ == ScalarMode::Quadratic && b_ == 0);
}

mpq_class Scalar::as_rational() const {
    require(is_rational(), "scalar has no exact rational value");
    return a_;
}

Scalar Scalar::conj() const {
    if (mode_ != ScalarMode::Quadratic) return *this;
    Scalar s = *this;
    s.b_ = -s.b_;
    return s;
}

Scalar Scalar::to_bigfloat(unsigned long prec) const {
    mpf_class r(0, prec);
    switch (mode_) {
        case ScalarMode::Rational:
            r = a_;
            break;
        case ScalarMode::Quadratic: {
            mpf_class root(d_, prec);
            root = sqrt(root);
            r = mpf_class(a_, prec) + mpf_class(b_, prec) * root;
            break;
        }
        case ScalarMode::BigFloat:
            r = f_;
            break;
    }
    return bigfloat(r);
}

std::string Scalar::str() const {
    switch (mode_) {
        case ScalarMode::Rational:
            return a_.get_str();
        case ScalarMode::Quadratic:
            return a_.get_str() + (sgn(b_) < 0 ? " - " : " + ") +
                   mpq_class(::abs(b_)).get_str() + "*sqrt(" + std::to_string(d_) + ")";
        case ScalarMode::BigFloat: {
            mp_exp_t e;
            std::string m = f_.get_str(e, 10, 0);
            if (m.empty()) m = "0";
            std::string sign;
            if (m[0] == '-') { sign = "-"; m = m.substr(1); }
            return sign + "0." + m + "e" + std::to_string(e);
        }
    }
    return "?";
}

void Scalar::align(Scalar& x, Scalar& y) {
    if (x.mode_ == y.mode_) {
        if (x.mode_ == ScalarMode::Quadratic && x.d_ != y.d_)
            throw ValidationError("mixed quadratic radicands " + std::to_string(x.d_) +
                                  " and " + std::to_string(y.d_));
        if (x.mode_ == ScalarMode::BigFloat) {
            unsigned long p = std::max(x.prec_, y.prec_);
            x.f_.set_prec(p);
            y.f_.set_prec(p);
            x.prec_ = y.prec_ = p;
        }
        return;
    }
    if (x.mode_ == ScalarMode::Rational && y.mode_ == ScalarMode::Quadratic) {
        x.mode_ = ScalarMode::Quadratic;
        x.d_ = y.d_;
        return;
    }
    if (y.mode_ == ScalarMode::Rational && x.mode_ == ScalarMode::Quadratic) {
        y.mode_ = ScalarMode::Quadratic;
        y.d_ = x.d_;
        return;
    }
    // exact values carry full precision, so demoting one to the float
    // operand's precision is the only faithful way to mix them
    if (x.mode_ == ScalarMode::BigFloat) {
        y = y.to_bigfloat(x.prec_);
        return;
    }
    if (y.mode_ == ScalarMode::BigFloat) {
        x = x.to_bigfloat(y.prec_);
        return;
    }
    throw ValidationError("cannot mix " + scalar_mode_name(x.mode_) + " and " +
                          scalar_mode_name(y.mode_) + " scalars");
}

Scalar Scalar::operator-() const {
    Scalar s = *this;
    s.a_ = -s.a_;
    s.b_ = -s.b_;
    if (s.mode_ == ScalarMode::BigFloat) s.f_ = -s.f_;
    return s;
}

Scalar& Scalar::operator+=(const Scalar& o) {
    Scalar rhs = o;
    align(*this, rhs);
    if (mode_ == ScalarMode::BigFloat) {
        f_ += rhs.f_;
    } else {
        a_ += rhs.a_;
        b_ += rhs.b_;
    }
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
    Scalar rhs = o;
    align(*this, rhs);
    if (mode_ == ScalarMode::BigFloat) {
        f_ -= rhs.f_;
    } else {
        a_ -= rhs.a_;
        b_ -= rhs.b_;
    }
    return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
    Scalar rhs = o;
    align(*this, rhs);
    switch (mode_) {
        case ScalarMode::Rational:
            a_ *= rhs.a_;
            break;
        case ScalarMode::Quadratic: {
            mpq_class na = a_ * rhs.a_ + b_ * rhs.b_ * d_;
            mpq_class nb = a_ * rhs.b_ + b_ * rhs.a_;
            a_ = na;
            b_ = nb;
            break;
        }
        case ScalarMode::BigFloat:
            f_ *= rhs.f_;
            break;
    }
    return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
    Scalar rhs = o;
    align(*this, rhs);
    require(!rhs.is_zero(), "scalar division by zero");
    switch (mode_) {
        case ScalarMode::Rational:
            a_ /= rhs.a_;
            break;
        case ScalarMode::Quadratic: {
            // multiply by the conjugate over the field norm
            mpq_class nrm = rhs.a_ * rhs.a_ - rhs.b_ * rhs.b_ * d_;
            if (nrm == 0) throw InvariantViolation("zero field norm for nonzero quadratic scalar");
            mpq_class na = (a_ * rhs.a_ - b_ * rhs.b_ * d_) / nrm;
            mpq_class nb = (b_ * rhs.a_ - a_ * rhs.b_) / nrm;
            a_ = na;
            b_ = nb;
            break;
        }
        case ScalarMode::BigFloat:
            f_ /= rhs.f_;
            break;
    }
    return *this;
}

bool Scalar::operator==(const Scalar& o) const {
    Scalar x = *this, y = o;
    align(x, y);
    if (x.mode_ == ScalarMode::BigFloat) return x.f_ == y.f_;
    return x.a_ == y.a_ && x.b_ == y.b_;
}

bool Scalar::within(const mpq_class& eps) const {
    if (mode_ == ScalarMode::BigFloat) {
        mpf_class bound(eps, prec_ ? prec_ : 64);
        return ::abs(f_) <= bound;
    }
    return is_zero();
}

bool Scalar::within(const Scalar& eps) const {
    Scalar d = abs() - eps;
    return d.sign() <= 0;
}

} // namespace ks
