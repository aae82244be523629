#pragma once

#include <gmpxx.h>
#include <initializer_list>
#include <string>
#include <vector>

#include "ks/errors.hpp"
#include "ks/scalar.hpp"

namespace ks {

// Dense row-major matrix over an exact coefficient type.
template <typename T>
class Mat {
public:
    Mat() = default;
    Mat(int r, int c) : r_(r), c_(c), a_(static_cast<size_t>(r) * c) {
        require(r >= 0 && c >= 0, "negative matrix dimension");
    }
    Mat(int r, int c, const T& fill) : Mat(r, c) {
        for (auto& x : a_) x = fill;
    }

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    static Mat from_rows(const std::vector<std::vector<T>>& rows) {
        int c = rows.empty() ? 0 : static_cast<int>(rows[0].size());
        return from_rows(rows, c);
    }

    static Mat from_rows(const std::vector<std::vector<T>>& rows, int cols) {
        int r = static_cast<int>(rows.size());
        Mat m(r, cols);
        for (int i = 0; i < r; ++i) {
            require(static_cast<int>(rows[i].size()) == cols, "ragged rows");
            for (int j = 0; j < cols; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    int rows() const { return r_; }
    int cols() const { return c_; }
    bool is_square() const { return r_ == c_; }

    T& operator()(int i, int j) { return a_[static_cast<size_t>(i) * c_ + j]; }
    const T& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * c_ + j]; }

    std::vector<T> row(int i) const {
        std::vector<T> v(c_);
        for (int j = 0; j < c_; ++j) v[j] = (*this)(i, j);
        return v;
    }

    std::vector<T> col(int j) const {
        std::vector<T> v(r_);
        for (int i = 0; i < r_; ++i) v[i] = (*this)(i, j);
        return v;
    }

    void set_row(int i, const std::vector<T>& v) {
        require(static_cast<int>(v.size()) == c_, "row length mismatch");
        for (int j = 0; j < c_; ++j) (*this)(i, j) = v[j];
    }

    Mat transpose() const {
        Mat m(c_, r_);
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < c_; ++j) m(j, i) = (*this)(i, j);
        return m;
    }

    Mat operator+(const Mat& o) const {
        require(r_ == o.r_ && c_ == o.c_, "matrix shape mismatch");
        Mat m(r_, c_);
        for (size_t k = 0; k < a_.size(); ++k) m.a_[k] = a_[k] + o.a_[k];
        return m;
    }

    Mat operator-(const Mat& o) const {
        require(r_ == o.r_ && c_ == o.c_, "matrix shape mismatch");
        Mat m(r_, c_);
        for (size_t k = 0; k < a_.size(); ++k) m.a_[k] = a_[k] - o.a_[k];
        return m;
    }

    Mat operator-() const {
        Mat m(r_, c_);
        for (size_t k = 0; k < a_.size(); ++k) m.a_[k] = -a_[k];
        return m;
    }

    Mat operator*(const Mat& o) const {
        require(c_ == o.r_, "matrix product shape mismatch");
        Mat m(r_, o.c_);
        for (int i = 0; i < r_; ++i)
            for (int k = 0; k < c_; ++k) {
                const T& x = (*this)(i, k);
                if (x == T(0)) continue;
                for (int j = 0; j < o.c_; ++j) m(i, j) += x * o(k, j);
            }
        return m;
    }

    std::vector<T> operator*(const std::vector<T>& v) const {
        require(static_cast<int>(v.size()) == c_, "matrix-vector shape mismatch");
        std::vector<T> out(r_, T(0));
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < c_; ++j) out[i] += (*this)(i, j) * v[j];
        return out;
    }

    Mat scaled(const T& s) const {
        Mat m(r_, c_);
        for (size_t k = 0; k < a_.size(); ++k) m.a_[k] = a_[k] * s;
        return m;
    }

    bool operator==(const Mat& o) const {
        return r_ == o.r_ && c_ == o.c_ && a_ == o.a_;
    }
    bool operator!=(const Mat& o) const { return !(*this == o); }

    bool is_zero() const {
        for (const T& x : a_)
            if (!(x == T(0))) return false;
        return true;
    }

    bool is_symmetric() const {
        if (!is_square()) return false;
        for (int i = 0; i < r_; ++i)
            for (int j = i + 1; j < c_; ++j)
                if (!((*this)(i, j) == (*this)(j, i))) return false;
        return true;
    }

    T trace() const {
        require(is_square(), "trace of non-square matrix");
        T t(0);
        for (int i = 0; i < r_; ++i) t += (*this)(i, i);
        return t;
    }

    Mat submatrix(const std::vector<int>& ri, const std::vector<int>& ci) const {
        Mat m(static_cast<int>(ri.size()), static_cast<int>(ci.size()));
        for (size_t i = 0; i < ri.size(); ++i)
            for (size_t j = 0; j < ci.size(); ++j) m(static_cast<int>(i), static_cast<int>(j)) = (*this)(ri[i], ci[j]);
        return m;
    }

    void swap_rows(int i, int j) {
        for (int k = 0; k < c_; ++k) std::swap((*this)(i, k), (*this)(j, k));
    }
    void swap_cols(int i, int j) {
        for (int k = 0; k < r_; ++k) std::swap((*this)(k, i), (*this)(k, j));
    }
    // row i += s * row j
    void add_row(int i, int j, const T& s) {
        for (int k = 0; k < c_; ++k) (*this)(i, k) += s * (*this)(j, k);
    }
    void add_col(int i, int j, const T& s) {
        for (int k = 0; k < r_; ++k) (*this)(k, i) += s * (*this)(k, j);
    }
    void scale_row(int i, const T& s) {
        for (int k = 0; k < c_; ++k) (*this)(i, k) *= s;
    }

    std::vector<T> flatten() const { return a_; }

private:
    int r_ = 0, c_ = 0;
    std::vector<T> a_;
};

using ZMat = Mat<mpz_class>;
using QMat = Mat<mpq_class>;
using SMat = Mat<Scalar>;
using ZVec = std::vector<mpz_class>;
using QVec = std::vector<mpq_class>;
using SVec = std::vector<Scalar>;

inline QMat to_qmat(const ZMat& m) {
    QMat q(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) q(i, j) = mpq_class(m(i, j));
    return q;
}

inline SMat to_smat(const ZMat& m) {
    SMat s(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) s(i, j) = Scalar(m(i, j));
    return s;
}

inline SMat to_smat(const QMat& m) {
    SMat s(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) s(i, j) = Scalar(m(i, j));
    return s;
}

// exact conversion; error when an entry is not an integer
inline ZMat to_zmat(const QMat& m) {
    ZMat z(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            require(m(i, j).get_den() == 1, "matrix entry not an integer");
            z(i, j) = m(i, j).get_num();
        }
    return z;
}

inline std::string to_string(const ZMat& m) {
    std::string s = "[";
    for (int i = 0; i < m.rows(); ++i) {
        s += i ? "; " : "";
        for (int j = 0; j < m.cols(); ++j) s += (j ? "," : "") + m(i, j).get_str();
    }
    return s + "]";
}

} // namespace ks
