#ifndef VCALC_LINEAR_ALGEBRA_HPP
#define VCALC_LINEAR_ALGEBRA_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

#include "vcalc/algebra.hpp"
#include "vcalc/errors.hpp"

namespace vcalc {

// Dense vector over a scalar algebra. Keeps a zero element so that the scalar
// characteristics (e.g. a differential's degree) are known even when empty.
template <class X>
class Vector {
  public:
    Vector() = default;
    Vector(std::size_t n, const X& zero) : elements_(n, zero), zero_(zero) {}
    Vector(std::vector<X> elements, const X& zero) : elements_(std::move(elements)), zero_(zero) {}
    Vector(std::initializer_list<X> elements) : elements_(elements) {
        if (elements_.empty()) {
            throw UsageError("use Vector(n, zero) for empty vectors");
        }
        zero_ = make_constant(elements_.front(), 0);
    }

    std::size_t size() const noexcept { return elements_.size(); }
    const X& zero_element() const noexcept { return zero_; }
    X& operator[](std::size_t i) { return elements_[i]; }
    const X& operator[](std::size_t i) const { return elements_[i]; }
    X& at(std::size_t i) {
        check_index(i);
        return elements_[i];
    }
    const X& at(std::size_t i) const {
        check_index(i);
        return elements_[i];
    }
    auto begin() const { return elements_.begin(); }
    auto end() const { return elements_.end(); }
    auto begin() { return elements_.begin(); }
    auto end() { return elements_.end(); }
    const std::vector<X>& elements() const noexcept { return elements_; }

    friend Vector operator+(const Vector& v, const Vector& w) {
        check_sizes(v, w);
        Vector r(v);
        for (std::size_t i = 0; i < v.size(); ++i) {
            r.elements_[i] = v.elements_[i] + w.elements_[i];
        }
        return r;
    }
    friend Vector operator-(const Vector& v, const Vector& w) {
        check_sizes(v, w);
        Vector r(v);
        for (std::size_t i = 0; i < v.size(); ++i) {
            r.elements_[i] = v.elements_[i] - w.elements_[i];
        }
        return r;
    }
    friend Vector operator-(const Vector& v) {
        Vector r(v);
        for (auto& x : r.elements_) {
            x = -x;
        }
        return r;
    }
    friend Vector operator*(const X& c, const Vector& v) {
        Vector r(v);
        for (auto& x : r.elements_) {
            x = c * x;
        }
        return r;
    }

  private:
    void check_index(std::size_t i) const {
        if (i >= elements_.size()) {
            throw UsageError("vector index out of range");
        }
    }
    static void check_sizes(const Vector& v, const Vector& w) {
        if (v.size() != w.size()) {
            throw UsageError("vector length mismatch");
        }
    }

    std::vector<X> elements_;
    X zero_{};
};

template <class X>
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, const X& zero)
        : rows_(rows), cols_(cols), entries_(rows * cols, zero), zero_(zero) {}
    Matrix(std::initializer_list<std::initializer_list<X>> rows) {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        for (const auto& row : rows) {
            if (row.size() != cols_) {
                throw UsageError("ragged matrix initializer");
            }
            entries_.insert(entries_.end(), row.begin(), row.end());
        }
        if (entries_.empty()) {
            throw UsageError("use Matrix(rows, cols, zero) for empty matrices");
        }
        zero_ = make_constant(entries_.front(), 0);
    }

    static Matrix identity(std::size_t n, const X& zero) {
        Matrix m(n, n, zero);
        const X one = make_constant(zero, 1);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = one;
        }
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    const X& zero_element() const noexcept { return zero_; }
    X& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const X& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    friend Vector<X> operator*(const Matrix& a, const Vector<X>& v) {
        if (a.cols_ != v.size()) {
            throw UsageError("matrix-vector dimension mismatch");
        }
        Vector<X> r(a.rows_, a.zero_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            X s = a.zero_;
            for (std::size_t j = 0; j < a.cols_; ++j) {
                s = s + a(i, j) * v[j];
            }
            r[i] = s;
        }
        return r;
    }
    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) {
            throw UsageError("matrix product dimension mismatch");
        }
        Matrix r(a.rows_, b.cols_, a.zero_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t j = 0; j < b.cols_; ++j) {
                X s = a.zero_;
                for (std::size_t k = 0; k < a.cols_; ++k) {
                    s = s + a(i, k) * b(k, j);
                }
                r(i, j) = s;
            }
        }
        return r;
    }
    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) {
            throw UsageError("matrix difference dimension mismatch");
        }
        Matrix r(a);
        for (std::size_t k = 0; k < r.entries_.size(); ++k) {
            r.entries_[k] = a.entries_[k] - b.entries_[k];
        }
        return r;
    }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<X> entries_;
    X zero_{};
};

enum class NormKind { sup, euclidean, one };

template <class X>
X norm(const Vector<X>& v, NormKind which = NormKind::sup) {
    using std::abs;
    using std::max;
    using std::sqrt;
    X r = v.zero_element();
    switch (which) {
    case NormKind::sup:
        for (const auto& x : v) {
            r = max(r, abs(x));
        }
        return r;
    case NormKind::euclidean:
        for (const auto& x : v) {
            r = r + sqr(x);
        }
        return sqrt(r);
    case NormKind::one:
        for (const auto& x : v) {
            r = r + abs(x);
        }
        return r;
    }
    return r;
}

// Solves A x = b by Gaussian elimination in the scalar algebra X. Pivots are
// chosen among entries that cannot be zero, preferring the largest
// AlgebraTraits<X>::pivot_score (midpoint magnitude for bounds). Each result
// component encloses the solution of every point system represented by (A, b).
template <class X>
Vector<X> gauss_solve(Matrix<X> a, Vector<X> b) {
    const std::size_t n = a.rows();
    if (a.cols() != n || b.size() != n) {
        throw UsageError("gauss_solve requires a square system");
    }
    using Traits = AlgebraTraits<X>;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = n;
        double best = -1;
        for (std::size_t i = k; i < n; ++i) {
            if (Traits::contains_zero(a(i, k))) {
                continue;
            }
            const double score = Traits::pivot_score(a(i, k));
            if (score > best) {
                best = score;
                pivot = i;
            }
        }
        if (pivot == n) {
            throw SingularMatrixError("no pivot excludes zero in column " + std::to_string(k));
        }
        if (pivot != k) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(k, j), a(pivot, j));
            }
            std::swap(b[k], b[pivot]);
        }
        const X inv = rec(a(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            if (Traits::is_exact_zero(a(i, k))) {
                continue;
            }
            const X factor = a(i, k) * inv;
            for (std::size_t j = k + 1; j < n; ++j) {
                a(i, j) = a(i, j) - factor * a(k, j);
            }
            a(i, k) = make_constant(a(i, k), 0);
            b[i] = b[i] - factor * b[k];
        }
    }
    Vector<X> x(n, b.zero_element());
    for (std::size_t kk = n; kk-- > 0;) {
        X s = b[kk];
        for (std::size_t j = kk + 1; j < n; ++j) {
            s = s - a(kk, j) * x[j];
        }
        x[kk] = s / a(kk, kk);
    }
    return x;
}

inline Vector<ValidatedBounds> interval_gauss_solve(const Matrix<ValidatedBounds>& a,
                                                    const Vector<ValidatedBounds>& b) {
    return gauss_solve(a, b);
}

// Floating-point inverse by Gauss-Jordan elimination with partial pivoting;
// approximate, used as a preconditioner.
inline Matrix<double> approximate_inverse(Matrix<double> a) {
    const std::size_t n = a.rows();
    if (a.cols() != n) {
        throw UsageError("inverse requires a square matrix");
    }
    Matrix<double> inv = Matrix<double>::identity(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::fabs(a(i, k)) > std::fabs(a(pivot, k))) {
                pivot = i;
            }
        }
        if (a(pivot, k) == 0) {
            throw SingularMatrixError("matrix is singular");
        }
        for (std::size_t j = 0; j < n; ++j) {
            std::swap(a(k, j), a(pivot, j));
            std::swap(inv(k, j), inv(pivot, j));
        }
        const double p = a(k, k);
        for (std::size_t j = 0; j < n; ++j) {
            a(k, j) /= p;
            inv(k, j) /= p;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || a(i, k) == 0) {
                continue;
            }
            const double f = a(i, k);
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) -= f * a(k, j);
                inv(i, j) -= f * inv(k, j);
            }
        }
    }
    return inv;
}

} // namespace vcalc

#endif
