#ifndef VCALC_DIFFERENTIAL_HPP
#define VCALC_DIFFERENTIAL_HPP

#include <algorithm>
#include <cstddef>
#include <ostream>
#include <utility>
#include <vector>

#include "vcalc/algebra.hpp"
#include "vcalc/errors.hpp"
#include "vcalc/multi_index.hpp"
#include "vcalc/series.hpp"

namespace vcalc {

// Truncated multivariate power series sum_{|alpha|<=d} c_alpha x^alpha about
// a point. c_alpha is the Taylor coefficient, so the partial derivative
// d^alpha f equals c_alpha * prod_i alpha_i!.
template <class X>
class Differential {
  public:
    using Term = std::pair<MultiIndex, X>;

    Differential() = default;
    Differential(std::size_t n, int degree, const X& zero) : n_(n), degree_(degree), zero_(zero) {
        if (degree < 0) {
            throw UsageError("differential degree must be nonnegative");
        }
        (void)MultiIndex(n);
    }

    static Differential constant(std::size_t n, int degree, const X& value) {
        Differential r(n, degree, make_constant(value, 0));
        r.set(MultiIndex(n), value);
        return r;
    }

    static Differential variable(std::size_t n, int degree, const X& value, std::size_t i) {
        if (i >= n) {
            throw UsageError("variable index out of range");
        }
        if (degree < 1) {
            throw UsageError("a variable needs degree at least 1");
        }
        Differential r = constant(n, degree, value);
        r.set(MultiIndex::unit(n, i), make_constant(value, 1));
        return r;
    }

    // Variables x_i = point_i + dx_i for all i.
    static std::vector<Differential> variables(int degree, const std::vector<X>& point) {
        std::vector<Differential> r;
        for (std::size_t i = 0; i < point.size(); ++i) {
            r.push_back(variable(point.size(), degree, point[i], i));
        }
        return r;
    }

    std::size_t argument_size() const noexcept { return n_; }
    int degree() const noexcept { return degree_; }
    const X& zero_element() const noexcept { return zero_; }
    const std::vector<Term>& terms() const noexcept { return terms_; }

    // Coefficient c_alpha (zero if not stored).
    X operator[](const MultiIndex& a) const {
        auto it = find(a);
        return it != terms_.end() && it->first == a ? it->second : zero_;
    }

    X value() const { return (*this)[MultiIndex(n_)]; }

    X gradient(std::size_t j) const { return (*this)[MultiIndex::unit(n_, j)]; }

    void set(const MultiIndex& a, const X& c) {
        if (a.size() != n_) {
            throw UsageError("multi-index size does not match differential");
        }
        if (a.degree() > degree_) {
            throw UsageError("multi-index degree exceeds the differential degree");
        }
        auto it = find(a);
        if (it != terms_.end() && it->first == a) {
            it->second = c;
        } else {
            terms_.insert(it, Term(a, c));
        }
    }

    friend Differential operator+(const Differential& a, const Differential& b) { return combine(a, b, false); }
    friend Differential operator-(const Differential& a, const Differential& b) { return combine(a, b, true); }
    friend Differential operator-(const Differential& a) {
        Differential r(a);
        for (auto& t : r.terms_) {
            t.second = -t.second;
        }
        return r;
    }

    // Truncated Cauchy product.
    friend Differential operator*(const Differential& a, const Differential& b) {
        check_shape(a, b);
        std::vector<Term> products;
        for (const auto& [ia, ca] : a.terms_) {
            for (const auto& [ib, cb] : b.terms_) {
                if (ia.degree() + ib.degree() <= a.degree_) {
                    products.emplace_back(ia + ib, ca * cb);
                }
            }
        }
        std::stable_sort(products.begin(), products.end(),
                         [](const Term& x, const Term& y) { return x.first < y.first; });
        Differential r(a.n_, a.degree_, a.zero_);
        for (auto& t : products) {
            if (!r.terms_.empty() && r.terms_.back().first == t.first) {
                r.terms_.back().second = r.terms_.back().second + t.second;
            } else {
                r.terms_.push_back(std::move(t));
            }
        }
        return r;
    }

    friend Differential operator/(const Differential& a, const Differential& b) { return a * rec(b); }

    friend Differential operator+(const Differential& a, const X& c) { return a + constant(a.n_, a.degree_, c); }
    friend Differential operator-(const Differential& a, const X& c) { return a - constant(a.n_, a.degree_, c); }
    friend Differential operator*(const X& c, const Differential& a) {
        Differential r(a);
        for (auto& t : r.terms_) {
            t.second = c * t.second;
        }
        return r;
    }

    friend Differential rec(const Differential& a) { return a.compose(AnalyticOp::rec); }
    friend Differential exp(const Differential& a) { return a.compose(AnalyticOp::exp); }
    friend Differential log(const Differential& a) { return a.compose(AnalyticOp::log); }
    friend Differential sin(const Differential& a) { return a.compose(AnalyticOp::sin); }
    friend Differential cos(const Differential& a) { return a.compose(AnalyticOp::cos); }
    friend Differential tan(const Differential& a) { return a.compose(AnalyticOp::tan); }
    friend Differential atan(const Differential& a) { return a.compose(AnalyticOp::atan); }
    friend Differential sqrt(const Differential& a) { return a.compose(AnalyticOp::sqrt); }
    friend Differential sqr(const Differential& a) { return a * a; }
    friend Differential neg(const Differential& a) { return -a; }

    friend Differential pow(const Differential& a, int k) {
        if (k < 0) {
            return rec(pow(a, -k));
        }
        Differential r = constant(a.n_, a.degree_, make_constant(a.zero_, 1));
        Differential base = a;
        while (k > 0) {
            if (k & 1) {
                r = r * base;
            }
            k >>= 1;
            if (k > 0) {
                base = base * base;
            }
        }
        return r;
    }

    // f(c + y) = sum_k a_k y^k where c is the value and y has no constant term;
    // y^k vanishes above the degree cap so the sum is finite.
    Differential compose(AnalyticOp op) const {
        const X c = value();
        const std::vector<X> coeffs = series_coefficients(op, c, degree_);
        Differential y(*this);
        y.erase_constant();
        Differential r = constant(n_, degree_, coeffs[static_cast<std::size_t>(degree_)]);
        for (int k = degree_ - 1; k >= 0; --k) {
            r = r * y + constant(n_, degree_, coeffs[static_cast<std::size_t>(k)]);
        }
        return r;
    }

    // d^alpha f = c_alpha * prod alpha_i!
    X extract_derivative(const MultiIndex& a) const {
        if (a.degree() > degree_) {
            throw UsageError("derivative order exceeds the differential degree");
        }
        ExactRational f(1);
        for (std::size_t i = 0; i < a.size(); ++i) {
            for (int k = 2; k <= a[i]; ++k) {
                f = f * ExactRational(k);
            }
        }
        return (*this)[a] * make_constant(zero_, f);
    }

    // Partial derivative in x_j of the truncated series; the top grade of the
    // result is incomplete, so the result keeps the same cap but is exact only
    // up to degree d-1.
    Differential derivative(std::size_t j) const {
        Differential r(n_, degree_, zero_);
        for (const auto& [a, c] : terms_) {
            if (a[j] == 0) {
                continue;
            }
            MultiIndex b = a;
            b.decrement(j);
            r.terms_.emplace_back(b, make_constant(zero_, a[j]) * c);
        }
        r.sort_terms();
        return r;
    }

    // Antiderivative in x_j with zero constant of integration, truncated at
    // the degree cap.
    Differential antiderivative(std::size_t j) const {
        Differential r(n_, degree_, zero_);
        for (const auto& [a, c] : terms_) {
            if (a.degree() + 1 > degree_) {
                continue;
            }
            MultiIndex b = a;
            b.increment(j);
            r.terms_.emplace_back(b, c * make_constant(zero_, ExactRational(1, b[j])));
        }
        r.sort_terms();
        return r;
    }

    // Terms with |alpha| <= k only.
    Differential truncate(int k) const {
        Differential r(n_, degree_, zero_);
        for (const auto& t : terms_) {
            if (t.first.degree() <= k) {
                r.terms_.push_back(t);
            }
        }
        return r;
    }

    friend std::ostream& operator<<(std::ostream& os, const Differential& a) {
        os << '{';
        bool first = true;
        for (const auto& [i, c] : a.terms_) {
            os << (first ? "" : ", ") << i << ':' << c;
            first = false;
        }
        return os << '}';
    }

  private:
    typename std::vector<Term>::iterator find(const MultiIndex& a) {
        return std::lower_bound(terms_.begin(), terms_.end(), a,
                                [](const Term& t, const MultiIndex& k) { return t.first < k; });
    }
    typename std::vector<Term>::const_iterator find(const MultiIndex& a) const {
        return std::lower_bound(terms_.begin(), terms_.end(), a,
                                [](const Term& t, const MultiIndex& k) { return t.first < k; });
    }

    void erase_constant() {
        if (!terms_.empty() && terms_.front().first.degree() == 0) {
            terms_.erase(terms_.begin());
        }
    }

    void sort_terms() {
        std::sort(terms_.begin(), terms_.end(), [](const Term& x, const Term& y) { return x.first < y.first; });
    }

    static void check_shape(const Differential& a, const Differential& b) {
        if (a.n_ != b.n_ || a.degree_ != b.degree_) {
            throw UsageError("differentials have different argument counts or degrees");
        }
    }

    static Differential combine(const Differential& a, const Differential& b, bool subtract) {
        check_shape(a, b);
        Differential r(a.n_, a.degree_, a.zero_);
        auto i = a.terms_.begin();
        auto j = b.terms_.begin();
        while (i != a.terms_.end() || j != b.terms_.end()) {
            if (j == b.terms_.end() || (i != a.terms_.end() && i->first < j->first)) {
                r.terms_.push_back(*i++);
            } else if (i == a.terms_.end() || j->first < i->first) {
                r.terms_.emplace_back(j->first, subtract ? -j->second : j->second);
                ++j;
            } else {
                r.terms_.emplace_back(i->first, subtract ? i->second - j->second : i->second + j->second);
                ++i;
                ++j;
            }
        }
        return r;
    }

    std::size_t n_ = 0;
    int degree_ = 0;
    X zero_{};
    std::vector<Term> terms_;
};

template <class X>
struct AlgebraTraits<Differential<X>> {
    static Differential<X> constant(const Differential<X>& proto, const ExactRational& q) {
        return Differential<X>::constant(proto.argument_size(), proto.degree(),
                                         AlgebraTraits<X>::constant(proto.zero_element(), q));
    }
    static bool is_exact_zero(const Differential<X>& a) {
        return std::all_of(a.terms().begin(), a.terms().end(),
                           [](const auto& t) { return AlgebraTraits<X>::is_exact_zero(t.second); });
    }
    static bool contains_zero(const Differential<X>& a) { return AlgebraTraits<X>::contains_zero(a.value()); }
    static double pivot_score(const Differential<X>& a) { return AlgebraTraits<X>::pivot_score(a.value()); }
};

} // namespace vcalc

#endif
