#ifndef VCALC_TAYLOR_MODEL_HPP
#define VCALC_TAYLOR_MODEL_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <utility>
#include <vector>

#include "vcalc/algebra.hpp"
#include "vcalc/bounds.hpp"
#include "vcalc/elementary.hpp"
#include "vcalc/errors.hpp"
#include "vcalc/format.hpp"
#include "vcalc/multi_index.hpp"
#include "vcalc/rounding.hpp"
#include "vcalc/series.hpp"

namespace vcalc {

// Policy for moving small terms into the uniform error.
class Sweeper {
  public:
    enum class Kind { threshold, graded, null };

    static constexpr double kDefaultThreshold = 0x1p-36;

    Sweeper() = default;
    static Sweeper threshold(double t = kDefaultThreshold) {
        if (!(t >= 0)) {
            throw UsageError("sweep threshold must be nonnegative");
        }
        return Sweeper(Kind::threshold, t, 0);
    }
    // Drops terms above max_degree, and also those below threshold if given.
    static Sweeper graded(int max_degree, double threshold = 0.0) {
        if (max_degree < 0) {
            throw UsageError("sweep degree must be nonnegative");
        }
        if (!(threshold >= 0)) {
            throw UsageError("sweep threshold must be nonnegative");
        }
        return Sweeper(Kind::graded, threshold, max_degree);
    }
    static Sweeper none() { return Sweeper(Kind::null, 0.0, 0); }

    Kind kind() const noexcept { return kind_; }
    double threshold_value() const noexcept { return threshold_; }
    int max_degree() const noexcept { return max_degree_; }

    bool discard(const MultiIndex& a, double c) const noexcept {
        switch (kind_) {
        case Kind::threshold:
            return std::fabs(c) < threshold_;
        case Kind::graded:
            return a.degree() > max_degree_ || std::fabs(c) < threshold_;
        case Kind::null:
            return false;
        }
        return false;
    }

    friend bool operator==(const Sweeper&, const Sweeper&) = default;

  private:
    Sweeper(Kind k, double t, int d) : kind_(k), threshold_(t), max_degree_(d) {}

    Kind kind_ = Kind::threshold;
    double threshold_ = kDefaultThreshold;
    int max_degree_ = 0;
};

// Running sum rounded upward; used for all error bookkeeping.
class ErrorSum {
  public:
    ErrorSum() = default;
    explicit ErrorSum(double e) : value_(e) {}
    ErrorSum& operator+=(double e) {
        value_ = rounding::add_up(value_, e);
        return *this;
    }
    double value() const noexcept { return value_; }

  private:
    double value_ = 0.0;
};

namespace detail {

// Bound on |x op y - fl(x op y)| for a nearest-rounded coefficient operation.
inline double coefficient_error(double x, ArithOp op, double y) {
#ifdef VCALC_TM_HALF_ULP_ERRORS
    return rounding::scale(rounding::ulp(rounding::apply(op, x, y, RoundingMode::nearest)), -1, RoundingMode::up);
#else
    return rounding::error_bound(x, op, y);
#endif
}

// Sum of |c| rounded upward.
template <class Terms>
double abs_sum_up(const Terms& terms, bool skip_constant) {
    ErrorSum s;
    for (const auto& [a, c] : terms) {
        if (skip_constant && a.degree() == 0) {
            continue;
        }
        s += std::fabs(c);
    }
    return s.value();
}

// Multivariate Horner scheme: the polynomial is written as a polynomial in
// the last variable whose coefficients are polynomials in the others.
template <class A, class Term, class ToA>
A horner(const std::vector<const Term*>& terms, int k, const std::vector<A>& args, const A& zero, const ToA& to_a) {
    if (terms.empty()) {
        return zero;
    }
    if (k < 0) {
        A r = to_a(terms.front()->second);
        for (std::size_t i = 1; i < terms.size(); ++i) {
            r = r + to_a(terms[i]->second);
        }
        return r;
    }
    const auto kk = static_cast<std::size_t>(k);
    std::map<int, std::vector<const Term*>> groups;
    for (const Term* t : terms) {
        groups[t->first[kk]].push_back(t);
    }
    if (groups.size() == 1 && groups.begin()->first == 0) {
        return horner(terms, k - 1, args, zero, to_a);
    }
    const int top = groups.rbegin()->first;
    A acc = horner(groups[top], k - 1, args, zero, to_a);
    for (int j = top - 1; j >= 0; --j) {
        acc = acc * args[kk];
        auto it = groups.find(j);
        if (it != groups.end()) {
            acc = acc + horner(it->second, k - 1, args, zero, to_a);
        }
    }
    return acc;
}

} // namespace detail

// Polynomial over the unit box [-1,+1]^n with a uniform error bound e:
// represents every f defined on the box with sup |f - p| <= e.
class UnitTaylorModel {
  public:
    using Term = std::pair<MultiIndex, double>;

    UnitTaylorModel() = default;
    explicit UnitTaylorModel(std::size_t n, Sweeper sweeper = Sweeper()) : n_(n), sweeper_(sweeper) {
        (void)MultiIndex(n);
    }

    // Builds a model from arbitrary terms: sorts, merges duplicates (with
    // rounding error), drops zeros and sweeps.
    static UnitTaylorModel from_terms(std::size_t n, std::vector<Term> terms, double error, Sweeper sweeper,
                                      bool apply_sweep = true) {
        UnitTaylorModel r(n, sweeper);
        r.error_ = check_error(error);
        r.assign_terms(std::move(terms), apply_sweep);
        return r;
    }

    static UnitTaylorModel constant(std::size_t n, double c, Sweeper sweeper = Sweeper()) {
        return from_terms(n, {Term(MultiIndex(n), c)}, 0.0, sweeper, false);
    }
    static UnitTaylorModel constant(std::size_t n, const ValidatedBounds& c, Sweeper sweeper = Sweeper()) {
        if (!std::isfinite(c.lower()) || !std::isfinite(c.upper())) {
            throw DomainError("Taylor model constant must be bounded");
        }
        return from_terms(n, {Term(MultiIndex(n), c.midpoint())}, c.radius(), sweeper, false);
    }
    static UnitTaylorModel coordinate(std::size_t n, std::size_t j, Sweeper sweeper = Sweeper()) {
        if (j >= n) {
            throw UsageError("coordinate index out of range");
        }
        return from_terms(n, {Term(MultiIndex::unit(n, j), 1.0)}, 0.0, sweeper, false);
    }

    std::size_t argument_size() const noexcept { return n_; }
    const std::vector<Term>& terms() const noexcept { return terms_; }
    double error() const noexcept { return error_; }
    const Sweeper& sweeper() const noexcept { return sweeper_; }
    void set_sweeper(Sweeper s) { sweeper_ = s; }

    double coefficient(const MultiIndex& a) const {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), a,
                                   [](const Term& t, const MultiIndex& k) { return t.first < k; });
        return it != terms_.end() && it->first == a ? it->second : 0.0;
    }
    double constant_term() const { return coefficient(MultiIndex(n_)); }
    int degree() const {
        int d = 0;
        for (const auto& t : terms_) {
            d = std::max(d, t.first.degree());
        }
        return d;
    }

    void add_error(double e) { error_ = rounding::add_up(error_, check_error(e)); }
    void set_error(double e) { error_ = check_error(e); }

    // Over-approximation c0 +/- (sum_{alpha != 0} |c_alpha| + e).
    ValidatedBounds range() const {
        const double c0 = constant_term();
        ErrorSum r(detail::abs_sum_up(terms_, true));
        r += error_;
        return ValidatedBounds::around(c0, r.value());
    }

    // Tighter enclosure: a monomial with only even exponents lies in [0,1].
    ValidatedBounds sharp_range() const {
        ErrorSum below(error_);
        ErrorSum above(error_);
        double c0 = 0.0;
        for (const auto& [a, c] : terms_) {
            if (a.degree() == 0) {
                c0 = c;
                continue;
            }
            bool even = true;
            for (std::size_t i = 0; i < a.size(); ++i) {
                even = even && a[i] % 2 == 0;
            }
            if (!even) {
                below += std::fabs(c);
                above += std::fabs(c);
            } else if (c < 0) {
                below += -c;
            } else {
                above += c;
            }
        }
        return {rounding::sub_down(c0, below.value()), rounding::add_up(c0, above.value())};
    }

    // Upper bound sum |c_alpha| + e for the uniform norm.
    double norm() const {
        ErrorSum r(detail::abs_sum_up(terms_, false));
        r += error_;
        return r.value();
    }

    UnitTaylorModel swept() const { return swept(sweeper_); }
    UnitTaylorModel swept(const Sweeper& s) const {
        UnitTaylorModel r(*this);
        r.sweep_in_place(s);
        return r;
    }

    friend UnitTaylorModel operator+(const UnitTaylorModel& a, const UnitTaylorModel& b) { return add(a, b, false); }
    friend UnitTaylorModel operator-(const UnitTaylorModel& a, const UnitTaylorModel& b) { return add(a, b, true); }
    friend UnitTaylorModel operator-(const UnitTaylorModel& a) {
        UnitTaylorModel r(a);
        for (auto& t : r.terms_) {
            t.second = -t.second;
        }
        return r;
    }

    // Term-by-term product; analytic error |p1| e2 + |p2| e1 + e1 e2 plus all
    // rounding errors, then the first operand's sweeper is applied.
    friend UnitTaylorModel operator*(const UnitTaylorModel& a, const UnitTaylorModel& b) {
        check_shape(a, b);
        std::vector<Term> products;
        products.reserve(a.terms_.size() * b.terms_.size());
        ErrorSum err;
        for (const auto& [ia, ca] : a.terms_) {
            for (const auto& [ib, cb] : b.terms_) {
                products.emplace_back(ia + ib, ca * cb);
                err += detail::coefficient_error(ca, ArithOp::mul, cb);
            }
        }
        const double na = detail::abs_sum_up(a.terms_, false);
        const double nb = detail::abs_sum_up(b.terms_, false);
        err += rounding::mul_up(na, b.error_);
        err += rounding::mul_up(nb, a.error_);
        err += rounding::mul_up(a.error_, b.error_);
        return from_terms(a.n_, std::move(products), err.value(), a.sweeper_);
    }

    friend UnitTaylorModel operator+(const UnitTaylorModel& a, const ValidatedBounds& c) {
        return a + constant(a.n_, c, a.sweeper_);
    }
    friend UnitTaylorModel operator+(const ValidatedBounds& c, const UnitTaylorModel& a) { return a + c; }
    friend UnitTaylorModel operator-(const UnitTaylorModel& a, const ValidatedBounds& c) {
        return a - constant(a.n_, c, a.sweeper_);
    }
    friend UnitTaylorModel operator-(const ValidatedBounds& c, const UnitTaylorModel& a) {
        return constant(a.n_, c, a.sweeper_) - a;
    }

    // f*y for f in p +/- e and y in [m -/+ r]: p*m +/- (e*mag(y) + |p| r).
    friend UnitTaylorModel operator*(const UnitTaylorModel& a, const ValidatedBounds& y) {
        if (!std::isfinite(y.lower()) || !std::isfinite(y.upper())) {
            throw DomainError("Taylor model scaled by unbounded interval");
        }
        const double m = y.midpoint();
        const double r = y.radius();
        std::vector<Term> terms;
        terms.reserve(a.terms_.size());
        ErrorSum err;
        for (const auto& [i, c] : a.terms_) {
            terms.emplace_back(i, c * m);
            err += detail::coefficient_error(c, ArithOp::mul, m);
        }
        err += rounding::mul_up(a.error_, y.mag());
        err += rounding::mul_up(detail::abs_sum_up(a.terms_, false), r);
        return from_terms(a.n_, std::move(terms), err.value(), a.sweeper_, r != 0);
    }
    friend UnitTaylorModel operator*(const ValidatedBounds& y, const UnitTaylorModel& a) { return a * y; }
    friend UnitTaylorModel operator*(const UnitTaylorModel& a, double s) { return a * ValidatedBounds(s); }
    friend UnitTaylorModel operator*(double s, const UnitTaylorModel& a) { return a * ValidatedBounds(s); }

    friend UnitTaylorModel operator/(const UnitTaylorModel& a, const UnitTaylorModel& b) { return a * rec(b); }
    friend UnitTaylorModel operator/(const UnitTaylorModel& a, const ValidatedBounds& y) { return a * rec(y); }

    friend UnitTaylorModel sqr(const UnitTaylorModel& a) { return a * a; }
    friend UnitTaylorModel neg(const UnitTaylorModel& a) { return -a; }
    friend UnitTaylorModel pow(const UnitTaylorModel& a, int k) {
        if (k < 0) {
            return rec(pow(a, -k));
        }
        UnitTaylorModel r = constant(a.n_, 1.0, a.sweeper_);
        UnitTaylorModel base = a;
        bool first = true;
        while (k > 0) {
            if (k & 1) {
                r = first ? base : r * base;
                first = false;
            }
            k >>= 1;
            if (k > 0) {
                base = base * base;
            }
        }
        return r;
    }

    friend UnitTaylorModel exp(const UnitTaylorModel& a) { return a.apply(AnalyticOp::exp); }
    friend UnitTaylorModel log(const UnitTaylorModel& a) { return a.apply(AnalyticOp::log); }
    friend UnitTaylorModel sin(const UnitTaylorModel& a) { return a.apply(AnalyticOp::sin); }
    friend UnitTaylorModel cos(const UnitTaylorModel& a) { return a.apply(AnalyticOp::cos); }
    friend UnitTaylorModel tan(const UnitTaylorModel& a) { return a.apply(AnalyticOp::tan); }
    friend UnitTaylorModel atan(const UnitTaylorModel& a) { return a.apply(AnalyticOp::atan); }
    friend UnitTaylorModel sqrt(const UnitTaylorModel& a) { return a.apply(AnalyticOp::sqrt); }
    friend UnitTaylorModel rec(const UnitTaylorModel& a) { return a.apply(AnalyticOp::rec); }

    // f(a) for an analytic f; order_cap limits the number of series terms.
    UnitTaylorModel apply(AnalyticOp op, int order_cap = 20) const {
        if (op == AnalyticOp::exp) {
            return exp_by_squaring(order_cap);
        }
        return lagrange_series(op, order_cap);
    }

    // True only if every function represented by a is represented by b:
    // sum |c_a - c_b| + e_a <= e_b.
    friend bool refines(const UnitTaylorModel& a, const UnitTaylorModel& b) {
        check_shape(a, b);
        ErrorSum s;
        auto i = a.terms_.begin();
        auto j = b.terms_.begin();
        while (i != a.terms_.end() || j != b.terms_.end()) {
            if (j == b.terms_.end() || (i != a.terms_.end() && i->first < j->first)) {
                s += std::fabs(i->second);
                ++i;
            } else if (i == a.terms_.end() || j->first < i->first) {
                s += std::fabs(j->second);
                ++j;
            } else {
                s += std::max(std::fabs(rounding::sub_up(i->second, j->second)),
                              std::fabs(rounding::sub_down(i->second, j->second)));
                ++i;
                ++j;
            }
        }
        s += a.error_;
        return s.value() <= b.error_;
    }

    // Horner evaluation over intervals; each argument must lie in [-1:+1].
    ValidatedBounds evaluate(const std::vector<ValidatedBounds>& z) const {
        if (z.size() != n_) {
            throw UsageError("wrong number of arguments for Taylor model evaluation");
        }
        for (const auto& zi : z) {
            if (!zi.subset_of(ValidatedBounds(-1.0, 1.0))) {
                throw DomainError("Taylor model evaluated outside the unit box");
            }
        }
        const ValidatedBounds v = horner_over(z, ValidatedBounds(0.0), [](double c) { return ValidatedBounds(c); });
        return v + ValidatedBounds(-error_, error_);
    }

    // Exact polynomial value at rational arguments (error not included).
    template <class A, class ToA>
    A horner_over(const std::vector<A>& args, const A& zero, const ToA& to_a) const {
        std::vector<const Term*> ptrs;
        ptrs.reserve(terms_.size());
        for (const auto& t : terms_) {
            ptrs.push_back(&t);
        }
        return detail::horner(ptrs, static_cast<int>(n_) - 1, args, zero, to_a);
    }

    // outer(inner_1, ..., inner_m); every inner range must lie in [-1:+1].
    static UnitTaylorModel compose(const UnitTaylorModel& outer, const std::vector<UnitTaylorModel>& inner) {
        if (inner.size() != outer.n_) {
            throw UsageError("composition needs one inner model per outer argument");
        }
        if (inner.empty()) {
            throw UsageError("composition with no inner models");
        }
        for (const auto& g : inner) {
            if (!g.range().subset_of(ValidatedBounds(-1.0, 1.0))) {
                throw DomainError("inner model range escapes the unit box");
            }
        }
        return compose_within_unit_box(outer, inner);
    }

    // As compose, for inner models whose represented functions are known to
    // take values in [-1, +1] even if their computed range overshoots it by
    // rounding.
    static UnitTaylorModel compose_within_unit_box(const UnitTaylorModel& outer,
                                                   const std::vector<UnitTaylorModel>& inner) {
        if (inner.size() != outer.n_ || inner.empty()) {
            throw UsageError("composition needs one inner model per outer argument");
        }
        for (const auto& g : inner) {
            check_shape(g, inner.front());
        }
        const std::size_t m = inner.front().n_;
        const Sweeper s = outer.sweeper_;
        UnitTaylorModel r = outer.horner_over(inner, constant(m, 0.0, s), [m, s](double c) { return constant(m, c, s); });
        r.add_error(outer.error_);
        r.sweep_in_place(s);
        return r;
    }

    // Indefinite integral in z_j, zero at z_j = 0, for a coordinate of radius
    // r: coefficients r c_alpha / (alpha_j + 1), error e r.
    UnitTaylorModel antiderivative(std::size_t j, double radius) const {
        check_index(j);
        if (!(radius >= 0)) {
            throw UsageError("antiderivative radius must be nonnegative");
        }
        std::vector<Term> terms;
        ErrorSum err;
        for (const auto& [a, c] : terms_) {
            MultiIndex b = a;
            b.increment(j);
            const ValidatedBounds v =
                ValidatedBounds(c) * ValidatedBounds(radius) / ValidatedBounds(static_cast<double>(b[j]));
            const double mid = v.midpoint();
            terms.emplace_back(b, mid);
            err += v.radius();
        }
        err += rounding::mul_up(error_, radius);
        return from_terms(n_, std::move(terms), err.value(), sweeper_, false);
    }

    // Term-by-term derivative of the polynomial part in z_j divided by the
    // radius; the input error is discarded.
    UnitTaylorModel derivative_of_midpoint(std::size_t j, double radius) const {
        check_index(j);
        if (!(radius > 0)) {
            throw UsageError("derivative radius must be positive");
        }
        std::vector<Term> terms;
        ErrorSum err;
        for (const auto& [a, c] : terms_) {
            if (a[j] == 0) {
                continue;
            }
            MultiIndex b = a;
            b.decrement(j);
            const ValidatedBounds v =
                ValidatedBounds(c) * ValidatedBounds(static_cast<double>(a[j])) / ValidatedBounds(radius);
            terms.emplace_back(b, v.midpoint());
            err += v.radius();
        }
        return from_terms(n_, std::move(terms), err.value(), sweeper_, false);
    }

    // Precomposition with z_j -> a z_j + b where [b-|a|, b+|a|] lies in [-1:+1].
    UnitTaylorModel affine_precompose(std::size_t j, const ValidatedBounds& a, const ValidatedBounds& b) const {
        check_index(j);
        std::vector<UnitTaylorModel> inner;
        for (std::size_t i = 0; i < n_; ++i) {
            inner.push_back(coordinate(n_, i, sweeper_));
        }
        inner[j] = coordinate(n_, j, sweeper_) * a + b;
        return compose(*this, inner);
    }

    enum class Half { lower, upper };

    UnitTaylorModel split(std::size_t j, Half half) const {
        return affine_precompose(j, ValidatedBounds(0.5), ValidatedBounds(half == Half::lower ? -0.5 : 0.5));
    }

    // Restriction to the subinterval [lo:hi] of [-1:+1] in coordinate j.
    UnitTaylorModel restrict(std::size_t j, double lo, double hi) const {
        if (!(-1 <= lo && lo <= hi && hi <= 1)) {
            throw DomainError("restriction interval must lie in [-1:+1]");
        }
        const ValidatedBounds L(lo);
        const ValidatedBounds H(hi);
        return affine_precompose(j, hlf(H - L), hlf(H + L));
    }

    // z_j replaced by a value (or interval) in [-1:+1]; argument count kept.
    UnitTaylorModel substitute(std::size_t j, const ValidatedBounds& v) const {
        check_index(j);
        if (!v.subset_of(ValidatedBounds(-1.0, 1.0))) {
            throw DomainError("substituted value outside [-1:+1]");
        }
        std::vector<UnitTaylorModel> inner;
        for (std::size_t i = 0; i < n_; ++i) {
            inner.push_back(i == j ? constant(n_, v, sweeper_) : coordinate(n_, i, sweeper_));
        }
        // the constant's midpoint-radius range can round past the checked value
        return compose_within_unit_box(*this, inner);
    }

    // Same model viewed as a function of n + extra arguments (new ones last).
    UnitTaylorModel extend(std::size_t extra) const {
        std::vector<Term> terms;
        terms.reserve(terms_.size());
        for (const auto& [a, c] : terms_) {
            MultiIndex b(n_ + extra);
            for (std::size_t i = 0; i < n_; ++i) {
                b.set(i, a[i]);
            }
            terms.emplace_back(b, c);
        }
        return from_terms(n_ + extra, std::move(terms), error_, sweeper_, false);
    }

    // Text form "{ c*x0^2*x1 +c*x0 +c +/-e }" with highest terms first.
    std::string str(int digits = 4) const {
        std::ostringstream os;
        os.precision(digits);
        os << "{";
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const auto& [a, c] = *it;
            os << (first ? " " : " ") << (c < 0 || first ? "" : "+") << c;
            for (std::size_t i = 0; i < n_; ++i) {
                if (a[i] > 0) {
                    os << "*x" << i;
                    if (a[i] > 1) {
                        os << "^" << a[i];
                    }
                }
            }
            first = false;
        }
        if (first) {
            os << " 0";
        }
        os << " +/-" << error_ << " }";
        return os.str();
    }

    friend std::ostream& operator<<(std::ostream& os, const UnitTaylorModel& a) { return os << a.str(); }

  private:
    static double check_error(double e) {
        if (!(e >= 0)) {
            throw InternalError("Taylor model error must be nonnegative");
        }
        return e;
    }
    static void check_shape(const UnitTaylorModel& a, const UnitTaylorModel& b) {
        if (a.n_ != b.n_) {
            throw UsageError("Taylor models have different argument counts");
        }
    }
    void check_index(std::size_t j) const {
        if (j >= n_) {
            throw UsageError("variable index out of range");
        }
    }

    void assign_terms(std::vector<Term> raw, bool apply_sweep) {
        std::stable_sort(raw.begin(), raw.end(), [](const Term& x, const Term& y) { return x.first < y.first; });
        ErrorSum err(error_);
        terms_.clear();
        terms_.reserve(raw.size());
        for (auto& t : raw) {
            if (!std::isfinite(t.second)) {
                throw DomainError("non-finite Taylor model coefficient");
            }
            if (!terms_.empty() && terms_.back().first == t.first) {
                const double s = terms_.back().second;
                err += detail::coefficient_error(s, ArithOp::add, t.second);
                terms_.back().second = s + t.second;
            } else {
                terms_.push_back(std::move(t));
            }
        }
        std::erase_if(terms_, [](const Term& t) { return t.second == 0.0; });
        error_ = err.value();
        if (!std::isfinite(error_)) {
            throw DomainError("Taylor model error overflowed");
        }
        if (apply_sweep) {
            sweep_in_place(sweeper_);
        }
    }

    void sweep_in_place(const Sweeper& s) {
        ErrorSum err(error_);
        std::erase_if(terms_, [&](const Term& t) {
            if (s.discard(t.first, t.second)) {
                err += std::fabs(t.second);
                return true;
            }
            return false;
        });
        error_ = err.value();
    }

    // Coefficientwise nearest sums; never swept.
    static UnitTaylorModel add(const UnitTaylorModel& a, const UnitTaylorModel& b, bool subtract) {
        check_shape(a, b);
        UnitTaylorModel r(a.n_, a.sweeper_);
        ErrorSum err(a.error_);
        err += b.error_;
        auto i = a.terms_.begin();
        auto j = b.terms_.begin();
        while (i != a.terms_.end() || j != b.terms_.end()) {
            if (j == b.terms_.end() || (i != a.terms_.end() && i->first < j->first)) {
                r.terms_.push_back(*i++);
            } else if (i == a.terms_.end() || j->first < i->first) {
                r.terms_.emplace_back(j->first, subtract ? -j->second : j->second);
                ++j;
            } else {
                const double y = subtract ? -j->second : j->second;
                const double s = i->second + y;
                err += detail::coefficient_error(i->second, ArithOp::add, y);
                if (s != 0.0) {
                    r.terms_.emplace_back(i->first, s);
                }
                ++i;
                ++j;
            }
        }
        r.error_ = err.value();
        if (!std::isfinite(r.error_)) {
            throw DomainError("Taylor model error overflowed");
        }
        return r;
    }

    // exp(c + y) = exp(c) * (exp(y / 2^k))^(2^k) with |y| / 2^k <= 1/2; the
    // series for exp(z), |z| <= 1/2, is truncated after N terms with tail
    // bound 2 |z|^N / N!.
    UnitTaylorModel exp_by_squaring(int order_cap) const {
        const double c = constant_term();
        UnitTaylorModel y = *this - constant(n_, c, sweeper_);
        const double ny = y.norm();
        int k = 0;
        while (rounding::scale(ny, -k, RoundingMode::up) > 0.5) {
            ++k;
        }
        const UnitTaylorModel z = k == 0 ? y : y * std::ldexp(1.0, -k);
        const double nz = z.norm();
        int terms = 1;
        double tail = 1.0; // |z|^N / N! rounded up
        while (terms < order_cap) {
            tail = rounding::div_up(rounding::mul_up(tail, nz), static_cast<double>(terms));
            if (tail <= 0x1p-60) {
                break;
            }
            ++terms;
        }
        // tail now bounds |z|^terms / terms! (or the last computed power)
        if (terms == order_cap) {
            tail = 1.0;
            for (int i = 1; i <= terms; ++i) {
                tail = rounding::div_up(rounding::mul_up(tail, nz), static_cast<double>(i));
            }
        }
        const UnitTaylorModel one = constant(n_, 1.0, sweeper_);
        UnitTaylorModel s = one;
        for (int i = terms - 1; i >= 1; --i) {
            s = one + (z * s) * rec(ValidatedBounds(static_cast<double>(i)));
        }
        if (terms == 1) {
            s = one;
        }
        s.add_error(rounding::mul_up(2.0, tail));
        for (int i = 0; i < k; ++i) {
            s = s * s;
        }
        return s * vcalc::exp(ValidatedBounds(c));
    }

    // f(c + y) = sum_{k<=N} f^(k)(c)/k! y^k + (f^(N)(xi) - f^(N)(c))/N! y^N with
    // xi in [c - r, c + r], r = |y|. Falls back to the constant range
    // enclosure f([c - r, c + r]) when that is tighter.
    UnitTaylorModel lagrange_series(AnalyticOp op, int order_cap) const {
        const double c = constant_term();
        UnitTaylorModel y = *this - constant(n_, c, sweeper_);
        const double r = y.norm();
        const ValidatedBounds big = ValidatedBounds::around(c, r);
        const auto point = series_coefficients(op, ValidatedBounds(c), order_cap);
        if (r == 0) {
            return constant(n_, point[0], sweeper_);
        }
        const auto range = series_coefficients(op, big, order_cap);
        // smallest N whose remainder is negligible, else the best one seen
        int best_n = 0;
        double best_rem = range[0].radius();
        double rpow = 1.0;
        for (int n = 1; n <= order_cap; ++n) {
            rpow = rounding::mul_up(rpow, r);
            const auto& a = range[static_cast<std::size_t>(n)];
            const auto& p = point[static_cast<std::size_t>(n)];
            const double rem = rounding::mul_up(
                std::max(rounding::sub_up(a.upper(), p.lower()), rounding::sub_up(p.upper(), a.lower())), rpow);
            if (rem < best_rem) {
                best_rem = rem;
                best_n = n;
            }
            if (rem <= 0x1p-60) {
                break;
            }
        }
        if (best_n == 0) {
            return constant(n_, range[0], sweeper_);
        }
        UnitTaylorModel s = constant(n_, point[static_cast<std::size_t>(best_n)], sweeper_);
        for (int i = best_n - 1; i >= 0; --i) {
            s = s * y + point[static_cast<std::size_t>(i)];
        }
        s.add_error(best_rem);
        s.sweep_in_place(sweeper_);
        return s;
    }

    std::size_t n_ = 0;
    std::vector<Term> terms_;
    double error_ = 0.0;
    Sweeper sweeper_;
};

using Half = UnitTaylorModel::Half;

template <>
struct AlgebraTraits<UnitTaylorModel> {
    static UnitTaylorModel constant(const UnitTaylorModel& proto, const ExactRational& q) {
        return UnitTaylorModel::constant(proto.argument_size(), ValidatedBounds::from_rational(q), proto.sweeper());
    }
    static bool is_exact_zero(const UnitTaylorModel& a) { return a.terms().empty() && a.error() == 0; }
    static bool contains_zero(const UnitTaylorModel& a) { return a.range().contains_zero(); }
    static double pivot_score(const UnitTaylorModel& a) { return a.range().mig(); }
};

// b + sum a_i x_i +/- e over [-1,+1]^n.
class AffineModel {
  public:
    AffineModel() = default;
    AffineModel(double b, std::vector<double> a, double e) : b_(b), a_(std::move(a)), e_(e) {
        if (!(e >= 0)) {
            throw UsageError("affine model error must be nonnegative");
        }
    }
    static AffineModel constant(std::size_t n, double b) { return {b, std::vector<double>(n, 0.0), 0.0}; }
    static AffineModel coordinate(std::size_t n, std::size_t j) {
        std::vector<double> a(n, 0.0);
        a.at(j) = 1.0;
        return {0.0, std::move(a), 0.0};
    }

    double constant_term() const noexcept { return b_; }
    const std::vector<double>& gradient() const noexcept { return a_; }
    double error() const noexcept { return e_; }

    ValidatedBounds range() const {
        ErrorSum s;
        for (double ai : a_) {
            s += std::fabs(ai);
        }
        s += e_;
        return ValidatedBounds::around(b_, s.value());
    }

    friend AffineModel operator+(const AffineModel& x, const AffineModel& y) {
        check(x, y);
        ErrorSum e(x.e_);
        e += y.e_;
        std::vector<double> a(x.a_.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            a[i] = x.a_[i] + y.a_[i];
            e += detail::coefficient_error(x.a_[i], ArithOp::add, y.a_[i]);
        }
        e += detail::coefficient_error(x.b_, ArithOp::add, y.b_);
        return {x.b_ + y.b_, std::move(a), e.value()};
    }

    // constant b1 b2, gradient b1 a2 + b2 a1, error
    // sum|a1| sum|a2| + (|b1| + sum|a1|) e2 + (|b2| + sum|a2|) e1 + e1 e2.
    friend AffineModel operator*(const AffineModel& x, const AffineModel& y) {
        check(x, y);
        using rounding::add_up;
        using rounding::mul_up;
        ErrorSum e;
        ErrorSum s1;
        ErrorSum s2;
        std::vector<double> a(x.a_.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double p = x.b_ * y.a_[i];
            const double q = y.b_ * x.a_[i];
            a[i] = p + q;
            e += detail::coefficient_error(x.b_, ArithOp::mul, y.a_[i]);
            e += detail::coefficient_error(y.b_, ArithOp::mul, x.a_[i]);
            e += detail::coefficient_error(p, ArithOp::add, q);
            s1 += std::fabs(x.a_[i]);
            s2 += std::fabs(y.a_[i]);
        }
        e += detail::coefficient_error(x.b_, ArithOp::mul, y.b_);
        e += mul_up(s1.value(), s2.value());
        e += mul_up(add_up(std::fabs(x.b_), s1.value()), y.e_);
        e += mul_up(add_up(std::fabs(y.b_), s2.value()), x.e_);
        e += mul_up(x.e_, y.e_);
        return {x.b_ * y.b_, std::move(a), e.value()};
    }

  private:
    static void check(const AffineModel& x, const AffineModel& y) {
        if (x.a_.size() != y.a_.size()) {
            throw UsageError("affine models have different argument counts");
        }
    }

    double b_ = 0.0;
    std::vector<double> a_;
    double e_ = 0.0;
};

} // namespace vcalc

#endif
