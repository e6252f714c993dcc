#ifndef VCALC_BOUNDS_HPP
#define VCALC_BOUNDS_HPP

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <optional>

#include "vcalc/errors.hpp"
#include "vcalc/rational.hpp"
#include "vcalc/rounding.hpp"

namespace vcalc {

// The closed interval [lower:upper] of reals, used as a validated scalar.
class ValidatedBounds {
  public:
    ValidatedBounds() = default;
    explicit ValidatedBounds(double x) : ValidatedBounds(x, x) {}
    ValidatedBounds(double lower, double upper) : lo_(lower), hi_(upper) {
        if (std::isnan(lower) || std::isnan(upper)) {
            throw DomainError("bounds cannot hold NaN");
        }
        if (lower > upper) {
            throw DomainError("bounds require lower <= upper");
        }
    }
    ValidatedBounds(RoundedFloat lower, RoundedFloat upper) : ValidatedBounds(lower.value(), upper.value()) {}

    static ValidatedBounds from_rational(const ExactRational& q) {
        return {q.to_double(RoundingMode::down), q.to_double(RoundingMode::up)};
    }
    static ValidatedBounds from_rationals(const ExactRational& lo, const ExactRational& hi) {
        return {lo.to_double(RoundingMode::down), hi.to_double(RoundingMode::up)};
    }
    // Interval with given centre and radius, rounded outward.
    static ValidatedBounds around(double centre, double radius) {
        return {rounding::sub_down(centre, radius), rounding::add_up(centre, radius)};
    }

    double lower() const noexcept { return lo_; }
    double upper() const noexcept { return hi_; }
    double midpoint() const {
        if (lo_ == hi_) {
            return lo_;
        }
        if (std::isinf(lo_) || std::isinf(hi_)) {
            if (std::isinf(lo_) && std::isinf(hi_)) {
                return 0.0;
            }
            return std::isinf(lo_) ? hi_ : lo_;
        }
        const double m = lo_ / 2 + hi_ / 2;
        return std::clamp(m, lo_, hi_);
    }
    // Upper bound on the distance from midpoint() to either endpoint.
    double radius() const {
        const double m = midpoint();
        return std::max(rounding::sub_up(hi_, m), rounding::sub_up(m, lo_));
    }
    double width() const { return rounding::sub_up(hi_, lo_); }
    // Upper bound on max |x|.
    double mag() const { return std::max(std::fabs(lo_), std::fabs(hi_)); }
    // Lower bound on min |x|.
    double mig() const {
        if (lo_ <= 0 && hi_ >= 0) {
            return 0.0;
        }
        return std::min(std::fabs(lo_), std::fabs(hi_));
    }
    bool is_point() const noexcept { return lo_ == hi_; }
    bool contains(double x) const noexcept { return lo_ <= x && x <= hi_; }
    bool contains(const ExactRational& q) const {
        return ExactRational::from_double(lo_) <= q && q <= ExactRational::from_double(hi_);
    }
    bool contains_zero() const noexcept { return lo_ <= 0 && hi_ >= 0; }
    bool subset_of(const ValidatedBounds& other) const noexcept { return other.lo_ <= lo_ && hi_ <= other.hi_; }
    // Contained in the interior of other.
    bool inside(const ValidatedBounds& other) const noexcept { return other.lo_ < lo_ && hi_ < other.hi_; }

    friend bool operator==(const ValidatedBounds& a, const ValidatedBounds& b) noexcept {
        return a.lo_ == b.lo_ && a.hi_ == b.hi_;
    }

    ValidatedBounds& operator+=(const ValidatedBounds& y) { return *this = *this + y; }
    ValidatedBounds& operator-=(const ValidatedBounds& y) { return *this = *this - y; }
    ValidatedBounds& operator*=(const ValidatedBounds& y) { return *this = *this * y; }
    ValidatedBounds& operator/=(const ValidatedBounds& y) { return *this = *this / y; }

    friend ValidatedBounds operator+(const ValidatedBounds& x, const ValidatedBounds& y) {
        return {rounding::add_down(x.lo_, y.lo_), rounding::add_up(x.hi_, y.hi_)};
    }
    friend ValidatedBounds operator-(const ValidatedBounds& x, const ValidatedBounds& y) {
        return {rounding::sub_down(x.lo_, y.hi_), rounding::sub_up(x.hi_, y.lo_)};
    }
    friend ValidatedBounds operator-(const ValidatedBounds& x) { return {-x.hi_, -x.lo_}; }
    friend ValidatedBounds operator*(const ValidatedBounds& x, const ValidatedBounds& y) {
        if (x.is_zero_point() || y.is_zero_point()) {
            return ValidatedBounds(0.0);
        }
        const double a = x.lo_, b = x.hi_, c = y.lo_, d = y.hi_;
        double lo = 0;
        double hi = 0;
        if (a >= 0) {
            if (c >= 0) {
                lo = rounding::mul_down(a, c);
                hi = rounding::mul_up(b, d);
            } else if (d <= 0) {
                lo = rounding::mul_down(b, c);
                hi = rounding::mul_up(a, d);
            } else {
                lo = rounding::mul_down(b, c);
                hi = rounding::mul_up(b, d);
            }
        } else if (b <= 0) {
            if (c >= 0) {
                lo = rounding::mul_down(a, d);
                hi = rounding::mul_up(b, c);
            } else if (d <= 0) {
                lo = rounding::mul_down(b, d);
                hi = rounding::mul_up(a, c);
            } else {
                lo = rounding::mul_down(a, d);
                hi = rounding::mul_up(a, c);
            }
        } else {
            if (c >= 0) {
                lo = rounding::mul_down(a, d);
                hi = rounding::mul_up(b, d);
            } else if (d <= 0) {
                lo = rounding::mul_down(b, c);
                hi = rounding::mul_up(a, c);
            } else {
                lo = std::min(rounding::mul_down(a, d), rounding::mul_down(b, c));
                hi = std::max(rounding::mul_up(a, c), rounding::mul_up(b, d));
            }
        }
        return {lo, hi};
    }
    friend ValidatedBounds operator/(const ValidatedBounds& x, const ValidatedBounds& y) {
        if (y.contains_zero()) {
            throw DomainError("division by an interval containing zero");
        }
        return x * rec(y);
    }

    friend ValidatedBounds rec(const ValidatedBounds& y) {
        if (y.contains_zero()) {
            throw DomainError("reciprocal of an interval containing zero");
        }
        return {rounding::div_down(1.0, y.hi_), rounding::div_up(1.0, y.lo_)};
    }
    friend ValidatedBounds neg(const ValidatedBounds& x) { return -x; }
    friend ValidatedBounds hlf(const ValidatedBounds& x) {
        return {rounding::div_down(x.lo_, 2.0), rounding::div_up(x.hi_, 2.0)};
    }
    friend ValidatedBounds sqr(const ValidatedBounds& x) {
        if (x.lo_ >= 0) {
            return {rounding::mul_down(x.lo_, x.lo_), rounding::mul_up(x.hi_, x.hi_)};
        }
        if (x.hi_ <= 0) {
            return {rounding::mul_down(x.hi_, x.hi_), rounding::mul_up(x.lo_, x.lo_)};
        }
        const double m = x.mag();
        return {0.0, rounding::mul_up(m, m)};
    }
    friend ValidatedBounds abs(const ValidatedBounds& x) {
        if (x.lo_ >= 0) {
            return x;
        }
        if (x.hi_ <= 0) {
            return -x;
        }
        return {0.0, x.mag()};
    }
    friend ValidatedBounds max(const ValidatedBounds& x, const ValidatedBounds& y) {
        return {std::max(x.lo_, y.lo_), std::max(x.hi_, y.hi_)};
    }
    friend ValidatedBounds min(const ValidatedBounds& x, const ValidatedBounds& y) {
        return {std::min(x.lo_, y.lo_), std::min(x.hi_, y.hi_)};
    }
    friend ValidatedBounds fma(const ValidatedBounds& x, const ValidatedBounds& y, const ValidatedBounds& z) {
        return x * y + z;
    }
    friend ValidatedBounds pow(const ValidatedBounds& x, int n) {
        if (n < 0) {
            return rec(pow(x, -n));
        }
        if (n == 0) {
            return ValidatedBounds(1.0);
        }
        if (n % 2 == 1) {
            return {pow_point(x.lo_, n, RoundingMode::down), pow_point(x.hi_, n, RoundingMode::up)};
        }
        if (x.lo_ >= 0) {
            return {pow_point(x.lo_, n, RoundingMode::down), pow_point(x.hi_, n, RoundingMode::up)};
        }
        if (x.hi_ <= 0) {
            return {pow_point(-x.hi_, n, RoundingMode::down), pow_point(-x.lo_, n, RoundingMode::up)};
        }
        return {0.0, pow_point(x.mag(), n, RoundingMode::up)};
    }
    friend ValidatedBounds sqrt(const ValidatedBounds& x) {
        if (x.lo_ < 0) {
            throw DomainError("square root of an interval with negative part");
        }
        return {rounding::sqrt(x.lo_, RoundingMode::down), rounding::sqrt(x.hi_, RoundingMode::up)};
    }

    friend ValidatedBounds hull(const ValidatedBounds& x, const ValidatedBounds& y) {
        return {std::min(x.lo_, y.lo_), std::max(x.hi_, y.hi_)};
    }
    friend std::optional<ValidatedBounds> intersection(const ValidatedBounds& x, const ValidatedBounds& y) {
        const double lo = std::max(x.lo_, y.lo_);
        const double hi = std::min(x.hi_, y.hi_);
        if (lo > hi) {
            return std::nullopt;
        }
        return ValidatedBounds(lo, hi);
    }

  private:
    bool is_zero_point() const noexcept { return lo_ == 0 && hi_ == 0; }

    // x^n for a single float with directed rounding; odd n allows negative x.
    static double pow_point(double x, int n, RoundingMode mode) {
        if (x < 0) {
            const RoundingMode flipped = mode == RoundingMode::down ? RoundingMode::up : RoundingMode::down;
            const double p = pow_point(-x, n, flipped);
            return n % 2 == 0 ? p : -p;
        }
        double r = 1.0;
        for (int i = 0; i < n; ++i) {
            r = rounding::mul(r, x, mode);
        }
        return r;
    }

    double lo_ = 0.0;
    double hi_ = 0.0;
};

// Interval centre +/- radius; converted to bounds for computation.
class ValidatedBall {
  public:
    ValidatedBall() = default;
    ValidatedBall(double centre, double radius) : c_(centre), r_(radius) {
        if (std::isnan(centre) || !(radius >= 0)) {
            throw DomainError("ball requires finite centre and nonnegative radius");
        }
    }
    explicit ValidatedBall(const ValidatedBounds& b) : c_(b.midpoint()), r_(b.radius()) {}

    double centre() const noexcept { return c_; }
    double radius() const noexcept { return r_; }
    ValidatedBounds bounds() const { return ValidatedBounds::around(c_, r_); }

    friend ValidatedBall operator+(const ValidatedBall& x, const ValidatedBall& y) {
        const double c = x.c_ + y.c_;
        const double e = rounding::error_bound(x.c_, ArithOp::add, y.c_);
        return {c, rounding::add_up(rounding::add_up(x.r_, y.r_), e)};
    }
    friend ValidatedBall operator-(const ValidatedBall& x, const ValidatedBall& y) {
        const double c = x.c_ - y.c_;
        const double e = rounding::error_bound(x.c_, ArithOp::sub, y.c_);
        return {c, rounding::add_up(rounding::add_up(x.r_, y.r_), e)};
    }
    friend ValidatedBall operator*(const ValidatedBall& x, const ValidatedBall& y) {
        using rounding::add_up;
        using rounding::mul_up;
        const double c = x.c_ * y.c_;
        const double e = rounding::error_bound(x.c_, ArithOp::mul, y.c_);
        double r = add_up(mul_up(std::fabs(x.c_), y.r_), mul_up(std::fabs(y.c_), x.r_));
        r = add_up(add_up(r, mul_up(x.r_, y.r_)), e);
        return {c, r};
    }

  private:
    double c_ = 0.0;
    double r_ = 0.0;
};

} // namespace vcalc

#endif
