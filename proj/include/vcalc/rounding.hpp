#ifndef VCALC_ROUNDING_HPP
#define VCALC_ROUNDING_HPP

#include <cmath>
#include <limits>

#include "vcalc/errors.hpp"

namespace vcalc {

enum class RoundingMode { down, up, nearest };
enum class ArithOp { add, sub, mul, div };

// Directed rounding on binary64 without touching the FPU rounding mode.
//
// Each operation computes the nearest-rounded result and recovers the sign of
// the exact residual with an error-free transformation (TwoSum for +/-, fma for
// the product and quotient residuals). The result is stepped by one ulp only
// when the residual points the wrong way, so endpoints are the correctly
// rounded directed values wherever the residual is exact. Near the subnormal
// range, where residuals may themselves round, both directions are widened by
// one ulp instead.
namespace rounding {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kMax = std::numeric_limits<double>::max();
inline constexpr double kTiny = std::numeric_limits<double>::denorm_min();
// Below this magnitude fma residuals of products/quotients may be inexact.
inline constexpr double kResidualSafe = 0x1p-960;

inline double next_up(double x) { return std::nextafter(x, kInf); }
inline double next_down(double x) { return std::nextafter(x, -kInf); }

inline void check_nan(double x) {
    if (std::isnan(x)) {
        throw InternalError("rounded operation produced NaN");
    }
}

// Result of an operation on finite operands whose nearest value overflowed.
inline double overflowed(double nearest, RoundingMode mode) {
    if (nearest > 0) {
        return mode == RoundingMode::down ? kMax : kInf;
    }
    return mode == RoundingMode::up ? -kMax : -kInf;
}

// Apply the direction given the sign of (exact - nearest).
inline double adjust(double nearest, double residual, RoundingMode mode) {
    switch (mode) {
    case RoundingMode::nearest:
        return nearest;
    case RoundingMode::down:
        return residual < 0 ? next_down(nearest) : nearest;
    case RoundingMode::up:
        return residual > 0 ? next_up(nearest) : nearest;
    }
    return nearest;
}

inline double widen(double nearest, RoundingMode mode) {
    switch (mode) {
    case RoundingMode::nearest:
        return nearest;
    case RoundingMode::down:
        return next_down(nearest);
    case RoundingMode::up:
        return next_up(nearest);
    }
    return nearest;
}

inline double add(double x, double y, RoundingMode mode) {
    const double s = x + y;
    check_nan(s);
    if (!std::isfinite(s)) {
        if (std::isinf(x) || std::isinf(y)) {
            return s;
        }
        return overflowed(s, mode);
    }
    // TwoSum (Knuth): s + err == x + y exactly.
    const double yy = s - x;
    const double xx = s - yy;
    const double err = (x - xx) + (y - yy);
    return adjust(s, err, mode);
}

inline double sub(double x, double y, RoundingMode mode) { return add(x, -y, mode); }

inline double mul(double x, double y, RoundingMode mode) {
    const double p = x * y;
    check_nan(p);
    if (!std::isfinite(p)) {
        if (std::isinf(x) || std::isinf(y)) {
            return p;
        }
        return overflowed(p, mode);
    }
    if (mode == RoundingMode::nearest) {
        return p;
    }
    if (x == 0 || y == 0) {
        return p;
    }
    if (std::fabs(p) < kResidualSafe) {
        // The exact product is nonzero; account for underflow to zero.
        const bool positive = (x > 0) == (y > 0);
        if (p == 0) {
            if (mode == RoundingMode::down) {
                return positive ? 0.0 : -kTiny;
            }
            return positive ? kTiny : -0.0;
        }
        return widen(p, mode);
    }
    const double err = std::fma(x, y, -p);
    return adjust(p, err, mode);
}

inline double div(double x, double y, RoundingMode mode) {
    if (y == 0) {
        throw DomainError("division by zero");
    }
    const double q = x / y;
    check_nan(q);
    if (!std::isfinite(q)) {
        if (std::isinf(x) || std::isinf(y)) {
            return q;
        }
        return overflowed(q, mode);
    }
    if (mode == RoundingMode::nearest || x == 0 || std::isinf(y)) {
        return q;
    }
    if (std::fabs(q) < kResidualSafe || std::fabs(x) < kResidualSafe) {
        const bool positive = (x > 0) == (y > 0);
        if (q == 0) {
            if (mode == RoundingMode::down) {
                return positive ? 0.0 : -kTiny;
            }
            return positive ? kTiny : -0.0;
        }
        return widen(q, mode);
    }
    // r == x - q*y exactly; the exact quotient is q + r/y.
    const double r = std::fma(-q, y, x);
    const double residual = (y > 0) ? r : -r;
    return adjust(q, residual, mode);
}

inline double sqrt(double x, RoundingMode mode) {
    if (x < 0) {
        throw DomainError("square root of negative number");
    }
    const double s = std::sqrt(x);
    if (mode == RoundingMode::nearest || x == 0 || std::isinf(x)) {
        return s;
    }
    if (x < kResidualSafe) {
        return mode == RoundingMode::down ? std::max(0.0, next_down(s)) : next_up(s);
    }
    const double r = std::fma(-s, s, x);
    return adjust(s, r, mode);
}

inline double apply(ArithOp op, double x, double y, RoundingMode mode) {
    switch (op) {
    case ArithOp::add:
        return add(x, y, mode);
    case ArithOp::sub:
        return sub(x, y, mode);
    case ArithOp::mul:
        return mul(x, y, mode);
    case ArithOp::div:
        return div(x, y, mode);
    }
    throw UsageError("unknown arithmetic operation");
}

inline double add_down(double x, double y) { return add(x, y, RoundingMode::down); }
inline double add_up(double x, double y) { return add(x, y, RoundingMode::up); }
inline double sub_down(double x, double y) { return sub(x, y, RoundingMode::down); }
inline double sub_up(double x, double y) { return sub(x, y, RoundingMode::up); }
inline double mul_down(double x, double y) { return mul(x, y, RoundingMode::down); }
inline double mul_up(double x, double y) { return mul(x, y, RoundingMode::up); }
inline double div_down(double x, double y) { return div(x, y, RoundingMode::down); }
inline double div_up(double x, double y) { return div(x, y, RoundingMode::up); }

// x * 2^k rounded in the given direction (ldexp rounds to nearest on underflow).
inline double scale(double x, int k, RoundingMode mode) {
    const double y = std::ldexp(x, k);
    if (std::isinf(y) && std::isfinite(x)) {
        return overflowed(y, mode);
    }
    // Scaling back up is exact, so it tells which side of x*2^k y fell on.
    const double back = std::ldexp(y, -k);
    if (back == x || (mode == RoundingMode::down && back < x) || (mode == RoundingMode::up && back > x)) {
        return y;
    }
    if (mode == RoundingMode::nearest) {
        return y;
    }
    return mode == RoundingMode::down ? next_down(y) : next_up(y);
}

// Upper bound for |exact(x op y) - nearest(x op y)|: half the up/down bracket.
inline double error_bound(double x, ArithOp op, double y) {
    const double hi = apply(op, x, y, RoundingMode::up);
    const double lo = apply(op, x, y, RoundingMode::down);
    return div_up(sub_up(hi, lo), 2.0);
}

// Spacing of binary64 numbers at the magnitude of z: 2^(floor(log2|z|) - 52).
inline double ulp(double z) {
    if (z == 0 || !std::isfinite(z)) {
        throw DomainError("ulp requires a finite nonzero argument");
    }
    const int e = std::ilogb(z);
    return std::max(std::ldexp(1.0, e - (std::numeric_limits<double>::digits - 1)), kTiny);
}

} // namespace rounding

// A binary64 value that is never NaN.
class RoundedFloat {
  public:
    constexpr RoundedFloat() = default;
    explicit RoundedFloat(double value) : value_(value) {
        if (std::isnan(value)) {
            throw DomainError("RoundedFloat cannot hold NaN");
        }
    }
    double value() const noexcept { return value_; }
    explicit operator double() const noexcept { return value_; }
    friend bool operator==(RoundedFloat a, RoundedFloat b) noexcept { return a.value_ == b.value_; }
    friend auto operator<=>(RoundedFloat a, RoundedFloat b) noexcept { return a.value_ <=> b.value_; }

  private:
    double value_ = 0.0;
};

// Nonnegative upper bound on an error.
class UpperErrorBound {
  public:
    constexpr UpperErrorBound() = default;
    explicit UpperErrorBound(double value) : value_(value) {
        if (!(value >= 0)) {
            throw DomainError("error bound must be nonnegative");
        }
    }
    double value() const noexcept { return value_; }
    friend bool operator==(UpperErrorBound a, UpperErrorBound b) noexcept { return a.value_ == b.value_; }
    friend auto operator<=>(UpperErrorBound a, UpperErrorBound b) noexcept { return a.value_ <=> b.value_; }

  private:
    double value_ = 0.0;
};

inline RoundedFloat rounded_op(ArithOp op, RoundingMode mode, RoundedFloat x, RoundedFloat y) {
    return RoundedFloat(rounding::apply(op, x.value(), y.value(), mode));
}

inline UpperErrorBound op_error_bound(RoundedFloat x, ArithOp op, RoundedFloat y) {
    return UpperErrorBound(rounding::error_bound(x.value(), op, y.value()));
}

inline UpperErrorBound ulp(RoundedFloat z) { return UpperErrorBound(rounding::ulp(z.value())); }

} // namespace vcalc

#endif
