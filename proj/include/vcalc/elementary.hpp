#ifndef VCALC_ELEMENTARY_HPP
#define VCALC_ELEMENTARY_HPP

#include <cmath>

#include "vcalc/bounds.hpp"

namespace vcalc {

// Validated elementary functions on bounds.
//
// Values at single floats are computed by argument reduction followed by a
// truncated Taylor series evaluated in interval arithmetic, with the Lagrange
// remainder added as an explicit interval. Interval arguments are handled by
// monotonicity (exp, log, atan) or by locating critical points (sin, cos).

namespace constants {

// Adjacent binary64 numbers enclosing pi and log(2).
inline ValidatedBounds pi() { return {0x1.921fb54442d18p+1, 0x1.921fb54442d19p+1}; }
inline ValidatedBounds ln2() { return {0x1.62e42fefa39efp-1, 0x1.62e42fefa39f0p-1}; }
inline ValidatedBounds half_pi() { return hlf(pi()); }

} // namespace constants

namespace detail {

inline ValidatedBounds symmetric(double r) { return {-r, r}; }

// Sum_{i<terms} x^i/i! + remainder; valid for |x| <= 1/2.
inline ValidatedBounds exp_series(const ValidatedBounds& x) {
    constexpr int terms = 24;
    ValidatedBounds acc(1.0);
    for (int i = terms - 1; i >= 1; --i) {
        acc = ValidatedBounds(1.0) + x * acc / ValidatedBounds(static_cast<double>(i));
    }
    // Tail: |x|^N/N! * sum_j (|x|/N)^j <= 2|x|^N/N!.
    ValidatedBounds tail = pow(ValidatedBounds(x.mag()), terms);
    for (int i = 2; i <= terms; ++i) {
        tail = tail / ValidatedBounds(static_cast<double>(i));
    }
    return acc + symmetric(rounding::mul_up(2.0, tail.upper()));
}

inline ValidatedBounds exp_point(double a) {
    if (a == 0) {
        return ValidatedBounds(1.0);
    }
    if (a > 709.79) {
        // exp(709.79) already exceeds the largest finite double.
        return {rounding::kMax, rounding::kInf};
    }
    if (a <= -745.2) {
        return {0.0, rounding::kTiny};
    }
    const double k = std::nearbyint(a / constants::ln2().midpoint());
    const ValidatedBounds r = ValidatedBounds(a) - ValidatedBounds(k) * constants::ln2();
    const ValidatedBounds s = exp_series(r);
    const int ki = static_cast<int>(k);
    return {rounding::scale(s.lower(), ki, RoundingMode::down), rounding::scale(s.upper(), ki, RoundingMode::up)};
}

// log(m) for m in [1/sqrt2, sqrt2] via 2 atanh((m-1)/(m+1)).
inline ValidatedBounds log_reduced(const ValidatedBounds& m) {
    constexpr int terms = 18;
    const ValidatedBounds s = (m - ValidatedBounds(1.0)) / (m + ValidatedBounds(1.0));
    const ValidatedBounds s2 = sqr(s);
    ValidatedBounds acc(0.0);
    for (int k = terms - 1; k >= 0; --k) {
        acc = ValidatedBounds(1.0) / ValidatedBounds(static_cast<double>(2 * k + 1)) + s2 * acc;
    }
    acc = ValidatedBounds(2.0) * s * acc;
    // Remainder: 2|s|^(2N+1) / ((2N+1)(1-s^2)).
    const double sm = s.mag();
    const ValidatedBounds tail = ValidatedBounds(2.0) * pow(ValidatedBounds(sm), 2 * terms + 1) /
                                 (ValidatedBounds(static_cast<double>(2 * terms + 1)) *
                                  (ValidatedBounds(1.0) - sqr(ValidatedBounds(sm))));
    return acc + symmetric(tail.upper());
}

inline ValidatedBounds log_point(double a) {
    if (!(a > 0)) {
        throw DomainError("log requires a positive argument");
    }
    if (std::isinf(a)) {
        return {rounding::kMax, rounding::kInf};
    }
    if (a == 1.0) {
        return ValidatedBounds(0.0);
    }
    int e = 0;
    double m = std::frexp(a, &e); // a = m 2^e, m in [0.5, 1)
    if (m < 0.70710678118654752) {
        m *= 2;
        e -= 1;
    }
    return log_reduced(ValidatedBounds(m)) + ValidatedBounds(static_cast<double>(e)) * constants::ln2();
}

// sin and cos series for |r| <= pi/4 (+ slack).
inline ValidatedBounds sin_series(const ValidatedBounds& r) {
    constexpr int terms = 14;
    const ValidatedBounds r2 = sqr(r);
    ValidatedBounds acc(1.0);
    for (int i = terms - 1; i >= 1; --i) {
        acc = ValidatedBounds(1.0) - r2 * acc / ValidatedBounds(static_cast<double>((2 * i) * (2 * i + 1)));
    }
    acc = r * acc;
    ValidatedBounds tail = pow(ValidatedBounds(r.mag()), 2 * terms + 1);
    for (int i = 2; i <= 2 * terms + 1; ++i) {
        tail = tail / ValidatedBounds(static_cast<double>(i));
    }
    return acc + symmetric(tail.upper());
}

inline ValidatedBounds cos_series(const ValidatedBounds& r) {
    constexpr int terms = 14;
    const ValidatedBounds r2 = sqr(r);
    ValidatedBounds acc(1.0);
    for (int i = terms - 1; i >= 1; --i) {
        acc = ValidatedBounds(1.0) - r2 * acc / ValidatedBounds(static_cast<double>((2 * i - 1) * (2 * i)));
    }
    ValidatedBounds tail = pow(ValidatedBounds(r.mag()), 2 * terms);
    for (int i = 2; i <= 2 * terms; ++i) {
        tail = tail / ValidatedBounds(static_cast<double>(i));
    }
    return acc + symmetric(tail.upper());
}

inline ValidatedBounds clamp_unit(const ValidatedBounds& x) {
    return {std::max(x.lower(), -1.0), std::min(x.upper(), 1.0)};
}

// quadrant_shift = 0 for sin, 1 for cos (cos a = sin(a + pi/2)).
inline ValidatedBounds sin_cos_point(double a, int quadrant_shift) {
    if (std::fabs(a) > 1e15) {
        return {-1.0, 1.0};
    }
    const double k = std::nearbyint(a / constants::half_pi().midpoint());
    const ValidatedBounds r = ValidatedBounds(a) - ValidatedBounds(k) * constants::half_pi();
    long q = (static_cast<long>(k) + quadrant_shift) % 4;
    if (q < 0) {
        q += 4;
    }
    ValidatedBounds v;
    switch (q) {
    case 0:
        v = sin_series(r);
        break;
    case 1:
        v = cos_series(r);
        break;
    case 2:
        v = -sin_series(r);
        break;
    default:
        v = -cos_series(r);
        break;
    }
    return clamp_unit(v);
}

// Extremes of a periodic function over x: critical points at offset + j*pi,
// where even j gives +1 and odd j gives -1.
inline ValidatedBounds periodic_hull(const ValidatedBounds& x, const ValidatedBounds& at_lower,
                                     const ValidatedBounds& at_upper, const ValidatedBounds& offset) {
    ValidatedBounds result = hull(at_lower, at_upper);
    const ValidatedBounds t = (x - offset) / constants::pi();
    const double jlo = std::ceil(t.lower());
    const double jhi = std::floor(t.upper());
    for (double j = jlo; j <= jhi && j <= jlo + 2; j += 1.0) {
        const bool even = std::fmod(std::fabs(j), 2.0) == 0.0;
        result = hull(result, ValidatedBounds(even ? 1.0 : -1.0));
    }
    return clamp_unit(result);
}

inline ValidatedBounds atan_reduced(const ValidatedBounds& x) {
    // |x| <= ~0.2
    constexpr int terms = 20;
    const ValidatedBounds x2 = sqr(x);
    ValidatedBounds acc(0.0);
    for (int k = terms - 1; k >= 0; --k) {
        const ValidatedBounds c = ValidatedBounds(1.0) / ValidatedBounds(static_cast<double>(2 * k + 1));
        acc = (k % 2 == 0 ? c : -c) + x2 * acc;
    }
    acc = x * acc;
    const ValidatedBounds tail =
        pow(ValidatedBounds(x.mag()), 2 * terms + 1) / ValidatedBounds(static_cast<double>(2 * terms + 1));
    return acc + symmetric(tail.upper());
}

inline ValidatedBounds atan_small(const ValidatedBounds& x) {
    // atan(x) = 2 atan(x / (1 + sqrt(1 + x^2))), applied twice.
    ValidatedBounds y = x;
    for (int i = 0; i < 2; ++i) {
        y = y / (ValidatedBounds(1.0) + sqrt(ValidatedBounds(1.0) + sqr(y)));
    }
    return ValidatedBounds(4.0) * atan_reduced(y);
}

inline ValidatedBounds atan_point(double a) {
    if (a == 0) {
        return ValidatedBounds(0.0);
    }
    if (std::isinf(a)) {
        return a > 0 ? constants::half_pi() : -constants::half_pi();
    }
    if (std::fabs(a) <= 1.0) {
        return atan_small(ValidatedBounds(a));
    }
    const ValidatedBounds inv = rec(ValidatedBounds(a));
    const ValidatedBounds base = a > 0 ? constants::half_pi() : -constants::half_pi();
    return base - atan_small(inv);
}

} // namespace detail

inline ValidatedBounds exp(const ValidatedBounds& x) {
    return {detail::exp_point(x.lower()).lower(), detail::exp_point(x.upper()).upper()};
}

inline ValidatedBounds log(const ValidatedBounds& x) {
    if (!(x.lower() > 0)) {
        throw DomainError("log of an interval that is not strictly positive");
    }
    return {detail::log_point(x.lower()).lower(), detail::log_point(x.upper()).upper()};
}

inline ValidatedBounds sin(const ValidatedBounds& x) {
    if (!(x.width() < 6.28)) {
        return {-1.0, 1.0};
    }
    return detail::periodic_hull(x, detail::sin_cos_point(x.lower(), 0), detail::sin_cos_point(x.upper(), 0),
                                 constants::half_pi());
}

inline ValidatedBounds cos(const ValidatedBounds& x) {
    if (!(x.width() < 6.28)) {
        return {-1.0, 1.0};
    }
    return detail::periodic_hull(x, detail::sin_cos_point(x.lower(), 1), detail::sin_cos_point(x.upper(), 1),
                                 ValidatedBounds(0.0));
}

inline ValidatedBounds tan(const ValidatedBounds& x) {
    const ValidatedBounds c = cos(x);
    if (c.contains_zero()) {
        throw DomainError("tan at a pole");
    }
    return sin(x) / c;
}

inline ValidatedBounds atan(const ValidatedBounds& x) {
    return {detail::atan_point(x.lower()).lower(), detail::atan_point(x.upper()).upper()};
}

} // namespace vcalc

#endif
