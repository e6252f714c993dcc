#ifndef VCALC_ALGEBRA_HPP
#define VCALC_ALGEBRA_HPP

#include <cmath>

#include "vcalc/bounds.hpp"
#include "vcalc/elementary.hpp"
#include "vcalc/rational.hpp"

namespace vcalc {

// Per-algebra hooks used by generic code (expression evaluation, linear
// algebra, power series). An algebra A supplies:
//   constant(proto, q)   element equal to (or enclosing) q, shaped like proto
//   is_exact_zero(a)     a is known to be exactly zero (safe to drop)
//   contains_zero(a)     0 is possibly a value of a
//   pivot_score(a)       preference as a Gaussian-elimination pivot
template <class A>
struct AlgebraTraits;

template <>
struct AlgebraTraits<double> {
    static double constant(double, const ExactRational& q) { return q.to_double(RoundingMode::nearest); }
    static bool is_exact_zero(double a) { return a == 0; }
    static bool contains_zero(double a) { return a == 0; }
    static double pivot_score(double a) { return std::fabs(a); }
};

template <>
struct AlgebraTraits<ExactRational> {
    static ExactRational constant(const ExactRational&, const ExactRational& q) { return q; }
    static bool is_exact_zero(const ExactRational& a) { return a.is_zero(); }
    static bool contains_zero(const ExactRational& a) { return a.is_zero(); }
    static double pivot_score(const ExactRational& a) {
        return std::fabs(a.to_double(RoundingMode::nearest));
    }
};

template <>
struct AlgebraTraits<ValidatedBounds> {
    static ValidatedBounds constant(const ValidatedBounds&, const ExactRational& q) {
        return ValidatedBounds::from_rational(q);
    }
    static bool is_exact_zero(const ValidatedBounds& a) { return a.lower() == 0 && a.upper() == 0; }
    static bool contains_zero(const ValidatedBounds& a) { return a.contains_zero(); }
    static double pivot_score(const ValidatedBounds& a) { return std::fabs(a.midpoint()); }
};

template <class A>
A make_constant(const A& proto, const ExactRational& q) {
    return AlgebraTraits<A>::constant(proto, q);
}

template <class A>
A make_constant(const A& proto, long n) {
    return AlgebraTraits<A>::constant(proto, ExactRational(n));
}

// Plain double versions of the elementary operations used generically.
inline double rec(double x) { return 1.0 / x; }
inline double neg(double x) { return -x; }
inline double hlf(double x) { return x / 2; }
inline double sqr(double x) { return x * x; }
inline ExactRational sqr(const ExactRational& x) { return x * x; }
inline ExactRational hlf(const ExactRational& x) { return x / ExactRational(2); }

} // namespace vcalc

#endif
