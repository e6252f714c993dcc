#ifndef VCALC_LOGIC_HPP
#define VCALC_LOGIC_HPP

#include <ostream>
#include <string_view>

#include "vcalc/bounds.hpp"
#include "vcalc/errors.hpp"

namespace vcalc {

// Three-valued result of a quasidecidable predicate.
enum class ValidatedKleenean { FALSE, INDETERMINATE, TRUE };

// Result of a comparison on approximations, where nothing is certain.
enum class ApproximateKleenean { UNLIKELY, LIKELY };

inline ValidatedKleenean operator!(ValidatedKleenean a) {
    switch (a) {
    case ValidatedKleenean::TRUE:
        return ValidatedKleenean::FALSE;
    case ValidatedKleenean::FALSE:
        return ValidatedKleenean::TRUE;
    default:
        return ValidatedKleenean::INDETERMINATE;
    }
}

// FALSE < INDETERMINATE < TRUE, so conjunction is min and disjunction is max.
inline ValidatedKleenean operator&(ValidatedKleenean a, ValidatedKleenean b) { return a < b ? a : b; }
inline ValidatedKleenean operator|(ValidatedKleenean a, ValidatedKleenean b) { return a < b ? b : a; }
inline ValidatedKleenean implies(ValidatedKleenean a, ValidatedKleenean b) { return !a | b; }

inline bool definitely(ValidatedKleenean k) { return k == ValidatedKleenean::TRUE; }
inline bool possibly(ValidatedKleenean k) { return k != ValidatedKleenean::FALSE; }
// INDETERMINATE decides to false.
inline bool decide(ValidatedKleenean k) { return k == ValidatedKleenean::TRUE; }

inline bool decide(ApproximateKleenean k) { return k == ApproximateKleenean::LIKELY; }

inline std::string_view to_string(ValidatedKleenean k) {
    switch (k) {
    case ValidatedKleenean::TRUE:
        return "TRUE";
    case ValidatedKleenean::FALSE:
        return "FALSE";
    default:
        return "INDETERMINATE";
    }
}

inline std::string_view to_string(ApproximateKleenean k) {
    return k == ApproximateKleenean::LIKELY ? "LIKELY" : "UNLIKELY";
}

inline ValidatedKleenean kleenean_from_string(std::string_view s) {
    if (s == "TRUE") {
        return ValidatedKleenean::TRUE;
    }
    if (s == "FALSE") {
        return ValidatedKleenean::FALSE;
    }
    if (s == "INDETERMINATE") {
        return ValidatedKleenean::INDETERMINATE;
    }
    throw UsageError("not a Kleenean value: " + std::string(s));
}

inline std::ostream& operator<<(std::ostream& os, ValidatedKleenean k) { return os << to_string(k); }
inline std::ostream& operator<<(std::ostream& os, ApproximateKleenean k) { return os << to_string(k); }

// x < y holds for every represented pair / for none / undetermined.
inline ValidatedKleenean bounds_less(const ValidatedBounds& x, const ValidatedBounds& y) {
    if (x.upper() < y.lower()) {
        return ValidatedKleenean::TRUE;
    }
    if (x.lower() >= y.upper()) {
        return ValidatedKleenean::FALSE;
    }
    return ValidatedKleenean::INDETERMINATE;
}

inline ValidatedKleenean operator<(const ValidatedBounds& x, const ValidatedBounds& y) { return bounds_less(x, y); }
inline ValidatedKleenean operator>(const ValidatedBounds& x, const ValidatedBounds& y) { return bounds_less(y, x); }
inline ValidatedKleenean operator<=(const ValidatedBounds& x, const ValidatedBounds& y) { return !bounds_less(y, x); }
inline ValidatedKleenean operator>=(const ValidatedBounds& x, const ValidatedBounds& y) { return !bounds_less(x, y); }

// Comparing midpoints gives only approximate information.
inline ApproximateKleenean approximately_less(double x, double y) {
    return x < y ? ApproximateKleenean::LIKELY : ApproximateKleenean::UNLIKELY;
}

} // namespace vcalc

#endif
