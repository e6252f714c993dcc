#ifndef VCALC_FORMAT_HPP
#define VCALC_FORMAT_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <string>
#include <system_error>

#include "vcalc/bounds.hpp"
#include "vcalc/rational.hpp"

namespace vcalc {

// Shortest decimal string that reads back to the same double.
inline std::string shortest(double x) {
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    if (ec != std::errc{}) {
        throw InternalError("to_chars failed");
    }
    std::string s(buf, end);
    if (s.find_first_of(".en") == std::string::npos) {
        s += ".0";
    }
    return s;
}

inline std::string render_plain(const ValidatedBounds& x) {
    return "[" + shortest(x.lower()) + ":" + shortest(x.upper()) + "]";
}

namespace detail {

// Integer n scaled by 10^-places as a fixed-point decimal string.
inline std::string fixed_decimal(const mpz_class& n, int places) {
    std::string digits = mpz_class(abs(n)).get_str();
    if (static_cast<int>(digits.size()) <= places) {
        digits.insert(0, static_cast<std::size_t>(places + 1) - digits.size(), '0');
    }
    if (places > 0) {
        digits.insert(digits.size() - static_cast<std::size_t>(places), ".");
    }
    return (sgn(n) < 0 ? "-" : "") + digits;
}

inline mpz_class pow10(int k) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, static_cast<unsigned long>(k));
    return r;
}

} // namespace detail

// Compressed interval text: "1.2247448713915[9:8]" shows the shared leading
// digits once, with the lower and upper tails (outward rounded) in brackets;
// when no useful prefix exists, "0.35000000000000[-1:1]" gives integer offsets
// in the last place relative to a rounded centre.
inline std::string render_prefix(const ValidatedBounds& x) {
    if (x.is_point()) {
        return shortest(x.lower());
    }
    if (!std::isfinite(x.lower()) || !std::isfinite(x.upper())) {
        return render_plain(x);
    }
    const ExactRational lo = ExactRational::from_double(x.lower());
    const ExactRational hi = ExactRational::from_double(x.upper());
    const double m = x.mag();
    const int e10 = static_cast<int>(std::floor(std::log10(m)));
    int places = std::max(0, 14 - e10);
    mpz_class L;
    mpz_class U;
    for (;; --places) {
        const ExactRational scale(mpq_class(detail::pow10(places)));
        L = (lo * scale).floor();
        U = (hi * scale).ceil();
        if (U - L <= 999 || places == 0) {
            break;
        }
    }
    if (U - L > 999) {
        return render_plain(x);
    }
    const std::string sl = detail::fixed_decimal(L, places);
    const std::string su = detail::fixed_decimal(U, places);
    if (sl.size() == su.size() && sl[0] == su[0]) {
        std::size_t p = 0;
        while (p < sl.size() && sl[p] == su[p]) {
            ++p;
        }
        const bool prefix_has_digit = sl.find_first_of("123456789") < p;
        if (sl.size() - p <= 3 && prefix_has_digit) {
            return sl.substr(0, p) + "[" + sl.substr(p) + ":" + su.substr(p) + "]";
        }
    }
    // Offsets are whole units in the last printed place of the centre.
    const int shift = static_cast<int>(mpz_class(U - L).get_str().size()) - 1;
    const int centre_places = std::max(0, places - shift);
    const mpz_class q = detail::pow10(places - centre_places);
    mpz_class centre;
    mpz_class num = L + U + q;
    mpz_class den = 2 * q;
    mpz_fdiv_q(centre.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    mpz_class ol = L - centre * q;
    mpz_class ou = U - centre * q;
    mpz_fdiv_q(ol.get_mpz_t(), ol.get_mpz_t(), q.get_mpz_t());
    mpz_cdiv_q(ou.get_mpz_t(), ou.get_mpz_t(), q.get_mpz_t());
    return detail::fixed_decimal(centre, centre_places) + "[" + ol.get_str() + ":" + ou.get_str() + "]";
}

// Fixed-point decimal with sig significant digits, rounded in the given
// direction (nearest rounds half away from zero).
inline std::string significant(double x, int sig, RoundingMode mode = RoundingMode::nearest) {
    if (!std::isfinite(x)) {
        return shortest(x);
    }
    if (x == 0) {
        return "0.0";
    }
    const int e = static_cast<int>(std::floor(std::log10(std::fabs(x))));
    const int places = std::max(sig - 1 - e, 1);
    const ExactRational scaled = ExactRational::from_double(x) * ExactRational(mpq_class(detail::pow10(places)));
    const mpz_class& num = scaled.value().get_num();
    const mpz_class& den = scaled.value().get_den();
    mpz_class n;
    switch (mode) {
    case RoundingMode::down:
        mpz_fdiv_q(n.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        break;
    case RoundingMode::up:
        mpz_cdiv_q(n.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        break;
    case RoundingMode::nearest: {
        const mpz_class twice = 2 * abs(num) + den;
        mpz_fdiv_q(n.get_mpz_t(), twice.get_mpz_t(), mpz_class(2 * den).get_mpz_t());
        if (sgn(num) < 0) {
            n = -n;
        }
        break;
    }
    }
    return detail::fixed_decimal(n, places);
}

// "{lower:upper}" with sig significant digits, rounded outward.
inline std::string render_braced(const ValidatedBounds& x, int sig) {
    return "{" + significant(x.lower(), sig, RoundingMode::down) + ":" + significant(x.upper(), sig, RoundingMode::up) +
           "}";
}

inline std::ostream& operator<<(std::ostream& os, const ValidatedBounds& x) { return os << render_plain(x); }

} // namespace vcalc

#endif
