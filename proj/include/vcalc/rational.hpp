#ifndef VCALC_RATIONAL_HPP
#define VCALC_RATIONAL_HPP

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <compare>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

#include "vcalc/errors.hpp"
#include "vcalc/rounding.hpp"

namespace vcalc {

// Arbitrary-precision rational in lowest terms with positive denominator.
class ExactRational {
  public:
    ExactRational() = default;
    ExactRational(long n) : q_(n) {} // NOLINT(google-explicit-constructor)
    ExactRational(int n) : q_(static_cast<long>(n)) {} // NOLINT(google-explicit-constructor)
    ExactRational(long num, long den) {
        if (den == 0) {
            throw DomainError("rational with zero denominator");
        }
        q_ = mpq_class(mpz_class(num), mpz_class(den));
        q_.canonicalize();
    }
    explicit ExactRational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

    // Exact value of a finite double.
    static ExactRational from_double(double x) {
        if (!std::isfinite(x)) {
            throw DomainError("cannot convert non-finite double to rational");
        }
        mpq_class q;
        mpq_set_d(q.get_mpq_t(), x);
        return ExactRational(q);
    }

    // Parses "p", "p/q", decimal "d.ddd", and scientific "d.dde-k" exactly.
    static ExactRational parse(std::string_view text) {
        std::string s(text);
        if (s.empty()) {
            throw DomainError("empty rational literal");
        }
        if (auto slash = s.find('/'); slash != std::string::npos) {
            return parse(s.substr(0, slash)) / parse(s.substr(slash + 1));
        }
        std::size_t pos = 0;
        bool negative = false;
        if (s[pos] == '+' || s[pos] == '-') {
            negative = s[pos] == '-';
            ++pos;
        }
        std::string digits;
        long exponent = 0;
        bool seen_point = false;
        bool any_digit = false;
        for (; pos < s.size(); ++pos) {
            char c = s[pos];
            if (std::isdigit(static_cast<unsigned char>(c))) {
                digits.push_back(c);
                any_digit = true;
                if (seen_point) {
                    --exponent;
                }
            } else if (c == '.' && !seen_point) {
                seen_point = true;
            } else {
                break;
            }
        }
        if (!any_digit) {
            throw DomainError("malformed rational literal '" + s + "'");
        }
        if (pos < s.size()) {
            if (s[pos] != 'e' && s[pos] != 'E') {
                throw DomainError("malformed rational literal '" + s + "'");
            }
            const std::string exp_text = s.substr(pos + 1);
            std::size_t used = 0;
            long e = 0;
            try {
                e = std::stol(exp_text, &used);
            } catch (const std::exception&) {
                throw DomainError("malformed exponent in '" + s + "'");
            }
            if (used != exp_text.size()) {
                throw DomainError("malformed exponent in '" + s + "'");
            }
            exponent += e;
        }
        mpz_class mantissa(digits, 10);
        mpz_class power;
        mpz_ui_pow_ui(power.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
        mpq_class q = exponent >= 0 ? mpq_class(mantissa * power) : mpq_class(mantissa, power);
        q.canonicalize();
        if (negative) {
            q = -q;
        }
        return ExactRational(q);
    }

    const mpq_class& value() const noexcept { return q_; }
    mpz_class numerator() const { return q_.get_num(); }
    mpz_class denominator() const { return q_.get_den(); }
    int sign() const { return sgn(q_); }
    bool is_zero() const { return sgn(q_) == 0; }

    // Nearest double below/above/nearest to this rational.
    double to_double(RoundingMode mode) const {
        double d = q_.get_d(); // truncates towards zero
        if (std::isinf(d)) {
            d = d > 0 ? rounding::kMax : -rounding::kMax;
        }
        const int cmp = ::cmp(mpq_class(from_double(d).q_), q_);
        double below = d;
        double above = d;
        if (cmp < 0) {
            above = rounding::next_up(d);
        } else if (cmp > 0) {
            below = rounding::next_down(d);
        }
        switch (mode) {
        case RoundingMode::down:
            return below;
        case RoundingMode::up:
            return above;
        case RoundingMode::nearest: {
            if (below == above) {
                return below;
            }
            if (std::isinf(below) || std::isinf(above)) {
                return std::isinf(below) ? above : below;
            }
            const mpq_class dl = q_ - from_double(below).q_;
            const mpq_class du = from_double(above).q_ - q_;
            const int c = ::cmp(dl, du);
            if (c < 0) {
                return below;
            }
            if (c > 0) {
                return above;
            }
            // Tie: choose even mantissa.
            int e = 0;
            const double m = std::frexp(below, &e);
            const auto bits = static_cast<long long>(std::ldexp(m, 53));
            return (bits % 2 == 0) ? below : above;
        }
        }
        return d;
    }

    friend ExactRational operator+(const ExactRational& a, const ExactRational& b) {
        return ExactRational(mpq_class(a.q_ + b.q_));
    }
    friend ExactRational operator-(const ExactRational& a, const ExactRational& b) {
        return ExactRational(mpq_class(a.q_ - b.q_));
    }
    friend ExactRational operator*(const ExactRational& a, const ExactRational& b) {
        return ExactRational(mpq_class(a.q_ * b.q_));
    }
    friend ExactRational operator/(const ExactRational& a, const ExactRational& b) {
        if (b.is_zero()) {
            throw DomainError("division by zero");
        }
        return ExactRational(mpq_class(a.q_ / b.q_));
    }
    friend ExactRational operator-(const ExactRational& a) { return ExactRational(mpq_class(-a.q_)); }
    ExactRational& operator+=(const ExactRational& b) { return *this = *this + b; }
    ExactRational& operator-=(const ExactRational& b) { return *this = *this - b; }
    ExactRational& operator*=(const ExactRational& b) { return *this = *this * b; }
    ExactRational& operator/=(const ExactRational& b) { return *this = *this / b; }

    friend bool operator==(const ExactRational& a, const ExactRational& b) { return a.q_ == b.q_; }
    friend std::strong_ordering operator<=>(const ExactRational& a, const ExactRational& b) {
        const int c = ::cmp(a.q_, b.q_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    // Largest integer <= this / smallest integer >= this.
    mpz_class floor() const {
        mpz_class r;
        mpz_fdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
        return r;
    }
    mpz_class ceil() const {
        mpz_class r;
        mpz_cdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
        return r;
    }

    std::string str() const { return q_.get_str(); }
    friend std::ostream& operator<<(std::ostream& os, const ExactRational& q) { return os << q.str(); }

  private:
    mpq_class q_;
};

inline ExactRational abs(const ExactRational& q) { return q.sign() < 0 ? -q : q; }
inline ExactRational rec(const ExactRational& q) { return ExactRational(1) / q; }
inline ExactRational neg(const ExactRational& q) { return -q; }
inline ExactRational max(const ExactRational& a, const ExactRational& b) { return a < b ? b : a; }
inline ExactRational min(const ExactRational& a, const ExactRational& b) { return a < b ? a : b; }

inline ExactRational pow(const ExactRational& q, int n) {
    if (n < 0) {
        return rec(pow(q, -n));
    }
    mpz_class num;
    mpz_class den;
    mpz_pow_ui(num.get_mpz_t(), q.value().get_num_mpz_t(), static_cast<unsigned long>(n));
    mpz_pow_ui(den.get_mpz_t(), q.value().get_den_mpz_t(), static_cast<unsigned long>(n));
    return ExactRational(mpq_class(num, den));
}

// Transcendental functions are only exact at their rational special points.
inline ExactRational exp(const ExactRational& q) {
    if (q.is_zero()) {
        return ExactRational(1);
    }
    throw DomainError("exp is not rational at a nonzero rational argument");
}
inline ExactRational log(const ExactRational& q) {
    if (q == ExactRational(1)) {
        return ExactRational(0);
    }
    throw DomainError("log is not rational at this argument");
}
inline ExactRational sin(const ExactRational& q) {
    if (q.is_zero()) {
        return ExactRational(0);
    }
    throw DomainError("sin is not rational at a nonzero rational argument");
}
inline ExactRational cos(const ExactRational& q) {
    if (q.is_zero()) {
        return ExactRational(1);
    }
    throw DomainError("cos is not rational at a nonzero rational argument");
}
inline ExactRational tan(const ExactRational& q) {
    if (q.is_zero()) {
        return ExactRational(0);
    }
    throw DomainError("tan is not rational at a nonzero rational argument");
}
inline ExactRational atan(const ExactRational& q) {
    if (q.is_zero()) {
        return ExactRational(0);
    }
    throw DomainError("atan is not rational at a nonzero rational argument");
}
inline ExactRational sqrt(const ExactRational& q) {
    if (q.sign() < 0) {
        throw DomainError("square root of negative rational");
    }
    const mpz_class& num = q.value().get_num();
    const mpz_class& den = q.value().get_den();
    if (mpz_perfect_square_p(num.get_mpz_t()) && mpz_perfect_square_p(den.get_mpz_t())) {
        mpz_class rn;
        mpz_class rd;
        mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
        mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
        return ExactRational(mpq_class(rn, rd));
    }
    throw DomainError("square root is not rational at this argument");
}

} // namespace vcalc

template <>
struct std::hash<vcalc::ExactRational> {
    std::size_t operator()(const vcalc::ExactRational& q) const { return std::hash<std::string>{}(q.str()); }
};

#endif
