#ifndef VCALC_SERIES_HPP
#define VCALC_SERIES_HPP

#include <cmath>
#include <string_view>
#include <vector>

#include "vcalc/algebra.hpp"
#include "vcalc/errors.hpp"

namespace vcalc {

enum class AnalyticOp { exp, log, sin, cos, tan, atan, sqrt, rec };

inline std::string_view to_string(AnalyticOp op) {
    switch (op) {
    case AnalyticOp::exp:
        return "exp";
    case AnalyticOp::log:
        return "log";
    case AnalyticOp::sin:
        return "sin";
    case AnalyticOp::cos:
        return "cos";
    case AnalyticOp::tan:
        return "tan";
    case AnalyticOp::atan:
        return "atan";
    case AnalyticOp::sqrt:
        return "sqrt";
    case AnalyticOp::rec:
        return "rec";
    }
    return "?";
}

// Elementwise application of op in the scalar algebra X.
template <class X>
X apply_op(AnalyticOp op, const X& x) {
    using std::atan;
    using std::cos;
    using std::exp;
    using std::log;
    using std::sin;
    using std::sqrt;
    using std::tan;
    switch (op) {
    case AnalyticOp::exp:
        return exp(x);
    case AnalyticOp::log:
        return log(x);
    case AnalyticOp::sin:
        return sin(x);
    case AnalyticOp::cos:
        return cos(x);
    case AnalyticOp::tan:
        return tan(x);
    case AnalyticOp::atan:
        return atan(x);
    case AnalyticOp::sqrt:
        return sqrt(x);
    case AnalyticOp::rec:
        return rec(x);
    }
    throw InternalError("unknown analytic operation");
}

// Taylor coefficients a_k = f^(k)(c)/k!, k = 0..degree, computed in the scalar
// algebra X. With X = ValidatedBounds and c an interval, each a_k encloses
// f^(k)(xi)/k! for every xi in c.
template <class X>
std::vector<X> series_coefficients(AnalyticOp op, const X& c, int degree) {
    using std::atan;
    using std::cos;
    using std::exp;
    using std::log;
    using std::sin;
    using std::sqrt;
    using std::tan;
    auto k_const = [&c](const ExactRational& q) { return make_constant(c, q); };
    std::vector<X> a;
    a.reserve(static_cast<std::size_t>(degree) + 1);
    switch (op) {
    case AnalyticOp::exp: {
        const X e = exp(c);
        ExactRational inv_fact(1);
        for (int k = 0; k <= degree; ++k) {
            if (k > 0) {
                inv_fact = inv_fact / ExactRational(k);
            }
            a.push_back(e * k_const(inv_fact));
        }
        break;
    }
    case AnalyticOp::log: {
        a.push_back(log(c));
        const X r = rec(c);
        X p = r;
        for (int k = 1; k <= degree; ++k) {
            a.push_back(p * k_const(ExactRational(k % 2 == 1 ? 1 : -1, k)));
            p = p * r;
        }
        break;
    }
    case AnalyticOp::rec: {
        const X r = rec(c);
        X p = r;
        for (int k = 0; k <= degree; ++k) {
            a.push_back(k % 2 == 0 ? p : -p);
            p = p * r;
        }
        break;
    }
    case AnalyticOp::sqrt: {
        const X s = sqrt(c);
        a.push_back(s);
        if (degree > 0) {
            const X r = rec(c);
            X p = s;
            ExactRational binom(1);
            for (int k = 1; k <= degree; ++k) {
                binom = binom * (ExactRational(1, 2) - ExactRational(k - 1)) / ExactRational(k);
                p = p * r;
                a.push_back(p * k_const(binom));
            }
        }
        break;
    }
    case AnalyticOp::sin:
    case AnalyticOp::cos: {
        const X s = sin(c);
        const X co = cos(c);
        // f^(k) cycles through sin, cos, -sin, -cos (starting at sin or cos)
        const int start = op == AnalyticOp::sin ? 0 : 1;
        ExactRational inv_fact(1);
        for (int k = 0; k <= degree; ++k) {
            if (k > 0) {
                inv_fact = inv_fact / ExactRational(k);
            }
            const int phase = (start + k) % 4;
            const X& base = phase % 2 == 0 ? s : co;
            const X v = base * k_const(inv_fact);
            a.push_back(phase >= 2 ? -v : v);
        }
        break;
    }
    case AnalyticOp::atan: {
        // atan' = 1/(1+x^2) = g; g(c+t)((1+c^2) + 2c t + t^2) = 1 gives the
        // recurrence for g_k, and a_k = g_{k-1}/k.
        a.push_back(atan(c));
        const X q0 = k_const(ExactRational(1)) + c * c;
        const X inv_q0 = rec(q0);
        const X two_c = k_const(ExactRational(2)) * c;
        std::vector<X> g;
        for (int k = 0; k + 1 <= degree; ++k) {
            X num = k == 0 ? k_const(ExactRational(1)) : k_const(ExactRational(0));
            if (k >= 1) {
                num = num - two_c * g[static_cast<std::size_t>(k - 1)];
            }
            if (k >= 2) {
                num = num - g[static_cast<std::size_t>(k - 2)];
            }
            g.push_back(num * inv_q0);
            a.push_back(g.back() * k_const(ExactRational(1, k + 1)));
        }
        break;
    }
    case AnalyticOp::tan: {
        // T' = 1 + T^2, so (k+1) T_{k+1} = [k==0] + sum_j T_j T_{k-j}.
        a.push_back(tan(c));
        for (int k = 0; k + 1 <= degree; ++k) {
            X s = k == 0 ? k_const(ExactRational(1)) : k_const(ExactRational(0));
            for (int j = 0; j <= k; ++j) {
                s = s + a[static_cast<std::size_t>(j)] * a[static_cast<std::size_t>(k - j)];
            }
            a.push_back(s * k_const(ExactRational(1, k + 1)));
        }
        break;
    }
    }
    return a;
}

} // namespace vcalc

#endif
