#ifndef VCALC_SOLVERS_HPP
#define VCALC_SOLVERS_HPP

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vcalc/bounds.hpp"
#include "vcalc/errors.hpp"
#include "vcalc/expression.hpp"
#include "vcalc/function_patch.hpp"
#include "vcalc/linear_algebra.hpp"
#include "vcalc/taylor_model.hpp"

namespace vcalc {

using Box = std::vector<ValidatedBounds>;

struct SolverConfig {
    double tolerance = 1e-12;
    int max_steps = 32;
    // Branch-and-prune switches to Newton iteration below this fraction of the
    // domain width, and gives up after this depth.
    double newton_fraction = 0.1;
    int max_depth = 40;
    // Sweeper used by the function-level (implicit, crossing-time) operators.
    Sweeper sweeper = Sweeper();

    void validate() const {
        if (!(tolerance > 0)) {
            throw UsageError("solver tolerance must be positive");
        }
        if (max_steps < 1) {
            throw UsageError("solver max_steps must be at least 1");
        }
    }
};

struct SolutionBox {
    Box box;
    bool unique = false;
};

// solve_all ran out of depth with boxes it could neither verify nor prune.
class PartialResultError : public std::runtime_error {
  public:
    PartialResultError(std::vector<SolutionBox> verified, std::vector<Box> unresolved)
        : std::runtime_error("solve_all left " + std::to_string(unresolved.size()) + " unresolved boxes"),
          verified_(std::move(verified)),
          unresolved_(std::move(unresolved)) {}
    const std::vector<SolutionBox>& verified() const noexcept { return verified_; }
    const std::vector<Box>& unresolved() const noexcept { return unresolved_; }

  private:
    std::vector<SolutionBox> verified_;
    std::vector<Box> unresolved_;
};

namespace detail {

inline double box_width(const Box& b) {
    double w = 0;
    for (const auto& s : b) {
        w = std::max(w, s.width());
    }
    return w;
}

inline Box box_midpoint(const Box& b) {
    Box m;
    for (const auto& s : b) {
        m.emplace_back(s.midpoint());
    }
    return m;
}

inline bool box_inside(const Box& inner, const Box& outer) {
    for (std::size_t i = 0; i < inner.size(); ++i) {
        const bool degenerate = outer[i].is_point();
        if (degenerate ? !(inner[i] == outer[i]) : !inner[i].inside(outer[i])) {
            return false;
        }
    }
    return true;
}

inline std::optional<Box> box_intersection(const Box& a, const Box& b) {
    Box r;
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto s = intersection(a[i], b[i]);
        if (!s) {
            return std::nullopt;
        }
        r.push_back(*s);
    }
    return r;
}

inline Box box_hull(const Box& a, const Box& b) {
    Box r;
    for (std::size_t i = 0; i < a.size(); ++i) {
        r.push_back(hull(a[i], b[i]));
    }
    return r;
}

// Boxes that overlap or whose gap is at most tol in every coordinate.
inline bool boxes_touch(const Box& a, const Box& b, double tol) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].lower() > rounding::add_up(b[i].upper(), tol) || b[i].lower() > rounding::add_up(a[i].upper(), tol)) {
            return false;
        }
    }
    return true;
}

inline bool lower_corner_less(const Box& a, const Box& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].lower() != b[i].lower()) {
            return a[i].lower() < b[i].lower();
        }
    }
    return false;
}

} // namespace detail

// A square system f together with its symbolic Jacobian.
class EquationSystem {
  public:
    explicit EquationSystem(ExpressionFunction f) : f_(std::move(f)), jacobian_(f_.jacobian()) {
        if (f_.argument_size() != f_.result_size()) {
            throw UsageError("equation system must be square");
        }
    }
    const ExpressionFunction& function() const noexcept { return f_; }
    std::size_t size() const noexcept { return f_.argument_size(); }

    Vector<ValidatedBounds> values(const Box& y) const {
        return Vector<ValidatedBounds>(f_.evaluate(y, ValidatedBounds(0.0)), ValidatedBounds(0.0));
    }

    Matrix<ValidatedBounds> jacobian(const Box& y) const {
        const auto j = jacobian_.evaluate(y, ValidatedBounds(0.0));
        const std::size_t n = size();
        Matrix<ValidatedBounds> m(n, n, ValidatedBounds(0.0));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < n; ++k) {
                m(i, k) = j[i * n + k];
            }
        }
        return m;
    }

  private:
    ExpressionFunction f_;
    ExpressionFunction jacobian_;
};

// IN = yc - [Df(y)]^{-1} f(yc); nullopt when the interval Jacobian contains a
// singular matrix.
inline std::optional<Box> newton_step(const EquationSystem& s, const Box& y, const Box& yc) {
    const auto fc = s.values(yc);
    Vector<ValidatedBounds> delta;
    try {
        delta = interval_gauss_solve(s.jacobian(y), fc);
    } catch (const SingularMatrixError&) {
        return std::nullopt;
    }
    Box r;
    for (std::size_t i = 0; i < y.size(); ++i) {
        r.push_back(yc[i] - delta[i]);
    }
    return r;
}

inline std::optional<Box> newton_step(const ExpressionFunction& f, const Box& y, const Box& yc) {
    return newton_step(EquationSystem(f), y, yc);
}

// Kr = yc - C f(yc) + (I - C Df(y))(y - yc).
inline Box krawczyk_step(const EquationSystem& s, const Box& y, const Box& yc, const Matrix<double>& c) {
    const std::size_t n = y.size();
    if (c.rows() != n || c.cols() != n) {
        throw UsageError("preconditioner has the wrong shape");
    }
    Matrix<ValidatedBounds> cb(n, n, ValidatedBounds(0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            cb(i, k) = ValidatedBounds(c(i, k));
        }
    }
    const auto fc = s.values(yc);
    const auto cf = cb * fc;
    const auto m = Matrix<ValidatedBounds>::identity(n, ValidatedBounds(0.0)) - cb * s.jacobian(y);
    Vector<ValidatedBounds> d(n, ValidatedBounds(0.0));
    for (std::size_t i = 0; i < n; ++i) {
        d[i] = y[i] - yc[i];
    }
    const auto md = m * d;
    Box r;
    for (std::size_t i = 0; i < n; ++i) {
        r.push_back(yc[i] - cf[i] + md[i]);
    }
    return r;
}

inline Box krawczyk_step(const ExpressionFunction& f, const Box& y, const Box& yc, const Matrix<double>& c) {
    return krawczyk_step(EquationSystem(f), y, yc, c);
}

// Inverse of the midpoint Jacobian, used as the Krawczyk preconditioner.
inline Matrix<double> midpoint_inverse(const EquationSystem& s, const Box& y) {
    const auto j = s.jacobian(y);
    Matrix<double> m(j.rows(), j.cols(), 0.0);
    for (std::size_t i = 0; i < j.rows(); ++i) {
        for (std::size_t k = 0; k < j.cols(); ++k) {
            m(i, k) = j(i, k).midpoint();
        }
    }
    return approximate_inverse(m);
}

namespace detail {

// Approximate root from point Newton iterates started at the midpoint of y,
// then a small box around it; a Newton (or Krawczyk) image inside that box
// and inside y proves a solution there.
inline std::optional<Box> inflate_and_verify(const EquationSystem& s, const Box& y) {
    const std::size_t n = y.size();
    std::vector<double> x;
    for (const auto& side : y) {
        x.push_back(side.midpoint());
    }
    std::vector<double> last(n, 0.0);
    try {
        for (int k = 0; k < 8; ++k) {
            Box px;
            for (double v : x) {
                px.emplace_back(v);
            }
            const auto fx = s.values(px);
            const Matrix<double> m = midpoint_inverse(s, px);
            for (std::size_t i = 0; i < n; ++i) {
                double d = 0;
                for (std::size_t j = 0; j < n; ++j) {
                    d += m(i, j) * fx[j].midpoint();
                }
                last[i] = d;
                x[i] -= d;
            }
        }
    } catch (const std::exception&) {
        return std::nullopt;
    }
    for (int attempt = 0; attempt < 4; ++attempt) {
        Box z;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = std::ldexp(std::max({std::fabs(last[i]), std::fabs(x[i]) * 0x1p-44, 0x1p-60}), 4 * attempt);
            z.emplace_back(rounding::sub_down(x[i], r), rounding::add_up(x[i], r));
        }
        const Box zc = box_midpoint(z);
        std::optional<Box> next = newton_step(s, z, zc);
        if (!next) {
            try {
                next = krawczyk_step(s, z, zc, midpoint_inverse(s, z));
            } catch (const SingularMatrixError&) {
                continue;
            }
        }
        if (box_inside(*next, z) && box_inside(*next, y)) {
            return next;
        }
    }
    return std::nullopt;
}

} // namespace detail

// Contract-and-intersect iteration y <- C(y) /\ y with the Newton step,
// falling back to Krawczyk where the interval Jacobian is singular.
inline SolutionBox solve(const EquationSystem& s, const Box& domain, const SolverConfig& cfg = {}) {
    cfg.validate();
    if (domain.size() != s.size()) {
        throw UsageError("domain dimension differs from the system size");
    }
    Box y = domain;
    bool unique = false;
    for (int step = 0; step < cfg.max_steps; ++step) {
        for (const auto& v : s.values(y)) {
            if (!v.contains_zero()) {
                throw NoSolutionError("no solution in the box");
            }
        }
        const Box yc = detail::box_midpoint(y);
        std::optional<Box> next = newton_step(s, y, yc);
        if (!next) {
            try {
                next = krawczyk_step(s, y, yc, midpoint_inverse(s, y));
            } catch (const SingularMatrixError&) {
                throw NoConvergenceError("singular Jacobian; cannot contract");
            }
        }
        if (detail::box_inside(*next, y)) {
            unique = true;
        }
        auto cut = detail::box_intersection(*next, y);
        if (!cut) {
            throw NoSolutionError("no solution in the box");
        }
        bool stalled = *cut == y;
        y = std::move(*cut);
        if (stalled && unique) {
            // interval steps make no progress on wide boxes; the single root in y
            // lies in any small box that verifies
            if (auto small = detail::inflate_and_verify(s, y); small && detail::box_width(*small) < detail::box_width(y)) {
                y = std::move(*small);
                stalled = false;
            }
        }
        if (detail::box_width(y) <= cfg.tolerance || (stalled && unique)) {
            return {y, unique};
        }
        if (stalled) {
            break;
        }
    }
    if (unique) {
        return {y, true};
    }
    throw NoConvergenceError("interval Newton iteration did not converge");
}

inline SolutionBox solve(const ExpressionFunction& f, const Box& domain, const SolverConfig& cfg = {}) {
    return solve(EquationSystem(f), domain, cfg);
}

// Branch and prune over the domain: bisect the widest side, discard boxes
// whose image excludes zero, and run the Newton iteration on small boxes.
// Overlapping results are hulled and solved again. Throws
// PartialResultError if boxes remain undecided at the depth limit.
inline std::vector<SolutionBox> solve_all(const EquationSystem& s, const Box& domain, const SolverConfig& cfg = {}) {
    cfg.validate();
    const double domain_width = detail::box_width(domain);
    const double switch_width = domain_width * cfg.newton_fraction;
    std::vector<SolutionBox> found;
    std::vector<Box> unresolved;
    std::vector<std::pair<Box, int>> stack{{domain, 0}};
    while (!stack.empty()) {
        auto [box, depth] = std::move(stack.back());
        stack.pop_back();
        bool may_contain_root = true;
        try {
            for (const auto& v : s.values(box)) {
                if (!v.contains_zero()) {
                    may_contain_root = false;
                    break;
                }
            }
        } catch (const DomainError&) {
            // partially undefined here; keep splitting
        }
        if (!may_contain_root) {
            continue;
        }
        if (detail::box_width(box) < switch_width || domain_width == 0) {
            try {
                found.push_back(solve(s, box, cfg));
                continue;
            } catch (const NoSolutionError&) {
                continue;
            } catch (const NoConvergenceError&) {
            } catch (const DomainError&) {
            }
        }
        if (depth >= cfg.max_depth || detail::box_width(box) == 0) {
            unresolved.push_back(box);
            continue;
        }
        const BoxDomain b(box);
        auto [lo, hi] = b.bisect(b.widest());
        stack.emplace_back(hi.sides(), depth + 1);
        stack.emplace_back(lo.sides(), depth + 1);
    }

    // merge boxes around the same root
    bool merged = true;
    while (merged) {
        merged = false;
        for (std::size_t i = 0; i < found.size() && !merged; ++i) {
            for (std::size_t j = i + 1; j < found.size() && !merged; ++j) {
                if (!detail::boxes_touch(found[i].box, found[j].box, cfg.tolerance)) {
                    continue;
                }
                const Box h = detail::box_hull(found[i].box, found[j].box);
                SolutionBox m{h, false};
                try {
                    m = solve(s, h, cfg);
                } catch (const std::runtime_error&) {
                }
                found[i] = m;
                found.erase(found.begin() + static_cast<std::ptrdiff_t>(j));
                merged = true;
            }
        }
    }
    std::sort(found.begin(), found.end(),
              [](const SolutionBox& a, const SolutionBox& b) { return detail::lower_corner_less(a.box, b.box); });
    if (!unresolved.empty()) {
        throw PartialResultError(std::move(found), std::move(unresolved));
    }
    return found;
}

inline std::vector<SolutionBox> solve_all(const ExpressionFunction& f, const Box& domain,
                                          const SolverConfig& cfg = {}) {
    return solve_all(EquationSystem(f), domain, cfg);
}

namespace detail {

inline std::vector<UnitTaylorModel> midpoints(const std::vector<UnitTaylorModel>& h) {
    std::vector<UnitTaylorModel> r = h;
    for (auto& m : r) {
        m.set_error(0.0);
    }
    return r;
}

inline double total_error(const std::vector<UnitTaylorModel>& h) {
    double e = 0;
    for (const auto& m : h) {
        e = std::max(e, m.error());
    }
    return e;
}

inline bool all_refine(const std::vector<UnitTaylorModel>& a, const std::vector<UnitTaylorModel>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!refines(a[i], b[i])) {
            return false;
        }
    }
    return true;
}

// Iterates h <- step(h) until a step refines its input, then keeps iterating
// while the error shrinks by at least 10%.
template <class Step>
std::vector<UnitTaylorModel> refine_iteration(std::vector<UnitTaylorModel> h, int max_steps, const Step& step) {
    bool proven = false;
    std::vector<UnitTaylorModel> best;
    for (int k = 0; k < max_steps; ++k) {
        std::vector<UnitTaylorModel> next;
        try {
            next = step(h);
        } catch (const SingularMatrixError&) {
            break;
        } catch (const DomainError&) {
            break;
        }
        if (!proven && all_refine(next, h)) {
            proven = true;
            best = next;
            h = std::move(next);
            continue;
        }
        if (proven) {
            const double before = total_error(best);
            const double after = total_error(next);
            if (after < before) {
                best = next;
            }
            if (!(after <= 0.9 * before)) {
                break;
            }
        }
        h = std::move(next);
    }
    if (!proven) {
        throw UnknownSolutionError("parametrised Newton iteration did not refine its starting set");
    }
    return best;
}

} // namespace detail

// Solution y = h(x) of f(x, y) = 0 for x in the parameter box and y in the
// candidate box, by the parametrised Newton operator
//   h -> hc - [D2 f(x, h(x))]^{-1} f(x, hc(x))
// over Taylor models, where hc is the midpoint polynomial of h. The linear
// solve is preconditioned by the inverse of the midpoint Jacobian.
inline FunctionPatch implicit(const ExpressionFunction& f, const BoxDomain& parameters, const Box& candidates,
                              const SolverConfig& cfg = {}) {
    cfg.validate();
    const std::size_t n = parameters.dimension();
    const std::size_t m = candidates.size();
    if (f.argument_size() != n + m || f.result_size() != m) {
        throw UsageError("implicit function needs f: R^(n+m) -> R^m");
    }
    std::vector<Expression> jac;
    for (const auto& c : f.components()) {
        for (std::size_t j = 0; j < m; ++j) {
            jac.push_back(c.derivative(n + j));
        }
    }
    const ExpressionFunction d2f(n + m, std::move(jac));
    const FunctionPatch id = FunctionPatch::identity(parameters, cfg.sweeper);
    const UnitTaylorModel zero = UnitTaylorModel::constant(n, 0.0, cfg.sweeper);

    std::vector<UnitTaylorModel> h;
    for (const auto& y : candidates) {
        h.push_back(UnitTaylorModel::constant(n, y, cfg.sweeper));
    }
    auto args = [&](const std::vector<UnitTaylorModel>& y) {
        std::vector<UnitTaylorModel> a = id.models();
        a.insert(a.end(), y.begin(), y.end());
        return a;
    };
    auto step = [&](const std::vector<UnitTaylorModel>& hh) {
        const auto hc = detail::midpoints(hh);
        const auto fv = f.evaluate(args(hc), zero);
        const auto jv = d2f.evaluate(args(hh), zero);
        Matrix<UnitTaylorModel> jm(m, m, zero);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                jm(i, j) = jv[i * m + j];
            }
        }
        // precondition by the inverse of the midpoint Jacobian
        Matrix<double> mid(m, m, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                mid(i, j) = jm(i, j).range().midpoint();
            }
        }
        const Matrix<double> c = approximate_inverse(mid);
        Matrix<UnitTaylorModel> cj(m, m, zero);
        Vector<UnitTaylorModel> cf(m, zero);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t k = 0; k < m; ++k) {
                for (std::size_t j = 0; j < m; ++j) {
                    cj(i, j) = cj(i, j) + jm(k, j) * c(i, k);
                }
                cf[i] = cf[i] + fv[k] * c(i, k);
            }
        }
        const auto delta = gauss_solve(cj, cf);
        std::vector<UnitTaylorModel> next;
        for (std::size_t i = 0; i < m; ++i) {
            next.push_back(hc[i] - delta[i]);
        }
        return next;
    };
    return {parameters, detail::refine_iteration(std::move(h), cfg.max_steps, step)};
}

// Crossing time gamma(x) with g(psi(x, gamma(x))) = 0 for a flow patch psi on
// D x [t0, t1], by the iteration
//   gamma <- gc - g(psi(x, gc(x))) / (grad g . f)(psi(x, gamma(x))).
inline FunctionPatch crossing_time(const ExpressionFunction& field, const Expression& guard, const FunctionPatch& flow,
                                   const SolverConfig& cfg = {}) {
    cfg.validate();
    const std::size_t n = field.argument_size();
    if (field.result_size() != n || guard.argument_size() != n || flow.argument_size() != n + 1 ||
        flow.result_size() != n) {
        throw UsageError("crossing time needs a field R^n -> R^n, a guard on R^n and a flow on R^n x R");
    }
    Expression lie = Expression::constant(n, ExactRational(0));
    for (std::size_t i = 0; i < n; ++i) {
        lie = lie + guard.derivative(i) * field[i];
    }
    const ExpressionFunction g(n, {guard});
    const ExpressionFunction lg(n, {lie});
    std::vector<ValidatedBounds> sides = flow.domain().sides();
    const ValidatedBounds times = sides.back();
    sides.pop_back();
    const BoxDomain d(sides);
    const FunctionPatch id = FunctionPatch::identity(d, cfg.sweeper);

    auto at_time = [&](const UnitTaylorModel& t) { return compose(flow, join(id, FunctionPatch(d, {t}))); };
    auto step = [&](const std::vector<UnitTaylorModel>& gam) {
        const auto gc = detail::midpoints(gam);
        const FunctionPatch num = at_time(gc[0]).apply(g);
        const FunctionPatch den = at_time(gam[0]).apply(lg);
        return std::vector<UnitTaylorModel>{gc[0] - num.model(0) / den.model(0)};
    };
    // start strictly inside the time interval so rounding cannot push the
    // composed argument out of the flow's domain
    const double margin = rounding::mul_up(times.width(), 0x1p-30);
    const ValidatedBounds start_times(rounding::add_up(times.lower(), margin), rounding::sub_down(times.upper(), margin));
    std::vector<UnitTaylorModel> start{UnitTaylorModel::constant(n, start_times, cfg.sweeper)};
    return {d, detail::refine_iteration(std::move(start), cfg.max_steps, step)};
}

} // namespace vcalc

#endif
