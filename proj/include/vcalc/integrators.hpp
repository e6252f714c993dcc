#ifndef VCALC_INTEGRATORS_HPP
#define VCALC_INTEGRATORS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "vcalc/bounds.hpp"
#include "vcalc/differential.hpp"
#include "vcalc/errors.hpp"
#include "vcalc/expression.hpp"
#include "vcalc/function_patch.hpp"
#include "vcalc/solvers.hpp"
#include "vcalc/taylor_model.hpp"

namespace vcalc {

// B contains every trajectory from D over [0, h].
struct FlowBound {
    Box box;
    double step = 0;
};

enum class IntegratorKind { picard, taylor };

struct IntegratorConfig {
    // Steps whose model error exceeds this are retried with half the step.
    double tolerance = 1e-3;
    // Taylor integrator: temporal order and spatial order.
    int order = 8;
    int spatial_order = 6;
    // Picard integrator: iteration cap.
    int max_iterations = 12;
    // Refinements B <- D + [0,h] f(B) applied to a certified bound.
    int bound_refinements = 4;
    Sweeper sweeper = Sweeper::graded(10, Sweeper::kDefaultThreshold);

    void validate() const {
        if (!(tolerance > 0)) {
            throw UsageError("integrator tolerance must be positive");
        }
        if (order < 1 || spatial_order < 1 || max_iterations < 1 || bound_refinements < 0) {
            throw UsageError("integrator orders and iteration counts must be positive");
        }
    }
};

struct FlowStep {
    double t0 = 0;
    double t1 = 0;
    FunctionPatch patch;
};

namespace detail {

inline void check_field(const ExpressionFunction& f, const Box& d) {
    if (f.argument_size() != f.result_size()) {
        throw UsageError("vector field must map R^n to R^n");
    }
    if (d.size() != f.argument_size()) {
        throw UsageError("initial box dimension differs from the field");
    }
}

// D + [0,h] hull(f(B))
inline Box euler_image(const ExpressionFunction& f, const Box& d, double h, const Box& b) {
    const auto fb = f.evaluate(b, ValidatedBounds(0.0));
    const ValidatedBounds times(0.0, h);
    Box r;
    for (std::size_t i = 0; i < d.size(); ++i) {
        r.push_back(d[i] + times * fb[i]);
    }
    return r;
}

} // namespace detail

inline bool certifies_bound(const ExpressionFunction& f, const Box& d, double h, const Box& b) {
    try {
        const Box img = detail::euler_image(f, d, h, b);
        for (std::size_t i = 0; i < d.size(); ++i) {
            if (!img[i].subset_of(b[i])) {
                return false;
            }
        }
        return true;
    } catch (const DomainError&) {
        return false;
    }
}

// Halves the step from h until D^ + [0,2h] hull(f(D^)), with D^ = c + 2(D - c),
// passes the bound certificate.
inline FlowBound find_bound(const ExpressionFunction& f, const Box& d, double h, const IntegratorConfig& cfg = {}) {
    detail::check_field(f, d);
    cfg.validate();
    if (!(h > 0)) {
        throw UsageError("step must be positive");
    }
    Box wide;
    for (const auto& s : d) {
        const ValidatedBounds c(s.midpoint());
        wide.push_back(c + ValidatedBounds(2.0) * (s - c));
        wide.back() = hull(wide.back(), s);
    }
    std::vector<ValidatedBounds> fw;
    try {
        fw = f.evaluate(wide, ValidatedBounds(0.0));
    } catch (const DomainError& e) {
        throw NoBoundError(std::string("field undefined near the initial box: ") + e.what());
    }
    const double smallest = std::ldexp(h, -20);
    for (double step = h; step >= smallest; step /= 2) {
        Box b;
        const ValidatedBounds times(0.0, 2 * step);
        for (std::size_t i = 0; i < d.size(); ++i) {
            b.push_back(wide[i] + times * fw[i]);
        }
        if (!certifies_bound(f, d, step, b)) {
            continue;
        }
        for (int k = 0; k < cfg.bound_refinements; ++k) {
            const Box next = detail::euler_image(f, d, step, b);
            if (!certifies_bound(f, d, step, next)) {
                break;
            }
            b = next;
        }
        return {b, step};
    }
    throw NoBoundError("no bound found for any step above 2^-20 of the request");
}

namespace detail {

inline BoxDomain space_time(const Box& d, double h) {
    Box sides = d;
    sides.emplace_back(0.0, h);
    return BoxDomain(sides);
}

} // namespace detail

// Picard iteration phi <- x + int_0^t f(phi) over function patches on
// D x [0, h], starting from the constant bound.
inline FunctionPatch picard_flow_step(const ExpressionFunction& f, const Box& d, const FlowBound& bound,
                                      const IntegratorConfig& cfg = {}) {
    detail::check_field(f, d);
    cfg.validate();
    const std::size_t n = d.size();
    const BoxDomain e = detail::space_time(d, bound.step);
    const FunctionPatch id = FunctionPatch::identity(e, cfg.sweeper);
    std::vector<UnitTaylorModel> phi;
    for (const auto& b : bound.box) {
        phi.push_back(UnitTaylorModel::constant(n + 1, b, cfg.sweeper));
    }
    auto step = [&](const std::vector<UnitTaylorModel>& p) {
        const FunctionPatch integral = FunctionPatch(e, p).apply(f).antiderivative(n, 0.0);
        std::vector<UnitTaylorModel> next;
        for (std::size_t i = 0; i < n; ++i) {
            next.push_back((id.model(i) + integral.model(i)).swept());
        }
        return next;
    };
    try {
        return {e, detail::refine_iteration(std::move(phi), cfg.max_iterations, step)};
    } catch (const UnknownSolutionError&) {
        throw IntegrationFailure("Picard iteration did not refine its starting model", 0);
    }
}

namespace detail {

using Jet = Differential<ValidatedBounds>;

// Copy of a jet with an extra (time) variable appended and a new degree cap.
inline Jet append_variable(const Jet& a, int degree) {
    const std::size_t n = a.argument_size();
    Jet r(n + 1, degree, ValidatedBounds(0.0));
    for (const auto& [alpha, c] : a.terms()) {
        if (alpha.degree() <= degree) {
            r.set(alpha.with_inserted(n), c);
        }
    }
    return r;
}

// Taylor coefficients in the last variable of the solution of z' = f(z) with
// z(0) = init, by Picard iteration on jets.
inline std::vector<Jet> time_series(const ExpressionFunction& f, const std::vector<Jet>& init, int iterations) {
    const std::size_t t = init.front().argument_size() - 1;
    const Jet zero(init.front().argument_size(), init.front().degree(), ValidatedBounds(0.0));
    std::vector<Jet> z = init;
    for (int k = 0; k < iterations; ++k) {
        const auto fz = f.evaluate(z, zero);
        for (std::size_t i = 0; i < z.size(); ++i) {
            z[i] = init[i] + fz[i].antiderivative(t);
        }
    }
    for (const auto& c : z) {
        for (const auto& term : c.terms()) {
            if (!std::isfinite(term.second.lower()) || !std::isfinite(term.second.upper())) {
                throw IntegrationFailure("non-finite flow derivative", 0);
            }
        }
    }
    return z;
}

inline bool jet_inside(const Jet& a, const Jet& b) {
    for (const auto& t : a.terms()) {
        if (!t.second.subset_of(b[t.first])) {
            return false;
        }
    }
    for (const auto& t : b.terms()) {
        if (!a[t.first].subset_of(t.second)) {
            return false;
        }
    }
    return true;
}

inline Jet jet_inflate(const Jet& a, const Jet& b) {
    Jet r = a;
    for (const auto& [alpha, c] : b.terms()) {
        r.set(alpha, hull(r[alpha], c));
    }
    Jet s = r;
    for (const auto& [alpha, c] : r.terms()) {
        const double w = rounding::add_up(rounding::mul_up(c.width(), 0.125), 0x1p-40);
        s.set(alpha, ValidatedBounds(rounding::sub_down(c.lower(), w), rounding::add_up(c.upper(), w)));
    }
    return s;
}

// Bound on the spatial jet (derivatives up to the given degree in the listed
// coordinates) of every trajectory from D over [0, h]. The jet satisfies the
// field's equation in jet arithmetic, so the bound certificate applies to its
// non-constant coefficients once the values are confined to the flow bound.
inline std::vector<Jet> jet_bound(const ExpressionFunction& f, const Box& d, const std::vector<std::size_t>& vars,
                                  int degree, const FlowBound& bound) {
    const std::size_t n = d.size();
    const std::size_t nv = vars.size();
    std::vector<Jet> y0;
    for (std::size_t i = 0; i < n; ++i) {
        Jet j(nv, degree, ValidatedBounds(0.0));
        j.set(MultiIndex(nv), d[i]);
        for (std::size_t v = 0; v < nv; ++v) {
            if (vars[v] == i && degree >= 1) {
                j.set(MultiIndex::unit(nv, v), ValidatedBounds(1.0));
            }
        }
        y0.push_back(j);
    }
    const ValidatedBounds times(0.0, bound.step);
    const Jet zero(nv, degree, ValidatedBounds(0.0));
    auto image = [&](const std::vector<Jet>& b) {
        const auto fb = f.evaluate(b, zero);
        std::vector<Jet> r;
        for (std::size_t i = 0; i < n; ++i) {
            r.push_back(y0[i] + times * fb[i]);
            // the values are already known to stay in the flow bound
            r.back().set(MultiIndex(nv), bound.box[i]);
        }
        return r;
    };
    auto inside = [&](const std::vector<Jet>& a, const std::vector<Jet>& b) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!jet_inside(a[i], b[i])) {
                return false;
            }
        }
        return true;
    };
    std::vector<Jet> b = y0;
    for (std::size_t i = 0; i < n; ++i) {
        b[i].set(MultiIndex(nv), bound.box[i]);
    }
    for (int attempt = 0; attempt < 40; ++attempt) {
        std::vector<Jet> next;
        try {
            next = image(b);
        } catch (const DomainError&) {
            break;
        }
        if (inside(next, b)) {
            for (int k = 0; k < 2; ++k) {
                const auto again = image(next);
                if (!inside(again, next)) {
                    break;
                }
                next = again;
            }
            return next;
        }
        // plain iterates approach the fixed point from inside; every fifth
        // attempt inflates the hull so the next image can land strictly inside
        if (attempt % 5 == 4) {
            for (std::size_t i = 0; i < n; ++i) {
                b[i] = jet_inflate(b[i], next[i]);
            }
        } else {
            b = std::move(next);
        }
    }
    throw IntegrationFailure("no bound for the spatial derivatives of the flow", 0);
}

inline FunctionPatch taylor_expansion(const ExpressionFunction& f, const Box& d, const FlowBound& bound,
                                      const IntegratorConfig& cfg) {
    using detail::Jet;
    const std::size_t n = d.size();
    const double h = bound.step;
    const BoxDomain e = detail::space_time(d, h);
    const ScalingMap scaling(e);

    // spatial jet variables for the coordinates of positive width
    std::vector<std::size_t> vars;
    for (std::size_t i = 0; i < n; ++i) {
        if (scaling.radius(i) > 0) {
            vars.push_back(i);
        }
    }
    const std::size_t nv = vars.size();
    const int m = nv == 0 ? 0 : cfg.spatial_order;
    const int order = cfg.order;
    const int degree = m + order;

    std::vector<Jet> centre_init;
    for (std::size_t i = 0; i < n; ++i) {
        Jet j(nv + 1, degree, ValidatedBounds(0.0));
        j.set(MultiIndex(nv + 1), ValidatedBounds(scaling.centre(i)));
        for (std::size_t v = 0; v < nv; ++v) {
            if (vars[v] == i) {
                j.set(MultiIndex::unit(nv + 1, v), ValidatedBounds(1.0));
            }
        }
        centre_init.push_back(j);
    }
    const auto centre = detail::time_series(f, centre_init, order + 1);

    std::vector<Jet> range_init;
    for (const auto& j : detail::jet_bound(f, d, vars, m, bound)) {
        range_init.push_back(detail::append_variable(j, degree));
    }
    const auto range = detail::time_series(f, range_init, order + 1);

    // unit-box monomials: dx_v = r z_v, t = (h/2)(1 + z_t)
    const Sweeper sw = cfg.sweeper;
    std::vector<std::vector<UnitTaylorModel>> powers(nv + 1);
    std::vector<double> scale(nv + 1);
    for (std::size_t v = 0; v <= nv; ++v) {
        UnitTaylorModel base = v < nv ? UnitTaylorModel::coordinate(n + 1, vars[v], sw) * ValidatedBounds(scaling.radius(vars[v]))
                                      : (UnitTaylorModel::coordinate(n + 1, n, sw) + ValidatedBounds(1.0)) *
                                            ValidatedBounds(h / 2);
        scale[v] = v < nv ? scaling.radius(vars[v]) : h;
        powers[v].push_back(UnitTaylorModel::constant(n + 1, 1.0, sw));
        const int top = v < nv ? m : order;
        for (int k = 1; k <= top; ++k) {
            powers[v].push_back(powers[v].back() * base);
        }
    }

    // with no spatial variables the only remainder is in time
    auto boundary = [&](int spatial, int k) { return (nv > 0 && spatial == m) || k == order; };
    std::vector<UnitTaylorModel> models;
    for (std::size_t i = 0; i < n; ++i) {
        UnitTaylorModel sum = UnitTaylorModel::constant(n + 1, 0.0, sw);
        ErrorSum extra;
        for (const auto& [alpha, c] : centre[i].terms()) {
            const int k = alpha[nv];
            const int spatial = alpha.degree() - k;
            if (spatial > m || k > order) {
                continue;
            }
            UnitTaylorModel term = UnitTaylorModel::constant(n + 1, c, sw);
            double sup = 1.0;
            for (std::size_t v = 0; v <= nv; ++v) {
                if (alpha[v] > 0) {
                    term = term * powers[v][static_cast<std::size_t>(alpha[v])];
                    for (int p = 0; p < alpha[v]; ++p) {
                        sup = rounding::mul_up(sup, scale[v]);
                    }
                }
            }
            if (boundary(spatial, k)) {
                const ValidatedBounds big = range[i][alpha];
                const double diff =
                    std::max(rounding::sub_up(big.upper(), c.lower()), rounding::sub_up(c.upper(), big.lower()));
                extra += rounding::mul_up(diff, sup);
            }
            sum = sum + term;
        }
        // boundary terms absent from the centre expansion
        for (const auto& [alpha, big] : range[i].terms()) {
            const int k = alpha[nv];
            const int spatial = alpha.degree() - k;
            if (spatial > m || k > order || !boundary(spatial, k)) {
                continue;
            }
            bool present = false;
            for (const auto& t : centre[i].terms()) {
                present = present || t.first == alpha;
            }
            if (present) {
                continue;
            }
            double sup = 1.0;
            for (std::size_t v = 0; v <= nv; ++v) {
                for (int p = 0; p < alpha[v]; ++p) {
                    sup = rounding::mul_up(sup, scale[v]);
                }
            }
            extra += rounding::mul_up(big.mag(), sup);
        }
        sum.add_error(extra.value());
        models.push_back(sum.swept());
    }
    return {e, std::move(models)};
}

} // namespace detail

// Taylor expansion of the flow about (x_c, 0):
//   phi(x, t) = sum c_{a,k} (x - x_c)^a t^k +/- sum |C_{a,k} - c_{a,k}| |x - x_c|^a |t|^k
// over |a| <= m, k <= n, the error sum running over |a| = m or k = n. Centre
// coefficients c come from jets at (x_c, 0); C from jets over B x [0, h].
//
// The interval coefficients only need to hold over the flow tube, so a second
// pass recomputes them over the range of the first expansion when it is
// tighter than B.
inline FunctionPatch taylor_flow_step(const ExpressionFunction& f, const Box& d, const FlowBound& bound,
                                      const IntegratorConfig& cfg = {}) {
    detail::check_field(f, d);
    cfg.validate();
    FunctionPatch first = detail::taylor_expansion(f, d, bound, cfg);
    FlowBound tube = bound;
    const Box r = first.range();
    for (std::size_t i = 0; i < d.size(); ++i) {
        const auto meet = intersection(r[i], bound.box[i]);
        if (!meet) {
            return first;
        }
        tube.box[i] = *meet;
    }
    FunctionPatch second;
    try {
        second = detail::taylor_expansion(f, d, tube, cfg);
    } catch (const IntegrationFailure&) {
        return first;
    }
    double e1 = 0, e2 = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        e1 = std::max(e1, first.model(i).error());
        e2 = std::max(e2, second.model(i).error());
    }
    return e2 < e1 ? second : first;
}

// One step of at most h: finds a bound, runs the chosen integrator, and
// halves the step while the step fails or its error exceeds the tolerance.
inline FunctionPatch flow_step(const ExpressionFunction& f, const Box& d, double h, IntegratorKind kind,
                               const IntegratorConfig& cfg = {}) {
    detail::check_field(f, d);
    cfg.validate();
    const double smallest = std::ldexp(h, -20);
    std::string last = "no step attempted";
    for (double step = h; step >= smallest;) {
        const FlowBound b = find_bound(f, d, step, cfg);
        try {
            FunctionPatch p = kind == IntegratorKind::taylor ? taylor_flow_step(f, d, b, cfg)
                                                            : picard_flow_step(f, d, b, cfg);
            double err = 0;
            for (const auto& m : p.models()) {
                err = std::max(err, m.error());
            }
            if (err <= cfg.tolerance || b.step / 2 < smallest) {
                return p;
            }
            last = "step error above tolerance";
        } catch (const IntegrationFailure& e) {
            last = e.what();
        }
        step = b.step / 2;
    }
    throw IntegrationFailure("step underflow: " + last, 0);
}

// Steps from X0 to time T, restarting each step from the hull of the final
// time slice of the previous one.
inline std::vector<FlowStep> flow(const ExpressionFunction& f, const Box& x0, double total, IntegratorKind kind,
                                  const IntegratorConfig& cfg = {}, double max_step = 1.0) {
    detail::check_field(f, x0);
    if (!(total > 0) || !(max_step > 0)) {
        throw UsageError("flow time and maximum step must be positive");
    }
    std::vector<FlowStep> steps;
    Box x = x0;
    double t = 0;
    while (t < total) {
        const int index = static_cast<int>(steps.size());
        FunctionPatch p;
        try {
            p = flow_step(f, x, std::min(max_step, total - t), kind, cfg);
        } catch (const IntegrationFailure& e) {
            throw IntegrationFailure(e.what(), index);
        } catch (const NoBoundError& e) {
            throw IntegrationFailure(e.what(), index);
        }
        const double h = p.domain()[x.size()].upper();
        const FunctionPatch last = p.slice(x.size(), h);
        x = last.range();
        const double t1 = t + h;
        steps.push_back({t, t1, std::move(p)});
        t = t1;
    }
    return steps;
}

} // namespace vcalc

#endif
