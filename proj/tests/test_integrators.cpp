#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ode_oracle.hpp"
#include "oracles.hpp"
#include "vcalc/integrators.hpp"

using namespace vcalc;
using Q = ExactRational;
using B = ValidatedBounds;
using F = ExpressionFunction;

namespace {

F fitzhugh_nagumo() {
    return ExpressionParser({"v", "w"}).parse_function({"v - v^3/3 - w + 0.1*3.5", "(v + 0.7 - 2.0*w)/12.5"});
}

void fitzhugh_nagumo_field(const oracle::State& y, oracle::State& dy) {
    dy.resize(2);
    dy[0] = y[0] - y[0] * y[0] * y[0] / 3 - y[1] + 0.35;
    dy[1] = (y[0] + 0.7 - 2.0 * y[1]) / 12.5;
}

F parse1(const char* text) { return ExpressionParser({"y"}).parse_function({text}); }

// the oracle is accurate to about 1e-12, so allow that much slack
bool near_contains(const B& b, double x) { return b.lower() - 1e-10 <= x && x <= b.upper() + 1e-10; }

bool contains(const B& b, const oracle::RationalInterval& r) { return b.contains(r.lo) && b.contains(r.hi); }

double step_of(const FunctionPatch& p) { return p.domain()[p.argument_size() - 1].upper(); }

} // namespace

TEST(FindBoundTest, Examples) {
    const auto zero = find_bound(parse1("0"), {B(0, 1)}, 1.0);
    EXPECT_EQ(zero.step, 1.0);
    EXPECT_TRUE(B(0, 1).subset_of(zero.box[0]));

    const auto lin = find_bound(parse1("y"), {B(0, 1)}, 0.25);
    EXPECT_EQ(lin.step, 0.25);
    EXPECT_TRUE(certifies_bound(parse1("y"), {B(0, 1)}, lin.step, lin.box));
    EXPECT_GE(lin.box[0].upper(), std::exp(0.25));

    const auto fn = find_bound(fitzhugh_nagumo(), {B(0.0), B(0.0)}, 1.0);
    EXPECT_LT(fn.step, 1.0);
    EXPECT_TRUE(certifies_bound(fitzhugh_nagumo(), {B(0.0), B(0.0)}, fn.step, fn.box));
}

TEST(FindBoundTest, Errors) {
    EXPECT_THROW(find_bound(parse1("y"), {B(0, 1)}, 0.0), UsageError);
    EXPECT_THROW(find_bound(parse1("y"), {B(0, 1), B(0, 1)}, 1.0), UsageError);
    // blows up in finite time from any start
    EXPECT_THROW(find_bound(parse1("1/(1 - y)"), {B(0.5, 1.5)}, 1.0), NoBoundError);
}

TEST(PicardTest, Examples) {
    const F zero = parse1("0");
    const auto b0 = find_bound(zero, {B(1.0)}, 1.0);
    const auto p0 = picard_flow_step(zero, {B(1.0)}, b0);
    EXPECT_LT(p0.model(0).error(), 1e-12);
    EXPECT_TRUE(p0.evaluate({B(1.0), B(0.7)})[0].contains(1.0));

    const F lin = parse1("y");
    const auto b = find_bound(lin, {B(1.0)}, 0.25);
    ASSERT_EQ(b.step, 0.25);
    const auto p = picard_flow_step(lin, {B(1.0)}, b);
    EXPECT_TRUE(contains(p.evaluate({B(1.0), B(0.25)})[0], oracle::exp_enclosure(Q(1, 4))));
}

TEST(PicardTest, NoRefinementIsFailure) {
    // the first image of a box that is not a bound does not refine it
    IntegratorConfig cfg;
    cfg.max_iterations = 1;
    const FlowBound fake{{B(0.99, 1.01)}, 0.25};
    EXPECT_THROW(picard_flow_step(parse1("y"), {B(1.0)}, fake, cfg), IntegrationFailure);
}

TEST(TaylorTest, Examples) {
    const F zero = ExpressionParser({"x", "y"}).parse_function({"0", "0"});
    const Box d{B(0, 1), B(-1, 1)};
    const auto b0 = find_bound(zero, d, 1.0);
    const auto p0 = taylor_flow_step(zero, d, b0);
    for (double x : {0.0, 0.25, 1.0}) {
        const auto v = p0.evaluate({B(x), B(-x), B(0.5)});
        EXPECT_TRUE(v[0].contains(x));
        EXPECT_TRUE(v[1].contains(-x));
        EXPECT_LT(v[0].width(), 1e-12);
    }

    const F lin = parse1("y");
    const auto b = find_bound(lin, {B(1.0)}, 0.25);
    const auto p = taylor_flow_step(lin, {B(1.0)}, b);
    EXPECT_LE(p.model(0).error(), 1e-6);
    EXPECT_TRUE(contains(p.evaluate({B(1.0), B(0.25)})[0], oracle::exp_enclosure(Q(1, 4))));
}

TEST(TaylorTest, SpatialDependence) {
    const F lin = ExpressionParser({"x", "y"}).parse_function({"-y", "x"});
    const Box d{B(0.9, 1.1), B(-0.1, 0.1)};
    const auto b = find_bound(lin, d, 0.25);
    const auto p = taylor_flow_step(lin, d, b);
    // rotation: (x cos t - y sin t, x sin t + y cos t)
    for (double x : {0.9, 1.0, 1.1}) {
        for (double y : {-0.1, 0.05}) {
            for (double t : {0.0, 0.1, b.step}) {
                const auto v = p.evaluate({B(x), B(y), B(t)});
                EXPECT_TRUE(near_contains(v[0], x * std::cos(t) - y * std::sin(t)));
                EXPECT_TRUE(near_contains(v[1], x * std::sin(t) + y * std::cos(t)));
            }
        }
    }
    EXPECT_LT(p.model(0).error(), 1e-3);
}

TEST(IntegratorComparison, TaylorAtLeastAsSharpAsPicard) {
    IntegratorConfig cfg;
    const F lin = parse1("y");
    const auto b = find_bound(lin, {B(1.0)}, 0.25, cfg);
    const auto p = picard_flow_step(lin, {B(1.0)}, b, cfg);
    const auto t = taylor_flow_step(lin, {B(1.0)}, b, cfg);
    EXPECT_LE(t.model(0).error(), p.model(0).error());

    // the Picard iterates are capped at the sweeper's degree 10, so the
    // matching Taylor expansion has time order 10
    cfg.order = 10;
    const Box origin{B(0.0), B(0.0)};
    const auto fb = find_bound(fitzhugh_nagumo(), origin, 0.25, cfg);
    const auto fp = picard_flow_step(fitzhugh_nagumo(), origin, fb, cfg);
    const auto ft = taylor_flow_step(fitzhugh_nagumo(), origin, fb, cfg);
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_LE(ft.model(i).error(), fp.model(i).error());
    }
}

TEST(FlowStepTest, FitzHughNagumoFromOrigin) {
    for (auto kind : {IntegratorKind::picard, IntegratorKind::taylor}) {
        const auto p = flow_step(fitzhugh_nagumo(), {B(0.0), B(0.0)}, 1.0, kind);
        const double h = step_of(p);
        EXPECT_GE(h, 0.125);
        EXPECT_LE(h, 0.5);
        const auto rng = p.range();
        // widths printed with the example run: 0.0980 and 0.0148
        EXPECT_LE(rng[0].width(), 4 * 0.09795573651);
        EXPECT_GE(rng[0].width(), 0.09795573651 / 4);
        EXPECT_LE(rng[1].width(), 4 * 0.014755761828);
        EXPECT_GE(rng[1].width(), 0.014755761828 / 4);
        for (int k = 0; k <= 9; ++k) {
            const double t = h * k / 9;
            const auto ref = oracle::trajectory_point(fitzhugh_nagumo_field, {0.0, 0.0}, t);
            const auto v = p.evaluate({B(0.0), B(0.0), B(t)});
            EXPECT_TRUE(near_contains(v[0], ref[0])) << t;
            EXPECT_TRUE(near_contains(v[1], ref[1])) << t;
            EXPECT_TRUE(near_contains(rng[0], ref[0]));
        }
    }
}

TEST(FlowStepTest, FitzHughNagumoUnitBox) {
    for (auto kind : {IntegratorKind::picard, IntegratorKind::taylor}) {
        const auto p = flow_step(fitzhugh_nagumo(), {B(0, 1), B(0, 1)}, 1.0, kind);
        EXPECT_LE(step_of(p), 0.125);
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(0, 1);
        for (int k = 0; k < 10; ++k) {
            const double v0 = u(rng), w0 = u(rng), t = step_of(p) * u(rng);
            const auto ref = oracle::trajectory_point(fitzhugh_nagumo_field, {v0, w0}, t);
            const auto v = p.evaluate({B(v0), B(w0), B(t)});
            EXPECT_TRUE(near_contains(v[0], ref[0]));
            EXPECT_TRUE(near_contains(v[1], ref[1]));
        }
    }
}

TEST(FlowTest, Examples) {
    const auto still = flow(parse1("0"), {B(2.0)}, 10.0, IntegratorKind::taylor);
    ASSERT_FALSE(still.empty());
    EXPECT_EQ(still.back().t1, 10.0);
    for (const auto& s : still) {
        EXPECT_TRUE(s.patch.range()[0].contains(2.0));
        EXPECT_LT(s.patch.range()[0].width(), 1e-12);
    }

    for (auto kind : {IntegratorKind::picard, IntegratorKind::taylor}) {
        const auto growth = flow(parse1("y"), {B(1.0)}, 1.0, kind);
        EXPECT_EQ(growth.back().t1, 1.0);
        const auto last = growth.back().patch.slice(1, growth.back().t1 - growth.back().t0).range();
        EXPECT_TRUE(contains(last[0], oracle::exp_enclosure(Q(1))));
    }

    const auto fn = flow(fitzhugh_nagumo(), {B(0.0), B(0.0)}, 2.0, IntegratorKind::taylor);
    const auto& s = fn.back();
    const auto end = s.patch.slice(2, s.t1 - s.t0).range();
    const auto ref = oracle::trajectory_point(fitzhugh_nagumo_field, {0.0, 0.0}, 2.0);
    EXPECT_TRUE(near_contains(end[0], ref[0]));
    EXPECT_TRUE(near_contains(end[1], ref[1]));
    for (std::size_t k = 1; k < fn.size(); ++k) {
        EXPECT_EQ(fn[k].t0, fn[k - 1].t1);
    }
}

TEST(FlowTest, Errors) {
    EXPECT_THROW(flow(parse1("y"), {B(1.0)}, 0.0, IntegratorKind::picard), UsageError);
    try {
        flow(parse1("y^2"), {B(1.0)}, 2.0, IntegratorKind::picard);
        FAIL() << "y' = y^2 from 1 blows up at t = 1";
    } catch (const IntegrationFailure& e) {
        EXPECT_GT(e.step(), 0);
    }
}

// Random polynomial fields: the reference trajectory from sampled initial
// points stays inside the patch evaluations, and phi(x, 0) contains x.
TEST(IntegratorProperties, FlowContainment) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0, 1);
    int checked = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 1 + trial % 2;
        const auto field = oracle::random_polynomial_field(rng, n);
        const F f = ExpressionParser({"a", "b"}).parse_function(field.text({"a", "b"}));
        const F g = n == 1 ? ExpressionParser({"a"}).parse_function(field.text({"a"})) : f;
        Box d;
        for (std::size_t i = 0; i < n; ++i) {
            const double lo = u(rng) - 0.5;
            d.emplace_back(lo, lo + 0.25);
        }
        for (auto kind : {IntegratorKind::picard, IntegratorKind::taylor}) {
            FunctionPatch p;
            try {
                p = flow_step(g, d, 0.25, kind);
            } catch (const IntegrationFailure&) {
                continue;
            }
            ++checked;
            const double h = step_of(p);
            for (int s = 0; s < 3; ++s) {
                oracle::State x0;
                std::vector<B> arg;
                for (std::size_t i = 0; i < n; ++i) {
                    x0.push_back(d[i].lower() + 0.25 * u(rng));
                    arg.emplace_back(x0.back());
                }
                arg.emplace_back(0.0);
                const auto at0 = p.evaluate(arg);
                for (std::size_t i = 0; i < n; ++i) {
                    EXPECT_TRUE(at0[i].contains(x0[i]));
                }
                for (int k = 1; k <= 10; ++k) {
                    const double t = h * k / 10;
                    const auto ref = oracle::trajectory_point(field.callable(), x0, t);
                    arg.back() = B(t);
                    const auto v = p.evaluate(arg);
                    for (std::size_t i = 0; i < n; ++i) {
                        EXPECT_TRUE(near_contains(v[i], ref[i])) << "trial " << trial << " t " << t;
                    }
                }
            }
        }
    }
    EXPECT_GE(checked, 30);
}

TEST(IntegratorProperties, BoundCertificateRecheck) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        const auto field = oracle::random_polynomial_field(rng, 2);
        const F f = ExpressionParser({"a", "b"}).parse_function(field.text({"a", "b"}));
        const Box d{B(0, 0.5), B(-0.25, 0.25)};
        try {
            const auto b = find_bound(f, d, 0.5);
            // independent recheck: D + [0, h] f(B) inside B, by plain interval evaluation
            const auto fb = f.evaluate(b.box, B(0.0));
            for (std::size_t i = 0; i < 2; ++i) {
                EXPECT_TRUE((d[i] + B(0.0, b.step) * fb[i]).subset_of(b.box[i]));
                EXPECT_TRUE(d[i].subset_of(b.box[i]));
            }
        } catch (const NoBoundError&) {
        }
    }
}

TEST(IntegratorProperties, SemigroupConsistency) {
    const F f = fitzhugh_nagumo();
    const Box x0{B(0.0), B(0.0)};
    const auto whole = flow_step(f, x0, 0.25, IntegratorKind::taylor);
    ASSERT_EQ(step_of(whole), 0.25);
    const auto first = flow_step(f, x0, 0.125, IntegratorKind::taylor);
    const Box mid = first.slice(2, 0.125).range();
    const auto second = flow_step(f, mid, 0.125, IntegratorKind::taylor);
    for (double s : {0.0, 0.05, 0.125}) {
        const auto ref = oracle::trajectory_point(fitzhugh_nagumo_field, {0.0, 0.0}, 0.125 + s);
        const auto one = whole.evaluate({B(0.0), B(0.0), B(0.125 + s)});
        const auto two = second.slice(2, s).range();
        for (std::size_t i = 0; i < 2; ++i) {
            EXPECT_TRUE(near_contains(one[i], ref[i]));
            EXPECT_TRUE(near_contains(two[i], ref[i]));
        }
    }
}

TEST(IntegratorProperties, MonotoneDegradation) {
    const F f = fitzhugh_nagumo();
    const Box big{B(0, 0.5), B(0, 0.5)};
    const Box small{B(0.2, 0.3), B(0.1, 0.2)};
    const auto b = find_bound(f, big, 0.125);
    for (auto step : {picard_flow_step, taylor_flow_step}) {
        const auto rb = step(f, big, b, IntegratorConfig()).range();
        const auto rs = step(f, small, b, IntegratorConfig()).range();
        for (std::size_t i = 0; i < 2; ++i) {
            EXPECT_GE(rb[i].width(), rs[i].width());
        }
    }
}
