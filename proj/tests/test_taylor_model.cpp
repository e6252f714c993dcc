#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "vcalc/taylor_model.hpp"

using namespace vcalc;
using Q = ExactRational;
using B = ValidatedBounds;
using TM = UnitTaylorModel;

namespace {

TM model(std::size_t n, std::vector<std::pair<MultiIndex, double>> terms, double e,
         Sweeper s = Sweeper::none()) {
    return TM::from_terms(n, std::move(terms), e, s, false);
}

const MultiIndex Z0{0};
const MultiIndex Z1{1};
const MultiIndex Z2{2};
const MultiIndex Z3{3};

Q exact_value(const TM& a, const std::vector<Q>& z) {
    return a.horner_over(z, Q(0), [](double c) { return Q::from_double(c); });
}

// A function represented by a: the polynomial plus t*e, t in [-1,1].
Q sample_value(const TM& a, const std::vector<Q>& z, const Q& t) {
    return exact_value(a, z) + t * Q::from_double(a.error());
}

TM random_model(std::mt19937_64& rng, std::size_t n, double scale, double shift) {
    std::uniform_real_distribution<double> u(-scale, scale);
    std::uniform_int_distribution<int> e(0, 2);
    std::vector<std::pair<MultiIndex, double>> terms;
    for (int k = 0; k < 6; ++k) {
        MultiIndex a(n);
        for (std::size_t i = 0; i < n; ++i) {
            a.set(i, e(rng));
        }
        terms.emplace_back(a, u(rng));
    }
    terms.emplace_back(MultiIndex(n), shift);
    return TM::from_terms(n, terms, std::fabs(u(rng)) / 64, Sweeper(), false);
}

struct Sample {
    std::vector<double> z;
    std::vector<Q> zq;
    std::vector<B> zb;
};

Sample random_point(std::mt19937_64& rng, std::size_t n) {
    Sample s;
    for (std::size_t i = 0; i < n; ++i) {
        const Q q = oracle::random_unit_dyadic(rng, 20);
        s.zq.push_back(q);
        s.z.push_back(q.to_double(RoundingMode::nearest));
        s.zb.push_back(B(s.z.back()));
    }
    return s;
}

// tan q = sin q / cos q with cos q > 0.
oracle::RationalInterval tan_enclosure(const Q& q) {
    const auto sv = oracle::sin_enclosure(q);
    const auto cv = oracle::cos_enclosure(q);
    const Q lo = sv.lo >= Q(0) ? sv.lo / cv.hi : sv.lo / cv.lo;
    const Q hi = sv.hi >= Q(0) ? sv.hi / cv.lo : sv.hi / cv.hi;
    return {lo, hi};
}

bool encloses(const B& b, const oracle::RationalInterval& r) {
    return b.contains(r.lo) && b.contains(r.hi);
}

} // namespace

TEST(TaylorModelTest, AddExamples) {
    const TM x = TM::coordinate(1, 0);
    const TM two_x = x + x;
    EXPECT_EQ(two_x.coefficient(Z1), 2.0);
    EXPECT_EQ(two_x.error(), 0.0);

    const TM p = model(1, {{Z1, 0.3}, {Z0, 0.7}}, 0.1);
    const TM s = p + (-p);
    EXPECT_TRUE(s.terms().empty());
    EXPECT_GE(s.error(), 0.2);

    const TM a = model(1, {{Z1, 0.1}}, 0);
    const TM b = model(1, {{Z1, 0.2}}, 0);
    const TM c = a + b;
    EXPECT_EQ(c.coefficient(Z1), 0.1 + 0.2);
    const Q discrepancy = abs(Q::from_double(0.1) + Q::from_double(0.2) - Q::from_double(c.coefficient(Z1)));
    EXPECT_GE(Q::from_double(c.error()), discrepancy);
    EXPECT_GT(c.error(), 0.0);
    EXPECT_THROW(TM::coordinate(2, 0) + x, UsageError);
}

TEST(TaylorModelTest, MultiplyExamples) {
    const TM x = TM::coordinate(1, 0);
    const TM xx = x * x;
    EXPECT_EQ(xx.coefficient(Z2), 1.0);
    EXPECT_EQ(xx.terms().size(), 1u);
    EXPECT_EQ(xx.error(), 0.0);

    const TM one = model(1, {{Z0, 1.0}}, 0.1);
    const TM sq = one * one;
    EXPECT_EQ(sq.coefficient(Z0), 1.0);
    EXPECT_GE(Q::from_double(sq.error()), Q::from_double(0.1) * Q(2) + Q::from_double(0.1) * Q::from_double(0.1));

    // z(1-z) = z - z^2
    const TM f = x * (TM::constant(1, 1.0) - x);
    EXPECT_EQ(f.coefficient(Z1), 1.0);
    EXPECT_EQ(f.coefficient(Z2), -1.0);
    EXPECT_EQ(f.error(), 0.0);
    EXPECT_TRUE(f.evaluate({B(0.5)}).contains(0.25));
}

TEST(TaylorModelTest, RangeAndNorm) {
    const TM a = model(1, {{Z0, 0.5}, {Z1, 0.25}}, 0.125);
    EXPECT_EQ(a.range(), B(0.125, 0.875));
    EXPECT_EQ(a.norm(), 0.875);
    EXPECT_EQ(TM::constant(1, 3.0).range(), B(3.0));
    EXPECT_EQ(TM(1).norm(), 0.0);
    const TM zz = model(1, {{Z1, 1.0}, {Z2, -1.0}}, 0);
    EXPECT_EQ(zz.range(), B(-2.0, 2.0));
    EXPECT_TRUE(B(-2.0, 0.25).subset_of(zz.range()));
    const TM w = model(1, {{Z2, 1.0}, {Z0, -1.0}}, 0);
    EXPECT_EQ(w.norm(), 2.0);
}

TEST(TaylorModelTest, SharpRange) {
    const TM f = model(1, {{Z1, 0.5}, {Z2, -0.25}, {Z0, 0.25}}, 0);
    EXPECT_EQ(f.range(), B(-0.5, 1.0));
    EXPECT_EQ(f.sharp_range(), B(-0.5, 0.75));
    const TM g = model(2, {{MultiIndex{2, 2}, 1.0}, {MultiIndex{1, 2}, -0.5}}, 0.125);
    EXPECT_EQ(g.sharp_range(), B(-0.625, 1.625));
    EXPECT_EQ(TM::constant(1, 3.0).sharp_range(), B(3.0));
}

TEST(TaylorModelTest, RefinesExamples) {
    const TM z1 = model(1, {{Z1, 1.0}}, 0.1);
    const TM z2 = model(1, {{Z1, 1.0}}, 0.2);
    const TM z3 = model(1, {{Z1, 1.0}}, 0.3);
    const TM zs = model(1, {{Z1, 1.0}, {Z0, 0.05}}, 0.1);
    EXPECT_TRUE(refines(z1, z2));
    EXPECT_TRUE(refines(zs, z2));
    EXPECT_FALSE(refines(z3, z2));
}

TEST(TaylorModelTest, SweepExamples) {
    const MultiIndex z5{5};
    const TM a = model(1, {{Z0, 1.0}, {z5, 1e-9}}, 0);
    const TM s = a.swept(Sweeper::threshold(1e-6));
    EXPECT_EQ(s.terms().size(), 1u);
    EXPECT_GE(s.error(), 1e-9);
    const TM n = a.swept(Sweeper::none());
    EXPECT_EQ(n.terms(), a.terms());
    EXPECT_EQ(n.error(), a.error());
    const TM c = model(1, {{Z3, 0.375}, {Z1, 1.0}}, 0.0);
    const TM g = c.swept(Sweeper::graded(2));
    EXPECT_EQ(g.coefficient(Z3), 0.0);
    EXPECT_EQ(g.error(), 0.375);
    EXPECT_THROW(Sweeper::threshold(-1), UsageError);
}

TEST(TaylorModelTest, EvaluateExamples) {
    const TM a = model(1, {{Z0, 1.0}, {Z1, 2.0}, {Z2, 3.0}}, 0);
    EXPECT_TRUE(a.evaluate({B(0.0)}).contains(1.0));
    EXPECT_THROW(a.evaluate({B(0.0, 1.5)}), DomainError);
    EXPECT_THROW(a.evaluate({B(0.0), B(0.0)}), UsageError);

    std::mt19937_64 rng(5);
    for (int i = 0; i < 100; ++i) {
        const TM m = random_model(rng, 2, 2.0, 0.0);
        const Sample p = random_point(rng, 2);
        const B v = m.evaluate(p.zb);
        ASSERT_TRUE(v.contains(exact_value(m, p.zq)));
        ASSERT_TRUE(B::around(v.midpoint(), v.radius()).subset_of(
            m.range() + B(-m.error(), m.error())));
    }
}

TEST(TaylorModelTest, ComposeExamples) {
    const TM y = TM::coordinate(1, 0);
    const TM sq = TM::compose(y * y, {TM::coordinate(1, 0)});
    EXPECT_EQ(sq.coefficient(Z2), 1.0);
    EXPECT_EQ(sq.error(), 0.0);

    const TM inner = model(1, {{Z1, 0.5}}, 0.1);
    const TM id = TM::compose(y, {inner});
    EXPECT_EQ(id.terms(), inner.terms());
    EXPECT_GE(id.error(), 0.1);

    const TM outer = model(1, {{Z0, 1.0}, {Z1, 1.0}}, 0);
    const TM r = TM::compose(outer, {inner});
    EXPECT_EQ(r.coefficient(Z0), 1.0);
    EXPECT_EQ(r.coefficient(Z1), 0.5);
    EXPECT_GE(r.error(), 0.1);
    EXPECT_LE(r.error(), 0.1 + 1e-15);

    EXPECT_THROW(TM::compose(outer, {model(1, {{Z1, 1.0}}, 0.1)}), DomainError);
}

TEST(TaylorModelTest, AnalyticExamples) {
    const TM e0 = exp(TM::constant(1, 0.0));
    EXPECT_TRUE(e0.range().contains(1.0));
    EXPECT_LE(e0.error(), 0x1p-50);
    const TM e1 = exp(TM::constant(1, 1.0));
    EXPECT_TRUE(e1.range().contains(2.718281828459045));
    EXPECT_TRUE(encloses(e1.range(), oracle::exp_enclosure(Q(1))));
    const TM eh = exp(model(1, {{Z1, 0.5}}, 0));
    const auto lo = oracle::exp_enclosure(Q(-1, 2));
    const auto hi = oracle::exp_enclosure(Q(1, 2));
    EXPECT_TRUE(eh.range().contains(lo.lo) && eh.range().contains(hi.hi));
    EXPECT_LT(eh.error(), 1e-12);

    EXPECT_THROW(log(model(1, {{Z0, 0.5}, {Z1, 0.5}}, 0)), DomainError);
    EXPECT_THROW(rec(TM::coordinate(1, 0)), DomainError);
}

TEST(TaylorModelTest, CalculusExamples) {
    const TM two_z = model(1, {{Z1, 2.0}}, 0);
    const TM z2 = two_z.antiderivative(0, 1.0);
    EXPECT_EQ(z2.coefficient(Z2), 1.0);
    EXPECT_EQ(z2.error(), 0.0);
    const TM c = model(1, {{Z0, 1.0}}, 0.5).antiderivative(0, 1.0);
    EXPECT_EQ(c.coefficient(Z1), 1.0);
    EXPECT_EQ(c.error(), 0.5);

    const TM d = model(1, {{Z2, 1.0}}, 0).derivative_of_midpoint(0, 1.0);
    EXPECT_EQ(d.coefficient(Z1), 2.0);
    EXPECT_TRUE(TM::constant(1, 4.0).derivative_of_midpoint(0, 1.0).terms().empty());
    const TM d3 = model(1, {{Z3, 1.0}}, 0.1).derivative_of_midpoint(0, 1.0);
    EXPECT_EQ(d3.coefficient(Z2), 3.0);
    EXPECT_EQ(d3.error(), 0.0);

    // derivative undoes antiderivative on exactly scaled coefficients
    std::mt19937_64 rng(6);
    for (int i = 0; i < 50; ++i) {
        std::vector<std::pair<MultiIndex, double>> terms;
        for (int k = 0; k < 4; ++k) {
            MultiIndex a(2);
            a.set(0, k % 3);
            a.set(1, k / 2);
            terms.emplace_back(a, std::ldexp(static_cast<double>(rng() % 64) - 32, -3));
        }
        const TM p = model(2, terms, 0);
        for (std::size_t j = 0; j < 2; ++j) {
            const TM back = p.antiderivative(j, 2.0).derivative_of_midpoint(j, 2.0);
            const TM diff = back - p;
            for (const auto& [a, v] : diff.terms()) {
                ASSERT_LE(std::fabs(v), 1e-14);
            }
        }
    }
}

TEST(TaylorModelTest, SplitExamples) {
    const TM k = TM::constant(1, 2.5);
    const TM ks = k.split(0, Half::lower);
    EXPECT_EQ(ks.coefficient(Z0), 2.5);
    EXPECT_EQ(ks.error(), 0.0);
    const TM z = TM::coordinate(1, 0).split(0, Half::lower);
    EXPECT_EQ(z.coefficient(Z1), 0.5);
    EXPECT_EQ(z.coefficient(Z0), -0.5);

    std::mt19937_64 rng(7);
    for (int i = 0; i < 100; ++i) {
        const TM m = random_model(rng, 2, 1.0, 0.0);
        const Half h = i % 2 ? Half::upper : Half::lower;
        const TM s = m.split(1, h);
        const Sample p = random_point(rng, 2);
        // preimage of p in the original coordinates
        std::vector<Q> pre = p.zq;
        pre[1] = (p.zq[1] + (h == Half::lower ? Q(-1) : Q(1))) / Q(2);
        const Q t = oracle::random_unit_dyadic(rng, 10);
        ASSERT_TRUE(s.evaluate(p.zb).contains(sample_value(m, pre, t)));
    }
}

TEST(TaylorModelTest, AffineProduct) {
    const AffineModel one = AffineModel::constant(1, 1.0);
    const AffineModel o = one * one;
    EXPECT_EQ(o.constant_term(), 1.0);
    EXPECT_EQ(o.error(), 0.0);
    const AffineModel x = AffineModel::coordinate(1, 0);
    const AffineModel xx = x * x;
    EXPECT_EQ(xx.constant_term(), 0.0);
    EXPECT_EQ(xx.gradient()[0], 0.0);
    EXPECT_EQ(xx.error(), 1.0);
    const AffineModel a = one + x;
    const AffineModel b = one + AffineModel(0.0, {-1.0}, 0.0);
    const AffineModel ab = a * b;
    EXPECT_EQ(ab.constant_term(), 1.0);
    EXPECT_EQ(ab.gradient()[0], 0.0);
    EXPECT_EQ(ab.error(), 1.0);
    EXPECT_THROW(x * AffineModel::constant(2, 1.0), UsageError);
}

TEST(TaylorModelTest, RenderText) {
    const TM a = model(2, {{MultiIndex{0, 2}, 0.1585}, {MultiIndex{0, 1}, 0.3493}}, 0.000366);
    const std::string s = a.str();
    EXPECT_EQ(s.front(), '{');
    EXPECT_NE(s.find("0.1585*x1^2"), std::string::npos);
    EXPECT_NE(s.find("+0.3493*x1"), std::string::npos);
    EXPECT_NE(s.find("+/-0.000366"), std::string::npos);
}

// Master property: sample represented functions, apply the exact operation at
// random unit-box points, and require membership in the result's evaluation.
TEST(TaylorModelProperty, ArithmeticInclusion) {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 100; ++i) {
        const TM a = random_model(rng, 2, 1.0, 0.0);
        const TM b = random_model(rng, 2, 1.0, 0.0);
        const TM sum = a + b;
        const TM dif = a - b;
        const TM prod = a * b;
        const TM sc = a * B(0.25, 0.75);
        const TM sweptp = prod.swept(Sweeper::threshold(0.05));
        for (int k = 0; k < 5; ++k) {
            const Sample p = random_point(rng, 2);
            const Q fa = sample_value(a, p.zq, oracle::random_unit_dyadic(rng, 12));
            const Q fb = sample_value(b, p.zq, oracle::random_unit_dyadic(rng, 12));
            ASSERT_TRUE(sum.evaluate(p.zb).contains(fa + fb));
            ASSERT_TRUE(dif.evaluate(p.zb).contains(fa - fb));
            ASSERT_TRUE(prod.evaluate(p.zb).contains(fa * fb));
            ASSERT_TRUE(sweptp.evaluate(p.zb).contains(fa * fb));
            ASSERT_TRUE(sc.evaluate(p.zb).contains(fa * Q(1, 4)));
            ASSERT_TRUE(sc.evaluate(p.zb).contains(fa * Q(3, 4)));
            ASSERT_TRUE(a.range().contains(fa));
        }
    }
}

TEST(TaylorModelProperty, SharpRangeInclusion) {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 300; ++i) {
        const TM a = random_model(rng, 2, 1.0, 0.3);
        const B r = a.sharp_range();
        ASSERT_TRUE(r.subset_of(a.range()));
        for (int k = 0; k < 10; ++k) {
            const Sample p = random_point(rng, 2);
            const Q t = k % 2 == 0 ? Q(1) : Q(-1);
            ASSERT_TRUE(r.contains(sample_value(a, p.zq, t)));
        }
    }
}

TEST(TaylorModelProperty, RefinesIsSound) {
    std::mt19937_64 rng(9);
    int hits = 0;
    for (int i = 0; i < 200; ++i) {
        const TM a = random_model(rng, 2, 1.0, 0.0);
        TM b = a + model(2, {{MultiIndex{1, 0}, 0.01}}, 0);
        b.add_error(static_cast<double>(rng() % 4) * 0.01);
        if (!refines(a, b)) {
            continue;
        }
        ++hits;
        for (int k = 0; k < 5; ++k) {
            const Sample p = random_point(rng, 2);
            const Q fa = sample_value(a, p.zq, oracle::random_unit_dyadic(rng, 12));
            ASSERT_LE(abs(fa - exact_value(b, p.zq)), Q::from_double(b.error()));
        }
    }
    EXPECT_GT(hits, 50);
}

TEST(TaylorModelProperty, CompositionInclusion) {
    std::mt19937_64 rng(10);
    for (int i = 0; i < 60; ++i) {
        const TM outer = random_model(rng, 2, 1.0, 0.0);
        const TM g0 = random_model(rng, 2, 0.1, 0.2);
        const TM g1 = random_model(rng, 2, 0.1, -0.3);
        const TM r = TM::compose(outer, {g0, g1});
        for (int k = 0; k < 4; ++k) {
            const Sample p = random_point(rng, 2);
            const Q v0 = sample_value(g0, p.zq, oracle::random_unit_dyadic(rng, 12));
            const Q v1 = sample_value(g1, p.zq, oracle::random_unit_dyadic(rng, 12));
            const Q f = sample_value(outer, {v0, v1}, oracle::random_unit_dyadic(rng, 12));
            ASSERT_TRUE(r.evaluate(p.zb).contains(f));
        }
    }
}

TEST(TaylorModelProperty, AnalyticInclusion) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 40; ++i) {
        const TM small = random_model(rng, 2, 0.15, 0.0);
        const TM positive = random_model(rng, 2, 0.15, 2.0);
        const TM ex = exp(small);
        const TM si = sin(small);
        const TM co = cos(small);
        const TM sq = sqrt(positive);
        const TM re = rec(positive);
        const TM lg = log(positive);
        const TM at = atan(small);
        const TM ta = tan(small);
        for (int k = 0; k < 3; ++k) {
            const Sample p = random_point(rng, 2);
            const Q t = oracle::random_unit_dyadic(rng, 12);
            const Q v = sample_value(small, p.zq, t);
            const Q w = sample_value(positive, p.zq, t);
            ASSERT_TRUE(encloses(ex.evaluate(p.zb), oracle::exp_enclosure(v)));
            ASSERT_TRUE(encloses(si.evaluate(p.zb), oracle::sin_enclosure(v)));
            ASSERT_TRUE(encloses(co.evaluate(p.zb), oracle::cos_enclosure(v)));
            ASSERT_TRUE(encloses(sq.evaluate(p.zb), oracle::sqrt_enclosure(w)));
            ASSERT_TRUE(re.evaluate(p.zb).contains(Q(1) / w));
            // log w in [lo,hi] iff exp(lo) <= w <= exp(hi)
            const B l = lg.evaluate(p.zb);
            ASSERT_LE(oracle::exp_enclosure(Q::from_double(l.lower())).hi, w);
            ASSERT_GE(oracle::exp_enclosure(Q::from_double(l.upper())).lo, w);
            // atan v in [lo,hi] iff tan(lo) <= v <= tan(hi), tan monotone here
            const B a = at.evaluate(p.zb);
            ASSERT_LE(tan_enclosure(Q::from_double(a.lower())).hi, v);
            ASSERT_GE(tan_enclosure(Q::from_double(a.upper())).lo, v);
            ASSERT_TRUE(encloses(ta.evaluate(p.zb), tan_enclosure(v)));
        }
        // the input error propagates with the derivative's size, little more
        EXPECT_LT(ex.error(), 3 * small.error() + 1e-9);
        EXPECT_LT(lg.error(), positive.error() + 1e-9);
    }
}
