#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "vcalc/differential.hpp"

using namespace vcalc;
using Q = ExactRational;
using DQ = Differential<Q>;

namespace {

DQ random_differential(std::mt19937_64& rng, std::size_t n, int d) {
    DQ r(n, d, Q(0));
    std::uniform_int_distribution<int> e(0, d);
    for (int k = 0; k < 8; ++k) {
        MultiIndex a(n);
        int left = d;
        for (std::size_t i = 0; i < n; ++i) {
            const int v = std::min(left, e(rng));
            a.set(i, v);
            left -= v;
        }
        r.set(a, oracle::random_rational(rng, 20, 7));
    }
    return r;
}

bool same(const DQ& a, const DQ& b) {
    const DQ d = a - b;
    for (const auto& [idx, c] : d.terms()) {
        if (c != Q(0)) {
            return false;
        }
    }
    return true;
}

} // namespace

TEST(MultiIndexTest, OrderAndDegree) {
    const MultiIndex a{1, 2};
    EXPECT_EQ(a.degree(), 3);
    EXPECT_LT(MultiIndex(2), MultiIndex::unit(2, 0));
    EXPECT_LT((MultiIndex{2, 0}), (MultiIndex{0, 3}));
    EXPECT_LT((MultiIndex{2, 0}), (MultiIndex{1, 1}));
    EXPECT_LT((MultiIndex{1, 1}), (MultiIndex{0, 2}));
    EXPECT_EQ((MultiIndex{1, 0}) + (MultiIndex{0, 2}), (MultiIndex{1, 2}));
    EXPECT_THROW(MultiIndex(2).set(2, 1), UsageError);
}

TEST(DifferentialTest, VariablesAndConstants) {
    const auto x = DQ::variable(1, 2, Q(3), 0);
    EXPECT_EQ(x.value(), Q(3));
    EXPECT_EQ(x.extract_derivative(MultiIndex{1}), Q(1));
    EXPECT_EQ(x.extract_derivative(MultiIndex{2}), Q(0));
    const auto c = DQ::constant(2, 3, Q(5));
    EXPECT_EQ(c.gradient(0), Q(0));
    EXPECT_EQ(c.extract_derivative(MultiIndex{1, 1}), Q(0));
    const auto y = DQ::variable(2, 1, Q(0), 1);
    EXPECT_EQ(y[MultiIndex::unit(2, 1)], Q(1));
    EXPECT_THROW(DQ::variable(2, 1, Q(0), 2), UsageError);
}

TEST(DifferentialTest, Products) {
    const auto x = DQ::variable(1, 2, Q(3), 0);
    const auto xx = x * x;
    EXPECT_EQ(xx.value(), Q(9));
    EXPECT_EQ(xx.extract_derivative(MultiIndex{1}), Q(6));
    EXPECT_EQ(xx.extract_derivative(MultiIndex{2}), Q(2));
    // (1+x+y)(1-x) at 0 truncated at degree 2 is 1 + y - x^2 - xy
    const auto X = DQ::variable(2, 2, Q(0), 0);
    const auto Y = DQ::variable(2, 2, Q(0), 1);
    const auto one = DQ::constant(2, 2, Q(1));
    const auto p = (one + X + Y) * (one - X);
    EXPECT_EQ(p[(MultiIndex{0, 0})], Q(1));
    EXPECT_EQ(p[(MultiIndex{1, 0})], Q(0));
    EXPECT_EQ(p[(MultiIndex{0, 1})], Q(1));
    EXPECT_EQ(p[(MultiIndex{2, 0})], Q(-1));
    EXPECT_EQ(p[(MultiIndex{1, 1})], Q(-1));
    EXPECT_EQ(p[(MultiIndex{0, 2})], Q(0));
    EXPECT_EQ((X * Y).extract_derivative(MultiIndex{1, 1}), Q(1));
    EXPECT_THROW(X * DQ::variable(2, 3, Q(0), 0), UsageError);
    const auto s = Q(2) * X;
    EXPECT_EQ(s.gradient(0), Q(2));
}

TEST(DifferentialTest, AnalyticExamples) {
    const auto e = exp(DQ::variable(1, 2, Q(0), 0));
    EXPECT_EQ(e[MultiIndex{0}], Q(1));
    EXPECT_EQ(e[MultiIndex{1}], Q(1));
    EXPECT_EQ(e[MultiIndex{2}], Q(1, 2));
    const auto r = rec(DQ::variable(1, 2, Q(2), 0));
    EXPECT_EQ(r.value(), Q(1, 2));
    EXPECT_EQ(r.extract_derivative(MultiIndex{1}), Q(-1, 4));
    EXPECT_EQ(r[MultiIndex{2}], Q(1, 8));
    const auto s = sin(DQ::variable(1, 3, Q(0), 0));
    EXPECT_EQ(s[MultiIndex{0}], Q(0));
    EXPECT_EQ(s[MultiIndex{1}], Q(1));
    EXPECT_EQ(s[MultiIndex{2}], Q(0));
    EXPECT_EQ(s[MultiIndex{3}], Q(-1, 6));
    EXPECT_THROW(log(DQ::variable(1, 2, Q(2), 0)), DomainError); // log 2 is not rational
}

TEST(DifferentialTest, SeriesAgreeWithIdentities) {
    // atan' = 1/(1+x^2), tan' = 1 + tan^2, sqrt^2 = x, log(exp) = id at rational points
    const auto x = DQ::variable(1, 6, Q(0), 0);
    const auto t = tan(x);
    const auto dt = t.derivative(0).truncate(5);
    const auto one = DQ::constant(1, 6, Q(1));
    EXPECT_TRUE(same(dt, (one + t * t).truncate(5)));
    const auto a = atan(DQ::variable(1, 6, Q(0), 0));
    const auto da = a.derivative(0).truncate(5);
    EXPECT_TRUE(same(da, rec(one + x * x).truncate(5)));
    const auto y = DQ::variable(1, 6, Q(4), 0);
    const auto sq = sqrt(y);
    EXPECT_TRUE(same(sq * sq, y));
    const auto l = log(DQ::variable(1, 6, Q(1), 0));
    const auto dl = l.derivative(0).truncate(5);
    EXPECT_TRUE(same(dl, rec(DQ::variable(1, 6, Q(1), 0)).truncate(5)));
    const auto c = cos(x);
    EXPECT_TRUE(same(sin(x) * sin(x) + c * c, one));
}

TEST(DifferentialTest, LeibnizRule) {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 200; ++i) {
        const auto a = random_differential(rng, 3, 4);
        const auto b = random_differential(rng, 3, 4);
        for (std::size_t j = 0; j < 3; ++j) {
            const auto lhs = (a * b).derivative(j).truncate(3);
            const auto rhs = (a.derivative(j) * b + a * b.derivative(j)).truncate(3);
            ASSERT_TRUE(same(lhs, rhs));
        }
    }
}

TEST(DifferentialTest, GradingClosure) {
    std::mt19937_64 rng(22);
    for (int i = 0; i < 200; ++i) {
        const auto a = random_differential(rng, 2, 4);
        const auto b = random_differential(rng, 2, 4);
        for (int k = 0; k <= 4; ++k) {
            const auto full = (a * b).truncate(k);
            const auto cut = (a.truncate(k) * b.truncate(k)).truncate(k);
            ASSERT_TRUE(same(full, cut));
        }
    }
}

TEST(DifferentialTest, FloatDerivativesMatchFiniteDifferences) {
    using DD = Differential<double>;
    for (double x0 : {0.3, 1.1, 2.5}) {
        const auto x = DD::variable(1, 3, x0, 0);
        const auto f = exp(sin(x)) * sqrt(x) + atan(x * x) - log(x) / (x + 2.0 * DD::constant(1, 3, 1.0));
        auto g = [](double v) { return std::exp(std::sin(v)) * std::sqrt(v) + std::atan(v * v) - std::log(v) / (v + 2); };
        for (int k = 0; k <= 2; ++k) {
            MultiIndex a(1);
            a.set(0, k);
            const double fd = oracle::central_difference(g, x0, k, 1e-4);
            EXPECT_NEAR(f.extract_derivative(a), fd, 1e-5 * std::max(1.0, std::fabs(fd)));
        }
    }
}
