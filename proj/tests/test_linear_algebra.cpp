#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "vcalc/linear_algebra.hpp"
#include "vcalc/logic.hpp"

using namespace vcalc;
using Q = ExactRational;
using B = ValidatedBounds;

TEST(VectorTest, SpaceOperations) {
    const Vector<double> v{1.0, 2.0};
    const Vector<double> w{3.0, 4.0};
    EXPECT_EQ((v + w).elements(), (std::vector<double>{4, 6}));
    EXPECT_EQ((2.0 * v).elements(), (std::vector<double>{2, 4}));
    const Vector<B> a{B(0, 1), B(1, 2)};
    const Vector<B> b{B(1.0), B(0.0)};
    const auto s = a + b;
    EXPECT_EQ(s[0], B(1, 2));
    EXPECT_EQ(s[1], B(1, 2));
    EXPECT_THROW(v + Vector<double>(3, 0.0), UsageError);
    const Vector<Q> empty(0, Q(0));
    EXPECT_EQ(empty.zero_element(), Q(0));
}

TEST(VectorTest, Norms) {
    const Vector<double> v{3.0, -4.0};
    EXPECT_EQ(norm(v), 4.0);
    EXPECT_EQ(norm(v, NormKind::euclidean), 5.0);
    EXPECT_EQ(norm(v, NormKind::one), 7.0);
    const Vector<Q> q{Q(3), Q(-4)};
    EXPECT_EQ(norm(q), Q(4));
    EXPECT_EQ(norm(q, NormKind::one), Q(7));

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int i = 0; i < 500; ++i) {
        std::vector<B> xs;
        std::vector<Q> pts;
        for (int k = 0; k < 3; ++k) {
            const double a = u(rng);
            const double r = std::fabs(u(rng)) / 10;
            xs.push_back(B(a - r, a + r));
            pts.push_back(Q::from_double(a - r));
        }
        const Vector<B> x(xs, B(0.0));
        const B sup = norm(x);
        const B two = norm(x, NormKind::euclidean);
        const B one = norm(x, NormKind::one);
        Q s2(0);
        Q s1(0);
        Q sm(0);
        for (const auto& p : pts) {
            s2 = s2 + p * p;
            s1 = s1 + abs(p);
            sm = max(sm, abs(p));
        }
        ASSERT_GE(Q::from_double(sup.upper()), sm);
        ASSERT_GE(Q::from_double(two.upper()) * Q::from_double(two.upper()), s2);
        ASSERT_GE(Q::from_double(one.upper()), s1);
        ASSERT_LE(sup.upper(), two.upper());
        ASSERT_LE(two.upper(), one.upper());
    }
}

TEST(GaussSolveTest, Examples) {
    const auto id = Matrix<B>::identity(2, B(0.0));
    const auto x = interval_gauss_solve(id, Vector<B>{B(1.0), B(2.0)});
    EXPECT_EQ(x[0], B(1.0));
    EXPECT_EQ(x[1], B(2.0));
    const Matrix<B> d{{B(2.0), B(0.0)}, {B(0.0), B(4.0)}};
    const auto y = interval_gauss_solve(d, Vector<B>{B(2.0), B(4.0)});
    EXPECT_TRUE(y[0].contains(1.0) && y[1].contains(1.0));
    const Matrix<B> m{{B(1.9, 2.1), B(0.0)}, {B(0.0), B(1.0)}};
    const auto z = interval_gauss_solve(m, Vector<B>{B(2.0), B(1.0)});
    // corner systems: 2/2.1 and 2/1.9 with the stored endpoints
    EXPECT_TRUE(z[0].contains(Q(2) / Q::from_double(2.1)));
    EXPECT_TRUE(z[0].contains(Q(2) / Q::from_double(1.9)));
    const Matrix<B> sing{{B(-1, 1), B(0.0)}, {B(0.0), B(1.0)}};
    EXPECT_THROW(interval_gauss_solve(sing, Vector<B>{B(1.0), B(1.0)}), SingularMatrixError);
}

TEST(GaussSolveTest, RandomContainment) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-2, 2);
    std::uniform_real_distribution<double> t(0, 1);
    int solved = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 2 + trial % 2;
        Matrix<B> a(n, n, B(0.0));
        Vector<B> b(n, B(0.0));
        Matrix<double> mid(n, n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const double c = u(rng) + (i == j ? 3.0 : 0.0);
                a(i, j) = B(c - 0.01, c + 0.01);
            }
            const double c = u(rng);
            b[i] = B(c - 0.01, c + 0.01);
        }
        Vector<B> x;
        try {
            x = interval_gauss_solve(a, b);
        } catch (const SingularMatrixError&) {
            continue;
        }
        ++solved;
        // a sampled point system, solved exactly
        Matrix<Q> qa(n, n, Q(0));
        Vector<Q> qb(n, Q(0));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                qa(i, j) = Q::from_double(a(i, j).lower()) +
                           Q::from_double(a(i, j).width()) * Q::from_double(t(rng)) / Q(2);
            }
            qb[i] = Q::from_double(b[i].lower()) + Q::from_double(b[i].width()) * Q::from_double(t(rng)) / Q(2);
        }
        const auto qx = gauss_solve(qa, qb);
        for (std::size_t i = 0; i < n; ++i) {
            ASSERT_TRUE(x[i].contains(qx[i]));
        }
    }
    EXPECT_GT(solved, 900);
}

TEST(ApproximateInverseTest, Inverts) {
    const Matrix<double> a{{4.0, 1.0}, {2.0, 3.0}};
    const auto inv = approximate_inverse(a);
    const auto p = a * inv;
    EXPECT_NEAR(p(0, 0), 1.0, 1e-15);
    EXPECT_NEAR(p(0, 1), 0.0, 1e-15);
    EXPECT_NEAR(p(1, 1), 1.0, 1e-15);
}

TEST(LogicTest, KleeneTables) {
    using K = ValidatedKleenean;
    EXPECT_EQ(K::TRUE & K::INDETERMINATE, K::INDETERMINATE);
    EXPECT_EQ(K::FALSE & K::INDETERMINATE, K::FALSE);
    EXPECT_EQ(K::TRUE | K::INDETERMINATE, K::TRUE);
    EXPECT_EQ(!K::INDETERMINATE, K::INDETERMINATE);
    EXPECT_FALSE(definitely(K::INDETERMINATE));
    EXPECT_TRUE(possibly(K::INDETERMINATE));
    EXPECT_TRUE(decide(K::TRUE));
    EXPECT_FALSE(decide(K::INDETERMINATE));
    for (K a : {K::FALSE, K::INDETERMINATE, K::TRUE}) {
        EXPECT_TRUE(!definitely(a) || possibly(a));
        for (K b : {K::FALSE, K::INDETERMINATE, K::TRUE}) {
            EXPECT_EQ(!(a & b), !a | !b);
            EXPECT_EQ(!(a | b), !a & !b);
        }
        EXPECT_EQ(kleenean_from_string(to_string(a)), a);
    }
}

TEST(LogicTest, BoundsComparison) {
    using K = ValidatedKleenean;
    EXPECT_EQ(B(1, 2) < B(3, 4), K::TRUE);
    EXPECT_EQ(B(1, 3) < B(2, 4), K::INDETERMINATE);
    EXPECT_EQ(B(2, 3) < B(1, 2), K::FALSE);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-2, 2);
    std::uniform_real_distribution<double> t(0, 1);
    for (int i = 0; i < 2000; ++i) {
        double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
        if (a > b) std::swap(a, b);
        if (c > d) std::swap(c, d);
        const B x(a, b), y(c, d);
        const Q p = Q::from_double(a) + (Q::from_double(b) - Q::from_double(a)) * Q::from_double(t(rng));
        const Q q = Q::from_double(c) + (Q::from_double(d) - Q::from_double(c)) * Q::from_double(t(rng));
        const K k = x < y;
        if (k == K::TRUE) ASSERT_LT(p, q);
        if (k == K::FALSE) ASSERT_GE(p, q);
    }
    EXPECT_EQ(approximately_less(1.0, 2.0), ApproximateKleenean::LIKELY);
}
