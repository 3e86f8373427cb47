#include "oracles.hpp"

#include <aqrm/aqrm.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace aqrm;

namespace {

const ModelParams reference{1.2, 0.3, 1.0, 0.0};

double factorial(int n)
{
    double f = 1.0;
    for (int k = 2; k <= n; ++k)
        f *= k;
    return f;
}

} // namespace

TEST(ConstraintPoly, FirstTwoMembers)
{
    for (double x : {0.0, 0.5, 2.0})
        for (double y : {0.3, 1.44})
            EXPECT_NEAR(constraint_poly_eval(1, x, y, 0.3, 1.0), x + y - 1.6, 1e-14);
    EXPECT_NEAR(constraint_poly_eval(1, 0.16, 1.44, 0.3, 1.0), 0.0, 1e-15);
    EXPECT_EQ(constraint_poly_eval(0, 3.0, 2.0, 0.1, 1.0), 1.0);
}

TEST(ConstraintPoly, MatchesLongDoubleRecursion)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const int n = 1 + static_cast<int>(8 * u(rng));
        const double x = 4 * u(rng), y = 4 * u(rng), e = u(rng) - 0.5, w = 0.5 + u(rng);
        const long double ref = oracle::constraint_p(n, x, y, e, w);
        EXPECT_NEAR(constraint_poly_eval(n, x, y, e, w), static_cast<double>(ref), 1e-11 * (1 + std::abs(ref)));
    }
}

TEST(ConstraintPoly, ExactDegreeAndLeadingCoefficient)
{
    for (int n = 1; n <= 10; ++n) {
        const auto c = constraint_poly_coefficients(n, 1.44, 0.3, 1.0);
        ASSERT_EQ(c.size(), static_cast<std::size_t>(n + 1));
        EXPECT_NEAR(c[n], factorial(n), 1e-9 * factorial(n));
        // coefficients reproduce the recursion
        for (double x : {0.1, 0.9}) {
            double v = 0.0;
            for (int k = n; k >= 0; --k)
                v = v * x + c[k];
            EXPECT_NEAR(v, constraint_poly_eval(n, x, 1.44, 0.3, 1.0), 1e-9 * (1 + std::abs(v)));
        }
    }
}

TEST(QesPoints, FirstLevelAnalytic)
{
    const auto plus = qes_points(reference, 1, Branch::plus);
    ASSERT_EQ(plus.points.size(), 1u);
    EXPECT_NEAR(plus.points[0].g, 0.2, 1e-12);
    EXPECT_NEAR(plus.points[0].energy, 1.26, 1e-12);
    EXPECT_TRUE(qes_points(reference, 1, Branch::minus).points.empty());
}

TEST(QesPoints, CountsPerLine)
{
    for (int n = 1; n <= 5; ++n) {
        EXPECT_EQ(qes_points(reference, n, Branch::plus).points.size(), static_cast<std::size_t>(n)) << n;
        EXPECT_EQ(qes_points(reference, n, Branch::minus).points.size(), static_cast<std::size_t>(n - 1)) << n;
    }
}

TEST(QesPoints, SortedRootsWithSmallResidual)
{
    for (int n = 1; n <= 8; ++n) {
        for (Branch b : {Branch::plus, Branch::minus}) {
            const auto pts = qes_points(reference, n, b).points;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                EXPECT_GT(pts[i].g, 0.0);
                if (i) {
                    EXPECT_LT(pts[i - 1].g, pts[i].g);
                }
                EXPECT_LT(pts[i].constraint_residual, 1e-12);
                EXPECT_DOUBLE_EQ(pts[i].energy, qes_energy(reference.with_g(pts[i].g), n, b));
            }
        }
    }
}

TEST(QesPoints, EnergiesAreOracleEigenvalues)
{
    for (int n = 1; n <= 5; ++n) {
        for (Branch b : {Branch::plus, Branch::minus}) {
            for (const auto& q : qes_points(reference, n, b).points) {
                const auto ref = oracle::levels({1.2, 0.3, 1.0, q.g}, 2 * n + 6);
                double best = INFINITY;
                for (double e : ref)
                    best = std::min(best, std::abs(e - q.energy));
                EXPECT_LT(best, 1e-6) << "n=" << n << " g=" << q.g;
            }
        }
    }
}

TEST(QesPoints, SymmetricModelBranchesMerge)
{
    const ModelParams p = reference.with_epsilon(0.0);
    for (int n = 1; n <= 6; ++n) {
        const auto a = qes_points(p, n, Branch::plus).points;
        const auto b = qes_points(p, n, Branch::minus).points;
        ASSERT_EQ(a.size(), b.size());
        for (std::size_t i = 0; i < a.size(); ++i)
            EXPECT_EQ(a[i].g, b[i].g);
    }
}

TEST(QesPoints, DegenerateAtomicLimitFlagged)
{
    const auto s = qes_points(ModelParams{0.0, 0.3, 1.0, 0.0}, 3, Branch::plus);
    EXPECT_TRUE(s.points.empty());
    EXPECT_TRUE(s.degenerate_atomic_limit);
    EXPECT_FALSE(qes_points(reference, 3, Branch::plus).degenerate_atomic_limit);
}

TEST(QesPoints, RejectsDegreeBeyondDoublePrecision)
{
    EXPECT_THROW(qes_points(reference, max_constraint_degree + 1, Branch::plus), InvalidArgument);
    EXPECT_THROW(qes_points(reference, 0, Branch::plus), InvalidArgument);
}

TEST(QSequence, FirstLevelExamples)
{
    const auto q = q_sequence(1, reference.with_g(0.7), Branch::plus);
    ASSERT_EQ(q.values.size(), 3u);
    EXPECT_EQ(q.values[0], 1.0);
    EXPECT_NEAR(q.values[1], -0.9, 1e-15);
    const auto j = q_sequence(1, reference.with_g(0.2), Branch::plus);
    EXPECT_NEAR(j.values[2], 0.0, 1e-15);
}

TEST(QSequence, VanishesWithoutSplitting)
{
    const auto q = q_sequence(4, ModelParams{0.0, 0.3, 1.0, 0.6}, Branch::plus);
    for (std::size_t k = 1; k < q.values.size(); ++k)
        EXPECT_EQ(q.values[k], 0.0);
}

TEST(QSequence, SatisfiesRecurrence)
{
    for (Branch b : {Branch::plus, Branch::minus}) {
        const ModelParams p{0.9, 0.21, 1.3, 0.45};
        const int n = 5;
        const auto q = q_sequence(n, p, b);
        const auto ref = oracle::coefficient_q(n, p.delta, sign(b) * p.epsilon, p.omega, p.g);
        for (int k = 0; k <= n + 1; ++k)
            EXPECT_NEAR(q.values[k], static_cast<double>(ref[k]), 1e-12 * (1 + std::abs(static_cast<double>(ref[k]))));
    }
}

TEST(QSequence, TruncatesAtJuddianPoints)
{
    for (int n = 1; n <= 5; ++n) {
        for (Branch b : {Branch::plus, Branch::minus}) {
            for (const auto& pt : qes_points(reference, n, b).points) {
                const auto q = q_sequence(n, reference.with_g(pt.g), b);
                double scale = 0.0;
                for (int k = 0; k <= n; ++k)
                    scale = std::max(scale, std::abs(q.values[k]));
                EXPECT_LT(std::abs(q.values[n + 1]), 1e-9 * scale) << "n=" << n << " g=" << pt.g;
            }
        }
    }
}

TEST(QSequence, ResonantParametersRejected)
{
    // 2 eps + (n - k) omega = 0 at k = n for eps = 0
    EXPECT_THROW(q_sequence(3, ModelParams{1.0, 0.0, 1.0, 0.5}, Branch::plus), ResonantParameterError);
    try {
        q_sequence(3, ModelParams{1.0, -0.5, 1.0, 0.5}, Branch::plus);
        FAIL();
    } catch (const ResonantParameterError& e) {
        EXPECT_EQ(e.step(), 2);
    }
    // the truncated sequence skips the k = n step
    EXPECT_NO_THROW(q_sequence_truncated(3, ModelParams{1.0, 0.0, 1.0, 0.5}, Branch::plus));
}

TEST(QpProportionality, Examples)
{
    EXPECT_LT(qp_proportionality_residual(1, reference.with_g(0.2), Branch::plus), 1e-12);
    EXPECT_EQ(qp_proportionality_residual(3, ModelParams{0.0, 0.27, 1.0, 0.4}, Branch::plus), 0.0);
    EXPECT_LT(qp_proportionality_residual(3, ModelParams{0.7, 0.27, 1.0, 0.4}, Branch::plus), 1e-10);
}

TEST(QpProportionality, IndependentEvaluation)
{
    // both sides from the long double oracle recursions, n = 3 example
    const long double d = 0.7L, e = 0.27L, w = 1.0L, g = 0.4L;
    const int n = 3;
    const auto q = oracle::coefficient_q(n, d, e, w, g);
    long double denom = std::pow(2.0L * w, n + 1);
    for (int k = 0; k <= n; ++k)
        denom *= (k + 1) * (e + k * w / 2);
    const long double rhs = ((n + 1) % 2 ? -1.0L : 1.0L) * d * d * oracle::constraint_p(n, 4 * g * g, d * d, e, w) / denom;
    EXPECT_NEAR(static_cast<double>(q[n + 1] / rhs), 1.0, 1e-12);
}

TEST(QpProportionality, RandomDraws)
{
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int drawn = 0;
    while (drawn < 100) {
        const ModelParams p{-2 + 4 * u(rng), -0.45 + 0.9 * u(rng), 1.0, u(rng)};
        const int n = 1 + static_cast<int>(8 * u(rng));
        const Branch b = u(rng) < 0.5 ? Branch::plus : Branch::minus;
        if (std::abs(p.epsilon) < 0.05)
            continue;
        EXPECT_LT(qp_proportionality_residual(n, p, b), 1e-10);
        ++drawn;
    }
}
