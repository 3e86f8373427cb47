#include "oracles.hpp"

#include <aqrm/aqrm.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace aqrm;

namespace {

const ModelParams reference{1.2, 0.3, 1.0, 0.0};

struct Solved {
    QesPoint point;
    BetheRoots roots;
};

std::vector<Solved> all_points(int n_max)
{
    std::vector<Solved> out;
    for (int n = 1; n <= n_max; ++n)
        for (Branch b : {Branch::plus, Branch::minus})
            for (const auto& q : qes_points(reference, n, b).points)
                out.push_back({q, solve_bethe(reference.with_g(q.g), n, b)});
    return out;
}

} // namespace

TEST(BetheResiduals, FirstLevelSolution)
{
    const ModelParams p = reference.with_g(0.2);
    const auto r = bethe_residuals({cplx(-3.8, 0.0)}, p, 1, Branch::plus);
    EXPECT_LT(std::abs(r[0]), 1e-14);
    // second family: eps -> -eps, z -> -z
    const auto m = bethe_residuals({cplx(3.8, 0.0)}, p.with_epsilon(-0.3), 1, Branch::minus);
    EXPECT_LT(std::abs(m[0]), 1e-14);
}

TEST(BetheResiduals, CoincidentRootsNamed)
{
    try {
        bethe_residuals({cplx(1.0, 0.0), cplx(-2.0, 0.0), cplx(1.0, 0.0)}, reference.with_g(0.5), 3, Branch::plus);
        FAIL();
    } catch (const BetheError& e) {
        EXPECT_EQ(e.first(), 0);
        EXPECT_EQ(e.second(), 2);
    }
    EXPECT_THROW(bethe_residuals({cplx(0.5, 0.0)}, reference.with_g(0.5), 1, Branch::plus), BetheError);
}

TEST(SolveBethe, FirstLevel)
{
    const ModelParams p = reference.with_g(0.2);
    const auto r = solve_bethe(p, 1, Branch::plus);
    ASSERT_EQ(r.roots.size(), 1u);
    EXPECT_NEAR(r.roots[0].real(), -3.8, 1e-10);
    EXPECT_EQ(r.roots[0].imag(), 0.0);
    // Delta^2 + 2 g^2 + 2 omega g z1 = 1.44 + 0.08 - 1.52
    EXPECT_NEAR(std::abs(bethe_constraint(r.roots, p, 1, Branch::plus)), 0.0, 1e-12);
}

TEST(SolveBethe, DegenerateAtomicLimit)
{
    const ModelParams p{0.0, 0.3, 1.0, 0.35};
    const auto r = solve_bethe(p, 3, Branch::plus);
    for (const auto& z : r.roots)
        EXPECT_EQ(z, cplx(-0.35, 0.0));
}

TEST(SolveBethe, AllPointsMeetTolerances)
{
    for (const auto& s : all_points(5)) {
        const auto& r = s.roots;
        EXPECT_LT(r.residual_norm, 1e-8);
        EXPECT_LT(r.constraint_residual, 1e-8);
        EXPECT_LT(r.route_agreement, 1e-8);
        // independent re-evaluation
        double worst = 0.0;
        for (const auto& c : bethe_residuals(r.roots, r.params, r.n, r.branch))
            worst = std::max(worst, std::abs(c));
        EXPECT_LT(worst, 1e-8);
    }
}

TEST(SolveBethe, RootsMatchFockEigenvector)
{
    // At a Juddian point the sigma_x = +-1 component of the exact eigenvector,
    // times exp(+-g z / omega), is the polynomial prod (z - z_i).
    for (const auto& s : all_points(4)) {
        const int n = s.point.n;
        const double g = s.point.g;
        const int sx = sign(s.point.branch);
        const auto state = oracle::nearest_state({1.2, 0.3, 1.0, g}, s.point.energy);
        ASSERT_NEAR(state.energy, s.point.energy, 1e-9);
        const auto poly = oracle::bargmann_polynomial(state, sx, sx * g, n);
        EXPECT_LT(poly.tail, 1e-8) << "n=" << n << " g=" << g;
        EXPECT_LT(oracle::set_distance(oracle::roots(poly.coeffs), s.roots.roots), 1e-6) << "n=" << n << " g=" << g;
    }
}

TEST(SolveBethe, BranchSymmetry)
{
    for (int n = 2; n <= 4; ++n) {
        for (const auto& q : qes_points(reference, n, Branch::plus).points) {
            const auto a = solve_bethe(reference.with_g(q.g), n, Branch::plus);
            const auto b = solve_bethe(reference.with_g(q.g).with_epsilon(-0.3), n, Branch::minus);
            std::vector<cplx> neg;
            for (const auto& z : b.roots)
                neg.push_back(-z);
            EXPECT_LT(match_root_sets(a.roots, neg), 1e-8);
        }
    }
}

TEST(SolveBethe, ConjugateClosure)
{
    for (const auto& s : all_points(5)) {
        for (const auto& z : s.roots.roots) {
            bool paired = z.imag() == 0.0;
            for (const auto& w : s.roots.roots)
                paired = paired || w == std::conj(z);
            EXPECT_TRUE(paired);
        }
    }
}

TEST(SolveBethe, RejectsNonQesCoupling)
{
    EXPECT_THROW(solve_bethe(reference.with_g(0.33), 2, Branch::plus), BetheError);
}

TEST(ToGaudin, FirstLevelTable)
{
    const auto gp = to_gaudin(solve_bethe(reference.with_g(0.2), 1, Branch::plus));
    EXPECT_NEAR(gp.A, -0.4, 1e-15);
    EXPECT_NEAR(gp.B, 1.6, 1e-15);
    EXPECT_NEAR(gp.C, 0.0, 1e-15);
    EXPECT_NEAR(gp.gamma, 0.4, 1e-15);
    EXPECT_EQ(gp.M, 1);
    EXPECT_NEAR(gp.v[0].real(), 3.8, 1e-10);
    EXPECT_NEAR(gp.calE, -1.52, 1e-10);
    // printed n = 1 value of v1
    EXPECT_NEAR(gp.v[0].real(), (1 - 2 * 0.04 + 2 * 0.3) / (2 * 0.2), 1e-10);
}

TEST(ToGaudin, SecondFamilyTable)
{
    const auto q = qes_points(reference, 2, Branch::minus).points.at(0);
    const auto gp = to_gaudin(solve_bethe(reference.with_g(q.g), 2, Branch::minus));
    EXPECT_NEAR(gp.A, 2 * q.g, 1e-15);
    EXPECT_NEAR(gp.B, 1.0, 1e-15);
    EXPECT_NEAR(gp.C, 2 - 0.6, 1e-15);
    EXPECT_NEAR(gp.gamma, 2 * q.g, 1e-15);
}

TEST(ToGaudin, EnergyIdentityEverywhere)
{
    for (const auto& s : all_points(5)) {
        const auto gp = to_gaudin(s.roots);
        const double g = s.point.g;
        EXPECT_NEAR(gp.calE, -1.44 - 2 * s.point.n * g * g, 1e-8);
        cplx sum = 0.0;
        for (const auto& v : gp.v)
            sum += v;
        EXPECT_NEAR((gp.A * sum).real(), gp.calE, 1e-12);
    }
}

TEST(ToGaudin, RejectsInvalidRoots)
{
    auto r = solve_bethe(reference.with_g(0.2), 1, Branch::plus);
    r.roots[0] += 0.1;
    EXPECT_THROW(to_gaudin(r), BetheError);
}

TEST(QFromRoots, FirstLevel)
{
    const auto q = q_from_roots(solve_bethe(reference.with_g(0.2), 1, Branch::plus));
    EXPECT_NEAR(q.q.values[1] / q.q.values[0], -0.9, 1e-12);
    EXPECT_EQ(q.degenerate_factors, 0);
}

TEST(QFromRoots, AgreesWithRecurrence)
{
    for (const auto& s : all_points(5)) {
        const auto rec = q_sequence_truncated(s.point.n, reference.with_g(s.point.g), s.point.branch);
        const auto fr = q_from_roots(s.roots);
        for (int k = 0; k <= s.point.n; ++k)
            EXPECT_NEAR(fr.q.values[k] / fr.q.values[0], rec.values[k] / rec.values[0],
                        1e-8 * std::max(1.0, std::abs(rec.values[k])));
    }
}

TEST(QFromRoots, SymmetricPolynomialOracle)
{
    // Q_k proportional to e_{n-k}(w) with w_i = (g - omega s z_i)/(g + omega s z_i)
    for (const auto& s : all_points(4)) {
        const int n = s.point.n;
        const double g = s.point.g, sg = sign(s.point.branch);
        std::vector<cplx> w;
        for (const auto& z : s.roots.roots)
            w.push_back((g - sg * z) / (g + sg * z));
        const auto e = oracle::elementary_symmetric(w);
        const auto fr = q_from_roots(s.roots);
        for (int k = 0; k <= n; ++k) {
            const cplx ratio = e[n - k] / e[n];
            EXPECT_NEAR(ratio.real(), fr.q.values[k] / fr.q.values[0], 1e-8 * std::max(1.0, std::abs(ratio)));
            EXPECT_NEAR(ratio.imag(), 0.0, 1e-8 * std::max(1.0, std::abs(ratio)));
        }
    }
}

TEST(QFromRoots, DegenerateFactorFlagged)
{
    BetheRoots r = solve_bethe(ModelParams{0.0, 0.3, 1.0, 0.35}, 1, Branch::plus);
    const auto q = q_from_roots(r);
    EXPECT_EQ(q.degenerate_factors, 1);
    EXPECT_EQ(q.q.values[0], 1.0);
    for (std::size_t k = 1; k < q.q.values.size(); ++k)
        EXPECT_EQ(q.q.values[k], 0.0);
}

TEST(MatchRootSets, Permutation)
{
    const std::vector<cplx> a{{1, 0}, {2, 1}, {2, -1}};
    const std::vector<cplx> b{{2, -1}, {1, 1e-9}, {2, 1}};
    EXPECT_NEAR(match_root_sets(a, b), 1e-9, 1e-15);
}
