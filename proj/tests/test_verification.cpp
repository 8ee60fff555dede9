#include "dfslab/errors.hpp"
#include "dfslab/verification.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace dfslab;

TEST(FibonacciSphere, PointsOnSphereAndBalanced) {
    const auto pts = fibonacci_sphere(200, 2.0);
    Vec3 centroid = Vec3::Zero();
    for (const auto& p : pts) {
        EXPECT_NEAR(p.norm(), 2.0, 1e-12);
        centroid += p;
    }
    EXPECT_LT((centroid / 200.0).norm(), 0.05);
}

TEST(GramRank, TwoDistinctPositionsMatchSincGram) {
    // Over the sphere <e_m, e_n> is proportional to sinc(k |x_m - x_n|); the
    // sampled F^dagger F / S approaches [[1, s], [s, 1]] with singular values
    // sqrt(S (1 -+ s)).
    const double sep = 0.5, k = k0;
    const int samples = 64;
    const GramReport r = gram_rank_check({Vec3::Zero(), Vec3(0, 0, sep)}, k, samples);
    EXPECT_EQ(r.rank_at_tol, 2);
    const double s = std::sin(k * sep) / (k * sep);
    EXPECT_NEAR(r.singular_values[0], std::sqrt(samples * (1 + std::abs(s))), 0.05 * std::sqrt(samples));
    EXPECT_NEAR(r.singular_values[1], std::sqrt(samples * (1 - std::abs(s))), 0.05 * std::sqrt(samples));

    // Nonzero sinc: separation 0.3 lambda0.
    const GramReport r2 = gram_rank_check({Vec3::Zero(), Vec3(0.3, 0, 0)}, k, 256);
    const double s2 = std::sin(k * 0.3) / (k * 0.3);
    EXPECT_NEAR(r2.singular_values[0] * r2.singular_values[0] / 256, 1 + std::abs(s2), 0.01);
    EXPECT_NEAR(r2.singular_values[1] * r2.singular_values[1] / 256, 1 - std::abs(s2), 0.01);
}

TEST(GramRank, DuplicatedPositionLosesOneRank) {
    const Vec3 x(0.1, 0.2, 0.3);
    const GramReport r = gram_rank_check({x, x}, k0, 64);
    EXPECT_EQ(r.rank_at_tol, 1);
    EXPECT_LE(r.singular_values[1] / r.singular_values[0], 1e-12);
}

TEST(GramRank, CollinearWithMonomials) {
    const std::vector<Vec3> pos{Vec3(0, 0, 0), Vec3(0, 0, 0.2), Vec3(0, 0, 0.5)};
    const std::vector<Monomial> deg{{0, 0, 0}, {0, 0, 1}, {0, 0, 2}};
    const GramReport r = gram_rank_check(pos, k0, 48, deg);
    EXPECT_EQ(r.rank_at_tol, 3);
    // Same point with distinct monomials is still independent (different polynomials).
    const GramReport same = gram_rank_check({Vec3::Zero(), Vec3::Zero()}, k0, 48,
                                            std::vector<Monomial>{{0, 0, 0}, {0, 0, 1}});
    EXPECT_EQ(same.rank_at_tol, 2);
}

TEST(GramRank, ReportInvariantsAndErrors) {
    const GramReport r = gram_rank_check({Vec3::Zero(), Vec3(0.2, 0, 0), Vec3(0, 0.4, 0)}, k0, 48);
    EXPECT_EQ(r.n_functions, 3);
    EXPECT_EQ(r.n_samples, 48);
    for (std::size_t i = 1; i < r.singular_values.size(); ++i) {
        EXPECT_GE(r.singular_values[i - 1], r.singular_values[i]);
        EXPECT_GE(r.singular_values[i], 0.0);
    }
    EXPECT_THROW(gram_rank_check({Vec3::Zero(), Vec3(1, 0, 0)}, k0, 7), ConfigError);
    EXPECT_THROW(gram_rank_check({Vec3::Zero()}, 0.0, 16), ConfigError);
    EXPECT_THROW(gram_rank_check({Vec3::Zero()}, k0, 16, std::vector<Monomial>{}), ConfigError);
}

TEST(GramRank, FullRankForDistinctAndDeficiencyPerDuplicate) {
    std::mt19937_64 rng(61);
    std::uniform_int_distribution<int> count(2, 8);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = count(rng);
        std::vector<Vec3> pos = random_configuration(rng, n, 1.5, 0.05).positions();
        EXPECT_EQ(gram_rank_check(pos, k0, samples_per_function * n).rank_at_tol, n);
        const int dups = 1 + trial % 2;
        for (int d = 0; d < dups; ++d) pos.push_back(pos[static_cast<std::size_t>(d)]);
        const int total = n + dups;
        EXPECT_EQ(gram_rank_check(pos, k0, samples_per_function * total).rank_at_tol, n);
    }
}

TEST(MinEigenvalue, Examples) {
    EXPECT_NEAR(min_nontrivial_eigenvalue(line_config(2, 0.25, LineOrientation::axial)),
                1.0 - oracle::gamma_axial_quarter, 1e-14);
    const double four = min_nontrivial_eigenvalue(line_config(4, 0.25, LineOrientation::axial));
    EXPECT_NEAR(four, oracle::line4_axial_quarter[0], 1e-13);
    EXPECT_NEAR(1.0 / four, 109.0, 0.02 * 109.0);
    EXPECT_THROW(min_nontrivial_eigenvalue(AtomConfiguration::dicke_limit(2)), ConfigError);
}

TEST(MinEigenvalue, StrictlyPositiveAwayFromDickeLimit) {
    std::mt19937_64 rng(62);
    std::uniform_int_distribution<int> count(2, 8);
    for (int trial = 0; trial < 50; ++trial) {
        EXPECT_GT(min_nontrivial_eigenvalue(random_configuration(rng, count(rng), 1.5, 0.05)), 1e-12);
    }
}

TEST(DickeConvergence, TwoAtomAxialFamily) {
    const GeometryFamily pair = [](double r) { return line_config(2, r, LineOrientation::axial); };
    std::vector<double> rs;
    for (int i = 0; i < 40; ++i) rs.push_back(0.2 * std::pow(1e-3 / 0.2, i / 39.0));
    const DickeTable t = dicke_convergence(pair, rs);
    EXPECT_TRUE(t.all_positive);
    EXPECT_TRUE(t.monotone);
    const double u = k0 * 1e-3;
    EXPECT_NEAR(t.rows.back().min_eigenvalue, u * u / 10.0, 0.01 * u * u / 10.0);
    EXPECT_NEAR(t.rows.back().min_eigenvalue, oracle::one_minus_gamma_axial_1e3, 1e-15);
}

TEST(DickeConvergence, LargeSeparationApproachesIsolatedAtoms) {
    const GeometryFamily pair = [](double r) { return line_config(2, r, LineOrientation::axial); };
    const DickeTable t = dicke_convergence(pair, {1e6, 0.25});
    EXPECT_NEAR(t.rows[0].min_eigenvalue, 1.0, 1e-6);
    EXPECT_NEAR(t.rows[1].min_eigenvalue, 1.0 - oracle::gamma_axial_quarter, 1e-14);
}

TEST(DickeConvergence, RejectsBadGrid) {
    const GeometryFamily pair = [](double r) { return line_config(2, r, LineOrientation::axial); };
    EXPECT_THROW(dicke_convergence(pair, {0.1, 0.2}), ConfigError);
    EXPECT_THROW(dicke_convergence(pair, {0.1, 0.0}), ConfigError);
    EXPECT_THROW(dicke_convergence(pair, {}), ConfigError);
}

TEST(RandomConfiguration, RespectsMinimumSeparation) {
    std::mt19937_64 rng(63);
    for (int trial = 0; trial < 20; ++trial) {
        const auto atoms = random_configuration(rng, 8, 1.0, 0.1);
        EXPECT_GE(atoms.min_separation(), 0.1);
        EXPECT_NEAR(atoms.dipole().norm(), 1.0, 1e-12);
    }
    EXPECT_THROW(random_configuration(rng, 50, 0.01, 0.5), ConfigError);
}
