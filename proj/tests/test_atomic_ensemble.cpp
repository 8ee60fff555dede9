#include "dfslab/atomic_ensemble.hpp"
#include "dfslab/errors.hpp"
#include "dfslab/verification.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

using namespace dfslab;

namespace {

double coupling(double x, double y, double z, const Vec3& d) {
    return gamma_jk(Vec3(x, y, z), d);
}

std::vector<double> eigenvalues(const RealMatrix& m) {
    const RealVector v = symmetric_eig(m).eigenvalues;
    return {v.data(), v.data() + v.size()};
}

} // namespace

TEST(GammaJk, AxialQuarterWavelength) {
    EXPECT_NEAR(coupling(0, 0, 0.25, Vec3::UnitZ()), oracle::gamma_axial_quarter, 1e-14);
}

TEST(GammaJk, TransverseHalfWavelength) {
    EXPECT_NEAR(coupling(0, 0, 0.5, Vec3::UnitX()), oracle::gamma_transverse_half, 1e-14);
}

TEST(GammaJk, ConvergesToOneAtSmallSeparation) {
    // Taylor oracle, axial: gamma = 1 - u^2/10 + u^4/280.
    for (double r : {1e-3, 1e-4, 1e-5}) {
        const double u = k0 * r;
        const double taylor = 1.0 - u * u / 10.0 + u * u * u * u / 280.0;
        EXPECT_NEAR(coupling(0, 0, r, Vec3::UnitZ()), taylor, 1e-11) << r;
        EXPECT_NEAR(coupling(r, 0, 0, Vec3::UnitZ()), 1.0, 2.0 * u * u / 10.0) << r;
    }
    EXPECT_NEAR(1.0 - coupling(0, 0, 1e-3, Vec3::UnitZ()), oracle::one_minus_gamma_axial_1e3, 1e-15);
    EXPECT_EQ(coupling(0, 0, 0, Vec3::UnitX()), 1.0);
    EXPECT_EQ(coupling(0, 0, 0.5 * dicke_epsilon, Vec3::UnitX()), 1.0);
}

TEST(GammaJk, SeriesBranchAgreesWithClosedFormAcrossThreshold) {
    // Just below and above the series threshold the two evaluation paths must agree.
    const double r_lo = (1.0 - 1e-9) * series_threshold / k0, r_hi = (1.0 + 1e-9) * series_threshold / k0;
    for (const Vec3& d : {Vec3(Vec3::UnitZ()), Vec3(Vec3::UnitX()), Vec3(0.6, 0.0, 0.8)}) {
        const double lo = coupling(0, 0, r_lo, d), hi = coupling(0, 0, r_hi, d);
        EXPECT_NEAR(lo, hi, 1e-11);
    }
}

TEST(GammaJk, MatchesLongDoubleClosedForm) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 500; ++trial) {
        const double x[3] = {coord(rng), coord(rng), coord(rng)};
        Vec3 d(nd(rng), nd(rng), nd(rng));
        d.normalize();
        const double dd[3] = {d.x(), d.y(), d.z()};
        if (Vec3(x[0], x[1], x[2]).norm() < 0.05) continue;
        EXPECT_NEAR(gamma_jk(Vec3(x[0], x[1], x[2]), d), oracle::gamma_pair(x, dd), 1e-13);
    }
}

TEST(GammaJk, ParityAndRotationInvariance) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 200; ++trial) {
        const Vec3 x(nd(rng), nd(rng), nd(rng));
        Vec3 d(nd(rng), nd(rng), nd(rng));
        d.normalize();
        EXPECT_EQ(gamma_jk(x, d), gamma_jk(-x, d));
        const Eigen::Matrix3d rot =
            Eigen::Quaterniond(nd(rng), nd(rng), nd(rng), nd(rng)).normalized().toRotationMatrix();
        EXPECT_NEAR(gamma_jk(rot * x, rot * d), gamma_jk(x, d), 1e-13);
    }
}

TEST(AtomConfigurationType, Invariants) {
    EXPECT_THROW(AtomConfiguration({}, Vec3::UnitZ()), ConfigError);
    EXPECT_THROW(AtomConfiguration({Vec3::Zero()}, Vec3(1.0, 1.0, 0.0)), ConfigError);
    EXPECT_THROW(AtomConfiguration({Vec3::Zero(), Vec3::Zero()}, Vec3::UnitZ()), ConfigError);
    EXPECT_NO_THROW(AtomConfiguration({Vec3::Zero(), Vec3::Zero()}, Vec3::UnitZ(), 1.0, true));
    EXPECT_THROW(AtomConfiguration({Vec3::Zero()}, Vec3::UnitZ(), 0.0), ConfigError);
}

TEST(ReducedMatrix, TwoAtomsAxialQuarter) {
    const RealMatrix m = reduced_matrix(line_config(2, 0.25, LineOrientation::axial));
    EXPECT_EQ(m(0, 0), 1.0);
    EXPECT_EQ(m(1, 1), 1.0);
    EXPECT_NEAR(m(0, 1), oracle::gamma_axial_quarter, 1e-14);
    const auto ev = eigenvalues(m);
    EXPECT_NEAR(ev[0], 1.0 - oracle::gamma_axial_quarter, 1e-14);
    EXPECT_NEAR(ev[1], 1.0 + oracle::gamma_axial_quarter, 1e-14);
}

TEST(ReducedMatrix, DickeFlagIsAllOnes) {
    for (int n = 1; n <= 6; ++n) {
        const RealMatrix m = reduced_matrix(AtomConfiguration::dicke_limit(n));
        EXPECT_EQ(m, RealMatrix::Ones(n, n));
        const auto ev = eigenvalues(m);
        EXPECT_NEAR(ev.back(), n, 1e-12);
        for (int i = 0; i + 1 < n; ++i) EXPECT_NEAR(ev[i], 0.0, 1e-12);
    }
}

TEST(ReducedMatrix, FarApartIsIdentity) {
    const RealMatrix m = reduced_matrix(line_config(2, 1e7, LineOrientation::transverse));
    EXPECT_NEAR(m(0, 1), 0.0, 1e-7);
}

TEST(ReducedMatrix, FourAtomLineAxialQuarter) {
    const auto ev = eigenvalues(reduced_matrix(line_config(4, 0.25, LineOrientation::axial)));
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(ev[i], oracle::line4_axial_quarter[i], 1e-13);
}

TEST(ReducedMatrix, SquareQuarter) {
    const auto ev = eigenvalues(reduced_matrix(square_config(0.25)));
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(ev[i], oracle::square_quarter_x[i], 1e-13);
}

TEST(ReducedMatrix, InvariantsOnRandomConfigurations) {
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> count(2, 8);
    std::uniform_real_distribution<double> box(0.3, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
        const AtomConfiguration atoms = random_configuration(rng, count(rng), box(rng), 0.05);
        const RealMatrix m = reduced_matrix(atoms);
        EXPECT_EQ(m, m.transpose());
        for (int i = 0; i < m.rows(); ++i) EXPECT_EQ(m(i, i), 1.0);
        EXPECT_LE((m - RealMatrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff(), 1.0 + 1e-9);
        EXPECT_GE(symmetric_eig(m).eigenvalues(0), -1e-10);
    }
}

TEST(Geometry, Line) {
    const auto a = line_config(4, 0.25, LineOrientation::axial);
    EXPECT_EQ(a.size(), 4);
    EXPECT_TRUE(a.positions()[3].isApprox(Vec3(0, 0, 0.75)));
    EXPECT_EQ(a.dipole(), Vec3::UnitZ());
    const auto t = line_config(4, 0.25, LineOrientation::transverse);
    EXPECT_EQ(t.dipole(), Vec3::UnitX());
    EXPECT_NEAR(t.dipole().dot(t.positions()[1] - t.positions()[0]), 0.0, 0.0);
    const auto one = line_config(1, 0.3, LineOrientation::axial);
    EXPECT_EQ(reduced_matrix(one), RealMatrix::Ones(1, 1));
    EXPECT_THROW(line_config(0, 0.3, LineOrientation::axial), ConfigError);
    EXPECT_THROW(line_config(2, 0.0, LineOrientation::axial), ConfigError);
}

TEST(Geometry, SquareDistancesAndCouplings) {
    const auto sq = square_config(0.25);
    std::vector<double> dist;
    std::set<long long> couplings;
    const RealMatrix m = reduced_matrix(sq);
    for (int j = 0; j < 4; ++j) {
        for (int k = j + 1; k < 4; ++k) {
            dist.push_back((sq.positions()[j] - sq.positions()[k]).norm());
            couplings.insert(std::llround(m(j, k) * 1e12));
        }
    }
    std::sort(dist.begin(), dist.end());
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(dist[i], 0.25, 1e-15);
    for (int i = 4; i < 6; ++i) EXPECT_NEAR(dist[i], 0.25 * std::sqrt(2.0), 1e-15);
    // sides parallel to d, sides perpendicular to d, diagonals
    EXPECT_EQ(couplings.size(), 3u);
    EXPECT_THROW(square_config(-1.0), ConfigError);
}

TEST(Geometry, Ring) {
    const auto r4 = ring_config(4, 0.3);
    for (int i = 0; i < 4; ++i) {
        const double side = (r4.positions()[i] - r4.positions()[(i + 1) % 4]).norm();
        EXPECT_NEAR(side, 0.3 * std::sqrt(2.0), 1e-15);
    }
    EXPECT_EQ(r4.dipole(), Vec3::UnitZ());
    EXPECT_NEAR(ring_config(14, 1.0).min_separation(), 2.0 * std::sin(std::numbers::pi / 14), 1e-15);
    // Paper-quoted smallest interatomic distance at n = 14, radius = lambda0.
    EXPECT_NEAR(ring_config(14, 1.0).min_separation(), 0.45, 0.01);

    const auto r2 = ring_config(2, 0.4);
    EXPECT_NEAR((r2.positions()[0] - r2.positions()[1]).norm(), 0.8, 1e-15);
    // Normal dipoles on a two-atom ring are transverse to the pair axis.
    EXPECT_NEAR(reduced_matrix(r2)(0, 1), reduced_matrix(line_config(2, 0.8, LineOrientation::transverse))(0, 1), 1e-14);
    EXPECT_THROW(ring_config(1, 1.0), ConfigError);
}

TEST(FullGamma, SingleAtom) {
    const ComplexMatrix g = full_gamma(AtomConfiguration({Vec3::Zero()}, Vec3::UnitZ(), 2.5));
    EXPECT_TRUE(g.isApprox(2.5 * projector(basis_state(2, 1))));
}

TEST(FullGamma, DickePair) {
    const auto s = hermitian_eig(full_gamma(AtomConfiguration::dicke_limit(2)));
    const double expected[4] = {0.0, 0.0, 2.0, 2.0};
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(s.eigenvalues(i), expected[i], 1e-13);
}

TEST(FullGamma, AxialPairQuarter) {
    const auto s = hermitian_eig(full_gamma(line_config(2, 0.25, LineOrientation::axial)));
    const double g = oracle::gamma_axial_quarter;
    const double expected[4] = {0.0, 1.0 - g, 1.0 + g, 2.0};
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(s.eigenvalues(i), expected[i], 1e-13);
}

TEST(FullGamma, MatchesProductConstruction) {
    std::mt19937_64 rng(31);
    for (int n = 1; n <= 5; ++n) {
        const AtomConfiguration atoms = random_configuration(rng, n, 1.0, 0.05);
        const ComplexMatrix direct = full_gamma(atoms);
        const ComplexMatrix product = oracle::gamma_by_products(reduced_matrix(atoms));
        EXPECT_LT((direct - product).cwiseAbs().maxCoeff(), 1e-14) << n;
    }
}

TEST(FullGamma, GroundStateInKernel) {
    std::mt19937_64 rng(32);
    for (int n = 1; n <= 6; ++n) {
        const ComplexMatrix g = full_gamma(random_configuration(rng, n, 1.0, 0.05));
        EXPECT_EQ(g.col(0).norm(), 0.0);
        EXPECT_EQ(g.row(0).norm(), 0.0);
    }
}

TEST(FullGamma, DickeKernelGrowsWithN) {
    // Co-located atoms: kernel dimension 2^N - (number of states with nonzero
    // collective decay) grows beyond one; separated atoms keep only the ground.
    for (int n = 2; n <= 5; ++n) {
        const auto dicke = hermitian_eig(full_gamma(AtomConfiguration::dicke_limit(n))).eigenvalues;
        const auto spread = hermitian_eig(full_gamma(line_config(n, 0.2, LineOrientation::axial))).eigenvalues;
        const long dicke_kernel = std::count_if(dicke.begin(), dicke.end(), [](double v) { return v < 1e-10; });
        const long spread_kernel = std::count_if(spread.begin(), spread.end(), [](double v) { return v < 1e-10; });
        EXPECT_GT(dicke_kernel, 1) << n;
        EXPECT_EQ(spread_kernel, 1) << n;
    }
}

TEST(FullGamma, CapEnforced) {
    EXPECT_THROW(full_gamma(line_config(max_particles + 1, 0.3, LineOrientation::axial)), ConfigError);
}

TEST(AtomicModel, JumpDecompositionReproducesGamma) {
    std::mt19937_64 rng(40);
    for (int n = 1; n <= 5; ++n) {
        const AtomConfiguration atoms = random_configuration(rng, n, 0.8, 0.05);
        const LindbladModel model = atomic_model(atoms);
        EXPECT_LT((decoherence_operator(model) - full_gamma(atoms)).norm(), 1e-12);
        for (const auto& j : model.jumps()) {
            EXPECT_GT(j.rate, 1e-12);
            EXPECT_TRUE(check_nilpotent(j.op));
        }
    }
    // The Dicke limit keeps only the superradiant mode.
    EXPECT_EQ(atomic_model(AtomConfiguration::dicke_limit(3)).jumps().size(), 1u);
}

TEST(ManifoldSpectra, TwoAtomPredictions) {
    const auto report = verify_manifold_spectra(line_config(2, 0.25, LineOrientation::axial), 1e-12);
    EXPECT_TRUE(report.passed) << report.max_error();
    // For N = 2 the hole family (N - 2 + lambda) lands on the same values 1 -+ gamma12.
    ASSERT_EQ(report.entries.size(), 2u);
    EXPECT_NEAR(report.entries[0].lambda, 1.0 - oracle::gamma_axial_quarter, 1e-14);
    EXPECT_NEAR(report.entries[1].lambda, 1.0 + oracle::gamma_axial_quarter, 1e-14);
    for (const auto& e : report.entries) {
        EXPECT_LT(e.single_distance, 1e-12);
        EXPECT_LT(e.hole_distance, 1e-12);
    }
}

TEST(ManifoldSpectra, EquilateralTriangle) {
    const double s = 0.3;
    const AtomConfiguration tri({Vec3(0, 0, 0), Vec3(s, 0, 0), Vec3(s / 2, s * std::sqrt(3.0) / 2, 0)}, Vec3::UnitZ());
    const auto report = verify_manifold_spectra(tri, 1e-9);
    EXPECT_TRUE(report.passed) << report.max_error();
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(report.entries[i].lambda, oracle::triangle_03_normal[i], 1e-13);
}

TEST(ManifoldSpectra, FourAtomLineAllPredictedValuesPresent) {
    const auto atoms = line_config(4, 0.25, LineOrientation::axial);
    const auto report = verify_manifold_spectra(atoms, 1e-9);
    EXPECT_TRUE(report.passed);
    ASSERT_EQ(report.full_spectrum.size(), 16);
    // Independent oracle: spectrum of the product-built operator.
    const auto brute = hermitian_eig(oracle::gamma_by_products(reduced_matrix(atoms))).eigenvalues;
    for (int i = 0; i < 4; ++i) {
        for (double predicted : {oracle::line4_axial_quarter[i], 2.0 + oracle::line4_axial_quarter[i]}) {
            const double dist = (brute.array() - predicted).abs().minCoeff();
            EXPECT_LT(dist, 1e-9) << predicted;
        }
    }
}

TEST(ManifoldSpectra, InclusionNotEquality) {
    // 2 gamma0 (the |ee> eigenvalue) is in the full spectrum but in neither family.
    const auto report = verify_manifold_spectra(line_config(2, 0.25, LineOrientation::axial));
    const double full_max = report.full_spectrum.maxCoeff();
    EXPECT_NEAR(full_max, 2.0, 1e-13);
    for (const auto& e : report.entries) EXPECT_GT(std::abs(e.lambda - 2.0), 0.1);
}
