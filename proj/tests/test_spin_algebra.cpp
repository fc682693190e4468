#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "qsync/husimi.hpp"
#include "qsync/spin_algebra.hpp"
#include "test_util.hpp"

using namespace qsync;
using qsync::tu::expm;
using qsync::tu::max_abs;

namespace {

const std::vector<double> kSpins{0.5, 1.0, 1.5, 2.0, 2.5, 3.0};

TEST(SpinAlgebra, SpinHalfIsPauliOverTwo) {
    const auto alg = build_spin_algebra(0.5);
    ASSERT_EQ(alg.dim(), 2);
    EXPECT_DOUBLE_EQ(alg.sz(0, 0).real(), 0.5);
    EXPECT_DOUBLE_EQ(alg.sz(1, 1).real(), -0.5);
    CMatrix sp_expected = CMatrix::Zero(2, 2);
    sp_expected(0, 1) = 1.0;
    EXPECT_LT(max_abs(alg.sp - sp_expected), 1e-15);
}

TEST(SpinAlgebra, SpinOneLadder) {
    const auto alg = build_spin_algebra(1.0);
    EXPECT_LT(max_abs(alg.sz - CMatrix(RVector::LinSpaced(3, 1.0, -1.0).cast<cplx>().asDiagonal())),
              1e-15);
    EXPECT_NEAR(alg.sp(0, 1).real(), std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(alg.sp(1, 2).real(), std::sqrt(2.0), 1e-15);
    EXPECT_EQ(alg.sp.cwiseAbs().sum(), alg.sp(0, 1).real() + alg.sp(1, 2).real());
}

TEST(SpinAlgebra, SpinTwoCasimir) {
    const auto alg = build_spin_algebra(2.0);
    EXPECT_EQ(alg.dim(), 5);
    const CMatrix casimir = alg.sx * alg.sx + alg.sy * alg.sy + alg.sz * alg.sz;
    EXPECT_LT(max_abs(casimir - 6.0 * alg.identity()), 1e-12);
}

TEST(SpinAlgebra, CommutatorsAndCasimirForManySpins) {
    for (double s : kSpins) {
        const auto a = build_spin_algebra(s);
        EXPECT_LT(max_abs(a.sx * a.sy - a.sy * a.sx - kI * a.sz), 1e-12) << s;
        EXPECT_LT(max_abs(a.sy * a.sz - a.sz * a.sy - kI * a.sx), 1e-12) << s;
        EXPECT_LT(max_abs(a.sz * a.sx - a.sx * a.sz - kI * a.sy), 1e-12) << s;
        EXPECT_LT(max_abs(a.sx * a.sx + a.sy * a.sy + a.sz * a.sz - s * (s + 1) * a.identity()), 1e-12)
            << s;
        EXPECT_LT(max_abs(a.sp - (a.sx + kI * a.sy)), 1e-15) << s;
        EXPECT_LT(max_abs(a.sm - a.sp.adjoint()), 1e-15) << s;
    }
}

TEST(SpinAlgebra, RejectsInvalidSpin) {
    EXPECT_THROW(Spin::from_value(0.0), std::invalid_argument);
    EXPECT_THROW(Spin::from_value(-1.0), std::invalid_argument);
    EXPECT_THROW(Spin::from_value(0.7), std::invalid_argument);
    EXPECT_THROW(Spin::from_twice(0), std::invalid_argument);
    EXPECT_NO_THROW(Spin::from_value(3.5));
}

TEST(WignerSmallD, ZeroAngleIsIdentity) {
    for (double s : kSpins) {
        const auto a = build_spin_algebra(s);
        EXPECT_LT((wigner_small_d(a, 0.0) - RMatrix::Identity(a.dim(), a.dim())).cwiseAbs().maxCoeff(),
                  1e-14);
    }
}

TEST(WignerSmallD, SpinOneQuarterTurnColumn) {
    // oracle: Pade exponential of -i theta S_y
    const auto a = build_spin_algebra(1.0);
    const CMatrix oracle = expm(-kI * (kPi / 2) * a.sy);
    const RMatrix d = wigner_small_d(a, kPi / 2);
    EXPECT_LT((d.cast<cplx>() - oracle).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_NEAR(d(0, 0), 0.5, 1e-14);
    EXPECT_NEAR(d(1, 0), 1.0 / std::sqrt(2.0), 1e-14);
    EXPECT_NEAR(d(2, 0), 0.5, 1e-14);
}

TEST(WignerSmallD, SpinOneHalfTurnFlipsM) {
    const auto a = build_spin_algebra(1.0);
    const RMatrix d = wigner_small_d(a, kPi);
    const CMatrix oracle = expm(-kI * kPi * a.sy);
    EXPECT_LT((d.cast<cplx>() - oracle).cwiseAbs().maxCoeff(), 1e-13);
    RMatrix expected(3, 3);
    expected << 0, 0, 1, 0, -1, 0, 1, 0, 0;
    EXPECT_LT((d - expected).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(WignerSmallD, MatchesExponentialOracleAndIsOrthogonal) {
    for (double s : kSpins) {
        const auto a = build_spin_algebra(s);
        for (int k = 0; k < 5; ++k) {
            const double th = qsync::tu::uniform(0.0, kPi);
            const RMatrix d = wigner_small_d(a, th);
            EXPECT_LT((d.cast<cplx>() - expm(-kI * th * a.sy)).cwiseAbs().maxCoeff(), 1e-12) << s;
            EXPECT_LT((d * d.transpose() - RMatrix::Identity(a.dim(), a.dim())).cwiseAbs().maxCoeff(),
                      1e-13);
        }
    }
}

TEST(WignerSmallD, GroupProperty) {
    for (double s : kSpins) {
        const auto a = build_spin_algebra(s);
        for (int k = 0; k < 10; ++k) {
            const double t1 = qsync::tu::uniform(-kPi, kPi);
            const double t2 = qsync::tu::uniform(-kPi, kPi);
            const RMatrix lhs = wigner_small_d(a, t1) * wigner_small_d(a, t2);
            EXPECT_LT((lhs - wigner_small_d(a, t1 + t2)).cwiseAbs().maxCoeff(), 1e-12) << s;
        }
    }
}

TEST(CoherentState, NorthPoleIsExtremalState) {
    const auto a = build_spin_algebra(1.5);
    const double phi = 1.234;
    const CVector psi = coherent_state(a, SphereDirection::make(0.0, phi));
    CVector expected = CVector::Zero(4);
    expected(0) = std::exp(-kI * 1.5 * phi);
    EXPECT_LT((psi - expected).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(CoherentState, SpinOneEquatorAtZeroAzimuth) {
    const auto a = build_spin_algebra(1.0);
    const CVector psi = coherent_state(a, SphereDirection::make(kPi / 2, 0.0));
    const CVector oracle = expm(-kI * (kPi / 2) * a.sy).col(0);
    EXPECT_LT((psi - oracle).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_NEAR(psi(0).real(), 0.5, 1e-14);
    EXPECT_NEAR(psi(1).real(), 1 / std::sqrt(2.0), 1e-14);
    EXPECT_NEAR(psi(2).real(), 0.5, 1e-14);
}

TEST(CoherentState, MatchesComposedExponentialsWithPhases) {
    for (double s : kSpins) {
        const auto a = build_spin_algebra(s);
        const auto dir = qsync::tu::random_direction();
        const CVector oracle =
            expm(-kI * dir.phi * a.sz) * expm(-kI * dir.theta * a.sy) * a.dicke(s);
        EXPECT_LT((coherent_state(a, dir) - oracle).cwiseAbs().maxCoeff(), 1e-12) << s;
    }
}

TEST(CoherentState, SpinExpectationPointsAlongDirection) {
    for (double s : kSpins) {
        const auto a = build_spin_algebra(s);
        for (int k = 0; k < 20; ++k) {
            const auto dir = qsync::tu::random_direction();
            const CVector psi = coherent_state(a, dir);
            EXPECT_NEAR(psi.norm(), 1.0, 1e-12);
            EXPECT_LT((spin_expectation(a, psi) - s * dir.unit_vector()).norm(), 1e-12) << s;
        }
    }
}

TEST(CoherentOverlap, SpecialCases) {
    const auto a = build_spin_algebra(1.0);
    const auto d1 = SphereDirection::make(0.7, 2.1);
    EXPECT_NEAR(std::abs(coherent_overlap(a, d1, d1)), 1.0, 1e-14);
    const auto anti = SphereDirection::make(kPi - 0.7, 2.1 + kPi);
    EXPECT_NEAR(std::abs(coherent_overlap(a, d1, anti)), 0.0, 1e-14);
    // orthogonal directions: ((1 + 0)/2)^2 = 1/4
    const auto x = SphereDirection::make(kPi / 2, 0.0);
    const auto y = SphereDirection::make(kPi / 2, kPi / 2);
    EXPECT_NEAR(std::norm(coherent_overlap(a, x, y)), 0.25, 1e-14);
}

TEST(CoherentOverlap, OverlapLawOnRandomPairs) {
    for (double s : kSpins) {
        const auto a = build_spin_algebra(s);
        for (int k = 0; k < 100; ++k) {
            const auto d1 = qsync::tu::random_direction();
            const auto d2 = qsync::tu::random_direction();
            const double law = std::pow(0.5 * (1.0 + d1.unit_vector().dot(d2.unit_vector())), 2 * s);
            EXPECT_NEAR(std::norm(coherent_overlap(a, d1, d2)), law, 1e-12);
        }
    }
}

TEST(FreeEvolve, IdentityAtZeroTime) {
    const auto a = build_spin_algebra(2.0);
    const CVector psi = coherent_state(a, qsync::tu::random_direction());
    EXPECT_LT((free_evolve(a, psi, 3.0, 0.0) - psi).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(FreeEvolve, CoherentStatesPrecessInAzimuth) {
    for (double s : kSpins) {
        const auto a = build_spin_algebra(s);
        for (int k = 0; k < 10; ++k) {
            const auto dir = qsync::tu::random_direction();
            const double w = qsync::tu::uniform(0.1, 3.0);
            const double t = qsync::tu::uniform(0.0, 10.0);
            const CVector evolved = free_evolve(a, coherent_state(a, dir), w, t);
            const CVector target = coherent_state(a, SphereDirection::make(dir.theta, dir.phi + w * t));
            EXPECT_NEAR(std::abs(target.dot(evolved)), 1.0, 1e-12);
        }
    }
}

TEST(FreeEvolve, FullRevolutionIsGlobalPhase) {
    const auto a = build_spin_algebra(1.5);
    const CVector psi = coherent_state(a, qsync::tu::random_direction());
    const double w = 1.7;
    const CVector back = free_evolve(a, psi, w, 2 * kPi / w);
    EXPECT_NEAR(std::abs(psi.dot(back)), 1.0, 1e-12);
}

TEST(FreeEvolve, RejectsWrongDimension) {
    const auto a = build_spin_algebra(1.0);
    EXPECT_THROW(free_evolve(a, CVector::Zero(2), 1.0, 1.0), std::invalid_argument);
}

TEST(Completeness, QuadratureResolvesIdentity) {
    const SphereGrid grid = make_grid();
    for (double s : kSpins) {
        const auto a = build_spin_algebra(s);
        CMatrix acc = CMatrix::Zero(a.dim(), a.dim());
        for (int i = 0; i < grid.n_theta(); ++i) {
            for (int j = 0; j < grid.n_phi(); ++j) {
                const CVector psi = coherent_state(a, {grid.theta[i], grid.phi[j]});
                acc += grid.theta_weights[i] * grid.phi_step() * (psi * psi.adjoint());
            }
        }
        EXPECT_LT(max_abs(acc - (4 * kPi / a.dim()) * a.identity()), 1e-10) << s;
    }
}

}  // namespace
