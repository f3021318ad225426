// Copyright 2026 The qgeom Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qgeom/catalog.hpp"
#include "qgeom/errors.hpp"
#include "qgeom/holonomy.hpp"
#include "qgeom/symmetry.hpp"
#include "test_util.hpp"

namespace qgeom {
namespace {

using std::numbers::pi;
constexpr cplx I{0.0, 1.0};

double dist(const StateVector& a, const StateVector& b) {
    return (a.amplitudes() - b.amplitudes()).norm() / b.amplitudes().norm();
}

StateVector sampled(const GridSpace& g, const std::function<cplx(double)>& f) {
    CVector a(static_cast<Eigen::Index>(g.n_points));
    for (std::size_t k = 0; k < g.n_points; ++k) a(static_cast<Eigen::Index>(k)) = f(g.point(k));
    return StateVector(g, a).normalized();
}

std::vector<Theta> line_samples(double lo, double hi, int n) {
    std::vector<Theta> out;
    for (int k = 0; k < n; ++k) out.push_back({lo + (hi - lo) * k / (n - 1)});
    return out;
}

void expect_antiunitary(const AntiunitaryOp& op, std::mt19937_64& rng, int pairs = 100) {
    for (int k = 0; k < pairs; ++k) {
        const auto u = testing::random_state(rng, op.space());
        const auto v = testing::random_state(rng, op.space());
        EXPECT_LT(std::abs(inner(op(u), op(v)) - std::conj(inner(u, v))), 1e-12);
        // Antilinear: A(c u) = conj(c) A(u).
        const cplx c{0.3, -1.7};
        const StateVector cu(u.space(), c * u.amplitudes());
        EXPECT_LT((op(cu).amplitudes() - std::conj(c) * op(u).amplitudes()).norm(), 1e-12);
    }
}

TEST(BasisConjugation, ConjugatesCoefficients) {
    const BasisSpace b(3);
    const auto k = standard_conjugation(b);
    const StateVector ie1(b, CVector{{I, 0.0, 0.0}});
    EXPECT_LT(dist(k(ie1), StateVector(b, CVector{{-I, 0.0, 0.0}})), 1e-15);
}

TEST(BasisConjugation, FixesRealCombinationsOfTheBasis) {
    std::mt19937_64 rng(5);
    const BasisSpace b(4);
    const CMatrix u = Eigen::HouseholderQR<CMatrix>(testing::random_cvector(rng, 16).reshaped(4, 4)).householderQ();
    std::vector<StateVector> basis;
    for (int k = 0; k < 4; ++k) basis.push_back(StateVector(b, u.col(k)));
    const auto op = conjugation_in_basis(basis);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 10; ++trial) {
        CVector v = CVector::Zero(4);
        for (int k = 0; k < 4; ++k) v += g(rng) * u.col(k);
        const StateVector s(b, v);
        EXPECT_LT(dist(op(s), s), 1e-12);
    }
    // i times a basis vector flips sign.
    const StateVector ib(b, I * u.col(2));
    EXPECT_LT((op(ib).amplitudes() + I * u.col(2)).norm(), 1e-12);
    expect_antiunitary(op, rng);
}

TEST(BasisConjugation, IsAnInvolution) {
    std::mt19937_64 rng(8);
    const BasisSpace b(5);
    std::vector<StateVector> raw;
    for (int k = 0; k < 5; ++k) raw.push_back(testing::random_state(rng, b));
    const CMatrix q = Eigen::HouseholderQR<CMatrix>([&] {
                          CMatrix m(5, 5);
                          for (int k = 0; k < 5; ++k) m.col(k) = raw[static_cast<std::size_t>(k)].amplitudes();
                          return m;
                      }())
                          .householderQ();
    std::vector<StateVector> basis;
    for (int k = 0; k < 5; ++k) basis.push_back(StateVector(b, q.col(k)));
    const auto op = conjugation_in_basis(basis);
    for (int trial = 0; trial < 20; ++trial) {
        const auto s = testing::random_state(rng, b);
        EXPECT_LT(dist(op(op(s)), s), 1e-12);
    }
}

TEST(BasisConjugation, IncompleteBasisIsCompletedAndStillFixesItsRealSpan) {
    std::mt19937_64 rng(9);
    const GridSpace g(16, -1.0, 1.0);
    const auto a = testing::random_state(rng, g);
    auto b = testing::random_state(rng, g);
    b = StateVector(g, b.amplitudes() - inner(a, b) * a.amplitudes()).normalized();
    const auto op = conjugation_in_basis({a, b});
    EXPECT_LT(dist(op(a), a), 1e-12);
    EXPECT_LT(dist(op(b), b), 1e-12);
    const StateVector mix(g, 0.6 * a.amplitudes() - 0.8 * b.amplitudes());
    EXPECT_LT(dist(op(mix), mix), 1e-12);
    expect_antiunitary(op, rng, 20);
    for (int trial = 0; trial < 10; ++trial) {
        const auto s = testing::random_state(rng, g);
        EXPECT_LT(dist(op(op(s)), s), 1e-12);
    }
}

TEST(BasisConjugation, NonOrthonormalInputIsRejected) {
    const BasisSpace b(2);
    const StateVector u(b, CVector{{1.0, 0.0}});
    const StateVector v(b, CVector{{1.0, 1.0}});
    EXPECT_THROW((void)conjugation_in_basis({u, v}), NonOrthonormalError);
    EXPECT_THROW((void)conjugation_in_basis({StateVector(b, CVector{{2.0, 0.0}})}), NonOrthonormalError);
}

TEST(TimeReversal, FixesARealGaussian) {
    const GridSpace g(256, -8.0, 8.0);
    const auto s = sampled(g, [](double x) { return cplx(std::exp(-x * x / 2)); });
    EXPECT_LT(dist(time_reversal(s), s), 1e-15);
}

TEST(TimeReversal, ReversesAPlaneWave) {
    const GridSpace g(64, 0.0, 2 * pi, true);
    const auto fwd = sampled(g, [](double x) { return std::exp(3.0 * I * x); });
    const auto bwd = sampled(g, [](double x) { return std::exp(-3.0 * I * x); });
    EXPECT_LT(dist(time_reversal(fwd), bwd), 1e-12);
    EXPECT_LT(dist(time_reversal(time_reversal(fwd)), fwd), 1e-15);
}

TEST(TimeReversal, RequiresAGridState) {
    EXPECT_THROW((void)time_reversal(basis_state(BasisSpace(2), 0)), UnsupportedSpaceError);
}

TEST(GeneralizedTimeReversal, ZeroPhaseIsPointwiseConjugation) {
    std::mt19937_64 rng(21);
    for (std::size_t n : {64u, 65u}) {
        const GridSpace g(n, -3.0, 4.0);
        for (int trial = 0; trial < 5; ++trial) {
            const auto s = testing::random_state(rng, g);
            EXPECT_LT(dist(generalized_time_reversal([](double) { return 0.0; }, s), time_reversal(s)), 1e-12) << n;
        }
    }
}

TEST(GeneralizedTimeReversal, ConstantPhaseIsAGlobalPhase) {
    std::mt19937_64 rng(22);
    const GridSpace g(64, -3.0, 4.0);
    const auto s = testing::random_state(rng, g);
    const auto t = generalized_time_reversal([](double) { return 0.9; }, s);
    EXPECT_LT((t.amplitudes() - std::exp(0.9 * I) * time_reversal(s).amplitudes()).norm(), 1e-12);
}

TEST(GeneralizedTimeReversal, MapsPlaneWavesWithTheMomentumPhase) {
    const GridSpace g(64, 0.0, 2 * pi, true);
    auto alpha = [](double p) { return 0.25 * p * p + 0.1 * p; };
    const auto fwd = sampled(g, [](double x) { return std::exp(5.0 * I * x); });
    const auto bwd = sampled(g, [](double x) { return std::exp(-5.0 * I * x); });
    const auto t = generalized_time_reversal(alpha, fwd);
    EXPECT_LT((t.amplitudes() - std::exp(I * alpha(5.0)) * bwd.amplitudes()).norm(), 1e-12);
}

TEST(GeneralizedTimeReversal, IsAntiunitaryAndAnInvolutionForEvenPhases) {
    std::mt19937_64 rng(23);
    for (std::size_t n : {32u, 33u}) {
        const GridSpace g(n, -2.0, 2.0);
        const auto op = generalized_time_reversal_op(g, [](double p) { return std::cos(p) + 0.3 * p * p; });
        expect_antiunitary(op, rng, 20);
        for (int trial = 0; trial < 5; ++trial) {
            const auto s = testing::random_state(rng, g);
            EXPECT_LT(dist(op(op(s)), s), 1e-12);
        }
    }
}

TEST(MatchedReversal, FixesStatesWithSymmetricMomentumDensity) {
    const GridSpace g(512, -10.0, 10.0);
    // Complex but |Psi(p)| even: displaced and chirped Gaussians.
    for (const auto& prof : {gaussian_profile(1.0, 1.3), gaussian_profile(0.8, 0.0, 0.0, 0.4), hermite_profile(3)}) {
        const auto s = sampled(g, prof.value);
        EXPECT_TRUE(momentum_symmetry_check(s).flag) << prof.description;
        EXPECT_LT(dist(matched_reversal(s)(s), s), 1e-10) << prof.description;
    }
    const auto boosted = sampled(g, gaussian_profile(1.0, 0.0, 1.5).value);
    EXPECT_FALSE(momentum_symmetry_check(boosted).flag);
    EXPECT_GT(dist(matched_reversal(boosted)(boosted), boosted), 1e-3);
}

TEST(MomentumSymmetry, LiteralAndCenteredChecks) {
    const GridSpace g(512, -10.0, 10.0);
    const auto boosted = sampled(g, gaussian_profile(1.0, 0.5, 1.5).value);
    const auto lit = momentum_symmetry_check(boosted);
    EXPECT_FALSE(lit.flag);
    EXPECT_GT(lit.max_asymmetry, 1e-3);
    const auto cen = centered_momentum_symmetry_check(boosted);
    EXPECT_TRUE(cen.flag) << cen.max_asymmetry;
    EXPECT_NEAR(cen.mean_momentum, 1.5, 1e-8);
    EXPECT_THROW((void)momentum_symmetry_check(basis_state(BasisSpace(2), 0)), UnsupportedSpaceError);
}

TEST(Invariance, DefectAndThreshold) {
    const BasisSpace b(2);
    const auto k = standard_conjugation(b);
    const double r = 1 / std::sqrt(2.0);
    const std::vector<StateVector> real{StateVector(b, CVector{{r, r}}), basis_state(b, 1)};
    EXPECT_TRUE(is_invariant(k, real));
    EXPECT_EQ(invariance_defect(k, real), 0.0);
    const std::vector<StateVector> cx{StateVector(b, CVector{{r, I * r}})};
    EXPECT_FALSE(is_invariant(k, cx));
    EXPECT_NEAR(invariance_defect(k, cx), std::sqrt(2.0), 1e-12);
}

struct ProfileCase {
    const char* name;
    Profile profile;
    bool boosted;
};

std::vector<ProfileCase> profile_battery() {
    return {
        {"hermite0", hermite_profile(0), false},
        {"hermite1", hermite_profile(1), false},
        {"hermite4", hermite_profile(4), false},
        {"displaced", gaussian_profile(1.0, 1.3), false},
        {"chirped", gaussian_profile(0.8, 0.0, 0.0, 0.4), false},
        {"boosted", gaussian_profile(1.0, 0.0, 1.5), true},
        {"boosted_chirped", gaussian_profile(1.2, 0.3, -0.8, 0.2), true},
        {"two_well_pi2", two_well_profile(pi / 2), false},
        {"two_well_pi", two_well_profile(pi), false},
        {"cat_quadrature", superposition_profile({{1.0, 1.0, -2.0}, {I, 1.0, 2.0}}), false},
        {"uneven_real_pair", superposition_profile({{1.0, 0.7, -1.5}, {0.6, 1.2, 1.0}}), false},
    };
}

TEST(SymmetryBattery, CenteredMomentumSymmetryTracksQuasiParallelism) {
    const GridSpace g(512, -10.0, 10.0);
    int qp_count = 0, non_qp_count = 0;
    for (const auto& c : profile_battery()) {
        const auto m = position_shift(c.profile, g);
        const auto qp = is_quasi_parallel(m, line_samples(-1.0, 1.0, 9));
        const auto phi0 = m.evaluate(Theta{0.0});
        const auto lit = momentum_symmetry_check(phi0);
        const auto cen = centered_momentum_symmetry_check(phi0);
        EXPECT_EQ(cen.flag, qp.flag) << c.name << " asym " << cen.max_asymmetry << " imag " << qp.max_imag;
        if (c.boosted) {
            EXPECT_TRUE(qp.flag) << c.name;
            EXPECT_FALSE(lit.flag) << c.name;
        } else {
            EXPECT_EQ(lit.flag, qp.flag) << c.name << " asym " << lit.max_asymmetry;
        }
        (qp.flag ? qp_count : non_qp_count)++;
    }
    EXPECT_GE(qp_count, 3);
    EXPECT_GE(non_qp_count, 2);
}

struct NamedModel {
    std::string name;
    PureStateModel model;
    std::vector<Theta> samples;
};

std::vector<NamedModel> catalog_cases() {
    const GridSpace g(256, -8.0, 8.0);
    std::vector<Theta> plane;
    for (double a : {-0.5, 0.0, 0.5})
        for (double b : {-0.5, 0.0, 0.5}) plane.push_back({a, b});
    std::vector<Theta> sphere;
    for (double t : {0.4, 0.9, 1.4})
        for (double p : {0.0, 0.7, 1.4}) sphere.push_back({t, p});
    return {
        {"gaussian_shift", position_shift(hermite_profile(0), g), line_samples(-1, 1, 7)},
        {"hermite2_shift", position_shift(hermite_profile(2), g), line_samples(-1, 1, 7)},
        {"momentum_shift", momentum_shift(hermite_profile(0), g), line_samples(-1, 1, 7)},
        {"phase_space", position_momentum_shift(hermite_profile(0), g), plane},
        {"two_well", two_well(pi / 2), line_samples(-1, 1, 7)},
        {"two_well_real", two_well(0.0), line_samples(-1, 1, 7)},
        {"ring_flux", ring_flux(0.3), line_samples(-1, 1, 7)},
        {"ring_no_flux", ring_flux(0.0), line_samples(-1, 1, 7)},
        {"spin_symmetric", spin_jz(1.0, {0.5, 1 / std::sqrt(2.0), 0.5}), line_samples(-1.5, 1.5, 7)},
        {"spin_asymmetric", spin_jz(1.0, {0.8, 0.6, 0.0}), line_samples(-1.5, 1.5, 7)},
        {"bloch", catalog("bloch", nlohmann::json::object()), sphere},
    };
}

TEST(SymmetryBattery, QuasiParallelIffAnInvariantConjugationExists) {
    int both = 0, neither = 0;
    for (const auto& c : catalog_cases()) {
        const auto qp = is_quasi_parallel(c.model, c.samples);
        const auto built = construct_invariant_conjugation(qp.aligned);
        EXPECT_EQ(qp.flag, built.op.has_value()) << c.name << ": " << built.reason;
        if (built.op) {
            EXPECT_TRUE(is_invariant(*built.op, qp.aligned)) << c.name;
            ++both;
        } else {
            EXPECT_FALSE(built.reason.empty()) << c.name;
            ++neither;
        }
    }
    EXPECT_GE(both, 4);
    EXPECT_GE(neither, 3);
}

TEST(SymmetryBattery, ConjugationInTheSpanFixesEveryAlignedSample) {
    const auto m = spin_jz(1.0, {0.5, 1 / std::sqrt(2.0), 0.5});
    const auto qp = is_quasi_parallel(m, line_samples(-1.0, 1.0, 5));
    ASSERT_TRUE(qp.flag);
    const auto built = construct_invariant_conjugation(qp.aligned);
    ASSERT_TRUE(built.op.has_value());
    EXPECT_LT(built.defect, 1e-10);
    std::mt19937_64 rng(31);
    expect_antiunitary(*built.op, rng, 20);
}

}  // namespace
}  // namespace qgeom
