#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace cocycle;

namespace {

const double kAlpha = kGoldenMean;

} // namespace

TEST(FourierSolve, ZeroRightHandSide)
{
    EXPECT_TRUE(fourier_solve({kAlpha, 1.0, TrigPoly{}}).is_zero());
}

TEST(FourierSolve, SingleModeClosedForm)
{
    const TrigPoly phi = fourier_solve({kAlpha, 1.0, TrigPoly::mode(1)});
    const Complex expected = 1.0 / (unit_phase(kAlpha) - std::polar(1.0, 1.0));
    EXPECT_NEAR(std::abs(phi.coefficient(1) - expected), 0.0, 1e-15);
    EXPECT_EQ(phi.coefficients().size(), 1u);
}

TEST(FourierSolve, MeanObstruction)
{
    try {
        fourier_solve({kAlpha, 0.0, TrigPoly::constant(1.0)});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::MeanObstruction);
    }
}

TEST(FourierSolve, SmallDivisorListsModes)
{
    const double beta = 2 * std::numbers::pi * wrap01(3 * kAlpha);
    try {
        fourier_solve({kAlpha, beta, TrigPoly({{1, 1.0}, {3, 1.0}})});
        FAIL();
    } catch (const SmallDivisorError& e) {
        EXPECT_EQ(e.kind(), ErrorKind::SmallDivisor);
        EXPECT_EQ(e.modes(), std::vector<int>{3});
    }
}

TEST(FourierSolve, AgreesWithSampledDftSolver)
{
    std::mt19937_64 rng(1);
    const TrigPoly rho = TrigPoly::random(8, rng);
    const double beta = 1.0;
    const TrigPoly phi = fourier_solve({kAlpha, beta, rho});
    const auto ref = oracle::dft_solve(kAlpha, beta, rho.sample(64));
    for (int i = 0; i < 64; ++i)
        EXPECT_NEAR(std::abs(phi(i / 64.0) - ref[static_cast<std::size_t>(i)]), 0.0, 1e-11);
}

TEST(FourierSolve, OrbitValuesFollowTheRecursion)
{
    std::mt19937_64 rng(2);
    const TrigPoly rho = TrigPoly::random(8, rng);
    const double beta = 2.2;
    const TrigPoly phi = fourier_solve({kAlpha, beta, rho});
    const Base base = Base::golden();
    const double x0 = 0.31;
    const auto orbit = oracle::orbit_reconstruct(kAlpha, beta, rho, x0, phi(x0), 200);
    for (int k = 0; k <= 200; ++k)
        EXPECT_NEAR(std::abs(orbit[static_cast<std::size_t>(k)] - phi(base.step_n(x0, k))), 0.0, 1e-9);
}

TEST(FourierSolve, UntwistedZeroMeanMatchesBirkhoffSums)
{
    std::mt19937_64 rng(3);
    const TrigPoly rho = TrigPoly::random(6, rng, false);
    const TrigPoly phi = fourier_solve({kAlpha, 0.0, rho});
    const Base base = Base::golden();
    Complex sum{};
    for (int k = 1; k <= 500; ++k) {
        sum += rho(base.step_n(0.2, k - 1));
        EXPECT_NEAR(std::abs(phi(base.step_n(0.2, k)) - phi(0.2) - sum), 0.0, 1e-11);
    }
}

TEST(FourierSolve, HalfTurnTwistGivesAlternatingEquation)
{
    std::mt19937_64 rng(4);
    const TrigPoly rho = TrigPoly::random(5, rng);
    const TrigPoly phi = fourier_solve({kAlpha, std::numbers::pi, rho});
    for (int i = 0; i < 100; ++i) {
        const double x = i / 100.0;
        EXPECT_NEAR(std::abs(phi(x + kAlpha) + phi(x) - rho(x)), 0.0, 1e-12);
    }
}

TEST(CyclotomicRhs, KnownValues)
{
    std::mt19937_64 rng(5);
    const TrigPoly rho = TrigPoly::random(4, rng);
    const TrigPoly r1 = cyclotomic_rhs(rho, kAlpha, 0.7, 1);
    for (double x : {0.0, 0.3, 0.8})
        EXPECT_NEAR(std::abs(r1(x) - (rho(x + kAlpha) - std::polar(1.0, 0.7) * rho(x))), 0.0, 1e-13);
    const Complex c(2.0, -1.0);
    const TrigPoly rc = cyclotomic_rhs(TrigPoly::constant(c), kAlpha, 0.9, 3);
    EXPECT_EQ(rc.degree(), 0);
    EXPECT_NEAR(std::abs(rc.coefficient(0) - c * (1.0 - std::polar(1.0, 0.3))), 0.0, 1e-15);
}

TEST(CyclotomicSolve, QOneReturnsTheData)
{
    // with q = 1 the cyclotomic sum is the single term φ(θ), so φ = ρ
    std::mt19937_64 rng(6);
    const TrigPoly rho = TrigPoly::random(6, rng);
    const TrigPoly a = cyclotomic_solve(rho, kAlpha, 1.0, 1);
    for (int n = -6; n <= 6; ++n)
        EXPECT_NEAR(std::abs(a.coefficient(n) - rho.coefficient(n)), 0.0, 1e-12);
}

TEST(CyclotomicSolve, SquareRootEquation)
{
    // q = 2, β = 0: φ(θ + α/2) + φ(θ) = ρ(θ)
    const TrigPoly rho = TrigPoly::mode(1, Complex(0.5, 1.0)) + TrigPoly::constant(1.0);
    const TrigPoly phi = cyclotomic_solve(rho, kAlpha, 0.0, 2);
    for (int i = 0; i < 50; ++i) {
        const double x = i / 50.0;
        EXPECT_NEAR(std::abs(phi(x + kAlpha / 2) + phi(x) - rho(x)), 0.0, 1e-12);
    }
    EXPECT_NEAR(std::abs(phi.coefficient(0) - 0.5), 0.0, 1e-15);
}

TEST(CyclotomicSolve, RandomDataAcrossQ)
{
    std::mt19937_64 rng(7);
    const TrigPoly rho = TrigPoly::random(8, rng);
    for (int q : {2, 3, 5}) {
        const TrigPoly phi = cyclotomic_solve(rho, kAlpha, 1.0, q);
        EXPECT_LE(cyclotomic_verify(phi, rho, kAlpha, 1.0, q), 1e-8);
    }
    EXPECT_LE(cyclotomic_verify(cyclotomic_solve(TrigPoly::mode(1), kAlpha, 1.0, 3), TrigPoly::mode(1), kAlpha, 1.0, 3),
              1e-8);
}

TEST(CyclotomicVerify, NeedsFineGrid)
{
    EXPECT_THROW(cyclotomic_verify(TrigPoly{}, TrigPoly{}, kAlpha, 1.0, 2, 1024), Error);
}

TEST(ShiftSolve, ZeroData)
{
    const ShiftCocycle c(Base::golden(), {}, 8);
    const auto s = shift_solve_unilateral(c, 0.4);
    for (const auto& z : s.coords)
        EXPECT_EQ(z, Complex{});
    EXPECT_FALSE(s.not_square_summable);
}

TEST(ShiftSolve, SingleModeIsExplicitAndNotSquareSummable)
{
    const ShiftCocycle c = ShiftCocycle::single_mode(Base::golden(), 64);
    const double x = 0.23;
    const auto s = shift_solve_unilateral(c, x);
    for (int j = 0; j <= 64; ++j)
        EXPECT_NEAR(std::abs(s.at(j) - unit_phase(x - (j + 1) * kAlpha)), 0.0, 1e-12);
    EXPECT_NEAR(s.norm, std::sqrt(65.0), 1e-10);
    EXPECT_TRUE(s.not_square_summable);
}

TEST(ShiftSolve, GeometricConstantsStayBelowTwo)
{
    const auto s = shift_solve_unilateral(ShiftCocycle::geometric_constants(Base::golden(), 40), 0.6);
    for (int j = 0; j <= 40; ++j)
        EXPECT_NEAR(s.at(j).real(), 2.0 - std::ldexp(1.0, -j), 1e-14);
    EXPECT_TRUE(s.not_square_summable);
}

TEST(ShiftSolve, RecoversGeometricSection)
{
    const int depth = 6;
    const ShiftCocycle c = ShiftCocycle::geometric_coboundary(Base::golden(), depth, 20);
    const auto section = ShiftCocycle::geometric_section(depth);
    for (double x : {0.0, 0.17, 0.71}) {
        const auto s = shift_solve_unilateral(c, x);
        EXPECT_LE(s.invariance_residual, 1e-12);
        for (int j = 0; j <= 20; ++j) {
            const Complex expected = j <= depth ? section.at(j)(x) : Complex{};
            EXPECT_NEAR(std::abs(s.at(j) - expected), 0.0, 1e-12);
        }
        EXPECT_FALSE(s.not_square_summable);
    }
}

TEST(ShiftSolve, TruncationBelowSupport)
{
    try {
        shift_solve_unilateral(ShiftCocycle::geometric_coboundary(Base::golden(), 5, 3), 0.1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::TruncationTooSmall);
    }
}

TEST(ShiftSolve, BilateralTailControlsResidual)
{
    const ShiftCocycle c(Base::golden(), {{-1, TrigPoly::mode(1, 0.5)}, {1, TrigPoly::mode(-1, 0.25)}}, 6, true);
    const auto exact = shift_solve_bilateral(c, 0.3, 20);
    EXPECT_EQ(exact.residual_bound, 0.0);
    EXPECT_LE(exact.invariance_residual, 1e-13);
    const auto cut = shift_solve_bilateral(c, 0.3, 3);
    EXPECT_GT(cut.residual_bound, 0.0);
    EXPECT_LE(cut.invariance_residual, cut.residual_bound + 1e-10);
    EXPECT_EQ(exact.first_index, -6);
}

TEST(ShiftOrbitBound, HoldsOnGeometricCoboundary)
{
    const ShiftCocycle c = ShiftCocycle::geometric_coboundary(Base::golden(), 4, 10);
    const auto r = check_shift_orbit_bound(c, 0.0, {0.1, 0.5, 0.77}, 5000);
    EXPECT_GT(r.constant_c, 0.0);
    EXPECT_TRUE(r.pass);
}

TEST(Uniqueness, SolutionsDifferByConstants)
{
    std::mt19937_64 rng(8);
    const TrigPoly rho = TrigPoly::random(4, rng, false);
    const TwistedEquation eq{kAlpha, 0.0, rho};
    const TrigPoly phi = fourier_solve(eq);
    const auto r = uniqueness_gap(phi, phi + TrigPoly::constant(5.0), eq);
    EXPECT_LE(r.max_dev_from_const, 1e-12);
    EXPECT_NEAR(std::abs(r.mean + 5.0), 0.0, 1e-12);
    EXPECT_FALSE(r.mean_must_vanish);

    const TwistedEquation twisted{kAlpha, 1.0, rho};
    try {
        const TrigPoly psi = fourier_solve(twisted);
        uniqueness_gap(psi, psi + TrigPoly::constant(5.0), twisted);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotASolution);
    }
}

TEST(Oscillation, SmoothSectionsScaleLinearly)
{
    const auto g = ComplexGrid::sample([](double t) { return unit_phase(t); }, 4096);
    // center and scales sit on grid points so the window is exact
    const auto r = oscillation_estimate(g, 0.25, {1.0 / 32, 1.0 / 64, 1.0 / 128});
    // |e^{2πi s} − e^{−2πi s}| = 2 sin(2πs) ≈ 4πs
    EXPECT_NEAR(r.values[0], 2 * std::sin(2 * std::numbers::pi / 32), 1e-3);
    EXPECT_NEAR(r.values[1] / r.values[2], 2.0, 0.05);
    EXPECT_EQ(r.value, r.values[2]);
}

TEST(Oscillation, ScaleTooFine)
{
    const auto g = ComplexGrid::sample([](double t) { return Complex(t, 0); }, 256);
    try {
        oscillation_estimate(g, 0.5, {1.0 / 256});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ScaleTooFine);
    }
}

TEST(Oscillation, SawtoothKeepsItsJump)
{
    const auto g = ComplexGrid::sample([](double t) { return Complex(Sawtooth{1.0}(t), 0); }, 2048);
    for (double s : {0.2, 0.05, 0.01}) {
        const auto r = oscillation_estimate(g, 0.0, {s});
        EXPECT_GE(r.value, 0.9);
    }
}

TEST(Oscillation, InvariantUnderTheBaseForInvariantSections)
{
    // near-resonant twist: the section dominates ρ, so osc(φ∘T) ≈ osc(φ)
    const double beta = 2 * std::numbers::pi * kAlpha + 0.05;
    const TrigPoly phi = fourier_solve({kAlpha, beta, TrigPoly::mode(1, 0.1) + TrigPoly::mode(3, 0.05)});
    const auto g = ComplexGrid::sample([&](double t) { return phi(t); }, 4096);
    const double x = 0.27;
    for (double s : {0.05, 0.02}) {
        const double here = oscillation_estimate(g, x, {s}).value;
        const double there = oscillation_estimate(g, Base::golden().step(x), {s}).value;
        EXPECT_NEAR(there / here, 1.0, 0.1);
    }
}
