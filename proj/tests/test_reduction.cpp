#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace cocycle;

namespace {

SpdMatrix anisotropic()
{
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 1.5;
    d(1, 1) = 1.0 / 1.5;
    return SpdMatrix(d);
}

MatrixCocycle identity_cocycle()
{
    return MatrixCocycle(Base::golden(), 2, [](double) -> Matrix { return Matrix::Identity(2, 2); });
}

} // namespace

TEST(Coboundary, TrivialLoopsGiveIdentity)
{
    const auto c = construct_coboundary(
        Base::golden(), [](double) -> Matrix { return Matrix::Identity(2, 2); },
        [](double) -> Matrix { return Matrix::Identity(2, 2); });
    for (double x : {0.0, 0.4, 0.9})
        EXPECT_LT((c.at(x) - Matrix::Identity(2, 2)).norm(), 1e-15);
    EXPECT_NEAR(*c.bound, 1.0, 1e-15);
}

TEST(Coboundary, RejectsNonOrthogonalLoop)
{
    try {
        construct_coboundary(
            Base::golden(), [](double) -> Matrix { return Matrix::Identity(2, 2); },
            [](double) -> Matrix { return 2.0 * Matrix::Identity(2, 2); });
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotOrthogonal);
    }
}

TEST(Coboundary, ConformalPresetSectionIsUnimodular)
{
    const auto c = conformal_coboundary_preset(Base::golden());
    EXPECT_NEAR(c.oracle(0.3).determinant(), 1.0, 1e-12);
    const auto r = reduce_with_oracle(c, 64, FiberGeometry::Conf);
    EXPECT_LE(r.defect, 1e-9);
}

TEST(FiberSampling, IdentityCocycleHasSingletonFibers)
{
    SampleOptions opt;
    opt.v0 = anisotropic();
    auto fb = sample_fibers(identity_cocycle(), 5000, 50, opt);
    cell_diameters(fb);
    for (int i = 0; i < 50; ++i) {
        EXPECT_LT(fb.diameters[static_cast<std::size_t>(i)], 1e-14);
        for (const auto& p : fb.points[static_cast<std::size_t>(i)])
            EXPECT_EQ(p.matrix(), anisotropic().matrix());
    }
    EXPECT_GE(fb.min_occupancy, 1u);
    EXPECT_NEAR(fb.mean_occupancy, 100.0, 1e-12);
}

TEST(FiberSampling, ParabolicBaseLeavesCellsEmpty)
{
    const MatrixCocycle c(Base::parabolic(), 2, [](double) -> Matrix { return Matrix::Identity(2, 2); });
    try {
        sample_fibers(c, 10000, 100);
        FAIL();
    } catch (const EmptyCellError& e) {
        EXPECT_FALSE(e.cells().empty());
        EXPECT_EQ(exit_code_for(e.kind()), ExitCode::Numeric);
    }
}

TEST(FiberSampling, NeedsFiftyStepsPerCell)
{
    try {
        sample_fibers(identity_cocycle(), 1000, 100);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::PreconditionViolated);
    }
}

TEST(FiberSampling, OrbitOnTheSectionHasShrinkingCells)
{
    const auto c = coboundary_preset(Base::golden(), 0.7);
    SampleOptions opt;
    opt.v0 = c.oracle(0.0);
    auto coarse = sample_fibers(c, 20000, 64, opt);
    auto fine = sample_fibers(c, 80000, 256, opt);
    cell_diameters(coarse);
    cell_diameters(fine);
    const double dc = *std::max_element(coarse.diameters.begin(), coarse.diameters.end());
    const double df = *std::max_element(fine.diameters.begin(), fine.diameters.end());
    EXPECT_LT(df, dc);
    EXPECT_LT(df, 0.05);
}

TEST(FiberSampling, DiameterSpreadShrinksUnderRefinement)
{
    const auto c = coboundary_preset(Base::golden(), 0.7);
    SampleOptions opt;
    opt.v0 = anisotropic();
    auto spread = [&](int cells) {
        auto fb = sample_fibers(c, 200LL * cells, cells, opt);
        cell_diameters(fb);
        const auto [lo, hi] = std::minmax_element(fb.diameters.begin(), fb.diameters.end());
        return *hi - *lo;
    };
    EXPECT_LT(spread(256), spread(32));
}

TEST(Section, SingletonFibersReturnThePoint)
{
    SampleOptions opt;
    opt.v0 = anisotropic();
    const auto fb = sample_fibers(identity_cocycle(), 2000, 20, opt);
    for (const auto& p : section_from_centers(fb))
        EXPECT_LT((p.matrix() - anisotropic().matrix()).norm(), 1e-12);
}

TEST(Section, ApproachesTheAttachedSection)
{
    const auto c = coboundary_preset(Base::golden(), 0.7);
    PipelineOptions small;
    small.sample.v0 = anisotropic();
    small.cells = 64;
    small.steps = 20000;
    PipelineOptions large = small;
    large.cells = 256;
    large.steps = 120000;
    const auto a = reduction_pipeline(c, small).reduction;
    const auto b = reduction_pipeline(c, large).reduction;
    EXPECT_GT(a.oracle_distance, 0.0);
    EXPECT_LT(b.oracle_distance, a.oracle_distance);
    EXPECT_LT(b.defect, a.defect);
}

TEST(Section, CentersCommuteWithCongruence)
{
    const auto c = coboundary_preset(Base::golden(), 0.7);
    SampleOptions opt;
    opt.v0 = anisotropic();
    const auto fb = sample_fibers(c, 4000, 20, opt);
    std::mt19937_64 rng(1);
    const Matrix g = oracle::random_gl(2, rng);
    FiberBuckets moved = fb;
    for (auto& cell : moved.points)
        for (auto& p : cell)
            p = gl_action(g, p);
    const auto phi = section_from_centers(fb);
    const auto phi_moved = section_from_centers(moved);
    for (std::size_t i = 0; i < phi.size(); ++i)
        EXPECT_LT(spd_distance(gl_action(g, phi[i]), phi_moved[i]), 1e-6);
}

TEST(Section, ThreadCountDoesNotChangeResults)
{
    const auto c = coboundary_preset(Base::golden(), 0.7);
    SampleOptions opt;
    opt.v0 = anisotropic();
    const auto fb = sample_fibers(c, 6400, 64, opt);
    const auto one = section_from_centers(fb, FiberGeometry::Pos, CenterKind::Chebyshev, 1);
    const auto many = section_from_centers(fb, FiberGeometry::Pos, CenterKind::Chebyshev, 4);
    for (std::size_t i = 0; i < one.size(); ++i)
        EXPECT_EQ(one[i].matrix(), many[i].matrix());
}

TEST(Section, MidpointCentersAlsoReduce)
{
    const auto c = coboundary_preset(Base::golden(), 0.7);
    PipelineOptions opt;
    opt.sample.v0 = anisotropic();
    opt.cells = 64;
    opt.steps = 12800;
    opt.center = CenterKind::BruhatTits;
    const auto r = reduction_pipeline(c, opt).reduction;
    EXPECT_LT(r.defect, 0.2);
}

TEST(Reduction, TrivialCocycleHasNoDefect)
{
    const std::vector<SpdMatrix> phi(16, SpdMatrix::identity(2));
    const auto r = reduce_to_orthogonal(identity_cocycle(), phi);
    EXPECT_EQ(r.defect, 0.0);
    for (const auto& a : r.reduced)
        EXPECT_EQ(a, Matrix::Identity(2, 2));
}

TEST(Reduction, AttachedSectionGivesOrthogonalCocycle)
{
    const auto r = reduce_with_oracle(coboundary_preset(Base::golden(), 0.7), 512);
    EXPECT_LE(r.defect, 1e-9);
    EXPECT_LE(r.invariance_residual, 1e-9);
    for (const auto& a : r.reduced)
        EXPECT_LT(orthogonality_defect(a), 1e-9);
}

TEST(Reduction, ScalarTimesOrthogonalWithIdentitySection)
{
    const std::vector<SpdMatrix> phi(256, SpdMatrix::identity(2));
    const auto r = reduce_to_conformal(scalar_orthogonal_preset(Base::golden()), phi);
    EXPECT_LE(r.defect, 1e-9);
    EXPECT_NEAR(r.max_distortion, 1.0, 1e-6);
}

TEST(Reduction, DefectIsControlledByInvarianceResidual)
{
    const auto c = coboundary_preset(Base::golden(), 0.7);
    PipelineOptions opt;
    opt.sample.v0 = anisotropic();
    opt.cells = 128;
    opt.steps = 40000;
    const auto r = reduction_pipeline(c, opt).reduction;
    EXPECT_LE(r.defect, 5.0 * r.invariance_residual);
}

TEST(Reduction, ConformalPipelineKeepsDistortionNearOne)
{
    PipelineOptions opt;
    opt.sample.v0 = anisotropic();
    opt.sample.geometry = FiberGeometry::Conf;
    opt.cells = 128;
    opt.steps = 40000;
    const auto r = reduction_pipeline(conformal_coboundary_preset(Base::golden()), opt).reduction;
    EXPECT_LT(r.defect, 0.05);
    EXPECT_LT(r.max_distortion - 1.0, 0.05);
    for (const auto& p : r.phi)
        EXPECT_NEAR(p.determinant(), 1.0, 1e-10);
}
