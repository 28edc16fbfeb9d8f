#pragma once

// Reduction of bounded matrix cocycles over a rotation:
//
//   orbit of (x0, v0) under (x, P) ↦ (Tx, A(x)·P)  →  bucket by base cell
//   → φ(cell) = center of the bucket  →  B = φ^{1/2}
//   → Ã(x) = B(Tx)^{-1} A(x) B(x), orthogonal up to the reported defect.
//
// The conformal variant runs the same steps in Conf(n) with A normalized to |det| = 1.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "base_dynamics.hpp"
#include "centers.hpp"
#include "cocycles.hpp"
#include "error.hpp"
#include "linalg.hpp"
#include "parallel.hpp"
#include "space.hpp"
#include "spd_geometry.hpp"

namespace cocycle {

namespace detail {

/// exp of a general small matrix by scaling and squaring with a Taylor core.
inline Matrix expm(const Matrix& a)
{
    require_square(a);
    const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    if (norm > 0.5)
        squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    const Matrix x = a / std::ldexp(1.0, squarings);
    Matrix term = Matrix::Identity(a.rows(), a.cols());
    Matrix sum = term;
    for (int k = 1; k <= 20; ++k) {
        term = term * x / static_cast<double>(k);
        sum += term;
    }
    for (int i = 0; i < squarings; ++i)
        sum = sum * sum;
    return sum;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

/// A(x) = B(Tx) Q(x) B(x)^{-1} over a rotation base, with the invariant section φ*(x) = B(x)B(x)^T
/// attached and the product bound (sup‖B‖)(sup‖B^{-1}‖) estimated on a 4096 grid.
inline MatrixCocycle construct_coboundary(Base base, std::function<Matrix(double)> b_gen,
                                          std::function<Matrix(double)> q_gen)
{
    require(static_cast<bool>(b_gen) && static_cast<bool>(q_gen), ErrorKind::ConfigInvalid, "missing loop");
    const Matrix b0 = b_gen(0.0);
    require_square(b0);
    const int n = static_cast<int>(b0.rows());
    double sup_b = 0.0, sup_binv = 0.0;
    for (int i = 0; i < 4096; ++i) {
        const double x = i / 4096.0;
        const Matrix b = b_gen(x);
        const Matrix q = q_gen(x);
        require_same_dim(b, b0);
        require_same_dim(q, b0);
        require(orthogonality_defect(q) <= 1e-10, ErrorKind::NotOrthogonal,
                "Q loop is not orthogonal at x = " + std::to_string(x));
        require_invertible(b);
        const Vector s = singular_values(b);
        sup_b = std::max(sup_b, s(0));
        sup_binv = std::max(sup_binv, 1.0 / s(s.size() - 1));
    }
    MatrixCocycle c(base, n, [base, b_gen, q_gen](double x) -> Matrix {
        return b_gen(base.step(x)) * q_gen(x) * b_gen(x).inverse();
    });
    c.bound = sup_b * sup_binv;
    c.oracle = [b_gen](double x) { return SpdMatrix::unchecked(symmetrized(b_gen(x) * b_gen(x).transpose())); };
    return c;
}

/// Symmetric 2×2 matrix with eigenvalues (norm, 0) along the direction at angle π/6.
inline Matrix preset_s0(double norm)
{
    const Matrix r = rotation2(std::numbers::pi / 6.0);
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = norm;
    return symmetrized(r * d * r.transpose());
}

/// B(x) = exp(sin(2πx) S0), Q(x) = rotation by 2πx.
inline MatrixCocycle coboundary_preset(Base base, double s0_norm = 0.7)
{
    const Matrix s0 = preset_s0(s0_norm);
    auto b = [s0](double x) -> Matrix {
        return spd_exp(SymmetricMatrix(std::sin(2.0 * std::numbers::pi * x) * s0)).matrix();
    };
    auto q = [](double x) -> Matrix { return rotation2(2.0 * std::numbers::pi * x); };
    return construct_coboundary(base, b, q);
}

/// A(x) = c(x) B(Tx) Q(x) B(x)^{-1} with det B = 1 (traceless S0) and c(x) = exp(0.3 cos 2πx).
inline MatrixCocycle conformal_coboundary_preset(Base base, double s0_norm = 0.5)
{
    Matrix s0 = preset_s0(s0_norm);
    s0 -= (s0.trace() / 2.0) * Matrix::Identity(2, 2);
    auto b = [s0](double x) -> Matrix {
        return spd_exp(SymmetricMatrix(std::sin(2.0 * std::numbers::pi * x) * s0)).matrix();
    };
    auto q = [](double x) -> Matrix { return rotation2(2.0 * std::numbers::pi * x); };
    MatrixCocycle inner = construct_coboundary(base, b, q);
    MatrixCocycle c(base, 2, [inner](double x) -> Matrix {
        return std::exp(0.3 * std::cos(2.0 * std::numbers::pi * x)) * inner.at(x);
    });
    c.oracle = inner.oracle;
    return c;
}

/// A(x) = (2 + cos 2πx) · rotation by 2π(x + sin 2πx / 3).
inline MatrixCocycle scalar_orthogonal_preset(Base base)
{
    MatrixCocycle c(base, 2, [](double x) -> Matrix {
        const double t = 2.0 * std::numbers::pi * x;
        return (2.0 + std::cos(t)) * rotation2(t + std::sin(t) / 3.0);
    });
    c.oracle = [](double) { return SpdMatrix::identity(2); };
    return c;
}

// ---------------------------------------------------------------------------
// Fiber sampling
// ---------------------------------------------------------------------------

enum class FiberGeometry { Pos, Conf };

struct FiberBuckets {
    int cells = 0;
    std::int64_t steps = 0;
    std::vector<std::vector<double>> xs;
    std::vector<std::vector<SpdMatrix>> points;
    std::vector<double> diameters; ///< filled by cell_diameters
    std::size_t min_occupancy = 0;
    double mean_occupancy = 0.0;

    double cell_center(int i) const { return (i + 0.5) / cells; }
};

inline int cell_of(double x, int cells)
{
    return std::min(cells - 1, static_cast<int>(wrap01(x) * cells));
}

struct SampleOptions {
    double x0 = 0.0;
    std::optional<SpdMatrix> v0; ///< default: identity
    FiberGeometry geometry = FiberGeometry::Pos;
};

/// Follows one orbit of the skew map and buckets its points by base cell.
inline FiberBuckets sample_fibers(const MatrixCocycle& c, std::int64_t steps, int cells, const SampleOptions& opt = {})
{
    require(cells >= 1, ErrorKind::ConfigInvalid, "need at least one cell");
    require(steps >= 50LL * cells, ErrorKind::PreconditionViolated,
            "steps must be at least 50 per cell (" + std::to_string(50LL * cells) + ")");
    require(steps <= 100'000'000, ErrorKind::PreconditionViolated, "steps above 1e8");
    FiberBuckets fb;
    fb.cells = cells;
    fb.steps = steps;
    fb.xs.resize(static_cast<std::size_t>(cells));
    fb.points.resize(static_cast<std::size_t>(cells));
    SpdMatrix v = opt.v0 ? *opt.v0 : SpdMatrix::identity(c.dim());
    require(v.dim() == c.dim(), ErrorKind::DimensionMismatch, "initial fiber point has the wrong dimension");
    if (opt.geometry == FiberGeometry::Conf)
        v = normalize_det(v);
    for (std::int64_t k = 0; k < steps; ++k) {
        const double x = c.base().step_n(opt.x0, k);
        const auto cell = static_cast<std::size_t>(cell_of(x, cells));
        fb.xs[cell].push_back(x);
        fb.points[cell].push_back(v);
        const Matrix a = c.at(x);
        v = opt.geometry == FiberGeometry::Pos ? gl_action(a, v) : conf_action(a, v);
    }
    std::vector<int> empty;
    std::size_t total = 0;
    fb.min_occupancy = fb.points.front().size();
    for (int i = 0; i < cells; ++i) {
        const std::size_t m = fb.points[static_cast<std::size_t>(i)].size();
        if (m == 0)
            empty.push_back(i);
        fb.min_occupancy = std::min(fb.min_occupancy, m);
        total += m;
    }
    fb.mean_occupancy = static_cast<double>(total) / cells;
    if (!empty.empty()) {
        std::string list;
        for (std::size_t i = 0; i < empty.size() && i < 20; ++i)
            list += (i ? "," : "") + std::to_string(empty[i]);
        if (empty.size() > 20)
            list += ",...";
        throw EmptyCellError(empty, std::to_string(empty.size()) + " of " + std::to_string(cells) +
                                        " cells unvisited (" + list + "); increase steps or use a minimal base");
    }
    return fb;
}

/// Per-cell diameters in the Pos(n) metric (quadratic in occupancy).
inline void cell_diameters(FiberBuckets& fb, unsigned threads = 1)
{
    const SpdSpace space(fb.points.front().front().dim());
    fb.diameters.assign(static_cast<std::size_t>(fb.cells), 0.0);
    parallel_for(static_cast<std::size_t>(fb.cells), threads,
                 [&](std::size_t i) { fb.diameters[i] = diameter(space, fb.points[i]); });
}

enum class CenterKind { Chebyshev, BruhatTits };

/// φ(cell) = center of the bucket, computed independently per cell.
inline std::vector<SpdMatrix> section_from_centers(const FiberBuckets& fb, FiberGeometry geometry = FiberGeometry::Pos,
                                                   CenterKind kind = CenterKind::Chebyshev, unsigned threads = 1,
                                                   double tol = 1e-9)
{
    require(fb.cells >= 1, ErrorKind::EmptySet, "no cells");
    for (int i = 0; i < fb.cells; ++i)
        if (fb.points[static_cast<std::size_t>(i)].empty())
            throw EmptyCellError({i}, "cell " + std::to_string(i) + " is empty");
    const int n = fb.points.front().front().dim();
    std::vector<SpdMatrix> phi(static_cast<std::size_t>(fb.cells), SpdMatrix::identity(n));
    CenterOptions opt;
    opt.tol = tol;
    parallel_for(static_cast<std::size_t>(fb.cells), threads, [&](std::size_t i) {
        const auto& pts = fb.points[i];
        if (geometry == FiberGeometry::Pos) {
            const SpdSpace space(n);
            phi[i] = kind == CenterKind::Chebyshev ? chebyshev_center(space, pts, opt).center
                                                   : bt_center(space, pts, 60, 1e-3);
        } else {
            const ConfSpace space(n);
            phi[i] = kind == CenterKind::Chebyshev ? chebyshev_center(space, pts, opt).center
                                                   : bt_center(space, pts, 60, 1e-3);
        }
    });
    return phi;
}

// ---------------------------------------------------------------------------
// Reduced cocycles
// ---------------------------------------------------------------------------

struct ReductionResult {
    int cells = 0;
    std::vector<double> xs;            ///< cell representative points
    std::vector<SpdMatrix> phi;        ///< invariant section on the cells
    std::vector<Matrix> b;             ///< B = φ^{1/2}
    std::vector<Matrix> reduced;       ///< Ã on the cells
    std::vector<double> defects;       ///< per-cell orthogonality defect
    std::vector<double> invariance;    ///< per-cell d(A·φ(x), φ(next cell))
    std::vector<double> oracle_gap;    ///< per-cell d(φ, φ*) when an oracle is attached
    double defect = 0.0;
    double invariance_residual = 0.0;
    double oracle_distance = 0.0;
    double max_distortion = 1.0;       ///< sup quasiconformal distortion of the reduced cocycle
};

namespace detail {

inline ReductionResult reduce_on_cells(const MatrixCocycle& c, const std::vector<SpdMatrix>& phi,
                                       FiberGeometry geometry)
{
    require(c.base().is_rotation(), ErrorKind::PreconditionViolated, "cell reduction needs a rotation base");
    const int cells = static_cast<int>(phi.size());
    require(cells >= 1, ErrorKind::EmptySet, "empty section");
    ReductionResult r;
    r.cells = cells;
    r.phi = phi;
    for (int i = 0; i < cells; ++i) {
        require(phi[static_cast<std::size_t>(i)].dim() == c.dim(), ErrorKind::DimensionMismatch,
                "section has the wrong dimension");
        r.xs.push_back((i + 0.5) / cells);
        r.b.push_back(spd_sqrt(phi[static_cast<std::size_t>(i)]).matrix());
    }
    const Matrix id = Matrix::Identity(c.dim(), c.dim());
    for (int i = 0; i < cells; ++i) {
        const double x = r.xs[static_cast<std::size_t>(i)];
        const int j = cell_of(x + c.base().alpha(), cells);
        Matrix a = c.at(x);
        if (geometry == FiberGeometry::Conf)
            a *= conf_normalizer(a);
        const Matrix at = r.b[static_cast<std::size_t>(j)].inverse() * a * r.b[static_cast<std::size_t>(i)];
        const double defect = (at.transpose() * at - id).norm();
        r.reduced.push_back(at);
        r.defects.push_back(defect);
        r.defect = std::max(r.defect, defect);
        r.max_distortion = std::max(r.max_distortion, quasiconformal_distortion(at));
        const SpdMatrix moved = geometry == FiberGeometry::Pos ? gl_action(c.at(x), phi[static_cast<std::size_t>(i)])
                                                               : conf_action(c.at(x), phi[static_cast<std::size_t>(i)]);
        const double inv = spd_distance(moved, phi[static_cast<std::size_t>(j)]);
        r.invariance.push_back(inv);
        r.invariance_residual = std::max(r.invariance_residual, inv);
        if (c.oracle) {
            SpdMatrix target = c.oracle(x);
            if (geometry == FiberGeometry::Conf)
                target = normalize_det(target);
            const double gap = spd_distance(phi[static_cast<std::size_t>(i)], target);
            r.oracle_gap.push_back(gap);
            r.oracle_distance = std::max(r.oracle_distance, gap);
        }
    }
    return r;
}

} // namespace detail

/// B = φ^{1/2} per cell; Ã(x_i) = B(cell of x_i + α)^{-1} A(x_i) B(x_i); defect = sup ‖ÃᵀÃ − Id‖_F.
inline ReductionResult reduce_to_orthogonal(const MatrixCocycle& c, const std::vector<SpdMatrix>& phi)
{
    return detail::reduce_on_cells(c, phi, FiberGeometry::Pos);
}

/// Same in Conf(n), with A replaced by λ(x)A(x), λ = conf_normalizer(A(x)).
inline ReductionResult reduce_to_conformal(const MatrixCocycle& c, const std::vector<SpdMatrix>& phi)
{
    std::vector<SpdMatrix> normalized;
    normalized.reserve(phi.size());
    for (const auto& p : phi)
        normalized.push_back(normalize_det(p));
    return detail::reduce_on_cells(c, normalized, FiberGeometry::Conf);
}

/// Reduction with the attached exact section, evaluated at x and at x + α (no cell lookup).
inline ReductionResult reduce_with_oracle(const MatrixCocycle& c, int cells, FiberGeometry geometry = FiberGeometry::Pos)
{
    require(static_cast<bool>(c.oracle), ErrorKind::ConfigInvalid, "cocycle has no attached section");
    require(cells >= 1, ErrorKind::ConfigInvalid, "need at least one cell");
    ReductionResult r;
    r.cells = cells;
    const Matrix id = Matrix::Identity(c.dim(), c.dim());
    auto section = [&](double x) {
        SpdMatrix p = c.oracle(x);
        return geometry == FiberGeometry::Conf ? normalize_det(p) : p;
    };
    for (int i = 0; i < cells; ++i) {
        const double x = (i + 0.5) / cells;
        const SpdMatrix p = section(x);
        const SpdMatrix p_next = section(c.base().step(x));
        const Matrix b = spd_sqrt(p).matrix();
        const Matrix b_next = spd_sqrt(p_next).matrix();
        Matrix a = c.at(x);
        if (geometry == FiberGeometry::Conf)
            a *= conf_normalizer(a);
        const Matrix at = b_next.inverse() * a * b;
        const double defect = (at.transpose() * at - id).norm();
        r.xs.push_back(x);
        r.phi.push_back(p);
        r.b.push_back(b);
        r.reduced.push_back(at);
        r.defects.push_back(defect);
        r.defect = std::max(r.defect, defect);
        r.max_distortion = std::max(r.max_distortion, quasiconformal_distortion(at));
        const SpdMatrix moved = geometry == FiberGeometry::Pos ? gl_action(c.at(x), p) : conf_action(c.at(x), p);
        const double inv = spd_distance(moved, p_next);
        r.invariance.push_back(inv);
        r.invariance_residual = std::max(r.invariance_residual, inv);
    }
    return r;
}

struct PipelineOptions {
    std::int64_t steps = 200'000;
    int cells = 512;
    SampleOptions sample;
    CenterKind center = CenterKind::Chebyshev;
    unsigned threads = 1;
    bool diameters = false;
    double center_tol = 1e-9;
};

struct PipelineResult {
    FiberBuckets buckets;
    ReductionResult reduction;
};

inline PipelineResult reduction_pipeline(const MatrixCocycle& c, const PipelineOptions& opt)
{
    PipelineResult out;
    out.buckets = sample_fibers(c, opt.steps, opt.cells, opt.sample);
    if (opt.diameters)
        cell_diameters(out.buckets, opt.threads);
    const auto phi = section_from_centers(out.buckets, opt.sample.geometry, opt.center, opt.threads, opt.center_tol);
    out.reduction = opt.sample.geometry == FiberGeometry::Pos ? reduce_to_orthogonal(c, phi)
                                                              : reduce_to_conformal(c, phi);
    return out;
}

} // namespace cocycle
