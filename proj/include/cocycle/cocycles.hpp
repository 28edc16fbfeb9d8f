#pragma once

// Cocycles over circle bases.
//
//   IsometryCocycle  x ↦ I(x) = (Ψ(x), ρ(x)) ∈ O(ℓ) ⋉ R^ℓ, iterated as
//                    I(k, x) = I(T^{k-1}x) ∘ ... ∘ I(x).
//   MatrixCocycle    x ↦ A(x) ∈ GL(n), products A(k, x) = A(T^{k-1}x) ... A(x).
//   ShiftCocycle     Ψ = shift on ℓ²(N) or ℓ²(Z), ρ with finitely many
//                    nonzero coordinates ρ_j(x) given as trig polynomials.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "base_dynamics.hpp"
#include "error.hpp"
#include "linalg.hpp"
#include "spd_geometry.hpp"
#include "trig_poly.hpp"

namespace cocycle {

inline constexpr double kOrthogonalityTolerance = 1e-10;
inline constexpr std::int64_t kReorthonormalizeEvery = 10'000;

namespace detail {

inline Eigen::MatrixXd reorthonormalize(const Eigen::MatrixXd& m)
{
    Eigen::MatrixXd q = m;
    for (Eigen::Index j = 0; j < q.cols(); ++j) {
        for (Eigen::Index i = 0; i < j; ++i)
            q.col(j) -= q.col(i).dot(q.col(j)) * q.col(i);
        const double norm = q.col(j).norm();
        require(norm > 1e-300, ErrorKind::SingularMatrix, "re-orthonormalization of a rank-deficient matrix");
        q.col(j) /= norm;
    }
    return q;
}

/// Orthogonal polar factor U V^T.
inline Eigen::MatrixXd polar_factor(const Eigen::MatrixXd& m)
{
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().transpose();
}

inline double orthogonality_defect(const Eigen::MatrixXd& m)
{
    return (m.transpose() * m - Eigen::MatrixXd::Identity(m.cols(), m.cols())).norm();
}

} // namespace detail

// ---------------------------------------------------------------------------
// Finite isometries of R^ℓ
// ---------------------------------------------------------------------------

struct FiniteIsometry {
    Eigen::MatrixXd linear;      // Ψ
    Eigen::VectorXd translation; // ρ

    static FiniteIsometry identity(int dim)
    {
        return {Eigen::MatrixXd::Identity(dim, dim), Eigen::VectorXd::Zero(dim)};
    }

    /// Checked constructor.
    static FiniteIsometry make(Eigen::MatrixXd linear, Eigen::VectorXd translation)
    {
        require(linear.rows() == linear.cols() && linear.rows() == translation.size(), ErrorKind::DimensionMismatch,
                "isometry linear part and translation disagree in dimension");
        require(detail::orthogonality_defect(linear) <= kOrthogonalityTolerance, ErrorKind::NotOrthogonal,
                "linear part is not orthogonal");
        return {std::move(linear), std::move(translation)};
    }

    int dim() const { return static_cast<int>(translation.size()); }

    Eigen::VectorXd operator()(const Eigen::VectorXd& v) const { return linear * v + translation; }

    /// (Ψ1, ρ1) ∘ (Ψ2, ρ2) = (Ψ1Ψ2, Ψ1ρ2 + ρ1)
    friend FiniteIsometry operator*(const FiniteIsometry& a, const FiniteIsometry& b)
    {
        require(a.dim() == b.dim(), ErrorKind::DimensionMismatch, "composing isometries of different dimension");
        return {a.linear * b.linear, a.linear * b.translation + a.translation};
    }

    FiniteIsometry inverse() const
    {
        const Eigen::MatrixXd t = linear.transpose();
        return {t, -(t * translation)};
    }
};

/// ‖Ψ1 − Ψ2‖_F + ‖ρ1 − ρ2‖
inline double isometry_distance(const FiniteIsometry& a, const FiniteIsometry& b)
{
    require(a.dim() == b.dim(), ErrorKind::DimensionMismatch, "isometries of different dimension");
    return (a.linear - b.linear).norm() + (a.translation - b.translation).norm();
}

// ---------------------------------------------------------------------------
// Isometry cocycles
// ---------------------------------------------------------------------------

/// Sawtooth ψ(x) = jump · x on [0,1): continuous except for a jump of size `jump` at 0.
struct Sawtooth {
    double jump = 1.0;
    double operator()(double x) const { return jump * wrap01(x); }
};

class IsometryCocycle {
public:
    using Generator = std::function<FiniteIsometry(double)>;

    IsometryCocycle(Base base, int dim, Generator gen) : base_(base), dim_(dim), gen_(std::move(gen))
    {
        require(dim_ >= 1, ErrorKind::DimensionMismatch, "fiber dimension must be positive");
        require(static_cast<bool>(gen_), ErrorKind::ConfigInvalid, "missing generator");
    }

    const Base& base() const { return base_; }
    int dim() const { return dim_; }

    FiniteIsometry at(double x) const { return gen_(wrap01(x)); }

    static IsometryCocycle constant(Base base, const Eigen::MatrixXd& psi, const Eigen::VectorXd& rho)
    {
        const FiniteIsometry g = FiniteIsometry::make(psi, rho);
        return IsometryCocycle(base, g.dim(), [g](double) { return g; });
    }

    /// ℓ = 2, Ψ ≡ rotation by β, ρ(x) = (Re p(x), Im p(x)).
    static IsometryCocycle rotation_translation(Base base, double beta, const TrigPoly& p)
    {
        const Eigen::MatrixXd r = rotation2(beta);
        return IsometryCocycle(base, 2, [r, p](double x) {
            const Complex z = p(x);
            return FiniteIsometry{r, Eigen::Vector2d(z.real(), z.imag())};
        });
    }

    /// ℓ = 2, Ψ(x) = rotation by 2π a(x) with a real trig polynomial (real part taken), ρ ≡ 0.
    static IsometryCocycle rotation_valued(Base base, const TrigPoly& a)
    {
        return IsometryCocycle(base, 2, [a](double x) {
            return FiniteIsometry{rotation2(2.0 * std::numbers::pi * a(x).real()), Eigen::VectorXd::Zero(2)};
        });
    }

    /// Ψ constant, ρ(x) = φ(Tx) − Ψφ(x) for a bounded section φ.
    static IsometryCocycle coboundary(Base base, const Eigen::MatrixXd& psi,
                                      std::function<Eigen::VectorXd(double)> phi)
    {
        const FiniteIsometry lin = FiniteIsometry::make(psi, Eigen::VectorXd::Zero(psi.rows()));
        return IsometryCocycle(base, lin.dim(), [base, lin, phi](double x) {
            return FiniteIsometry{lin.linear, phi(base.step(x)) - lin.linear * phi(x)};
        });
    }

    /// ℓ = 1 over the parabolic base: Ψ = 1, ρ = ψ − ψ∘T with ψ the sawtooth jumping at the fixed point.
    static IsometryCocycle counterexample(double jump = 1.0)
    {
        const Base base = Base::parabolic();
        const Sawtooth psi{jump};
        return IsometryCocycle(base, 1, [base, psi](double x) {
            Eigen::VectorXd rho(1);
            rho(0) = psi(x) - psi(base.step(x));
            return FiniteIsometry{Eigen::MatrixXd::Identity(1, 1), rho};
        });
    }

    /// Tabulated generator on x_i = i/G: ρ linearly interpolated, Ψ from the nearest sample
    /// re-projected onto O(ℓ). Rejects tables whose neighbors differ by more than lipschitz/G.
    static IsometryCocycle from_table(Base base, std::vector<Eigen::MatrixXd> psi, std::vector<Eigen::VectorXd> rho,
                                      double lipschitz)
    {
        const std::size_t g = psi.size();
        require(g >= 2 && rho.size() == g, ErrorKind::ConfigInvalid, "table needs matching Ψ and ρ columns");
        const int dim = static_cast<int>(rho.front().size());
        for (std::size_t i = 0; i < g; ++i) {
            require(psi[i].rows() == dim && psi[i].cols() == dim && rho[i].size() == dim, ErrorKind::DimensionMismatch,
                    "table row " + std::to_string(i) + " has the wrong dimension");
            require(detail::orthogonality_defect(psi[i]) <= kOrthogonalityTolerance, ErrorKind::NotOrthogonal,
                    "table row " + std::to_string(i) + " is not orthogonal");
        }
        const double h = 1.0 / static_cast<double>(g);
        for (std::size_t i = 0; i < g; ++i) {
            const std::size_t j = (i + 1) % g;
            const double jump = (psi[j] - psi[i]).norm() + (rho[j] - rho[i]).norm();
            require(jump <= lipschitz * h + 1e-12, ErrorKind::NotContinuous,
                    "table rows " + std::to_string(i) + " and " + std::to_string(j) + " jump by " +
                        std::to_string(jump));
        }
        return IsometryCocycle(base, dim, [psi = std::move(psi), rho = std::move(rho), g](double x) {
            const double pos = wrap01(x) * static_cast<double>(g);
            const std::size_t i = std::min(static_cast<std::size_t>(pos), g - 1);
            const std::size_t j = (i + 1) % g;
            const double t = pos - static_cast<double>(i);
            const std::size_t nearest = t < 0.5 ? i : j;
            return FiniteIsometry{detail::polar_factor(psi[nearest]), (1.0 - t) * rho[i] + t * rho[j]};
        });
    }

private:
    Base base_;
    int dim_;
    Generator gen_;
};

/// I(k, x), composed left along the orbit, with periodic re-orthonormalization of Ψ.
inline FiniteIsometry cocycle_power(const IsometryCocycle& c, double x, std::int64_t k)
{
    require(k >= 0 && k <= 10'000'000, ErrorKind::PreconditionViolated, "iteration count outside 0..1e7");
    FiniteIsometry acc = FiniteIsometry::identity(c.dim());
    for (std::int64_t i = 0; i < k; ++i) {
        acc = c.at(c.base().step_n(x, i)) * acc;
        if ((i + 1) % kReorthonormalizeEvery == 0)
            acc.linear = detail::reorthonormalize(acc.linear);
    }
    return acc;
}

/// (T^k x, I(k, x) v)
inline std::pair<double, Eigen::VectorXd> iterate_skew(const IsometryCocycle& c, double x, Eigen::VectorXd v,
                                                       std::int64_t k)
{
    require(k >= 0 && k <= 10'000'000, ErrorKind::PreconditionViolated, "iteration count outside 0..1e7");
    require(v.size() == c.dim(), ErrorKind::DimensionMismatch, "fiber vector has the wrong dimension");
    for (std::int64_t i = 0; i < k; ++i)
        v = c.at(c.base().step_n(x, i))(v);
    return {c.base().step_n(x, k), std::move(v)};
}

/// S_k(ρ)(x) = Σ_{i<k} Ψ(T^{k-1}x)···Ψ(T^{i+1}x) ρ(T^i x), the translation part of I(k, x).
inline Eigen::VectorXd twisted_birkhoff(const IsometryCocycle& c, double x, std::int64_t k)
{
    return iterate_skew(c, x, Eigen::VectorXd::Zero(c.dim()), k).second;
}

struct BoundednessReport {
    double sup_norm = 0.0;
    std::int64_t argmax_k = 0;
    double growth_slope = 0.0; ///< least-squares slope of the running max against log k; diagnostic only
};

inline BoundednessReport boundedness_probe(const IsometryCocycle& c, double x0, Eigen::VectorXd v0, std::int64_t n)
{
    require(n >= 1 && n <= 10'000'000, ErrorKind::PreconditionViolated, "probe length outside 1..1e7");
    require(v0.size() == c.dim(), ErrorKind::DimensionMismatch, "fiber vector has the wrong dimension");
    BoundednessReport r;
    r.sup_norm = v0.norm();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    Eigen::VectorXd v = std::move(v0);
    for (std::int64_t k = 1; k <= n; ++k) {
        v = c.at(c.base().step_n(x0, k - 1))(v);
        const double norm = v.norm();
        if (norm > r.sup_norm) {
            r.sup_norm = norm;
            r.argmax_k = k;
        }
        const double lx = std::log(static_cast<double>(k));
        sx += lx;
        sy += r.sup_norm;
        sxx += lx * lx;
        sxy += lx * r.sup_norm;
    }
    const double m = static_cast<double>(n);
    const double den = m * sxx - sx * sx;
    r.growth_slope = den > 0.0 ? (m * sxy - sx * sy) / den : 0.0;
    return r;
}

struct ReturnSample {
    std::int64_t k = 0;
    FiniteIsometry iso;
};

/// (k, I(k, x)) for every return time k <= N with d(T^k x, x) < delta.
inline std::vector<ReturnSample> recurrence_isometries(const IsometryCocycle& c, double x, double delta,
                                                       std::int64_t n)
{
    require(n >= 0 && n <= 1'000'000, ErrorKind::PreconditionViolated, "horizon outside 0..1e6");
    require(delta > 0.0, ErrorKind::PreconditionViolated, "delta must be positive");
    std::vector<ReturnSample> out;
    FiniteIsometry acc = FiniteIsometry::identity(c.dim());
    for (std::int64_t k = 1; k <= n; ++k) {
        acc = c.at(c.base().step_n(x, k - 1)) * acc;
        if (k % kReorthonormalizeEvery == 0)
            acc.linear = detail::reorthonormalize(acc.linear);
        if (circle_distance(c.base().step_n(x, k), x) < delta)
            out.push_back({k, acc});
    }
    return out;
}

struct SemigroupClosureReport {
    int pairs = 0;
    double constant_c = 0.0;  ///< 1 + max ‖ρ‖ over the sampled family
    double worst_ratio = 0.0; ///< max over pairs of best distance / ((2 + C) ε), ε > 0 pairs only
    double worst_distance = 0.0;
    bool pass = false;
};

/// For sampled returns I1 = I(k1, x), I2 = I(k2, x) (window delta), looks for a sampled return
/// (window 2 delta) within (2 + C) ε of I1 ∘ I2, where ε = d(I(k1, T^{k2} x), I1) is measured.
inline SemigroupClosureReport check_semigroup_closure(const IsometryCocycle& c, double x, double delta,
                                                      std::int64_t n, int max_samples = 8)
{
    const auto narrow = recurrence_isometries(c, x, delta, n);
    const auto wide = recurrence_isometries(c, x, 2.0 * delta, n);
    require(!narrow.empty(), ErrorKind::SamplingFailure, "no return times in the horizon");
    SemigroupClosureReport r;
    double max_rho = 0.0;
    for (const auto& s : wide)
        max_rho = std::max(max_rho, s.iso.translation.norm());
    r.constant_c = 1.0 + max_rho;
    r.pass = true;
    const std::size_t m = std::min<std::size_t>(narrow.size(), static_cast<std::size_t>(max_samples));
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) {
            const auto& s1 = narrow[a];
            const auto& s2 = narrow[b];
            if (s1.k + s2.k > n)
                continue;
            ++r.pairs;
            const FiniteIsometry target = s1.iso * s2.iso;
            const double eps =
                isometry_distance(cocycle_power(c, c.base().step_n(x, s2.k), s1.k), s1.iso);
            double best = std::numeric_limits<double>::infinity();
            for (const auto& s : wide)
                best = std::min(best, isometry_distance(s.iso, target));
            r.worst_distance = std::max(r.worst_distance, best);
            const double allowed = (2.0 + r.constant_c) * eps + 1e-10;
            if (eps > 0.0)
                r.worst_ratio = std::max(r.worst_ratio, best / ((2.0 + r.constant_c) * eps));
            if (best > allowed)
                r.pass = false;
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Matrix cocycles
// ---------------------------------------------------------------------------

class MatrixCocycle {
public:
    using Generator = std::function<Matrix(double)>;
    using SectionOracle = std::function<SpdMatrix(double)>;

    MatrixCocycle(Base base, int n, Generator gen) : base_(base), n_(n), gen_(std::move(gen))
    {
        require_dim(n);
        require(static_cast<bool>(gen_), ErrorKind::ConfigInvalid, "missing generator");
    }

    const Base& base() const { return base_; }
    int dim() const { return n_; }
    Matrix at(double x) const { return gen_(wrap01(x)); }

    /// Certificate C with max(‖A(k,x)‖, ‖A(k,x)^{-1}‖) <= C, when known.
    std::optional<double> bound;
    /// Invariant section φ* with A(x)·φ*(x) = φ*(Tx), when known.
    SectionOracle oracle;

private:
    Base base_;
    int n_;
    Generator gen_;
};

struct MatrixProductReport {
    Matrix product;
    double max_norm = 1.0;         ///< running max of ‖A(j, x)‖ over j <= k
    double max_inverse_norm = 1.0; ///< running max of ‖A(j, x)^{-1}‖
};

/// A(k, x) = A(T^{k-1}x) ··· A(x); products are left raw, only monitored.
inline MatrixProductReport matrix_products(const MatrixCocycle& c, double x, std::int64_t k, bool track_norms = true)
{
    require(k >= 0 && k <= 10'000'000, ErrorKind::PreconditionViolated, "iteration count outside 0..1e7");
    MatrixProductReport r{Matrix::Identity(c.dim(), c.dim())};
    for (std::int64_t i = 0; i < k; ++i) {
        const Matrix a = c.at(c.base().step_n(x, i));
        require_invertible(a);
        r.product = a * r.product;
        if (track_norms) {
            const Vector s = singular_values(r.product);
            r.max_norm = std::max(r.max_norm, s(0));
            r.max_inverse_norm = std::max(r.max_inverse_norm, 1.0 / s(s.size() - 1));
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Shift cocycles on ℓ²
// ---------------------------------------------------------------------------

class ShiftCocycle {
public:
    /// rho: j ↦ ρ_j. Unilateral: j >= 0. Truncation level L keeps coordinates 0..L (or -L..L).
    ShiftCocycle(Base base, std::map<int, TrigPoly> rho, int truncation, bool bilateral = false)
        : base_(base), rho_(std::move(rho)), truncation_(truncation), bilateral_(bilateral)
    {
        require(base_.is_rotation(), ErrorKind::ConfigInvalid, "shift cocycles need a rotation base");
        require(truncation_ >= 0, ErrorKind::ConfigInvalid, "truncation must be nonnegative");
        for (const auto& [j, _] : rho_)
            require(bilateral_ || j >= 0, ErrorKind::ConfigInvalid, "unilateral shift with negative coordinate");
    }

    const Base& base() const { return base_; }
    const std::map<int, TrigPoly>& rho() const { return rho_; }
    int truncation() const { return truncation_; }
    bool bilateral() const { return bilateral_; }

    /// J = max |j| over the support of ρ.
    int support() const
    {
        int s = 0;
        for (const auto& [j, p] : rho_)
            if (!p.is_zero())
                s = std::max(s, std::abs(j));
        return s;
    }

    Complex rho_at(int j, double x) const
    {
        const auto it = rho_.find(j);
        return it == rho_.end() ? Complex{} : it->second(x);
    }

    /// ρ_0(x) = e^{2πix}, other coordinates zero. The formal solution is not square-summable.
    static ShiftCocycle single_mode(Base base, int truncation)
    {
        return ShiftCocycle(base, {{0, TrigPoly::mode(1)}}, truncation);
    }

    /// ρ_j ≡ 2^{-j} for 0 <= j <= truncation. Coordinates of the solution stay below 2,
    /// but its ℓ² norm grows with the truncation.
    static ShiftCocycle geometric_constants(Base base, int truncation)
    {
        std::map<int, TrigPoly> rho;
        for (int j = 0; j <= truncation; ++j)
            rho[j] = TrigPoly::constant(std::ldexp(1.0, -j));
        return ShiftCocycle(base, std::move(rho), truncation);
    }

    /// Section with φ_j(x) = 2^{-j} (e^{2πix} + ½ e^{-4πix}) for 0 <= j <= depth, zero beyond.
    static std::map<int, TrigPoly> geometric_section(int depth)
    {
        std::map<int, TrigPoly> phi;
        for (int j = 0; j <= depth; ++j)
            phi[j] = TrigPoly({{1, std::ldexp(1.0, -j)}, {-2, std::ldexp(0.5, -j)}});
        return phi;
    }

    /// Coboundary of the geometric section: ρ_j(x) = φ_j(x + α) − φ_{j-1}(x), supported on 0..depth+1.
    static ShiftCocycle geometric_coboundary(Base base, int depth, int truncation)
    {
        const auto phi = geometric_section(depth);
        std::map<int, TrigPoly> rho;
        for (int j = 0; j <= depth + 1; ++j) {
            TrigPoly r;
            if (const auto it = phi.find(j); it != phi.end())
                r += it->second.shifted(base.alpha());
            if (const auto it = phi.find(j - 1); it != phi.end())
                r -= it->second;
            rho[j] = r;
        }
        return ShiftCocycle(base, std::move(rho), truncation);
    }

private:
    Base base_;
    std::map<int, TrigPoly> rho_;
    int truncation_;
    bool bilateral_;
};

/// ‖I(n, y) 0‖ for n = 0..N under the unilateral shift cocycle, computed without truncation:
/// coordinates are kept in reverse order so the shift is an append.
inline std::vector<double> shift_orbit_norms(const ShiftCocycle& c, double y, std::int64_t n)
{
    require(!c.bilateral(), ErrorKind::PreconditionViolated, "orbit norms implemented for the unilateral shift");
    require(n >= 0 && n <= 10'000'000, ErrorKind::PreconditionViolated, "horizon outside 0..1e7");
    const int support = c.support();
    std::vector<Complex> rev(static_cast<std::size_t>(support + 1)); // rev[len-1-j] holds coordinate j
    std::vector<double> norms{0.0};
    norms.reserve(static_cast<std::size_t>(n) + 1);
    double sumsq = 0.0;
    for (std::int64_t k = 0; k < n; ++k) {
        const double x = c.base().step_n(y, k);
        rev.push_back(Complex{});
        const std::size_t len = rev.size();
        for (const auto& [j, p] : c.rho()) {
            Complex& slot = rev[len - 1 - static_cast<std::size_t>(j)];
            const double before = std::norm(slot);
            slot += p(x);
            sumsq += std::norm(slot) - before;
        }
        if ((k + 1) % 4096 == 0) {
            sumsq = 0.0;
            for (const auto& z : rev)
                sumsq += std::norm(z);
        }
        norms.push_back(std::sqrt(std::max(0.0, sumsq)));
    }
    return norms;
}

struct ShiftBoundReport {
    double constant_c = 0.0;   ///< sup_n ‖I(n, x0) 0‖ along the reference orbit
    double worst_norm = 0.0;   ///< sup over probes y and n of ‖I(n, y) 0‖
    double bound = 0.0;        ///< 2C
    bool pass = false;
};

/// The reference orbit of (x0, 0) is forward invariant with fiber norms <= C; every other
/// start y must then satisfy ‖I(n, y) 0‖ <= 2C.
inline ShiftBoundReport check_shift_orbit_bound(const ShiftCocycle& c, double x0, const std::vector<double>& probes,
                                                std::int64_t n)
{
    ShiftBoundReport r;
    for (double v : shift_orbit_norms(c, x0, n))
        r.constant_c = std::max(r.constant_c, v);
    for (double y : probes)
        for (double v : shift_orbit_norms(c, y, n))
            r.worst_norm = std::max(r.worst_norm, v);
    r.bound = 2.0 * r.constant_c;
    r.pass = r.worst_norm <= r.bound + 1e-6;
    return r;
}

} // namespace cocycle
