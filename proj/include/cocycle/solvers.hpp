#pragma once

// Solvers for the twisted cohomological equation over a rotation θ ↦ θ + α,
//
//     φ(θ + α) − e^{iβ} φ(θ) = ρ(θ),
//
// its cyclotomic q-th root version, the shift-cocycle formulas on ℓ², and
// diagnostics (uniqueness of solutions, oscillation of grid sections).

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "base_dynamics.hpp"
#include "cocycles.hpp"
#include "error.hpp"
#include "section.hpp"
#include "trig_poly.hpp"

namespace cocycle {

inline constexpr double kDivisorFloor = 1e-8;
inline constexpr int kDefaultGrid = 4096;

struct TwistedEquation {
    double alpha = kGoldenMean;
    double beta = 0.0;
    TrigPoly rho;

    Complex twist() const { return std::polar(1.0, beta); }
    /// e^{2πinα} − e^{iβ}
    Complex divisor(int n) const { return unit_phase(n * alpha) - twist(); }
};

/// sup over θ_i = i/grid of |φ(θ + α) − e^{iβ}φ(θ) − ρ(θ)|
inline double residual(const TwistedEquation& eq, const Section& phi, int grid = kDefaultGrid)
{
    require(grid >= 1, ErrorKind::PreconditionViolated, "grid must be positive");
    const SectionEvaluator f(phi);
    const Complex w = eq.twist();
    double worst = 0.0;
    for (int i = 0; i < grid; ++i) {
        const double t = static_cast<double>(i) / grid;
        worst = std::max(worst, std::abs(f(t + eq.alpha) - w * f(t) - eq.rho(t)));
    }
    return worst;
}

/// φ̂_n = ρ̂_n / (e^{2πinα} − e^{iβ}), then self-checked on a 4096 grid.
inline TrigPoly fourier_solve(const TwistedEquation& eq, double divisor_floor = kDivisorFloor)
{
    require(divisor_floor > 0.0, ErrorKind::PreconditionViolated, "divisor floor must be positive");
    const bool untwisted = std::abs(eq.twist() - 1.0) <= 1e-15;
    if (untwisted && std::abs(eq.rho.coefficient(0)) > 0.0)
        fail(ErrorKind::MeanObstruction, "untwisted equation with nonzero mean " +
                                             std::to_string(std::abs(eq.rho.coefficient(0))) +
                                             ": Birkhoff sums drift linearly");
    std::vector<int> bad;
    std::map<int, Complex> out;
    for (const auto& [n, c] : eq.rho.coefficients()) {
        const Complex d = eq.divisor(n);
        if (std::abs(d) < divisor_floor) {
            bad.push_back(n);
            continue;
        }
        out[n] = c / d;
    }
    if (!bad.empty()) {
        std::ostringstream msg;
        msg << "divisor below " << divisor_floor << " at modes";
        for (int n : bad)
            msg << ' ' << n;
        throw SmallDivisorError(bad, msg.str());
    }
    TrigPoly phi(std::move(out));
    const double r = residual(eq, phi, kDefaultGrid);
    require(r <= 1e-10 * std::max(1.0, eq.rho.l1_norm()), ErrorKind::NotASolution,
            "Fourier solution residual " + std::to_string(r));
    return phi;
}

// ---------------------------------------------------------------------------
// Cyclotomic equation Σ_{k<q} e^{ikβ/q} φ(θ + (q−k−1)α/q) = ρ(θ)
// ---------------------------------------------------------------------------

/// θ ↦ ρ(θ + α/q) − e^{iβ/q} ρ(θ)
inline TrigPoly cyclotomic_rhs(const TrigPoly& rho, double alpha, double beta, int q)
{
    require(q >= 1, ErrorKind::PreconditionViolated, "q must be at least 1");
    return rho.shifted(alpha / q) - std::polar(1.0, beta / q) * rho;
}

/// sup over a grid of |Σ_k e^{ikβ/q} φ(θ + (q−k−1)α/q) − ρ(θ)|
inline double cyclotomic_verify(const Section& phi, const TrigPoly& rho, double alpha, double beta, int q,
                                int grid = kDefaultGrid)
{
    require(q >= 1, ErrorKind::PreconditionViolated, "q must be at least 1");
    require(grid >= 4096, ErrorKind::PreconditionViolated, "cyclotomic verification needs a grid of at least 4096");
    const SectionEvaluator f(phi);
    double worst = 0.0;
    for (int i = 0; i < grid; ++i) {
        const double t = static_cast<double>(i) / grid;
        Complex s{};
        for (int k = 0; k < q; ++k)
            s += std::polar(1.0, k * beta / q) * f(t + (q - k - 1) * alpha / q);
        worst = std::max(worst, std::abs(s - rho(t)));
    }
    return worst;
}

/// Solves φ(θ + α) − e^{iβ}φ(θ) = cyclotomic_rhs(ρ) by Fourier inversion. On modes where
/// e^{2πinα/q} and e^{iβ/q} coincide the reduced equation loses the mode, and the cyclotomic
/// sum is inverted directly instead.
inline TrigPoly cyclotomic_solve(const TrigPoly& rho, double alpha, double beta, int q,
                                 double divisor_floor = kDivisorFloor)
{
    require(q >= 1, ErrorKind::PreconditionViolated, "q must be at least 1");
    const Complex zeta = std::polar(1.0, beta / q);
    const TrigPoly reduced_rhs = cyclotomic_rhs(rho, alpha, beta, q);
    const TwistedEquation reduced{alpha, beta, reduced_rhs};
    std::vector<int> bad;
    std::map<int, Complex> out;
    for (const auto& [n, c] : rho.coefficients()) {
        const Complex omega = unit_phase(n * alpha / q);
        const Complex full = reduced.divisor(n);
        if (std::abs(omega - zeta) >= divisor_floor && std::abs(full) >= divisor_floor) {
            out[n] = reduced_rhs.coefficient(n) / full;
            continue;
        }
        Complex sum{};
        for (int k = 0; k < q; ++k)
            sum += std::pow(zeta, k) * std::pow(omega, q - k - 1);
        if (std::abs(sum) < divisor_floor) {
            bad.push_back(n);
            continue;
        }
        out[n] = c / sum;
    }
    if (!bad.empty()) {
        std::ostringstream msg;
        msg << "cyclotomic divisor below " << divisor_floor << " at modes";
        for (int n : bad)
            msg << ' ' << n;
        throw SmallDivisorError(bad, msg.str());
    }
    TrigPoly phi(std::move(out));
    const double r = cyclotomic_verify(phi, rho, alpha, beta, q);
    require(r <= 1e-8 * std::max(1.0, rho.l1_norm()), ErrorKind::NotASolution,
            "cyclotomic residual " + std::to_string(r));
    return phi;
}

// ---------------------------------------------------------------------------
// Shift cocycles
// ---------------------------------------------------------------------------

struct ShiftSolution {
    int first_index = 0;               ///< index of coords[0] (0 or −L)
    std::vector<Complex> coords;
    double norm = 0.0;                 ///< ℓ² norm of the truncated vector
    double tail_fraction = 0.0;        ///< energy share of the last quarter of coordinates
    bool not_square_summable = false;  ///< tail still carries energy: the formal series diverges
    double invariance_residual = 0.0;  ///< sup over checked coordinates of |φ_j(Tx) − φ_{j−1}(x) − ρ_j(x)|
    double residual_bound = 0.0;       ///< what truncation allows (0 for the unilateral formula)

    Complex at(int j) const { return coords[static_cast<std::size_t>(j - first_index)]; }
};

namespace detail {

inline void finish_norms(ShiftSolution& s)
{
    double total = 0.0, tail = 0.0;
    const std::size_t m = s.coords.size();
    const std::size_t tail_start = m - m / 4;
    for (std::size_t i = 0; i < m; ++i) {
        const double e = std::norm(s.coords[i]);
        total += e;
        if (i >= tail_start)
            tail += e;
    }
    s.norm = std::sqrt(total);
    s.tail_fraction = total > 0.0 ? tail / total : 0.0;
    s.not_square_summable = s.tail_fraction > 1e-3;
}

inline std::vector<Complex> unilateral_coords(const ShiftCocycle& c, double x)
{
    const int l = c.truncation();
    std::vector<Complex> v(static_cast<std::size_t>(l) + 1);
    for (int j = 0; j <= l; ++j) {
        Complex s{};
        for (int r = 0; r <= j; ++r)
            s += c.rho_at(j - r, c.base().step_n(x, -(r + 1)));
        v[static_cast<std::size_t>(j)] = s;
    }
    return v;
}

inline std::vector<Complex> bilateral_coords(const ShiftCocycle& c, double x, int tail)
{
    const int l = c.truncation();
    std::vector<Complex> v(static_cast<std::size_t>(2 * l + 1));
    for (int n = -l; n <= l; ++n) {
        Complex s{};
        for (int j = 0; j < tail; ++j) {
            if (std::abs(n - j) > c.support())
                continue;
            s += c.rho_at(n - j, c.base().step_n(x, -(j + 1)));
        }
        v[static_cast<std::size_t>(n + l)] = s;
    }
    return v;
}

} // namespace detail

/// φ(x)_j = Σ_{r=0}^{j} ρ_{j−r}(T^{−(r+1)}x) for 0 <= j <= L.
inline ShiftSolution shift_solve_unilateral(const ShiftCocycle& c, double x)
{
    require(!c.bilateral(), ErrorKind::PreconditionViolated, "bilateral cocycle passed to the unilateral solver");
    require(c.truncation() >= c.support(), ErrorKind::TruncationTooSmall,
            "truncation " + std::to_string(c.truncation()) + " below support " + std::to_string(c.support()));
    ShiftSolution s;
    s.coords = detail::unilateral_coords(c, x);
    const auto next = detail::unilateral_coords(c, c.base().step(x));
    double scale = 1.0;
    for (int j = 0; j < c.truncation(); ++j) {
        const Complex prev = j == 0 ? Complex{} : s.coords[static_cast<std::size_t>(j - 1)];
        const Complex gap = next[static_cast<std::size_t>(j)] - prev - c.rho_at(j, x);
        s.invariance_residual = std::max(s.invariance_residual, std::abs(gap));
        scale = std::max(scale, std::abs(next[static_cast<std::size_t>(j)]));
    }
    require(s.invariance_residual <= 1e-10 * scale, ErrorKind::InvariantViolation,
            "shift recurrence residual " + std::to_string(s.invariance_residual));
    detail::finish_norms(s);
    return s;
}

/// φ(x)_n = Σ_{0<=j<tail} ρ_{n−j}(T^{−(j+1)}x) for −L <= n <= L. The invariance residual equals
/// the dropped term ρ_{n−tail}(T^{−tail}x), which vanishes once tail > L + J.
inline ShiftSolution shift_solve_bilateral(const ShiftCocycle& c, double x, int tail)
{
    require(c.bilateral(), ErrorKind::PreconditionViolated, "unilateral cocycle passed to the bilateral solver");
    require(c.truncation() >= c.support(), ErrorKind::TruncationTooSmall,
            "truncation " + std::to_string(c.truncation()) + " below support " + std::to_string(c.support()));
    require(tail >= 1, ErrorKind::TruncationTooSmall, "tail must be at least 1");
    const int l = c.truncation();
    ShiftSolution s;
    s.first_index = -l;
    s.coords = detail::bilateral_coords(c, x, tail);
    const auto next = detail::bilateral_coords(c, c.base().step(x), tail);
    for (int n = -l + 1; n <= l; ++n) {
        const Complex gap = next[static_cast<std::size_t>(n + l)] - s.coords[static_cast<std::size_t>(n - 1 + l)] -
                            c.rho_at(n, x);
        s.invariance_residual = std::max(s.invariance_residual, std::abs(gap));
    }
    if (tail <= l + c.support())
        for (const auto& [j, p] : c.rho())
            s.residual_bound = std::max(s.residual_bound, p.l1_norm());
    require(s.invariance_residual <= s.residual_bound + 1e-10, ErrorKind::InvariantViolation,
            "bilateral residual " + std::to_string(s.invariance_residual) + " above truncation bound");
    detail::finish_norms(s);
    return s;
}

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

struct UniquenessReport {
    double max_dev_from_const = 0.0; ///< sup_θ |δ(θ) − mean δ|, δ = φ1 − φ2
    Complex mean{};
    bool mean_must_vanish = false;   ///< e^{iβ} ≠ 1: a constant difference c needs c = e^{iβ}c
    bool mean_ok = true;
};

inline UniquenessReport uniqueness_gap(const Section& phi1, const Section& phi2, const TwistedEquation& eq,
                                       int grid = kDefaultGrid)
{
    const double r1 = residual(eq, phi1, grid);
    const double r2 = residual(eq, phi2, grid);
    require(r1 <= 1e-8 && r2 <= 1e-8, ErrorKind::NotASolution,
            "sections do not solve the equation (residuals " + std::to_string(r1) + ", " + std::to_string(r2) + ")");
    const SectionEvaluator f1(phi1), f2(phi2);
    std::vector<Complex> delta(static_cast<std::size_t>(grid));
    UniquenessReport r;
    for (int i = 0; i < grid; ++i) {
        const double t = static_cast<double>(i) / grid;
        delta[static_cast<std::size_t>(i)] = f1(t) - f2(t);
        r.mean += delta[static_cast<std::size_t>(i)];
    }
    r.mean /= static_cast<double>(grid);
    for (const auto& d : delta)
        r.max_dev_from_const = std::max(r.max_dev_from_const, std::abs(d - r.mean));
    r.mean_must_vanish = std::abs(eq.twist() - 1.0) > 1e-12;
    if (r.mean_must_vanish)
        r.mean_ok = std::abs(r.mean) <= 1e-8;
    return r;
}

struct OscillationReport {
    std::vector<double> scales;
    std::vector<double> values; ///< max |φ(y) − φ(z)| over grid points within each scale of x
    double value = 0.0;         ///< at the smallest scale
};

inline OscillationReport oscillation_estimate(const ComplexGrid& phi, double x, const std::vector<double>& scales)
{
    require(!scales.empty(), ErrorKind::PreconditionViolated, "no scales given");
    require(phi.size() >= 2, ErrorKind::EmptySet, "grid section too small");
    const double smallest = *std::min_element(scales.begin(), scales.end());
    require(smallest >= 4.0 * phi.spacing(), ErrorKind::ScaleTooFine,
            "scale " + std::to_string(smallest) + " below 4 grid spacings");
    OscillationReport r;
    r.scales = scales;
    for (double s : scales) {
        std::vector<Complex> window;
        for (int i = 0; i < phi.size(); ++i)
            if (circle_distance(phi.point(i), x) <= s)
                window.push_back(phi.values[static_cast<std::size_t>(i)]);
        double osc = 0.0;
        for (std::size_t a = 0; a < window.size(); ++a)
            for (std::size_t b = a + 1; b < window.size(); ++b)
                osc = std::max(osc, std::abs(window[a] - window[b]));
        r.values.push_back(osc);
        if (s == smallest)
            r.value = osc;
    }
    return r;
}

} // namespace cocycle
