#pragma once

// Circle maps used as bases: irrational rotations and the parabolic map of
// PSL(2,R) generated by [[1,1],[0,1]] acting on the projective line.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "error.hpp"

namespace cocycle {

/// Canonical representative in [0,1).
inline double wrap01(double x)
{
    double r = x - std::floor(x);
    if (r >= 1.0)
        r = 0.0;
    return r;
}

inline double circle_distance(double x, double y)
{
    const double d = std::abs(wrap01(x) - wrap01(y));
    return std::min(d, 1.0 - d);
}

inline const double kGoldenMean = (std::sqrt(5.0) - 1.0) / 2.0;

/// True if |qα - p| is below 1e-12 for some continued-fraction convergent p/q with q <= max_q.
inline bool is_near_rational(double alpha, long max_q = 1'000'000)
{
    double x = wrap01(alpha);
    long p_prev = 1, q_prev = 0; // convergent h_{-1}/k_{-1}
    long p = 0, q = 1;           // h_0/k_0 = 0/1
    if (std::abs(x) < 1e-12)
        return true;
    double rem = x;
    for (int guard = 0; guard < 64; ++guard) {
        if (rem < 1e-300)
            return true;
        const double inv = 1.0 / rem;
        const double a = std::floor(inv);
        rem = inv - a;
        if (a > static_cast<double>(max_q))
            return false;
        const long ai = static_cast<long>(a);
        const long pn = ai * p + p_prev;
        const long qn = ai * q + q_prev;
        if (qn > max_q)
            return false;
        p_prev = p;
        q_prev = q;
        p = pn;
        q = qn;
        if (std::abs(static_cast<double>(q) * x - static_cast<double>(p)) < 1e-12)
            return true;
    }
    return false;
}

class Base {
public:
    enum class Kind { Rotation, Parabolic };

    /// Rotation x ↦ x + α. With `minimal`, rejects α within 1e-12 of p/q, q <= 10^6.
    static Base rotation(double alpha, bool minimal = true)
    {
        require(std::isfinite(alpha), ErrorKind::ConfigInvalid, "rotation angle must be finite");
        const double a = wrap01(alpha);
        if (minimal)
            require(!is_near_rational(a), ErrorKind::ConfigInvalid,
                    "rotation angle " + std::to_string(alpha) + " is (nearly) rational; not minimal");
        return Base(Kind::Rotation, a);
    }

    static Base golden() { return rotation(kGoldenMean); }
    static Base parabolic() { return Base(Kind::Parabolic, 0.0); }

    Kind kind() const { return kind_; }
    bool is_rotation() const { return kind_ == Kind::Rotation; }
    double alpha() const
    {
        require(is_rotation(), ErrorKind::PreconditionViolated, "parabolic base has no rotation angle");
        return alpha_;
    }

    std::string name() const { return is_rotation() ? "rotation" : "parabolic"; }

    double step(double x) const { return step_n(x, 1); }

    double step_n(double x, std::int64_t k) const
    {
        require(std::llabs(k) <= 1'000'000'000LL, ErrorKind::PreconditionViolated, "iteration count above 1e9");
        if (kind_ == Kind::Rotation) {
            // kα split into a rounded product and its exact error term.
            const double kd = static_cast<double>(k);
            const double prod = kd * alpha_;
            const double err = std::fma(kd, alpha_, -prod);
            const double frac = prod - std::floor(prod);
            return wrap01(wrap01(x) + frac + err);
        }
        // x ↔ the line through (cos πx, sin πx). [[1,1],[0,1]]^k sends (c, s) to (c + k s, s).
        // In the chart t = tan(πx) one step reads t ↦ t / (1 + t); the fixed point is x = 0.
        const double angle = std::numbers::pi * wrap01(x);
        const double c = std::cos(angle);
        const double s = std::sin(angle);
        const double out = std::atan2(s, c + static_cast<double>(k) * s) / std::numbers::pi;
        return wrap01(out);
    }

    /// Fixed point of the parabolic map.
    double fixed_point() const
    {
        require(kind_ == Kind::Parabolic, ErrorKind::PreconditionViolated, "rotations have no fixed point");
        return 0.0;
    }

    /// x, Tx, ..., T^{n-1}x
    std::vector<double> orbit(double x, std::int64_t n) const
    {
        require(n >= 0, ErrorKind::PreconditionViolated, "orbit length must be nonnegative");
        std::vector<double> out(static_cast<std::size_t>(n));
        for (std::int64_t k = 0; k < n; ++k)
            out[static_cast<std::size_t>(k)] = step_n(x, k);
        return out;
    }

private:
    Base(Kind kind, double alpha) : kind_(kind), alpha_(alpha) {}

    Kind kind_;
    double alpha_;
};

/// True iff the first N forward iterates of x0 are delta-dense in the circle.
inline bool minimality_probe(const Base& base, double x0, std::int64_t n, double delta)
{
    require(n >= 1 && n <= 10'000'000, ErrorKind::PreconditionViolated, "probe length outside 1..1e7");
    require(delta > 0.0, ErrorKind::PreconditionViolated, "delta must be positive");
    std::vector<double> pts = base.orbit(x0, n);
    std::sort(pts.begin(), pts.end());
    double gap = pts.front() + 1.0 - pts.back();
    for (std::size_t i = 1; i < pts.size(); ++i)
        gap = std::max(gap, pts[i] - pts[i - 1]);
    return gap <= 2.0 * delta;
}

/// All 1 <= k <= N with d(T^k x, x) < delta, ascending.
inline std::vector<std::int64_t> return_times(const Base& base, double x, double delta, std::int64_t n)
{
    require(n >= 0 && n <= 10'000'000, ErrorKind::PreconditionViolated, "horizon outside 0..1e7");
    std::vector<std::int64_t> out;
    for (std::int64_t k = 1; k <= n; ++k)
        if (circle_distance(base.step_n(x, k), x) < delta)
            out.push_back(k);
    return out;
}

} // namespace cocycle
