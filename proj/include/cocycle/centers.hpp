#pragma once

// Centers of finite point sets in a CAT(0) space.
//
//   ctr(B)  - Chebyshev center: the unique minimizer of r_B(v) = max_{w in B} d(v, w).
//   ctr*(B) - Bruhat-Tits center: limit of the iterated sets of midpoints of
//             diametral pairs.
//
// Plus the quantitative checks behind the continuity, ball-intersection and
// diameter-shrink estimates.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <list>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "error.hpp"
#include "space.hpp"

namespace cocycle {

enum class CenterMethod {
    Auto,                 ///< TangentChart when the space has one, otherwise FarthestPointDescent
    FarthestPointDescent, ///< v_{k+1} = geodesic(v_k, farthest point, 1/(k+2))
    TangentChart,         ///< iterated Euclidean minimum enclosing ball in log coordinates
};

struct CenterOptions {
    double tol = 1e-9;
    CenterMethod method = CenterMethod::Auto;
    long max_iterations = 1'000'000; ///< descent cap
    int stall_window = 50;           ///< descent stops after this many steps without tol improvement
    int max_chart_iterations = 200;
};

template <class Point>
struct CenterReport {
    Point center;
    double radius = 0.0;            ///< r_B, the covering radius about `center`
    long iterations = 0;
    double covering_residual = 0.0; ///< max_i d(center, p_i) - radius
    CenterMethod method = CenterMethod::Auto;
};

namespace detail {

template <class S>
void require_nonempty(const PointSet<S>& b, const char* what)
{
    require(!b.empty(), ErrorKind::EmptySet, std::string(what) + " on empty point set");
}

/// Farthest point of B from v; ties go to the lowest index.
template <GeodesicSpace S>
std::pair<std::size_t, double> farthest(const S& space, const PointSet<S>& b, const typename S::Point& v)
{
    std::size_t best = 0;
    double best_d = -1.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        const double d = space.distance(v, b[i]);
        if (d > best_d) {
            best_d = d;
            best = i;
        }
    }
    return {best, best_d};
}

} // namespace detail

/// r_B(v) = max_{w in B} d(v, w)
template <GeodesicSpace S>
double radius_at(const S& space, const PointSet<S>& b, const typename S::Point& v)
{
    detail::require_nonempty<S>(b, "radius_at");
    return detail::farthest(space, b, v).second;
}

template <GeodesicSpace S>
double diameter(const S& space, const PointSet<S>& b)
{
    detail::require_nonempty<S>(b, "diameter");
    double d = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i)
        for (std::size_t j = i + 1; j < b.size(); ++j)
            d = std::max(d, space.distance(b[i], b[j]));
    return d;
}

/// Hausdorff distance between finite sets by the double max-min scan.
template <GeodesicSpace S>
double hausdorff(const S& space, const PointSet<S>& a, const PointSet<S>& b)
{
    detail::require_nonempty<S>(a, "hausdorff");
    detail::require_nonempty<S>(b, "hausdorff");
    auto directed = [&](const PointSet<S>& x, const PointSet<S>& y) {
        double worst = 0.0;
        for (const auto& p : x) {
            double nearest = std::numeric_limits<double>::infinity();
            for (const auto& q : y)
                nearest = std::min(nearest, space.distance(p, q));
            worst = std::max(worst, nearest);
        }
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

// ---------------------------------------------------------------------------
// Euclidean minimum enclosing ball (used inside tangent charts)
// ---------------------------------------------------------------------------

struct EnclosingBall {
    Eigen::VectorXd center;
    double radius = 0.0;
    int iterations = 0;
    bool polished = false; ///< snapped to the exact circumcenter of its support
    std::vector<std::size_t> support;
};

namespace detail {

// Circumcenter of the support points inside their affine hull. Returned only when it is a
// convex combination of them and covers every point: that is the optimality certificate
// for the minimum enclosing ball.
struct Polished {
    Eigen::VectorXd center;
    double radius;
    std::vector<std::size_t> support;
};

inline std::optional<Polished> polish_support(const std::vector<Eigen::VectorXd>& pts,
                                                                        const std::vector<std::size_t>& support)
{
    if (support.size() < 2)
        return std::nullopt;
    const Eigen::VectorXd& y0 = pts[support[0]];
    const Eigen::Index k = static_cast<Eigen::Index>(support.size()) - 1;
    Eigen::MatrixXd d(y0.size(), k);
    for (Eigen::Index j = 0; j < k; ++j)
        d.col(j) = pts[support[j + 1]] - y0;
    const Eigen::MatrixXd gram = d.transpose() * d;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
    if (lu.rank() < k)
        return std::nullopt;
    const Eigen::VectorXd mu = lu.solve(0.5 * gram.diagonal());
    if (mu.minCoeff() < -1e-12 || mu.sum() > 1.0 + 1e-12)
        return std::nullopt;
    Eigen::VectorXd c = y0 + d * mu;
    const double circum = (y0 - c).norm();
    double r = 0.0;
    for (const auto& p : pts)
        r = std::max(r, (p - c).norm());
    if (r > circum * (1.0 + 1e-12) + 1e-15)
        return std::nullopt;
    return Polished{std::move(c), r, support};
}

// Tries the heaviest-weight subsets of size d+1 down to 2.
inline std::optional<Polished> polish_weights(const std::vector<Eigen::VectorXd>& pts,
                                                                        const std::vector<double>& u)
{
    std::vector<std::size_t> support;
    for (std::size_t i = 0; i < u.size(); ++i)
        if (u[i] > 1e-10)
            support.push_back(i);
    std::stable_sort(support.begin(), support.end(), [&](std::size_t x, std::size_t y) { return u[x] > u[y]; });
    const std::size_t most = std::min<std::size_t>(support.size(), static_cast<std::size_t>(pts[0].size()) + 1);
    for (std::size_t s = most; s >= 2; --s) {
        const std::vector<std::size_t> subset(support.begin(), support.begin() + static_cast<std::ptrdiff_t>(s));
        if (auto out = polish_support(pts, subset))
            return out;
    }
    return std::nullopt;
}

} // namespace detail

namespace detail {

// Welzl's recursion with move-to-front (after Gärtner's miniball). Exact for
// points in general position; the caller verifies coverage.
class MoveToFrontBall {
public:
    explicit MoveToFrontBall(const std::vector<Eigen::VectorXd>& pts) : pts_(pts), dim_(pts[0].size())
    {
        for (std::size_t i = 0; i < pts.size(); ++i)
            order_.push_back(i);
        center_ = pts[0];
        sqr_r_ = -1.0;
        solve(order_.end());
    }

    const Eigen::VectorXd& center() const { return center_; }
    double radius() const { return std::sqrt(std::max(0.0, sqr_r_)); }
    const std::vector<std::size_t>& support() const { return support_; }

private:
    using It = std::list<std::size_t>::iterator;

    void solve(It end)
    {
        if (static_cast<Eigen::Index>(boundary_.size()) == dim_ + 1)
            return;
        for (It k = order_.begin(); k != end;) {
            It j = k++;
            const double excess = (pts_[*j] - center_).squaredNorm() - sqr_r_;
            if (excess > 1e-13 * std::max(sqr_r_, 1e-300) && push(*j)) {
                solve(j);
                boundary_.pop_back();
                order_.splice(order_.begin(), order_, j);
            }
        }
    }

    // Circumball of boundary ∪ {i} within its affine hull; rejects affinely dependent sets.
    bool push(std::size_t i)
    {
        boundary_.push_back(i);
        const Eigen::VectorXd& y0 = pts_[boundary_[0]];
        const Eigen::Index k = static_cast<Eigen::Index>(boundary_.size()) - 1;
        if (k == 0) {
            center_ = y0;
            sqr_r_ = 0.0;
            support_ = boundary_;
            return true;
        }
        Eigen::MatrixXd d(dim_, k);
        for (Eigen::Index j = 0; j < k; ++j)
            d.col(j) = pts_[boundary_[static_cast<std::size_t>(j) + 1]] - y0;
        const Eigen::MatrixXd gram = d.transpose() * d;
        Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
        lu.setThreshold(1e-12);
        if (lu.rank() < k) {
            boundary_.pop_back();
            return false;
        }
        center_ = y0 + d * lu.solve(0.5 * gram.diagonal());
        sqr_r_ = (y0 - center_).squaredNorm();
        support_ = boundary_;
        return true;
    }

    const std::vector<Eigen::VectorXd>& pts_;
    Eigen::Index dim_;
    std::list<std::size_t> order_;
    std::vector<std::size_t> boundary_;
    std::vector<std::size_t> support_;
    Eigen::VectorXd center_;
    double sqr_r_;
};

} // namespace detail

/// Minimum enclosing ball by Frank-Wolfe with away steps on the dual simplex problem.
/// Every few steps the heaviest points are tried as an exact support; a certified
/// support ends the iteration with the exact ball.
inline EnclosingBall min_enclosing_ball(const std::vector<Eigen::VectorXd>& pts, double eps = 1e-12,
                                        int max_iter = 100000, const std::vector<std::size_t>& hint = {})
{
    require(!pts.empty(), ErrorKind::EmptySet, "min_enclosing_ball on empty set");
    if (!hint.empty())
        if (auto polished = detail::polish_support(pts, hint))
            return {polished->center, polished->radius, 0, true, polished->support};
    if (pts[0].size() <= 10) {
        const detail::MoveToFrontBall mtf(pts);
        double r = 0.0;
        for (const auto& p : pts)
            r = std::max(r, (p - mtf.center()).norm());
        if (r <= mtf.radius() * (1.0 + 1e-10) + 1e-15)
            return {mtf.center(), r, 0, true, mtf.support()};
    }
    const std::size_t m = pts.size();
    auto farthest_from = [&](const Eigen::VectorXd& c) {
        std::size_t best = 0;
        double bd = -1.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double d = (pts[i] - c).squaredNorm();
            if (d > bd) {
                bd = d;
                best = i;
            }
        }
        return best;
    };

    const std::size_t a = farthest_from(pts[0]);
    const std::size_t b = farthest_from(pts[a]);
    if ((pts[a] - pts[b]).squaredNorm() == 0.0)
        return {pts[0], 0.0, 0, true, {0}};

    std::vector<double> u(m, 0.0);
    u[a] += 0.5;
    u[b] += 0.5;
    Eigen::VectorXd c = 0.5 * (pts[a] + pts[b]);
    std::vector<double> dist2(m);

    int it = 0;
    for (; it < max_iter; ++it) {
        double gamma = 0.0;
        std::size_t j = 0, k = m;
        double dj = -1.0, dk = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i) {
            dist2[i] = (pts[i] - c).squaredNorm();
            gamma += u[i] * dist2[i];
            if (dist2[i] > dj) {
                dj = dist2[i];
                j = i;
            }
            if (u[i] > 0.0 && dist2[i] < dk) {
                dk = dist2[i];
                k = i;
            }
        }
        if (gamma <= 0.0)
            break;
        const double up = dj / gamma - 1.0;
        const double down = (k < m) ? 1.0 - dk / gamma : 0.0;
        if (up <= eps)
            break;
        if (it % 8 == 7)
            if (auto polished = detail::polish_weights(pts, u))
                return {polished->center, polished->radius, it, true, polished->support};
        if (up >= down) {
            const double lambda = up / (2.0 * (1.0 + up));
            for (auto& w : u)
                w *= (1.0 - lambda);
            u[j] += lambda;
            c = (1.0 - lambda) * c + lambda * pts[j];
        } else {
            double lambda = down / (2.0 * (1.0 - down));
            const double cap = u[k] / (1.0 - u[k]);
            const bool drop = lambda >= cap;
            if (drop)
                lambda = cap;
            for (auto& w : u)
                w *= (1.0 + lambda);
            u[k] -= lambda;
            if (drop)
                u[k] = 0.0;
            c = (1.0 + lambda) * c - lambda * pts[k];
        }
    }

    double r = 0.0;
    for (const auto& p : pts)
        r = std::max(r, (p - c).norm());

    if (auto polished = detail::polish_weights(pts, u))
        if (polished->radius <= r)
            return {polished->center, polished->radius, it, true, polished->support};
    return {c, r, it};
}

// ---------------------------------------------------------------------------
// Chebyshev center
// ---------------------------------------------------------------------------

namespace detail {

template <GeodesicSpace S>
CenterReport<typename S::Point> descent_center(const S& space, const PointSet<S>& b, const CenterOptions& opt)
{
    using Point = typename S::Point;
    Point v = b.front();
    Point best = v;
    double best_r = std::numeric_limits<double>::infinity();
    double window_start_r = best_r;
    int stall = 0;
    long k = 0;
    for (; k < opt.max_iterations; ++k) {
        const auto [idx, r] = farthest(space, b, v);
        if (r < best_r) {
            best_r = r;
            best = v;
        }
        if (window_start_r - best_r < opt.tol) {
            if (++stall >= opt.stall_window)
                break;
        } else {
            stall = 0;
            window_start_r = best_r;
        }
        if (r == 0.0)
            break;
        v = space.geodesic(v, b[idx], 1.0 / static_cast<double>(k + 2));
    }
    if (k >= opt.max_iterations && window_start_r - best_r > 100.0 * opt.tol)
        fail(ErrorKind::NoConvergence, "farthest-point descent hit the iteration cap");
    const double r = radius_at(space, b, best);
    return {best, r, k, r - best_r, CenterMethod::FarthestPointDescent};
}

template <HasTangentChart S>
CenterReport<typename S::Point> chart_center(const S& space, const PointSet<S>& b, const CenterOptions& opt)
{
    using Point = typename S::Point;
    auto logs_at = [&](const Point& v, std::vector<Eigen::VectorXd>& out) {
        const auto chart = space.chart(v);
        double r = 0.0;
        for (std::size_t i = 0; i < b.size(); ++i) {
            out[i] = chart.log(b[i]);
            r = std::max(r, out[i].norm());
        }
        return r;
    };

    Point v = b.front();
    std::vector<Eigen::VectorXd> logs(b.size()), trial(b.size());
    double r = logs_at(v, logs);
    double last_step = std::numeric_limits<double>::infinity();
    bool settled = false;
    std::vector<std::size_t> hint;
    int it = 0;
    for (; it < opt.max_chart_iterations && !settled; ++it) {
        // The first chart is far from the answer, so a coarse ball is enough there.
        const EnclosingBall ball = min_enclosing_ball(logs, it == 0 ? 1e-4 : 1e-10, 10000, hint);
        hint = ball.support;
        Eigen::VectorXd step = ball.center;
        last_step = step.norm();
        if (last_step <= opt.tol * std::max(1.0, r))
            break;
        const auto chart = space.chart(v);
        bool accepted = false;
        for (int halving = 0; halving < 40; ++halving) {
            Point candidate = chart.exp(step);
            const double rc = logs_at(candidate, trial);
            if (rc < r) {
                accepted = true;
                const double gain = r - rc;
                v = std::move(candidate);
                r = rc;
                std::swap(logs, trial);
                settled = gain <= 1e-15 * r; // rounding floor
                break;
            }
            step *= 0.5;
        }
        if (!accepted)
            break;
    }
    if (!settled && it >= opt.max_chart_iterations && last_step > 100.0 * opt.tol * std::max(1.0, r))
        fail(ErrorKind::NoConvergence, "tangent-chart center did not settle");
    return {v, r, it, 0.0, CenterMethod::TangentChart};
}

} // namespace detail

template <GeodesicSpace S>
CenterReport<typename S::Point> chebyshev_center(const S& space, const PointSet<S>& b, const CenterOptions& opt = {})
{
    detail::require_nonempty<S>(b, "chebyshev_center");
    require(opt.tol > 0.0, ErrorKind::PreconditionViolated, "tolerance must be positive");
    CenterMethod method = opt.method;
    if (method == CenterMethod::Auto)
        method = HasTangentChart<S> ? CenterMethod::TangentChart : CenterMethod::FarthestPointDescent;

    CenterReport<typename S::Point> report = [&] {
        if constexpr (HasTangentChart<S>) {
            if (method == CenterMethod::TangentChart)
                return detail::chart_center(space, b, opt);
        } else {
            require(method != CenterMethod::TangentChart, ErrorKind::PreconditionViolated,
                    "space has no tangent chart");
        }
        return detail::descent_center(space, b, opt);
    }();

    const double covered = radius_at(space, b, report.center);
    report.covering_residual = covered - report.radius;
    require(covered <= report.radius + 1e-7, ErrorKind::InvariantViolation, "center does not cover the set");
    return report;
}

// ---------------------------------------------------------------------------
// Bruhat-Tits center
// ---------------------------------------------------------------------------

/// Midpoints of all pairs at distance >= (1 - rel_tol) * diam(B), near-duplicates merged.
template <GeodesicSpace S>
PointSet<S> midpoint_set(const S& space, const PointSet<S>& b, double rel_tol = 1e-9)
{
    detail::require_nonempty<S>(b, "midpoint_set");
    if (b.size() == 1)
        return b;
    const double diam = diameter(space, b);
    if (diam == 0.0)
        return {b.front()};
    const double cut = (1.0 - rel_tol) * diam;
    const double merge = 1e-12 * std::max(1.0, diam);
    PointSet<S> out;
    for (std::size_t i = 0; i < b.size(); ++i) {
        for (std::size_t j = i + 1; j < b.size(); ++j) {
            if (space.distance(b[i], b[j]) < cut)
                continue;
            auto mid = space.geodesic(b[i], b[j], 0.5);
            const bool duplicate = std::any_of(out.begin(), out.end(),
                                               [&](const auto& q) { return space.distance(q, mid) <= merge; });
            if (!duplicate)
                out.push_back(std::move(mid));
        }
    }
    return out;
}

template <GeodesicSpace S>
typename S::Point bt_center(const S& space, const PointSet<S>& b, int rounds = 60, double rel_tol = 1e-9)
{
    detail::require_nonempty<S>(b, "bt_center");
    require(rounds >= 1, ErrorKind::PreconditionViolated, "bt_center needs at least one round");
    PointSet<S> current = b;
    for (int round = 0; round < rounds; ++round) {
        if (current.size() == 1 || diameter(space, current) < 1e-10)
            break;
        current = midpoint_set(space, current, rel_tol);
    }
    return current.front();
}

// ---------------------------------------------------------------------------
// Quantitative checks
// ---------------------------------------------------------------------------

struct DiameterShrinkReport {
    double ratio = 0.0;
    bool pass = false;
};

/// diam(M*) / diam(M) <= 1/sqrt(2)
template <GeodesicSpace S>
DiameterShrinkReport check_diameter_shrink(const S& space, const PointSet<S>& b)
{
    detail::require_nonempty<S>(b, "check_diameter_shrink");
    require(b.size() >= 2, ErrorKind::PreconditionViolated, "diameter shrink needs two points");
    const double d = diameter(space, b);
    DiameterShrinkReport r;
    r.ratio = d == 0.0 ? 0.0 : diameter(space, midpoint_set(space, b, 1e-9)) / d;
    r.pass = r.ratio <= 1.0 / std::sqrt(2.0) + 1e-9;
    return r;
}

struct CenterContinuityReport {
    double lhs = 0.0;            ///< d(ctr B, ctr B_eps)^2
    double rhs = 0.0;            ///< 8 eps r_B
    double eps = 0.0;            ///< Hausdorff distance
    double radius_gap = 0.0;     ///< |r_B - r_{B_eps}|
    bool radius_gap_ok = false;  ///< radius_gap <= eps
    bool pass = false;
};

template <GeodesicSpace S>
CenterContinuityReport check_center_continuity(const S& space, const PointSet<S>& b, const PointSet<S>& b_eps,
                                               const CenterOptions& opt = {})
{
    detail::require_nonempty<S>(b, "check_center_continuity");
    detail::require_nonempty<S>(b_eps, "check_center_continuity");
    const auto c = chebyshev_center(space, b, opt);
    const auto c_eps = chebyshev_center(space, b_eps, opt);
    CenterContinuityReport r;
    r.eps = hausdorff(space, b, b_eps);
    const double d = space.distance(c.center, c_eps.center);
    r.lhs = d * d;
    r.rhs = 8.0 * r.eps * c.radius;
    r.radius_gap = std::abs(c.radius - c_eps.radius);
    r.radius_gap_ok = r.radius_gap <= r.eps + 1e-9;
    r.pass = r.lhs <= r.rhs + 1e-7 && r.radius_gap_ok;
    return r;
}

struct BallIntersectionReport {
    bool degenerate = false;   ///< v0 == v0p; nothing to check
    long accepted = 0;         ///< samples found in the intersection
    long attempts = 0;
    double max_distance_to_midpoint = 0.0;
    double bound = 0.0;        ///< r0 - eps
    bool pass = false;
};

/// Rejection-samples Ball(v0, r0+eps) ∩ Ball(v0p, r0+eps) and checks every
/// sample lies within r0 - eps of the midpoint of v0 and v0p.
template <GeodesicSpace S, class Rng>
BallIntersectionReport check_ball_intersection_radius(const S& space, const typename S::Point& v0,
                                                      const typename S::Point& v0p, double r0, double eps,
                                                      long samples, Rng& rng)
{
    BallIntersectionReport r;
    const double e0 = space.distance(v0, v0p);
    if (e0 <= 1e-12) {
        r.degenerate = true;
        r.pass = true;
        return r;
    }
    require(r0 > 0.0 && eps > 0.0 && samples > 0, ErrorKind::PreconditionViolated, "r0, eps, samples must be positive");
    require(eps <= e0 * e0 / (16.0 * r0) * (1.0 + 1e-12), ErrorKind::PreconditionViolated,
            "eps exceeds d(v0,v0')^2 / (16 r0)");
    require(e0 <= 2.0 * (r0 + eps), ErrorKind::PreconditionViolated, "balls do not intersect");

    const auto mid = space.geodesic(v0, v0p, 0.5);
    const double reach = r0 + eps;
    r.bound = r0 - eps;
    const long max_attempts = 1000 * samples;
    while (r.accepted < samples && r.attempts < max_attempts) {
        ++r.attempts;
        const auto w = space.sample_ball(v0, reach, rng);
        if (space.distance(w, v0) > reach || space.distance(w, v0p) > reach)
            continue;
        ++r.accepted;
        r.max_distance_to_midpoint = std::max(r.max_distance_to_midpoint, space.distance(w, mid));
    }
    if (r.accepted == 0)
        fail(ErrorKind::SamplingFailure, "no sample landed in the ball intersection");
    r.pass = r.max_distance_to_midpoint <= r.bound + 1e-12;
    return r;
}

/// d(iso(ctr B), ctr(iso B)) <= 1e-6, after confirming iso preserves the pairwise distances of B.
template <GeodesicSpace S, class Iso>
bool center_equivariance_check(const S& space, const PointSet<S>& b, Iso&& iso, const CenterOptions& opt = {})
{
    detail::require_nonempty<S>(b, "center_equivariance_check");
    PointSet<S> image;
    image.reserve(b.size());
    for (const auto& p : b)
        image.push_back(iso(p));
    for (std::size_t i = 0; i < b.size(); ++i)
        for (std::size_t j = i + 1; j < b.size(); ++j) {
            const double before = space.distance(b[i], b[j]);
            const double after = space.distance(image[i], image[j]);
            require(std::abs(before - after) <= 1e-9 * std::max(1.0, before), ErrorKind::NotIsometry,
                    "map changes a pairwise distance by " + std::to_string(std::abs(before - after)));
        }
    const auto c = chebyshev_center(space, b, opt);
    const auto c_image = chebyshev_center(space, image, opt);
    return space.distance(iso(c.center), c_image.center) <= 1e-6;
}

struct SemigroupFixReport {
    bool invariant_set = false; ///< f(B) ⊆ B within 1e-9
    double displacement = 0.0;  ///< d(f(ctr B), ctr B)
    bool pass = false;
};

/// For a map with f(B) ⊆ B, the center is fixed: f(ctr B) = ctr B.
template <GeodesicSpace S, class Map>
SemigroupFixReport check_semigroup_fix(const S& space, const PointSet<S>& b, Map&& f, const CenterOptions& opt = {})
{
    detail::require_nonempty<S>(b, "check_semigroup_fix");
    SemigroupFixReport r;
    r.invariant_set = std::all_of(b.begin(), b.end(), [&](const auto& p) {
        const auto fp = f(p);
        return std::any_of(b.begin(), b.end(), [&](const auto& q) { return space.distance(fp, q) <= 1e-9; });
    });
    const auto c = chebyshev_center(space, b, opt);
    r.displacement = space.distance(f(c.center), c.center);
    r.pass = r.invariant_set && r.displacement <= 1e-6;
    return r;
}

} // namespace cocycle
