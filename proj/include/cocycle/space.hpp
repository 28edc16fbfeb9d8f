#pragma once

// Geodesic metric spaces used as fibers: Euclidean R^d, Pos(n) and Conf(n).
//
// The minimal contract (GeodesicSpace) is a distance, a constant-speed
// geodesic and a dimension tag. Spaces that also expose a tangent chart at a
// point (a log map whose norms equal distances from that point, and its
// inverse exp map) unlock the faster center solver and ball sampling.

#include <cmath>
#include <concepts>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "error.hpp"
#include "linalg.hpp"
#include "spd_geometry.hpp"

namespace cocycle {

template <class S>
concept GeodesicSpace = requires(const S& s, const typename S::Point& p, double t) {
    { s.distance(p, p) } -> std::convertible_to<double>;
    { s.geodesic(p, p, t) } -> std::convertible_to<typename S::Point>;
    { s.dimension() } -> std::convertible_to<int>;
};

template <class S>
concept HasTangentChart = GeodesicSpace<S> && requires(const S& s, const typename S::Point& p, const Eigen::VectorXd& v) {
    { s.chart(p).log(p) } -> std::convertible_to<Eigen::VectorXd>;
    { s.chart(p).exp(v) } -> std::convertible_to<typename S::Point>;
    { s.chart_dimension() } -> std::convertible_to<int>;
};

template <class S>
using PointSet = std::vector<typename S::Point>;

namespace detail {

template <class Rng>
Eigen::VectorXd uniform_in_ball(int dim, double radius, Rng& rng)
{
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Eigen::VectorXd v(dim);
    double norm = 0.0;
    do {
        for (int i = 0; i < dim; ++i)
            v(i) = gauss(rng);
        norm = v.norm();
    } while (norm == 0.0);
    return v * (radius * std::pow(unit(rng), 1.0 / dim) / norm);
}

} // namespace detail

class EuclideanSpace {
public:
    using Point = Eigen::VectorXd;

    explicit EuclideanSpace(int dim) : dim_(dim)
    {
        require(dim >= 1, ErrorKind::DimensionMismatch, "Euclidean dimension must be positive");
    }

    int dimension() const { return dim_; }
    int chart_dimension() const { return dim_; }

    double distance(const Point& a, const Point& b) const
    {
        check(a);
        check(b);
        return (a - b).norm();
    }

    Point geodesic(const Point& a, const Point& b, double t) const { return (1.0 - t) * a + t * b; }

    struct Chart {
        Point base;
        Eigen::VectorXd log(const Point& q) const { return q - base; }
        Point exp(const Eigen::VectorXd& v) const { return base + v; }
    };

    Chart chart(const Point& base) const { return Chart{base}; }

    template <class Rng>
    Point sample_ball(const Point& center, double radius, Rng& rng) const
    {
        return center + detail::uniform_in_ball(dim_, radius, rng);
    }

private:
    void check(const Point& p) const
    {
        require(p.size() == dim_, ErrorKind::DimensionMismatch,
                "point of dimension " + std::to_string(p.size()) + " in R^" + std::to_string(dim_));
    }

    int dim_;
};

/// Tangent chart of Pos(n) at C in whitened coordinates: log_C(Q) = log(C^{-1/2} Q C^{-1/2}),
/// flattened isometrically (diagonal, then sqrt(2) times the strict upper triangle).
class SpdChart {
public:
    explicit SpdChart(const SpdMatrix& base)
    {
        const auto e = detail::spd_eigen(base);
        root_ = detail::spectral_apply(e, [](double l) { return std::sqrt(l); });
        inv_root_ = detail::spectral_apply(e, [](double l) { return 1.0 / std::sqrt(l); });
    }

    Eigen::VectorXd log(const SpdMatrix& q) const
    {
        const Matrix inner = symmetrized(inv_root_ * q.matrix() * inv_root_);
        const auto e = detail::jacobi(inner);
        const Matrix l = detail::spectral_apply(e, [](double x) {
            require(x > 0.0, ErrorKind::NotPositiveDefinite, "chart log of non-positive matrix");
            return std::log(x);
        });
        return flatten(l);
    }

    SpdMatrix exp(const Eigen::VectorXd& v) const
    {
        const Matrix s = unflatten(v, static_cast<int>(root_.rows()));
        const Matrix e = detail::spectral_apply(detail::jacobi(s), [](double x) { return std::exp(x); });
        return SpdMatrix::unchecked(root_ * e * root_);
    }

    static int flat_size(int n) { return n * (n + 1) / 2; }

    static Eigen::VectorXd flatten(const Matrix& s)
    {
        const int n = static_cast<int>(s.rows());
        Eigen::VectorXd v(flat_size(n));
        int k = 0;
        for (int i = 0; i < n; ++i)
            v(k++) = s(i, i);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                v(k++) = std::sqrt(2.0) * s(i, j);
        return v;
    }

    static Matrix unflatten(const Eigen::VectorXd& v, int n)
    {
        require(v.size() == flat_size(n), ErrorKind::DimensionMismatch, "tangent vector has wrong size");
        Matrix s(n, n);
        int k = 0;
        for (int i = 0; i < n; ++i)
            s(i, i) = v(k++);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                s(i, j) = s(j, i) = v(k++) / std::sqrt(2.0);
        return s;
    }

private:
    Matrix root_;
    Matrix inv_root_;
};

class SpdSpace {
public:
    using Point = SpdMatrix;

    explicit SpdSpace(int n) : n_(n) { require_dim(n); }

    int dimension() const { return n_; }
    int chart_dimension() const { return SpdChart::flat_size(n_); }

    double distance(const Point& a, const Point& b) const { return spd_distance(a, b); }
    Point geodesic(const Point& a, const Point& b, double t) const { return spd_geodesic(a, b, t); }
    SpdChart chart(const Point& base) const { return SpdChart(base); }

    template <class Rng>
    Point sample_ball(const Point& center, double radius, Rng& rng) const
    {
        return chart(center).exp(detail::uniform_in_ball(chart_dimension(), radius, rng));
    }

private:
    int n_;
};

/// Conf(n): determinant-one slice of Pos(n). Every produced point is renormalized to det 1.
class ConfSpace {
public:
    using Point = SpdMatrix;

    explicit ConfSpace(int n) : n_(n) { require_dim(n); }

    int dimension() const { return n_; }
    int chart_dimension() const { return SpdChart::flat_size(n_); }

    double distance(const Point& a, const Point& b) const { return spd_distance(a, b); }
    Point geodesic(const Point& a, const Point& b, double t) const { return normalize_det(spd_geodesic(a, b, t)); }

    struct Chart {
        SpdChart inner;
        Eigen::VectorXd log(const SpdMatrix& q) const { return inner.log(q); }
        SpdMatrix exp(const Eigen::VectorXd& v) const { return normalize_det(inner.exp(traceless(v))); }

        static Eigen::VectorXd traceless(Eigen::VectorXd v)
        {
            int n = 0;
            while (SpdChart::flat_size(n) < v.size())
                ++n;
            const double mean = v.head(n).mean();
            v.head(n).array() -= mean;
            return v;
        }
    };

    Chart chart(const Point& base) const { return Chart{SpdChart(base)}; }

    template <class Rng>
    Point sample_ball(const Point& center, double radius, Rng& rng) const
    {
        // Uniform direction in the traceless tangent subspace.
        Eigen::VectorXd v = Chart::traceless(detail::uniform_in_ball(chart_dimension(), 1.0, rng));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const double norm = v.norm();
        if (norm > 0.0)
            v *= radius * std::pow(unit(rng), 1.0 / (chart_dimension() - 1)) / norm;
        return chart(center).exp(v);
    }

private:
    int n_;
};

struct SpaceSelfTest {
    int triples = 0;
    double worst_triangle_excess = 0.0; ///< max of d(a,c) - d(a,b) - d(b,c)
    double worst_median_excess = 0.0;   ///< max of d(m,w)^2 - (d(p,w)^2/2 + d(q,w)^2/2 - d(p,q)^2/4)
    double worst_symmetry_gap = 0.0;
    double worst_self_distance = 0.0;
    bool pass = false;
};

/// Checks metric axioms and the CAT(0) median inequality on every triple of `points`.
template <GeodesicSpace S>
SpaceSelfTest validate_space(const S& space, const PointSet<S>& points, double slack = 1e-9)
{
    SpaceSelfTest r;
    const std::size_t m = points.size();
    for (std::size_t i = 0; i < m; ++i) {
        r.worst_self_distance = std::max(r.worst_self_distance, space.distance(points[i], points[i]));
        for (std::size_t j = 0; j < m; ++j) {
            if (i == j)
                continue;
            const double dij = space.distance(points[i], points[j]);
            r.worst_symmetry_gap = std::max(r.worst_symmetry_gap, std::abs(dij - space.distance(points[j], points[i])));
            const auto mid = space.geodesic(points[i], points[j], 0.5);
            for (std::size_t k = 0; k < m; ++k) {
                if (k == i || k == j)
                    continue;
                ++r.triples;
                const double dik = space.distance(points[i], points[k]);
                const double djk = space.distance(points[j], points[k]);
                r.worst_triangle_excess = std::max(r.worst_triangle_excess, dik - dij - djk);
                const double dmk = space.distance(mid, points[k]);
                r.worst_median_excess =
                    std::max(r.worst_median_excess, dmk * dmk - (dik * dik / 2 + djk * djk / 2 - dij * dij / 4));
            }
        }
    }
    r.pass = r.worst_self_distance <= slack && r.worst_symmetry_gap <= slack && r.worst_triangle_excess <= slack &&
             r.worst_median_excess <= slack;
    return r;
}

} // namespace cocycle
