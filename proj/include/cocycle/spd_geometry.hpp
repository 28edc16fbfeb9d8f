#pragma once

// Geometry of Pos(n), the symmetric space of positive-definite symmetric
// matrices with the GL(n)-invariant metric
//
//     d(P, Q) = || log(P^{-1/2} Q P^{-1/2}) ||_F ,
//
// and of its totally geodesic det-1 slice Conf(n) (conformal structures).
// All spectral functions go through a cyclic Jacobi eigensolver.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "error.hpp"
#include "linalg.hpp"

namespace cocycle {

inline constexpr double kSymmetryInputTolerance = 1e-9;
inline constexpr double kUnitDeterminantTolerance = 1e-10;

struct EigenDecomposition {
    Vector values;   ///< descending
    Matrix rotation; ///< orthogonal, columns are eigenvectors
};

namespace detail {

inline void require_symmetric_input(const Matrix& m)
{
    require_square(m);
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    require(m.allFinite(), ErrorKind::NotSymmetric, "matrix has non-finite entries");
    require(symmetry_defect(m) <= kSymmetryInputTolerance * scale, ErrorKind::NotSymmetric,
            "symmetry defect " + std::to_string(symmetry_defect(m)));
}

// Cyclic Jacobi. Stops once the off-diagonal Frobenius norm is below
// 1e-13 relative to ||A||_F; gives up after 100 sweeps.
inline EigenDecomposition jacobi(Matrix a)
{
    const Eigen::Index n = a.rows();
    Matrix v = Matrix::Identity(n, n);
    const double threshold = 1e-13 * std::max(a.norm(), std::numeric_limits<double>::min());

    for (int sweep = 0;; ++sweep) {
        double off = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i + 1; j < n; ++j)
                off += a(i, j) * a(i, j);
        if (std::sqrt(2.0 * off) <= threshold)
            break;
        if (sweep == 100)
            fail(ErrorKind::NoConvergence, "Jacobi eigensolver exceeded 100 sweeps");

        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0)
                    continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t;
                if (std::abs(theta) > 1e150)
                    t = 0.5 / theta;
                else
                    t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = a(q, p) = 0.0;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::array<Eigen::Index, kMaxDim> order{};
    std::iota(order.begin(), order.begin() + n, Eigen::Index{0});
    std::stable_sort(order.begin(), order.begin() + n,
                     [&](Eigen::Index i, Eigen::Index j) { return a(i, i) > a(j, j); });

    EigenDecomposition out{Vector(n), Matrix(n, n)};
    for (Eigen::Index k = 0; k < n; ++k) {
        out.values(k) = a(order[k], order[k]);
        out.rotation.col(k) = v.col(order[k]);
    }
    return out;
}

template <class F>
Matrix spectral_apply(const EigenDecomposition& e, F&& f)
{
    const Eigen::Index n = e.values.size();
    Vector fv(n);
    for (Eigen::Index k = 0; k < n; ++k)
        fv(k) = f(e.values(k));
    return symmetrized(e.rotation * fv.asDiagonal() * e.rotation.transpose());
}

} // namespace detail

/// Symmetric n x n matrix, symmetric to rounding after construction.
class SymmetricMatrix {
public:
    explicit SymmetricMatrix(const Matrix& m)
    {
        detail::require_symmetric_input(m);
        m_ = symmetrized(m);
    }

    static SymmetricMatrix zero(int n)
    {
        require_dim(n);
        return SymmetricMatrix(Matrix::Zero(n, n));
    }

    int dim() const { return static_cast<int>(m_.rows()); }
    const Matrix& matrix() const { return m_; }
    double norm() const { return m_.norm(); }

private:
    Matrix m_;
};

/// Point of Pos(n). Construction from raw entries checks symmetry and positivity.
class SpdMatrix {
public:
    explicit SpdMatrix(const Matrix& m)
    {
        detail::require_symmetric_input(m);
        m_ = symmetrized(m);
        const auto e = detail::jacobi(m_);
        require(e.values(e.values.size() - 1) > 0.0, ErrorKind::NotPositiveDefinite,
                "smallest eigenvalue " + std::to_string(e.values(e.values.size() - 1)));
    }

    /// Wraps a matrix already known to be positive definite (congruences, exponentials).
    static SpdMatrix unchecked(const Matrix& m)
    {
        SpdMatrix p;
        p.m_ = symmetrized(m);
        return p;
    }

    static SpdMatrix identity(int n)
    {
        require_dim(n);
        return unchecked(Matrix::Identity(n, n));
    }

    int dim() const { return static_cast<int>(m_.rows()); }
    const Matrix& matrix() const { return m_; }
    double determinant() const { return m_.determinant(); }

private:
    SpdMatrix() = default;
    Matrix m_;
};

inline EigenDecomposition sym_eigen(const SymmetricMatrix& p) { return detail::jacobi(p.matrix()); }

inline EigenDecomposition sym_eigen(const Matrix& p)
{
    detail::require_symmetric_input(p);
    return detail::jacobi(symmetrized(p));
}

namespace detail {

inline EigenDecomposition spd_eigen(const SpdMatrix& p)
{
    auto e = jacobi(p.matrix());
    require(e.values(e.values.size() - 1) > 0.0, ErrorKind::NotPositiveDefinite,
            "smallest eigenvalue " + std::to_string(e.values(e.values.size() - 1)));
    return e;
}

} // namespace detail

inline SymmetricMatrix spd_log(const SpdMatrix& p)
{
    return SymmetricMatrix(detail::spectral_apply(detail::spd_eigen(p), [](double l) { return std::log(l); }));
}

inline SpdMatrix spd_exp(const SymmetricMatrix& s)
{
    return SpdMatrix::unchecked(detail::spectral_apply(sym_eigen(s), [](double l) { return std::exp(l); }));
}

inline SpdMatrix spd_pow(const SpdMatrix& p, double t)
{
    return SpdMatrix::unchecked(detail::spectral_apply(detail::spd_eigen(p), [t](double l) { return std::pow(l, t); }));
}

inline SpdMatrix spd_sqrt(const SpdMatrix& p) { return spd_pow(p, 0.5); }

/// Eigenvalues of P^{-1/2} Q P^{-1/2}, computed through a Cholesky whitening of P.
inline Vector relative_eigenvalues(const SpdMatrix& p, const SpdMatrix& q)
{
    require_same_dim(p.matrix(), q.matrix());
    Eigen::LLT<Matrix> llt(p.matrix());
    require(llt.info() == Eigen::Success, ErrorKind::NotPositiveDefinite, "Cholesky factorization failed");
    Matrix w = llt.matrixL().solve(q.matrix());
    Matrix m = llt.matrixL().solve(w.transpose());
    return detail::jacobi(symmetrized(m)).values;
}

/// Affine-invariant distance: square root of the sum of squared log relative eigenvalues.
inline double spd_distance(const SpdMatrix& p, const SpdMatrix& q)
{
    const Vector lambda = relative_eigenvalues(p, q);
    double sum = 0.0;
    for (Eigen::Index k = 0; k < lambda.size(); ++k) {
        require(lambda(k) > 0.0, ErrorKind::NotPositiveDefinite, "relative eigenvalue not positive");
        const double l = std::log(lambda(k));
        sum += l * l;
    }
    return std::sqrt(sum);
}

/// P^{1/2} (P^{-1/2} Q P^{-1/2})^t P^{1/2}
inline SpdMatrix spd_geodesic(const SpdMatrix& p, const SpdMatrix& q, double t)
{
    require_same_dim(p.matrix(), q.matrix());
    require(t >= 0.0 && t <= 1.0, ErrorKind::PreconditionViolated, "geodesic parameter outside [0,1]");
    const auto e = detail::spd_eigen(p);
    const Matrix root = detail::spectral_apply(e, [](double l) { return std::sqrt(l); });
    const Matrix inv_root = detail::spectral_apply(e, [](double l) { return 1.0 / std::sqrt(l); });
    const Matrix inner = symmetrized(inv_root * q.matrix() * inv_root);
    const Matrix powered = detail::spectral_apply(detail::jacobi(inner), [t](double l) {
        require(l > 0.0, ErrorKind::NotPositiveDefinite, "geodesic endpoint not positive definite");
        return std::pow(l, t);
    });
    return SpdMatrix::unchecked(root * powered * root);
}

/// g . P = g P g^T
inline SpdMatrix gl_action(const Matrix& g, const SpdMatrix& p)
{
    require_invertible(g);
    require_same_dim(g, p.matrix());
    return SpdMatrix::unchecked(g * p.matrix() * g.transpose());
}

/// Rescales P to determinant one.
inline SpdMatrix normalize_det(const SpdMatrix& p)
{
    const double det = p.determinant();
    require(det > 0.0, ErrorKind::NotPositiveDefinite, "determinant not positive");
    return SpdMatrix::unchecked(p.matrix() / std::pow(det, 1.0 / p.dim()));
}

inline bool is_unit_determinant(const SpdMatrix& p)
{
    return std::abs(p.determinant() - 1.0) <= kUnitDeterminantTolerance;
}

/// (det A^T A)^{-1/2n}, the scalar making lambda * A unimodular.
inline double conf_normalizer(const Matrix& a)
{
    require_invertible(a);
    return std::pow(std::abs(a.determinant()), -1.0 / static_cast<double>(a.rows()));
}

/// g . P = (det g^T g)^{-1/n} g P g^T on Conf(n); the result is renormalized to det 1.
inline SpdMatrix conf_action(const Matrix& g, const SpdMatrix& p)
{
    require_invertible(g);
    require_same_dim(g, p.matrix());
    require(is_unit_determinant(p), ErrorKind::NotUnitDeterminant,
            "|det P - 1| = " + std::to_string(std::abs(p.determinant() - 1.0)));
    const double lambda = conf_normalizer(g);
    return normalize_det(SpdMatrix::unchecked(lambda * lambda * (g * p.matrix() * g.transpose())));
}

/// Singular values of A, descending.
inline Vector singular_values(const Matrix& a)
{
    require_square(a);
    Vector s = detail::jacobi(symmetrized(a.transpose() * a)).values;
    for (Eigen::Index k = 0; k < s.size(); ++k)
        s(k) = std::sqrt(std::max(s(k), 0.0));
    return s;
}

inline double operator_norm(const Matrix& a) { return singular_values(a)(0); }

/// ||A^{-1}|| (operator norm), i.e. the reciprocal of the smallest singular value.
inline double inverse_operator_norm(const Matrix& a)
{
    const Vector s = singular_values(a);
    const double smin = s(s.size() - 1);
    require(smin > 0.0, ErrorKind::SingularMatrix, "matrix is singular");
    return 1.0 / smin;
}

/// K_A = ||A|| ||A^{-1}||
inline double quasiconformal_distortion(const Matrix& a)
{
    require_invertible(a);
    const Vector s = singular_values(a);
    return s(0) / s(s.size() - 1);
}

/// Orthogonal polar factor M (M^T M)^{-1/2}.
inline Matrix polar_orthogonal(const Matrix& m)
{
    require_invertible(m);
    const auto e = detail::jacobi(symmetrized(m.transpose() * m));
    return m * detail::spectral_apply(e, [](double l) { return 1.0 / std::sqrt(l); });
}

} // namespace cocycle
