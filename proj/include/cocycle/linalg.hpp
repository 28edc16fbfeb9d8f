#pragma once

// Small dense matrices (n <= 8) backed by Eigen with a fixed upper bound on
// storage, so that hot loops over fibers and orbits never touch the heap.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

#include "error.hpp"

namespace cocycle {

inline constexpr int kMaxDim = 8;

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;
using Vector = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;

inline void require_dim(int n)
{
    require(n >= 1 && n <= kMaxDim, ErrorKind::DimensionMismatch,
            "matrix dimension " + std::to_string(n) + " outside supported range 1.." + std::to_string(kMaxDim));
}

inline void require_square(const Matrix& m)
{
    require(m.rows() == m.cols(), ErrorKind::DimensionMismatch, "matrix is not square");
    require_dim(static_cast<int>(m.rows()));
}

inline void require_same_dim(const Matrix& a, const Matrix& b)
{
    require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorKind::DimensionMismatch,
            "dimensions " + std::to_string(a.rows()) + " and " + std::to_string(b.rows()) + " differ");
}

inline double symmetry_defect(const Matrix& m) { return (m - m.transpose()).cwiseAbs().maxCoeff(); }

inline Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

/// Planar rotation by `angle` radians.
inline Matrix rotation2(double angle)
{
    Matrix r(2, 2);
    r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    return r;
}

/// ||M^T M - Id||_F
inline double orthogonality_defect(const Matrix& m)
{
    return (m.transpose() * m - Matrix::Identity(m.rows(), m.cols())).norm();
}

/// Modified Gram-Schmidt on the columns; used to strip rounding drift from long orthogonal products.
inline Matrix gram_schmidt(const Matrix& m)
{
    Matrix q = m;
    for (Eigen::Index j = 0; j < q.cols(); ++j) {
        for (Eigen::Index i = 0; i < j; ++i)
            q.col(j) -= q.col(i).dot(q.col(j)) * q.col(i);
        const double norm = q.col(j).norm();
        require(norm > 1e-300, ErrorKind::SingularMatrix, "Gram-Schmidt on rank-deficient matrix");
        q.col(j) /= norm;
    }
    return q;
}

inline void require_invertible(const Matrix& g, double det_floor = 1e-12)
{
    require_square(g);
    const double det = g.determinant();
    require(std::isfinite(det) && std::abs(det) > det_floor, ErrorKind::SingularMatrix,
            "|det| = " + std::to_string(std::abs(det)) + " not above " + std::to_string(det_floor));
}

} // namespace cocycle
