#pragma once

// Dense linear-algebra kernels shared by the reduction routines.

#include "kronred/error.hpp"
#include "kronred/network.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <string>
#include <vector>

namespace kronred {

/// Default relative rank threshold for null-space computations (times sigma_max).
inline constexpr double kNullTolerance = 1e-10;
/// LU reciprocal-condition floor below which a block counts as singular.
inline constexpr double kSingularRcond = 1e-13;
/// Relative residual allowed by min_norm_solution before reporting Inconsistent.
inline constexpr double kLeastSquaresTolerance = 1e-9;

/// Orthonormal basis of null(M) from a full SVD. Columns are the trailing
/// right singular vectors. A 0 x E input yields the E x E identity.
/// Throws RankDeficientInput when the numerical rank of M is below its row count.
[[nodiscard]] Matrix nullspace_basis(const Matrix& M, double tol = kNullTolerance);

/// Orthonormal basis of null(M) for any M (no rank requirement).
[[nodiscard]] Matrix kernel_basis(const Matrix& M, double tol = kNullTolerance);

/// Numerical rank with threshold tol * sigma_max.
[[nodiscard]] Index numerical_rank(const Matrix& M, double tol = kNullTolerance);

/// Schur complement M \ M00 = M11 - M10 M00^{-1} M01, where the "0" block is
/// indexed by `eliminated` and the retained indices keep their relative order.
template <typename Derived>
[[nodiscard]] Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
schur_complement(const Eigen::MatrixBase<Derived>& M, const std::vector<Index>& eliminated);

/// Minimum-Euclidean-norm x with A x = b. Throws Inconsistent if b is not
/// in range(A) to kLeastSquaresTolerance * |b|.
[[nodiscard]] Vector min_norm_solution(const Matrix& A, const Vector& b);

struct PencilDiagonalization {
    Matrix V;        // V^T Lp V = I, V^T Rp V = diag(values)
    Vector values;   // generalized eigenvalues, ascending
};

/// Simultaneous diagonalization of an SPD/PSD symmetric pair by Cholesky
/// whitening of Lp followed by a symmetric eigendecomposition. Throws
/// NotPositiveDefinite when Lp has no Cholesky factor.
[[nodiscard]] PencilDiagonalization simultaneous_diagonalization(const Matrix& Lp, const Matrix& Rp);

/// P (P^T W P)^{-1} P^T for diagonal complex weights W = diag(weights).
[[nodiscard]] CMatrix projected_inverse(const CVector& weights, const Matrix& P);

/// W^{-1} - W^{-1} B0^T (B0 W^{-1} B0^T)^{-1} B0 W^{-1}.
[[nodiscard]] CMatrix constrained_inverse(const CVector& weights, const Matrix& B0);

/// Max-abs difference between projected_inverse and constrained_inverse.
/// The two coincide whenever range(P) = null(B0).
[[nodiscard]] double projection_identity_residual(const CVector& weights, const Matrix& P, const Matrix& B0);

// ---------------------------------------------------------------------------

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
schur_complement(const Eigen::MatrixBase<Derived>& M, const std::vector<Index>& eliminated) {
    using Scalar = typename Derived::Scalar;
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    const Index n = M.rows();
    if (M.cols() != n) throw Error(ErrorCode::DimensionMismatch, "schur_complement needs a square matrix");

    std::vector<bool> drop(static_cast<std::size_t>(n), false);
    for (Index k : eliminated) {
        if (k < 0 || k >= n || drop[static_cast<std::size_t>(k)]) {
            throw Error(ErrorCode::InvalidArgument, "schur_complement: bad or repeated index " + std::to_string(k));
        }
        drop[static_cast<std::size_t>(k)] = true;
    }
    std::vector<Index> kept;
    for (Index k = 0; k < n; ++k) {
        if (!drop[static_cast<std::size_t>(k)]) kept.push_back(k);
    }
    const Mat full = M;
    if (eliminated.empty()) return full;

    const Mat m11 = full(kept, kept);
    const Mat m10 = full(kept, eliminated);
    const Mat m01 = full(eliminated, kept);
    const Mat m00 = full(eliminated, eliminated);

    Eigen::PartialPivLU<Mat> lu(m00);
    const double rcond = lu.rcond();
    if (!(rcond >= kSingularRcond)) {
        throw Error(ErrorCode::SingularBlock, "eliminated block is singular to working precision", {}, rcond);
    }
    return m11 - m10 * lu.solve(m01);
}

}  // namespace kronred
