#include "kronred/numerics.hpp"

#include <cmath>

namespace kronred {

namespace {

CMatrix invert_checked(const CMatrix& m, const char* what) {
    Eigen::PartialPivLU<CMatrix> lu(m);
    const double rcond = lu.rcond();
    if (!(rcond >= kSingularRcond)) {
        throw Error(ErrorCode::SingularBlock, std::string(what) + " is singular to working precision", {}, rcond);
    }
    return lu.inverse();
}

CVector checked_reciprocals(const CVector& weights) {
    CVector inv(weights.size());
    for (Index e = 0; e < weights.size(); ++e) {
        if (std::abs(weights(e)) == 0.0) {
            throw Error(ErrorCode::InvalidArgument, "edge weight " + std::to_string(e) + " is zero");
        }
        inv(e) = 1.0 / weights(e);
    }
    return inv;
}

}  // namespace

Index numerical_rank(const Matrix& M, double tol) {
    if (M.size() == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(M);
    const Vector& s = svd.singularValues();
    const double cutoff = tol * s(0);
    Index rank = 0;
    for (Index k = 0; k < s.size(); ++k) {
        if (s(k) > cutoff) ++rank;
    }
    return rank;
}

Matrix kernel_basis(const Matrix& M, double tol) {
    const Index cols = M.cols();
    if (M.rows() == 0) return Matrix::Identity(cols, cols);
    Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeFullV);
    const Vector& s = svd.singularValues();
    Index rank = 0;
    for (Index k = 0; k < s.size(); ++k) {
        if (s(k) > tol * s(0)) ++rank;
    }
    return svd.matrixV().rightCols(cols - rank);
}

Matrix nullspace_basis(const Matrix& M, double tol) {
    const Index cols = M.cols();
    if (M.rows() == 0) return Matrix::Identity(cols, cols);

    Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeFullV);
    const Vector& s = svd.singularValues();
    const double cutoff = tol * s(0);
    Index rank = 0;
    for (Index k = 0; k < s.size(); ++k) {
        if (s(k) > cutoff) ++rank;
    }
    if (rank < M.rows()) {
        throw Error(ErrorCode::RankDeficientInput,
                    "constraint matrix has rank " + std::to_string(rank) + " < " + std::to_string(M.rows()), {},
                    static_cast<double>(rank));
    }
    return svd.matrixV().rightCols(cols - rank);
}

Vector min_norm_solution(const Matrix& A, const Vector& b) {
    if (A.rows() != b.size()) throw Error(ErrorCode::DimensionMismatch, "min_norm_solution: rows(A) != size(b)");
    if (A.cols() == 0) return Vector(0);

    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(A);
    Vector x = cod.solve(b);
    const double residual = (A * x - b).norm();
    if (residual > kLeastSquaresTolerance * std::max(b.norm(), 1e-300) && residual > 0.0) {
        throw Error(ErrorCode::Inconsistent, "right-hand side is not in the range of the matrix", {}, residual);
    }
    return x;
}

PencilDiagonalization simultaneous_diagonalization(const Matrix& Lp, const Matrix& Rp) {
    if (Lp.rows() != Lp.cols() || Rp.rows() != Rp.cols() || Lp.rows() != Rp.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "simultaneous_diagonalization: shape mismatch");
    }
    const Index m = Lp.rows();
    if (m == 0) return {Matrix(0, 0), Vector(0)};

    Eigen::LLT<Matrix> llt(Lp);
    if (llt.info() != Eigen::Success) {
        throw Error(ErrorCode::NotPositiveDefinite, "inductance block is not positive definite");
    }
    // C^{-1} Rp C^{-T} with Lp = C C^T
    const Matrix c_inv_r = llt.matrixL().solve(Rp);
    Matrix whitened = llt.matrixL().solve(c_inv_r.transpose()).transpose();
    whitened = 0.5 * (whitened + whitened.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Matrix> eig(whitened);
    if (eig.info() != Eigen::Success) {
        throw Error(ErrorCode::NotPositiveDefinite, "eigendecomposition of whitened pencil failed");
    }
    PencilDiagonalization out;
    out.V = llt.matrixU().solve(eig.eigenvectors());  // C^{-T} Q
    out.values = eig.eigenvalues();
    return out;
}

CMatrix projected_inverse(const CVector& weights, const Matrix& P) {
    if (weights.size() != P.rows()) throw Error(ErrorCode::DimensionMismatch, "projected_inverse: size mismatch");
    checked_reciprocals(weights);
    const CMatrix Pc = P.cast<std::complex<double>>();
    const CMatrix reduced = Pc.transpose() * weights.asDiagonal() * Pc;
    if (reduced.size() == 0) return CMatrix::Zero(P.rows(), P.rows());
    return Pc * invert_checked(reduced, "P^T W P") * Pc.transpose();
}

CMatrix constrained_inverse(const CVector& weights, const Matrix& B0) {
    if (weights.size() != B0.cols()) throw Error(ErrorCode::DimensionMismatch, "constrained_inverse: size mismatch");
    const CVector inv = checked_reciprocals(weights);
    const CMatrix w_inv = inv.asDiagonal();
    if (B0.rows() == 0) return w_inv;
    const CMatrix b0 = B0.cast<std::complex<double>>();
    const CMatrix b0_winv = b0 * w_inv;
    const CMatrix gram = b0_winv * b0.transpose();
    return w_inv - b0_winv.transpose() * invert_checked(gram, "B0 W^{-1} B0^T") * b0_winv;
}

double projection_identity_residual(const CVector& weights, const Matrix& P, const Matrix& B0) {
    return (projected_inverse(weights, P) - constrained_inverse(weights, B0)).cwiseAbs().maxCoeff();
}

}  // namespace kronred
