#pragma once

// Exact time-domain elimination of zero-injection nodes.
//
// Flows of the full network satisfy B0 f = 0, so f = P fhat for any P whose
// columns span null(B0). Projecting L df/dt = -R f + B^T v onto range(P)
// removes the interior voltages and gives the ODE
//
//     Lhat dfhat/dt = -Rhat fhat + Bhat^T v1,    i1 = Bhat fhat,
//
// with Lhat = P^T L P, Rhat = P^T R P, Bhat = B1 P. The choice of P changes
// the coordinates but not the map v1 -> i1.

#include "kronred/network.hpp"

#include <string_view>

namespace kronred {

enum class PStrategy {
    TreeElimination,       // drop one incident flow per interior node; integer P
    OrthonormalNullBasis,  // SVD basis of null(B0)
    ModalDiagonalizing,    // P' V with V diagonalizing (Lhat', Rhat')
};

[[nodiscard]] std::string_view to_string(PStrategy s) noexcept;
/// Accepts "tree", "nullbasis", "modal" (CLI names) and the enumerator names.
[[nodiscard]] PStrategy parse_strategy(std::string_view name);

struct ReducedModel {
    PStrategy strategy = PStrategy::OrthonormalNullBasis;
    Matrix P;     // E x (E - N0)
    Matrix Lhat;  // (E - N0) x (E - N0), SPD
    Matrix Rhat;  // (E - N0) x (E - N0), PSD
    Matrix Bhat;  // (N - N0) x (E - N0)

    [[nodiscard]] Index order() const { return P.cols(); }
    [[nodiscard]] Index edge_count() const { return P.rows(); }
    [[nodiscard]] Index boundary_count() const { return Bhat.rows(); }

    /// Coefficients beta(k, n) of boundary voltage n driving pseudoflow k,
    /// i.e. P^T B1^T. With the modal strategy each row is one decoupled RL loop.
    [[nodiscard]] Matrix beta() const { return Bhat.transpose(); }
};

/// Edge indices dropped by tree elimination, one per interior node in the
/// order the nodes were processed (multi-source BFS from the boundary).
[[nodiscard]] std::vector<Index> tree_elimination_omitted_edges(const IncidenceMatrix& incidence);

/// Integer {0,+1,-1} basis of null(B0): identity rows for retained flows,
/// KCL combinations for the omitted ones.
[[nodiscard]] Matrix tree_elimination_basis(const IncidenceMatrix& incidence);

[[nodiscard]] Matrix build_P(const IncidenceMatrix& incidence, const PartitionedMatrices& matrices,
                             PStrategy strategy);

[[nodiscard]] ReducedModel reduce(const ValidatedNetwork& network, PStrategy strategy);

/// Assemble a model from an explicit basis (e.g. one read back from disk).
[[nodiscard]] ReducedModel reduce_with_basis(const PartitionedMatrices& matrices, Matrix P, PStrategy strategy);

/// Pseudoflow coordinates of a consistent flow vector. Throws
/// InconsistentInitialCondition when f0 is not in range(P) to tol * |f0|.
[[nodiscard]] Vector embed_initial(const Matrix& P, const Vector& f0, double tol = 1e-9);

[[nodiscard]] Vector lift(const Matrix& P, const Vector& fhat);

[[nodiscard]] Vector output_injections(const Matrix& B1, const Matrix& P, const Vector& fhat);

struct HomogeneousReducedModel {
    double alpha = 0.0;  // common r/l ratio, 1/s
    Matrix Lred;         // Schur complement of B L^{-1} B^T on the boundary
};

/// Injection-space reduction for networks with R = alpha L. Throws
/// NotHomogeneous(max deviation) when max |r/l - alpha| > tol * alpha.
[[nodiscard]] HomogeneousReducedModel homogeneous_reduce(const ValidatedNetwork& network, double tol = 1e-9);

}  // namespace kronred
