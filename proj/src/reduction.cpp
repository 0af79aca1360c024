#include "kronred/reduction.hpp"

#include "kronred/error.hpp"
#include "kronred/numerics.hpp"

#include <cmath>
#include <deque>
#include <string>

namespace kronred {

std::string_view to_string(PStrategy s) noexcept {
    switch (s) {
        case PStrategy::TreeElimination: return "tree";
        case PStrategy::OrthonormalNullBasis: return "nullbasis";
        case PStrategy::ModalDiagonalizing: return "modal";
    }
    return "unknown";
}

PStrategy parse_strategy(std::string_view name) {
    if (name == "tree" || name == "TreeElimination") return PStrategy::TreeElimination;
    if (name == "nullbasis" || name == "OrthonormalNullBasis") return PStrategy::OrthonormalNullBasis;
    if (name == "modal" || name == "ModalDiagonalizing") return PStrategy::ModalDiagonalizing;
    throw Error(ErrorCode::InvalidArgument, "unknown P strategy '" + std::string(name) + "'", std::string(name));
}

namespace {

struct TreePlan {
    std::vector<Index> order;    // interior rows in processing order
    std::vector<Index> omitted;  // omitted edge per entry of `order`
};

// Multi-source BFS from the boundary rows. Each interior node, in discovery
// order, drops the highest-indexed edge that connects it to an already
// settled node (boundary or an interior node processed earlier). The dropped
// edges then form a forest hanging off the boundary, so the KCL rows can be
// back-substituted leaf-first with integer arithmetic.
TreePlan plan_tree_elimination(const Eigen::MatrixXi& B, Index boundary_rows) {
    const Index n = B.rows();
    const Index m = B.cols();
    std::vector<std::vector<Index>> incident(static_cast<std::size_t>(n));
    std::vector<std::pair<Index, Index>> ends(static_cast<std::size_t>(m), {-1, -1});
    for (Index e = 0; e < m; ++e) {
        for (Index k = 0; k < n; ++k) {
            if (B(k, e) == 1) ends[static_cast<std::size_t>(e)].first = k;
            if (B(k, e) == -1) ends[static_cast<std::size_t>(e)].second = k;
            if (B(k, e) != 0) incident[static_cast<std::size_t>(k)].push_back(e);
        }
    }
    auto other_end = [&](Index e, Index k) {
        const auto& [a, b] = ends[static_cast<std::size_t>(e)];
        return a == k ? b : a;
    };

    std::vector<bool> discovered(static_cast<std::size_t>(n), false);
    std::deque<Index> queue;
    for (Index k = 0; k < boundary_rows; ++k) {
        discovered[static_cast<std::size_t>(k)] = true;
        queue.push_back(k);
    }
    TreePlan plan;
    while (!queue.empty()) {
        const Index k = queue.front();
        queue.pop_front();
        if (k >= boundary_rows) plan.order.push_back(k);
        for (Index e : incident[static_cast<std::size_t>(k)]) {
            const Index j = other_end(e, k);
            if (!discovered[static_cast<std::size_t>(j)]) {
                discovered[static_cast<std::size_t>(j)] = true;
                queue.push_back(j);
            }
        }
    }
    if (static_cast<Index>(plan.order.size()) != n - boundary_rows) {
        throw Error(ErrorCode::RankDeficientInput, "interior nodes unreachable from the boundary");
    }

    std::vector<bool> settled(static_cast<std::size_t>(n), false);
    for (Index k = 0; k < boundary_rows; ++k) settled[static_cast<std::size_t>(k)] = true;
    for (Index u : plan.order) {
        Index choice = -1;
        for (Index e : incident[static_cast<std::size_t>(u)]) {
            if (settled[static_cast<std::size_t>(other_end(e, u))]) choice = std::max(choice, e);
        }
        if (choice < 0) {
            throw Error(ErrorCode::RankDeficientInput,
                        "interior row " + std::to_string(u) + " has no edge towards the boundary");
        }
        plan.omitted.push_back(choice);
        settled[static_cast<std::size_t>(u)] = true;
    }
    return plan;
}

}  // namespace

std::vector<Index> tree_elimination_omitted_edges(const IncidenceMatrix& incidence) {
    return plan_tree_elimination(incidence.B, incidence.boundary_rows).omitted;
}

Matrix tree_elimination_basis(const IncidenceMatrix& incidence) {
    const Eigen::MatrixXi& B = incidence.B;
    const Index m = B.cols();
    const TreePlan plan = plan_tree_elimination(B, incidence.boundary_rows);

    std::vector<bool> is_omitted(static_cast<std::size_t>(m), false);
    for (Index e : plan.omitted) is_omitted[static_cast<std::size_t>(e)] = true;
    std::vector<Index> column(static_cast<std::size_t>(m), -1);
    Index retained = 0;
    for (Index e = 0; e < m; ++e) {
        if (!is_omitted[static_cast<std::size_t>(e)]) column[static_cast<std::size_t>(e)] = retained++;
    }

    Eigen::MatrixXi P = Eigen::MatrixXi::Zero(m, retained);
    for (Index e = 0; e < m; ++e) {
        if (column[static_cast<std::size_t>(e)] >= 0) P(e, column[static_cast<std::size_t>(e)]) = 1;
    }
    // Leaf-first: KCL at u gives f_o = -B(u,o) * sum_{e != o} B(u,e) f_e, and
    // every other omitted edge at u belongs to a node processed after u.
    for (std::size_t k = plan.order.size(); k-- > 0;) {
        const Index u = plan.order[k];
        const Index o = plan.omitted[k];
        Eigen::RowVectorXi row = Eigen::RowVectorXi::Zero(retained);
        for (Index e = 0; e < m; ++e) {
            if (e == o || B(u, e) == 0) continue;
            row += B(u, e) * P.row(e);
        }
        P.row(o) = -B(u, o) * row;
    }
    return P.cast<double>();
}

Matrix build_P(const IncidenceMatrix& incidence, const PartitionedMatrices& matrices, PStrategy strategy) {
    switch (strategy) {
        case PStrategy::TreeElimination:
            return tree_elimination_basis(incidence);
        case PStrategy::OrthonormalNullBasis:
            return nullspace_basis(matrices.B0);
        case PStrategy::ModalDiagonalizing: {
            const Matrix base = nullspace_basis(matrices.B0);
            const Matrix lp = base.transpose() * matrices.l.asDiagonal() * base;
            const Matrix rp = base.transpose() * matrices.r.asDiagonal() * base;
            return base * simultaneous_diagonalization(lp, rp).V;
        }
    }
    throw Error(ErrorCode::InvalidArgument, "unhandled P strategy");
}

namespace {

void zero_off_diagonal(Matrix& m, double scale) {
    const double cutoff = 1e-12 * scale;
    for (Index j = 0; j < m.cols(); ++j) {
        for (Index i = 0; i < m.rows(); ++i) {
            if (i != j && std::abs(m(i, j)) <= cutoff) m(i, j) = 0.0;
        }
        if (m(j, j) < 0.0 && -m(j, j) <= cutoff) m(j, j) = 0.0;
    }
}

}  // namespace

ReducedModel reduce_with_basis(const PartitionedMatrices& matrices, Matrix P, PStrategy strategy) {
    const Index edges = matrices.l.size();
    if (P.rows() != edges) throw Error(ErrorCode::DimensionMismatch, "basis row count differs from edge count");
    if (matrices.B0.rows() > 0 && P.cols() > 0) {
        const double defect = (matrices.B0 * P).cwiseAbs().maxCoeff();
        if (defect > kNullTolerance * std::max(1.0, P.cwiseAbs().maxCoeff())) {
            throw Error(ErrorCode::RankDeficientInput, "basis columns leave null(B0)", {}, defect);
        }
    }
    if (P.cols() != edges - matrices.B0.rows() || numerical_rank(P) != P.cols()) {
        throw Error(ErrorCode::RankDeficientInput, "basis does not span null(B0)");
    }

    ReducedModel model;
    model.strategy = strategy;
    model.Lhat = P.transpose() * matrices.l.asDiagonal() * P;
    model.Rhat = P.transpose() * matrices.r.asDiagonal() * P;
    model.Bhat = matrices.B1 * P;
    model.P = std::move(P);
    if (strategy == PStrategy::ModalDiagonalizing && model.order() > 0) {
        zero_off_diagonal(model.Lhat, model.Lhat.cwiseAbs().maxCoeff());
        zero_off_diagonal(model.Rhat, std::max(model.Rhat.cwiseAbs().maxCoeff(), model.Lhat.cwiseAbs().maxCoeff()));
    }
    return model;
}

ReducedModel reduce(const ValidatedNetwork& network, PStrategy strategy) {
    const IncidenceMatrix incidence = build_incidence(network);
    const PartitionedMatrices matrices = partition(incidence, network);
    return reduce_with_basis(matrices, build_P(incidence, matrices, strategy), strategy);
}

Vector embed_initial(const Matrix& P, const Vector& f0, double tol) {
    if (P.rows() != f0.size()) throw Error(ErrorCode::DimensionMismatch, "embed_initial: f0 length != edge count");
    if (P.cols() == 0) {
        if (f0.norm() > 0.0) {
            throw Error(ErrorCode::InconsistentInitialCondition, "no nonzero flow is consistent with KCL", {},
                        f0.norm());
        }
        return Vector(0);
    }
    Vector fhat = P.colPivHouseholderQr().solve(f0);
    const double residual = (P * fhat - f0).norm();
    if (residual > tol * f0.norm()) {
        throw Error(ErrorCode::InconsistentInitialCondition, "initial flows violate KCL at interior nodes", {},
                    residual);
    }
    return fhat;
}

Vector lift(const Matrix& P, const Vector& fhat) {
    if (P.cols() != fhat.size()) throw Error(ErrorCode::DimensionMismatch, "lift: pseudoflow length mismatch");
    return P * fhat;
}

Vector output_injections(const Matrix& B1, const Matrix& P, const Vector& fhat) {
    if (B1.cols() != P.rows() || P.cols() != fhat.size()) {
        throw Error(ErrorCode::DimensionMismatch, "output_injections: shape mismatch");
    }
    return B1 * (P * fhat);
}

HomogeneousReducedModel homogeneous_reduce(const ValidatedNetwork& network, double tol) {
    const Vector r = network.resistances();
    const Vector l = network.inductances();
    const Vector ratio = r.cwiseQuotient(l);
    const double alpha = ratio.size() > 0 ? ratio.mean() : 0.0;
    const double deviation = ratio.size() > 0 ? (ratio.array() - alpha).abs().maxCoeff() : 0.0;
    if (deviation > tol * alpha) {
        throw Error(ErrorCode::NotHomogeneous, "edges do not share a common r/l ratio", {}, deviation);
    }
    const Matrix B = build_incidence(network).as_real();
    const Matrix laplacian = B * l.cwiseInverse().asDiagonal() * B.transpose();
    std::vector<Index> interior;
    for (Index k = network.boundary_count(); k < network.node_count(); ++k) interior.push_back(k);
    return {alpha, schur_complement(laplacian, interior)};
}

}  // namespace kronred
