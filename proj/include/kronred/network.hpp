#pragma once

// RL network description, incidence matrix and its boundary/interior split.
//
// Node ordering convention used by every matrix in the library: boundary
// nodes first (in input order), then interior nodes (in input order).
// Edge columns follow input order.

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

namespace kronred {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;

struct Edge {
    std::string id;
    std::string from;
    std::string to;
    double r = 0.0;  // ohm
    double l = 0.0;  // henry
};

struct Network {
    std::vector<std::string> nodes;
    std::vector<Edge> edges;
    std::vector<std::string> boundary;
};

struct ValidationOptions {
    /// Accept negative r and l (l must still be nonzero). Only used for
    /// networks synthesized by the frequency-domain heuristic.
    bool allow_nonpassive = false;
};

/// A network that passed `validate`. Immutable; caches the boundary-first
/// node permutation and the per-edge endpoint indices in that ordering.
class ValidatedNetwork {
public:
    [[nodiscard]] const Network& network() const noexcept { return net_; }
    [[nodiscard]] Index node_count() const noexcept { return static_cast<Index>(net_.nodes.size()); }
    [[nodiscard]] Index edge_count() const noexcept { return static_cast<Index>(net_.edges.size()); }
    [[nodiscard]] Index boundary_count() const noexcept { return static_cast<Index>(net_.boundary.size()); }
    [[nodiscard]] Index interior_count() const noexcept { return node_count() - boundary_count(); }

    /// Node ids in matrix row order (boundary first).
    [[nodiscard]] const std::vector<std::string>& ordered_nodes() const noexcept { return ordered_; }
    [[nodiscard]] std::vector<std::string> boundary_nodes() const;
    [[nodiscard]] std::vector<std::string> interior_nodes() const;

    /// Row index of a node id in the boundary-first ordering.
    [[nodiscard]] Index row_of(const std::string& node_id) const;
    [[nodiscard]] Index tail_row(Index edge) const { return tail_[static_cast<std::size_t>(edge)]; }
    [[nodiscard]] Index head_row(Index edge) const { return head_[static_cast<std::size_t>(edge)]; }

    [[nodiscard]] Vector resistances() const;
    [[nodiscard]] Vector inductances() const;

private:
    friend ValidatedNetwork validate(const Network& network, const ValidationOptions& options);
    ValidatedNetwork() = default;

    Network net_;
    std::vector<std::string> ordered_;
    std::unordered_map<std::string, Index> row_;
    std::vector<Index> tail_;
    std::vector<Index> head_;
};

/// Checks ids, endpoints, element values and connectivity. Throws
/// kronred::Error (Disconnected, NonpositiveInductance, NegativeResistance,
/// EmptyBoundary, UnknownNodeRef, DuplicateId, SelfLoop).
[[nodiscard]] ValidatedNetwork validate(const Network& network, const ValidationOptions& options = {});

/// Dense N x E {0,+1,-1} matrix: +1 at the `from` row, -1 at the `to` row.
struct IncidenceMatrix {
    Eigen::MatrixXi B;
    Index boundary_rows = 0;

    [[nodiscard]] Matrix as_real() const { return B.cast<double>(); }
};

[[nodiscard]] IncidenceMatrix build_incidence(const ValidatedNetwork& network);

struct PartitionedMatrices {
    Matrix B1;  // boundary rows
    Matrix B0;  // interior rows (N0 x E, possibly 0 x E)
    Vector r;   // diag(R)
    Vector l;   // diag(L)

    [[nodiscard]] Matrix R() const { return r.asDiagonal(); }
    [[nodiscard]] Matrix L() const { return l.asDiagonal(); }
};

[[nodiscard]] PartitionedMatrices partition(const IncidenceMatrix& incidence, const ValidatedNetwork& network);

/// Convenience: build_incidence followed by partition.
[[nodiscard]] PartitionedMatrices partitioned(const ValidatedNetwork& network);

}  // namespace kronred
