#include "kronred/network.hpp"

#include "kronred/error.hpp"

#include <cmath>
#include <numeric>
#include <unordered_set>

namespace kronred {

namespace {

// Union-find over node indices; used only for the connectivity count.
class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

private:
    std::vector<std::size_t> parent_;
};

}  // namespace

std::vector<std::string> ValidatedNetwork::boundary_nodes() const {
    return {ordered_.begin(), ordered_.begin() + boundary_count()};
}

std::vector<std::string> ValidatedNetwork::interior_nodes() const {
    return {ordered_.begin() + boundary_count(), ordered_.end()};
}

Index ValidatedNetwork::row_of(const std::string& node_id) const {
    auto it = row_.find(node_id);
    if (it == row_.end()) {
        throw Error(ErrorCode::UnknownNodeRef, "unknown node '" + node_id + "'", node_id);
    }
    return it->second;
}

Vector ValidatedNetwork::resistances() const {
    Vector r(edge_count());
    for (Index e = 0; e < edge_count(); ++e) r(e) = net_.edges[static_cast<std::size_t>(e)].r;
    return r;
}

Vector ValidatedNetwork::inductances() const {
    Vector l(edge_count());
    for (Index e = 0; e < edge_count(); ++e) l(e) = net_.edges[static_cast<std::size_t>(e)].l;
    return l;
}

ValidatedNetwork validate(const Network& network, const ValidationOptions& options) {
    std::unordered_map<std::string, std::size_t> input_index;
    for (std::size_t k = 0; k < network.nodes.size(); ++k) {
        if (!input_index.emplace(network.nodes[k], k).second) {
            throw Error(ErrorCode::DuplicateId, "duplicate node id '" + network.nodes[k] + "'", network.nodes[k]);
        }
    }
    if (network.boundary.empty()) {
        throw Error(ErrorCode::EmptyBoundary, "boundary node set is empty");
    }
    std::unordered_set<std::string> boundary;
    for (const auto& b : network.boundary) {
        if (!input_index.contains(b)) {
            throw Error(ErrorCode::UnknownNodeRef, "boundary references unknown node '" + b + "'", b);
        }
        if (!boundary.insert(b).second) {
            throw Error(ErrorCode::DuplicateId, "boundary lists node '" + b + "' twice", b);
        }
    }

    std::unordered_set<std::string> edge_ids;
    DisjointSets components(network.nodes.size());
    for (const auto& e : network.edges) {
        if (!edge_ids.insert(e.id).second) {
            throw Error(ErrorCode::DuplicateId, "duplicate edge id '" + e.id + "'", e.id);
        }
        auto from = input_index.find(e.from);
        auto to = input_index.find(e.to);
        if (from == input_index.end() || to == input_index.end()) {
            throw Error(ErrorCode::UnknownNodeRef, "edge '" + e.id + "' references an unknown node", e.id);
        }
        if (e.from == e.to) {
            throw Error(ErrorCode::SelfLoop, "edge '" + e.id + "' is a self-loop", e.id);
        }
        const bool l_ok = options.allow_nonpassive ? e.l != 0.0 : e.l > 0.0;
        if (!l_ok || !std::isfinite(e.l)) {
            throw Error(ErrorCode::NonpositiveInductance, "edge '" + e.id + "' has nonpositive inductance", e.id, e.l);
        }
        if (!(e.r >= 0.0 || options.allow_nonpassive) || !std::isfinite(e.r)) {
            throw Error(ErrorCode::NegativeResistance, "edge '" + e.id + "' has negative resistance", e.id, e.r);
        }
        components.unite(from->second, to->second);
    }

    std::unordered_set<std::size_t> roots;
    for (std::size_t k = 0; k < network.nodes.size(); ++k) roots.insert(components.find(k));
    if (roots.size() > 1) {
        throw Error(ErrorCode::Disconnected,
                    "network has " + std::to_string(roots.size()) + " connected components", {},
                    static_cast<double>(roots.size()));
    }

    ValidatedNetwork v;
    v.net_ = network;
    for (const auto& n : network.nodes) {
        if (boundary.contains(n)) v.ordered_.push_back(n);
    }
    for (const auto& n : network.nodes) {
        if (!boundary.contains(n)) v.ordered_.push_back(n);
    }
    for (std::size_t k = 0; k < v.ordered_.size(); ++k) v.row_.emplace(v.ordered_[k], static_cast<Index>(k));
    for (const auto& e : network.edges) {
        v.tail_.push_back(v.row_.at(e.from));
        v.head_.push_back(v.row_.at(e.to));
    }
    return v;
}

IncidenceMatrix build_incidence(const ValidatedNetwork& network) {
    IncidenceMatrix inc;
    inc.B = Eigen::MatrixXi::Zero(network.node_count(), network.edge_count());
    inc.boundary_rows = network.boundary_count();
    for (Index e = 0; e < network.edge_count(); ++e) {
        inc.B(network.tail_row(e), e) = 1;
        inc.B(network.head_row(e), e) = -1;
    }
    return inc;
}

PartitionedMatrices partition(const IncidenceMatrix& incidence, const ValidatedNetwork& network) {
    const Matrix B = incidence.as_real();
    const Index nb = incidence.boundary_rows;
    PartitionedMatrices pm;
    pm.B1 = B.topRows(nb);
    pm.B0 = B.bottomRows(B.rows() - nb);
    pm.r = network.resistances();
    pm.l = network.inductances();
    return pm;
}

PartitionedMatrices partitioned(const ValidatedNetwork& network) {
    return partition(build_incidence(network), network);
}

}  // namespace kronred
