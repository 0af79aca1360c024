#include "kronred/baseline.hpp"

#include "kronred/error.hpp"
#include "kronred/numerics.hpp"
#include "kronred/phasor.hpp"
#include "kronred/reduction.hpp"

#include <cstdint>
#include <random>

namespace kronred {

SynthesizedNetwork heuristic_reduce(const ValidatedNetwork& network, double omega0, bool allow_unphysical) {
    const KronReduction kron = kron_reduce(admittance(network, omega0));
    const CMatrix& Yr = kron.Yr;
    const std::vector<std::string> nodes = network.boundary_nodes();
    const Index n = Yr.rows();
    const double scale = Yr.size() > 0 ? Yr.cwiseAbs().maxCoeff() : 0.0;

    std::vector<std::pair<Index, Index>> pairs;
    if (n == 3) {
        pairs = {{0, 1}, {1, 2}, {2, 0}};
    } else {
        for (Index m = 0; m < n; ++m) {
            for (Index k = m + 1; k < n; ++k) pairs.emplace_back(m, k);
        }
    }

    Network out;
    out.nodes = nodes;
    out.boundary = nodes;
    for (const auto& [m, k] : pairs) {
        const std::complex<double> y = Yr(m, k);
        if (std::abs(y) <= kSynthesisCouplingTolerance * scale) continue;
        const std::complex<double> z = -1.0 / y;
        Edge e;
        e.id = nodes[static_cast<std::size_t>(m)] + "-" + nodes[static_cast<std::size_t>(k)];
        e.from = nodes[static_cast<std::size_t>(m)];
        e.to = nodes[static_cast<std::size_t>(k)];
        e.r = z.real();
        e.l = z.imag() / omega0;
        if ((e.r < 0.0 || e.l < 0.0) && !allow_unphysical) {
            throw Error(ErrorCode::NegativeSynthesizedElement,
                        "synthesized edge '" + e.id + "' has r = " + std::to_string(e.r) +
                            ", l = " + std::to_string(e.l),
                        e.id, e.r < 0.0 ? e.r : e.l);
        }
        out.edges.push_back(std::move(e));
    }
    return {validate(out, ValidationOptions{allow_unphysical}), omega0};
}

Matrix circulation_basis(const Matrix& Br) {
    const Matrix basis = kernel_basis(Br);
    if (basis.cols() == 1) {
        const Vector ones = Vector::Ones(Br.cols());
        if ((Br * ones).cwiseAbs().maxCoeff() == 0.0) return ones;
    }
    return basis;
}

Vector map_initial_condition(const Matrix& Br, const Vector& i1_0, const Vector& gamma) {
    Vector f = min_norm_solution(Br, i1_0);
    if (gamma.size() == 0) return f;
    const Matrix basis = circulation_basis(Br);
    if (gamma.size() > basis.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "gamma has " + std::to_string(gamma.size()) +
                                                      " coefficients but null(Br) has dimension " +
                                                      std::to_string(basis.cols()));
    }
    f.noalias() += basis.leftCols(gamma.size()) * gamma;
    return f;
}

Vector map_initial_condition(const Matrix& Br, const Vector& i1_0, double gamma) {
    return map_initial_condition(Br, i1_0, Vector::Constant(1, gamma));
}

BaselineSweep run_baseline_sweep(const ValidatedNetwork& network, double omega0, const Excitation& x,
                                 const Vector& f0_full, const std::vector<Vector>& gammas, const SolverConfig& cfg,
                                 bool allow_unphysical) {
    if (f0_full.size() != network.edge_count()) {
        throw Error(ErrorCode::DimensionMismatch, "f0 length != edge count");
    }
    const PartitionedMatrices full = partitioned(network);
    const Vector i1_0 = full.B1 * f0_full;

    BaselineSweep sweep{heuristic_reduce(network, omega0, allow_unphysical), {}};
    const PartitionedMatrices synth = partitioned(sweep.synthesized.network);
    const Matrix Br = synth.B1;
    // No interior nodes: the identity basis gives the plain RL equations.
    const ReducedModel model =
        reduce_with_basis(synth, Matrix::Identity(Br.cols(), Br.cols()), PStrategy::TreeElimination);

    for (const Vector& gamma : gammas) {
        BaselineRun run;
        run.gamma = gamma;
        run.f0 = map_initial_condition(Br, i1_0, gamma);
        run.trajectory = simulate_reduced(model, x, run.f0, cfg);
        sweep.runs.push_back(std::move(run));
    }
    return sweep;
}

std::vector<double> draw_gammas(std::uint64_t seed, int count, double lo, double hi) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> out;
    for (int k = 0; k < count; ++k) out.push_back(dist(rng));
    return out;
}

}  // namespace kronred
