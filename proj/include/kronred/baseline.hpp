#pragma once

// Frequency-domain heuristic used as the comparison baseline: Kron-reduce the
// impedance network at one frequency omega0, then read each reduced branch
// impedance z back as an RL edge (r = Re z, l = Im z / omega0).
// It is exact only in special cases (e.g. a homogeneous network, or a
// sinusoid at exactly omega0 in steady state).

#include "kronred/network.hpp"
#include "kronred/simulation.hpp"

#include <cstdint>
#include <vector>

namespace kronred {

struct SynthesizedNetwork {
    ValidatedNetwork network;  // boundary nodes only, no interior
    double omega0 = 0.0;
};

/// Off-diagonal entries of Yr below this fraction of max|Yr| count as absent edges.
inline constexpr double kSynthesisCouplingTolerance = 1e-12;

/// Three boundary nodes are wired cyclically (1->2, 2->3, 3->1) so that the
/// all-ones vector spans null(Br); larger reduced graphs use m < n -> (m, n).
/// Throws NegativeSynthesizedElement unless `allow_unphysical`.
[[nodiscard]] SynthesizedNetwork heuristic_reduce(const ValidatedNetwork& network, double omega0,
                                                  bool allow_unphysical = false);

/// Directions of null(Br) scaled by gamma coefficients. For a single cycle
/// whose null space is spanned by the all-ones vector that vector is used
/// unnormalized; otherwise the columns of an orthonormal null basis.
[[nodiscard]] Matrix circulation_basis(const Matrix& Br);

/// min-norm solution of Br f = i1_0 plus circulation_basis(Br) * gamma
/// (missing trailing coefficients are zero).
[[nodiscard]] Vector map_initial_condition(const Matrix& Br, const Vector& i1_0, const Vector& gamma);

[[nodiscard]] Vector map_initial_condition(const Matrix& Br, const Vector& i1_0, double gamma);

struct BaselineRun {
    Vector gamma;
    Vector f0;  // synthesized-network initial flows
    Trajectory trajectory;
};

struct BaselineSweep {
    SynthesizedNetwork synthesized;
    std::vector<BaselineRun> runs;
};

/// One full simulation of the synthesized network per gamma. The excitation
/// is indexed by the original boundary nodes, which the synthesized network
/// keeps in the same order.
[[nodiscard]] BaselineSweep run_baseline_sweep(const ValidatedNetwork& network, double omega0, const Excitation& x,
                                               const Vector& f0_full, const std::vector<Vector>& gammas,
                                               const SolverConfig& cfg, bool allow_unphysical = false);

/// Uniform draws in [lo, hi] from a seeded 64-bit Mersenne twister.
[[nodiscard]] std::vector<double> draw_gammas(std::uint64_t seed, int count, double lo = -5.0, double hi = 5.0);

}  // namespace kronred
