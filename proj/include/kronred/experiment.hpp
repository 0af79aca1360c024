#pragma once

// The wye-delta comparison: a three-branch wye with one interior node,
// simulated with the DAE oracle, the exact reduced model, and the
// frequency-domain baseline for several circulating-current offsets gamma.

#include "kronred/baseline.hpp"
#include "kronred/network.hpp"
#include "kronred/reduction.hpp"
#include "kronred/simulation.hpp"

#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

namespace kronred::experiment {

inline constexpr double kFrequencyHz = 1.5;
inline constexpr double kOmega0 = 2.0 * std::numbers::pi * kFrequencyHz;
inline constexpr int kGammaDraws = 5;
inline constexpr double kGammaBound = 5.0;  // A
inline constexpr std::uint64_t kDefaultSeed = 7;
inline constexpr double kSteadyPeriods = 4.0;
inline constexpr double kSimulatedPeriods = 20.0;

/// Nodes "1".."4" with "4" interior; edges e1..e3 directed into node 4.
/// R = diag(0.98, 0.99, 0.58) ohm, L = diag(0.55, 0.64, 0.77) H.
[[nodiscard]] Network wye_network();
/// f0 = -[5, 5, -10] A.
[[nodiscard]] Vector wye_initial_flows();
/// 120 V at 1.5 Hz, phases (0, 30, -30) degrees.
[[nodiscard]] Excitation wye_sinusoid();
/// Steps to (120, 100, 110) V at t = 0.
[[nodiscard]] Excitation wye_step();
/// dt = 1e-4 s over 20 periods of the 1.5 Hz forcing.
[[nodiscard]] SolverConfig default_solver();

enum class Drive { Sinusoid, Step };
[[nodiscard]] Drive parse_drive(const std::string& name);
[[nodiscard]] std::string to_string(Drive drive);

struct GammaSummary {
    Vector gamma;
    double steady_state_error_rel = 0.0;
    double transient_max_error_rel = 0.0;
    double initial_injection_error = 0.0;  // max |i1_baseline(0) - B1 f0|
};

/// Compare every baseline run's i1 with the oracle's i1. The steady window
/// is t >= from_time.
[[nodiscard]] std::vector<GammaSummary> summarize_sweep(const BaselineSweep& sweep, const Trajectory& oracle,
                                                        const Vector& i1_initial, double from_time);

struct Observation {
    std::string name;
    bool holds = false;
    double value = 0.0;
};

struct Result {
    Drive drive = Drive::Sinusoid;
    std::uint64_t seed = kDefaultSeed;
    SolverConfig solver;
    Trajectory dae;
    Trajectory reduced;
    ReducedModel model;
    BaselineSweep baseline;
    std::vector<GammaSummary> summaries;
    double reduced_vs_dae_max_rel = 0.0;
    double initial_injection_error = 0.0;  // over dae, reduced and every baseline run
    double steady_from_time = 0.0;
    std::vector<Observation> observations;

    [[nodiscard]] bool all_hold() const;
};

[[nodiscard]] Result run(const ValidatedNetwork& network, Drive drive, const Excitation& x, const Vector& f0,
                         std::uint64_t seed, const SolverConfig& cfg, PStrategy strategy);

/// Runs the built-in wye setup.
[[nodiscard]] Result run_wye(Drive drive, std::uint64_t seed = kDefaultSeed, const SolverConfig& cfg = default_solver(),
                             PStrategy strategy = PStrategy::OrthonormalNullBasis);

}  // namespace kronred::experiment
