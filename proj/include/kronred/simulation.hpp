#pragma once

// Fixed-step RK4 integration of the reduced model, of the injection-space
// homogeneous model, and of the full DAE (independent oracle).

#include "kronred/network.hpp"
#include "kronred/phasor.hpp"
#include "kronred/reduction.hpp"

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace kronred {

struct Sinusoid {
    double amplitude = 0.0;  // V
    double freq_hz = 1.0;
    double phase = 0.0;      // rad
};

/// 0 before t_step, `value` from t_step on (closed on the left).
struct Step {
    double value = 0.0;
    double t_step = 0.0;
};

struct Constant {
    double value = 0.0;
};

/// Zero-order hold through (t, value) breakpoints; 0 before the first one.
struct Piecewise {
    std::vector<std::pair<double, double>> breakpoints;
};

using Signal = std::variant<Sinusoid, Step, Constant, Piecewise>;

[[nodiscard]] double eval_signal(const Signal& signal, double t);
/// Throws InvalidArgument for freq <= 0 or non-increasing breakpoints.
void check_signal(const Signal& signal);

/// One signal per boundary node, in boundary (matrix row) order.
struct Excitation {
    std::vector<Signal> signals;

    [[nodiscard]] Index size() const { return static_cast<Index>(signals.size()); }
    void eval_into(double t, Vector& out) const;
};

[[nodiscard]] Vector eval_excitation(const Excitation& x, double t);

struct SolverConfig {
    double dt = 1e-4;       // s
    double t_end = 1.0;     // s
    int record_stride = 1;

    void check() const;
    [[nodiscard]] long long step_count() const;
};

/// Samples are rows. Unused blocks have zero columns.
struct Trajectory {
    std::vector<double> times;
    Matrix i1;    // boundary injections
    Matrix fhat;  // pseudoflows (reduced runs)
    Matrix f;     // edge flows (lifted for reduced runs)
    Matrix v0;    // interior voltages (oracle runs)

    [[nodiscard]] Index samples() const { return static_cast<Index>(times.size()); }
};

/// RK4 on Lhat dfhat/dt = -Rhat fhat + Bhat^T v1(t), starting from
/// embed_initial(P, f0). Records fhat, f = P fhat and i1 = Bhat fhat.
[[nodiscard]] Trajectory simulate_reduced(const ReducedModel& model, const Excitation& x, const Vector& f0,
                                          const SolverConfig& cfg);

/// RK4 on the full flow equations with the interior voltages eliminated by
/// differentiating B0 f = 0: (B0 L^{-1} B0^T) v0 = B0 L^{-1} (R f - B1^T v1).
/// Throws InconsistentInitialCondition, ConstraintDrift.
[[nodiscard]] Trajectory simulate_dae_oracle(const ValidatedNetwork& network, const Excitation& x, const Vector& f0,
                                             const SolverConfig& cfg);

/// RK4 on di1/dt = -alpha i1 + Lred v1(t).
[[nodiscard]] Trajectory simulate_homogeneous(const HomogeneousReducedModel& model, const Excitation& x,
                                              const Vector& i1_0, const SolverConfig& cfg);

struct SteadyPhasors {
    std::vector<Phasor> phasors;
    std::vector<double> residual;  // non-fundamental energy fraction per channel
};

/// Least-squares fit of a cos(wt) - b sin(wt) per column of `samples` over
/// the trailing `periods` periods. Needs at least periods + 2 periods of data.
[[nodiscard]] SteadyPhasors extract_steady_phasors(const std::vector<double>& times, const Matrix& samples,
                                                   double freq_hz, double periods);

struct Deviation {
    double max_abs = 0.0;
    double max_rel = 0.0;     // max |a - b| / max |b| over all samples
    double steady_rel = 0.0;  // same, restricted to t >= from_time
};

/// Channel-wise comparison of two sample matrices on a shared time grid;
/// `reference` supplies the normalization.
[[nodiscard]] Deviation compare_series(const std::vector<double>& times, const Matrix& candidate,
                                       const Matrix& reference, double from_time);

}  // namespace kronred
