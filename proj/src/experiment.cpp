#include "kronred/experiment.hpp"

#include "kronred/error.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

namespace kronred::experiment {

Network wye_network() {
    Network net;
    net.nodes = {"1", "2", "3", "4"};
    net.boundary = {"1", "2", "3"};
    net.edges = {
        {"e1", "1", "4", 0.98, 0.55},
        {"e2", "2", "4", 0.99, 0.64},
        {"e3", "3", "4", 0.58, 0.77},
    };
    return net;
}

Vector wye_initial_flows() { return Vector{{-5.0, -5.0, 10.0}}; }

Excitation wye_sinusoid() {
    constexpr double deg = std::numbers::pi / 180.0;
    return {{Sinusoid{120.0, kFrequencyHz, 0.0}, Sinusoid{120.0, kFrequencyHz, 30.0 * deg},
             Sinusoid{120.0, kFrequencyHz, -30.0 * deg}}};
}

Excitation wye_step() { return {{Step{120.0, 0.0}, Step{100.0, 0.0}, Step{110.0, 0.0}}}; }

SolverConfig default_solver() { return {1e-4, kSimulatedPeriods / kFrequencyHz, 1}; }

Drive parse_drive(const std::string& name) {
    if (name == "sinusoid") return Drive::Sinusoid;
    if (name == "step") return Drive::Step;
    throw Error(ErrorCode::InvalidArgument, "unknown excitation '" + name + "' (expected sinusoid|step)", name);
}

std::string to_string(Drive drive) { return drive == Drive::Sinusoid ? "sinusoid" : "step"; }

std::vector<GammaSummary> summarize_sweep(const BaselineSweep& sweep, const Trajectory& oracle,
                                          const Vector& i1_initial, double from_time) {
    std::vector<GammaSummary> out;
    for (const auto& run : sweep.runs) {
        const Deviation d = compare_series(oracle.times, run.trajectory.i1, oracle.i1, from_time);
        GammaSummary s;
        s.gamma = run.gamma;
        s.steady_state_error_rel = d.steady_rel;
        s.transient_max_error_rel = d.max_rel;
        s.initial_injection_error = (run.trajectory.i1.row(0).transpose() - i1_initial).cwiseAbs().maxCoeff();
        out.push_back(std::move(s));
    }
    return out;
}

bool Result::all_hold() const {
    return std::all_of(observations.begin(), observations.end(), [](const Observation& o) { return o.holds; });
}

Result run(const ValidatedNetwork& network, Drive drive, const Excitation& x, const Vector& f0, std::uint64_t seed,
           const SolverConfig& cfg, PStrategy strategy) {
    std::vector<Vector> gammas;
    for (double g : draw_gammas(seed, kGammaDraws, -kGammaBound, kGammaBound)) gammas.push_back(Vector::Constant(1, g));
    ReducedModel model = reduce(network, strategy);
    Trajectory reduced = simulate_reduced(model, x, f0, cfg);
    Result res{.drive = drive,
               .seed = seed,
               .solver = cfg,
               .dae = simulate_dae_oracle(network, x, f0, cfg),
               .reduced = std::move(reduced),
               .model = std::move(model),
               .baseline = run_baseline_sweep(network, kOmega0, x, f0, gammas, cfg),
               .summaries = {},
               .reduced_vs_dae_max_rel = 0.0,
               .initial_injection_error = 0.0,
               .steady_from_time = 0.0,
               .observations = {}};

    const Vector i1_initial = partitioned(network).B1 * f0;
    res.steady_from_time = res.dae.times.back() - kSteadyPeriods / kFrequencyHz;
    res.summaries = summarize_sweep(res.baseline, res.dae, i1_initial, res.steady_from_time);
    res.reduced_vs_dae_max_rel = compare_series(res.dae.times, res.reduced.i1, res.dae.i1, 0.0).max_rel;

    double init_err = std::max((res.dae.i1.row(0).transpose() - i1_initial).cwiseAbs().maxCoeff(),
                               (res.reduced.i1.row(0).transpose() - i1_initial).cwiseAbs().maxCoeff());
    for (const auto& s : res.summaries) init_err = std::max(init_err, s.initial_injection_error);
    res.initial_injection_error = init_err;
    const double init_scale = std::max(1.0, i1_initial.cwiseAbs().maxCoeff());

    res.observations.push_back({"initial_injections_coincide", init_err <= 1e-12 * init_scale, init_err});
    res.observations.push_back(
        {"reduced_matches_dae", res.reduced_vs_dae_max_rel <= 1e-6, res.reduced_vs_dae_max_rel});

    double worst_steady = 0.0;
    double best_steady = std::numeric_limits<double>::infinity();
    double best_transient_ratio = 0.0;
    for (const auto& s : res.summaries) {
        worst_steady = std::max(worst_steady, s.steady_state_error_rel);
        best_steady = std::min(best_steady, s.steady_state_error_rel);
        const double ratio = s.steady_state_error_rel > 0.0 ? s.transient_max_error_rel / s.steady_state_error_rel
                                                            : std::numeric_limits<double>::infinity();
        best_transient_ratio = std::max(best_transient_ratio, ratio);
    }
    if (drive == Drive::Sinusoid) {
        res.observations.push_back({"baseline_steady_state_matches_dae", worst_steady <= 1e-3, worst_steady});
        res.observations.push_back(
            {"baseline_transient_differs_from_dae", best_transient_ratio >= 10.0, best_transient_ratio});
    } else {
        double spread = 0.0;
        const auto& runs = res.baseline.runs;
        for (std::size_t a = 0; a < runs.size(); ++a) {
            for (std::size_t b = a + 1; b < runs.size(); ++b) {
                spread = std::max(spread, compare_series(res.dae.times, runs[a].trajectory.i1, runs[b].trajectory.i1,
                                                         res.steady_from_time)
                                              .steady_rel);
            }
        }
        res.observations.push_back({"baseline_runs_agree_in_steady_state", spread <= 1e-3, spread});
        res.observations.push_back({"baseline_steady_state_differs_from_dae", best_steady >= 1e-2, best_steady});
    }
    return res;
}

Result run_wye(Drive drive, std::uint64_t seed, const SolverConfig& cfg, PStrategy strategy) {
    const ValidatedNetwork net = validate(wye_network());
    const Excitation x = drive == Drive::Sinusoid ? wye_sinusoid() : wye_step();
    return run(net, drive, x, wye_initial_flows(), seed, cfg, strategy);
}

}  // namespace kronred::experiment
