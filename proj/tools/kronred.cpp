// kronred command-line front end.
//
// Exit codes: 0 success, 2 input/validation error, 3 model not applicable
// (NotHomogeneous, NegativeSynthesizedElement), 64 usage.

#include "kronred/baseline.hpp"
#include "kronred/error.hpp"
#include "kronred/experiment.hpp"
#include "kronred/io.hpp"
#include "kronred/network.hpp"
#include "kronred/phasor.hpp"
#include "kronred/reduction.hpp"
#include "kronred/simulation.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace kronred;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitApplicability = 3;
constexpr int kExitUsage = 64;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double parse_number(const std::string& text, const std::string& what) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    while (first < last && *first == ' ') ++first;
    while (last > first && last[-1] == ' ') --last;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) throw UsageError("bad number '" + text + "' in " + what);
    return v;
}

std::vector<double> parse_number_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::size_t stop = comma == std::string::npos ? text.size() : comma;
        out.push_back(parse_number(text.substr(start, stop - start), what));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

/// "120∠30" or "120@30": magnitude and phase in degrees.
Phasor parse_phasor(const std::string& text) {
    static const std::string angle = "\xE2\x88\xA0";  // U+2220
    std::size_t pos = text.find(angle);
    std::size_t width = angle.size();
    if (pos == std::string::npos) {
        pos = text.find('@');
        width = 1;
    }
    if (pos == std::string::npos) throw UsageError("phasor '" + text + "' must look like mag@deg or mag∠deg");
    const double mag = parse_number(text.substr(0, pos), "--v1");
    const double deg = parse_number(text.substr(pos + width), "--v1");
    return Phasor::polar(mag, deg * std::numbers::pi / 180.0);
}

json complex_json(std::complex<double> z) { return {{"re", z.real()}, {"im", z.imag()}}; }

json phasor_json(const Phasor& p) {
    const auto z = p.to_complex();
    return {{"re", z.real()},
            {"im", z.imag()},
            {"magnitude", p.magnitude},
            {"phase_deg", p.phase * 180.0 / std::numbers::pi}};
}

json matrix_json(const CMatrix& M) {
    json rows = json::array();
    for (Index i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (Index j = 0; j < M.cols(); ++j) row.push_back(complex_json(M(i, j)));
        rows.push_back(row);
    }
    return rows;
}

std::vector<std::string> edge_ids(const ValidatedNetwork& net) {
    std::vector<std::string> ids;
    for (const auto& e : net.network().edges) ids.push_back(e.id);
    return ids;
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path.string() + "'", path.string());
    out << text;
}

void write_trajectory(const fs::path& path, const Trajectory& traj, const ValidatedNetwork& net) {
    io::write_csv(path, io::trajectory_table(traj, net.boundary_nodes(), edge_ids(net), net.interior_nodes()));
}

int report(const Error& e) {
    json diag = {{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
    if (!e.subject().empty()) diag["subject"] = e.subject();
    if (e.value() != 0.0) diag["value"] = e.value();
    std::cerr << diag.dump() << "\n";
    return is_applicability_error(e.code()) ? kExitApplicability : kExitInput;
}

/// Flag wins over KRONRED_SEED, which wins over the manifest.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, const std::optional<std::uint64_t>& manifest) {
    if (flag) return *flag;
    if (const char* env = std::getenv("KRONRED_SEED"); env != nullptr && *env != '\0') {
        std::uint64_t v = 0;
        const std::string s(env);
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size()) throw UsageError("KRONRED_SEED is not an integer");
        return v;
    }
    return manifest.value_or(experiment::kDefaultSeed);
}

// --- validate ----------------------------------------------------------------

struct ValidateArgs {
    std::string network;
};

int cmd_validate(const ValidateArgs& a) {
    const ValidatedNetwork net = validate(io::load_network(a.network));
    json out = {{"valid", true},
                {"nodes", net.node_count()},
                {"edges", net.edge_count()},
                {"boundary", net.boundary_count()},
                {"interior", net.interior_count()}};
    std::cout << out.dump() << "\n";
    return kExitOk;
}

// --- reduce ------------------------------------------------------------------

struct ReduceArgs {
    std::string network;
    std::string strategy = "nullbasis";
    std::string out;
};

int cmd_reduce(const ReduceArgs& a) {
    const ValidatedNetwork net = validate(io::load_network(a.network));
    const ReducedModel model = reduce(net, parse_strategy(a.strategy));
    const std::string text = io::model_to_json(model);
    if (a.out.empty()) {
        std::cout << text;
    } else {
        write_text(a.out, text);
    }
    return kExitOk;
}

// --- simulate ----------------------------------------------------------------

struct SimulateArgs {
    std::string manifest;
    std::string method = "reduced";
    std::string out_dir;
    std::string model;
    std::optional<double> omega0;
    std::vector<double> gammas;
    std::vector<std::string> gamma_vectors;
    std::optional<std::uint64_t> seed;
    std::optional<double> from_time;
    bool allow_unphysical = false;
    double homogeneity_tol = 1e-9;
};

int cmd_simulate(const SimulateArgs& a) {
    const io::RunManifest m = io::load_manifest(a.manifest);
    const ValidatedNetwork net = validate(io::load_network(m.network));
    const Excitation x = io::load_excitation(m.excitation, net);
    const Vector f0 = m.f0.value_or(Vector::Zero(net.edge_count()));
    if (f0.size() != net.edge_count()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "f0 has " + std::to_string(f0.size()) + " entries, network has " +
                        std::to_string(net.edge_count()) + " edges");
    }
    const fs::path dir = a.out_dir.empty() ? m.output_dir : fs::path(a.out_dir);
    fs::create_directories(dir);

    if (a.method == "reduced") {
        ReducedModel model;
        if (a.model.empty()) {
            model = reduce(net, m.strategy);
        } else {
            model = io::parse_model(io::read_text(a.model));
            if (model.edge_count() != net.edge_count() || model.boundary_count() != net.boundary_count()) {
                throw Error(ErrorCode::DimensionMismatch, "model does not fit the manifest's network", a.model);
            }
        }
        write_trajectory(dir / "reduced.csv", simulate_reduced(model, x, f0, m.solver), net);
        std::cout << (dir / "reduced.csv").string() << "\n";
        return kExitOk;
    }
    if (a.method == "dae") {
        write_trajectory(dir / "dae.csv", simulate_dae_oracle(net, x, f0, m.solver), net);
        std::cout << (dir / "dae.csv").string() << "\n";
        return kExitOk;
    }
    if (a.method == "homogeneous") {
        const HomogeneousReducedModel model = homogeneous_reduce(net, a.homogeneity_tol);
        const Vector i1_0 = partitioned(net).B1 * f0;
        write_trajectory(dir / "homogeneous.csv", simulate_homogeneous(model, x, i1_0, m.solver), net);
        std::cout << (dir / "homogeneous.csv").string() << "\n";
        return kExitOk;
    }

    // baseline
    if (!a.omega0) throw UsageError("--method baseline needs --omega0");
    std::vector<Vector> gammas;
    for (double g : a.gammas) gammas.push_back(Vector::Constant(1, g));
    for (const auto& s : a.gamma_vectors) {
        const auto v = parse_number_list(s, "--gamma-vector");
        gammas.push_back(Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size())));
    }
    const std::uint64_t seed = resolve_seed(a.seed, m.seed);
    if (gammas.empty()) {
        for (double g : draw_gammas(seed, experiment::kGammaDraws, -experiment::kGammaBound, experiment::kGammaBound)) {
            gammas.push_back(Vector::Constant(1, g));
        }
    }
    const BaselineSweep sweep = run_baseline_sweep(net, *a.omega0, x, f0, gammas, m.solver, a.allow_unphysical);
    const Trajectory oracle = simulate_dae_oracle(net, x, f0, m.solver);
    const double period = 2.0 * std::numbers::pi / *a.omega0;
    const double from = a.from_time.value_or(std::max(0.0, oracle.times.back() - experiment::kSteadyPeriods * period));
    const auto summaries = experiment::summarize_sweep(sweep, oracle, partitioned(net).B1 * f0, from);

    const ValidatedNetwork& synth = sweep.synthesized.network;
    json runs = json::array();
    for (std::size_t k = 0; k < sweep.runs.size(); ++k) {
        const std::string name = "baseline_" + std::to_string(k + 1) + ".csv";
        write_trajectory(dir / name, sweep.runs[k].trajectory, synth);
        const Vector& g = summaries[k].gamma;
        runs.push_back({{"file", name},
                        {"gamma", g.size() == 1 ? json(g(0)) : json(std::vector<double>(g.data(), g.data() + g.size()))},
                        {"steady_state_error_rel", summaries[k].steady_state_error_rel},
                        {"transient_max_error_rel", summaries[k].transient_max_error_rel}});
    }
    write_trajectory(dir / "dae.csv", oracle, net);
    json edges = json::array();
    for (const auto& e : synth.network().edges) {
        edges.push_back({{"id", e.id}, {"from", e.from}, {"to", e.to}, {"r_ohm", e.r}, {"l_henry", e.l}});
    }
    json summary = {{"omega0", *a.omega0}, {"seed", seed},   {"from_time", from},
                    {"synthesized_edges", edges}, {"runs", runs}};
    write_text(dir / "baseline_summary.json", summary.dump(2) + "\n");
    std::cout << summary.dump(2) << "\n";
    return kExitOk;
}

// --- compare -----------------------------------------------------------------

struct CompareArgs {
    std::string a;
    std::string b;
    std::vector<std::string> channels;
    double from_time = 0.0;
};

int cmd_compare(const CompareArgs& args) {
    const io::Table ta = io::load_csv(args.a);
    const io::Table tb = io::load_csv(args.b);
    if (ta.times.size() != tb.times.size()) {
        throw Error(ErrorCode::DimensionMismatch, "trajectories have different sample counts");
    }
    for (std::size_t k = 0; k < ta.times.size(); ++k) {
        if (std::abs(ta.times[k] - tb.times[k]) > 1e-9 * std::max(1.0, std::abs(tb.times[k]))) {
            throw Error(ErrorCode::DimensionMismatch, "trajectories use different time grids", {}, ta.times[k]);
        }
    }
    std::vector<std::string> channels = args.channels;
    if (channels.empty()) {
        for (const auto& c : ta.columns) {
            if (c.rfind("i_", 0) == 0 && tb.column_index(c) >= 0) channels.push_back(c);
        }
        if (channels.empty()) throw Error(ErrorCode::InvalidArgument, "no common i_* channels to compare");
    }
    const Deviation d = compare_series(tb.times, ta.select(channels), tb.select(channels), args.from_time);
    json out = {{"channels", channels}, {"max_abs", d.max_abs}, {"max_rel", d.max_rel}, {"steady_rel", d.steady_rel}};
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

// --- phasor ------------------------------------------------------------------

struct PhasorArgs {
    std::string network;
    double omega = 0.0;
    std::vector<std::string> v1;
};

int cmd_phasor(const PhasorArgs& a) {
    const ValidatedNetwork net = validate(io::load_network(a.network));
    std::vector<Phasor> v1;
    for (const auto& s : a.v1) v1.push_back(parse_phasor(s));
    const KronReduction kr = kron_reduce(admittance(net, a.omega));
    const auto i1 = phasor_solve(kr.Yr, v1);
    const auto v0 = recover_interior(kr.recovery, v1);
    json i1j = json::array(), v0j = json::array();
    for (const auto& p : i1) i1j.push_back(phasor_json(p));
    for (const auto& p : v0) v0j.push_back(phasor_json(p));
    json out = {{"omega", a.omega},
                {"boundary", net.boundary_nodes()},
                {"interior", net.interior_nodes()},
                {"Yr", matrix_json(kr.Yr)},
                {"i1", i1j},
                {"v0", v0j}};
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

// --- paper-experiment ----------------------------------------------------------

struct ExperimentArgs {
    std::string which;
    std::string out_dir;
    std::string strategy = "nullbasis";
    std::optional<std::uint64_t> seed;
};

int cmd_experiment(const ExperimentArgs& a) {
    const experiment::Drive drive = experiment::parse_drive(a.which);
    const std::uint64_t seed = resolve_seed(a.seed, std::nullopt);
    const fs::path dir = a.out_dir.empty() ? fs::path("experiment_" + a.which) : fs::path(a.out_dir);
    fs::create_directories(dir);

    const experiment::Result res =
        experiment::run_wye(drive, seed, experiment::default_solver(), parse_strategy(a.strategy));
    const ValidatedNetwork net = validate(experiment::wye_network());
    write_trajectory(dir / "dae.csv", res.dae, net);
    write_trajectory(dir / "reduced.csv", res.reduced, net);
    const ValidatedNetwork& synth = res.baseline.synthesized.network;
    json runs = json::array();
    for (std::size_t k = 0; k < res.baseline.runs.size(); ++k) {
        const std::string name = "baseline_" + std::to_string(k + 1) + ".csv";
        write_trajectory(dir / name, res.baseline.runs[k].trajectory, synth);
        const auto& s = res.summaries[k];
        const Vector& f0 = res.baseline.runs[k].f0;
        runs.push_back({{"file", name},
                        {"gamma", s.gamma(0)},
                        {"f0", std::vector<double>(f0.data(), f0.data() + f0.size())},
                        {"steady_state_error_rel", s.steady_state_error_rel},
                        {"transient_max_error_rel", s.transient_max_error_rel}});
    }
    json edges = json::array();
    for (const auto& e : synth.network().edges) {
        edges.push_back({{"id", e.id}, {"from", e.from}, {"to", e.to}, {"r_ohm", e.r}, {"l_henry", e.l}});
    }
    json observations = json::array();
    for (const auto& o : res.observations) observations.push_back({{"name", o.name}, {"holds", o.holds}, {"value", o.value}});
    json summary = {{"excitation", experiment::to_string(drive)},
                    {"seed", seed},
                    {"omega0", experiment::kOmega0},
                    {"dt_s", res.solver.dt},
                    {"t_end_s", res.solver.t_end},
                    {"steady_from_time_s", res.steady_from_time},
                    {"strategy", std::string(to_string(res.model.strategy))},
                    {"reduced_vs_dae_max_rel", res.reduced_vs_dae_max_rel},
                    {"initial_injection_error", res.initial_injection_error},
                    {"synthesized_edges", edges},
                    {"baseline", runs},
                    {"observations", observations},
                    {"all_hold", res.all_hold()}};
    write_text(dir / "summary.json", summary.dump(2) + "\n");
    std::cout << summary.dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact time-domain Kron reduction of RL networks"};
    app.require_subcommand(1);

    ValidateArgs va;
    auto* validate_cmd = app.add_subcommand("validate", "check a network file");
    validate_cmd->add_option("network", va.network, "network JSON")->required();

    ReduceArgs ra;
    auto* reduce_cmd = app.add_subcommand("reduce", "write the reduced model of a network");
    reduce_cmd->add_option("network", ra.network, "network JSON")->required();
    reduce_cmd->add_option("--p-strategy", ra.strategy, "projection basis")
        ->check(CLI::IsMember({"tree", "nullbasis", "modal"}))
        ->capture_default_str();
    reduce_cmd->add_option("--out", ra.out, "output file (default stdout)");

    SimulateArgs sa;
    auto* sim_cmd = app.add_subcommand("simulate", "integrate a run manifest");
    sim_cmd->add_option("manifest", sa.manifest, "run manifest JSON")->required();
    sim_cmd->add_option("--method", sa.method)
        ->check(CLI::IsMember({"reduced", "dae", "homogeneous", "baseline"}))
        ->capture_default_str();
    sim_cmd->add_option("--out-dir", sa.out_dir, "overrides the manifest's output_dir");
    sim_cmd->add_option("--model", sa.model, "reduced-model JSON from `reduce` (method reduced)");
    sim_cmd->add_option("--omega0", sa.omega0, "baseline synthesis frequency, rad/s");
    sim_cmd->add_option("--gamma", sa.gammas, "circulating-current offsets, one run each");
    sim_cmd->add_option("--gamma-vector", sa.gamma_vectors, "comma-separated offset vector, one run each");
    sim_cmd->add_option("--seed", sa.seed, "seed for drawn gammas (overrides KRONRED_SEED)");
    sim_cmd->add_option("--from-time", sa.from_time, "start of the steady window, s");
    sim_cmd->add_flag("--allow-unphysical", sa.allow_unphysical, "keep negative synthesized r or l");
    sim_cmd->add_option("--homogeneity-tol", sa.homogeneity_tol)->capture_default_str();

    CompareArgs ca;
    auto* cmp_cmd = app.add_subcommand("compare", "deviation between two trajectory CSVs");
    cmp_cmd->add_option("a", ca.a, "candidate CSV")->required();
    cmp_cmd->add_option("b", ca.b, "reference CSV")->required();
    cmp_cmd->add_option("--channels", ca.channels, "column names (default: common i_* columns)")->delimiter(',');
    cmp_cmd->add_option("--from-time", ca.from_time, "start of the steady window, s")->capture_default_str();

    PhasorArgs pa;
    auto* ph_cmd = app.add_subcommand("phasor", "phasor Kron reduction at one frequency");
    ph_cmd->add_option("network", pa.network, "network JSON")->required();
    ph_cmd->add_option("--omega", pa.omega, "rad/s")->required();
    ph_cmd->add_option("--v1", pa.v1, "boundary voltages as mag@deg, in boundary order")->required()->delimiter(',');

    ExperimentArgs ea;
    auto* exp_cmd = app.add_subcommand("paper-experiment", "wye-delta comparison of the three methods");
    exp_cmd->add_option("--which", ea.which)->required()->check(CLI::IsMember({"sinusoid", "step"}));
    exp_cmd->add_option("--out-dir", ea.out_dir);
    exp_cmd->add_option("--p-strategy", ea.strategy)
        ->check(CLI::IsMember({"tree", "nullbasis", "modal"}))
        ->capture_default_str();
    exp_cmd->add_option("--seed", ea.seed, "gamma seed (overrides KRONRED_SEED)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*validate_cmd) return cmd_validate(va);
        if (*reduce_cmd) return cmd_reduce(ra);
        if (*sim_cmd) return cmd_simulate(sa);
        if (*cmp_cmd) return cmd_compare(ca);
        if (*ph_cmd) return cmd_phasor(pa);
        if (*exp_cmd) return cmd_experiment(ea);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        return report(e);
    } catch (const std::exception& e) {
        std::cerr << json{{"error", "InternalError"}, {"message", e.what()}}.dump() << "\n";
        return kExitInput;
    }
    return kExitUsage;
}
