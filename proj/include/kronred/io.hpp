#pragma once

// File formats: network / excitation / manifest / reduced-model JSON and
// trajectory CSV. Unknown JSON keys are rejected everywhere.

#include "kronred/network.hpp"
#include "kronred/reduction.hpp"
#include "kronred/simulation.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kronred::io {

[[nodiscard]] std::string read_text(const std::filesystem::path& path);

// --- network ---------------------------------------------------------------
// {"nodes": [..], "boundary": [..],
//  "edges": [{"id", "from", "to", "r_ohm", "l_henry"}, ..]}
[[nodiscard]] Network parse_network(std::string_view text);
[[nodiscard]] Network load_network(const std::filesystem::path& path);
[[nodiscard]] std::string network_to_json(const Network& network);

// --- excitation --------------------------------------------------------------
// {"signals": {"<node>": {"type": "sinusoid", "amplitude_v", "freq_hz", "phase_deg"}
//                      | {"type": "step", "value_v", "t_step_s"}
//                      | {"type": "constant", "value_v"}
//                      | {"type": "piecewise", "breakpoints": [{"t_s", "value_v"}, ..]}}}
// Every boundary node needs exactly one signal; phases are degrees on disk.
[[nodiscard]] Excitation parse_excitation(std::string_view text, const ValidatedNetwork& network);
[[nodiscard]] Excitation load_excitation(const std::filesystem::path& path, const ValidatedNetwork& network);
[[nodiscard]] std::string excitation_to_json(const Excitation& x, const std::vector<std::string>& boundary_nodes);

// --- run manifest ------------------------------------------------------------
// {"network": path, "excitation": path, "f0": [..], "solver": {"dt_s", "t_end_s",
//  "record_stride"}, "strategy": "tree"|"nullbasis"|"modal", "seed": int,
//  "output_dir": path}. Relative paths resolve against the manifest's folder.
struct RunManifest {
    std::filesystem::path network;
    std::filesystem::path excitation;
    std::optional<Vector> f0;  // edge order; absent means zeros
    SolverConfig solver;
    PStrategy strategy = PStrategy::OrthonormalNullBasis;
    std::optional<std::uint64_t> seed;
    std::filesystem::path output_dir = ".";
};

[[nodiscard]] RunManifest parse_manifest(std::string_view text, const std::filesystem::path& base_dir);
[[nodiscard]] RunManifest load_manifest(const std::filesystem::path& path);

// --- reduced model -----------------------------------------------------------
// {"strategy", "P", "Lhat", "Rhat", "Bhat"}, row-major nested arrays,
// doubles written in shortest round-trip form.
[[nodiscard]] std::string model_to_json(const ReducedModel& model);
[[nodiscard]] ReducedModel parse_model(std::string_view text);

// --- trajectory CSV ----------------------------------------------------------
struct Table {
    std::vector<std::string> columns;  // excluding "t"
    std::vector<double> times;
    Matrix values;  // samples x columns

    [[nodiscard]] Index column_index(std::string_view name) const;  // -1 when absent
    [[nodiscard]] Matrix select(const std::vector<std::string>& names) const;
};

/// Columns i_<node>, fhat_<k> (1-based), f_<edge>, v0_<node>, omitting empty blocks.
[[nodiscard]] Table trajectory_table(const Trajectory& traj, const std::vector<std::string>& boundary_nodes,
                                     const std::vector<std::string>& edge_ids,
                                     const std::vector<std::string>& interior_nodes);

[[nodiscard]] std::string format_double(double value);
void write_csv(std::ostream& out, const Table& table);
void write_csv(const std::filesystem::path& path, const Table& table);
[[nodiscard]] Table parse_csv(std::string_view text);
[[nodiscard]] Table load_csv(const std::filesystem::path& path);

}  // namespace kronred::io
