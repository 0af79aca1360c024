#include "kronred/io.hpp"

#include "kronred/error.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace kronred::io {

using nlohmann::json;

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

json parse_json(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        std::size_t line = 1, column = 1;
        const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
        for (std::size_t k = 0; k < stop; ++k) {
            if (text[k] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw Error(ErrorCode::ParseError,
                    "JSON parse error at line " + std::to_string(line) + ", column " + std::to_string(column) +
                        ": " + e.what(),
                    std::to_string(line) + ":" + std::to_string(column));
    }
}

[[noreturn]] void schema_error(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

void require_object(const json& j, const std::string& where) {
    if (!j.is_object()) schema_error(where + " must be a JSON object");
}

void reject_unknown_keys(const json& j, std::initializer_list<std::string_view> allowed, const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (auto a : allowed) known = known || key == a;
        if (!known) schema_error(where + ": unknown key '" + key + "'");
    }
}

const json& field(const json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) schema_error(where + ": missing key '" + key + "'");
    return *it;
}

double number(const json& j, const char* key, const std::string& where) {
    const json& v = field(j, key, where);
    if (!v.is_number()) schema_error(where + ": '" + key + "' must be a number");
    return v.get<double>();
}

std::string string(const json& j, const char* key, const std::string& where) {
    const json& v = field(j, key, where);
    if (!v.is_string()) schema_error(where + ": '" + key + "' must be a string");
    return v.get<std::string>();
}

std::vector<std::string> string_list(const json& j, const char* key, const std::string& where) {
    const json& v = field(j, key, where);
    if (!v.is_array()) schema_error(where + ": '" + key + "' must be an array");
    std::vector<std::string> out;
    for (const auto& item : v) {
        if (!item.is_string()) schema_error(where + ": '" + key + "' entries must be strings");
        out.push_back(item.get<std::string>());
    }
    return out;
}

Vector number_vector(const json& v, const std::string& where) {
    if (!v.is_array()) schema_error(where + " must be an array of numbers");
    Vector out(static_cast<Index>(v.size()));
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (!v[k].is_number()) schema_error(where + " must be an array of numbers");
        out(static_cast<Index>(k)) = v[k].get<double>();
    }
    return out;
}

json matrix_json(const Matrix& m) {
    json rows = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const json& j, Index cols_if_empty, const std::string& where) {
    if (!j.is_array()) schema_error(where + " must be a 2-D array");
    const Index rows = static_cast<Index>(j.size());
    Index cols = rows > 0 ? static_cast<Index>(j[0].size()) : cols_if_empty;
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        const Vector row = number_vector(j[static_cast<std::size_t>(i)], where + " row");
        if (row.size() != cols) schema_error(where + " is ragged");
        m.row(i) = row.transpose();
    }
    return m;
}

Signal parse_signal(const json& j, const std::string& where) {
    require_object(j, where);
    const std::string type = string(j, "type", where);
    Signal s;
    if (type == "sinusoid") {
        reject_unknown_keys(j, {"type", "amplitude_v", "freq_hz", "phase_deg"}, where);
        const double phase = j.contains("phase_deg") ? number(j, "phase_deg", where) : 0.0;
        s = Sinusoid{number(j, "amplitude_v", where), number(j, "freq_hz", where), phase * kDegToRad};
    } else if (type == "step") {
        reject_unknown_keys(j, {"type", "value_v", "t_step_s"}, where);
        const double t_step = j.contains("t_step_s") ? number(j, "t_step_s", where) : 0.0;
        s = Step{number(j, "value_v", where), t_step};
    } else if (type == "constant") {
        reject_unknown_keys(j, {"type", "value_v"}, where);
        s = Constant{number(j, "value_v", where)};
    } else if (type == "piecewise") {
        reject_unknown_keys(j, {"type", "breakpoints"}, where);
        const json& bps = field(j, "breakpoints", where);
        if (!bps.is_array()) schema_error(where + ": 'breakpoints' must be an array");
        Piecewise p;
        for (const auto& bp : bps) {
            require_object(bp, where + " breakpoint");
            reject_unknown_keys(bp, {"t_s", "value_v"}, where + " breakpoint");
            p.breakpoints.emplace_back(number(bp, "t_s", where), number(bp, "value_v", where));
        }
        s = std::move(p);
    } else {
        schema_error(where + ": unknown signal type '" + type + "'");
    }
    try {
        check_signal(s);
    } catch (const Error& e) {
        schema_error(where + ": " + e.what());
    }
    return s;
}

json signal_json(const Signal& s) {
    struct Visitor {
        json operator()(const Sinusoid& v) const {
            return {{"type", "sinusoid"}, {"amplitude_v", v.amplitude}, {"freq_hz", v.freq_hz},
                    {"phase_deg", v.phase / kDegToRad}};
        }
        json operator()(const Step& v) const { return {{"type", "step"}, {"value_v", v.value}, {"t_step_s", v.t_step}}; }
        json operator()(const Constant& v) const { return {{"type", "constant"}, {"value_v", v.value}}; }
        json operator()(const Piecewise& v) const {
            json bps = json::array();
            for (const auto& [t, x] : v.breakpoints) bps.push_back({{"t_s", t}, {"value_v", x}});
            return {{"type", "piecewise"}, {"breakpoints", bps}};
        }
    };
    return std::visit(Visitor{}, s);
}

}  // namespace

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path.string() + "'", path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

Network parse_network(std::string_view text) {
    const json j = parse_json(text);
    const std::string where = "network";
    require_object(j, where);
    reject_unknown_keys(j, {"nodes", "boundary", "edges"}, where);
    Network net;
    net.nodes = string_list(j, "nodes", where);
    net.boundary = string_list(j, "boundary", where);
    const json& edges = field(j, "edges", where);
    if (!edges.is_array()) schema_error("network: 'edges' must be an array");
    for (const auto& e : edges) {
        const std::string ew = "network edge";
        require_object(e, ew);
        reject_unknown_keys(e, {"id", "from", "to", "r_ohm", "l_henry"}, ew);
        net.edges.push_back({string(e, "id", ew), string(e, "from", ew), string(e, "to", ew),
                             number(e, "r_ohm", ew), number(e, "l_henry", ew)});
    }
    return net;
}

Network load_network(const std::filesystem::path& path) { return parse_network(read_text(path)); }

std::string network_to_json(const Network& network) {
    json edges = json::array();
    for (const auto& e : network.edges) {
        edges.push_back({{"id", e.id}, {"from", e.from}, {"to", e.to}, {"r_ohm", e.r}, {"l_henry", e.l}});
    }
    const json j = {{"nodes", network.nodes}, {"boundary", network.boundary}, {"edges", edges}};
    return j.dump(2) + "\n";
}

Excitation parse_excitation(std::string_view text, const ValidatedNetwork& network) {
    const json j = parse_json(text);
    require_object(j, "excitation");
    reject_unknown_keys(j, {"signals"}, "excitation");
    const json& signals = field(j, "signals", "excitation");
    require_object(signals, "excitation.signals");

    const auto boundary = network.boundary_nodes();
    for (const auto& [node, value] : signals.items()) {
        if (std::find(boundary.begin(), boundary.end(), node) == boundary.end()) {
            throw Error(ErrorCode::UnknownNodeRef, "excitation names '" + node + "', which is not a boundary node",
                        node);
        }
    }
    Excitation x;
    for (const auto& node : boundary) {
        auto it = signals.find(node);
        if (it == signals.end()) schema_error("excitation: no signal for boundary node '" + node + "'");
        x.signals.push_back(parse_signal(*it, "excitation.signals." + node));
    }
    return x;
}

Excitation load_excitation(const std::filesystem::path& path, const ValidatedNetwork& network) {
    return parse_excitation(read_text(path), network);
}

std::string excitation_to_json(const Excitation& x, const std::vector<std::string>& boundary_nodes) {
    if (boundary_nodes.size() != x.signals.size()) {
        throw Error(ErrorCode::DimensionMismatch, "excitation_to_json: node count mismatch");
    }
    json signals = json::object();
    for (std::size_t k = 0; k < boundary_nodes.size(); ++k) signals[boundary_nodes[k]] = signal_json(x.signals[k]);
    return json{{"signals", signals}}.dump(2) + "\n";
}

RunManifest parse_manifest(std::string_view text, const std::filesystem::path& base_dir) {
    const json j = parse_json(text);
    const std::string where = "manifest";
    require_object(j, where);
    reject_unknown_keys(j, {"network", "excitation", "f0", "solver", "strategy", "seed", "output_dir"}, where);
    auto resolve = [&](const std::string& p) {
        std::filesystem::path path(p);
        return path.is_absolute() ? path : base_dir / path;
    };
    RunManifest m;
    m.network = resolve(string(j, "network", where));
    m.excitation = resolve(string(j, "excitation", where));
    if (j.contains("f0")) m.f0 = number_vector(j["f0"], "manifest.f0");
    if (j.contains("solver")) {
        const json& s = j["solver"];
        require_object(s, "manifest.solver");
        reject_unknown_keys(s, {"dt_s", "t_end_s", "record_stride"}, "manifest.solver");
        if (s.contains("dt_s")) m.solver.dt = number(s, "dt_s", "manifest.solver");
        if (s.contains("t_end_s")) m.solver.t_end = number(s, "t_end_s", "manifest.solver");
        if (s.contains("record_stride")) {
            if (!s["record_stride"].is_number_integer()) schema_error("manifest.solver.record_stride must be an integer");
            m.solver.record_stride = s["record_stride"].get<int>();
        }
    }
    if (j.contains("strategy")) m.strategy = parse_strategy(string(j, "strategy", where));
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) schema_error("manifest.seed must be a nonnegative integer");
        m.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("output_dir")) m.output_dir = resolve(string(j, "output_dir", where));
    return m;
}

RunManifest load_manifest(const std::filesystem::path& path) {
    return parse_manifest(read_text(path), path.parent_path().empty() ? "." : path.parent_path());
}

std::string model_to_json(const ReducedModel& model) {
    const json j = {{"strategy", std::string(to_string(model.strategy))},
                    {"P", matrix_json(model.P)},
                    {"Lhat", matrix_json(model.Lhat)},
                    {"Rhat", matrix_json(model.Rhat)},
                    {"Bhat", matrix_json(model.Bhat)}};
    return j.dump(2) + "\n";
}

ReducedModel parse_model(std::string_view text) {
    const json j = parse_json(text);
    require_object(j, "model");
    reject_unknown_keys(j, {"strategy", "P", "Lhat", "Rhat", "Bhat"}, "model");
    ReducedModel m;
    m.strategy = parse_strategy(string(j, "strategy", "model"));
    m.P = matrix_from_json(field(j, "P", "model"), 0, "model.P");
    const Index order = m.P.cols();
    m.Lhat = matrix_from_json(field(j, "Lhat", "model"), order, "model.Lhat");
    m.Rhat = matrix_from_json(field(j, "Rhat", "model"), order, "model.Rhat");
    m.Bhat = matrix_from_json(field(j, "Bhat", "model"), order, "model.Bhat");
    if (m.Lhat.rows() != order || m.Lhat.cols() != order || m.Rhat.rows() != order || m.Rhat.cols() != order ||
        m.Bhat.cols() != order) {
        throw Error(ErrorCode::DimensionMismatch, "model matrices have inconsistent shapes");
    }
    return m;
}

// --- CSV -------------------------------------------------------------------

Index Table::column_index(std::string_view name) const {
    for (std::size_t k = 0; k < columns.size(); ++k) {
        if (columns[k] == name) return static_cast<Index>(k);
    }
    return -1;
}

Matrix Table::select(const std::vector<std::string>& names) const {
    Matrix out(values.rows(), static_cast<Index>(names.size()));
    for (std::size_t k = 0; k < names.size(); ++k) {
        const Index c = column_index(names[k]);
        if (c < 0) throw Error(ErrorCode::InvalidArgument, "no column named '" + names[k] + "'", names[k]);
        out.col(static_cast<Index>(k)) = values.col(c);
    }
    return out;
}

Table trajectory_table(const Trajectory& traj, const std::vector<std::string>& boundary_nodes,
                       const std::vector<std::string>& edge_ids, const std::vector<std::string>& interior_nodes) {
    Table t;
    t.times = traj.times;
    std::vector<const Matrix*> blocks;
    auto add = [&](const Matrix& m, auto&& name_of) {
        if (m.cols() == 0 || m.rows() == 0) return;
        for (Index c = 0; c < m.cols(); ++c) t.columns.push_back(name_of(c));
        blocks.push_back(&m);
    };
    auto pick = [](const std::vector<std::string>& ids, Index c, const char* what) {
        if (c >= static_cast<Index>(ids.size())) {
            throw Error(ErrorCode::DimensionMismatch, std::string("not enough ") + what + " names for trajectory");
        }
        return ids[static_cast<std::size_t>(c)];
    };
    add(traj.i1, [&](Index c) { return "i_" + pick(boundary_nodes, c, "boundary node"); });
    add(traj.fhat, [&](Index c) { return "fhat_" + std::to_string(c + 1); });
    add(traj.f, [&](Index c) { return "f_" + pick(edge_ids, c, "edge"); });
    add(traj.v0, [&](Index c) { return "v0_" + pick(interior_nodes, c, "interior node"); });

    t.values.resize(traj.samples(), static_cast<Index>(t.columns.size()));
    Index offset = 0;
    for (const Matrix* m : blocks) {
        t.values.middleCols(offset, m->cols()) = *m;
        offset += m->cols();
    }
    return t;
}

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const Table& table) {
    out << "t";
    for (const auto& c : table.columns) out << ',' << c;
    out << '\n';
    for (std::size_t s = 0; s < table.times.size(); ++s) {
        out << format_double(table.times[s]);
        for (Index c = 0; c < table.values.cols(); ++c) {
            out << ',' << format_double(table.values(static_cast<Index>(s), c));
        }
        out << '\n';
    }
}

void write_csv(const std::filesystem::path& path, const Table& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path.string() + "'", path.string());
    write_csv(out, table);
}

Table parse_csv(std::string_view text) {
    Table t;
    std::vector<std::vector<double>> rows;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;

        std::vector<std::string_view> cells;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            cells.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (line_no == 1) {
            if (cells.empty() || cells[0] != "t") throw Error(ErrorCode::ParseError, "CSV header must start with 't'");
            for (std::size_t k = 1; k < cells.size(); ++k) t.columns.emplace_back(cells[k]);
            continue;
        }
        if (cells.size() != t.columns.size() + 1) {
            throw Error(ErrorCode::ParseError, "CSV line " + std::to_string(line_no) + " has wrong field count");
        }
        std::vector<double> row;
        for (auto cell : cells) {
            double v = 0.0;
            const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
                throw Error(ErrorCode::ParseError, "CSV line " + std::to_string(line_no) + ": bad number '" +
                                                       std::string(cell) + "'");
            }
            row.push_back(v);
        }
        rows.push_back(std::move(row));
    }
    if (line_no == 0) throw Error(ErrorCode::ParseError, "CSV is empty");
    t.values.resize(static_cast<Index>(rows.size()), static_cast<Index>(t.columns.size()));
    for (std::size_t s = 0; s < rows.size(); ++s) {
        t.times.push_back(rows[s][0]);
        for (std::size_t c = 1; c < rows[s].size(); ++c) t.values(static_cast<Index>(s), static_cast<Index>(c - 1)) = rows[s][c];
    }
    return t;
}

Table load_csv(const std::filesystem::path& path) { return parse_csv(read_text(path)); }

}  // namespace kronred::io
