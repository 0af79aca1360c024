// Python bindings. Networks, excitations and models cross the boundary as
// JSON text; matrices come back as numpy arrays.

#include "kronred/baseline.hpp"
#include "kronred/error.hpp"
#include "kronred/experiment.hpp"
#include "kronred/io.hpp"
#include "kronred/network.hpp"
#include "kronred/phasor.hpp"
#include "kronred/reduction.hpp"
#include "kronred/simulation.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace kronred;

namespace {

ValidatedNetwork load(const std::string& network_json, bool allow_nonpassive = false) {
    return validate(io::parse_network(network_json), {allow_nonpassive});
}

py::dict trajectory_dict(const Trajectory& tr) {
    py::dict d;
    d["t"] = tr.times;
    d["i1"] = tr.i1;
    d["f"] = tr.f;
    if (tr.fhat.size()) d["fhat"] = tr.fhat;
    if (tr.v0.size()) d["v0"] = tr.v0;
    return d;
}

py::dict model_dict(const ReducedModel& m) {
    py::dict d;
    d["strategy"] = std::string(to_string(m.strategy));
    d["P"] = m.P;
    d["Lhat"] = m.Lhat;
    d["Rhat"] = m.Rhat;
    d["Bhat"] = m.Bhat;
    return d;
}

py::dict validate_py(const std::string& network_json) {
    const ValidatedNetwork net = load(network_json);
    py::dict d;
    d["nodes"] = net.ordered_nodes();
    d["boundary"] = net.boundary_nodes();
    d["interior"] = net.interior_nodes();
    d["edges"] = net.edge_count();
    const auto parts = partitioned(net);
    d["B1"] = parts.B1;
    d["B0"] = parts.B0;
    return d;
}

py::dict reduce_py(const std::string& network_json, const std::string& strategy) {
    const ReducedModel m = reduce(load(network_json), parse_strategy(strategy));
    py::dict d = model_dict(m);
    d["json"] = io::model_to_json(m);
    return d;
}

py::dict simulate_py(const std::string& network_json, const std::string& excitation_json, const Vector& f0,
                     double dt, double t_end, int stride, const std::string& method, const std::string& strategy) {
    const ValidatedNetwork net = load(network_json);
    const Excitation x = io::parse_excitation(excitation_json, net);
    const SolverConfig cfg{dt, t_end, stride};
    Trajectory tr;
    {
        py::gil_scoped_release release;
        if (method == "reduced") {
            tr = simulate_reduced(reduce(net, parse_strategy(strategy)), x, f0, cfg);
        } else if (method == "dae") {
            tr = simulate_dae_oracle(net, x, f0, cfg);
        } else if (method == "homogeneous") {
            const Vector i1_0 = partitioned(net).B1 * f0;
            tr = simulate_homogeneous(homogeneous_reduce(net), x, i1_0, cfg);
        } else {
            throw Error(ErrorCode::InvalidArgument, "unknown method '" + method + "'", method);
        }
    }
    return trajectory_dict(tr);
}

py::dict phasor_py(const std::string& network_json, double omega, const std::vector<std::complex<double>>& v1) {
    const ValidatedNetwork net = load(network_json);
    const KronReduction kr = kron_reduce(admittance(net, omega));
    std::vector<Phasor> v;
    for (const auto& z : v1) v.push_back(Phasor::from_complex(z));
    py::dict d;
    d["Yr"] = kr.Yr;
    d["i1"] = to_complex(phasor_solve(kr.Yr, v));
    d["v0"] = to_complex(recover_interior(kr.recovery, v));
    return d;
}

std::string heuristic_reduce_py(const std::string& network_json, double omega0, bool allow_unphysical) {
    return io::network_to_json(heuristic_reduce(load(network_json), omega0, allow_unphysical).network.network());
}

py::dict experiment_py(const std::string& which, std::uint64_t seed, const std::string& strategy) {
    const experiment::Drive drive = experiment::parse_drive(which);
    const PStrategy s = parse_strategy(strategy);
    std::optional<experiment::Result> out;
    {
        py::gil_scoped_release release;
        out.emplace(experiment::run_wye(drive, seed, experiment::default_solver(), s));
    }
    const experiment::Result& res = *out;
    py::list baseline;
    for (std::size_t k = 0; k < res.summaries.size(); ++k) {
        py::dict b;
        b["gamma"] = res.summaries[k].gamma(0);
        b["f0"] = res.baseline.runs[k].f0;
        b["steady_state_error_rel"] = res.summaries[k].steady_state_error_rel;
        b["transient_max_error_rel"] = res.summaries[k].transient_max_error_rel;
        b["trajectory"] = trajectory_dict(res.baseline.runs[k].trajectory);
        baseline.append(b);
    }
    py::dict observations;
    for (const auto& o : res.observations) observations[py::str(o.name)] = py::make_tuple(o.holds, o.value);
    py::dict d;
    d["excitation"] = experiment::to_string(drive);
    d["seed"] = res.seed;
    d["omega0"] = experiment::kOmega0;
    d["steady_from_time"] = res.steady_from_time;
    d["reduced_vs_dae_max_rel"] = res.reduced_vs_dae_max_rel;
    d["initial_injection_error"] = res.initial_injection_error;
    d["dae"] = trajectory_dict(res.dae);
    d["reduced"] = trajectory_dict(res.reduced);
    d["synthesized"] = io::network_to_json(res.baseline.synthesized.network.network());
    d["baseline"] = baseline;
    d["observations"] = observations;
    d["all_hold"] = res.all_hold();
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exact time-domain Kron reduction of RL networks";

    // raised with .code, .subject and .value attached
    // leaked on purpose: the type must outlive interpreter teardown
    static py::handle error_type = py::exception<Error>(m, "KronredError").release();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = error_type(py::str(e.what()));
            exc.attr("code") = std::string(to_string(e.code()));
            exc.attr("subject") = e.subject();
            exc.attr("value") = e.value();
            PyErr_SetObject(error_type.ptr(), exc.ptr());
        }
    });

    m.def("validate", &validate_py, py::arg("network_json"));
    m.def("reduce", &reduce_py, py::arg("network_json"), py::arg("strategy") = "nullbasis");
    m.def("model_from_json", [](const std::string& text) { return model_dict(io::parse_model(text)); },
          py::arg("model_json"));
    m.def("simulate", &simulate_py, py::arg("network_json"), py::arg("excitation_json"), py::arg("f0"),
          py::arg("dt"), py::arg("t_end"), py::arg("stride") = 1, py::arg("method") = "reduced",
          py::arg("strategy") = "nullbasis");
    m.def("phasor", &phasor_py, py::arg("network_json"), py::arg("omega"), py::arg("v1"));
    m.def("heuristic_reduce", &heuristic_reduce_py, py::arg("network_json"), py::arg("omega0"),
          py::arg("allow_unphysical") = false);
    m.def("draw_gammas", &draw_gammas, py::arg("seed"), py::arg("count"), py::arg("lo") = -5.0,
          py::arg("hi") = 5.0);
    m.def("compare", [](const std::vector<double>& t, const Matrix& cand, const Matrix& ref, double from_time) {
              const Deviation d = compare_series(t, cand, ref, from_time);
              return py::dict(py::arg("max_abs") = d.max_abs, py::arg("max_rel") = d.max_rel,
                              py::arg("steady_rel") = d.steady_rel);
          },
          py::arg("t"), py::arg("candidate"), py::arg("reference"), py::arg("from_time") = 0.0);
    m.def("experiment", &experiment_py, py::arg("which"), py::arg("seed") = experiment::kDefaultSeed,
          py::arg("strategy") = "nullbasis");
}
