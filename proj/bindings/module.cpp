#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nfisac/ao.hpp"
#include "nfisac/channel.hpp"
#include "nfisac/combiner.hpp"
#include "nfisac/config.hpp"
#include "nfisac/experiment.hpp"
#include "nfisac/geometry.hpp"
#include "nfisac/ma_position.hpp"
#include "nfisac/metrics.hpp"
#include "nfisac/precoder_sca.hpp"
#include "nfisac/sensing_beamformer.hpp"

namespace py = pybind11;
using namespace nfisac;

PYBIND11_MODULE(_nfisac, m) {
    m.doc() = "Near-field ISAC weighted-sum-rate optimizer with movable user antennas";

    py::register_exception<PackingInfeasibleError>(m, "PackingInfeasibleError");
    py::register_exception<InfeasibleSubproblemError>(m, "InfeasibleSubproblemError");
    py::register_exception<InfeasibleConfigError>(m, "InfeasibleConfigError");
    py::register_exception<ConfigParseError>(m, "ConfigParseError");

    py::class_<Point3>(m, "Point3")
        .def(py::init<>())
        .def(py::init<double, double, double>(), py::arg("x"), py::arg("y"), py::arg("z"))
        .def_readwrite("x", &Point3::x)
        .def_readwrite("y", &Point3::y)
        .def_readwrite("z", &Point3::z)
        .def("__repr__", [](const Point3& p) {
            return "Point3(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ", " +
                   std::to_string(p.z) + ")";
        });
    m.def("distance", &distance);

    py::class_<UlaSpec>(m, "UlaSpec")
        .def(py::init<double, int>(), py::arg("length"), py::arg("count"))
        .def_readwrite("length", &UlaSpec::length)
        .def_readwrite("count", &UlaSpec::count);
    py::class_<MaRegion>(m, "MaRegion")
        .def(py::init<>())
        .def(py::init<Point3, double, int, double>(), py::arg("center"), py::arg("side"),
             py::arg("count"), py::arg("min_spacing"))
        .def_readwrite("center", &MaRegion::center)
        .def_readwrite("side", &MaRegion::side)
        .def_readwrite("count", &MaRegion::count)
        .def_readwrite("min_spacing", &MaRegion::min_spacing);
    m.def("build_ula", &build_ula, py::arg("spec"), py::arg("axis_center_x"), py::arg("y"));
    m.def("sample_initial_positions", &sample_initial_positions, py::arg("region"),
          py::arg("seed"));
    m.def("check_spacing", &check_spacing, py::arg("points"), py::arg("d_min"));

    m.def("user_path_loss", &user_path_loss, py::arg("wavelength"), py::arg("distance"));
    m.def("sensing_path_loss", &sensing_path_loss, py::arg("wavelength"), py::arg("range_tx"),
          py::arg("range_rx"));
    py::class_<UserChannel>(m, "UserChannel")
        .def_readonly("matrix", &UserChannel::matrix)
        .def_readonly("amplitude", &UserChannel::amplitude);
    py::class_<SensingChannel>(m, "SensingChannel")
        .def_readonly("matrix", &SensingChannel::matrix)
        .def_readonly("tx_response", &SensingChannel::tx_response)
        .def_readonly("rx_response", &SensingChannel::rx_response)
        .def_readonly("amplitude", &SensingChannel::amplitude);
    m.def("build_user_channel", &build_user_channel, py::arg("tx"), py::arg("q"),
          py::arg("wavelength"), py::arg("amplitude"));
    m.def("build_sensing_channel", &build_sensing_channel, py::arg("tx"), py::arg("rx"),
          py::arg("target"), py::arg("wavelength"), py::arg("amplitude"));

    m.def("user_rate", &user_rate, py::arg("h"), py::arg("w"), py::arg("k"), py::arg("v"),
          py::arg("noise_var"));
    m.def("user_rate_sdr", &user_rate_sdr, py::arg("h"), py::arg("w"), py::arg("k"),
          py::arg("v_cov"), py::arg("noise_var"));
    m.def("wsr", &wsr, py::arg("weights"), py::arg("rates"));
    py::class_<SensingEval>(m, "SensingEval")
        .def_readonly("sinr", &SensingEval::sinr)
        .def_readonly("power", &SensingEval::power);
    m.def("sensing_sinr", &sensing_sinr, py::arg("u"), py::arg("g"), py::arg("w"), py::arg("v"),
          py::arg("noise_var"));
    m.def("sensing_sinr_sdr", &sensing_sinr_sdr, py::arg("u"), py::arg("g"), py::arg("w"),
          py::arg("v_cov"), py::arg("noise_var"));

    m.def("optimal_combiner", &optimal_combiner, py::arg("g"), py::arg("w"), py::arg("f_r"),
          py::arg("noise_var"));
    m.def("phase_normalize", &phase_normalize, py::arg("v"));

    py::class_<SinrConstraintData>(m, "SinrConstraintData")
        .def(py::init<>())
        .def_readwrite("g", &SinrConstraintData::g)
        .def_readwrite("level", &SinrConstraintData::level);
    py::class_<ScaBound>(m, "ScaBound");
    m.def("build_bound", &build_bound, py::arg("channels"), py::arg("w_expand"),
          py::arg("weights"), py::arg("v_cov"), py::arg("noise_vars"));
    m.def("eval_bound_user", &eval_bound_user, py::arg("bound"), py::arg("k"), py::arg("w"));
    m.def("eval_bound_total", &eval_bound_total, py::arg("bound"), py::arg("w"));
    py::class_<PrecoderSolution>(m, "PrecoderSolution")
        .def_readonly("w", &PrecoderSolution::w)
        .def_readonly("lambda_", &PrecoderSolution::lambda)
        .def_readonly("mu", &PrecoderSolution::mu)
        .def_readonly("power", &PrecoderSolution::power)
        .def_readonly("sinr_quad", &PrecoderSolution::sinr_quad)
        .def_readonly("objective", &PrecoderSolution::objective);
    m.def(
        "solve_precoder_subproblem",
        [](const ScaBound& bound, const SinrConstraintData& sinr, double p_max, double gamma0) {
            return solve_precoder_subproblem(bound, sinr, p_max, gamma0);
        },
        py::arg("bound"), py::arg("sinr"), py::arg("p_max"), py::arg("gamma0"));

    py::class_<VBound>(m, "VBound");
    m.def("build_v_bound", &build_v_bound, py::arg("channels"), py::arg("w"), py::arg("v_expand"),
          py::arg("weights"), py::arg("noise_vars"), py::arg("eta"));
    m.def("eval_v_objective", &eval_v_objective, py::arg("bound"), py::arg("v_cov"));
    py::class_<VSolution>(m, "VSolution")
        .def_readonly("v_cov", &VSolution::v_cov)
        .def_readonly("objective", &VSolution::objective)
        .def_readonly("iterations", &VSolution::iterations);
    m.def(
        "solve_v_subproblem",
        [](const VBound& bound, const SinrConstraintData& sinr, double trace_cap) {
            return solve_v_subproblem(bound, sinr, trace_cap);
        },
        py::arg("bound"), py::arg("sinr"), py::arg("trace_cap") = 1.0);
    m.def("extract_beamformer", &extract_beamformer, py::arg("v_cov"));

    m.def("rate_gradient", &rate_gradient, py::arg("q"), py::arg("tx"), py::arg("wavelength"),
          py::arg("amplitude"), py::arg("w"), py::arg("k"), py::arg("v_cov"),
          py::arg("noise_var"));
    m.def("project_region", &project_region, py::arg("q"), py::arg("region"));

    py::class_<SystemConfig>(m, "SystemConfig")
        .def(py::init<>())
        .def_readwrite("f_ghz", &SystemConfig::f_ghz)
        .def_readwrite("n_tx", &SystemConfig::n_tx)
        .def_readwrite("n_rx", &SystemConfig::n_rx)
        .def_readwrite("n_users", &SystemConfig::n_users)
        .def_readwrite("n_ma", &SystemConfig::n_ma)
        .def_readwrite("weights", &SystemConfig::weights)
        .def_readwrite("p_max_w", &SystemConfig::p_max_w)
        .def_readwrite("d_min_m", &SystemConfig::d_min_m)
        .def_readwrite("gamma0", &SystemConfig::gamma0)
        .def_readwrite("eta", &SystemConfig::eta)
        .def_readwrite("noise_user_db", &SystemConfig::noise_user_db)
        .def_readwrite("noise_sense_db", &SystemConfig::noise_sense_db)
        .def_readwrite("user_centers", &SystemConfig::user_centers)
        .def_readwrite("region_side_m", &SystemConfig::region_side_m)
        .def_readwrite("target", &SystemConfig::target)
        .def("wavelength", &SystemConfig::wavelength)
        .def("validate", &SystemConfig::validate);
    m.def("parse_config", [](const std::string& text) { return parse_config(text); },
          py::arg("text"));

    py::enum_<RunStatus>(m, "RunStatus")
        .value("ok", RunStatus::ok)
        .value("run_failed", RunStatus::run_failed)
        .value("infeasible_init", RunStatus::infeasible_init);
    py::class_<IterationRecord>(m, "IterationRecord")
        .def_readonly("iteration", &IterationRecord::iteration)
        .def_readonly("wsr", &IterationRecord::wsr)
        .def_readonly("rates", &IterationRecord::rates)
        .def_readonly("sinr", &IterationRecord::sinr)
        .def_readonly("sensing_power", &IterationRecord::sensing_power)
        .def_readonly("power_used", &IterationRecord::power_used);
    py::class_<AoResult>(m, "AoResult")
        .def_readonly("status", &AoResult::status)
        .def_readonly("converged", &AoResult::converged)
        .def_readonly("iterations", &AoResult::iterations)
        .def_readonly("trace", &AoResult::trace)
        .def_readonly("wsr", &AoResult::wsr)
        .def_readonly("rates", &AoResult::rates)
        .def_readonly("sinr_sdr", &AoResult::sinr_sdr)
        .def_readonly("sensing_power", &AoResult::sensing_power)
        .def_readonly("power_used", &AoResult::power_used)
        .def_readonly("v", &AoResult::v)
        .def_readonly("sinr_extracted", &AoResult::sinr_extracted)
        .def_readonly("rank_ratio", &AoResult::rank_ratio);
    m.def(
        "run",
        [](const SystemConfig& cfg, std::uint64_t seed, bool move_antennas) {
            return run(cfg, seed, {move_antennas});
        },
        py::arg("config"), py::arg("seed"), py::arg("move_antennas") = true,
        py::call_guard<py::gil_scoped_release>());

    m.def(
        "run_experiment",
        [](const std::string& experiment, const SystemConfig& base, const std::string& out_path,
           std::uint64_t seed, int realizations, bool fix_ant_only) {
            ExperimentSpec spec;
            spec.id = experiment_from_name(experiment);
            spec.base = base;
            spec.master_seed = seed;
            spec.realizations = realizations;
            spec.fix_ant_only = fix_ant_only;
            spec.output_path = out_path;
            const ExperimentResult res = run_experiment(spec);
            return py::make_tuple(res.total, res.failed);
        },
        py::arg("experiment"), py::arg("config"), py::arg("out_path"), py::arg("seed") = 1,
        py::arg("realizations") = 50, py::arg("fix_ant_only") = false,
        py::call_guard<py::gil_scoped_release>());
}
