#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "degenbeam/hum.hpp"
#include "degenbeam/runner.hpp"

namespace py = pybind11;
using namespace degenbeam;

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Degenerate beam observability and boundary control laboratory";

    py::register_exception<Error>(m, "DegenbeamError");

    py::enum_<Regime>(m, "Regime")
        .value("WD", Regime::WD)
        .value("SD", Regime::SD);

    py::enum_<VectorKind>(m, "VectorKind")
        .value("Raw", VectorKind::Raw)
        .value("Clamped", VectorKind::Clamped);

    py::class_<DegeneracyProfile>(m, "DegeneracyProfile")
        .def_static("power", &DegeneracyProfile::power, py::arg("alpha"), py::arg("scale"))
        .def_static("custom", &DegeneracyProfile::custom, py::arg("a"), py::arg("a_prime"))
        .def_property_readonly("alpha", &DegeneracyProfile::alpha)
        .def_property_readonly("scale", &DegeneracyProfile::scale)
        .def("a", &DegeneracyProfile::a)
        .def("a_prime", &DegeneracyProfile::a_prime)
        .def("log_derivative", &DegeneracyProfile::log_derivative);

    py::class_<DegeneracyClass>(m, "DegeneracyClass")
        .def_readonly("K", &DegeneracyClass::K)
        .def_readonly("regime", &DegeneracyClass::regime)
        .def_readonly("a_at_1", &DegeneracyClass::a_at_1);

    m.def("make_power_profile", &make_power_profile, py::arg("alpha"), py::arg("scale"));
    m.def("classify", &classify, py::arg("profile"), py::arg("resolution") = 2000);
    m.def("observability_time", &observability_time);

    py::class_<Grid>(m, "Grid")
        .def_readonly("n_cells", &Grid::n_cells)
        .def_readonly("h", &Grid::h)
        .def_readonly("nodes", &Grid::nodes);

    m.def("build_grid", &build_grid, py::arg("n_cells"));

    py::class_<WeightedQuadrature>(m, "WeightedQuadrature")
        .def_readonly("weights_inv_a", &WeightedQuadrature::weights_inv_a)
        .def_readonly("weights_plain", &WeightedQuadrature::weights_plain);

    m.def("make_weighted_quadrature", &make_weighted_quadrature);
    m.def("weighted_l2_norm_sq", &weighted_l2_norm_sq);
    m.def("h2_seminorm_sq", &h2_seminorm_sq, py::arg("u"), py::arg("grid"),
          py::arg("kind") = VectorKind::Raw);
    m.def("trace_y_xx_at_1", &trace_y_xx_at_1, py::arg("u"), py::arg("grid"),
          py::arg("kind") = VectorKind::Clamped);

    py::class_<BeamOperator>(m, "BeamOperator")
        .def_property_readonly("dim", &BeamOperator::dim)
        .def_readonly("profile_values", &BeamOperator::profile_values)
        .def("apply",
             [](const BeamOperator & op, const std::vector<double> & u)
             {
                 std::vector<double> out;
                 op.apply(u, out);
                 return out;
             });

    m.def("assemble_beam_operator", &assemble_beam_operator);

    py::class_<BeamState>(m, "BeamState")
        .def(py::init<>())
        .def(py::init(
                 [](std::vector<double> y, std::vector<double> v, double t)
                 {
                     BeamState s;
                     s.y = std::move(y);
                     s.v = std::move(v);
                     s.t = t;
                     return s;
                 }),
             py::arg("y"), py::arg("v"), py::arg("t") = 0.0)
        .def_readwrite("y", &BeamState::y)
        .def_readwrite("v", &BeamState::v)
        .def_readwrite("t", &BeamState::t);

    py::class_<TraceSeries>(m, "TraceSeries")
        .def_readonly("samples", &TraceSeries::samples)
        .def_readonly("dt", &TraceSeries::dt)
        .def_readonly("T", &TraceSeries::T);

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("states", &Trajectory::states)
        .def_readonly("energies", &Trajectory::energies)
        .def_readonly("trace", &Trajectory::trace);

    m.def("energy", &energy);
    m.def("step_midpoint", &step_midpoint);
    m.def("solve_homogeneous", &solve_homogeneous, py::arg("initial"), py::arg("T"),
          py::arg("dt"), py::arg("op"), py::arg("quad"), py::arg("grid"),
          py::arg("store_states") = true);
    m.def("solve_backward", &solve_backward, py::arg("terminal"), py::arg("T"), py::arg("dt"),
          py::arg("op"), py::arg("quad"), py::arg("grid"), py::arg("store_states") = true);

    py::class_<ModalBasis>(m, "ModalBasis")
        .def_readonly("lambdas", &ModalBasis::lambdas)
        .def_readonly("omegas", &ModalBasis::omegas)
        .def_readonly("shapes", &ModalBasis::shapes)
        .def_readonly("traces", &ModalBasis::traces);

    m.def("compute_modes", &compute_modes);

    py::class_<IdentityReport>(m, "IdentityReport")
        .def_readonly("lhs", &IdentityReport::lhs)
        .def_readonly("rhs", &IdentityReport::rhs)
        .def_readonly("relative_residual", &IdentityReport::relative_residual);

    m.def("identity_residual_first", &identity_residual_first);
    m.def("identity_residual_second", &identity_residual_second);
    m.def("observability_bounds", &observability_bounds);
    m.def("quotient", &quotient);

    py::class_<ObservabilityReport>(m, "ObservabilityReport")
        .def_readonly("T", &ObservabilityReport::T)
        .def_readonly("quotient_min", &ObservabilityReport::quotient_min)
        .def_readonly("quotient_max", &ObservabilityReport::quotient_max)
        .def_readonly("lower_bound", &ObservabilityReport::lower_bound)
        .def_readonly("upper_bound", &ObservabilityReport::upper_bound)
        .def_readonly("C_T_estimate", &ObservabilityReport::C_T_estimate)
        .def_readonly("samples", &ObservabilityReport::samples)
        .def_readonly("sample_quotients", &ObservabilityReport::sample_quotients);

    m.def("estimate_CT", &estimate_CT, py::arg("profile"), py::arg("op"), py::arg("grid"),
          py::arg("T"), py::arg("dt"), py::arg("mode_count"), py::arg("samples"),
          py::arg("seed"));

    py::class_<ControlProblem>(m, "ControlProblem")
        .def(py::init<>())
        .def_readwrite("u0", &ControlProblem::u0)
        .def_readwrite("u1", &ControlProblem::u1)
        .def_readwrite("T", &ControlProblem::T)
        .def_readwrite("dt", &ControlProblem::dt)
        .def_readwrite("filter_modes", &ControlProblem::filter_modes)
        .def_readwrite("cg_tol", &ControlProblem::cg_tol)
        .def_readwrite("max_iter", &ControlProblem::max_iter)
        .def_readwrite("tikhonov", &ControlProblem::tikhonov)
        .def_readwrite("allow_short_time", &ControlProblem::allow_short_time);

    py::class_<HUMSolution>(m, "HUMSolution")
        .def_readonly("V_bar", &HUMSolution::V_bar)
        .def_readonly("control", &HUMSolution::control)
        .def_readonly("iterations", &HUMSolution::iterations)
        .def_readonly("cg_residual", &HUMSolution::cg_residual)
        .def_readonly("terminal_state_norm", &HUMSolution::terminal_state_norm)
        .def_readonly("terminal_velocity_norm", &HUMSolution::terminal_velocity_norm)
        .def_readonly("energy_reduction", &HUMSolution::energy_reduction)
        .def_readonly("initial_energy", &HUMSolution::initial_energy)
        .def_readonly("terminal_energy", &HUMSolution::terminal_energy)
        .def_readonly("uncontrolled_terminal_energy",
                      &HUMSolution::uncontrolled_terminal_energy)
        .def_readonly("control_cost", &HUMSolution::control_cost);

    py::class_<HUMSystem>(m, "HUMSystem")
        .def(py::init<const DegeneracyProfile &, const BeamOperator &,
                      const WeightedQuadrature &, const Grid &, const ControlProblem &>(),
             py::keep_alive<1, 3>(), py::keep_alive<1, 4>(), py::keep_alive<1, 5>())
        .def("gramian_apply",
             py::overload_cast<const std::vector<double> &>(&HUMSystem::gramian_apply,
                                                            py::const_))
        .def("rhs_functional", &HUMSystem::rhs_functional)
        .def("gramian", &HUMSystem::gramian)
        .def("synthesize", &HUMSystem::synthesize);

    m.def("observation_map", &observation_map);
    m.def("synthesize_control", &synthesize_control);

    m.def("run_command",
          [](const std::string & command, const std::string & config_path,
             const std::string & out_override, py::object seed)
          {
              ExperimentConfig cfg = load_config(config_path);
              if (!out_override.empty())
              {
                  cfg.out_dir = out_override;
              }
              if (!seed.is_none())
              {
                  cfg.seed = seed.cast<std::uint64_t>();
              }
              return run_command(parse_command(command), cfg).dump(2);
          },
          py::arg("command"), py::arg("config_path"), py::arg("out") = std::string(),
          py::arg("seed") = py::none());

#ifdef VERSION_INFO
    m.attr("__version__") = VERSION_INFO;
#else
    m.attr("__version__") = "dev";
#endif
}
