#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qvn/error_estimators.hpp"
#include "qvn/gate_optimizer.hpp"
#include "qvn/system_design.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace qvn;

PYBIND11_MODULE(_qvn, m) {
    m.doc() = "Qubit-bus CZ gate simulation for quantum von Neumann devices";

    py::register_exception<NonDispersiveError>(m, "NonDispersiveError", PyExc_RuntimeError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    py::class_<DeviceConfig>(m, "DeviceConfig")
        .def(py::init<>())
        .def_static("defaults", &DeviceConfig::defaults, "eta"_a = 0.3, "g_b"_a = 0.045)
        .def_readwrite("n_qubits", &DeviceConfig::n_qubits)
        .def_readwrite("qubit_freqs", &DeviceConfig::qubit_freqs)
        .def_readwrite("memory_freqs", &DeviceConfig::memory_freqs)
        .def_readwrite("bus_freq", &DeviceConfig::bus_freq)
        .def_readwrite("g_m", &DeviceConfig::g_m)
        .def_readwrite("g_b", &DeviceConfig::g_b)
        .def_readwrite("eta", &DeviceConfig::eta)
        .def_readwrite("eta2", &DeviceConfig::eta2)
        .def_readwrite("park_freq", &DeviceConfig::park_freq)
        .def_readwrite("off_freq", &DeviceConfig::off_freq)
        .def("validate", &DeviceConfig::validate)
        .def("mode_count", &DeviceConfig::mode_count)
        .def("__repr__", [](const DeviceConfig& d) {
            return "DeviceConfig(n_qubits=" + std::to_string(d.n_qubits) + ", eta=" + std::to_string(d.eta) +
                   ", g_b=" + std::to_string(d.g_b) + ")";
        });

    m.def("enumerate_labels", [](int modes, int levels, int cap) { return enumerate_basis(modes, levels, cap).labels; },
          "mode_count"_a, "levels"_a = 4, "max_excitations"_a = 3);
    m.def("hamiltonian", [](const DeviceConfig& d, const std::vector<double>& freqs, int levels, int cap,
                            bool rwa) { return build_qvn_model(d, ModelOptions{levels, cap, rwa}).dense(freqs); },
          "device"_a, "qubit_freqs"_a, "levels"_a = 4, "max_excitations"_a = 3, "rotating_wave"_a = false);
    m.def("qubit_bus_hamiltonian", &build_qubit_bus_hamiltonian, "eps"_a, "eta"_a, "bus"_a, "g_b"_a,
          "max_excitations"_a = 4);

    py::class_<CZPulseParams>(m, "CZPulse")
        .def(py::init([](double omega_on, double t_on, double t_ramp, std::optional<double> sigma, double omega_off) {
                 CZPulseParams p;
                 p.omega_on = omega_on;
                 p.t_on = t_on;
                 p.t_ramp = t_ramp;
                 p.sigma = sigma ? *sigma : CZPulseParams::sigma_for_ramp(t_ramp);
                 p.omega_off = omega_off;
                 p.validate();
                 return p;
             }),
             "omega_on"_a, "t_on"_a, "t_ramp"_a, "sigma"_a = py::none(), "omega_off"_a = 7.5)
        .def_readwrite("omega_off", &CZPulseParams::omega_off)
        .def_readwrite("omega_on", &CZPulseParams::omega_on)
        .def_readwrite("sigma", &CZPulseParams::sigma)
        .def_readwrite("t_ramp", &CZPulseParams::t_ramp)
        .def_readwrite("t_on", &CZPulseParams::t_on)
        .def_property_readonly("t_gate", &CZPulseParams::t_gate)
        .def("profile", [](const CZPulseParams& p, double t) { return cz_profile(p, t); }, "t"_a);

    py::class_<FidelityReport>(m, "FidelityReport")
        .def_readonly("f_ave", &FidelityReport::f_ave)
        .def_readonly("f_min11", &FidelityReport::f_min11)
        .def_readonly("leakage", &FidelityReport::leakage)
        .def_property_readonly("z_angles",
                               [](const FidelityReport& r) { return std::pair{r.angles.gamma1, r.angles.gamma2}; });

    py::class_<GateOptions>(m, "GateOptions")
        .def(py::init([](int levels, int cap, bool rwa, double fine_step, double coarse_step) {
                 GateOptions g;
                 g.model = ModelOptions{levels, cap, rwa};
                 g.propagator.fine_step = fine_step;
                 g.propagator.coarse_step = coarse_step;
                 return g;
             }),
             "levels"_a = 4, "max_excitations"_a = 3, "rotating_wave"_a = false, "fine_step"_a = 0.04,
             "coarse_step"_a = 0.2);

    py::class_<CZSimulator>(m, "CZSimulator")
        .def(py::init<const DeviceConfig&, int, const GateOptions&>(), "device"_a, "qubit"_a = 0,
             "options"_a = GateOptions{})
        .def("gate", [](const CZSimulator& s, const CZPulseParams& p) { return Eigen::MatrixXcd(s.simulate(p).matrix); })
        .def("evaluate", &CZSimulator::evaluate, "pulse"_a,
             py::call_guard<py::gil_scoped_release>());

    py::class_<OptimizedGate>(m, "OptimizedGate")
        .def_readonly("pulse", &OptimizedGate::pulse)
        .def_readonly("report", &OptimizedGate::report)
        .def_readonly("evaluations", &OptimizedGate::evaluations)
        .def_readonly("converged", &OptimizedGate::converged);
    m.def("optimize_cz",
          [](const CZSimulator& s, double sigma, double t_ramp, const GateOptions& o) {
              return optimize_cz(s, sigma, t_ramp, o);
          },
          "simulator"_a, "sigma"_a, "t_ramp"_a, "options"_a = GateOptions{}, py::call_guard<py::gil_scoped_release>());

    m.def("f_ave", py::overload_cast<const Eigen::MatrixXcd&, const Eigen::MatrixXcd&>(&f_ave), "u"_a, "target"_a);
    m.def("cz_target", []() { return Eigen::MatrixXcd(cz_target()); });

    py::class_<SwitchErrorReport>(m, "SwitchErrorReport")
        .def_readonly("a", &SwitchErrorReport::a)
        .def_readonly("a_sq", &SwitchErrorReport::a_sq)
        .def_readonly("p_sw", &SwitchErrorReport::p_sw)
        .def_readonly("context", &SwitchErrorReport::context);
    m.def("switching_probability",
          [](double g, double delta_on, double delta_off, double sigma, double t_ramp) {
              return switching_probability(TwoChannelSpec::from_ghz(g, delta_on, delta_off, sigma, t_ramp));
          },
          "g"_a, "delta_on"_a, "delta_off"_a, "sigma"_a, "t_ramp"_a);
    m.def("cz_min_fidelity_estimate",
          [](const DeviceConfig& d, double sigma, double t_ramp) {
              MinFidelityEstimate e = cz_min_fidelity_estimate(d, sigma, t_ramp);
              return py::dict("a_sq"_a = e.switching.a_sq, "p_sw"_a = e.switching.p_sw, "f11_est"_a = e.f11_est);
          },
          "device"_a, "sigma"_a, "t_ramp"_a);
    m.def("pulse_precision",
          [](double loss, double g_b) {
              PulsePrecision p = pulse_precision(loss, g_b);
              return py::dict("dt_on"_a = p.dt_on, "domega_on"_a = p.domega_on);
          },
          "loss"_a, "g_b"_a);

    m.def("omega_zz_khz",
          [](const DeviceConfig& d, int memory, bool subsystem, bool rwa) {
              ZZOptions o;
              o.memory = memory;
              o.subsystem = subsystem;
              o.rotating_wave = rwa;
              return compute_zz(d, o).omega_khz;
          },
          "device"_a, "memory"_a = 0, "subsystem"_a = true, "rotating_wave"_a = true);
    m.def("idle_error", &idle_error, "omega_zz_khz"_a, "t_ns"_a, "n"_a);
    m.def("transmon_frequency",
          [](double e_j, double e_c) {
              TransmonSpec t = transmon_frequency(e_j, e_c);
              return py::dict("eps"_a = t.eps, "ratio"_a = t.ratio, "valid"_a = t.valid);
          },
          "e_j"_a, "e_c"_a);
}
