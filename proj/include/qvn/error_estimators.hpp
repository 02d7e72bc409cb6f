#pragma once

#include "qvn/device.hpp"
#include "qvn/pulses.hpp"

#include <complex>
#include <string>

namespace qvn {

// Two levels with coupling G and instantaneous detuning Delta(t); rad/ns and ns.
struct TwoChannelSpec {
    double G = 0.0;
    double delta_on = 0.0;
    double delta_off = 0.0;
    double sigma = 1.0;
    double t_ramp = 4.0;

    // arguments in GHz (as omega / 2pi) and ns
    static TwoChannelSpec from_ghz(double g, double delta_on, double delta_off, double sigma, double t_ramp);
    SwitchParams profile() const { return {delta_off, delta_on, sigma, t_ramp}; }
    void validate() const;
};

struct SwitchErrorReport {
    std::complex<double> a;
    double a_sq = 0.0;
    double p_sw = 0.0;
    std::string context;
};

// A = Delta_on int_0^t_ramp (dDelta/dt / Delta^2) exp(-i int_0^t Delta) dt, adaptive Gauss-Kronrod.
std::complex<double> switching_amplitude(const TwoChannelSpec& spec, double rel_tol = 1e-9);

// p_sw = (G / Delta_on)^2 |A|^2
SwitchErrorReport switching_probability(const TwoChannelSpec& spec, const std::string& context = {});

// 11 <-> 02 channel of the qubit-bus gate: G = sqrt2 g_b, Delta_on = eta - sqrt2 g_b.
TwoChannelSpec cz_switch_spec(const DeviceConfig& dev, double sigma, double t_ramp);
// 01 <-> 10 channel: G = g_b, Delta_on = eta + 2 g_b^2 / eta.
TwoChannelSpec lower_band_spec(const DeviceConfig& dev, double sigma, double t_ramp);

struct MinFidelityEstimate {
    SwitchErrorReport switching;
    double f11_est = 1.0;  // 1 - 2 p_sw
};
MinFidelityEstimate cz_min_fidelity_estimate(const DeviceConfig& dev, double sigma, double t_ramp);

// (phi1^2 + phi2^2) / 5
double z_angle_error(double phi1, double phi2);

struct UncompensatedError {
    double exact = 0.0;   // with the pulse's own omega_on and t_on
    double sudden = 0.0;  // omega_on -> omega_b, t_on -> sudden-limit value
};
// dt_on in ns, domega_on in GHz
UncompensatedError uncompensated_pulse_error(double dt_on, double domega_on, const CZPulseParams& pulse,
                                             double bus_freq, double g_b);

struct CompensatedError {
    double delta = 0.0;    // controlled-phase error, rad
    double theta = 0.0;    // rotation error angle, rad
    double e_theta = 0.0;  // sin^2(theta / 2)
    double loss = 0.0;     // 3/20 delta^2 + theta^2 / 16
};
CompensatedError compensated_pulse_error(double dt_on, double domega_on, double g_b);

// Largest single deviation that keeps the compensated loss at or below `loss`.
struct PulsePrecision {
    double loss = 0.0;
    double dt_on = 0.0;      // ns
    double domega_on = 0.0;  // GHz
};
PulsePrecision pulse_precision(double loss, double g_b);

struct QubitQubitEstimate {
    SwitchErrorReport lower;  // 01 <-> 10, dominant
    SwitchErrorReport upper;  // 11 <-> 02
    double f_min_est = 1.0;   // 1 - 2 p_sw(lower)
};
// anharmonicities and coupling in GHz, delta_off in GHz
QubitQubitEstimate qubit_qubit_min_fidelity(double eta1, double eta2, double g, double sigma, double t_ramp,
                                            double delta_off = 1.0);

}  // namespace qvn
