#pragma once

#include "qvn/gate_optimizer.hpp"

namespace qvn {

// (2 pi Omega t)^2 n^2 with Omega in kHz and t in ns
double idle_error(double omega_zz_khz, double t_ns, int n);

// pi / (2 g) + t_ramp + 1 ns, g in GHz as omega / 2pi
double move_time(double g, double t_ramp);
double move_plateau(double g);

struct TransmonSpec {
    double e_j = 0.0;  // GHz
    double e_c = 0.0;  // GHz
    double ratio = 0.0;
    double eps = 0.0;  // sqrt(8 E_J E_C) - E_C
    double eta = 0.0;  // E_C
    bool valid = true; // ratio >= 20
};
TransmonSpec transmon_frequency(double e_j, double e_c);
// eta (sqrt(8 ratio) - 1)
double min_frequency(double eta, double ratio);

struct ZZOptions {
    int memory = 0;             // which memory / qubit pair shares the bus
    bool subsystem = true;      // shared qubit, its memory and the bus only
    bool rotating_wave = true;  // excitation-conserving coupling
    int levels = 4;
    int max_excitations = 3;
};

struct ZZResult {
    double omega_khz = 0.0;     // (E11 + E00 - E10 - E01) / 2pi
    double e00 = 0.0, e01 = 0.0, e10 = 0.0, e11 = 0.0;  // rad/ns; first index memory, second bus
    int dim = 0;
};
// Conditional memory-bus frequency shift with every qubit parked at park_freq.
ZZResult compute_zz(const DeviceConfig& dev, const ZZOptions& opt = {});

struct GSample {
    double g_b = 0.0;        // GHz
    double t_ramp_est = 0.0; // estimator-only ramp
    double t_gate_est = 0.0; // sudden-limit t_on + t_ramp_est
    bool confirmed = false;
    double t_ramp = 0.0;     // after simulation
    double t_on = 0.0;
    double t_gate = 0.0;
    double f_ave = 0.0;
};

struct GOptOptions {
    double target = 0.999;                 // state-averaged fidelity
    double g_min = 0.010, g_max = 0.100;   // GHz
    double g_step = 0.001;
    double ramp_step = 0.1;                // ns, estimator scan
    double ramp_max = 60.0;
    double confirm_step = 0.25;            // ns, simulated ramp increments
    double confirm_window = 0.010;         // GHz around the estimator optimum
    double round_to = 0.005;
    bool confirm = true;
    GateOptions gate;
};

struct GOptimizationCurve {
    double eta = 0.0;
    std::vector<GSample> samples;
    double best_g = 0.0;         // argmin of t_gate over confirmed (or estimated) samples
    double recommended_g = 0.0;  // rounded
    bool reachable = true;
};

// Estimated minimum fidelity per single-qubit-bus gate, translated to F_ave by 1 - F_ave = (1 - F11) / 4.
double f_ave_from_f11(double f11);

GOptimizationCurve g_optimize(const DeviceConfig& tmpl, const GOptOptions& opt = {});

}  // namespace qvn
