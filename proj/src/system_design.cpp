#include "qvn/system_design.hpp"

#include "qvn/error_estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qvn {

double idle_error(double omega_zz_khz, double t_ns, int n) {
    const double phase = kTwoPi * omega_zz_khz * 1e-6 * t_ns;
    return phase * phase * static_cast<double>(n) * n;
}

double move_plateau(double g) {
    if (!(g > 0)) throw std::invalid_argument("coupling must be positive");
    return kPi / (2.0 * ang(g));
}

double move_time(double g, double t_ramp) { return move_plateau(g) + t_ramp + 1.0; }

TransmonSpec transmon_frequency(double e_j, double e_c) {
    if (!(e_j > 0) || !(e_c > 0)) throw std::invalid_argument("E_J and E_C must be positive");
    TransmonSpec t;
    t.e_j = e_j;
    t.e_c = e_c;
    t.ratio = e_j / e_c;
    t.eps = std::sqrt(8.0 * e_j * e_c) - e_c;
    t.eta = e_c;
    t.valid = t.ratio >= 20.0;
    return t;
}

double min_frequency(double eta, double ratio) {
    if (!(eta > 0) || !(ratio > 0)) throw std::invalid_argument("eta and ratio must be positive");
    return eta * (std::sqrt(8.0 * ratio) - 1.0);
}

ZZResult compute_zz(const DeviceConfig& dev, const ZZOptions& opt) {
    dev.validate();
    if (opt.memory < 0 || opt.memory >= dev.n_qubits) throw std::invalid_argument("memory index out of range");
    DeviceConfig d = opt.subsystem ? single_qubit_device(dev, opt.memory) : dev;
    const int k = opt.subsystem ? 0 : opt.memory;
    ModelOptions mo;
    mo.levels = opt.levels;
    mo.max_excitations = opt.max_excitations;
    mo.rotating_wave = opt.rotating_wave;
    QvnModel model = build_qvn_model(d, mo);

    const int modes = d.mode_count();
    Label l00(modes, 0), l01 = l00, l10 = l00, l11 = l00;
    l01[d.bus_mode()] = 1;
    l10[d.memory_mode(k)] = 1;
    l11[d.bus_mode()] = 1;
    l11[d.memory_mode(k)] = 1;
    LabelOptions lo;
    lo.check = {l00, l01, l10, l11};
    EigenBasis eb = idle_basis(model, d.parked(), lo);

    ZZResult r;
    r.dim = model.basis.dim();
    r.e00 = eb.energy(model.basis, l00);
    r.e01 = eb.energy(model.basis, l01);
    r.e10 = eb.energy(model.basis, l10);
    r.e11 = eb.energy(model.basis, l11);
    r.omega_khz = (r.e11 + r.e00 - r.e10 - r.e01) / kTwoPi * 1e6;
    return r;
}

double f_ave_from_f11(double f11) { return 1.0 - 0.25 * (1.0 - f11); }

GOptimizationCurve g_optimize(const DeviceConfig& tmpl, const GOptOptions& opt) {
    tmpl.validate();
    if (!(opt.g_step > 0) || !(opt.ramp_step > 0) || opt.g_max < opt.g_min)
        throw std::invalid_argument("invalid g-optimization grid");
    GOptimizationCurve curve;
    curve.eta = tmpl.eta;

    const int ng = static_cast<int>(std::floor((opt.g_max - opt.g_min) / opt.g_step + 1e-9)) + 1;
    int best_est = -1;
    for (int i = 0; i < ng; ++i) {
        GSample s;
        s.g_b = opt.g_min + i * opt.g_step;
        DeviceConfig dev = tmpl;
        dev.g_b = s.g_b;
        for (double tr = opt.ramp_step; tr <= opt.ramp_max + 1e-9; tr += opt.ramp_step) {
            double f;
            try {
                f = f_ave_from_f11(cz_min_fidelity_estimate(dev, CZPulseParams::sigma_for_ramp(tr), tr).f11_est);
            } catch (const std::invalid_argument&) {
                break;  // coupling too strong for the perturbative estimate
            }
            if (f >= opt.target) {
                s.t_ramp_est = tr;
                s.t_gate_est = sudden_limit_ton(s.g_b) + tr;
                break;
            }
        }
        if (s.t_ramp_est > 0 && (best_est < 0 || s.t_gate_est < curve.samples[best_est].t_gate_est))
            best_est = static_cast<int>(curve.samples.size());
        curve.samples.push_back(s);
    }
    if (best_est < 0) {
        curve.reachable = false;
        return curve;
    }

    int best = best_est;
    if (opt.confirm) {
        best = -1;
        for (auto& s : curve.samples) {
            if (s.t_ramp_est <= 0 || std::abs(s.g_b - curve.samples[best_est].g_b) > opt.confirm_window + 1e-12)
                continue;
            DeviceConfig dev = tmpl;
            dev.g_b = s.g_b;
            CZSimulator sim(single_qubit_device(dev, 0), 0, opt.gate);
            auto attempt = [&](double tr) {
                OptimizedGate og;
                try {
                    og = optimize_cz(sim, CZPulseParams::sigma_for_ramp(tr), tr, opt.gate);
                } catch (const std::runtime_error&) {
                    return false;
                }
                if (og.report.f_ave < opt.target) return false;
                s.confirmed = true;
                s.t_ramp = tr;
                s.t_on = og.pulse.t_on;
                s.t_gate = og.pulse.t_gate();
                s.f_ave = og.report.f_ave;
                return true;
            };
            // confirm the estimated ramp, stepping up if the simulation falls short
            double tr = s.t_ramp_est;
            for (int k = 0; k < 40 && !attempt(tr); ++k) tr += opt.confirm_step;
            if (!s.confirmed) continue;
            const int idx = static_cast<int>(&s - curve.samples.data());
            if (best < 0 || s.t_gate < curve.samples[best].t_gate) best = idx;
        }
        if (best < 0) {
            curve.reachable = false;
            best = best_est;
        }
    }
    curve.best_g = curve.samples[best].g_b;
    curve.recommended_g = std::round(curve.best_g / opt.round_to) * opt.round_to;
    return curve;
}

}  // namespace qvn
