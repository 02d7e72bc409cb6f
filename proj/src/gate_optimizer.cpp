#include "qvn/gate_optimizer.hpp"

#include <algorithm>
#include <cmath>

namespace qvn {

CZSimulator::CZSimulator(const DeviceConfig& device, int qubit, const GateOptions& opt)
    : device_(device), qubit_(qubit), opt_(opt) {
    device_.validate();
    if (qubit < 0 || qubit >= device.n_qubits) throw std::invalid_argument("CZSimulator: qubit index out of range");
    QvnModel m = build_qvn_model(device_, opt_.model);
    prop_ = std::make_unique<Propagator>(m, opt_.propagator);
    const int modes = device_.mode_count();
    Label l00(modes, 0), l01(modes, 0), l10(modes, 0), l11(modes, 0);
    l01[device_.bus_mode()] = 1;
    l10[device_.qubit_mode(qubit)] = 1;
    l11[device_.bus_mode()] = 1;
    l11[device_.qubit_mode(qubit)] = 1;
    labels_ = {l00, l01, l10, l11};
    // parked qubits share one frequency, so only the computational labels are checked
    LabelOptions lo;
    lo.check = labels_;
    idle_ = idle_basis(prop_->model(), device_.idle_with(qubit), lo);
}

FreqSchedule CZSimulator::schedule(const CZPulseParams& p) const {
    const int n = device_.n_qubits;
    const int k = qubit_;
    const double park = device_.park_freq;
    return [p, n, k, park](double t, double* eps) {
        for (int i = 0; i < n; ++i) eps[i] = park;
        eps[k] = cz_profile_unchecked(p, t);
    };
}

std::vector<double> CZSimulator::grid(const CZPulseParams& p) const {
    const double tg = p.t_gate();
    return zoned_grid(0.0, tg, {{0.0, p.t_ramp}, {tg - p.t_ramp, tg}}, opt_.propagator.fine_step,
                      opt_.propagator.coarse_step);
}

ProjectedGate CZSimulator::simulate(const CZPulseParams& p) const {
    p.validate();
    return simulate_projected(*prop_, schedule(p), grid(p), idle_, idle_, labels_);
}

Eigen::MatrixXcd CZSimulator::evolution(const CZPulseParams& p) const {
    p.validate();
    return prop_->evolve_operator(schedule(p), grid(p), idle_.ground_shift);
}

FidelityReport CZSimulator::evaluate(const CZPulseParams& p) const {
    ProjectedGate g = simulate(p);
    ZOptResult z = optimize_z_angles(g, cz_target());
    FidelityReport r;
    r.f_ave = z.f_ave;
    r.angles = z.angles;
    r.leakage = g.leakage;
    r.f_min11 = std::norm(g.matrix(3, 3));
    return r;
}

double stage_one_cost(const ProjectedGate& g) {
    const auto& u = g.matrix;
    double c = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) c += std::abs(std::abs(u(i, j)) - (i == j ? 1.0 : 0.0));
    double ph = std::arg(u(0, 0) * u(3, 3) / (u(1, 1) * u(2, 2)));
    c += std::abs(wrap_angle(ph - kPi));
    return c;
}

StageOneResult optimize_cz_stage1(const CZSimulator& sim, double sigma, double t_ramp,
                                  std::optional<double> omega_on) {
    const auto& dev = sim.model().config;
    CZPulseParams p;
    p.omega_off = dev.off_freq;
    p.omega_on = omega_on ? *omega_on : dev.bus_freq + dev.eta;
    p.sigma = sigma;
    p.t_ramp = t_ramp;
    const double ts = sudden_limit_ton(dev.g_b);

    StageOneResult r;
    auto cost_at = [&](double t_on) {
        p.t_on = t_on;
        return stage_one_cost(sim.simulate(p));
    };
    // coarse scan from just below the sudden-limit time upward
    const double lo = std::max(0.8 * ts, 0.1), hi = ts + t_ramp + 2.0;
    const double step = 0.25;
    double best_t = lo, best_c = 1e300;
    for (double t = lo; t <= hi + 1e-9; t += step) {
        double c = cost_at(t);
        r.curve.emplace_back(t, c);
        if (c < best_c) {
            best_c = c;
            best_t = t;
        }
    }
    if (best_t <= lo + 1e-9 || best_t >= hi - step + 1e-9) {
        std::string msg = "stage 1: no interior minimum in t_on scan; cost curve:";
        for (auto& [t, c] : r.curve) msg += " (" + std::to_string(t) + ", " + std::to_string(c) + ")";
        throw std::runtime_error(msg);
    }
    // golden-section refinement inside the bracketing cell
    double a = best_t - step, b = best_t + step;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = cost_at(x1), f2 = cost_at(x2);
    while (b - a > 1e-4) {
        if (f1 < f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - gr * (b - a); f1 = cost_at(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + gr * (b - a); f2 = cost_at(x2);
        }
    }
    r.t_on = 0.5 * (a + b);
    p.t_on = r.t_on;
    ProjectedGate g = sim.simulate(p);
    r.cost = stage_one_cost(g);
    r.seeds = seed_z_angles(g);
    return r;
}

OptimizedGate optimize_cz(const CZSimulator& sim, double sigma, double t_ramp, const GateOptions& opt) {
    const auto& dev = sim.model().config;
    StageOneResult s1 = optimize_cz_stage1(sim, sigma, t_ramp);

    CZPulseParams p;
    p.omega_off = dev.off_freq;
    p.sigma = sigma;
    p.t_ramp = t_ramp;
    // scaled coordinates: 10 MHz and 0.1 ns per unit
    const double wf = 0.01, tf = 0.1;
    int evals = 0;
    auto objective = [&](const std::vector<double>& x) {
        p.omega_on = x[0] * wf;
        p.t_on = x[1] * tf;
        if (p.t_on <= 0) return 1.0;
        ++evals;
        return 1.0 - sim.evaluate(p).f_ave;
    };
    MinimizeOptions mo;
    mo.max_evaluations = opt.max_evaluations;
    mo.x_tol = 1e-4;
    std::vector<double> x0{(dev.bus_freq + dev.eta) / wf, s1.t_on / tf};
    auto res = nelder_mead(objective, x0, {0.5, 1.0}, mo);
    if (opt.restart) {
        auto res2 = nelder_mead(objective, res.x, {0.1, 0.2}, mo);
        res2.evaluations += res.evaluations;
        if (res2.f <= res.f) res = res2;
        else res.evaluations = res2.evaluations;
    }

    OptimizedGate out;
    out.pulse = p;
    out.pulse.omega_on = res.x[0] * wf;
    out.pulse.t_on = res.x[1] * tf;
    out.gate = sim.simulate(out.pulse);
    out.report = sim.evaluate(out.pulse);
    out.angles = out.report.angles;
    out.evaluations = evals;
    out.converged = res.converged;
    return out;
}

ProjectedGate rotating_frame(const ProjectedGate& g, const EigenBasis& idle, const ExcitationBasis& basis,
                             double t_gate) {
    ProjectedGate out = g;
    for (size_t a = 0; a < g.labels.size(); ++a)
        out.matrix.row(static_cast<int>(a)) *= std::polar(1.0, idle.energy(basis, g.labels[a]) * t_gate);
    return out;
}

ProjectedGate local_clock_frame(const ProjectedGate& g, const EigenBasis& idle, const ExcitationBasis& basis,
                                double t_gate) {
    const int modes = basis.mode_count;
    const Label vac(modes, 0);
    const double e0 = idle.energy(basis, vac);
    std::vector<double> clock(modes, 0.0);
    ProjectedGate out = g;
    for (size_t a = 0; a < g.labels.size(); ++a) {
        double e = e0;
        for (int k = 0; k < modes; ++k) {
            if (g.labels[a][k] == 0) continue;
            if (clock[k] == 0.0) {
                Label one = vac;
                one[k] = 1;
                clock[k] = idle.energy(basis, one) - e0;
            }
            e += g.labels[a][k] * clock[k];
        }
        out.matrix.row(static_cast<int>(a)) *= std::polar(1.0, e * t_gate);
    }
    return out;
}

PulseErrorResult simulate_pulse_error(const CZSimulator& sim, const CZPulseParams& pulse, double dt_on,
                                      double domega_on) {
    const auto& basis = sim.model().basis;
    auto rotated = [&](const CZPulseParams& p) { return local_clock_frame(sim.simulate(p), sim.idle(), basis, p.t_gate()); };
    PulseErrorResult r;
    ProjectedGate ref = rotated(pulse);
    ZOptResult z = optimize_z_angles(ref, cz_target());
    r.f_ref = z.f_ave;
    CZPulseParams q = pulse;
    q.t_on += dt_on;
    q.omega_on += domega_on;
    ProjectedGate g = rotated(q);
    r.f_uncompensated = f_ave(apply_z(g, z.angles), cz_target());
    r.f_compensated = optimize_z_angles(g, cz_target()).f_ave;
    return r;
}

}  // namespace qvn
