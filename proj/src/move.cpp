#include "qvn/gate_optimizer.hpp"

#include <cmath>

namespace qvn {

MoveSimulator::MoveSimulator(const DeviceConfig& device, const MoveSpec& spec, const GateOptions& opt)
    : device_(device), spec_(spec), opt_(opt) {
    device_.validate();
    const int k = spec.qubit;
    if (k < 0 || k >= device_.n_qubits) throw std::invalid_argument("MoveSimulator: qubit index out of range");
    const int q = device_.qubit_mode(k);
    const int other = spec.src_mode == q ? spec.dst_mode : spec.src_mode;
    if ((spec.src_mode != q && spec.dst_mode != q) || spec.src_mode == spec.dst_mode ||
        (other != device_.memory_mode(k) && other != device_.bus_mode()))
        throw std::invalid_argument("MoveSimulator: a MOVE pairs a qubit with its memory or the bus");
    if (!(spec.sigma > 0) || !(spec.t_ramp > 0)) throw std::invalid_argument("MoveSimulator: sigma and t_ramp must be positive");

    omega_start_ = spec.src_mode == q ? device_.off_freq : device_.park_freq;
    omega_end_ = spec.dst_mode == q ? device_.off_freq : device_.park_freq;

    QvnModel m = build_qvn_model(device_, opt_.model);
    prop_ = std::make_unique<Propagator>(m, opt_.propagator);
    Label vac(device_.mode_count(), 0), src = vac, dst = vac;
    src[spec.src_mode] = 1;
    dst[spec.dst_mode] = 1;
    labels_ = {vac, src, dst};
    // a parked qubit is degenerate with the other parked qubits, so only the
    // occupied label of each end is checked
    LabelOptions lo_start, lo_end;
    lo_start.check = {vac, src};
    lo_end.check = {vac, dst};
    auto f0 = device_.parked(), f1 = device_.parked();
    f0[k] = omega_start_;
    f1[k] = omega_end_;
    idle_start_ = idle_basis(prop_->model(), f0, lo_start);
    idle_end_ = idle_basis(prop_->model(), f1, lo_end);
}

double MoveSimulator::channel_freq() const {
    const int q = device_.qubit_mode(spec_.qubit);
    const int other = spec_.src_mode == q ? spec_.dst_mode : spec_.src_mode;
    return other == device_.bus_mode() ? device_.bus_freq : device_.memory_freqs.at(spec_.qubit);
}

double MoveSimulator::channel_coupling() const {
    const int q = device_.qubit_mode(spec_.qubit);
    const int other = spec_.src_mode == q ? spec_.dst_mode : spec_.src_mode;
    return other == device_.bus_mode() ? device_.g_b : device_.g_m;
}

ExcursionParams MoveSimulator::pulse(double omega_on, double t_on) const {
    ExcursionParams p;
    p.omega_start = omega_start_;
    p.omega_end = omega_end_;
    p.omega_on = omega_on;
    p.sigma = spec_.sigma;
    p.t_ramp = spec_.t_ramp;
    p.t_on = t_on;
    return p;
}

FreqSchedule MoveSimulator::schedule(const ExcursionParams& p) const {
    const int n = device_.n_qubits;
    const int k = spec_.qubit;
    const double park = device_.park_freq;
    return [p, n, k, park](double t, double* eps) {
        for (int i = 0; i < n; ++i) eps[i] = park;
        eps[k] = excursion_profile(p, t);
    };
}

std::vector<double> MoveSimulator::grid(const ExcursionParams& p) const {
    const double tg = p.t_gate();
    return zoned_grid(0.0, tg, {{0.0, p.t_ramp}, {tg - p.t_ramp, tg}}, opt_.propagator.fine_step,
                      opt_.propagator.coarse_step);
}

ProjectedGate MoveSimulator::simulate(const ExcursionParams& p) const {
    if (!(p.t_on > 0)) throw std::invalid_argument("MOVE t_on must be positive");
    return simulate_projected(*prop_, schedule(p), grid(p), idle_start_, idle_end_, labels_);
}

OptimizedMove optimize_move(const MoveSimulator& sim, const GateOptions& opt) {
    const double g = sim.channel_coupling();
    const double ramp = sim.spec().t_ramp;
    // pi / (2 g) swap time; a dead channel gets an arbitrary seed and fails the transfer test
    const double t_seed = g > 0 ? kPi / (2.0 * ang(g)) : ramp;
    const double wf = 0.01, tf = 0.1;
    int evals = 0;
    auto objective = [&](const std::vector<double>& x) {
        const double t_on = x[1] * tf;
        if (t_on <= 0) return 1.0 + std::abs(t_on);
        ++evals;
        ProjectedGate u = sim.simulate(sim.pulse(x[0] * wf, t_on));
        return 1.0 - std::norm(u.matrix(2, 1));
    };
    MinimizeOptions mo;
    mo.max_evaluations = opt.max_evaluations;
    mo.x_tol = 1e-4;
    auto res = nelder_mead(objective, {sim.channel_freq() / wf, t_seed / tf}, {1.0, 1.0}, mo);
    if (opt.restart) {
        auto res2 = nelder_mead(objective, res.x, {0.2, 0.2}, mo);
        if (res2.f <= res.f) res = res2;
    }

    OptimizedMove out;
    out.spec = sim.spec();
    out.pulse = sim.pulse(res.x[0] * wf, res.x[1] * tf);
    ProjectedGate u = sim.simulate(out.pulse);
    out.transfer = std::norm(u.matrix(2, 1));
    out.phase = wrap_angle(std::arg(u.matrix(2, 1)) - std::arg(u.matrix(0, 0)));
    // population leaving {vacuum, destination} from {vacuum, source}
    out.leakage = 2.0 - (std::norm(u.matrix(0, 0)) + std::norm(u.matrix(2, 0)) + std::norm(u.matrix(0, 1)) +
                         std::norm(u.matrix(2, 1)));
    out.evaluations = evals;
    out.converged = res.converged && out.transfer >= 0.99;
    return out;
}

}  // namespace qvn
