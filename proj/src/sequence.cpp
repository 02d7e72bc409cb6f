#include "qvn/gate_optimizer.hpp"

#include <cmath>
#include <map>

namespace qvn {

using cd = std::complex<double>;

namespace {

// Dressed states of one boundary configuration, computed on demand.
class Boundary {
public:
    Boundary(const QvnModel& model, std::vector<double> freqs)
        : model_(model), freqs_(std::move(freqs)), h_(model.sparse(freqs_)) {}

    const std::vector<double>& freqs() const { return freqs_; }

    const Eigen::VectorXcd& state(const Label& l) { return get(l).first; }
    double energy(const Label& l) { return get(l).second; }

private:
    const QvnModel& model_;
    std::vector<double> freqs_;
    Eigen::SparseMatrix<double> h_;
    std::map<Label, std::pair<Eigen::VectorXcd, double>> cache_;

    const std::pair<Eigen::VectorXcd, double>& get(const Label& l) {
        auto it = cache_.find(l);
        if (it != cache_.end()) return it->second;
        DressedState d = dressed_state(h_, model_.basis, l);
        return cache_.emplace(l, std::make_pair(Eigen::VectorXcd(d.vector.cast<cd>()), d.energy)).first->second;
    }
};

std::vector<double> config_at(const DeviceConfig& dev, int qubit, double freq) {
    auto f = dev.parked();
    f.at(qubit) = freq;
    return f;
}

bool same_config(const std::vector<double>& a, const std::vector<double>& b) {
    for (size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > 1e-12) return false;
    return true;
}

Label single(int modes, int m) {
    Label l(modes, 0);
    l[m] = 1;
    return l;
}

}  // namespace

double SequenceSpec::total_time() const {
    double t = 0.0;
    for (const auto& s : segments) t += s.duration();
    return t;
}

SequenceResult run_sequence(const SequenceSpec& spec, const StateSpec& initial, const StateSpec& ideal) {
    const DeviceConfig& dev = spec.device;
    dev.validate();
    const int modes = dev.mode_count();
    const int nd = static_cast<int>(spec.data_modes.size());

    // boundary configurations must abut
    std::vector<std::vector<double>> bounds;
    bounds.push_back(spec.segments.empty() ? dev.parked()
                                           : config_at(dev, spec.segments[0].qubit, spec.segments[0].pulse.omega_start));
    for (size_t i = 0; i < spec.segments.size(); ++i) {
        const auto& s = spec.segments[i];
        if (s.qubit < 0 || s.qubit >= dev.n_qubits) throw std::invalid_argument("segment qubit out of range");
        if (!same_config(bounds.back(), config_at(dev, s.qubit, s.pulse.omega_start)))
            throw std::invalid_argument("segment " + s.name + " does not start where the previous one ended");
        bounds.push_back(config_at(dev, s.qubit, s.pulse.omega_end));
    }

    QvnModel model = build_qvn_model(dev, spec.model);
    Propagator prop(model, spec.propagator);
    const auto& basis = model.basis;
    const Label vac(modes, 0);

    Boundary start(model, bounds.front());
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(basis.dim());
    for (const auto& [l, a] : initial) psi += a * start.state(l);
    if (psi.norm() == 0.0) throw std::invalid_argument("initial state is empty");
    psi.normalize();

    SequenceResult r;
    std::vector<int> pos = spec.data_modes;
    std::vector<double> theta(nd, 0.0);
    auto qubit_load = [&](const std::vector<int>& p) {
        int c = 0;
        for (int m : p)
            for (int k = 0; k < dev.n_qubits; ++k) c += m == dev.qubit_mode(k);
        return c;
    };
    if (qubit_load(pos) > 1) throw std::invalid_argument("more than one qubit holds data");

    Boundary* cur = &start;
    std::unique_ptr<Boundary> owned;
    for (size_t i = 0; i < spec.segments.size(); ++i) {
        const auto& s = spec.segments[i];
        std::vector<int> next = pos;
        for (int& m : next)
            if (s.src_mode >= 0 && m == s.src_mode) m = s.dst_mode;
        if (qubit_load(next) > 1) throw std::invalid_argument("segment " + s.name + " occupies two qubits");

        // state, vacuum, and one single excitation per data qubit
        Eigen::MatrixXcd cols(basis.dim(), 2 + nd);
        cols.col(0) = psi;
        cols.col(1) = cur->state(vac);
        for (int d = 0; d < nd; ++d) cols.col(2 + d) = cur->state(single(modes, pos[d]));

        const int n = dev.n_qubits, k = s.qubit;
        const double park = dev.park_freq;
        const ExcursionParams p = s.pulse;
        FreqSchedule sched = [p, n, k, park](double t, double* eps) {
            for (int j = 0; j < n; ++j) eps[j] = park;
            eps[k] = excursion_profile(p, t);
        };
        const double tg = p.t_gate();
        auto grid = zoned_grid(0.0, tg, {{0.0, p.t_ramp}, {tg - p.t_ramp, tg}}, spec.propagator.fine_step,
                               spec.propagator.coarse_step);
        // Lab frame relative to the vacuum. The local clocks act on dressed states, so
        // they are applied below as per-data-qubit phases rather than per bare mode.
        Eigen::MatrixXcd out = prop.evolve(cols, sched, grid, cur->energy(vac));

        auto nb = std::make_unique<Boundary>(model, bounds[i + 1]);
        const cd v = nb->state(vac).dot(out.col(1));
        SegmentReport rep;
        rep.name = s.name;
        rep.duration = tg;
        for (int d = 0; d < nd; ++d) {
            const cd t = nb->state(single(modes, next[d])).dot(out.col(2 + d));
            // single-excitation phase relative to the vacuum; undone as a virtual z rotation
            const double phi = std::arg(t / v);
            theta[d] += phi;
            rep.z_angles.push_back(wrap_angle(phi));
            rep.transfer.push_back(std::norm(t));
        }
        r.segments.push_back(rep);
        psi = out.col(0);
        pos = next;
        owned = std::move(nb);
        cur = owned.get();
    }

    cd overlap = 0.0;
    double norm2 = 0.0;
    for (const auto& [l, a] : ideal) {
        double z = 0.0;
        for (int d = 0; d < nd; ++d)
            if (l.at(pos[d]) == 1) z += theta[d];
        overlap += std::conj(a) * cur->state(l).dot(psi) * std::polar(1.0, -z);
        norm2 += std::norm(a);
    }
    if (norm2 == 0.0) throw std::invalid_argument("ideal state is empty");
    r.fidelity = std::norm(overlap) / norm2;
    r.total_time = spec.total_time();
    r.final_state = psi;
    r.data_modes = pos;
    return r;
}

StateSpec memory_ghz(const DeviceConfig& device, bool flipped) {
    Label vac(device.mode_count(), 0), full = vac;
    for (int k = 0; k < device.n_qubits; ++k) full[device.memory_mode(k)] = 1;
    const double a = 1.0 / std::sqrt(2.0);
    return {{vac, a}, {full, flipped ? -a : a}};
}

CZ23Design design_cz23(const DeviceConfig& device, const CZ23Options& opt) {
    device.validate();
    const int a = opt.qubit_a, b = opt.qubit_b;
    if (a == b || a < 0 || b < 0 || a >= device.n_qubits || b >= device.n_qubits)
        throw std::invalid_argument("design_cz23: invalid qubit pair");
    const int qa = device.qubit_mode(a), qb = device.qubit_mode(b);
    const int ma = device.memory_mode(a), mb = device.memory_mode(b), bus = device.bus_mode();

    CZ23Design out;
    auto move = [&](const std::string& name, int k, int src, int dst, double ramp) {
        MoveSpec ms{k, src, dst, CZPulseParams::sigma_for_ramp(ramp), ramp};
        MoveSimulator sim(device, ms, opt.move);
        OptimizedMove om = optimize_move(sim, opt.move);
        out.moves.push_back(om);
        out.spec.segments.push_back({name, k, om.pulse, src, dst});
    };

    move("move m" + std::to_string(b + 1) + "->q" + std::to_string(b + 1), b, mb, qb, opt.memory_ramp);
    move("move q" + std::to_string(b + 1) + "->b", b, qb, bus, opt.bus_ramp);
    move("move m" + std::to_string(a + 1) + "->q" + std::to_string(a + 1), a, ma, qa, opt.memory_ramp);
    {
        CZSimulator sim(device, a, opt.cz);
        out.cz = optimize_cz(sim, opt.cz_sigma, opt.cz_ramp, opt.cz);
        out.spec.segments.push_back({"cz q" + std::to_string(a + 1) + "-b", a, ExcursionParams::from_cz(out.cz.pulse)});
    }
    move("move q" + std::to_string(a + 1) + "->m" + std::to_string(a + 1), a, qa, ma, opt.memory_ramp);
    move("move b->q" + std::to_string(b + 1), b, bus, qb, opt.bus_ramp);
    move("move q" + std::to_string(b + 1) + "->m" + std::to_string(b + 1), b, qb, mb, opt.memory_ramp);

    out.spec.device = device;
    out.spec.model = opt.sequence;
    for (int k = 0; k < device.n_qubits; ++k) out.spec.data_modes.push_back(device.memory_mode(k));
    return out;
}

}  // namespace qvn
