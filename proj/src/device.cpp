#include "qvn/device.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace qvn {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

// off-diagonal magnitude of the quadrature operator: Y = i*s, s(n+1,n) = sqrt(n+1)
double quad_s(int row, int col) {
    if (row == col + 1) return std::sqrt(static_cast<double>(row));
    if (col == row + 1) return -std::sqrt(static_cast<double>(col));
    return 0.0;
}

double qubit_level_energy(int n, double eps, double eta, double eta_p) {
    switch (n) {
        case 0: return 0.0;
        case 1: return eps;
        case 2: return 2.0 * eps - eta;
        case 3: return 3.0 * eps - eta_p;
        default: throw std::invalid_argument("qubit level above 3 is not modelled");
    }
}

// the part of a qubit level energy that does not scale with eps
double qubit_level_offset(int n, double eta, double eta_p) {
    return qubit_level_energy(n, 0.0, eta, eta_p);
}

}  // namespace

void DeviceConfig::validate() const {
    require(n_qubits >= 1, "n_qubits must be >= 1");
    require(static_cast<int>(memory_freqs.size()) == n_qubits,
            "memory_freqs must list one frequency per qubit");
    require(qubit_freqs.empty() || static_cast<int>(qubit_freqs.size()) == n_qubits,
            "qubit_freqs must list one frequency per qubit");
    for (double f : memory_freqs) require(f > 0, "memory_freqs must be positive");
    for (double f : qubit_freqs) require(f > 0, "qubit_freqs must be positive");
    require(bus_freq > 0, "bus_freq must be positive");
    require(park_freq > 0, "park_freq must be positive");
    require(off_freq > 0, "off_freq must be positive");
    require(g_m >= 0, "g_m must be >= 0");
    require(g_b >= 0, "g_b must be >= 0");
    require(eta >= 0, "eta must be >= 0");
    if (eta2) require(*eta2 >= 0, "eta2 must be >= 0");
    std::set<double> uniq(memory_freqs.begin(), memory_freqs.end());
    require(uniq.size() == memory_freqs.size(), "memory_freqs must be mutually distinct");
}

std::vector<double> DeviceConfig::parked() const {
    return std::vector<double>(n_qubits, park_freq);
}

std::vector<double> DeviceConfig::idle_with(int k) const {
    auto f = parked();
    f.at(k) = off_freq;
    return f;
}

DeviceConfig DeviceConfig::defaults(double eta, double g_b) {
    DeviceConfig c;
    c.n_qubits = 4;
    c.memory_freqs = {8.3, 8.2, 8.1, 8.0};
    c.bus_freq = 6.5;
    c.g_m = 0.1;
    c.g_b = g_b;
    c.eta = eta;
    c.park_freq = 10.0;
    c.off_freq = 7.5;
    return c;
}

int ExcitationBasis::index(const Label& l) const {
    auto it = index_of.find(l);
    if (it == index_of.end()) throw std::out_of_range("label not in basis: " + label_string(l));
    return it->second;
}

ExcitationBasis enumerate_basis(int mode_count, int levels, int max_excitations) {
    require(mode_count >= 1, "mode_count must be >= 1");
    require(levels >= 2, "levels_per_mode must be >= 2");
    require(max_excitations >= 0, "max_total_excitations must be >= 0");
    ExcitationBasis b;
    b.mode_count = mode_count;
    b.levels = levels;
    b.max_excitations = max_excitations;

    // odometer over occupations, last mode fastest; lexicographic order
    Label cur(mode_count, 0);
    int total = 0;
    while (true) {
        if (total <= max_excitations) {
            b.index_of[cur] = static_cast<int>(b.labels.size());
            b.labels.push_back(cur);
        }
        int k = mode_count - 1;
        while (k >= 0) {
            if (cur[k] + 1 < levels && total + 1 <= max_excitations) {
                ++cur[k];
                ++total;
                break;
            }
            total -= cur[k];
            cur[k] = 0;
            --k;
        }
        if (k < 0) break;
    }
    return b;
}

std::string label_string(const Label& l) {
    std::ostringstream os;
    os << '|';
    for (int v : l) os << v;
    os << '>';
    return os.str();
}

Eigen::MatrixXcd y_coupling_matrix(int levels) {
    if (levels != 3 && levels != 4)
        throw std::invalid_argument("y_coupling_matrix supports 3 or 4 levels");
    Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(levels, levels);
    for (int r = 0; r < levels; ++r)
        for (int c = 0; c < levels; ++c)
            y(r, c) = std::complex<double>(0.0, quad_s(r, c));
    return y;
}

QvnModel build_qvn_model(const DeviceConfig& config, const ModelOptions& opt) {
    config.validate();
    require(opt.levels >= 2 && opt.levels <= 4, "levels_per_mode must be 2..4");
    QvnModel m;
    m.config = config;
    m.rotating_wave = opt.rotating_wave;
    m.basis = enumerate_basis(config.mode_count(), opt.levels, opt.max_excitations);
    const int n = config.n_qubits;
    const int dim = m.basis.dim();
    const double eta = ang(config.eta);
    const double eta_p = ang(config.eta_prime());

    m.number.assign(n, Eigen::VectorXd::Zero(dim));
    std::vector<Eigen::Triplet<double>> trip;

    struct Bond { int a, b; double g; };
    std::vector<Bond> bonds;
    for (int i = 0; i < n; ++i) {
        if (config.g_m > 0) bonds.push_back({config.qubit_mode(i), config.memory_mode(i), ang(config.g_m)});
        if (config.g_b > 0) bonds.push_back({config.qubit_mode(i), config.bus_mode(), ang(config.g_b)});
    }

    for (int idx = 0; idx < dim; ++idx) {
        const Label& l = m.basis.labels[idx];
        double diag = 0.0;
        for (int i = 0; i < n; ++i) {
            diag += qubit_level_offset(l[config.qubit_mode(i)], eta, eta_p);
            m.number[i](idx) = l[config.qubit_mode(i)];
        }
        for (int i = 0; i < n; ++i) diag += ang(config.memory_freqs[i]) * l[config.memory_mode(i)];
        diag += ang(config.bus_freq) * l[config.bus_mode()];
        trip.emplace_back(idx, idx, diag);

        for (const auto& bd : bonds) {
            for (int da : {-1, 1}) {
                for (int db : {-1, 1}) {
                    if (opt.rotating_wave && da == db) continue;
                    Label t = l;
                    t[bd.a] += da;
                    t[bd.b] += db;
                    if (t[bd.a] < 0 || t[bd.b] < 0) continue;
                    auto it = m.basis.index_of.find(t);
                    if (it == m.basis.index_of.end()) continue;
                    // <t| Y(x)Y |l> = (i s)(i s) = -s s
                    double v = -bd.g * quad_s(t[bd.a], l[bd.a]) * quad_s(t[bd.b], l[bd.b]);
                    trip.emplace_back(it->second, idx, v);
                }
            }
        }
    }
    m.fixed.resize(dim, dim);
    m.fixed.setFromTriplets(trip.begin(), trip.end());
    return m;
}

Eigen::MatrixXd QvnModel::dense(const std::vector<double>& qubit_freqs) const {
    Eigen::MatrixXd h = Eigen::MatrixXd(fixed);
    for (size_t k = 0; k < number.size(); ++k) h.diagonal() += ang(qubit_freqs.at(k)) * number[k];
    return h;
}

Eigen::SparseMatrix<double> QvnModel::sparse(const std::vector<double>& qubit_freqs) const {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(dim());
    for (size_t k = 0; k < number.size(); ++k) d += ang(qubit_freqs.at(k)) * number[k];
    Eigen::SparseMatrix<double> h = fixed;
    Eigen::SparseMatrix<double> dm(dim(), dim());
    std::vector<Eigen::Triplet<double>> t;
    for (int i = 0; i < dim(); ++i) t.emplace_back(i, i, d(i));
    dm.setFromTriplets(t.begin(), t.end());
    return h + dm;
}

Eigen::MatrixXcd build_qvn_hamiltonian(const DeviceConfig& config,
                                       const std::vector<double>& qubit_freqs,
                                       const ExcitationBasis& basis) {
    require(static_cast<int>(qubit_freqs.size()) == config.n_qubits,
            "qubit_freqs length must equal n_qubits");
    require(basis.mode_count == config.mode_count(), "basis mode count does not match config");
    ModelOptions opt;
    opt.levels = basis.levels;
    opt.max_excitations = basis.max_excitations;
    QvnModel m = build_qvn_model(config, opt);
    return m.dense(qubit_freqs).cast<std::complex<double>>();
}

Eigen::MatrixXcd build_qubit_bus_hamiltonian(double eps, double eta, double bus, double g_b,
                                             int max_excitations) {
    require(eps > 0 && bus > 0, "frequencies must be positive");
    require(eta >= 0 && g_b >= 0, "eta and g_b must be >= 0");
    ExcitationBasis b = enumerate_basis(2, 3, max_excitations);
    const int dim = b.dim();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
        const Label& l = b.labels[i];
        h(i, i) = ang(qubit_level_energy(l[0], eps, eta, 0.0)) + ang(bus) * l[1];
        for (int j = 0; j < dim; ++j) {
            const Label& r = b.labels[j];
            double s = quad_s(l[0], r[0]) * quad_s(l[1], r[1]);
            if (s != 0.0) h(i, j) = -ang(g_b) * s;
        }
    }
    return h.cast<std::complex<double>>();
}

DeviceConfig single_qubit_device(const DeviceConfig& config, int k) {
    DeviceConfig c = config;
    c.n_qubits = 1;
    c.memory_freqs = {config.memory_freqs.at(k)};
    c.qubit_freqs = config.qubit_freqs.empty() ? std::vector<double>{}
                                               : std::vector<double>{config.qubit_freqs.at(k)};
    return c;
}

}  // namespace qvn
