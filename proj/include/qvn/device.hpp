#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qvn {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

// GHz (as w/2pi) -> rad/ns
inline double ang(double ghz) { return kTwoPi * ghz; }

using Label = std::vector<int>;

struct DeviceConfig {
    int n_qubits = 4;
    std::vector<double> qubit_freqs;   // GHz; empty means all parked
    std::vector<double> memory_freqs;  // GHz
    double bus_freq = 6.5;
    double g_m = 0.1;
    double g_b = 0.045;
    double eta = 0.3;
    std::optional<double> eta2;        // second anharmonicity, defaults to 3*eta
    double park_freq = 10.0;
    double off_freq = 7.5;

    double eta_prime() const { return eta2 ? *eta2 : 3.0 * eta; }
    int mode_count() const { return 2 * n_qubits + 1; }
    int qubit_mode(int i) const { return i; }
    int memory_mode(int i) const { return n_qubits + i; }
    int bus_mode() const { return 2 * n_qubits; }

    // throws std::invalid_argument naming the offending field
    void validate() const;

    // qubit frequencies with every qubit parked
    std::vector<double> parked() const;
    // q_k at off_freq, the rest parked
    std::vector<double> idle_with(int k) const;

    static DeviceConfig defaults(double eta = 0.3, double g_b = 0.045);
};

struct ExcitationBasis {
    int mode_count = 0;
    int levels = 4;
    int max_excitations = 3;
    std::vector<Label> labels;
    std::map<Label, int> index_of;

    int dim() const { return static_cast<int>(labels.size()); }
    int index(const Label& l) const;  // throws if absent
    bool contains(const Label& l) const { return index_of.count(l) > 0; }
};

ExcitationBasis enumerate_basis(int mode_count, int levels = 4, int max_excitations = 3);

std::string label_string(const Label& l);

// Quadrature operator of the truncated oscillator (levels 3 or 4).
Eigen::MatrixXcd y_coupling_matrix(int levels);

// H(eps) = fixed + sum_k (2pi eps_k) * number[k]; every piece in rad/ns.
// Y(x)Y couplings are real, so the whole operator is real symmetric.
struct QvnModel {
    DeviceConfig config;
    ExcitationBasis basis;
    Eigen::SparseMatrix<double> fixed;
    std::vector<Eigen::VectorXd> number;  // qubit occupation diagonals
    bool rotating_wave = false;

    int dim() const { return basis.dim(); }
    Eigen::MatrixXd dense(const std::vector<double>& qubit_freqs) const;
    Eigen::SparseMatrix<double> sparse(const std::vector<double>& qubit_freqs) const;
};

struct ModelOptions {
    int levels = 4;
    int max_excitations = 3;
    bool rotating_wave = false;  // keep only excitation-conserving coupling terms
};

QvnModel build_qvn_model(const DeviceConfig& config, const ModelOptions& opt = {});

// Dense Hermitian matrix at the given qubit frequencies (GHz).
Eigen::MatrixXcd build_qvn_hamiltonian(const DeviceConfig& config,
                                       const std::vector<double>& qubit_freqs,
                                       const ExcitationBasis& basis);

// Single qubit + bus, three levels each, 9x9 (or truncated when max_excitations < 4).
Eigen::MatrixXcd build_qubit_bus_hamiltonian(double eps, double eta, double bus, double g_b,
                                             int max_excitations = 4);

// Reduced device: qubit k, its memory, and the bus (mode order q, m, b).
DeviceConfig single_qubit_device(const DeviceConfig& config, int k);

}  // namespace qvn
