#pragma once

#include "qvn/device.hpp"
#include "qvn/eigenbasis.hpp"

#include <functional>

namespace qvn {

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Qubit frequencies (GHz) as a function of time (ns); writes n_qubits values.
using FreqSchedule = std::function<void(double t, double* eps)>;

enum class Integrator {
    Magnus4,            // commutator-free 4th-order Magnus, Chebyshev exponentials
    PiecewiseConstant,  // midpoint-sampled steps, dense matrix exponential
};

struct PropagatorOptions {
    Integrator method = Integrator::Magnus4;
    double fine_step = 0.04;    // ns, inside ramp zones
    double coarse_step = 0.2;   // ns, elsewhere
    double dt = 0.001;          // ns, piecewise-constant step
    double cheb_tol = 1e-15;
    int dense_limit = 800;      // parity sectors larger than this use sparse storage
};

// Time grid with fine zones [a, b] and coarse steps elsewhere.
std::vector<double> zoned_grid(double t0, double t1, const std::vector<std::pair<double, double>>& fine_zones,
                               double fine_step, double coarse_step);
std::vector<double> uniform_grid(double t0, double t1, double step);

// Propagates state columns under H(t) = fixed + sum_k eps_k(t) N_k - shift.
// Blocks of the parity decomposition are handled independently.
class Propagator {
public:
    explicit Propagator(const QvnModel& model, const PropagatorOptions& opt = {});

    const QvnModel& model() const { return model_; }
    const PropagatorOptions& options() const { return opt_; }

    // columns are bare-basis states; returns the evolved columns
    Eigen::MatrixXcd evolve(const Eigen::MatrixXcd& psi0, const FreqSchedule& freqs,
                            const std::vector<double>& grid, double shift = 0.0) const;

    // full propagator, bare basis
    Eigen::MatrixXcd evolve_operator(const FreqSchedule& freqs, const std::vector<double>& grid,
                                     double shift = 0.0) const;

    int sector_count() const { return static_cast<int>(sectors_.size()); }

private:
    struct Sector {
        std::vector<int> idx;
        bool sparse = false;
        Eigen::MatrixXd dense;
        Eigen::SparseMatrix<double, Eigen::RowMajor> csr;
        Eigen::VectorXd diag;                 // diagonal of the fixed part
        Eigen::VectorXd radius;               // Gershgorin radii of the fixed part
        std::vector<Eigen::VectorXd> number;  // restricted occupation diagonals
    };

    void evolve_sector(const Sector& s, Eigen::MatrixXd& x, const FreqSchedule& freqs,
                       const std::vector<double>& grid, double shift) const;
    void evolve_sector_pwc(const Sector& s, Eigen::MatrixXd& x, const FreqSchedule& freqs,
                           const std::vector<double>& grid, double shift) const;

    QvnModel model_;
    PropagatorOptions opt_;
    std::vector<Sector> sectors_;
};

// exp(-i h t) for a real symmetric h, by scaling and squaring (Pade) on -i h t
Eigen::MatrixXcd expm_step(const Eigen::MatrixXd& h, double t);

struct ProjectedGate {
    std::vector<Label> labels;
    Eigen::MatrixXcd matrix;
    double leakage = 0.0;  // order - Tr(U^dag U)
};

// <eig_end(a)| U |eig_start(b)> for a full bare-basis propagator
ProjectedGate project(const Eigen::MatrixXcd& u, const EigenBasis& eig_start, const EigenBasis& eig_end,
                      const ExcitationBasis& basis, const std::vector<Label>& labels);
ProjectedGate project(const Eigen::MatrixXcd& u, const EigenBasis& eig, const ExcitationBasis& basis,
                      const std::vector<Label>& labels);

// Same, but only the needed columns are propagated.
ProjectedGate simulate_projected(const Propagator& prop, const FreqSchedule& freqs,
                                 const std::vector<double>& grid, const EigenBasis& eig_start,
                                 const EigenBasis& eig_end, const std::vector<Label>& labels);

// Removes trivial phase accumulation: amplitude of each bare label picks up
// exp(+i 2pi sum_k n_k ref_k duration).
Eigen::MatrixXcd frame_unwind(const Eigen::MatrixXcd& states, const ExcitationBasis& basis,
                              const std::vector<double>& reference_freqs, double duration);

}  // namespace qvn
