#pragma once

#include "qvn/device.hpp"

#include <stdexcept>

namespace qvn {

class NonDispersiveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct EigenBasis {
    Eigen::VectorXd energies;       // rad/ns, shifted so the all-ground state sits at 0
    Eigen::MatrixXd vectors;        // eigencolumns in the bare basis
    std::vector<int> assignment;    // bare index -> eigen column
    std::vector<double> overlaps;   // |<bare|assigned>|^2 per bare index
    double ground_shift = 0.0;      // energy removed from the raw spectrum
    std::vector<double> idle_freqs;

    Eigen::VectorXd state(const ExcitationBasis& b, const Label& l) const {
        return vectors.col(assignment.at(b.index(l)));
    }
    double energy(const ExcitationBasis& b, const Label& l) const {
        return energies(assignment.at(b.index(l)));
    }
};

struct LabelOptions {
    // labels whose dominant overlap falls to or below this are reported; 0 disables the check
    double min_overlap = 0.5;
    // labels the check applies to; empty means every label
    std::vector<Label> check;
};

// Dense diagonalization with maximum-overlap labelling.
EigenBasis diagonalize_idle(const Eigen::MatrixXd& h_idle, const ExcitationBasis& basis,
                            const LabelOptions& opt = {});
EigenBasis diagonalize_idle(const Eigen::MatrixXcd& h_idle, const ExcitationBasis& basis,
                            const LabelOptions& opt = {});

// Idle eigenbasis of a model at the given qubit frequencies.
EigenBasis idle_basis(const QvnModel& model, const std::vector<double>& qubit_freqs,
                      const LabelOptions& opt = {});

// S_ab = -i dH_ab / (E_a - E_b)
Eigen::MatrixXcd first_order_generator(const Eigen::VectorXd& h0_diag, const Eigen::MatrixXcd& dh,
                                       const ExcitationBasis* basis = nullptr);

// A single dressed eigenvector of a large sparse Hamiltonian, found by shifted
// inverse iteration from the bare state; phase fixed so the bare amplitude is positive.
struct DressedState {
    Eigen::VectorXd vector;
    double energy = 0.0;
    double overlap = 0.0;
};
DressedState dressed_state(const Eigen::SparseMatrix<double>& h, const ExcitationBasis& basis,
                           const Label& label, double tol = 1e-13);

}  // namespace qvn
