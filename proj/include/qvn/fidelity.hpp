#pragma once

#include "qvn/propagator.hpp"

namespace qvn {

struct ZAngles {
    double gamma1 = 0.0;  // qubit
    double gamma2 = 0.0;  // bus
    ZAngles wrapped() const;
};

struct FidelityReport {
    double f_ave = 0.0;
    double f_min11 = 0.0;
    double leakage = 0.0;
    ZAngles angles;
};

Eigen::Matrix4cd cz_target();

// (Tr U^dag U + |Tr target^dag U|^2) / (N + N^2)
double f_ave(const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& target);
double f_ave(const ProjectedGate& g, const Eigen::MatrixXcd& target);

// |<eig(l)|U|eig(l)>|^2 for the worst-case state, l defaults to q1 = b = 1
double f_min11(const Eigen::MatrixXcd& u_full, const EigenBasis& eig, const ExcitationBasis& basis);
double f_min11(const Eigen::MatrixXcd& u_full, const EigenBasis& eig, const ExcitationBasis& basis,
               const Label& worst);

// diagonal z rotation u(g1, g2) in the order 00, 01, 10, 11 (qubit, bus), including the global phase
Eigen::Matrix4cd z_rotation(const ZAngles& a);
ProjectedGate apply_z(const ProjectedGate& g, const ZAngles& a);

ZAngles seed_z_angles(const ProjectedGate& g);

struct ZOptResult {
    ZAngles angles;
    double f_ave = 0.0;
    double seed_f_ave = 0.0;
};
ZOptResult optimize_z_angles(const ProjectedGate& g, const Eigen::MatrixXcd& target);

double wrap_angle(double a);  // into (-pi, pi]

}  // namespace qvn
