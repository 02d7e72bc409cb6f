#include "qvn/fidelity.hpp"

#include "qvn/minimize.hpp"

#include <cmath>
#include <complex>

namespace qvn {

using cd = std::complex<double>;

double wrap_angle(double a) {
    double w = std::remainder(a, kTwoPi);  // [-pi, pi]
    if (w <= -kPi) w += kTwoPi;
    return w;
}

ZAngles ZAngles::wrapped() const { return {wrap_angle(gamma1), wrap_angle(gamma2)}; }

Eigen::Matrix4cd cz_target() {
    Eigen::Matrix4cd cz = Eigen::Matrix4cd::Identity();
    cz(3, 3) = -1.0;
    return cz;
}

double f_ave(const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& target) {
    if (u.rows() != u.cols() || target.rows() != u.rows() || target.cols() != u.cols())
        throw std::invalid_argument("f_ave: order mismatch");
    const double n = static_cast<double>(u.rows());
    double tr_uu = (u.adjoint() * u).trace().real();
    double ov = std::norm((target.adjoint() * u).trace());
    return (tr_uu + ov) / (n + n * n);
}

double f_ave(const ProjectedGate& g, const Eigen::MatrixXcd& target) { return f_ave(g.matrix, target); }

double f_min11(const Eigen::MatrixXcd& u_full, const EigenBasis& eig, const ExcitationBasis& basis,
               const Label& worst) {
    Eigen::VectorXcd v = eig.state(basis, worst).cast<cd>();
    return std::norm(v.dot(u_full * v));
}

double f_min11(const Eigen::MatrixXcd& u_full, const EigenBasis& eig, const ExcitationBasis& basis) {
    Label l(basis.mode_count, 0);
    l.front() = 1;
    l.back() = 1;
    return f_min11(u_full, eig, basis, l);
}

Eigen::Matrix4cd z_rotation(const ZAngles& a) {
    Eigen::Matrix4cd u = Eigen::Matrix4cd::Zero();
    const cd ph = std::polar(1.0, 0.5 * (a.gamma1 + a.gamma2));
    u(0, 0) = ph;
    u(1, 1) = ph * std::polar(1.0, -a.gamma2);
    u(2, 2) = ph * std::polar(1.0, -a.gamma1);
    u(3, 3) = ph * std::polar(1.0, -(a.gamma1 + a.gamma2));
    return u;
}

ProjectedGate apply_z(const ProjectedGate& g, const ZAngles& a) {
    if (g.matrix.rows() != 4) throw std::invalid_argument("apply_z: order-4 gate expected");
    ProjectedGate out = g;
    out.matrix = z_rotation(a) * g.matrix;
    return out;
}

ZAngles seed_z_angles(const ProjectedGate& g) {
    const auto& u = g.matrix;
    if (u.rows() != 4) throw std::invalid_argument("seed_z_angles: order-4 gate expected");
    for (int i : {0, 1, 2})
        if (std::abs(u(i, i)) < 1e-6) throw std::domain_error("degenerate seed: vanishing diagonal element");
    ZAngles a;
    a.gamma1 = std::arg(u(2, 2)) - std::arg(u(0, 0));
    a.gamma2 = std::arg(u(1, 1)) - std::arg(u(0, 0));
    return a.wrapped();
}

ZOptResult optimize_z_angles(const ProjectedGate& g, const Eigen::MatrixXcd& target) {
    ZOptResult r;
    ZAngles seed = seed_z_angles(g);
    auto fid = [&](const ZAngles& a) { return f_ave(z_rotation(a) * g.matrix, target); };
    r.seed_f_ave = fid(seed);
    MinimizeOptions mo;
    mo.x_tol = 1e-9;
    mo.max_evaluations = 2000;
    auto res = nelder_mead([&](const std::vector<double>& x) { return 1.0 - fid({x[0], x[1]}); },
                           {seed.gamma1, seed.gamma2}, {0.02, 0.02}, mo);
    ZAngles best{res.x[0], res.x[1]};
    double fb = fid(best);
    if (fb >= r.seed_f_ave) {
        r.angles = best.wrapped();
        r.f_ave = fb;
    } else {
        r.angles = seed;
        r.f_ave = r.seed_f_ave;
    }
    return r;
}

}  // namespace qvn
