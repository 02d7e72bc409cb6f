#include "qvn/eigenbasis.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace qvn;

TEST(IdleBasis, EigenpairsSolveTheHamiltonian) {
    DeviceConfig d = DeviceConfig::defaults();
    QvnModel m = build_qvn_model(d);
    auto f = d.idle_with(0);
    LabelOptions lo;
    lo.check = {Label(9, 0)};
    EigenBasis eb = idle_basis(m, f, lo);
    Eigen::MatrixXd h = m.dense(f);
    Eigen::MatrixXd v = eb.vectors;
    Eigen::MatrixXd lhs = h * v;
    Eigen::MatrixXd rhs = v * (eb.energies.array() + eb.ground_shift).matrix().asDiagonal();
    EXPECT_LT((lhs - rhs).norm(), 1e-8);
    EXPECT_LT((v.transpose() * v - Eigen::MatrixXd::Identity(m.dim(), m.dim())).norm(), 1e-10);
    EXPECT_NEAR(eb.energy(m.basis, Label(9, 0)), 0.0, 1e-12);
}

TEST(IdleBasis, ComputationalLabelsAreDispersive) {
    DeviceConfig d = DeviceConfig::defaults();
    QvnModel m = build_qvn_model(d);
    Label vac(9, 0), q(9, 0), b(9, 0), qb(9, 0);
    q[0] = 1;
    b[8] = 1;
    qb[0] = qb[8] = 1;
    LabelOptions lo;
    lo.check = {vac, q, b, qb};
    EigenBasis eb = idle_basis(m, d.idle_with(0), lo);
    for (const auto& l : lo.check) EXPECT_GT(eb.overlaps[m.basis.index(l)], 0.9) << label_string(l);
}

TEST(IdleBasis, AssignmentIsAPermutation) {
    DeviceConfig d = DeviceConfig::defaults();
    QvnModel m = build_qvn_model(d);
    LabelOptions lo;
    lo.min_overlap = 0.0;
    EigenBasis eb = idle_basis(m, d.idle_with(0), lo);
    std::vector<int> seen(m.dim(), 0);
    for (int a : eb.assignment) ++seen.at(a);
    for (int s : seen) EXPECT_EQ(s, 1);
}

TEST(IdleBasis, NonDispersiveLabelIsReported) {
    // qubit tuned onto the bus: |q> and |b> hybridize 50/50
    DeviceConfig d = single_qubit_device(DeviceConfig::defaults(), 0);
    d.g_m = 0.0;
    QvnModel m = build_qvn_model(d);
    LabelOptions lo;
    lo.min_overlap = 0.6;
    EXPECT_THROW(idle_basis(m, {6.5}, lo), NonDispersiveError);
    EXPECT_NO_THROW(idle_basis(m, {7.5}, lo));
}

TEST(Perturbation, GeneratorMatchesTwoLevelMixingAngle) {
    // H0 = diag(0, D), V = g sigma_x: first-order rotation angle g / D
    const double D = 2.0, g = 0.01;
    Eigen::VectorXd h0(2);
    h0 << 0.0, D;
    Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(2, 2);
    v(0, 1) = v(1, 0) = g;
    Eigen::MatrixXcd s = first_order_generator(h0, v);
    // V = exp(-i S) with S Hermitian
    EXPECT_LT((s - s.adjoint()).norm(), 1e-15);
    EXPECT_NEAR(std::abs(s(0, 1)), g / D, 1e-15);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es((Eigen::Matrix2d() << 0.0, g, g, D).finished());
    EXPECT_NEAR(std::abs(es.eigenvectors()(1, 0)), g / D, 2 * std::pow(g / D, 3));
}

TEST(DressedState, AgreesWithDenseDiagonalization) {
    DeviceConfig d = DeviceConfig::defaults();
    QvnModel m = build_qvn_model(d);
    auto f = d.parked();
    Eigen::MatrixXd h = m.dense(f);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    Label l(9, 0);
    l[4] = 1;
    l[8] = 1;
    DressedState ds = dressed_state(m.sparse(f), m.basis, l);
    EXPECT_GT(ds.overlap, 0.9);
    EXPECT_LT((h * ds.vector - ds.energy * ds.vector).norm(), 1e-9);
    double best = 1e300;
    for (int i = 0; i < es.eigenvalues().size(); ++i) best = std::min(best, std::abs(es.eigenvalues()(i) - ds.energy));
    EXPECT_LT(best, 1e-9);
    EXPECT_GT(ds.vector(m.basis.index(l)), 0.0);
}

// m1 + m2 = park + bus: the four-memory state has bare-degenerate neighbours.
TEST(DressedState, FindsTheLabelledStateNearAFrequencyCollision) {
    DeviceConfig d = DeviceConfig::defaults();
    ModelOptions mo;
    mo.max_excitations = 6;
    QvnModel m = build_qvn_model(d, mo);
    auto h = m.sparse(d.parked());
    const Label full{0, 0, 0, 0, 1, 1, 1, 1, 0};
    DressedState s = dressed_state(h, m.basis, full);
    EXPECT_GT(s.overlap, 0.9);
    EXPECT_LT((h * s.vector - s.energy * s.vector).norm(), 1e-9 * std::abs(s.energy));
}
