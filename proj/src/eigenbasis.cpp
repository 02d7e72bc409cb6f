#include "qvn/eigenbasis.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace qvn {

namespace {

EigenBasis assign(const Eigen::VectorXd& evals, const Eigen::MatrixXd& evecs,
                  const ExcitationBasis& basis, const LabelOptions& opt) {
    const int n = static_cast<int>(evals.size());
    if (n != basis.dim()) throw std::invalid_argument("Hamiltonian dimension does not match basis");
    EigenBasis eb;
    eb.vectors = evecs;
    eb.assignment.assign(n, -1);
    eb.overlaps.assign(n, 0.0);

    struct Cand { double w; int bare; int eig; };
    std::vector<Cand> cand;
    cand.reserve(static_cast<size_t>(n) * 4);
    // keep only overlaps that can matter; every column has at least one entry >= 1/n
    const double floor_w = std::min(1e-3, 0.5 / n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            double w = evecs(i, j) * evecs(i, j);
            if (w >= floor_w) cand.push_back({w, i, j});
        }
    std::stable_sort(cand.begin(), cand.end(), [](const Cand& a, const Cand& b) { return a.w > b.w; });
    std::vector<char> eig_used(n, 0);
    int left = n;
    for (const auto& c : cand) {
        if (eb.assignment[c.bare] >= 0 || eig_used[c.eig]) continue;
        eb.assignment[c.bare] = c.eig;
        eb.overlaps[c.bare] = c.w;
        eig_used[c.eig] = 1;
        if (--left == 0) break;
    }
    if (left > 0) {
        // leftovers pair up in energy order
        std::vector<int> bare_free, eig_free;
        for (int i = 0; i < n; ++i) if (eb.assignment[i] < 0) bare_free.push_back(i);
        for (int j = 0; j < n; ++j) if (!eig_used[j]) eig_free.push_back(j);
        for (size_t k = 0; k < bare_free.size(); ++k) {
            eb.assignment[bare_free[k]] = eig_free[k];
            double v = evecs(bare_free[k], eig_free[k]);
            eb.overlaps[bare_free[k]] = v * v;
        }
    }

    if (opt.min_overlap > 0) {
        std::ostringstream bad;
        int count = 0;
        std::vector<int> which;
        if (opt.check.empty()) {
            which.resize(n);
            std::iota(which.begin(), which.end(), 0);
        } else {
            for (const auto& l : opt.check) which.push_back(basis.index(l));
        }
        for (int i : which) {
            if (eb.overlaps[i] <= opt.min_overlap) {
                if (count < 8) bad << ' ' << label_string(basis.labels[i]) << " (" << eb.overlaps[i] << ')';
                ++count;
            }
        }
        if (count > 0) {
            std::ostringstream os;
            os << "non-dispersive configuration: " << count << " label(s) with dominant overlap <= "
               << opt.min_overlap << ':' << bad.str();
            throw NonDispersiveError(os.str());
        }
    }

    // dominant bare amplitude real positive
    for (int i = 0; i < n; ++i) {
        int j = eb.assignment[i];
        if (eb.vectors(i, j) < 0) eb.vectors.col(j) *= -1.0;
    }

    Label vac(basis.mode_count, 0);
    eb.ground_shift = basis.contains(vac) ? evals(eb.assignment[basis.index(vac)]) : evals.minCoeff();
    eb.energies = evals.array() - eb.ground_shift;
    return eb;
}

}  // namespace

EigenBasis diagonalize_idle(const Eigen::MatrixXd& h_idle, const ExcitationBasis& basis,
                            const LabelOptions& opt) {
    if ((h_idle - h_idle.transpose()).norm() > 1e-12 * std::max(1.0, h_idle.norm()))
        throw std::invalid_argument("idle Hamiltonian is not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h_idle);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
    return assign(es.eigenvalues(), es.eigenvectors(), basis, opt);
}

EigenBasis diagonalize_idle(const Eigen::MatrixXcd& h_idle, const ExcitationBasis& basis,
                            const LabelOptions& opt) {
    if (h_idle.imag().norm() > 1e-12 * std::max(1.0, h_idle.norm()))
        throw std::invalid_argument("complex idle Hamiltonians are not supported; expected a real symmetric matrix");
    return diagonalize_idle(Eigen::MatrixXd(h_idle.real()), basis, opt);
}

EigenBasis idle_basis(const QvnModel& model, const std::vector<double>& qubit_freqs,
                      const LabelOptions& opt) {
    EigenBasis eb = diagonalize_idle(model.dense(qubit_freqs), model.basis, opt);
    eb.idle_freqs = qubit_freqs;
    return eb;
}

Eigen::MatrixXcd first_order_generator(const Eigen::VectorXd& h0_diag, const Eigen::MatrixXcd& dh,
                                       const ExcitationBasis* basis) {
    const int n = static_cast<int>(h0_diag.size());
    if (dh.rows() != n || dh.cols() != n) throw std::invalid_argument("dimension mismatch");
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(n, n);
    const double scale = std::max(1.0, h0_diag.cwiseAbs().maxCoeff());
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (a == b || std::abs(dh(a, b)) == 0.0) continue;
            double gap = h0_diag(a) - h0_diag(b);
            if (std::abs(gap) < 1e-12 * scale) {
                std::ostringstream os;
                os << "resonant pair";
                if (basis) os << ' ' << label_string(basis->labels[a]) << ' ' << label_string(basis->labels[b]);
                else os << " (" << a << ", " << b << ')';
                throw std::invalid_argument(os.str());
            }
            s(a, b) = std::complex<double>(0.0, -1.0) * dh(a, b) / gap;
        }
    }
    return s;
}

namespace {

// Block shift-invert iteration around a fixed shift; returns the Ritz pair with the
// largest weight on bare state i0. Used when single-vector iteration lands on a
// nearly degenerate neighbour.
bool block_dressed(const Eigen::SparseMatrix<double>& h, int i0, double shift, double tol, Eigen::VectorXd& x) {
    const int n = static_cast<int>(h.rows());
    const int m = std::min(n, 16);
    Eigen::SparseMatrix<double> eye(n, n);
    eye.setIdentity();
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(Eigen::SparseMatrix<double>(h - shift * eye));
    if (lu.info() != Eigen::Success) return false;

    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, m);
    q(i0, 0) = 1.0;
    int c = 1;
    for (Eigen::SparseMatrix<double>::InnerIterator it(h, i0); it && c < m; ++it)
        if (it.row() != i0) q(it.row(), c++) = 1.0;
    std::mt19937 rng(12345);
    std::normal_distribution<double> normal;
    for (; c < m; ++c)
        for (int r = 0; r < n; ++r) q(r, c) = normal(rng);

    const double hnorm = std::max(1.0, std::abs(h.coeff(i0, i0)));
    for (int it = 0; it < 200; ++it) {
        Eigen::MatrixXd y(n, m);
        for (int k = 0; k < m; ++k) y.col(k) = lu.solve(q.col(k));
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
        q = qr.householderQ() * Eigen::MatrixXd::Identity(n, m);
        Eigen::MatrixXd hq = h * q;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q.transpose() * hq);
        Eigen::MatrixXd ritz = q * es.eigenvectors();
        int best = 0;
        for (int k = 1; k < m; ++k)
            if (std::abs(ritz(i0, k)) > std::abs(ritz(i0, best))) best = k;
        x = ritz.col(best);
        const double res = (h * x - es.eigenvalues()(best) * x).norm();
        if (res < tol * hnorm) return true;
        q = ritz;
    }
    return false;
}

}  // namespace

DressedState dressed_state(const Eigen::SparseMatrix<double>& h, const ExcitationBasis& basis,
                           const Label& label, double tol) {
    const int n = static_cast<int>(h.rows());
    const int i0 = basis.index(label);
    // second-order estimate of the dressed energy
    double e0 = h.coeff(i0, i0);
    double shift = e0;
    for (Eigen::SparseMatrix<double>::InnerIterator it(h, i0); it; ++it) {
        if (it.row() == i0) continue;
        double d = e0 - h.coeff(it.row(), it.row());
        if (std::abs(d) > 1e-9) shift += it.value() * it.value() / d;
    }

    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    x(i0) = 1.0;
    Eigen::SparseMatrix<double> eye(n, n);
    eye.setIdentity();
    const double hnorm = std::max(1.0, std::abs(e0));
    double lambda = shift;
    bool converged = false;
    for (int round = 0; round < 3 && !converged; ++round) {
        Eigen::SparseMatrix<double> a = h - lambda * eye;
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(a);
        if (lu.info() != Eigen::Success) throw std::runtime_error("dressed_state: factorization failed");
        double res = 1.0;
        for (int it = 0; it < 60; ++it) {
            x = lu.solve(x);
            x.normalize();
            Eigen::VectorXd hx = h * x;
            double rq = x.dot(hx);
            res = (hx - rq * x).norm();
            if (res < tol * hnorm) break;
        }
        lambda = x.dot(h * x);  // refine the shift and refactor
        converged = res < tol * hnorm;
    }
    if (!converged || x(i0) * x(i0) <= 0.5) {
        Eigen::VectorXd y;
        if (block_dressed(h, i0, shift, tol, y) && y(i0) * y(i0) > x(i0) * x(i0)) x = y;
    }
    if (x(i0) < 0) x = -x;
    DressedState d;
    d.vector = x;
    d.energy = x.dot(h * x);
    d.overlap = x(i0) * x(i0);
    if (d.overlap <= 0.5) {
        throw NonDispersiveError("non-dispersive configuration: dressed " + label_string(label) +
                                 " has bare overlap " + std::to_string(d.overlap));
    }
    return d;
}

}  // namespace qvn
