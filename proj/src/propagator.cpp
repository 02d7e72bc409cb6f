#include "qvn/propagator.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <queue>

namespace qvn {

namespace {

// commutator-free Magnus, two exponentials per step
const double kSqrt3 = std::sqrt(3.0);
const double kA1 = (3.0 - 2.0 * kSqrt3) / 12.0;
const double kA2 = (3.0 + 2.0 * kSqrt3) / 12.0;
const double kC1 = 0.5 - kSqrt3 / 6.0;
const double kC2 = 0.5 + kSqrt3 / 6.0;

void check_finite(const Eigen::MatrixXd& x) {
    if (!x.allFinite()) throw NumericalError("propagation produced non-finite amplitudes");
}

}  // namespace

std::vector<double> uniform_grid(double t0, double t1, double step) {
    if (!(t1 >= t0)) throw std::invalid_argument("grid: t1 < t0");
    if (!(step > 0)) throw std::invalid_argument("grid: step must be positive");
    int n = std::max(1, static_cast<int>(std::ceil((t1 - t0) / step - 1e-9)));
    std::vector<double> g(n + 1);
    for (int i = 0; i <= n; ++i) g[i] = t0 + (t1 - t0) * i / n;
    g.back() = t1;
    return g;
}

std::vector<double> zoned_grid(double t0, double t1, const std::vector<std::pair<double, double>>& fine_zones,
                               double fine_step, double coarse_step) {
    if (!(t1 > t0)) return {t0, t1};
    // merge clipped zones
    std::vector<std::pair<double, double>> z;
    for (auto [a, b] : fine_zones) {
        a = std::max(a, t0);
        b = std::min(b, t1);
        if (b > a) z.emplace_back(a, b);
    }
    std::sort(z.begin(), z.end());
    std::vector<std::pair<double, double>> merged;
    for (auto& p : z) {
        if (!merged.empty() && p.first <= merged.back().second) merged.back().second = std::max(merged.back().second, p.second);
        else merged.push_back(p);
    }
    std::vector<double> g{t0};
    auto append = [&](double a, double b, double h) {
        if (b - a <= 1e-12) return;
        auto seg = uniform_grid(a, b, h);
        g.insert(g.end(), seg.begin() + 1, seg.end());
    };
    double cur = t0;
    for (auto& [a, b] : merged) {
        append(cur, a, coarse_step);
        append(std::max(cur, a), b, fine_step);
        cur = std::max(cur, b);
    }
    append(cur, t1, coarse_step);
    if (g.back() != t1) g.back() = t1;
    return g;
}

Eigen::MatrixXcd expm_step(const Eigen::MatrixXd& h, double t) {
    Eigen::MatrixXcd a = (std::complex<double>(0.0, -t) * h.cast<std::complex<double>>()).eval();
    return a.exp();
}

Propagator::Propagator(const QvnModel& model, const PropagatorOptions& opt) : model_(model), opt_(opt) {
    const int n = model_.dim();
    // connected components of the coupling graph
    std::vector<int> comp(n, -1);
    int ncomp = 0;
    for (int s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        std::queue<int> q;
        q.push(s);
        comp[s] = ncomp;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (Eigen::SparseMatrix<double>::InnerIterator it(model_.fixed, v); it; ++it) {
                int w = static_cast<int>(it.row());
                if (it.value() != 0.0 && comp[w] < 0) {
                    comp[w] = ncomp;
                    q.push(w);
                }
            }
        }
        ++ncomp;
    }
    sectors_.resize(ncomp);
    for (int i = 0; i < n; ++i) sectors_[comp[i]].idx.push_back(i);

    std::vector<int> local(n);
    for (auto& sec : sectors_) {
        for (size_t k = 0; k < sec.idx.size(); ++k) local[sec.idx[k]] = static_cast<int>(k);
        const int m = static_cast<int>(sec.idx.size());
        std::vector<Eigen::Triplet<double>> trip;
        sec.diag = Eigen::VectorXd::Zero(m);
        sec.radius = Eigen::VectorXd::Zero(m);
        for (int k = 0; k < m; ++k) {
            for (Eigen::SparseMatrix<double>::InnerIterator it(model_.fixed, sec.idx[k]); it; ++it) {
                int r = local[it.row()];
                trip.emplace_back(r, k, it.value());
                if (r == k) sec.diag(k) += it.value();
                else sec.radius(r) += std::abs(it.value());
            }
        }
        sec.sparse = m > opt_.dense_limit;
        if (sec.sparse) {
            sec.csr.resize(m, m);
            sec.csr.setFromTriplets(trip.begin(), trip.end());
            sec.csr.makeCompressed();
        } else {
            Eigen::SparseMatrix<double> sp(m, m);
            sp.setFromTriplets(trip.begin(), trip.end());
            sec.dense = Eigen::MatrixXd(sp);
        }
        for (const auto& nv : model_.number) {
            Eigen::VectorXd r(m);
            for (int k = 0; k < m; ++k) r(k) = nv(sec.idx[k]);
            sec.number.push_back(r);
        }
    }
}

Eigen::MatrixXcd Propagator::evolve(const Eigen::MatrixXcd& psi0, const FreqSchedule& freqs,
                                    const std::vector<double>& grid, double shift) const {
    if (psi0.rows() != model_.dim()) throw std::invalid_argument("evolve: state dimension mismatch");
    if (grid.size() < 2) return psi0;
    for (size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw NumericalError("evolve: time grid must increase strictly (step underflow)");
    const int cols = static_cast<int>(psi0.cols());
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(psi0.rows(), cols);
    for (const auto& sec : sectors_) {
        const int m = static_cast<int>(sec.idx.size());
        // only columns with weight in this sector are propagated
        std::vector<int> active;
        for (int c = 0; c < cols; ++c) {
            bool nz = false;
            for (int k = 0; k < m && !nz; ++k) nz = psi0(sec.idx[k], c) != 0.0;
            if (nz) active.push_back(c);
        }
        if (active.empty()) continue;
        const int na = static_cast<int>(active.size());
        Eigen::MatrixXd x(m, 2 * na);
        for (int k = 0; k < m; ++k)
            for (int a = 0; a < na; ++a) {
                x(k, a) = psi0(sec.idx[k], active[a]).real();
                x(k, na + a) = psi0(sec.idx[k], active[a]).imag();
            }
        if (opt_.method == Integrator::Magnus4) evolve_sector(sec, x, freqs, grid, shift);
        else evolve_sector_pwc(sec, x, freqs, grid, shift);
        check_finite(x);
        for (int k = 0; k < m; ++k)
            for (int a = 0; a < na; ++a) out(sec.idx[k], active[a]) = {x(k, a), x(k, na + a)};
    }
    return out;
}

Eigen::MatrixXcd Propagator::evolve_operator(const FreqSchedule& freqs, const std::vector<double>& grid,
                                             double shift) const {
    return evolve(Eigen::MatrixXcd::Identity(model_.dim(), model_.dim()), freqs, grid, shift);
}

void Propagator::evolve_sector(const Sector& s, Eigen::MatrixXd& x, const FreqSchedule& freqs,
                               const std::vector<double>& grid, double shift) const {
    const int m = static_cast<int>(s.idx.size());
    const int nq = static_cast<int>(s.number.size());
    const int w = static_cast<int>(x.cols());
    const int half = w / 2;
    std::vector<double> e1(nq), e2(nq), ea(nq), eb(nq);
    Eigen::VectorXd dvec(m);
    Eigen::MatrixXd t0(m, w), t1(m, w), t2(m, w), acc(m, w);
    std::vector<double> bess;

    auto apply = [&](const Eigen::MatrixXd& in, Eigen::MatrixXd& out, double c, double r) {
        if (s.sparse) out.noalias() = s.csr * in;
        else out.noalias() = s.dense * in;
        out += (dvec.array() - c).matrix().asDiagonal() * in;
        out /= r;
    };

    // spectral bounds over the whole schedule; occupation diagonals are >= 0, so the
    // Gershgorin interval is monotone in every qubit frequency
    std::vector<double> emin(nq, 1e300), emax(nq, -1e300), tmp(nq);
    for (size_t i = 0; i + 1 < grid.size(); ++i) {
        const double h = grid[i + 1] - grid[i];
        for (double c : {kC1, kC2}) {
            freqs(grid[i] + c * h, tmp.data());
            for (int k = 0; k < nq; ++k) {
                emin[k] = std::min(emin[k], tmp[k]);
                emax[k] = std::max(emax[k], tmp[k]);
            }
        }
    }
    Eigen::VectorXd dlo = Eigen::VectorXd::Constant(m, -shift), dhi = dlo;
    for (int k = 0; k < nq; ++k) {
        dlo += ang(emin[k]) * s.number[k];
        dhi += ang(emax[k]) * s.number[k];
    }
    const double lo = (s.diag + dlo - s.radius).minCoeff();
    const double hi = (s.diag + dhi + s.radius).maxCoeff();
    const double c = 0.5 * (lo + hi);
    const double r = std::max(0.5 * (hi - lo), 1e-12);

    double cached_z = -1.0;
    auto expv = [&](double tau, const std::vector<double>& eps) {
        dvec.setConstant(-shift);
        for (int k = 0; k < nq; ++k) dvec += ang(eps[k]) * s.number[k];
        double z = tau * r;
        if (z != cached_z) {
            bess.clear();
            for (int k = 0;; ++k) {
                double j = std::cyl_bessel_j(static_cast<double>(k), z);
                bess.push_back(j);
                if (k > z && std::abs(j) < opt_.cheb_tol) break;
                if (k > 10000) throw NumericalError("Chebyshev expansion did not converge");
            }
            cached_z = z;
        }
        const int K = static_cast<int>(bess.size());
        // sum_k (2 - delta_k0) (-i)^k J_k T_k
        t0 = x;
        acc = bess[0] * t0;
        if (K > 1) {
            apply(t0, t1, c, r);
            // (-i) * 2 J_1 * T1 : re += 2J1 * T1_im, im -= 2J1 * T1_re
            double a = 2.0 * bess[1];
            acc.leftCols(half) += a * t1.rightCols(half);
            acc.rightCols(half) -= a * t1.leftCols(half);
        }
        for (int k = 2; k < K; ++k) {
            apply(t1, t2, c, r);
            t2 = 2.0 * t2 - t0;
            double a = 2.0 * bess[k];
            switch (k % 4) {
                case 0: acc += a * t2; break;
                case 1:
                    acc.leftCols(half) += a * t2.rightCols(half);
                    acc.rightCols(half) -= a * t2.leftCols(half);
                    break;
                case 2: acc -= a * t2; break;
                case 3:
                    acc.leftCols(half) -= a * t2.rightCols(half);
                    acc.rightCols(half) += a * t2.leftCols(half);
                    break;
            }
            std::swap(t0, t1);
            std::swap(t1, t2);
        }
        // global factor exp(-i tau c)
        double cs = std::cos(tau * c), sn = std::sin(tau * c);
        x.leftCols(half) = cs * acc.leftCols(half) + sn * acc.rightCols(half);
        x.rightCols(half) = cs * acc.rightCols(half) - sn * acc.leftCols(half);
    };

    for (size_t i = 0; i + 1 < grid.size(); ++i) {
        const double t = grid[i];
        const double h = grid[i + 1] - t;
        freqs(t + kC1 * h, e1.data());
        freqs(t + kC2 * h, e2.data());
        for (int k = 0; k < nq; ++k) {
            ea[k] = 2.0 * (kA2 * e1[k] + kA1 * e2[k]);
            eb[k] = 2.0 * (kA1 * e1[k] + kA2 * e2[k]);
        }
        expv(0.5 * h, ea);
        expv(0.5 * h, eb);
    }
}

void Propagator::evolve_sector_pwc(const Sector& s, Eigen::MatrixXd& x, const FreqSchedule& freqs,
                                   const std::vector<double>& grid, double shift) const {
    const int m = static_cast<int>(s.idx.size());
    const int nq = static_cast<int>(s.number.size());
    const int half = static_cast<int>(x.cols()) / 2;
    Eigen::MatrixXd f = s.sparse ? Eigen::MatrixXd(s.csr) : s.dense;
    Eigen::MatrixXcd psi(m, half);
    psi.real() = x.leftCols(half);
    psi.imag() = x.rightCols(half);
    std::vector<double> eps(nq), last;
    double last_dt = -1.0;
    Eigen::MatrixXcd u;
    for (size_t i = 0; i + 1 < grid.size(); ++i) {
        const double t0 = grid[i], t1 = grid[i + 1];
        const int n = std::max(1, static_cast<int>(std::ceil((t1 - t0) / opt_.dt - 1e-9)));
        const double dt = (t1 - t0) / n;
        for (int j = 0; j < n; ++j) {
            freqs(t0 + (j + 0.5) * dt, eps.data());
            if (eps != last || dt != last_dt) {
                Eigen::MatrixXd h = f;
                h.diagonal().array() -= shift;
                for (int k = 0; k < nq; ++k) h.diagonal() += ang(eps[k]) * s.number[k];
                u = expm_step(h, dt);
                last = eps;
                last_dt = dt;
            }
            psi = (u * psi).eval();
        }
    }
    x.leftCols(half) = psi.real();
    x.rightCols(half) = psi.imag();
}

ProjectedGate project(const Eigen::MatrixXcd& u, const EigenBasis& eig_start, const EigenBasis& eig_end,
                      const ExcitationBasis& basis, const std::vector<Label>& labels) {
    const int n = static_cast<int>(labels.size());
    ProjectedGate g;
    g.labels = labels;
    g.matrix.resize(n, n);
    for (int b = 0; b < n; ++b) {
        Eigen::VectorXcd col = u * eig_start.state(basis, labels[b]).cast<std::complex<double>>();
        for (int a = 0; a < n; ++a)
            g.matrix(a, b) = eig_end.state(basis, labels[a]).cast<std::complex<double>>().dot(col);
    }
    g.leakage = n - (g.matrix.adjoint() * g.matrix).trace().real();
    return g;
}

ProjectedGate project(const Eigen::MatrixXcd& u, const EigenBasis& eig, const ExcitationBasis& basis,
                      const std::vector<Label>& labels) {
    return project(u, eig, eig, basis, labels);
}

ProjectedGate simulate_projected(const Propagator& prop, const FreqSchedule& freqs,
                                 const std::vector<double>& grid, const EigenBasis& eig_start,
                                 const EigenBasis& eig_end, const std::vector<Label>& labels) {
    const auto& basis = prop.model().basis;
    const int n = static_cast<int>(labels.size());
    Eigen::MatrixXcd psi0(basis.dim(), n);
    for (int b = 0; b < n; ++b) psi0.col(b) = eig_start.state(basis, labels[b]).cast<std::complex<double>>();
    // energies measured from the starting idle ground state
    Eigen::MatrixXcd psi = prop.evolve(psi0, freqs, grid, eig_start.ground_shift);
    ProjectedGate g;
    g.labels = labels;
    g.matrix.resize(n, n);
    for (int a = 0; a < n; ++a) {
        Eigen::VectorXcd e = eig_end.state(basis, labels[a]).cast<std::complex<double>>();
        for (int b = 0; b < n; ++b) g.matrix(a, b) = e.dot(psi.col(b));
    }
    g.leakage = n - (g.matrix.adjoint() * g.matrix).trace().real();
    return g;
}

Eigen::MatrixXcd frame_unwind(const Eigen::MatrixXcd& states, const ExcitationBasis& basis,
                              const std::vector<double>& reference_freqs, double duration) {
    if (static_cast<int>(reference_freqs.size()) != basis.mode_count)
        throw std::invalid_argument("frame_unwind: one reference frequency per mode");
    Eigen::MatrixXcd out = states;
    for (int i = 0; i < basis.dim(); ++i) {
        double ph = 0.0;
        for (int k = 0; k < basis.mode_count; ++k) ph += basis.labels[i][k] * reference_freqs[k];
        out.row(i) *= std::polar(1.0, kTwoPi * ph * duration);
    }
    return out;
}

}  // namespace qvn
