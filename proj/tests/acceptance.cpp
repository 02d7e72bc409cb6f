// Acceptance run: one PASS/FAIL line per criterion, details indented below it.
// Usage: qvn_acceptance [--criterion N] [--cache FILE]

#include "qvn/error_estimators.hpp"
#include "qvn/gate_optimizer.hpp"
#include "qvn/system_design.hpp"

#include "two_level_oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace qvn;

namespace {

struct TableRow {
    double eta, g_b, t_ramp, sigma, t_on, t_gate, f_ave, f11, a_sq, p_sw, f11_est;
};

// reference gates: MHz, ns, percent
const std::vector<TableRow> kTable = {
    {200, 30, 11, 1.94, 15.8, 26.8, 99.901, 99.613, 2.1e-2, 1.5e-3, 99.692},
    {200, 30, 16, 2.83, 18.3, 34.3, 99.992, 99.975, 2.8e-3, 2.0e-4, 99.960},
    {300, 45, 7, 1.24, 9.9, 16.9, 99.928, 99.714, 1.7e-2, 1.2e-3, 99.761},
    {300, 45, 11, 1.94, 11.8, 22.8, 99.995, 99.979, 9.9e-4, 7.2e-5, 99.986},
    {400, 60, 5, 0.88, 7.0, 12.0, 99.950, 99.804, 1.4e-2, 1.0e-3, 99.799},
    {400, 60, 7, 1.24, 7.8, 14.8, 99.991, 99.966, 2.1e-3, 1.5e-4, 99.970},
};

DeviceConfig device_for(const TableRow& r) { return DeviceConfig::defaults(r.eta * 1e-3, r.g_b * 1e-3); }

struct Outcome {
    bool pass = true;
    std::vector<std::string> details;
    void note(const char* fmt, ...) __attribute__((format(printf, 2, 3)));
    void check(bool ok, const char* fmt, ...) __attribute__((format(printf, 3, 4)));
};

void Outcome::note(const char* fmt, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    details.emplace_back(buf);
}

void Outcome::check(bool ok, const char* fmt, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    details.emplace_back(std::string(ok ? "ok   " : "FAIL ") + buf);
    pass = pass && ok;
}

bool within(double x, double ref, double tol) { return std::abs(x - ref) <= tol; }
bool within_rel(double x, double ref, double rel) { return std::abs(x - ref) <= rel * std::abs(ref); }

// The six optimized reference gates are shared by several criteria; they are cached on disk
// so that separate invocations do not repeat the six optimizations.
struct RowResult {
    CZPulseParams pulse;
    double f_ave = 0, f11 = 0;
    bool converged = false;
};

std::string g_cache_path = "acceptance_gates.cache";

std::map<int, RowResult> load_cache() {
    std::map<int, RowResult> out;
    std::ifstream f(g_cache_path);
    int i;
    RowResult r;
    int conv;
    while (f >> i >> r.pulse.omega_off >> r.pulse.omega_on >> r.pulse.sigma >> r.pulse.t_ramp >> r.pulse.t_on >>
           r.f_ave >> r.f11 >> conv) {
        r.converged = conv != 0;
        out[i] = r;
    }
    return out;
}

void store_cache(int i, const RowResult& r) {
    std::ofstream f(g_cache_path, std::ios::app);
    f.precision(17);
    f << i << ' ' << r.pulse.omega_off << ' ' << r.pulse.omega_on << ' ' << r.pulse.sigma << ' ' << r.pulse.t_ramp
      << ' ' << r.pulse.t_on << ' ' << r.f_ave << ' ' << r.f11 << ' ' << (r.converged ? 1 : 0) << '\n';
}

std::map<int, RowResult> g_memo;
bool g_memo_loaded = false;

RowResult table_row(int i) {
    if (!g_memo_loaded) {
        g_memo = load_cache();
        g_memo_loaded = true;
    }
    auto& memo = g_memo;
    auto it = memo.find(i);
    if (it != memo.end()) return it->second;
    const TableRow& t = kTable.at(i);
    CZSimulator sim(device_for(t), 0);
    OptimizedGate og = optimize_cz(sim, t.sigma, t.t_ramp);
    RowResult r{og.pulse, og.report.f_ave, og.report.f_min11, og.converged};
    memo[i] = r;
    store_cache(i, r);
    return r;
}

Outcome criterion1() {
    Outcome o;
    // always recomputed; later criteria reuse what this run stores
    std::remove(g_cache_path.c_str());
    g_memo.clear();
    g_memo_loaded = true;
    for (size_t i = 0; i < kTable.size(); ++i) {
        const TableRow& t = kTable[i];
        RowResult r = table_row(static_cast<int>(i));
        const bool ok = r.converged && within(r.f_ave, t.f_ave / 100, 5e-4) && within(r.f11, t.f11 / 100, 1e-3) &&
                        within(r.pulse.t_on, t.t_on, 0.3);
        o.check(ok, "eta %3.0f t_ramp %2.0f: F_ave %.4f%% (%.3f%%)  F11 %.4f%% (%.3f%%)  t_on %.3f ns (%.1f)", t.eta,
                t.t_ramp, 100 * r.f_ave, t.f_ave, 100 * r.f11, t.f11, r.pulse.t_on, t.t_on);
    }
    return o;
}

Outcome criterion2() {
    Outcome o;
    CZSimulator sim(DeviceConfig::defaults(0.3, 0.045), 0);
    OptimizedGate og = optimize_cz(sim, 2.30, 13.0);
    o.check(og.report.f_ave >= 0.99998, "F_ave %.5f%% (>= 99.998%%)", 100 * og.report.f_ave);
    o.check(within(og.pulse.t_gate(), 25.7, 0.5), "t_gate %.3f ns (25.7 +- 0.5)", og.pulse.t_gate());
    return o;
}

Outcome criterion3() {
    Outcome o;
    for (const auto& t : kTable) {
        MinFidelityEstimate e = cz_min_fidelity_estimate(device_for(t), t.sigma, t.t_ramp);
        const bool ok = within_rel(e.switching.a_sq, t.a_sq, 0.05) && within_rel(e.switching.p_sw, t.p_sw, 0.05) &&
                        within(e.f11_est, t.f11_est / 100, 5e-4);
        o.check(ok, "eta %3.0f t_ramp %2.0f: |A|^2 %.3e (%.1e)  p_sw %.3e (%.1e)  F11_est %.3f%% (%.3f%%)", t.eta,
                t.t_ramp, e.switching.a_sq, t.a_sq, e.switching.p_sw, t.p_sw, 100 * e.f11_est, t.f11_est);
    }
    return o;
}

Outcome criterion4() {
    Outcome o;
    DeviceConfig d = DeviceConfig::defaults(0.3, 0.045);
    SwitchErrorReport lb = switching_probability(lower_band_spec(d, 1.24, 7.0));
    o.check(within_rel(lb.p_sw, 4.4e-5, 0.10), "lower band p_sw %.3e (4.4e-5 +- 10%%)", lb.p_sw);
    QubitQubitEstimate q = qubit_qubit_min_fidelity(0.3, 0.3, 0.045, CZPulseParams::sigma_for_ramp(7.0), 7.0);
    o.check(within_rel(q.upper.a_sq, 5.8e-6, 0.10), "qubit-qubit |A|^2 %.3e (5.8e-6 +- 10%%)", q.upper.a_sq);
    o.check(within_rel(q.upper.p_sw, 8.2e-8, 0.10), "qubit-qubit p_sw %.3e (8.2e-8 +- 10%%)", q.upper.p_sw);
    o.check(within(q.f_min_est, 0.99991, 2e-5), "qubit-qubit F_min_est %.5f%% (99.991%% +- 2e-5)", 100 * q.f_min_est);
    return o;
}

Outcome criterion5() {
    Outcome o;
    RowResult r = table_row(2);
    CZSimulator sim(DeviceConfig::defaults(0.3, 0.045), 0);
    PulseErrorResult dt = simulate_pulse_error(sim, r.pulse, 0.010, 0.0);
    PulseErrorResult dw = simulate_pulse_error(sim, r.pulse, 0.0, 0.001);
    const double lu = dt.loss_uncompensated(), lc = dt.loss_compensated(), lw = dw.loss_compensated();
    o.check(lu >= 2e-4 && lu <= 8e-4, "dt_on 10 ps uncompensated loss %.3e in [2e-4, 8e-4]", lu);
    o.check(lc >= 1e-6 && lc <= 1e-5, "dt_on 10 ps compensated loss %.3e in [1e-6, 1e-5]", lc);
    o.check(lw >= 5e-5 && lw <= 2e-4, "domega_on 1 MHz compensated loss %.3e in [5e-5, 2e-4]", lw);
    UncompensatedError ue = uncompensated_pulse_error(0.010, 0.0, r.pulse, 6.5, 0.045);
    CompensatedError ct = compensated_pulse_error(0.010, 0.0, 0.045), cw = compensated_pulse_error(0.0, 0.001, 0.045);
    o.note("estimates: uncompensated %.2e (sudden %.2e), compensated dt %.2e, compensated domega %.2e", ue.exact,
           ue.sudden, ct.loss, cw.loss);
    o.note("uncompensated domega 1 MHz simulated loss %.3e", dw.loss_uncompensated());
    return o;
}

Outcome criterion6() {
    Outcome o;
    DeviceConfig d = DeviceConfig::defaults(0.3, 0.045);
    CZ23Design des = design_cz23(d);
    for (size_t i = 0, m = 0; i < des.spec.segments.size(); ++i) {
        const Segment& s = des.spec.segments[i];
        if (s.src_mode >= 0) {
            const OptimizedMove& mv = des.moves[m++];
            o.note("%-12s omega_on %.4f GHz  t_on %.3f ns  t %.3f ns  transfer %.6f", s.name.c_str(),
                   mv.pulse.omega_on, mv.pulse.t_on, s.duration(), mv.transfer);
        } else {
            o.note("%-12s omega_on %.4f GHz  t_on %.3f ns  t %.3f ns  F_ave %.5f%%", s.name.c_str(),
                   des.cz.pulse.omega_on, des.cz.pulse.t_on, s.duration(), 100 * des.cz.report.f_ave);
        }
    }
    SequenceResult r = run_sequence(des.spec, memory_ghz(d, false), memory_ghz(d, true));
    o.check(within(r.fidelity, 0.9994, 5e-4), "GHZ overlap fidelity %.4f%% (99.94%% +- 5e-4)", 100 * r.fidelity);
    o.check(within(r.total_time, 55.0, 3.0), "total time %.2f ns (55 +- 3)", r.total_time);
    return o;
}

Outcome criterion7() {
    Outcome o;
    CZSimulator sim(DeviceConfig::defaults(0.3, 0.045), 3);
    OptimizedGate og = optimize_cz(sim, 1.24, 7.0);
    o.check(og.report.f_ave >= 0.9990 && og.report.f_ave <= 0.9993, "q4 F_ave %.4f%% in [99.90%%, 99.93%%]",
            100 * og.report.f_ave);
    o.note("q1 reference %.4f%%", 100 * table_row(2).f_ave);
    return o;
}

Outcome criterion8() {
    Outcome o;
    DeviceConfig d = DeviceConfig::defaults(0.4, 0.06);
    ZZResult z = compute_zz(d);
    o.check(within(z.omega_khz, -0.881, 0.01), "Omega_ZZ %.4f kHz (-0.881 +- 0.01)", z.omega_khz);
    const double e = idle_error(z.omega_khz, 1000.0, 4);
    o.check(within_rel(e, 4.9e-4, 0.02), "idle error (1 us, n=4) %.4e (4.9e-4 +- 2%%)", e);
    d.park_freq = 9.5;
    ZZResult z2 = compute_zz(d);
    const double e2 = idle_error(z2.omega_khz, 1000.0, 4);
    o.check(within_rel(e2, 3.8e-3, 0.10), "9.5 GHz parking: Omega_ZZ %.4f kHz, idle error %.4e (3.8e-3 +- 10%%)",
            z2.omega_khz, e2);
    return o;
}

Outcome criterion9() {
    Outcome o;
    const double etas[] = {0.2, 0.3, 0.4}, expect[] = {0.030, 0.045, 0.060};
    for (int i = 0; i < 3; ++i) {
        GOptimizationCurve c = g_optimize(DeviceConfig::defaults(etas[i]));
        double est_best = 0.0, tg = 1e300;
        for (const auto& s : c.samples)
            if (s.t_ramp_est > 0 && s.t_gate_est < tg) {
                tg = s.t_gate_est;
                est_best = s.g_b;
            }
        const auto& best = *std::find_if(c.samples.begin(), c.samples.end(),
                                         [&](const GSample& s) { return std::abs(s.g_b - c.best_g) < 1e-12; });
        o.check(c.reachable && within(c.recommended_g, expect[i], 1e-9),
                "eta %3.0f MHz: recommended g_b %.0f MHz (%.0f); estimator optimum %.0f MHz, confirmed optimum %.0f MHz "
                "t_gate %.2f ns",
                etas[i] * 1e3, c.recommended_g * 1e3, expect[i] * 1e3, est_best * 1e3, c.best_g * 1e3, best.t_gate);
    }
    return o;
}

Outcome criterion10() {
    Outcome o;
    DeviceConfig d = DeviceConfig::defaults(0.3, 0.045);
    RowResult r = table_row(2);

    {
        CZSimulator sim(d, 0);
        Eigen::MatrixXcd u = sim.evolution(r.pulse);
        const double dev = (u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
        o.check(dev <= 1e-9, "unitarity max|U^dag U - 1| = %.2e (<= 1e-9)", dev);
    }
    {
        GateOptions fine;
        fine.propagator.fine_step *= 0.5;
        fine.propagator.coarse_step *= 0.5;
        const double f1 = CZSimulator(d, 0).evaluate(r.pulse).f_ave;
        const double f2 = CZSimulator(d, 0, fine).evaluate(r.pulse).f_ave;
        o.check(std::abs(f1 - f2) < 1e-8, "step-halving fidelity drift %.2e (< 1e-8)", std::abs(f1 - f2));
    }
    {
        double worst = 0.0;
        for (unsigned s = 0; s < 8; ++s) {
            Eigen::MatrixXcd a = Eigen::MatrixXcd::Random(4, 4);
            Eigen::MatrixXcd u = Eigen::HouseholderQR<Eigen::MatrixXcd>(a).householderQ() * Eigen::MatrixXcd::Identity(4, 4);
            worst = std::max(worst, std::abs(f_ave(u, u) - 1.0));
        }
        o.check(worst < 1e-14, "f_ave(U, U) = 1 to %.1e", worst);
    }
    {
        CZSimulator sim(d, 0);
        ProjectedGate g = sim.simulate(r.pulse);
        ZOptResult z = optimize_z_angles(g, cz_target());
        double worst = 0.0;
        for (auto [p1, p2] : {std::pair{0.02, 0.0}, std::pair{0.0, 0.03}, std::pair{0.02, -0.03}, std::pair{0.05, 0.04}}) {
            const double loss = z.f_ave - f_ave(apply_z(g, {z.angles.gamma1 + p1, z.angles.gamma2 + p2}), cz_target());
            worst = std::max(worst, std::abs(loss / z_angle_error(p1, p2) - 1.0));
        }
        o.check(worst <= 0.05, "z-angle loss vs (phi1^2 + phi2^2)/5: worst relative deviation %.2f%%", 100 * worst);
    }
    {
        const std::pair<double, double> pairs[] = {{157.57, 1000}, {236.36, 1000}, {315.15, 1000}, {1000, 1800}, {500, 1500}};
        for (auto [on, off] : pairs) {
            double prev = 1e300, worst_s = 0.0;
            int violations = 0;
            for (int i = 0; i <= 250; ++i) {
                const double s = 0.5 + 0.01 * i;
                const double a2 = std::norm(
                    switching_amplitude(TwoChannelSpec::from_ghz(0.0, on * 1e-3, off * 1e-3, s, CZPulseParams::ramp_for_sigma(s))));
                if (a2 >= prev) {
                    if (!violations) worst_s = s;
                    ++violations;
                }
                prev = a2;
            }
            o.check(violations == 0, "|A|^2 monotone on sigma in [0.5, 3] ns for (%.2f, %.0f) MHz: %d rises%s", on, off,
                    violations, violations ? (", first at sigma = " + std::to_string(worst_s)).c_str() : "");
        }
    }
    {
        const double sigma = 1.24, ramp = CZPulseParams::ramp_for_sigma(sigma);
        for (double ratio : {0.02, 0.05, 0.1, 0.2, 0.3}) {
            TwoChannelSpec s = TwoChannelSpec::from_ghz(ratio * 0.23636, 0.23636, 1.0, sigma, ramp);
            const double est = switching_probability(s).p_sw;
            const double exact = oracle::exact_switch_probability(s.G, s.profile());
            o.check(within_rel(est, exact, 0.15), "G/Delta_on %.2f: p_sw estimate %.3e vs exact two-level %.3e (%+.1f%%)",
                    ratio, est, exact, 100 * (est / exact - 1));
        }
    }
    {
        // same-fidelity rows: t_gate * eta should be constant
        for (int pair : {0, 1}) {
            double prod[3], mean = 0;
            for (int k = 0; k < 3; ++k) {
                const int i = 2 * k + pair;
                prod[k] = table_row(i).pulse.t_gate() * kTable[i].eta * 1e-3;
                mean += prod[k] / 3;
            }
            double worst = 0;
            for (double p : prod) worst = std::max(worst, std::abs(p / mean - 1));
            o.check(worst <= 0.10, "%s rows: t_gate * eta = %.2f, %.2f, %.2f (spread %.1f%% <= 10%%)",
                    pair ? "99.99%" : "99.9%", prod[0], prod[1], prod[2], 100 * worst);
        }
    }
    return o;
}

struct Criterion {
    const char* title;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (!std::strcmp(argv[i], "--criterion") && i + 1 < argc) only = std::atoi(argv[++i]);
        else if (!std::strcmp(argv[i], "--cache") && i + 1 < argc) g_cache_path = argv[++i];
        else {
            std::fprintf(stderr, "usage: %s [--criterion N] [--cache FILE]\n", argv[0]);
            return 2;
        }
    }

    const std::vector<Criterion> all = {
        {"reference CZ gates", criterion1},
        {"five-nines gate", criterion2},
        {"switching estimator columns", criterion3},
        {"lower-band and qubit-qubit estimates", criterion4},
        {"pulse-error cross-validation", criterion5},
        {"composite CZ23", criterion6},
        {"q4 variant", criterion7},
        {"idle ZZ error", criterion8},
        {"g optimization", criterion9},
        {"property suite", criterion10},
    };
    if (only < 0 || only > static_cast<int>(all.size())) {
        std::fprintf(stderr, "criterion must be in 1..%zu\n", all.size());
        return 2;
    }

    int failed = 0;
    for (size_t i = 0; i < all.size(); ++i) {
        if (only && static_cast<int>(i) + 1 != only) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = all[i].run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.details.push_back(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s criterion %zu: %s (%.0f s)\n", o.pass ? "PASS" : "FAIL", i + 1, all[i].title, secs);
        for (const auto& d : o.details) std::printf("    %s\n", d.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    return failed ? 1 : 0;
}
