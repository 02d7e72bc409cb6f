#include "qvn/error_estimators.hpp"

#include "two_level_oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace qvn;
using cd = std::complex<double>;

namespace {

// A by composite Simpson with a cumulatively integrated phase
cd simpson_amplitude(const TwoChannelSpec& s, int n = 200000) {
    SwitchParams p = s.profile();
    const double h = p.t_ramp / n;
    cd acc = 0.0;
    double phase = 0.0, prev = switch_profile(p, 0.0);
    for (int i = 0; i <= n; ++i) {
        const double t = std::min(i * h, p.t_ramp);
        const double d = switch_profile(p, t);
        if (i > 0) {
            // Simpson on the sub-interval for the phase
            phase += h / 6.0 * (prev + 4.0 * switch_profile(p, t - 0.5 * h) + d);
        }
        prev = d;
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        acc += w * switch_rate(p, t) / (d * d) * std::polar(1.0, -phase);
    }
    return s.delta_on * acc * h / 3.0;
}

}  // namespace

TEST(Switching, AmplitudeMatchesSimpsonQuadrature) {
    for (double sigma : {0.6, 1.24, 2.3}) {
        TwoChannelSpec s = TwoChannelSpec::from_ghz(0.0636, 0.2364, 1.0, sigma, CZPulseParams::ramp_for_sigma(sigma));
        cd a = switching_amplitude(s);
        cd ref = simpson_amplitude(s);
        EXPECT_LT(std::abs(a - ref), 1e-7 * std::max(1.0, std::abs(ref))) << sigma;
    }
}

TEST(Switching, SuddenLimitApproachesFullStep) {
    // for sigma -> 0 the phase has no time to wind: A -> Delta_on (1/Delta_on - 1/Delta_off)
    // (the erf(2) edges leave the endpoints half a percent short of the plateaus)
    TwoChannelSpec s = TwoChannelSpec::from_ghz(0.01, 0.3, 1.0, 1e-4, CZPulseParams::ramp_for_sigma(1e-4));
    EXPECT_NEAR(std::abs(switching_amplitude(s)), 1.0 - 0.3, 0.01);
}

TEST(Switching, ProbabilityScalesWithCouplingSquared) {
    TwoChannelSpec s = TwoChannelSpec::from_ghz(0.02, 0.3, 1.0, 1.24, 7.0);
    SwitchErrorReport r1 = switching_probability(s);
    s.G *= 2;
    SwitchErrorReport r2 = switching_probability(s);
    EXPECT_NEAR(r2.p_sw / r1.p_sw, 4.0, 1e-9);
    EXPECT_NEAR(r1.a_sq, r2.a_sq, 1e-15);
}

TEST(Switching, WeakCouplingAgreesWithExactTwoLevel) {
    const double sigma = 1.24, ramp = CZPulseParams::ramp_for_sigma(sigma);
    TwoChannelSpec s = TwoChannelSpec::from_ghz(0.03 * 0.3, 0.3, 1.0, sigma, ramp);
    const double est = switching_probability(s).p_sw;
    const double exact = oracle::exact_switch_probability(s.G, s.profile());
    EXPECT_NEAR(est / exact, 1.0, 0.15);
}

TEST(Switching, RejectsStrongCoupling) {
    TwoChannelSpec s = TwoChannelSpec::from_ghz(0.4, 0.3, 1.0, 1.0, 4.0);
    EXPECT_THROW(switching_probability(s), std::invalid_argument);
}

TEST(ChannelSpecs, TableTwoParameters) {
    DeviceConfig d = DeviceConfig::defaults(0.3, 0.045);
    TwoChannelSpec up = cz_switch_spec(d, 1.24, 7.0);
    EXPECT_NEAR(up.G, ang(std::sqrt(2.0) * 0.045), 1e-12);
    EXPECT_NEAR(up.delta_on, ang(0.3 - std::sqrt(2.0) * 0.045), 1e-12);
    EXPECT_NEAR(up.delta_off, ang(1.0), 1e-12);
    TwoChannelSpec lo = lower_band_spec(d, 1.24, 7.0);
    EXPECT_NEAR(lo.delta_on, ang(0.3 + 2 * 0.045 * 0.045 / 0.3), 1e-12);
    MinFidelityEstimate e = cz_min_fidelity_estimate(d, 1.24, 7.0);
    EXPECT_NEAR(e.f11_est, 1.0 - 2.0 * e.switching.p_sw, 1e-15);
}

TEST(PulseErrors, ZAngleErrorFormula) { EXPECT_NEAR(z_angle_error(0.1, 0.2), 0.01, 1e-15); }

TEST(PulseErrors, PrecisionInvertsCompensatedLoss) {
    for (double loss : {1e-3, 1e-4}) {
        PulsePrecision p = pulse_precision(loss, 0.045);
        EXPECT_NEAR(compensated_pulse_error(p.dt_on, 0.0, 0.045).loss, loss, 1e-9 * loss);
        EXPECT_NEAR(compensated_pulse_error(0.0, p.domega_on, 0.045).loss, loss, 1e-9 * loss);
    }
}

TEST(PulseErrors, CompensatedSmallAngleLimit) {
    // theta ~ 2 sqrt2 g dt, so loss ~ g^2 dt^2 / 2
    const double g = ang(0.045), dt = 1e-3;
    EXPECT_NEAR(compensated_pulse_error(dt, 0.0, 0.045).loss, 0.5 * g * g * dt * dt, 1e-6 * g * g * dt * dt);
}

TEST(PulseErrors, UncompensatedQuadraticInErrors) {
    CZPulseParams p;
    p.omega_on = 6.8;
    p.t_on = 9.9;
    UncompensatedError a = uncompensated_pulse_error(0.01, 0.0, p, 6.5, 0.045);
    UncompensatedError b = uncompensated_pulse_error(0.02, 0.0, p, 6.5, 0.045);
    EXPECT_NEAR(b.exact / a.exact, 4.0, 1e-12);
    UncompensatedError c = uncompensated_pulse_error(0.0, 0.001, p, 6.5, 0.045);
    EXPECT_NEAR(c.exact, std::pow(9.9 * ang(0.001), 2) / 5.0, 1e-15);
}

TEST(QubitQubit, LowerBandDominates) {
    QubitQubitEstimate q = qubit_qubit_min_fidelity(0.3, 0.3, 0.045, 1.24, 7.0);
    EXPECT_NEAR(q.f_min_est, 1.0 - 2.0 * q.lower.p_sw, 1e-15);
    EXPECT_GT(q.f_min_est, 0.999);
}
