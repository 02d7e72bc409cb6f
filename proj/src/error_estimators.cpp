#include "qvn/error_estimators.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <cmath>
#include <memory>
#include <stdexcept>

namespace qvn {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

struct Integrand {
    SwitchParams p;
    bool imag = false;
};

double integrand(double t, void* data) {
    const auto* d = static_cast<const Integrand*>(data);
    const double x = (t - 0.5 * d->p.t_ramp) / (kSqrt2 * d->p.sigma);
    const double delta = 0.5 * (d->p.delta_off + d->p.delta_on) + 0.5 * (d->p.delta_off - d->p.delta_on) * std::erf(x);
    const double w = switch_rate(d->p, t) / (delta * delta);
    const double ph = switch_phase(d->p, t);
    return d->imag ? -w * std::sin(ph) : w * std::cos(ph);
}

struct WorkspaceDeleter {
    void operator()(gsl_integration_workspace* w) const { gsl_integration_workspace_free(w); }
};

double qag(Integrand& f, double b, double abs_tol, double rel_tol) {
    constexpr size_t kLimit = 2000;
    std::unique_ptr<gsl_integration_workspace, WorkspaceDeleter> ws(gsl_integration_workspace_alloc(kLimit));
    gsl_function fn{&integrand, &f};
    double result = 0.0, err = 0.0;
    gsl_error_handler_t* old = gsl_set_error_handler_off();
    int status = gsl_integration_qag(&fn, 0.0, b, abs_tol, rel_tol, kLimit, GSL_INTEG_GAUSS61, ws.get(), &result, &err);
    gsl_set_error_handler(old);
    if (status != GSL_SUCCESS)
        throw std::runtime_error(std::string("switching amplitude quadrature failed: ") + gsl_strerror(status));
    return result;
}

}  // namespace

TwoChannelSpec TwoChannelSpec::from_ghz(double g, double delta_on, double delta_off, double sigma, double t_ramp) {
    return {ang(g), ang(delta_on), ang(delta_off), sigma, t_ramp};
}

void TwoChannelSpec::validate() const {
    profile().validate();
    if (!(G >= 0)) throw std::invalid_argument("coupling G must be non-negative");
    if (!(G < std::abs(delta_on))) throw std::invalid_argument("perturbative regime requires G < |delta_on|");
}

std::complex<double> switching_amplitude(const TwoChannelSpec& spec, double rel_tol) {
    spec.profile().validate();
    if (spec.delta_on == spec.delta_off) return {0.0, 0.0};
    // the integrand's L1 norm is |1/delta_on - 1/delta_off| for a monotone profile
    const double l1 = std::abs(1.0 / spec.delta_on - 1.0 / spec.delta_off);
    const double abs_tol = 1e-3 * rel_tol * l1;
    Integrand re{spec.profile(), false}, im{spec.profile(), true};
    std::complex<double> a(qag(re, spec.t_ramp, abs_tol, rel_tol), qag(im, spec.t_ramp, abs_tol, rel_tol));
    return spec.delta_on * a;
}

SwitchErrorReport switching_probability(const TwoChannelSpec& spec, const std::string& context) {
    spec.validate();
    SwitchErrorReport r;
    r.context = context;
    r.a = switching_amplitude(spec);
    r.a_sq = std::norm(r.a);
    const double ratio = spec.G / spec.delta_on;
    r.p_sw = ratio * ratio * r.a_sq;
    return r;
}

TwoChannelSpec cz_switch_spec(const DeviceConfig& dev, double sigma, double t_ramp) {
    return TwoChannelSpec::from_ghz(kSqrt2 * dev.g_b, dev.eta - kSqrt2 * dev.g_b, dev.off_freq - dev.bus_freq, sigma,
                                    t_ramp);
}

TwoChannelSpec lower_band_spec(const DeviceConfig& dev, double sigma, double t_ramp) {
    return TwoChannelSpec::from_ghz(dev.g_b, dev.eta + 2.0 * dev.g_b * dev.g_b / dev.eta,
                                    dev.off_freq - dev.bus_freq, sigma, t_ramp);
}

MinFidelityEstimate cz_min_fidelity_estimate(const DeviceConfig& dev, double sigma, double t_ramp) {
    MinFidelityEstimate e;
    e.switching = switching_probability(cz_switch_spec(dev, sigma, t_ramp), "11-02");
    e.f11_est = 1.0 - 2.0 * e.switching.p_sw;
    return e;
}

double z_angle_error(double phi1, double phi2) { return (phi1 * phi1 + phi2 * phi2) / 5.0; }

UncompensatedError uncompensated_pulse_error(double dt_on, double domega_on, const CZPulseParams& pulse,
                                             double bus_freq, double g_b) {
    const double dw = ang(domega_on);
    const double a = ang(pulse.omega_off - pulse.omega_on);
    const double b = ang(pulse.omega_off - bus_freq);
    const double ts = sudden_limit_ton(g_b);
    UncompensatedError e;
    e.exact = (a * a * dt_on * dt_on + pulse.t_on * pulse.t_on * dw * dw) / 5.0;
    e.sudden = (b * b * dt_on * dt_on + ts * ts * dw * dw) / 5.0;
    return e;
}

CompensatedError compensated_pulse_error(double dt_on, double domega_on, double g_b) {
    if (!(g_b > 0)) throw std::invalid_argument("g_b must be positive");
    const double g = ang(g_b);
    CompensatedError e;
    e.delta = -kPi * ang(domega_on) / (2.0 * kSqrt2 * g);
    e.e_theta = 2.0 * g * g * dt_on * dt_on;
    if (e.e_theta > 1.0) throw std::invalid_argument("t_on error outside the leading-order regime");
    e.theta = 2.0 * std::asin(std::sqrt(e.e_theta));
    e.loss = 0.15 * e.delta * e.delta + e.theta * e.theta / 16.0;
    return e;
}

PulsePrecision pulse_precision(double loss, double g_b) {
    if (!(loss > 0) || !(g_b > 0)) throw std::invalid_argument("loss and g_b must be positive");
    const double g = ang(g_b);
    PulsePrecision p;
    p.loss = loss;
    const double theta = 4.0 * std::sqrt(loss);
    p.dt_on = std::sin(0.5 * theta) / (kSqrt2 * g);
    const double delta = std::sqrt(loss / 0.15);
    p.domega_on = delta * 2.0 * kSqrt2 * g / kPi / kTwoPi;
    return p;
}

QubitQubitEstimate qubit_qubit_min_fidelity(double eta1, double eta2, double g, double sigma, double t_ramp,
                                            double delta_off) {
    if (!(eta1 > 0) || !(eta2 > 0) || !(g >= 0)) throw std::invalid_argument("invalid qubit-qubit parameters");
    QubitQubitEstimate q;
    q.lower = switching_probability(TwoChannelSpec::from_ghz(g, eta1 + 2.0 * g * g / eta1, delta_off, sigma, t_ramp),
                                    "01-10");
    q.upper = switching_probability(
        TwoChannelSpec::from_ghz(kSqrt2 * g, eta1 + eta2 - kSqrt2 * g, delta_off, sigma, t_ramp), "11-02");
    q.f_min_est = 1.0 - 2.0 * q.lower.p_sw;
    return q;
}

}  // namespace qvn
