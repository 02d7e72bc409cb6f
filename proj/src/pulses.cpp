#include "qvn/pulses.hpp"

#include "qvn/device.hpp"

#include <cmath>
#include <stdexcept>

namespace qvn {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;
constexpr double kSqrtPi = 1.77245385090551602730;

double gauss_edge(double x) { return std::exp(-x * x) * (2.0 / kSqrtPi); }

// antiderivative of erf
double erf_int(double x) { return x * std::erf(x) + std::exp(-x * x) / kSqrtPi; }

}  // namespace

double CZPulseParams::ramp_for_sigma(double sigma) { return 4.0 * kSqrt2 * sigma; }
double CZPulseParams::sigma_for_ramp(double t_ramp) { return t_ramp / (4.0 * kSqrt2); }

void CZPulseParams::validate() const {
    if (!(sigma > 0)) throw std::invalid_argument("sigma must be positive");
    if (!(t_ramp > 0)) throw std::invalid_argument("t_ramp must be positive");
    if (!(t_on > 0)) throw std::invalid_argument("t_on must be positive");
    if (!(omega_on > 0) || !(omega_off > 0)) throw std::invalid_argument("pulse frequencies must be positive");
}

ExcursionParams ExcursionParams::from_cz(const CZPulseParams& p) {
    ExcursionParams e;
    e.omega_start = p.omega_off;
    e.omega_end = p.omega_off;
    e.omega_on = p.omega_on;
    e.sigma = p.sigma;
    e.t_ramp = p.t_ramp;
    e.t_on = p.t_on;
    return e;
}

double cz_profile_unchecked(const CZPulseParams& p, double t) {
    const double s = kSqrt2 * p.sigma;
    const double a = (t - 0.5 * p.t_ramp) / s;
    const double b = (t - p.t_gate() + 0.5 * p.t_ramp) / s;
    return p.omega_off + 0.5 * (p.omega_on - p.omega_off) * (std::erf(a) - std::erf(b));
}

double cz_profile(const CZPulseParams& p, double t) {
    if (t < 0 || t > p.t_gate()) throw std::invalid_argument("cz_profile: t outside [0, t_gate]");
    return cz_profile_unchecked(p, t);
}

double excursion_profile(const ExcursionParams& p, double t) {
    const double s = kSqrt2 * p.sigma;
    const double a = (t - 0.5 * p.t_ramp) / s;
    const double b = (t - p.t_gate() + 0.5 * p.t_ramp) / s;
    return p.omega_on + 0.5 * (p.omega_start - p.omega_on) * (1.0 - std::erf(a)) +
           0.5 * (p.omega_end - p.omega_on) * (1.0 + std::erf(b));
}

double excursion_rate(const ExcursionParams& p, double t) {
    const double s = kSqrt2 * p.sigma;
    const double a = (t - 0.5 * p.t_ramp) / s;
    const double b = (t - p.t_gate() + 0.5 * p.t_ramp) / s;
    return (-0.5 * (p.omega_start - p.omega_on) * gauss_edge(a) +
            0.5 * (p.omega_end - p.omega_on) * gauss_edge(b)) / s;
}

void SwitchParams::validate() const {
    if (!(sigma > 0) || !(t_ramp > 0)) throw std::invalid_argument("sigma and t_ramp must be positive");
    if (delta_on * delta_off <= 0)
        throw std::invalid_argument("switch detunings must share a sign and be nonzero (Landau-Zener regime)");
}

double switch_profile(const SwitchParams& p, double t) {
    if (t < 0 || t > p.t_ramp) throw std::invalid_argument("switch_profile: t outside [0, t_ramp]");
    const double x = (t - 0.5 * p.t_ramp) / (kSqrt2 * p.sigma);
    return 0.5 * (p.delta_off + p.delta_on) + 0.5 * (p.delta_off - p.delta_on) * std::erf(x);
}

double switch_rate(const SwitchParams& p, double t) {
    const double s = kSqrt2 * p.sigma;
    const double x = (t - 0.5 * p.t_ramp) / s;
    return 0.5 * (p.delta_off - p.delta_on) * gauss_edge(x) / s;
}

double switch_phase(const SwitchParams& p, double t) {
    const double s = kSqrt2 * p.sigma;
    const double x0 = -0.5 * p.t_ramp / s;
    const double x = (t - 0.5 * p.t_ramp) / s;
    return 0.5 * (p.delta_off + p.delta_on) * t + 0.5 * (p.delta_off - p.delta_on) * s * (erf_int(x) - erf_int(x0));
}

double sudden_limit_ton(double g_b) {
    if (!(g_b > 0)) throw std::invalid_argument("g_b must be positive");
    return kPi / (kSqrt2 * ang(g_b));
}

}  // namespace qvn
