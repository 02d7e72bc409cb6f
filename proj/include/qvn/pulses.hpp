#pragma once

namespace qvn {

// Frequencies in GHz, times in ns.
struct CZPulseParams {
    double omega_off = 7.5;
    double omega_on = 6.8;
    double sigma = 1.24;
    double t_ramp = 7.0;
    double t_on = 10.0;

    double t_gate() const { return t_on + t_ramp; }
    static double ramp_for_sigma(double sigma);  // 4*sqrt(2)*sigma
    static double sigma_for_ramp(double t_ramp);
    void validate() const;
};

// Frequency excursion with separate start and end levels; reduces to the CZ
// profile when start == end.
struct ExcursionParams {
    double omega_start = 7.5;
    double omega_on = 6.8;
    double omega_end = 7.5;
    double sigma = 1.24;
    double t_ramp = 7.0;
    double t_on = 10.0;

    double t_gate() const { return t_on + t_ramp; }
    static ExcursionParams from_cz(const CZPulseParams& p);
};

// Detunings in rad/ns.
struct SwitchParams {
    double delta_off = 0.0;
    double delta_on = 0.0;
    double sigma = 1.0;
    double t_ramp = 4.0;
    void validate() const;
};

double cz_profile(const CZPulseParams& p, double t);
double cz_profile_unchecked(const CZPulseParams& p, double t);
double excursion_profile(const ExcursionParams& p, double t);
double excursion_rate(const ExcursionParams& p, double t);  // d eps / dt, GHz/ns

double switch_profile(const SwitchParams& p, double t);
double switch_rate(const SwitchParams& p, double t);
// integral of the switch profile from 0 to t (closed form)
double switch_phase(const SwitchParams& p, double t);

double sudden_limit_ton(double g_b);

}  // namespace qvn
