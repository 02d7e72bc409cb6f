#pragma once

#include "qvn/fidelity.hpp"
#include "qvn/minimize.hpp"
#include "qvn/pulses.hpp"

#include <complex>
#include <memory>
#include <string>

namespace qvn {

struct GateOptions {
    ModelOptions model;
    PropagatorOptions propagator;
    double f_tol = 1e-9;        // on 1 - F_ave
    int max_evaluations = 2000;
    bool restart = true;        // one restart from the perturbed optimum
};

// Qubit-bus CZ on qubit k of a device, lab frame, idle eigenbasis with q_k at
// omega_off and every other qubit parked.
class CZSimulator {
public:
    CZSimulator(const DeviceConfig& device, int qubit = 0, const GateOptions& opt = {});

    const QvnModel& model() const { return prop_->model(); }
    const EigenBasis& idle() const { return idle_; }
    const std::vector<Label>& labels() const { return labels_; }
    const Propagator& propagator() const { return *prop_; }
    int qubit() const { return qubit_; }

    FreqSchedule schedule(const CZPulseParams& p) const;
    std::vector<double> grid(const CZPulseParams& p) const;

    ProjectedGate simulate(const CZPulseParams& p) const;
    // full bare-basis propagator (small models and tests)
    Eigen::MatrixXcd evolution(const CZPulseParams& p) const;
    FidelityReport evaluate(const CZPulseParams& p) const;

private:
    DeviceConfig device_;
    int qubit_;
    GateOptions opt_;
    std::unique_ptr<Propagator> prop_;
    EigenBasis idle_;
    std::vector<Label> labels_;
};

struct OptimizedGate {
    CZPulseParams pulse;
    ZAngles angles;
    FidelityReport report;
    ProjectedGate gate;
    int evaluations = 0;
    bool converged = false;
};

struct StageOneResult {
    double t_on = 0.0;
    double cost = 0.0;
    ZAngles seeds;
    std::vector<std::pair<double, double>> curve;  // (t_on, cost)
};

// Cost = sum | |U_ij| - I_ij | + | arg(U00 U11 / (U01 U10)) - pi |, scanned over t_on.
double stage_one_cost(const ProjectedGate& g);
StageOneResult optimize_cz_stage1(const CZSimulator& sim, double sigma, double t_ramp,
                                  std::optional<double> omega_on = std::nullopt);

// Nelder-Mead over (omega_on, t_on); the z angles are optimized for every candidate.
OptimizedGate optimize_cz(const CZSimulator& sim, double sigma, double t_ramp, const GateOptions& opt = {});

// Gate in the frame rotating with the idle eigenenergies: row a times exp(+i E_a t_gate).
ProjectedGate rotating_frame(const ProjectedGate& g, const EigenBasis& idle, const ExcitationBasis& basis,
                             double t_gate);

// Same with one local clock per mode: each occupied mode contributes its idle
// single-excitation frequency, so conditional idle phases stay in the gate.
ProjectedGate local_clock_frame(const ProjectedGate& g, const EigenBasis& idle, const ExcitationBasis& basis,
                                double t_gate);

// Fidelity loss of an optimized pulse after shifting t_on by dt_on (ns) and omega_on by
// domega_on (GHz), with the reference z angles kept (uncompensated) or re-optimized.
struct PulseErrorResult {
    double f_ref = 0.0;
    double f_uncompensated = 0.0;
    double f_compensated = 0.0;
    double loss_uncompensated() const { return f_ref - f_uncompensated; }
    double loss_compensated() const { return f_ref - f_compensated; }
};
PulseErrorResult simulate_pulse_error(const CZSimulator& sim, const CZPulseParams& pulse, double dt_on,
                                      double domega_on);

// MOVE between a qubit and its memory or the bus. The qubit idles at off_freq
// while it holds the excitation and is parked otherwise.
struct MoveSpec {
    int qubit = 0;
    int src_mode = 0;
    int dst_mode = 0;
    double sigma = 0.177;
    double t_ramp = 1.0;
};

class MoveSimulator {
public:
    MoveSimulator(const DeviceConfig& device, const MoveSpec& spec, const GateOptions& opt = {});

    const QvnModel& model() const { return prop_->model(); }
    const MoveSpec& spec() const { return spec_; }
    double omega_start() const { return omega_start_; }
    double omega_end() const { return omega_end_; }
    // resonator frequency and coupling of the transfer channel
    double channel_freq() const;
    double channel_coupling() const;

    ExcursionParams pulse(double omega_on, double t_on) const;
    FreqSchedule schedule(const ExcursionParams& p) const;
    std::vector<double> grid(const ExcursionParams& p) const;
    // order: vacuum, source, destination; rows end basis, columns start basis.
    // Only the (vacuum, source) columns and (vacuum, destination) rows are meaningful.
    ProjectedGate simulate(const ExcursionParams& p) const;

private:
    DeviceConfig device_;
    MoveSpec spec_;
    GateOptions opt_;
    std::unique_ptr<Propagator> prop_;
    double omega_start_ = 0.0, omega_end_ = 0.0;
    EigenBasis idle_start_, idle_end_;
    std::vector<Label> labels_;
};

struct OptimizedMove {
    MoveSpec spec;
    ExcursionParams pulse;
    double transfer = 0.0;   // |<dst|U|src>|^2
    double phase = 0.0;      // z angle: arg of the transfer amplitude relative to vacuum
    double leakage = 0.0;
    int evaluations = 0;
    bool converged = false;  // transfer >= 0.99 and the simplex collapsed
};
OptimizedMove optimize_move(const MoveSimulator& sim, const GateOptions& opt = {});

// One frequency excursion of a single qubit while every other qubit stays parked.
// For a MOVE, the data in src_mode ends up in dst_mode; -1 leaves data in place.
struct Segment {
    std::string name;
    int qubit = 0;
    ExcursionParams pulse;
    int src_mode = -1;
    int dst_mode = -1;
    double duration() const { return pulse.t_gate(); }
};

struct SequenceSpec {
    DeviceConfig device;
    std::vector<Segment> segments;
    std::vector<int> data_modes;  // where each data qubit starts
    ModelOptions model{4, 6, false};
    PropagatorOptions propagator;
    double total_time() const;
};

using StateSpec = std::vector<std::pair<Label, std::complex<double>>>;

struct SegmentReport {
    std::string name;
    double duration = 0.0;
    std::vector<double> z_angles;   // per data qubit, relative to the vacuum
    std::vector<double> transfer;   // single-excitation population kept per data qubit
};

struct SequenceResult {
    double fidelity = 1.0;  // |<ideal|final>|^2 after the z corrections
    double total_time = 0.0;
    std::vector<SegmentReport> segments;
    Eigen::VectorXcd final_state;
    std::vector<int> data_modes;  // final positions
};

// Initial state in the dressed basis of the first boundary, ideal in that of the last.
// Frame unwinding uses qubits at off_freq and resonators at their bare frequencies.
SequenceResult run_sequence(const SequenceSpec& spec, const StateSpec& initial, const StateSpec& ideal);

inline GateOptions gate_options_with_cap(int max_excitations) {
    GateOptions g;
    g.model.max_excitations = max_excitations;
    return g;
}

struct CZ23Options {
    int qubit_a = 1;           // holds its data during the CZ
    int qubit_b = 2;           // routes its data through the bus
    double memory_ramp = 1.3;  // ns; shorter ramps leak |11> -> |20> when the bus is loaded
    double bus_ramp = 3.0;     // ns
    double cz_sigma = 1.94;
    double cz_ramp = 11.0;
    GateOptions move = gate_options_with_cap(3);
    GateOptions cz = gate_options_with_cap(4);
    ModelOptions sequence{4, 6, false};
};

struct CZ23Design {
    SequenceSpec spec;
    std::vector<OptimizedMove> moves;
    OptimizedGate cz;
};
CZ23Design design_cz23(const DeviceConfig& device, const CZ23Options& opt = {});

// GHZ register over all memories and the same state with the |1...1> sign flipped.
StateSpec memory_ghz(const DeviceConfig& device, bool flipped);

}  // namespace qvn
