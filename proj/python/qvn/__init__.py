"""Qubit-bus CZ gate simulation for quantum von Neumann devices."""

from ._qvn import (
    CZPulse,
    CZSimulator,
    DeviceConfig,
    FidelityReport,
    GateOptions,
    NonDispersiveError,
    NumericalError,
    OptimizedGate,
    SwitchErrorReport,
    cz_min_fidelity_estimate,
    cz_target,
    enumerate_labels,
    f_ave,
    hamiltonian,
    idle_error,
    omega_zz_khz,
    optimize_cz,
    pulse_precision,
    qubit_bus_hamiltonian,
    switching_probability,
    transmon_frequency,
)

__all__ = [name for name in dir() if not name.startswith("_")]
