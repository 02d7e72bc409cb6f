import math

import numpy as np
import pytest

import qvn


def test_basis_size():
    assert len(qvn.enumerate_labels(9)) == 220


def test_hamiltonian_is_symmetric():
    d = qvn.DeviceConfig.defaults()
    h = qvn.hamiltonian(d, [7.5, 10.0, 10.0, 10.0])
    assert h.shape == (220, 220)
    assert np.allclose(h, h.T)


def test_invalid_device_raises():
    d = qvn.DeviceConfig.defaults()
    d.memory_freqs = [8.3]
    with pytest.raises(ValueError):
        d.validate()


def test_switching_estimate_matches_table_row():
    d = qvn.DeviceConfig.defaults(0.3, 0.045)
    e = qvn.cz_min_fidelity_estimate(d, 1.24, 7.0)
    assert e["p_sw"] == pytest.approx(1.2e-3, rel=0.05)
    assert e["f11_est"] == pytest.approx(1 - 2 * e["p_sw"])


def test_f_ave_identity():
    u = qvn.cz_target()
    assert qvn.f_ave(u, u) == pytest.approx(1.0, abs=1e-14)


def test_single_qubit_bus_gate():
    d = qvn.DeviceConfig.defaults(0.3, 0.045)
    d.n_qubits = 1
    d.memory_freqs = [8.3]
    sim = qvn.CZSimulator(d, 0)
    pulse = qvn.CZPulse(omega_on=6.774, t_on=9.93, t_ramp=7.0)
    assert pulse.sigma == pytest.approx(7.0 / (4 * math.sqrt(2)))
    g = sim.gate(pulse)
    assert g.shape == (4, 4)
    r = sim.evaluate(pulse)
    assert 0.99 < r.f_ave <= 1.0
    assert abs(r.z_angles[0]) <= math.pi


def test_zz_and_idle_error():
    d = qvn.DeviceConfig.defaults(0.4, 0.06)
    w = qvn.omega_zz_khz(d)
    assert w < 0
    assert qvn.idle_error(w, 1000.0, 4) == pytest.approx((2 * math.pi * w * 1e-3) ** 2 * 16)
