import numpy as np
import pytest

from eseem.pulses import (PulseSpec, composite_pi, electron_rotation,
                          rotation_operator)
from eseem.spinops import is_unitary, kron, spin_matrices
from eseem.system import nc60_params


def spin32_rotation_closed_form(theta):
    """Trigonometric closed form of the on-resonance spin-3/2 rotation."""
    c3 = np.cos(theta / 2) ** 3
    s3 = np.sin(theta / 2) ** 3
    cc = np.cos(3 * theta / 2)
    ss = np.sin(3 * theta / 2)
    a = (1j / np.sqrt(3)) * (s3 + ss)
    g = -(1 / np.sqrt(3)) * (c3 - cc)
    b = -(1j / 3) * (s3 - 2 * ss)
    e = (c3 + 2 * cc) / 3
    return np.array([
        [c3, a, g, -1j * s3],
        [a, e, b, g],
        [g, b, e, a],
        [-1j * s3, g, a, c3]])


@pytest.mark.parametrize("theta", [0.3, np.pi / 2, 1.9, np.pi, 5.1])
def test_rotation_matches_closed_form(theta):
    got = electron_rotation(theta, 0.0, 1.5)
    assert np.abs(got - spin32_rotation_closed_form(theta)).max() <= 1e-12


def test_perfect_pi_is_minus_i_antidiagonal():
    got = electron_rotation(np.pi, 0.0, 1.5)
    assert np.abs(got - (-1j) * np.fliplr(np.eye(4))).max() <= 1e-12


def test_half_pi_turns_sz_into_sy():
    # the single-quantum coherence pattern (+/- i sqrt(3)/2, +/- i) of Sy
    sy, sz = spin_matrices(1.5)[1:]
    r = electron_rotation(np.pi / 2, 0.0, 1.5)
    got = r @ sz @ r.conj().T
    assert np.abs(got - sy).max() <= 1e-12
    assert got[0, 1] == pytest.approx(-1j * np.sqrt(3) / 2, abs=1e-12)
    assert got[1, 2] == pytest.approx(-1j, abs=1e-12)


def test_rotation_operator_ideal_is_nuclear_identity():
    p = nc60_params()
    u = rotation_operator(PulseSpec(angle=1.1, phase=0.4), p)
    expected = kron(electron_rotation(1.1, 0.4, 1.5), np.eye(3))
    assert np.abs(u - expected).max() <= 1e-12
    assert is_unitary(u)


def test_composite_pi_nets_a_pi_rotation():
    # (pi/2)x (pi)y (pi/2)x composes to a pi rotation about y, up to a
    # global phase; a refocusing pulse of full flip angle either way
    p = nc60_params()
    u = rotation_operator(composite_pi(), p)
    ref = rotation_operator(PulseSpec(angle=np.pi, phase=np.pi / 2), p)
    phase = u[0, 9] / ref[0, 9]  # electron corner, nuclear-diagonal element
    assert abs(abs(phase) - 1.0) <= 1e-12
    assert np.abs(u - phase * ref).max() <= 1e-10


def test_composite_scaling_applies_to_all_segments():
    p = nc60_params()
    scale = 1.07
    u = rotation_operator(composite_pi(), p, scale=scale)
    segs = [electron_rotation(scale * a, ph, 1.5)
            for a, ph in composite_pi().composite]
    expected = kron(segs[2] @ segs[1] @ segs[0], np.eye(3))
    assert np.abs(u - expected).max() <= 1e-12


def test_finite_pulse_approaches_ideal_for_short_durations():
    p = nc60_params()
    ideal = rotation_operator(PulseSpec(angle=np.pi), p)
    finite = rotation_operator(
        PulseSpec(angle=np.pi, model="finite", duration_s=1e-12), p,
        f_mw_hz=p.f_e_hz)
    assert np.abs(finite - ideal).max() <= 1e-3
    shorter = rotation_operator(
        PulseSpec(angle=np.pi, model="finite", duration_s=1e-13), p,
        f_mw_hz=p.f_e_hz)
    assert np.abs(shorter - ideal).max() <= 1e-4


def test_finite_pulse_realistic_duration_is_unitary():
    p = nc60_params()
    u = rotation_operator(
        PulseSpec(angle=np.pi, model="finite", duration_s=112e-9), p,
        f_mw_hz=p.f_e_hz + p.a_hz)
    assert is_unitary(u)


def test_pulse_spec_validation():
    with pytest.raises(ValueError):
        PulseSpec(angle=0.0)
    with pytest.raises(ValueError):
        PulseSpec(angle=7.0)
    with pytest.raises(ValueError):
        PulseSpec(angle=np.pi, model="finite")
    with pytest.raises(ValueError):
        PulseSpec(angle=np.pi, model="gaussian")
    with pytest.raises(ValueError):
        PulseSpec(angle=np.pi, composite=())
    spec = PulseSpec(angle=np.pi)
    assert spec.segments() == ((np.pi, 0.0),)
