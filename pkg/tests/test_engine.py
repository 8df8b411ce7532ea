import numpy as np
import pytest

from eseem.analytic import v_outer
from eseem.engine import (EchoExperiment, EchoTrace, detect,
                          detection_operator, free_evolution,
                          microwave_freq_hz, run_two_pulse_echo,
                          thermal_deviation, validate_aht)
from eseem.hamiltonians import TWO_PI, delta_hz, line_center_hz
from eseem.pulses import PulseSpec, composite_pi, rotation_operator
from eseem.spinops import is_unitary, kron, projector_mi, spin_matrices
from eseem.system import nc60_params


@pytest.fixture
def preset():
    return nc60_params()


def make_exp(p, m_i=1.0, engine="average-hamiltonian", theta1=np.pi / 2,
             theta2=np.pi, tau=None, **kw):
    if tau is None:
        tau = np.linspace(1e-6, 200e-6, 256)
    return EchoExperiment(system=p, pulse1=PulseSpec(theta1),
                          pulse2=PulseSpec(theta2), tau_grid=tau,
                          detect_m_i=m_i, engine=engine,
                          resonance_offset_hz=kw.pop("resonance_offset_hz", 0.0),
                          **kw)


def test_outer_line_modulation_law(preset):
    d = delta_hz(preset)
    for m_i in (1.0, -1.0):
        trace = run_two_pulse_echo(make_exp(preset, m_i=m_i))
        ref = 2 + 3 * np.cos(2 * TWO_PI * d * trace.tau_s)
        assert np.abs(trace.v - ref).max() <= 1e-9
        assert trace.metadata["max_imag_residual"] <= 1e-9


def test_center_line_flat_at_exact_amplitude(preset):
    trace = run_two_pulse_echo(make_exp(preset, m_i=0.0))
    assert np.ptp(trace.v) <= 1e-9
    # exact propagation gives 5*sin(theta1)*sin^2(theta2/2), which exceeds
    # the published closed-form prefactor by 5/2 (see v_center)
    assert np.abs(trace.v - 5.0).max() <= 1e-9


def test_sign_change_at_quarter_period(preset):
    d = delta_hz(preset)
    tau_star = 0.25 / d  # 2*pi*d*tau = pi/2
    trace = run_two_pulse_echo(make_exp(preset, tau=np.array([tau_star])))
    assert trace.v[0] == pytest.approx(-1.0, abs=1e-9)


@pytest.mark.parametrize("theta1,theta2", [
    (np.pi / 2, 2 * np.pi / 3), (0.9, 2.2), (2.4, 1.1), (np.pi / 2, np.pi / 7)])
def test_engine_matches_closed_form(preset, theta1, theta2):
    d = delta_hz(preset)
    tau = np.linspace(1e-6, 2 / d, 64)
    trace = run_two_pulse_echo(
        make_exp(preset, theta1=theta1, theta2=theta2, tau=tau))
    assert np.abs(trace.v - v_outer(tau, theta1, theta2, d)).max() <= 1e-8


def test_offset_independence(preset):
    tau = np.linspace(1e-6, 80e-6, 48)
    for engine in ("average-hamiltonian", "exact-lab-frame"):
        ref = run_two_pulse_echo(make_exp(preset, engine=engine, tau=tau)).v
        for offset in (-2e6, 1.3e6, 2e6):
            v = run_two_pulse_echo(make_exp(
                preset, engine=engine, tau=tau,
                resonance_offset_hz=offset)).v
            assert np.abs(v - ref).max() <= 1e-9


def test_mi_symmetry(preset):
    tau = np.linspace(1e-6, 150e-6, 96)
    up = run_two_pulse_echo(make_exp(preset, m_i=1.0, theta2=2.0, tau=tau)).v
    dn = run_two_pulse_echo(make_exp(preset, m_i=-1.0, theta2=2.0, tau=tau)).v
    assert np.abs(up - dn).max() <= 1e-9


def test_spin_half_no_modulation():
    p = nc60_params(s=0.5)
    tau = np.linspace(1e-6, 150e-6, 64)
    for m_i in (1.0, 0.0, -1.0):
        v = run_two_pulse_echo(make_exp(p, m_i=m_i, theta2=2.0, tau=tau)).v
        assert np.ptp(v) <= 1e-9


def test_echo_operator_outer_corner_phase(preset):
    # the refocusing block U R_pi U is -i antidiag(e^{-i phi},1,1,e^{-i phi})
    # with phi = 2*(2 pi delta)*tau, up to a global phase
    d_ang = TWO_PI * delta_hz(preset)
    f_mw = line_center_hz(preset, 1.0)
    r_pi = rotation_operator(PulseSpec(np.pi), preset)
    idx = preset.basis.mi_indices(1.0)
    for tau in (5e-6, 17.3e-6):
        u = free_evolution("average-hamiltonian", preset, tau, f_mw_hz=f_mw)
        op = (u @ r_pi @ u)[np.ix_(idx, idx)]
        expected = -1j * np.fliplr(np.diag(
            [np.exp(-2j * d_ang * tau), 1.0, 1.0, np.exp(-2j * d_ang * tau)]))
        phase = op[1, 2] / expected[1, 2]
        assert np.abs(op - phase * expected).max() <= 1e-9


def test_exact_engine_agrees_with_secular_at_third_order(preset):
    tau = np.linspace(1e-6, 100e-6, 64)
    ah = run_two_pulse_echo(make_exp(preset, tau=tau)).v
    ex = run_two_pulse_echo(make_exp(preset, engine="exact-lab-frame",
                                     tau=tau)).v
    # phase error ~ (a/we) relative on the modulation accumulates over tau
    a_over_we = preset.a_hz / preset.f_e_hz
    phase_max = 2 * TWO_PI * delta_hz(preset) * tau[-1]
    bound = 3.0 * 3.0 * a_over_we * phase_max  # amplitude 3, slope bound
    assert np.abs(ex - ah).max() <= bound
    assert np.abs(ex - ah).max() >= 1e-4  # the third-order physics is there


def test_stepped_engine_quadratic_convergence(preset):
    f_mw = line_center_hz(preset, 1.0)
    tau = 5.2e-6
    exact = free_evolution("exact-lab-frame", preset, tau, f_mw_hz=f_mw)
    err = {}
    for spp in (20, 40, 80):
        stepped = free_evolution("stepped-rotating-frame", preset, tau,
                                 f_mw_hz=f_mw, steps_per_period=spp)
        err[spp] = np.abs(stepped - exact).max()
    assert err[40] <= err[20] / 3.0
    assert err[80] <= err[40] / 3.0


def test_free_evolution_basics(preset):
    f_mw = preset.f_e_hz
    for engine in ("average-hamiltonian", "exact-lab-frame",
                   "stepped-rotating-frame"):
        u0 = free_evolution(engine, preset, 0.0, f_mw_hz=f_mw)
        assert np.allclose(u0, np.eye(12))
        u = free_evolution(engine, preset, 3.3e-6, 1.1e-6, f_mw_hz=f_mw)
        assert is_unitary(u)
    tau = 2e-6
    diag = free_evolution("average-hamiltonian", preset, tau, f_mw_hz=f_mw)
    assert np.abs(diag - np.diag(np.diag(diag))).max() == 0.0
    from eseem.hamiltonians import h_avg0, h_avg1
    phases = np.diag(h_avg0(preset, f_mw_hz=f_mw) + h_avg1(preset)).real
    assert np.allclose(np.diag(diag), np.exp(-1j * phases * tau))
    with pytest.raises(ValueError):
        free_evolution("stepped-rotating-frame", preset, 1e-6,
                       f_mw_hz=f_mw, steps_per_period=10)
    with pytest.raises(ValueError):
        free_evolution("magic", preset, 1e-6, f_mw_hz=f_mw)


def test_secular_hamiltonian_alone_gives_no_modulation(preset):
    # without the first-order correction the within-manifold level shifts
    # are linear in m_s and refocus completely: a flat echo at every tau
    from eseem.hamiltonians import h_avg0
    from eseem.spinops import expm_hermitian
    f_mw = line_center_hz(preset, 1.0)
    h = h_avg0(preset, f_mw_hz=f_mw)
    r1 = rotation_operator(PulseSpec(np.pi / 2), preset)
    r2 = rotation_operator(PulseSpec(np.pi), preset)
    order = preset.basis.electron_order()
    det_op = detection_operator(preset, 1.0)
    sigma0 = thermal_deviation(preset)
    values = []
    for tau in np.linspace(1e-6, 120e-6, 24):
        u = expm_hermitian(h, tau)
        sigma = np.where(order == 1, r1 @ sigma0 @ r1.conj().T, 0.0)
        sigma = u @ sigma @ u.conj().T
        sigma = np.where(order == -1, r2 @ sigma @ r2.conj().T, 0.0)
        sigma = sigma + sigma.conj().T
        sigma = u @ sigma @ u.conj().T
        values.append(np.trace(sigma @ det_op).real)
    assert np.ptp(values) <= 1e-9


def test_detect_examples(preset):
    sy = spin_matrices(1.5)[1]
    sz = spin_matrices(1.5)[2]
    sigma = kron(sy, projector_mi(1.0, 1.0))
    assert detect(sigma, preset, 1.0) == pytest.approx(5.0, abs=1e-12)
    assert detect(kron(sz, np.eye(3)), preset, 1.0) == pytest.approx(0.0,
                                                                     abs=1e-12)
    r = rotation_operator(PulseSpec(np.pi / 2), preset)
    after = r @ kron(sz, np.eye(3)) @ r.conj().T
    for m_i in (1.0, 0.0, -1.0):
        assert detect(after, preset, m_i) == pytest.approx(5.0, abs=1e-12)


def test_thermal_deviation_is_negative_sz(preset):
    sigma0 = thermal_deviation(preset)
    assert np.trace(sigma0) == pytest.approx(0.0, abs=1e-12)
    assert sigma0[0, 0].real < 0  # stretched state depleted


def test_detection_operator_structure(preset):
    d_op = detection_operator(preset, -1.0)
    sy = spin_matrices(1.5)[1]
    assert np.allclose(d_op, kron(sy, np.diag([0.0, 0.0, 1.0])))


def test_t2_damping(preset):
    tau = np.linspace(1e-6, 100e-6, 32)
    undamped = run_two_pulse_echo(make_exp(preset, tau=tau))
    damped = run_two_pulse_echo(make_exp(preset, tau=tau, t2_s=210e-6))
    assert np.allclose(damped.v, undamped.v * np.exp(-2 * tau / 210e-6))


def test_microwave_frequency_resolution(preset):
    exp = make_exp(preset, m_i=1.0)
    assert microwave_freq_hz(exp) == pytest.approx(line_center_hz(preset, 1.0))
    exp_off = make_exp(preset, m_i=1.0, resonance_offset_hz=5e3)
    assert microwave_freq_hz(exp_off) == pytest.approx(
        line_center_hz(preset, 1.0) - 5e3)
    p2 = nc60_params(f_mw_hz=9.6e9)
    exp2 = EchoExperiment(system=p2, pulse1=PulseSpec(np.pi / 2),
                          pulse2=PulseSpec(np.pi),
                          tau_grid=np.array([1e-6]), detect_m_i=1.0)
    assert microwave_freq_hz(exp2) == 9.6e9
    with pytest.raises(ValueError):
        microwave_freq_hz(make_exp(p2, resonance_offset_hz=0.0))


def test_experiment_validation(preset):
    with pytest.raises(ValueError):
        make_exp(preset, tau=np.array([2e-6, 1e-6]))
    with pytest.raises(ValueError):
        make_exp(preset, tau=np.array([-1e-6, 1e-6]))
    with pytest.raises(ValueError):
        make_exp(preset, m_i=0.5)
    with pytest.raises(ValueError):
        make_exp(preset, engine="nope")
    with pytest.raises(ValueError):
        EchoTrace(tau_s=np.array([1e-6]), v=np.array([1.0, 2.0]))


def test_composite_pulse_echo_sign(preset):
    # the composite refocuses about y, rotating the echo phase by pi
    tau = np.linspace(1e-6, 60e-6, 16)
    plain = run_two_pulse_echo(make_exp(preset, tau=tau)).v
    exp = EchoExperiment(system=preset, pulse1=PulseSpec(np.pi / 2),
                         pulse2=composite_pi(), tau_grid=tau,
                         detect_m_i=1.0, engine="average-hamiltonian",
                         resonance_offset_hz=0.0)
    comp = run_two_pulse_echo(exp).v
    assert np.abs(comp + plain).max() <= 1e-9


def test_validate_aht_report(preset):
    report = validate_aht(preset, tau_max=25e-6, n_points=21)
    assert report["passed"]
    assert not report["perturbative_warning"]
    assert report["freq_rel_dev_stepped"] <= 0.01
    assert report["freq_rel_dev_exact"] <= 5 * preset.a_hz / preset.f_e_hz
    freqs = report["modulation_freq_hz"]
    d = delta_hz(preset)
    assert freqs["average-hamiltonian"] == pytest.approx(2 * d, rel=1e-6)
    assert freqs["exact-lab-frame"] == pytest.approx(2 * d, rel=0.01)


def test_validate_aht_zero_coupling():
    report = validate_aht(nc60_params(a_hz=0.0), tau_max=10e-6, n_points=9)
    assert report["v_rel_dev_exact"] <= 1e-10
    assert report["v_rel_dev_stepped"] <= 1e-10


def test_validate_aht_warns_outside_perturbative_regime():
    with pytest.warns(UserWarning):
        p = nc60_params(a_hz=0.1 * 9.67e9)
    report = validate_aht(p, tau_max=2e-9, n_points=5)
    assert report["perturbative_warning"]
