import numpy as np
import pytest

from qmhdwaves import (DissipationParams, FitFailed, ModeBranch,
                       PlasmaBackground, SimGrid, UnstableStep,
                       ValidationError, dispersion_scan, energy,
                       init_plane_wave, linearized_matrix,
                       max_eigenfrequency, measure_mode, rhs, simulate_mode,
                       stable_dt, step_rk4, zero_state)
from qmhdwaves import _kernels

SQRT_4PI = np.sqrt(4.0 * np.pi)


def make_bg(**kw):
    base = dict(rho0=1.0, H0=(SQRT_4PI, 0.5, 0.0), u0=0.8, mass=1.0,
                hbar=1.0)
    base.update(kw)
    return PlasmaBackground(**base)


def test_grid_basics():
    grid = SimGrid(n_points=64, length=16.0)
    assert grid.dx == pytest.approx(0.25)
    kappa = grid.wavenumbers()
    np.testing.assert_allclose(
        kappa, 2.0 * np.pi * np.fft.fftfreq(64, d=0.25), atol=1e-14)
    assert grid.mode_wavenumber(3) == pytest.approx(2.0 * np.pi * 3 / 16.0)


def test_grid_rejects_bad_shapes():
    with pytest.raises(ValidationError):
        SimGrid(n_points=48, length=10.0)  # not a power of two
    with pytest.raises(ValidationError):
        SimGrid(n_points=8, length=10.0)  # too small
    with pytest.raises(ValidationError):
        SimGrid(n_points=64, length=-1.0)


def test_state_is_frozen_and_copied():
    grid = SimGrid(n_points=16, length=4.0)
    v = np.ones((3, 16), dtype=complex)
    state = zero_state(grid)
    assert state.v.shape == (3, 16)
    with pytest.raises((ValueError, RuntimeError)):
        state.v[0, 0] = 1.0
    from qmhdwaves import PerturbationState
    st2 = PerturbationState(grid=grid, v=v, h=v.copy(),
                            rho_prime=np.zeros(16, complex))
    v[0, 0] = 99.0  # must not leak into the frozen state
    assert st2.v[0, 0] == 1.0
    np.testing.assert_array_equal(st2.component("v_x"), st2.v[0])
    with pytest.raises(ValidationError):
        st2.component("b_x")


def test_init_plane_wave_reality_solenoidal_purity():
    grid = SimGrid(n_points=64, length=32.0)
    bg = make_bg()
    amp = 1e-4
    state = init_plane_wave(grid, bg, 5, ModeBranch.FAST, amp)
    kappa = grid.wavenumbers()
    # solenoidal: k.h = kappa * h_x = 0 on every mode
    assert np.max(np.abs(kappa * state.h[0])) <= 1e-12 * amp
    # Hermitian spectrum: physical fields are real
    for row in (*state.v, *state.h, state.rho_prime):
        phys = np.fft.ifft(row)
        assert np.max(np.abs(phys.imag)) < 1e-12 * amp
    # single-mode purity: only j=5 and its mirror are populated
    mask = np.ones(64, dtype=bool)
    mask[[5, 59]] = False
    for row in (*state.v, *state.h, state.rho_prime):
        assert np.max(np.abs(row[mask])) == 0.0


def test_init_plane_wave_zero_amplitude_gives_zero_state():
    grid = SimGrid(n_points=32, length=8.0)
    state = init_plane_wave(grid, make_bg(), 3, ModeBranch.FAST, 0.0)
    for row in (*state.v, *state.h, state.rho_prime):
        assert np.max(np.abs(row)) == 0.0


def test_init_plane_wave_rejects_bad_index():
    grid = SimGrid(n_points=32, length=8.0)
    bg = make_bg()
    for bad in (0, 16, 31, -2):
        with pytest.raises(ValidationError):
            init_plane_wave(grid, bg, bad, ModeBranch.ALFVEN, 1e-6)


def test_rhs_matches_linearized_matrix():
    grid = SimGrid(n_points=32, length=16.0)
    bg = make_bg(H0=(1.3, -0.6, 0.4))
    diss = DissipationParams(eta=0.02, xi=0.01)
    state = init_plane_wave(grid, bg, 4, ModeBranch.SLOW, 1e-3)
    dv, dh, drp = rhs(state, bg, diss)
    j = 4
    kappa = grid.mode_wavenumber(j)
    s = np.concatenate([state.v[:, j], state.h[:, j], [state.rho_prime[j]]])
    m = linearized_matrix(bg, (kappa, 0.0, 0.0), diss)
    expected = -1j * (m @ s)
    got = np.concatenate([dv[:, j], dh[:, j], [drp[j]]])
    np.testing.assert_allclose(got, expected, rtol=1e-12, atol=1e-18)


def test_energy_conservation_ideal():
    grid = SimGrid(n_points=32, length=16.0)
    bg = make_bg()
    state = init_plane_wave(grid, bg, 3, ModeBranch.FAST, 1e-5)
    e0 = energy(state, bg)
    dt = stable_dt(grid, bg)
    for _ in range(50):
        state = step_rk4(state, bg, None, dt)
    drift = abs(energy(state, bg) - e0) / e0
    assert drift < 1e-9


def test_energy_decays_with_viscosity():
    grid = SimGrid(n_points=32, length=16.0)
    bg = make_bg()
    diss = DissipationParams(eta=0.05)
    state = init_plane_wave(grid, bg, 3, ModeBranch.ALFVEN, 1e-5)
    e0 = energy(state, bg)
    dt = stable_dt(grid, bg, diss)
    for _ in range(50):
        state = step_rk4(state, bg, diss, dt)
    assert energy(state, bg) < e0


def test_step_rk4_unstable_dt_raises():
    grid = SimGrid(n_points=32, length=4.0)
    bg = make_bg()
    state = init_plane_wave(grid, bg, 10, ModeBranch.FAST, 1e-6)
    dt = 200.0 * stable_dt(grid, bg)
    with pytest.raises(UnstableStep):
        for _ in range(50):
            state = step_rk4(state, bg, None, dt)


def test_stable_dt_hits_cfl_target():
    grid = SimGrid(n_points=64, length=16.0)
    bg = make_bg()
    omega_max = max_eigenfrequency(grid, bg)
    assert stable_dt(grid, bg) * omega_max == pytest.approx(0.2, rel=1e-12)
    assert stable_dt(grid, bg, cfl_factor=0.1) * omega_max == pytest.approx(
        0.1, rel=1e-12)


def test_measure_mode_synthetic_oscillation():
    t = np.linspace(0.0, 20.0, 400)
    fit = measure_mode(t, np.exp(-1j * 3.0 * t))
    assert fit.omega_measured == pytest.approx(3.0, abs=1e-12)
    assert fit.decay_rate == pytest.approx(0.0, abs=1e-12)
    assert fit.amplitude_fit_error < 1e-10


def test_measure_mode_synthetic_decay():
    t = np.linspace(0.0, 10.0, 300)
    z = 0.5 * np.exp(-0.25 * t) * np.exp(-1j * 2.0 * t)
    fit = measure_mode(t, z)
    assert fit.omega_measured == pytest.approx(2.0, abs=1e-12)
    assert fit.decay_rate == pytest.approx(0.25, abs=1e-12)


def test_measure_mode_failures():
    t = np.linspace(0.0, 1.0, 8)
    with pytest.raises(FitFailed):
        measure_mode(t, np.exp(-1j * t))  # too short
    t = np.linspace(0.0, 1.0, 32)
    z = np.exp(-1j * t)
    z[10] = 0.0
    with pytest.raises(FitFailed):
        measure_mode(t, z)  # zero sample
    rng = np.random.default_rng(0)
    noisy = np.exp(-1j * 40.0 * t) + 0.5 * rng.standard_normal(32)
    with pytest.raises(FitFailed):
        measure_mode(t, noisy)  # not a clean single mode


def test_simulate_mode_alfven_accuracy():
    grid = SimGrid(n_points=32, length=16.0)
    bg = make_bg(H0=(SQRT_4PI, 0.0, 0.0), u0=1.0)
    run = simulate_mode(grid, bg, None, ModeBranch.ALFVEN, 2, periods=6.0)
    fit = measure_mode(run.times, run.series)
    rel = abs(fit.omega_measured - run.omega_analytic) / run.omega_analytic
    assert rel < 1e-7
    assert abs(fit.decay_rate) < 1e-8
    # the run stays spectrally pure and real
    mask = np.ones(32, dtype=bool)
    mask[[2, 30]] = False
    for row in (*run.state.v, *run.state.h, run.state.rho_prime):
        assert np.max(np.abs(row[mask])) < 1e-12 * 1e-6
        assert np.max(np.abs(np.fft.ifft(row).imag)) < 1e-12 * 1e-6


def test_simulate_mode_honors_dt_override():
    grid = SimGrid(n_points=32, length=16.0)
    bg = make_bg()
    run = simulate_mode(grid, bg, None, ModeBranch.ALFVEN, 2, periods=1.0,
                        dt_override=1e-3)
    assert run.dt <= 1e-3 + 1e-15


def test_dispersion_scan_collects_rows_and_errors():
    grid = SimGrid(n_points=32, length=16.0)
    bg = make_bg(H0=(SQRT_4PI, 0.0, 0.0), u0=1.0)
    rows = dispersion_scan(grid, bg, None, ModeBranch.ALFVEN, [2, 3, 99],
                           periods=4.0)
    assert len(rows) == 3
    for row in rows[:2]:
        assert row.error == ""
        assert abs(row.omega_measured - row.omega_analytic) \
            < 1e-6 * row.omega_analytic
    assert "ValidationError" in rows[2].error or rows[2].error != ""


@pytest.mark.skipif(not _kernels.HAS_NUMBA, reason="numba not available")
def test_backends_agree():
    rng = np.random.default_rng(42)
    n = 64
    fields_a = tuple(rng.standard_normal(n) + 1j * rng.standard_normal(n)
                     for _ in range(6))
    fields_b = tuple(f.copy() for f in fields_a)
    kappa = 2.0 * np.pi * np.fft.fftfreq(n, d=0.5)
    coef = (kappa, kappa / 4.0, 0.3 * kappa, 1.1 * kappa,
            0.01 * kappa ** 2, 0.005 * kappa ** 2)
    h0 = (1.0, 0.4, -0.2)
    _kernels.advance_numpy(fields_a, coef, h0, 1e-3, 25)
    _kernels.advance_numba(fields_b, coef, h0, 1e-3, 25)
    for a, b in zip(fields_a, fields_b):
        np.testing.assert_allclose(a, b, rtol=1e-13, atol=1e-15)


def test_backend_name_reports():
    assert _kernels.backend_name() in ("numba", "numpy")
    if _kernels.HAS_NUMBA:
        assert _kernels.backend_name() == "numba"
