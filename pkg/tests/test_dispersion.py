import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from qmhdwaves import (FOUR_PI, DegenerateBranch, DissipationParams,
                       ModeBranch, PlasmaBackground, alfven_frequency,
                       alfven_group_velocity, alfven_speed, canonical_frame,
                       dispersion_result, linearized_matrix,
                       magnetosonic_speeds, plane_wave_residual,
                       polarization, quantum_sound_speed)

SQRT_4PI = np.sqrt(FOUR_PI)


def make_bg(**kw):
    base = dict(rho0=1.0, H0=(SQRT_4PI, 0.0, 0.0), u0=1.0, mass=1.0,
                hbar=1.0)
    base.update(kw)
    return PlasmaBackground(**base)


backgrounds = st.builds(
    make_bg,
    rho0=st.floats(0.1, 10.0),
    H0=st.tuples(st.floats(-3.0, 3.0), st.floats(-3.0, 3.0),
                 st.floats(-3.0, 3.0)),
    u0=st.floats(0.05, 2.0),
    mass=st.floats(0.5, 2.0),
    hbar=st.floats(0.0, 2.0),
)
wavevectors = st.tuples(st.floats(-2.0, 2.0), st.floats(-2.0, 2.0),
                        st.floats(-2.0, 2.0))


def test_alfven_speed_unit_case():
    bg = make_bg(H0=(2.0 * np.sqrt(np.pi), 0.0, 0.0))
    assert alfven_speed(bg, (1.0, 0.0, 0.0)) == pytest.approx(1.0, rel=1e-15)


def test_alfven_speed_uses_field_projection():
    bg = make_bg(H0=(2.0, 2.0, 0.0))
    k = (1.0, 0.0, 0.0)
    expected = 2.0 / np.sqrt(FOUR_PI * bg.rho0)
    assert alfven_speed(bg, k) == pytest.approx(expected, rel=1e-15)
    k_oblique = (1.0, 1.0, 0.0)
    expected = (4.0 / np.sqrt(2.0)) / np.sqrt(FOUR_PI * bg.rho0)
    assert alfven_speed(bg, k_oblique) == pytest.approx(expected, rel=1e-14)


def test_quantum_sound_speed_reduces_to_classical():
    bg = make_bg(hbar=0.0, u0=0.7)
    assert quantum_sound_speed(bg, 5.0) == pytest.approx(0.7, rel=1e-15)


def test_quantum_sound_speed_formula():
    bg = make_bg(u0=0.5, hbar=2.0, mass=4.0)
    k = 3.0
    expected = np.sqrt(0.25 + (2.0 * 3.0 / 8.0) ** 2)
    assert quantum_sound_speed(bg, k) == pytest.approx(expected, rel=1e-15)
    # 3-vector form agrees with the scalar |k| form
    assert quantum_sound_speed(bg, (0.0, 3.0, 0.0)) == pytest.approx(
        expected, rel=1e-15)


def test_magnetosonic_parallel_decoupling():
    # k parallel to H0: branches decouple into pure acoustic and pure
    # magnetic with speeds {U0, u_A}
    bg = make_bg(H0=(2.0 * SQRT_4PI, 0.0, 0.0), u0=0.5, hbar=1.0)
    k = (1.5, 0.0, 0.0)
    u_a = alfven_speed(bg, k)
    u0k = quantum_sound_speed(bg, 1.5)
    fast, slow = magnetosonic_speeds(bg, k)
    assert fast == pytest.approx(max(u_a, u0k), rel=1e-12)
    assert slow == pytest.approx(min(u_a, u0k), rel=1e-12)


def test_magnetosonic_perpendicular():
    # k perpendicular to H0: slow branch vanishes, fast is the
    # magnetoacoustic combination sqrt(c_A^2 + U0^2)
    bg = make_bg(H0=(0.0, 2.0, 0.0), u0=0.5)
    k = (1.0, 0.0, 0.0)
    fast, slow = magnetosonic_speeds(bg, k)
    ca2 = 4.0 / (FOUR_PI * bg.rho0)
    u02 = quantum_sound_speed(bg, 1.0) ** 2
    assert fast == pytest.approx(np.sqrt(ca2 + u02), rel=1e-12)
    assert slow == 0.0


def test_alfven_frequency_signed():
    bg = make_bg(H0=(SQRT_4PI, 0.0, 0.0))
    assert alfven_frequency(bg, (2.0, 0.0, 0.0)) == pytest.approx(2.0)
    assert alfven_frequency(bg, (-2.0, 0.0, 0.0)) == pytest.approx(-2.0)


def test_group_velocity_is_field_aligned_and_k_free():
    bg = make_bg(H0=(1.0, -2.0, 0.5), rho0=2.0)
    vg = alfven_group_velocity(bg)
    np.testing.assert_allclose(vg, np.asarray(bg.H0) / np.sqrt(FOUR_PI * 2.0),
                               rtol=1e-15)


def test_canonical_frame_geometry():
    k = (1.0, 2.0, -0.5)
    h0 = (0.3, -1.0, 0.7)
    kmag, h_par, h_perp, rot = canonical_frame(k, h0)
    assert kmag == pytest.approx(np.linalg.norm(k))
    np.testing.assert_allclose(rot @ rot.T, np.eye(3), atol=1e-14)
    np.testing.assert_allclose(rot @ np.asarray(k), [kmag, 0.0, 0.0],
                               atol=1e-14)
    h_canon = rot @ np.asarray(h0)
    assert h_canon[0] == pytest.approx(h_par)
    assert h_canon[1] == pytest.approx(h_perp)
    assert h_perp >= 0.0
    assert abs(h_canon[2]) < 1e-14


def test_dispersion_result_consistency():
    bg = make_bg(H0=(2.0, 1.0, 0.0), u0=0.6)
    k = (0.8, 0.3, -0.2)
    res = dispersion_result(bg, k)
    fast, slow = magnetosonic_speeds(bg, k)
    assert res.u_fast == fast and res.u_slow == slow
    assert res.u_alfven == alfven_speed(bg, k)
    assert res.U0 == quantum_sound_speed(bg, np.linalg.norm(k))
    assert res.omega_alfven == alfven_frequency(bg, k)


@given(bg=backgrounds, k=wavevectors)
@settings(max_examples=60, deadline=None)
def test_branch_ordering(bg, k):
    kvec = np.asarray(k)
    assume(np.linalg.norm(kvec) > 1e-3)
    fast, slow = magnetosonic_speeds(bg, kvec)
    u_a = alfven_speed(bg, kvec)
    u0k = quantum_sound_speed(bg, np.linalg.norm(kvec))
    ca = np.linalg.norm(bg.H0) / np.sqrt(FOUR_PI * bg.rho0)
    tol = 1e-12 * (fast + u0k + ca + 1.0)
    assert slow <= min(u_a, u0k) + tol
    assert fast >= max(ca, u0k) - tol
    assert slow <= fast + tol


@given(bg=backgrounds, k=wavevectors, branch=st.sampled_from(list(ModeBranch)))
@settings(max_examples=60, deadline=None)
def test_polarization_residual_property(bg, k, branch):
    kvec = np.asarray(k)
    assume(np.linalg.norm(kvec) > 1e-3)
    try:
        amps = polarization(bg, kvec, branch)
    except DegenerateBranch:
        assume(False)
    if branch is ModeBranch.ALFVEN:
        omega = np.linalg.norm(kvec) * alfven_speed(bg, kvec)
    else:
        fast, slow = magnetosonic_speeds(bg, kvec)
        omega = np.linalg.norm(kvec) * (fast if branch is ModeBranch.FAST
                                        else slow)
    assert plane_wave_residual(bg, kvec, omega, amps) < 1e-12


def test_alfven_polarization_structure():
    bg = make_bg(H0=(2.0, 1.0, 0.5), rho0=1.3)
    k = (1.0, -0.4, 0.2)
    amps = polarization(bg, k, ModeBranch.ALFVEN)
    assert amps.rho_prime == 0.0
    # transverse and incompressible: v and h orthogonal to both k and H0
    assert abs(np.asarray(k) @ amps.v) < 1e-14
    assert abs(np.asarray(k) @ amps.h) < 1e-14
    assert abs(np.asarray(bg.H0) @ amps.v) < 1e-13
    assert abs(np.asarray(bg.H0) @ amps.h) < 1e-13


def test_polarization_normalization_scales_amplitudes():
    bg = make_bg(H0=(1.5, 0.8, 0.0), u0=0.6)
    k = (1.0, 0.0, 0.0)
    one = polarization(bg, k, ModeBranch.FAST, normalization=1.0)
    two = polarization(bg, k, ModeBranch.FAST, normalization=2.0j)
    np.testing.assert_allclose(two.v, 2.0j * one.v, rtol=1e-14)
    np.testing.assert_allclose(two.h, 2.0j * one.h, rtol=1e-14)
    assert two.rho_prime == pytest.approx(2.0j * one.rho_prime, rel=1e-14)


def test_polarization_degenerate_branches():
    bg = make_bg(H0=(0.0, 2.0, 0.0))
    with pytest.raises(DegenerateBranch):
        polarization(bg, (1.0, 0.0, 0.0), ModeBranch.ALFVEN)
    bg0 = make_bg(H0=(0.0, 0.0, 0.0))
    with pytest.raises(DegenerateBranch):
        polarization(bg0, (1.0, 0.0, 0.0), ModeBranch.SLOW)


def test_mode_branch_names():
    assert ModeBranch.from_name("fast") is ModeBranch.FAST
    assert ModeBranch.from_name("ALFVEN") is ModeBranch.ALFVEN
    with pytest.raises(Exception):
        ModeBranch.from_name("medium")


def test_linearized_matrix_spectrum_matches_closed_form():
    bg = make_bg(H0=(1.2, -0.7, 0.4), rho0=0.8, u0=0.9, hbar=0.5)
    k = np.array([0.6, 0.2, -1.1])
    m = linearized_matrix(bg, k)
    assert m.shape == (7, 7) and m.dtype == complex
    eig = np.sort_complex(np.linalg.eigvals(m))
    kmag = np.linalg.norm(k)
    fast, slow = magnetosonic_speeds(bg, k)
    u_a = alfven_speed(bg, k)
    expected = np.sort(kmag * np.array(
        [-fast, -u_a, -slow, 0.0, slow, u_a, fast]))
    scale = kmag * fast
    assert np.max(np.abs(eig.real - expected)) < 1e-12 * scale
    assert np.max(np.abs(eig.imag)) < 1e-12 * scale


def test_linearized_matrix_dissipative_spectrum_decays():
    bg = make_bg(H0=(1.0, 0.5, 0.0), u0=0.7)
    k = (1.0, 0.4, 0.0)
    diss = DissipationParams(eta=0.05, xi=0.02)
    eig = np.linalg.eigvals(linearized_matrix(bg, k, diss))
    assert np.all(eig.imag <= 1e-13)
    assert np.min(eig.imag) < -1e-4


def test_plane_wave_residual_detects_wrong_frequency():
    bg = make_bg(H0=(1.0, 0.6, 0.0), u0=0.8)
    k = (1.0, 0.0, 0.0)
    amps = polarization(bg, k, ModeBranch.FAST)
    fast, _ = magnetosonic_speeds(bg, k)
    good = plane_wave_residual(bg, k, fast, amps)
    bad = plane_wave_residual(bg, k, 1.07 * fast, amps)
    assert good < 1e-13
    assert bad > 1e-3
