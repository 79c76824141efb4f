"""Randomized oracle suite: closed forms vs brute force, residuals, round trips.

Each check draws seeded-random valid inputs, measures a worst-case
deviation against an independent oracle (the 7x7 eigenvalue spectrum, the
plane-wave residual, the soliton ODE, a decompose/recompose round trip, a
finite-difference group velocity, eigenvalue passivity) and compares it to
a fixed tolerance.  The CLI `validate` subcommand prints one line per
check; the test suite reuses the same functions so both gates agree.
"""

from dataclasses import dataclass, replace

import numpy as np

from .core import (DegenerateBranch, DissipationParams, PlasmaBackground,
                   QmhdError)
from .dispersion import (ModeBranch, alfven_frequency, alfven_group_velocity,
                         alfven_speed, linearized_matrix, magnetosonic_speeds,
                         plane_wave_residual, polarization)
from .madelung import (ComplexField1D, madelung_decompose, madelung_recompose,
                       normalize_soliton, soliton_profile)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: float
    tol: float
    detail: str

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return (f"{status} {self.name:<24} measured={self.measured:.3e} "
                f"tol={self.tol:.1e} {self.detail}")


def random_background(rng):
    """A valid random background spanning a few decades of each scale."""
    return PlasmaBackground(
        rho0=float(10.0 ** rng.uniform(-1.0, 1.0)),
        H0=rng.normal(0.0, 1.0, 3) * 10.0 ** rng.uniform(-0.5, 0.5),
        u0=float(rng.uniform(0.05, 2.0)),
        mass=float(rng.uniform(0.5, 2.0)),
        hbar=float(rng.uniform(0.0, 2.0)),
    )


def random_wavevector(rng):
    direction = rng.normal(0.0, 1.0, 3)
    while np.linalg.norm(direction) < 1e-3:
        direction = rng.normal(0.0, 1.0, 3)
    direction /= np.linalg.norm(direction)
    return direction * 10.0 ** rng.uniform(-0.5, 0.5)


def expected_spectrum(bg, k):
    """{+-k u_A, +-k u_fast, +-k u_slow, 0} as a sorted real array."""
    kmag = np.linalg.norm(np.asarray(k, dtype=float))
    u_a = alfven_speed(bg, k)
    u_f, u_s = magnetosonic_speeds(bg, k)
    omegas = [kmag * u for u in (u_a, u_f, u_s)]
    return np.sort(np.array([0.0] + omegas + [-w for w in omegas]))


def check_eigen_oracle(rng, count=100, corrupt=False):
    """Spectrum of the 7x7 matrix vs the closed-form branch frequencies."""
    tol = 1e-10
    worst = 0.0
    for i in range(count):
        bg = random_background(rng)
        k = random_wavevector(rng)
        if corrupt and i == count // 2:
            bg = replace(bg, rho0=-bg.rho0)
        try:
            eigs = np.linalg.eigvals(linearized_matrix(bg, k))
            expected = expected_spectrum(bg, k)
        except QmhdError as exc:
            return CheckResult(
                "eigen_oracle", False, float("nan"), tol,
                f"background {i}: {type(exc).__name__}: {exc}")
        scale = np.max(np.abs(expected))
        dev = max(float(np.max(np.abs(np.sort(eigs.real) - expected))),
                  float(np.max(np.abs(eigs.imag)))) / scale
        worst = max(worst, dev)
    return CheckResult("eigen_oracle", worst <= tol, worst, tol,
                       f"spectra of {count} random backgrounds")


def check_polarization_residuals(rng, per_branch=50):
    """Branch amplitudes pushed back through the plane-wave system."""
    tol = 1e-12
    worst = 0.0
    total = 0
    for branch in ModeBranch:
        done = 0
        while done < per_branch:
            bg = random_background(rng)
            k = random_wavevector(rng)
            try:
                amps = polarization(bg, k, branch, normalization=1.0)
            except DegenerateBranch:
                continue
            kmag = np.linalg.norm(k)
            if branch is ModeBranch.ALFVEN:
                omega = kmag * alfven_speed(bg, k)
            else:
                u_f, u_s = magnetosonic_speeds(bg, k)
                omega = kmag * (u_f if branch is ModeBranch.FAST else u_s)
            worst = max(worst, plane_wave_residual(bg, k, omega, amps))
            done += 1
            total += 1
    return CheckResult("polarization_residual", worst <= tol, worst, tol,
                       f"{total} random modes across all branches")


def check_soliton_ode(n_points=512, length=32.0):
    """Spectral residual of G'' + A G + B ln(G) G for the gausson profile."""
    tol = 1e-8
    params = normalize_soliton(b=0.25, mass=1.0, hbar=1.0, k=0.0)
    dx = length / n_points
    xi = -0.5 * length + dx * np.arange(n_points)
    g = soliton_profile(params, xi)
    kappa = 2.0 * np.pi * np.fft.fftfreq(n_points, d=dx)
    gpp = np.fft.ifft(-(kappa ** 2) * np.fft.fft(g)).real
    resid = gpp + params.A * g + params.B * np.log(g) * g
    worst = float(np.max(np.abs(resid)))
    return CheckResult("soliton_ode_residual", worst <= tol, worst, tol,
                       f"profile on {n_points} points, span {length}")


def random_smooth_field(rng, n_points=64, length=2.0 * np.pi):
    """exp of a band-limited complex field: smooth with |Psi| bounded away from 0."""
    spectrum = np.zeros(n_points, dtype=complex)
    for j in range(1, 4):
        amp = 0.25 / j
        spectrum[j] = amp * (rng.normal() + 1j * rng.normal())
        spectrum[-j] = amp * (rng.normal() + 1j * rng.normal())
    exponent = np.fft.ifft(spectrum) * n_points
    exponent += rng.normal() * 0.2 + 1j * rng.normal() * 0.2
    return ComplexField1D(samples=np.exp(exponent), length=length)


def check_madelung_roundtrip(rng, count=20):
    """decompose then recompose returns the field up to a global phase."""
    tol = 1e-12
    worst = 0.0
    for _ in range(count):
        psi = random_smooth_field(rng)
        fluid = madelung_decompose(psi, mass=1.0, hbar=1.0)
        back = madelung_recompose(fluid, hbar=1.0)
        overlap = np.sum(back.samples * np.conj(psi.samples))
        aligned = back.samples * np.exp(-1j * np.angle(overlap))
        dev = float(np.max(np.abs(aligned - psi.samples))
                    / np.max(np.abs(psi.samples)))
        worst = max(worst, dev)
    return CheckResult("madelung_roundtrip", worst <= tol, worst, tol,
                       f"{count} random smooth fields")


def check_group_velocity(rng, count=10):
    """Central-difference d omega / dk vs H0 / sqrt(4 pi rho0)."""
    tol = 1e-8
    worst = 0.0
    for _ in range(count):
        bg = random_background(rng)
        k = random_wavevector(rng)
        gv = alfven_group_velocity(bg)
        scale = float(np.linalg.norm(gv)) + 1e-30
        h = 1e-6 * np.linalg.norm(k)
        for axis in range(3):
            e = np.zeros(3)
            e[axis] = h
            fd = (alfven_frequency(bg, k + e)
                  - alfven_frequency(bg, k - e)) / (2.0 * h)
            worst = max(worst, abs(fd - gv[axis]) / scale)
    return CheckResult("group_velocity", worst <= tol, worst, tol,
                       f"{count} random directions, central differences")


def check_passivity(rng, count=50):
    """No eigenvalue of the dissipative matrix may amplify (Im omega > 0)."""
    tol = 1e-12
    worst = -np.inf
    for _ in range(count):
        bg = random_background(rng)
        k = random_wavevector(rng)
        diss = DissipationParams(eta=float(rng.uniform(0.0, 0.5)),
                                 xi=float(rng.uniform(0.0, 0.5)))
        eigs = np.linalg.eigvals(linearized_matrix(bg, k, diss))
        scale = float(np.max(np.abs(eigs))) + 1e-30
        worst = max(worst, float(np.max(eigs.imag)) / scale)
    return CheckResult("passivity", worst <= tol, worst, tol,
                       f"{count} random (eta, xi) dissipative spectra")


def run_suite(seed, inject_fault=False):
    """All checks with one seeded generator; returns (results, all_passed)."""
    rng = np.random.default_rng(seed)
    results = [
        check_eigen_oracle(rng, corrupt=inject_fault),
        check_polarization_residuals(rng),
        check_soliton_ode(),
        check_madelung_roundtrip(rng),
        check_group_velocity(rng),
        check_passivity(rng),
    ]
    return results, all(r.passed for r in results)
