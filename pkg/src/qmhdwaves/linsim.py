"""Pseudo-spectral time-domain integrator for the linearized QMHD system.

Evolves perturbations (v, h, rho') about a uniform background on a 1D
periodic domain, mode by mode in Fourier space, with classical RK4.  The
system is linear, so a single seeded mode must stay a single mode; the
simulator exists to validate the closed-form dispersion branches end to
end by measuring frequencies and decay rates from the time series.

The simulated right-hand side restricted to one mode equals -i M s with M
from dispersion.linearized_matrix, which is the cross-check the test suite
leans on.  Since the domain is 1D (k along x), the solenoidal constraint
k.h = 0 reduces to h_x = 0 for every propagating mode; the mode equations
make dh_x/dt vanish identically, and the state is re-projected after every
step to pin the constraint at exactly zero.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import (DissipationParams, FitFailed, QmhdError, UnstableStep,
                   ValidationError, validate_background)
from .dispersion import (ModeBranch, _branch_speed, linearized_matrix,
                         polarization)

COMPONENT_NAMES = ("v_x", "v_y", "v_z", "h_x", "h_y", "h_z", "rho_prime")


@dataclass(frozen=True)
class SimGrid:
    """Uniform periodic 1D grid with a power-of-two point count."""

    n_points: int
    length: float

    def __post_init__(self):
        n = self.n_points
        if n < 16 or (n & (n - 1)) != 0:
            raise ValidationError(
                f"n_points must be a power of two >= 16, got {n}")
        if not (np.isfinite(self.length) and self.length > 0):
            raise ValidationError(f"length must be > 0, got {self.length}")

    @property
    def dx(self):
        return self.length / self.n_points

    def wavenumbers(self):
        """Signed spectral wavenumbers 2 pi j / length in FFT order."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.dx)

    def mode_wavenumber(self, k_index):
        return 2.0 * np.pi * k_index / self.length


@dataclass(frozen=True)
class PerturbationState:
    """Spectral perturbation fields on a SimGrid at one instant."""

    grid: SimGrid
    v: np.ndarray
    h: np.ndarray
    rho_prime: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        n = self.grid.n_points
        for name, shape in (("v", (3, n)), ("h", (3, n)), ("rho_prime", (n,))):
            arr = np.array(getattr(self, name), dtype=complex, order="C")
            if arr.shape != shape:
                raise ValidationError(
                    f"{name} must have shape {shape}, got {arr.shape}")
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    def component(self, name):
        if name not in COMPONENT_NAMES:
            raise ValidationError(f"unknown component {name!r}; expected "
                                  f"one of {COMPONENT_NAMES}")
        idx = COMPONENT_NAMES.index(name)
        if idx < 3:
            return self.v[idx]
        if idx < 6:
            return self.h[idx - 3]
        return self.rho_prime


@dataclass(frozen=True)
class ModeMeasurement:
    """Frequency/decay fit of one spectral component's time series."""

    omega_measured: float
    decay_rate: float
    amplitude_fit_error: float


@dataclass(frozen=True)
class ModeRun:
    """A finished single-mode simulation plus its sampled time series."""

    times: np.ndarray
    series: np.ndarray
    component: str
    k_index: int
    k: float
    omega_analytic: float
    dt: float
    n_steps: int
    state: PerturbationState


@dataclass(frozen=True)
class ScanRow:
    k_index: int
    k: float
    omega_measured: float
    gamma_measured: float
    omega_analytic: float
    error: str = ""


def zero_state(grid):
    n = grid.n_points
    return PerturbationState(grid=grid, v=np.zeros((3, n), complex),
                             h=np.zeros((3, n), complex),
                             rho_prime=np.zeros(n, complex))


def _coefficients(grid, bg, diss):
    kappa = grid.wavenumbers()
    u02 = bg.u0 ** 2 + (bg.hbar * kappa / (2.0 * bg.mass)) ** 2
    a_mag = kappa / (4.0 * np.pi * bg.rho0)
    a_u = u02 * kappa / bg.rho0
    a_rho = bg.rho0 * kappa
    g_t = diss.eta * kappa ** 2 / bg.rho0
    g_c = (diss.xi + diss.eta / 3.0) * kappa ** 2 / bg.rho0
    return kappa, a_mag, a_u, a_rho, g_t, g_c


def rhs(state, bg, diss=None):
    """Time derivative (dv, dh, drho_prime) of a perturbation state.

    Mode by mode this is -i M s with M = dispersion.linearized_matrix
    evaluated at k = (kappa, 0, 0).
    """
    validate_background(bg)
    if diss is None:
        diss = DissipationParams()
    kappa, a_mag, a_u, a_rho, g_t, g_c = _coefficients(state.grid, bg, diss)
    h0x, h0y, h0z = bg.H0
    dvx, dvy, dvz, dhy, dhz, drp = _kernels._mode_rhs(
        state.v[0], state.v[1], state.v[2], state.h[1], state.h[2],
        state.rho_prime, kappa, a_mag, a_u, a_rho, g_t, g_c, h0x, h0y, h0z)
    dv = np.stack([dvx, dvy, dvz])
    dh = np.stack([np.zeros_like(dhy), dhy, dhz])
    return dv, dh, drp


def _project(h, kappa):
    """Pin the solenoidal constraint: h_x = 0 on every propagating mode."""
    h[0][kappa != 0.0] = 0.0


def _advance_fields(fields, coef, h0, dt, n_steps, backend=None):
    advance = _kernels.advance if backend is None else backend
    advance(fields, coef, h0, dt, n_steps)


def step_rk4(state, bg, diss, dt):
    """One RK4 step; returns a new state with the constraint re-projected."""
    validate_background(bg)
    if diss is None:
        diss = DissipationParams()
    coef = _coefficients(state.grid, bg, diss)
    v = state.v.copy()
    h = state.h.copy()
    rp = state.rho_prime.copy()
    fields = (v[0], v[1], v[2], h[1], h[2], rp)
    before = max(np.linalg.norm(v), np.linalg.norm(h), np.linalg.norm(rp))
    _advance_fields(fields, coef, tuple(bg.H0), dt, 1)
    _project(h, coef[0])
    after = max(np.linalg.norm(v), np.linalg.norm(h), np.linalg.norm(rp))
    if not (after <= 10.0 * before + 1e-300):
        raise UnstableStep(
            f"field norm grew from {before} to {after} in one step")
    return PerturbationState(grid=state.grid, v=v, h=h, rho_prime=rp,
                             time=state.time + dt)


def init_plane_wave(grid, bg, k_index, branch, amplitude):
    """Seed exactly one spectral mode (plus its Hermitian mirror).

    k_index must lie in [1, n_points/2 - 1]; the mirror mode at -k carries
    the conjugate amplitudes so the physical fields are real.
    """
    validate_background(bg)
    n = grid.n_points
    if not 1 <= int(k_index) < n // 2:
        raise ValidationError(
            f"k_index must be in [1, {n // 2 - 1}], got {k_index}")
    k_index = int(k_index)
    kappa = grid.mode_wavenumber(k_index)
    amps = polarization(bg, (kappa, 0.0, 0.0), branch, normalization=amplitude)
    v = np.zeros((3, n), complex)
    h = np.zeros((3, n), complex)
    rp = np.zeros(n, complex)
    v[:, k_index] = amps.v
    h[:, k_index] = amps.h
    rp[k_index] = amps.rho_prime
    v[:, n - k_index] = np.conj(amps.v)
    h[:, n - k_index] = np.conj(amps.h)
    rp[n - k_index] = np.conj(amps.rho_prime)
    return PerturbationState(grid=grid, v=v, h=h, rho_prime=rp)


def energy(state, bg):
    """Quadratic energy 0.5 sum(rho0 |v|^2 + |h|^2/4pi + U0^2 |rho'|^2/rho0).

    Exactly conserved by the continuum ideal system; non-increasing with
    viscosity.  The quantum-corrected U0(kappa) weights each mode's density
    perturbation.
    """
    kappa = state.grid.wavenumbers()
    u02 = bg.u0 ** 2 + (bg.hbar * kappa / (2.0 * bg.mass)) ** 2
    return float(0.5 * (bg.rho0 * np.sum(np.abs(state.v) ** 2)
                        + np.sum(np.abs(state.h) ** 2) / (4.0 * np.pi)
                        + np.sum(u02 * np.abs(state.rho_prime) ** 2) / bg.rho0))


def max_eigenfrequency(grid, bg, diss=None):
    """Largest |omega| of the linearized matrix over resolvable wavenumbers.

    The spectrum magnitude is monotone in |kappa| (both the quantum branch
    ~ kappa^2 and the viscous rates ~ kappa^2 grow fastest), so the Nyquist
    mode bounds the whole grid.
    """
    kappa_max = np.pi * grid.n_points / grid.length
    m = linearized_matrix(bg, (kappa_max, 0.0, 0.0), diss)
    return float(np.max(np.abs(np.linalg.eigvals(m))))


def stable_dt(grid, bg, diss=None, cfl_factor=0.2):
    """Time step cfl_factor / omega_max; resolves the stiff quantum branch."""
    return cfl_factor / max_eigenfrequency(grid, bg, diss)


def measure_mode(times, values, residual_tol=1e-3):
    """Fit A e^(-gamma t) e^(-i omega t) to a complex time series.

    Linear least squares on the log of the series: the log magnitude gives
    gamma, the unwrapped phase gives omega.  The relative RMS misfit of the
    reconstructed series is reported and must stay below residual_tol;
    larger residuals signal mode mixing or a too-short series.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=complex)
    if times.shape != values.shape or times.ndim != 1:
        raise ValidationError("times and values must be equal-length 1D")
    if times.size < 16:
        raise FitFailed(f"need >= 16 samples, got {times.size}")
    mag = np.abs(values)
    if not np.all(mag > 0.0):
        raise FitFailed("series contains zero samples; cannot fit its log")
    log_mag = np.log(mag)
    phase = np.unwrap(np.angle(values))
    slope_mag, intercept_mag = np.polyfit(times, log_mag, 1)
    slope_ph, intercept_ph = np.polyfit(times, phase, 1)
    fitted = np.exp(intercept_mag + slope_mag * times
                    + 1j * (intercept_ph + slope_ph * times))
    resid = float(np.linalg.norm(fitted - values) / np.linalg.norm(values))
    if resid > residual_tol:
        raise FitFailed(f"fit residual {resid:.3e} exceeds {residual_tol:.3e}")
    return ModeMeasurement(omega_measured=-slope_ph, decay_rate=-slope_mag,
                           amplitude_fit_error=resid)


def simulate_mode(grid, bg, diss, branch, k_index, amplitude=1e-6,
                  periods=8.0, samples_per_period=16, cfl_factor=0.2,
                  dt_override=None):
    """Run one seeded mode and sample the dominant component of its series.

    The step size honors the stability bound stable_dt (unless dt_override
    is given) and is then shrunk so an integer number of steps lands on
    every sample instant.  Returns a ModeRun; feed run.times/run.series to
    measure_mode for the frequency fit.
    """
    validate_background(bg)
    if diss is None:
        diss = DissipationParams()
    branch = ModeBranch(branch) if not isinstance(branch, ModeBranch) \
        else branch
    state = init_plane_wave(grid, bg, k_index, branch, amplitude)
    kappa = grid.mode_wavenumber(int(k_index))
    omega_analytic = kappa * _branch_speed(bg, (kappa, 0.0, 0.0), branch)

    dt_max = dt_override if dt_override is not None \
        else stable_dt(grid, bg, diss, cfl_factor)
    sample_dt = (2.0 * np.pi / omega_analytic) / samples_per_period
    steps_per_sample = max(1, math.ceil(sample_dt / dt_max))
    dt = sample_dt / steps_per_sample
    n_samples = int(round(periods * samples_per_period)) + 1

    track = polarization(bg, (kappa, 0.0, 0.0), branch, normalization=1.0)
    stacked = np.concatenate([track.v, track.h, [track.rho_prime]])
    component = COMPONENT_NAMES[int(np.argmax(np.abs(stacked)))]

    coef = _coefficients(grid, bg, diss)
    v = state.v.copy()
    h = state.h.copy()
    rp = state.rho_prime.copy()
    fields = (v[0], v[1], v[2], h[1], h[2], rp)
    comp_idx = COMPONENT_NAMES.index(component)

    def tracked():
        if comp_idx < 3:
            return v[comp_idx, k_index]
        if comp_idx < 6:
            return h[comp_idx - 3, k_index]
        return rp[k_index]

    times = np.arange(n_samples) * sample_dt
    series = np.empty(n_samples, dtype=complex)
    series[0] = tracked()
    norm_prev = max(np.linalg.norm(v), np.linalg.norm(h), np.linalg.norm(rp))
    for i in range(1, n_samples):
        _advance_fields(fields, coef, tuple(bg.H0), dt, steps_per_sample)
        _project(h, coef[0])
        norm_now = max(np.linalg.norm(v), np.linalg.norm(h),
                       np.linalg.norm(rp))
        if not (norm_now <= 10.0 * norm_prev + 1e-300):
            raise UnstableStep(f"field norm grew from {norm_prev} to "
                               f"{norm_now} between samples")
        norm_prev = norm_now
        series[i] = tracked()

    final = PerturbationState(grid=grid, v=v, h=h, rho_prime=rp,
                              time=float(times[-1]))
    return ModeRun(times=times, series=series, component=component,
                   k_index=int(k_index), k=kappa,
                   omega_analytic=float(omega_analytic), dt=dt,
                   n_steps=(n_samples - 1) * steps_per_sample, state=final)


def dispersion_scan(grid, bg, diss, branch, k_indices, **sim_kwargs):
    """Measure omega and gamma for each index; failures become row notes.

    Each index runs as an independent simulation; a per-mode error
    (degenerate branch, failed fit...) fills that row with NaNs and the
    error text instead of aborting the whole scan.
    """
    rows = []
    for k_index in k_indices:
        kappa = grid.mode_wavenumber(int(k_index))
        try:
            run = simulate_mode(grid, bg, diss, branch, k_index, **sim_kwargs)
            fit = measure_mode(run.times, run.series)
            rows.append(ScanRow(k_index=int(k_index), k=kappa,
                                omega_measured=fit.omega_measured,
                                gamma_measured=fit.decay_rate,
                                omega_analytic=run.omega_analytic))
        except QmhdError as exc:
            rows.append(ScanRow(k_index=int(k_index), k=kappa,
                                omega_measured=float("nan"),
                                gamma_measured=float("nan"),
                                omega_analytic=float("nan"),
                                error=f"{type(exc).__name__}: {exc}"))
    return rows
