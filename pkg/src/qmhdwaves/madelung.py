"""Madelung fluid machinery and the logarithmic-NLS Gaussian soliton.

The Madelung transform Psi = sqrt(n) exp(i S / hbar) turns the Schrodinger
equation into a continuity equation plus a Hamilton-Jacobi equation whose
only non-classical term is the Bohm potential

    V_q = -(hbar^2 / 2m) Laplacian(sqrt(n)) / sqrt(n).

The nonlinear side of this module handles the Schrodinger equation with an
attractive logarithmic nonlinearity,

    i hbar dPsi/dt = -(hbar^2 / 2m) Laplacian(Psi) - b ln(|Psi|^2) Psi,

whose soliton is an exact rigidly translating Gaussian ("gausson"):
Psi = c G(x - v t) exp(i k x - i omega t) with G = e^(a/B) e^(-(B/4)(xi+d)^2),
B = 4 m b / hbar^2, v = hbar k / m, and A = (2m/hbar) omega - k^2
+ (2m/hbar^2) b ln(c^2) = B/2 - a.  In the large-mass limit the normalized
density becomes the delta-generating Gaussian family
delta_m(xi) = sqrt(m alpha / pi) e^(-alpha m xi^2) with alpha = 2 b / hbar^2.

Phase and log operations are undefined at zeros of Psi.  Decomposition and
the Bohm potential refuse fields below a configurable vacuum floor
(default 1e-14 of the peak density).  The split-step propagator instead
clamps the argument of the logarithm at the floor: a spectral round trip
quantizes deep Gaussian tails at the FFT roundoff level (occasionally to
exactly zero), and the phase applied to such a sub-roundoff amplitude is
irrelevant while ln(0) would poison the whole field.
"""

from dataclasses import dataclass

import numpy as np

from .core import (NonPositiveAmplitude, UnstableStep, VacuumRegion,
                   ValidationError)

DEFAULT_FLOOR_REL = 1e-14


@dataclass(frozen=True)
class ComplexField1D:
    """Complex samples on a uniform periodic grid centered at 0.

    Sample j sits at x_j = -length/2 + j*dx.  The count must be a power of
    two >= 8 so spectral transforms stay exact and cheap.
    """

    samples: np.ndarray
    length: float

    def __post_init__(self):
        arr = np.array(self.samples, dtype=complex)
        n = arr.size
        if arr.ndim != 1 or n < 8 or (n & (n - 1)) != 0:
            raise ValidationError(
                f"samples must be a 1D power-of-two array >= 8, got "
                f"shape {arr.shape}")
        if not (np.isfinite(self.length) and self.length > 0):
            raise ValidationError(f"length must be > 0, got {self.length}")
        arr.flags.writeable = False
        object.__setattr__(self, "samples", arr)

    @property
    def dx(self):
        return self.length / self.samples.size

    @property
    def x(self):
        n = self.samples.size
        return -0.5 * self.length + self.dx * np.arange(n)

    def wavenumbers(self):
        return 2.0 * np.pi * np.fft.fftfreq(self.samples.size, d=self.dx)

    def norm(self):
        """Discrete norm integral sum |Psi|^2 dx."""
        return float(np.sum(np.abs(self.samples) ** 2) * self.dx)


@dataclass(frozen=True)
class FluidFields1D:
    """Madelung fluid fields n, S, v on the same grid as the wavefunction.

    S is the unwrapped action; its multivalued part, the integer winding of
    the phase around the periodic domain, is stored separately.
    v = grad(S)/m includes the winding contribution.
    """

    n: np.ndarray
    S: np.ndarray
    v: np.ndarray
    length: float
    winding: int = 0

    def __post_init__(self):
        for name in ("n", "S", "v"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def dx(self):
        return self.length / self.n.size

    @property
    def x(self):
        return -0.5 * self.length + self.dx * np.arange(self.n.size)


@dataclass(frozen=True)
class SolitonParams:
    """Carrier, amplitude and the derived gausson constants.

    B = 4 m b / hbar^2 sets the inverse squared width, v = hbar k / m the
    drift speed, A = (2m/hbar) omega - k^2 + (2m/hbar^2) b ln(c^2) the
    profile eigenvalue and a = B/2 - A the peak exponent: the profile is
    G(xi) = e^(a/B) e^(-(B/4)(xi+d)^2).
    """

    b: float
    mass: float
    hbar: float
    k: float
    omega: float
    c: float
    d: float
    A: float
    B: float
    a: float
    v: float


def _spectral_wavenumbers(n, dx):
    return 2.0 * np.pi * np.fft.fftfreq(n, d=dx)


def _density_floor(n, floor):
    if floor is None:
        peak = float(np.max(n))
        if peak == 0.0:
            raise VacuumRegion("field is identically zero")
        return DEFAULT_FLOOR_REL * peak
    return float(floor)


def bohm_potential(n, dx, mass, hbar, floor=None):
    """Quantum Bohm potential -(hbar^2/2m) Laplacian(sqrt(n))/sqrt(n).

    n is a strictly positive density on a periodic grid of spacing dx; the
    Laplacian is spectral.  Densities dipping below the vacuum floor
    (default 1e-14 of the peak) raise VacuumRegion.
    """
    n = np.asarray(n, dtype=float)
    fl = _density_floor(n, floor)
    if np.min(n) < fl:
        raise VacuumRegion(
            f"min density {np.min(n):.3e} below vacuum floor {fl:.3e}")
    kappa = _spectral_wavenumbers(n.size, dx)
    sqrt_n = np.sqrt(n)
    lap = np.fft.ifft(-(kappa ** 2) * np.fft.fft(sqrt_n)).real
    return -(hbar ** 2 / (2.0 * mass)) * lap / sqrt_n


def madelung_decompose(psi, mass, hbar, floor=None):
    """Split Psi into fluid fields (n, S, v) with the winding made explicit.

    n = |Psi|^2 and S = hbar * unwrapped phase.  The phase picks up
    2 pi * winding around the periodic domain; the velocity
    v = grad(S)/m is computed as the constant winding part plus the
    spectral derivative of the periodic remainder.
    """
    if hbar <= 0:
        raise ValidationError(f"decomposition needs hbar > 0, got {hbar}")
    samples = psi.samples
    n = np.abs(samples) ** 2
    fl = _density_floor(n, floor)
    if np.min(n) < fl:
        raise VacuumRegion(
            f"min |Psi|^2 {np.min(n):.3e} below vacuum floor {fl:.3e}")
    phase = np.unwrap(np.angle(samples))
    steps = np.angle(np.roll(samples, -1) * np.conj(samples))
    winding = int(round(float(np.sum(steps)) / (2.0 * np.pi)))
    s_field = hbar * phase
    offsets = psi.dx * np.arange(samples.size)
    slope = hbar * 2.0 * np.pi * winding / psi.length
    s_periodic = s_field - slope * offsets
    kappa = psi.wavenumbers()
    ds = np.fft.ifft(1j * kappa * np.fft.fft(s_periodic)).real + slope
    return FluidFields1D(n=n, S=s_field, v=ds / mass, length=psi.length,
                         winding=winding)


def madelung_recompose(fluid, hbar):
    """Rebuild Psi = sqrt(n) exp(i S / hbar) from fluid fields."""
    if hbar <= 0:
        raise ValidationError(f"recomposition needs hbar > 0, got {hbar}")
    samples = np.sqrt(fluid.n) * np.exp(1j * fluid.S / hbar)
    return ComplexField1D(samples=samples, length=fluid.length)


def hydrodynamic_residuals(before, after, dt, mass, hbar, mask_floor=1e-8):
    """Max-norm residuals (hamilton_jacobi, continuity) of the fluid pair.

    Time derivatives are centered differences of the two decompositions dt
    apart; spatial terms are evaluated on the midpoint fields, so both
    residuals converge as O(dt^2) (+ spectral space error) when the pair
    comes from an actual Schrodinger evolution.  The action of `after` is
    realigned by whole multiples of 2 pi hbar first, since decomposition
    fixes the phase branch independently per field.  Residuals are taken
    where the midpoint density exceeds mask_floor * peak: below that the
    phase carries no information and the equations are not probed.
    """
    if before.n.size != after.n.size or before.length != after.length:
        raise ValidationError("fluid fields must share one grid")
    n_mid = 0.5 * (before.n + after.n)
    branch = 2.0 * np.pi * hbar
    shift = branch * np.round(np.median(after.S - before.S) / branch)
    s_after = after.S - shift
    dn_dt = (after.n - before.n) / dt
    ds_dt = (s_after - before.S) / dt
    v_mid = 0.5 * (before.v + after.v)
    dx = before.dx
    kappa = _spectral_wavenumbers(n_mid.size, dx)
    flux = np.fft.ifft(1j * kappa * np.fft.fft(n_mid * v_mid)).real
    continuity = dn_dt + flux
    sqrt_n = np.sqrt(n_mid)
    lap = np.fft.ifft(-(kappa ** 2) * np.fft.fft(sqrt_n)).real
    tiny = np.finfo(float).tiny
    v_q = -(hbar ** 2 / (2.0 * mass)) * lap / np.maximum(sqrt_n, tiny)
    hamilton_jacobi = ds_dt + 0.5 * mass * v_mid ** 2 + v_q
    mask = n_mid >= mask_floor * np.max(n_mid)
    return (float(np.max(np.abs(hamilton_jacobi[mask]))),
            float(np.max(np.abs(continuity[mask]))))


def soliton_params(b, mass, hbar, k, omega, c, d=0.0):
    """Derive the gausson constants (A, B, a, v) from the free parameters.

    omega is a free family parameter: every omega yields a soliton, only
    the peak height e^(a/B) changes.  c must be real and nonzero.
    """
    if b <= 0 or mass <= 0 or hbar <= 0:
        raise ValidationError(
            f"need b > 0, mass > 0, hbar > 0; got {(b, mass, hbar)}")
    c = float(c)
    if not np.isfinite(c) or c * c <= 0.0:
        raise NonPositiveAmplitude(f"c^2 must be > 0, got c = {c}")
    big_b = 4.0 * mass * b / hbar ** 2
    big_a = ((2.0 * mass / hbar) * omega - k ** 2
             + (2.0 * mass / hbar ** 2) * b * np.log(c * c))
    return SolitonParams(b=b, mass=mass, hbar=hbar, k=float(k),
                         omega=float(omega), c=c, d=float(d), A=float(big_a),
                         B=float(big_b), a=float(big_b / 2.0 - big_a),
                         v=hbar * k / mass)


def normalize_soliton(b, mass, hbar, k, c=None, d=0.0):
    """Soliton parameters satisfying the norm condition c^2 e^(2a/B) = sqrt(B/2pi).

    The combination c^2 e^(2a/B) does not depend on c, so normalization
    pins omega alone; any positive c then gives the same unit-norm density.
    The default c makes A = 0 (a = B/2), a convenient reproducible preset.
    """
    if b <= 0 or mass <= 0 or hbar <= 0:
        raise ValidationError(
            f"need b > 0, mass > 0, hbar > 0; got {(b, mass, hbar)}")
    big_b = 4.0 * mass * b / hbar ** 2
    omega = (hbar / (2.0 * mass)) * (
        k ** 2 + 0.5 * big_b * (1.0 - 0.5 * np.log(big_b / (2.0 * np.pi))))
    if c is None:
        c = (big_b / (2.0 * np.pi)) ** 0.25 * np.exp(-0.5)
    return soliton_params(b, mass, hbar, k, omega, c, d)


def soliton_profile(params, xi):
    """Gaussian profile G(xi) = e^(a/B) exp(-(B/4)(xi + d)^2)."""
    xi = np.asarray(xi, dtype=float)
    return np.exp(params.a / params.B) * np.exp(
        -(params.B / 4.0) * (xi + params.d) ** 2)


def soliton_wavefunction(params, x, t=0.0):
    """Psi(x, t) = c G(x - v t) exp(i k x - i omega t)."""
    x = np.asarray(x, dtype=float)
    g = soliton_profile(params, x - params.v * t)
    return params.c * g * np.exp(1j * (params.k * x - params.omega * t))


def soliton_density(params, x, t=0.0):
    """|Psi(x, t)|^2; a rigidly translating Gaussian."""
    g = soliton_profile(params, np.asarray(x, dtype=float) - params.v * t)
    return (params.c * g) ** 2


def soliton_field(params, grid_length, n_points, t=0.0):
    """Sample the soliton wavefunction on a centered periodic grid."""
    dx = grid_length / n_points
    x = -0.5 * grid_length + dx * np.arange(n_points)
    return ComplexField1D(samples=soliton_wavefunction(params, x, t),
                          length=grid_length)


def delta_density(xi, b, mass, hbar):
    """Delta-generating Gaussian delta_m(xi), alpha = 2 b / hbar^2.

    Equals the normalized soliton density; integrates to 1 and narrows as
    sqrt(1/m), concentrating all density at xi = 0 in the large-mass limit.
    """
    alpha = 2.0 * b / hbar ** 2
    xi = np.asarray(xi, dtype=float)
    return np.sqrt(mass * alpha / np.pi) * np.exp(-alpha * mass * xi ** 2)


def classical_limit_width(b, mass, hbar):
    """Standard deviation 1/sqrt(2 alpha m) of delta_m; scales as m^(-1/2)."""
    if b <= 0 or mass <= 0 or hbar <= 0:
        raise ValidationError(
            f"need b > 0, mass > 0, hbar > 0; got {(b, mass, hbar)}")
    alpha = 2.0 * b / hbar ** 2
    return 1.0 / np.sqrt(2.0 * alpha * mass)


def _lognls_advance(samples, dx, dt, n_steps, b, mass, hbar, floor):
    """Strang split-step advance of the attractive log-NLS (in place).

    Half nonlinear phase, full spectral kinetic step, half nonlinear phase.
    Both factors are exact unitary flows of their sub-equations (the log
    term leaves |Psi| invariant pointwise), so the norm is conserved to
    roundoff per step; drift beyond 1e-10 relative flags a corrupted field.
    """
    n = samples.size
    kappa = _spectral_wavenumbers(n, dx)
    kinetic = np.exp(-1j * dt * hbar * kappa ** 2 / (2.0 * mass))
    rate = 0.5 * dt * b / hbar

    def half_phase(psi):
        if b == 0.0:
            return psi
        dens = psi.real ** 2 + psi.imag ** 2
        peak = float(np.max(dens))
        if peak == 0.0:
            raise VacuumRegion("field is identically zero")
        fl = DEFAULT_FLOOR_REL * peak if floor is None else floor
        return psi * np.exp(1j * rate * np.log(np.maximum(dens, fl)))

    norm0 = np.sum(samples.real ** 2 + samples.imag ** 2)
    for _ in range(n_steps):
        samples = half_phase(samples)
        samples = np.fft.ifft(np.fft.fft(samples) * kinetic)
        samples = half_phase(samples)
        norm = np.sum(samples.real ** 2 + samples.imag ** 2)
        if not (abs(norm - norm0) <= 1e-10 * norm0):
            raise UnstableStep(
                f"norm drifted by {abs(norm - norm0) / norm0:.3e} "
                "relative in one step")
        norm0 = norm
    return samples


def lognls_step(psi, dt, b, mass, hbar, floor=None):
    """One Strang split step of i hbar dPsi/dt = -(hbar^2/2m) Lap Psi - b ln(|Psi|^2) Psi."""
    if mass <= 0 or hbar <= 0 or b < 0:
        raise ValidationError(
            f"need mass > 0, hbar > 0, b >= 0; got {(b, mass, hbar)}")
    samples = _lognls_advance(psi.samples.copy(), psi.dx, dt, 1, b, mass,
                              hbar, floor)
    return ComplexField1D(samples=samples, length=psi.length)


def lognls_evolve(psi, dt, n_steps, b, mass, hbar, floor=None):
    """n_steps split steps without per-step field reconstruction."""
    if mass <= 0 or hbar <= 0 or b < 0:
        raise ValidationError(
            f"need mass > 0, hbar > 0, b >= 0; got {(b, mass, hbar)}")
    samples = _lognls_advance(psi.samples.copy(), psi.dx, dt, int(n_steps),
                              b, mass, hbar, floor)
    return ComplexField1D(samples=samples, length=psi.length)
