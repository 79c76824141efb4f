"""Shared domain types, unit conventions and validation.

Everything downstream works in Gaussian/CGS units: magnetic pressure
terms carry an explicit 4*pi and the Alfven speed is |H.khat|/sqrt(4*pi*rho0).
Plane waves follow the exp(i(k.r - omega*t)) convention, and branches with
Re(omega) > 0 are the ones reported; the negatives are mirror images.
Densities are mass densities (rho = n*m) throughout.
"""

from dataclasses import dataclass, field

import numpy as np

FOUR_PI = 4.0 * np.pi


class QmhdError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(QmhdError):
    """Invalid physical input (bad background, wavevector, amplitude...)."""


class NonPositiveDensity(ValidationError):
    pass


class NegativeSpeed(ValidationError):
    pass


class NonFinite(ValidationError):
    pass


class ZeroWaveVector(ValidationError):
    pass


class NonPositiveAmplitude(ValidationError):
    pass


class DegenerateBranch(ValidationError):
    """The requested branch has zero phase speed; polarization undefined."""


class NumericalError(QmhdError):
    """A computation failed numerically on otherwise valid input."""


class NegativeDiscriminant(NumericalError):
    """Magnetosonic discriminant below -tol: indicates an implementation bug."""


class VacuumRegion(NumericalError):
    """Field amplitude below the vacuum floor where phase/log are needed."""


class UnstableStep(NumericalError):
    pass


class FitFailed(NumericalError):
    pass


def _vector3(value, name):
    vec = np.asarray(value, dtype=float).reshape(-1)
    if vec.shape != (3,):
        raise ValidationError(f"{name} must be a 3-vector, got shape {vec.shape}")
    return vec


@dataclass(frozen=True)
class PlasmaBackground:
    """Uniform equilibrium about which the linear waves propagate.

    rho0   equilibrium mass density (> 0)
    H0     background magnetic field, 3-vector
    u0     classical sound speed of the medium (>= 0)
    mass   particle mass (> 0)
    hbar   Planck constant in the chosen unit system; 0 switches the
           quantum corrections off and recovers classical MHD
    p0     equilibrium pressure, informational only (the acoustic closure
           runs through u0, not p0)
    """

    rho0: float
    H0: np.ndarray
    u0: float
    mass: float
    hbar: float
    p0: float = 0.0

    def __post_init__(self):
        h0 = _vector3(self.H0, "H0")
        h0.flags.writeable = False
        object.__setattr__(self, "H0", h0)


@dataclass(frozen=True)
class DissipationParams:
    """Shear (eta) and bulk (xi) viscosity coefficients, both >= 0."""

    eta: float = 0.0
    xi: float = 0.0

    def __post_init__(self):
        for name in ("eta", "xi"):
            value = getattr(self, name)
            if not np.isfinite(value):
                raise NonFinite(f"{name} must be finite, got {value}")
            if value < 0:
                raise ValidationError(f"{name} must be >= 0, got {value}")


@dataclass(frozen=True)
class PerturbationAmplitudes:
    """Complex plane-wave amplitudes (v, h, rho') of one mode.

    Any valid mode is solenoidal: k.h = 0.
    """

    v: np.ndarray
    h: np.ndarray
    rho_prime: complex

    def __post_init__(self):
        for name in ("v", "h"):
            vec = np.asarray(getattr(self, name), dtype=complex).reshape(-1)
            if vec.shape != (3,):
                raise ValidationError(f"{name} must be a 3-vector")
            vec.flags.writeable = False
            object.__setattr__(self, name, vec)
        object.__setattr__(self, "rho_prime", complex(self.rho_prime))

    def norm(self):
        """Euclidean norm over all seven components."""
        return float(np.sqrt(np.sum(np.abs(self.v) ** 2)
                             + np.sum(np.abs(self.h) ** 2)
                             + abs(self.rho_prime) ** 2))


def validate_background(bg):
    """Return bg unchanged if all invariants hold, else raise.

    The error message names the offending field.
    """
    scalars = [("rho0", bg.rho0), ("u0", bg.u0), ("mass", bg.mass),
               ("hbar", bg.hbar), ("p0", bg.p0)]
    for name, value in scalars:
        if not np.isfinite(value):
            raise NonFinite(f"{name} must be finite, got {value}")
    if not np.all(np.isfinite(bg.H0)):
        raise NonFinite(f"H0 must be finite, got {bg.H0}")
    if bg.rho0 <= 0:
        raise NonPositiveDensity(f"rho0 must be > 0, got {bg.rho0}")
    if bg.mass <= 0:
        raise NonPositiveDensity(f"mass must be > 0, got {bg.mass}")
    if bg.u0 < 0:
        raise NegativeSpeed(f"u0 must be >= 0, got {bg.u0}")
    if bg.hbar < 0:
        raise NegativeSpeed(f"hbar must be >= 0, got {bg.hbar}")
    return bg


def validate_wavevector(k):
    """Coerce k to a float 3-vector with |k| > 0."""
    vec = _vector3(k, "k")
    if not np.all(np.isfinite(vec)):
        raise NonFinite(f"k must be finite, got {vec}")
    if np.linalg.norm(vec) == 0.0:
        raise ZeroWaveVector("dispersion queries need |k| > 0")
    return vec
