"""Quantum-corrected MHD dispersion relations and polarization relations.

Closed forms for the Alfven and fast/slow magnetosonic branches about a
uniform background, the quantum-corrected sound speed

    U0(k)^2 = u0^2 + (hbar^2 / 4 m^2) k^2,

and, independently of the closed forms, a brute-force 7x7 eigenvalue
oracle over the full linearized plane-wave system

    omega * s = M * s,   s = (v_x, v_y, v_z, h_x, h_y, h_z, rho')

which downstream tests use to cross-check every closed-form branch.

General (k, H0) inputs are reduced internally to the canonical frame
(k along x, H0 in the x-y plane); `canonical_frame` exposes the rotation
so callers can map amplitudes between frames.
"""

import enum
from dataclasses import dataclass

import numpy as np

from .core import (FOUR_PI, DegenerateBranch, DissipationParams,
                   NegativeDiscriminant, PerturbationAmplitudes,
                   validate_background, validate_wavevector)

# relative clamp width for the magnetosonic discriminant, which is a
# difference of squares and can dip below 0 in floating point at the
# degenerate point u_A = U0, H0 parallel to k
DISC_REL_TOL = 1e-12

_EPS = np.finfo(float).eps


class ModeBranch(enum.Enum):
    ALFVEN = "alfven"
    FAST = "fast"
    SLOW = "slow"

    @classmethod
    def from_name(cls, name):
        try:
            return cls(str(name).strip().lower())
        except ValueError:
            raise ValueError(f"unknown branch {name!r}; expected one of "
                             f"{[b.value for b in cls]}") from None


@dataclass(frozen=True)
class DispersionResult:
    """Phase speeds and the Alfven frequency for one wavevector."""

    u_alfven: float
    u_fast: float
    u_slow: float
    U0: float
    omega_alfven: float


def _kmag(k):
    """Accept a scalar |k| or a 3-vector and return the magnitude."""
    if np.ndim(k) == 0:
        return abs(float(k))
    return float(np.linalg.norm(validate_wavevector(k)))


def canonical_frame(k, H0):
    """Rotate (k, H0) into the frame with k along x and H0 in the x-y plane.

    Returns (k_mag, h_par, h_perp, R) where h_par = H0.khat, h_perp = |H0
    minus its parallel part| >= 0, and R is the rotation matrix whose rows
    are the canonical basis vectors: canonical = R @ lab, lab = R.T @ canonical.
    """
    kvec = validate_wavevector(k)
    h0 = np.asarray(H0, dtype=float)
    kmag = np.linalg.norm(kvec)
    e1 = kvec / kmag
    h_par = float(h0 @ e1)
    perp = h0 - h_par * e1
    # for H0 nearly parallel to k the subtraction cancels catastrophically
    # and leaves perp skewed along e1 well above roundoff; one
    # reorthogonalization pass restores e2.e1 ~ machine epsilon
    perp = perp - (perp @ e1) * e1
    h_perp = float(np.linalg.norm(perp))
    if h_perp > 1e-14 * max(np.linalg.norm(h0), 1e-300):
        e2 = perp / h_perp
    else:
        # H0 parallel to k (or zero): any unit vector orthogonal to e1 works
        trial = np.zeros(3)
        trial[np.argmin(np.abs(e1))] = 1.0
        e2 = trial - (trial @ e1) * e1
        e2 /= np.linalg.norm(e2)
        h_perp = 0.0
    e3 = np.cross(e1, e2)
    rotation = np.vstack([e1, e2, e3])
    return float(kmag), h_par, h_perp, rotation


def alfven_speed(bg, k):
    """Alfven phase speed |H0.khat| / sqrt(4 pi rho0); independent of hbar."""
    validate_background(bg)
    kvec = validate_wavevector(k)
    khat = kvec / np.linalg.norm(kvec)
    return abs(float(bg.H0 @ khat)) / np.sqrt(FOUR_PI * bg.rho0)


def quantum_sound_speed(bg, k):
    """Quantum-corrected sound speed sqrt(u0^2 + (hbar^2/4m^2) k^2).

    k may be a 3-vector or the scalar magnitude |k|.  Monotone
    nondecreasing in |k| and in hbar; equals u0 when hbar = 0.
    """
    validate_background(bg)
    kmag = _kmag(k)
    return float(np.sqrt(bg.u0 ** 2 + (bg.hbar * kmag / (2.0 * bg.mass)) ** 2))


def _magnetosonic_squared(bg, k):
    """Both magnetosonic squared speeds plus the scale used for clamps."""
    kvec = validate_wavevector(k)
    kmag = np.linalg.norm(kvec)
    khat = kvec / kmag
    ca2 = float(bg.H0 @ bg.H0) / (FOUR_PI * bg.rho0)
    u02 = quantum_sound_speed(bg, kmag) ** 2
    total = ca2 + u02
    h_par = float(bg.H0 @ khat)
    disc = total ** 2 - h_par ** 2 * u02 / (np.pi * bg.rho0)
    scale = total ** 2
    if disc < -DISC_REL_TOL * scale:
        raise NegativeDiscriminant(
            f"magnetosonic discriminant {disc} < -{DISC_REL_TOL}*{scale}")
    disc = max(disc, 0.0)
    root = np.sqrt(disc)
    fast2 = 0.5 * (total + root)
    # slow root via the root product: avoids the catastrophic cancellation
    # of 0.5*(total - root) when the discriminant is close to total^2
    product = h_par ** 2 * u02 / (FOUR_PI * bg.rho0)
    slow2 = product / fast2 if fast2 > 0.0 else 0.0
    return fast2, slow2, total


def magnetosonic_speeds(bg, k):
    """The (fast, slow) magnetosonic phase speeds for wavevector k.

    Roots of U^2 = (1/2){H0^2/(4 pi rho0) + U0^2
                         +- sqrt[(H0^2/(4 pi rho0) + U0^2)^2
                                 - (H0.khat)^2 U0^2/(pi rho0)]}.
    """
    validate_background(bg)
    fast2, slow2, _ = _magnetosonic_squared(bg, k)
    return float(np.sqrt(fast2)), float(np.sqrt(slow2))


def alfven_frequency(bg, k):
    """Signed Alfven angular frequency (H0.k) / sqrt(4 pi rho0)."""
    validate_background(bg)
    kvec = validate_wavevector(k)
    return float(bg.H0 @ kvec) / np.sqrt(FOUR_PI * bg.rho0)


def alfven_group_velocity(bg):
    """Group velocity H0 / sqrt(4 pi rho0): along the field, k-independent."""
    validate_background(bg)
    return bg.H0 / np.sqrt(FOUR_PI * bg.rho0)


def dispersion_result(bg, k):
    """All branch speeds and the Alfven frequency for one wavevector."""
    u_fast, u_slow = magnetosonic_speeds(bg, k)
    return DispersionResult(
        u_alfven=alfven_speed(bg, k),
        u_fast=u_fast,
        u_slow=u_slow,
        U0=quantum_sound_speed(bg, k),
        omega_alfven=alfven_frequency(bg, k),
    )


def _branch_speed(bg, k, branch):
    if branch is ModeBranch.ALFVEN:
        return alfven_speed(bg, k)
    u_fast, u_slow = magnetosonic_speeds(bg, k)
    return u_fast if branch is ModeBranch.FAST else u_slow


def polarization(bg, k, branch, normalization=1.0):
    """Plane-wave amplitudes (v, h, rho') of one branch, in the lab frame.

    The Alfven mode is transverse and incompressible: in the canonical frame
    v_z = -sign(H0x) h_z / sqrt(4 pi rho0) and rho' = 0; amplitudes are
    scaled so the out-of-plane magnetic component equals `normalization`.
    Fast/slow amplitudes live in the (v_x, v_y, h_y, rho') block and are
    scaled so the compressive component v_x equals `normalization`; when the
    branch carries no compression (transverse magnetosonic root of an
    aligned background) h_y is scaled instead.

    Branch speeds within roundoff of zero raise DegenerateBranch: such a
    mode does not propagate and its polarization is undefined.
    """
    validate_background(bg)
    branch = ModeBranch(branch) if not isinstance(branch, ModeBranch) \
        else branch
    kmag, h_par, h_perp, rotation = canonical_frame(k, bg.H0)
    sqrt4pr = np.sqrt(FOUR_PI * bg.rho0)
    normalization = complex(normalization)

    v_c = np.zeros(3, dtype=complex)
    h_c = np.zeros(3, dtype=complex)
    if branch is ModeBranch.ALFVEN:
        if h_par == 0.0:
            raise DegenerateBranch("Alfven speed is 0 for H0 perpendicular "
                                   "to k; polarization undefined")
        h_c[2] = normalization
        v_c[2] = -np.sign(h_par) * normalization / sqrt4pr
        rho_prime = 0.0 + 0.0j
    else:
        fast2, slow2, scale = _magnetosonic_squared(bg, k)
        u2 = fast2 if branch is ModeBranch.FAST else slow2
        if u2 <= 16.0 * _EPS * scale:
            raise DegenerateBranch(f"{branch.value} branch speed is 0; "
                                   "polarization undefined")
        u = np.sqrt(u2)
        u02 = quantum_sound_speed(bg, kmag) ** 2
        d_alf = u2 - h_par ** 2 / (FOUR_PI * bg.rho0)
        d_ac = u2 - u02
        # the coupled relations  h_y (u^2 - u_A^2) = u H0y v_x
        # and  v_x (u^2 - U0^2) = u H0y h_y / (4 pi rho0);
        # seed whichever side has the better-conditioned divisor
        if abs(d_alf) >= abs(d_ac):
            vx = 1.0 + 0.0j
            hy = u * h_perp * vx / d_alf if d_alf != 0.0 else 0.0j
        else:
            hy = 1.0 + 0.0j
            vx = u * h_perp * hy / (FOUR_PI * bg.rho0 * d_ac)
        vy = -h_par * hy / (FOUR_PI * bg.rho0 * u)
        rho_prime = bg.rho0 * vx / u
        v_c[0], v_c[1] = vx, vy
        h_c[1] = hy
        amp_scale = max(abs(vx), abs(vy), abs(hy), abs(rho_prime))
        # a compressive amplitude near the noise floor of the closed-form
        # solve must not serve as the scaling reference: dividing by it
        # would blow the well-determined components up by 1/noise
        ref = vx if abs(vx) > 1e-8 * amp_scale else hy
        factor = normalization / ref
        v_c *= factor
        h_c *= factor
        rho_prime *= factor

    v_lab = rotation.T @ v_c
    h_lab = rotation.T @ h_c
    return PerturbationAmplitudes(v=v_lab, h=h_lab, rho_prime=rho_prime)


def linearized_matrix(bg, k, diss=None):
    """The 7x7 matrix M of the plane-wave system omega s = M s.

    State ordering s = (v_x, v_y, v_z, h_x, h_y, h_z, rho') in the lab
    frame.  Without dissipation M has a real spectrum
    {+-k u_A, +-k u_fast, +-k u_slow, 0}; the zero eigenvalue is the
    div h = 0 constraint direction.  Shear/bulk viscosity adds
    -i (eta/rho0) k^2 on the velocity diagonal and
    -i ((xi + eta/3)/rho0) k k^T on the compressive component; the
    induction rows stay ideal (no resistivity).
    """
    validate_background(bg)
    kvec = validate_wavevector(k)
    if diss is None:
        diss = DissipationParams()
    h0 = bg.H0
    u02 = quantum_sound_speed(bg, kvec) ** 2
    eye = np.eye(3)
    m = np.zeros((7, 7), dtype=complex)
    m[0:3, 3:6] = (np.outer(kvec, h0) - (h0 @ kvec) * eye) / (FOUR_PI * bg.rho0)
    m[0:3, 6] = (u02 / bg.rho0) * kvec
    m[3:6, 0:3] = np.outer(h0, kvec) - (h0 @ kvec) * eye
    m[6, 0:3] = bg.rho0 * kvec
    if diss.eta != 0.0 or diss.xi != 0.0:
        k2 = float(kvec @ kvec)
        m[0:3, 0:3] += (-1j * (diss.eta / bg.rho0) * k2 * eye
                        - 1j * ((diss.xi + diss.eta / 3.0) / bg.rho0)
                        * np.outer(kvec, kvec))
    return m


def plane_wave_residual(bg, k, omega, amps):
    """Worst relative residual of the four plane-wave relations.

    Checks k.h = 0, the induction, continuity and momentum relations for
    the given (omega, v, h, rho').  Each residual is normalized by an
    a-priori bound on its term magnitudes (coefficients times amplitude
    norms), so the result is unit- and amplitude-independent and a valid
    null component (for example rho' = 0 on the Alfven branch) is not
    mistaken for a 0/0 failure.
    """
    validate_background(bg)
    kvec = validate_wavevector(k)
    v, h, rp = amps.v, amps.h, amps.rho_prime
    kmag = np.linalg.norm(kvec)
    vn, hn, rn = np.linalg.norm(v), np.linalg.norm(h), abs(rp)
    hmag = np.linalg.norm(bg.H0)
    aom = abs(omega)

    def rel(residual, scale):
        if scale == 0.0:
            return 0.0
        return float(np.linalg.norm(np.atleast_1d(residual)) / scale)

    # the magnetic amplitude of a nearly compression-only mode can sit far
    # below the O(1) intermediates that build it, so the div constraint is
    # also scaled by the induction bound |h| <= k |v| |H0| / omega
    div_scale = kmag * hn
    if aom > 0.0:
        div_scale += kmag ** 2 * vn * hmag / aom
    r_div = rel(kvec @ h, div_scale)
    t_ind = np.cross(kvec, np.cross(v, bg.H0))
    r_ind = rel(omega * h + t_ind, aom * hn + kmag * vn * hmag)
    t_cont = bg.rho0 * (kvec @ v)
    r_cont = rel(omega * rp - t_cont, aom * rn + bg.rho0 * kmag * vn)
    c_ac = bg.u0 ** 2 / bg.rho0
    c_qu = (bg.hbar / (2.0 * bg.mass)) ** 2 * kmag ** 2 / bg.rho0
    c_mag = hmag / (FOUR_PI * bg.rho0)
    t_ac = c_ac * rp * kvec
    t_qu = c_qu * rp * kvec
    t_mag = np.cross(bg.H0, np.cross(kvec, h)) / (FOUR_PI * bg.rho0)
    r_mom = rel(omega * v - t_ac - t_qu - t_mag,
                aom * vn + (c_ac + c_qu) * rn * kmag + c_mag * kmag * hn)
    return max(r_div, r_ind, r_cont, r_mom)
