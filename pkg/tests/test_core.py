import numpy as np
import pytest

from qmhdwaves import (FOUR_PI, DissipationParams, NonFinite,
                       NonPositiveDensity, NumericalError,
                       PerturbationAmplitudes, PlasmaBackground, QmhdError,
                       ValidationError, ZeroWaveVector, validate_background,
                       validate_wavevector)
from qmhdwaves.core import NegativeSpeed


def make_bg(**kw):
    base = dict(rho0=1.0, H0=(1.0, 0.0, 0.0), u0=1.0, mass=1.0, hbar=1.0)
    base.update(kw)
    return PlasmaBackground(**base)


def test_four_pi():
    assert FOUR_PI == 4.0 * np.pi


def test_background_fields_and_h0_readonly():
    bg = make_bg(H0=[1.0, 2.0, 3.0])
    assert isinstance(bg.H0, np.ndarray)
    assert bg.H0.shape == (3,)
    with pytest.raises((ValueError, RuntimeError)):
        bg.H0[0] = 5.0
    validate_background(bg)


def test_background_rejects_bad_density():
    with pytest.raises(NonPositiveDensity):
        validate_background(make_bg(rho0=0.0))
    with pytest.raises(NonPositiveDensity):
        validate_background(make_bg(rho0=-1.0))
    with pytest.raises(NonPositiveDensity):
        validate_background(make_bg(mass=0.0))


def test_background_rejects_negative_speeds():
    with pytest.raises(NegativeSpeed):
        validate_background(make_bg(u0=-0.5))
    with pytest.raises(NegativeSpeed):
        validate_background(make_bg(hbar=-1.0))


def test_background_rejects_nonfinite():
    with pytest.raises(NonFinite):
        validate_background(make_bg(u0=np.nan))
    with pytest.raises(NonFinite):
        validate_background(make_bg(H0=(np.inf, 0.0, 0.0)))


def test_background_error_messages_name_the_field():
    with pytest.raises(NonPositiveDensity, match="rho0"):
        validate_background(make_bg(rho0=-2.0))
    with pytest.raises(NegativeSpeed, match="u0"):
        validate_background(make_bg(u0=-1.0))


def test_validate_wavevector():
    k = validate_wavevector((1.0, 2.0, 3.0))
    assert isinstance(k, np.ndarray)
    np.testing.assert_array_equal(k, [1.0, 2.0, 3.0])
    with pytest.raises(ZeroWaveVector):
        validate_wavevector((0.0, 0.0, 0.0))
    with pytest.raises(NonFinite):
        validate_wavevector((np.nan, 0.0, 1.0))
    with pytest.raises(ValidationError):
        validate_wavevector((1.0, 2.0))


def test_dissipation_params():
    d = DissipationParams()
    assert d.eta == 0.0 and d.xi == 0.0
    d = DissipationParams(eta=0.1, xi=0.2)
    assert (d.eta, d.xi) == (0.1, 0.2)
    with pytest.raises(ValidationError):
        DissipationParams(eta=-0.1)
    with pytest.raises(ValidationError):
        DissipationParams(xi=np.inf)


def test_amplitude_norm():
    amps = PerturbationAmplitudes(v=np.array([3.0, 0.0, 0.0]),
                                  h=np.array([0.0, 4.0, 0.0]),
                                  rho_prime=0.0)
    assert amps.norm() == pytest.approx(5.0)


def test_exception_hierarchy():
    assert issubclass(ValidationError, QmhdError)
    assert issubclass(NumericalError, QmhdError)
    assert issubclass(NonPositiveDensity, ValidationError)
    assert issubclass(ZeroWaveVector, ValidationError)
    assert not issubclass(ValidationError, NumericalError)
