import numpy as np
import pytest

from qmhdwaves import _kernels


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Pay one-time JIT/FFT/LAPACK setup costs before any timed test."""
    n = 8
    fields = tuple(np.zeros(n, dtype=complex) for _ in range(6))
    coef = tuple(np.linspace(0.0, 1.0, n) for _ in range(6))
    _kernels.advance(fields, coef, (1.0, 0.0, 0.0), 1e-3, 2)
    np.linalg.eigvals(np.zeros((7, 7), dtype=complex))
    np.fft.ifft(np.fft.fft(np.zeros(16, dtype=complex)))
