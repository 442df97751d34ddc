"""
Modified Bessel functions of the second kind for the capacitor series.

Thin, domain-checked wrappers over scipy.special. Values past the
exponential range come back as exact 0.0, which is the physical limit of
the shielded series terms.
"""
import numpy as np
from scipy import special

from core.errors import BesselDomainError


def _check_domain(x, name: str) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0)):
        raise BesselDomainError(f"{name} requires x > 0, got {x!r}")
    return arr


def _unwrap(value: np.ndarray, x):
    return float(value) if np.ndim(x) == 0 else value


def bessel_k0(x):
    arr = _check_domain(x, "bessel_k0")
    return _unwrap(special.k0(arr), x)


def bessel_k1(x):
    arr = _check_domain(x, "bessel_k1")
    return _unwrap(special.k1(arr), x)


def bessel_k2(x):
    arr = _check_domain(x, "bessel_k2")
    return _unwrap(special.kn(2, arr), x)


def bessel_k0_second_derivative(x):
    """K0''(x) = K0(x) + K1(x)/x."""
    arr = _check_domain(x, "bessel_k0_second_derivative")
    return _unwrap(special.k0(arr) + special.k1(arr) / arr, x)


# --- First kind, only used to check the Wronskian ---

def bessel_i0(x):
    return _unwrap(special.i0(np.asarray(x, dtype=float)), x)


def bessel_i1(x):
    return _unwrap(special.i1(np.asarray(x, dtype=float)), x)
