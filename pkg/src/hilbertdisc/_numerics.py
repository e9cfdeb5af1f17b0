"""Deterministic reductions shared by the numerical modules."""

from __future__ import annotations

import math

import numpy as np


def rsum(values) -> float:
    """Correctly rounded sum of real values (order independent)."""
    return math.fsum(np.asarray(values, dtype=float).ravel())


def csum(values) -> complex:
    """Correctly rounded sum of complex values, real and imaginary parts separately."""
    v = np.asarray(values, dtype=complex).ravel()
    return complex(math.fsum(v.real), math.fsum(v.imag))


def check_finite(values, where, label: str = "integrand") -> None:
    """Raise with the location of the first non-finite value."""
    values = np.asarray(values)
    bad = ~np.isfinite(values)
    if np.any(bad):
        i = int(np.flatnonzero(bad.ravel())[0])
        loc = np.asarray(where).ravel()[i]
        raise FloatingPointError(f"{label} is not finite at node {loc!r} (index {i})")
