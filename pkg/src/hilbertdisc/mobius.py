"""Disc automorphisms, the Poisson kernel and the logarithmic Green weight."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np


def _inside(a: complex) -> complex:
    a = complex(a)
    if not abs(a) < 1.0:
        raise ValueError(f"parameter a must satisfy |a| < 1, got {a!r}")
    return a


def sigma(a: complex, z):
    """(a - z)/(1 - conj(a) z); an involution of the disc swapping 0 and a."""
    a = complex(a)
    z = np.asarray(z, dtype=complex)
    den = 1.0 - np.conj(a) * z
    if np.any(den == 0):
        raise ZeroDivisionError("z is the pole 1/conj(a) of sigma_a")
    out = (a - z) / den
    return complex(out) if out.ndim == 0 else out


def one_minus_abs_sq_sigma(a: complex, z):
    """1 - |sigma_a(z)|^2 = (1-|a|^2)(1-|z|^2)/|1 - conj(a) z|^2 without cancellation."""
    a = complex(a)
    z = np.asarray(z, dtype=complex)
    out = (1.0 - abs(a) ** 2) * (1.0 - np.abs(z) ** 2) / np.abs(1.0 - np.conj(a) * z) ** 2
    return float(out) if out.ndim == 0 else out


def jacobian_modulus_sq(a: complex, z):
    """|sigma_a'(z)|^2 = (1-|a|^2)^2 / |1 - conj(a) z|^4."""
    a = complex(a)
    z = np.asarray(z, dtype=complex)
    out = (1.0 - abs(a) ** 2) ** 2 / np.abs(1.0 - np.conj(a) * z) ** 4
    return float(out) if out.ndim == 0 else out


def poisson_kernel(zeta: complex, theta):
    """(1-|zeta|^2)/|e^{i theta} - zeta|^2, normalized against d theta / 2 pi."""
    zeta = _inside(zeta)
    theta = np.asarray(theta, dtype=float)
    out = (1.0 - abs(zeta) ** 2) / np.abs(np.exp(1j * theta) - zeta) ** 2
    return float(out) if out.ndim == 0 else out


def log_weight(a: complex, z):
    """log |(1 - conj(a) z)/(a - z)|^2, the Green function of the disc with pole a."""
    a = complex(a)
    z = np.asarray(z, dtype=complex)
    if np.any(z == a):
        raise ValueError("log_weight is infinite at z = a")
    # log(1/|sigma|^2) = -log1p(-(1-|sigma|^2)) stays accurate near the circle
    gap = np.asarray(one_minus_abs_sq_sigma(a, z))
    s2 = np.abs(np.asarray(sigma(a, z))) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(gap < 0.5, -np.log1p(-np.minimum(gap, 0.5)), -np.log(s2))
    out = np.asarray(out, dtype=float)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class DiscAutomorphism:
    """phi(z) = lam * sigma_a(z)."""

    lam: complex = 1.0
    a: complex = 0.0

    def __post_init__(self):
        lam = complex(self.lam)
        if lam == 0:
            raise ValueError("rotation factor must be nonzero")
        object.__setattr__(self, "lam", lam / abs(lam))
        object.__setattr__(self, "a", _inside(self.a))

    @classmethod
    def identity(cls) -> "DiscAutomorphism":
        # sigma_0(z) = -z, so lam = -1 gives the identity map
        return cls(-1.0, 0.0)

    def __call__(self, z):
        return self.apply(z)

    def apply(self, z):
        out = self.lam * np.asarray(sigma(self.a, z))
        return complex(out) if np.ndim(out) == 0 else out

    def inverse(self) -> "DiscAutomorphism":
        # w = lam sigma_a(z)  <=>  z = sigma_a(conj(lam) w) = conj(lam) sigma_{lam a}(w)
        return DiscAutomorphism(np.conj(self.lam), self.lam * self.a)

    def preimage_of_zero(self) -> complex:
        return self.a

    def compose(self, other: "DiscAutomorphism") -> "DiscAutomorphism":
        """self o other as a normalized pair (lam, a)."""
        a = complex(other.inverse()(self.inverse()(0.0)))
        # h = lam sigma_a; read lam off at whichever of +-1/2 lies farther from a
        z = 0.5 if abs(a - 0.5) >= abs(a + 0.5) else -0.5
        lam = complex(self(other(z))) / complex(sigma(a, z))
        lam /= abs(lam)
        return DiscAutomorphism(lam, a)

    def to_json(self) -> str:
        return json.dumps({"lambda": [self.lam.real, self.lam.imag], "a": [self.a.real, self.a.imag]})

    @classmethod
    def from_json(cls, text) -> "DiscAutomorphism":
        d = json.loads(text) if isinstance(text, str) else text
        return cls(complex(*d["lambda"]), complex(*d["a"]))
