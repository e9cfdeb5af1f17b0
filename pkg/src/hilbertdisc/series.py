"""Truncated Taylor series on the unit disc.

A :class:`TaylorPolynomial` stores the coefficients ``a_0 .. a_N`` of an
analytic function.  A :class:`TailedSeries` adds an exactly summable tail
``c / (n + s)`` for ``n > N``, which is the coefficient pattern of
``log(1/(1-z))`` and of the Hilbert transform of the constant 1.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy import special

from ._numerics import rsum

DEFAULT_DEGREE = 512

# series sums drop terms below this fraction of the largest retained term
_DROP = 1e-18
# largest number of autocorrelation lags used for tailed series
MAX_LAGS = 1 << 20


# ---------------------------------------------------------------------------
# low level helpers
# ---------------------------------------------------------------------------

def _as_points(z) -> np.ndarray:
    return np.asarray(z, dtype=complex)


def _check_inside(z: np.ndarray, what: str = "z") -> None:
    if z.size and np.max(np.abs(z)) >= 1.0:
        raise ValueError(f"{what} must lie in the open unit disc, got |{what}| = {np.max(np.abs(z))!r}")


def _needed_terms(c: np.ndarray, rmax: float) -> int:
    """Number of leading coefficients that matter for |z| <= rmax."""
    n = c.size
    if rmax == 0.0:
        return 1
    if rmax >= 1.0:
        return n
    k = int(math.ceil(math.log(_DROP * (1.0 - rmax)) / math.log(rmax))) + 1
    while k < n:
        head = np.max(np.abs(c[:k])) if k else 0.0
        tail = np.max(np.abs(c[k:])) * rmax ** k / (1.0 - rmax)
        if tail <= _DROP * max(head, 1e-300):
            return k
        k *= 2
    return n


def _powers(z: complex, k: int) -> np.ndarray:
    """z**0 .. z**(k-1) by blocks, accurate to a few ulp."""
    b = int(math.ceil(math.sqrt(k)))
    small = np.power(z, np.arange(b))
    big = np.power(z ** b, np.arange(int(math.ceil(k / b))))
    return np.outer(big, small).ravel()[:k]


def series_sum(c: np.ndarray, z) -> np.ndarray:
    """Evaluate sum_n c[n] z**n, dropping terms that cannot matter."""
    z = _as_points(z)
    flat = z.ravel()
    if flat.size == 0:
        return np.zeros(z.shape, dtype=complex)
    rmax = float(np.max(np.abs(flat)))
    c = c[: _needed_terms(c, rmax)]
    if flat.size <= 8 and c.size > 2048:
        out = np.array([np.dot(c, _powers(w, c.size)) for w in flat])
    else:
        out = np.full(flat.shape, c[-1], dtype=complex)
        for a in c[-2::-1]:
            out = out * flat + a
    return out.reshape(z.shape)


def _autocorrelation(c: np.ndarray) -> np.ndarray:
    """r[k] = sum_m c[m+k] conj(c[m]) for k = 0..len(c)-1."""
    n = c.size
    if n <= 256:
        return np.correlate(c, c, mode="full")[n - 1:]
    size = 1 << int(math.ceil(math.log2(2 * n)))
    spectrum = np.fft.fft(c, size)
    r = np.fft.ifft(spectrum * np.conj(spectrum))[:n]
    r[0] = rsum(np.abs(c) ** 2)
    return r


def _extension_from_acf(acf: np.ndarray, zeta: complex) -> float:
    if acf.size == 1 or zeta == 0:
        return float(acf[0].real)
    tail = series_sum(np.concatenate(([0.0], acf[1:])), zeta)
    return float(acf[0].real + 2.0 * tail.real)


# ---------------------------------------------------------------------------
# TaylorPolynomial
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class TaylorPolynomial:
    """Polynomial sum_n coeffs[n] z**n with complex coefficients."""

    coeffs: np.ndarray
    _memo: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).ravel()
        if c.size == 0:
            c = np.zeros(1, dtype=complex)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __call__(self, z):
        return evaluate(self, z)

    def __add__(self, other: "TaylorPolynomial") -> "TaylorPolynomial":
        n = max(self.coeffs.size, other.coeffs.size)
        out = np.zeros(n, dtype=complex)
        out[: self.coeffs.size] += self.coeffs
        out[: other.coeffs.size] += other.coeffs
        return TaylorPolynomial(out)

    def __sub__(self, other: "TaylorPolynomial") -> "TaylorPolynomial":
        return self + (-1.0) * other

    def __mul__(self, alpha: complex) -> "TaylorPolynomial":
        return TaylorPolynomial(complex(alpha) * self.coeffs)

    __rmul__ = __mul__

    def __neg__(self) -> "TaylorPolynomial":
        return (-1.0) * self

    def value_at_zero(self) -> complex:
        return complex(self.coeffs[0])

    def derivative_values(self, z) -> np.ndarray:
        return evaluate(differentiate(self), z)

    def autocorrelation(self) -> np.ndarray:
        if "acf" not in self._memo:
            self._memo["acf"] = _autocorrelation(self.coeffs)
        return self._memo["acf"]

    def to_json(self) -> str:
        return json.dumps([[float(a.real), float(a.imag)] for a in self.coeffs])

    @classmethod
    def from_json(cls, text: str) -> "TaylorPolynomial":
        data = json.loads(text) if isinstance(text, str) else text
        if not isinstance(data, list) or not data:
            raise ValueError("polynomial JSON must be a nonempty array of [re, im] pairs")
        coeffs = []
        for i, pair in enumerate(data):
            if isinstance(pair, (int, float)):
                coeffs.append(complex(pair))
            elif isinstance(pair, list) and len(pair) == 2:
                coeffs.append(complex(float(pair[0]), float(pair[1])))
            else:
                raise ValueError(f"coefficient {i} is not an [re, im] pair: {pair!r}")
        return cls(np.array(coeffs))


def evaluate(p: TaylorPolynomial, z) -> np.ndarray | complex:
    """Value of p at points of the open disc (nested evaluation)."""
    pts = _as_points(z)
    _check_inside(pts)
    out = series_sum(p.coeffs, pts)
    return complex(out) if out.ndim == 0 else out


def differentiate(p: TaylorPolynomial) -> TaylorPolynomial:
    if p.degree == 0:
        return TaylorPolynomial([0.0])
    n = np.arange(1, p.degree + 1)
    return TaylorPolynomial(n * p.coeffs[1:])


def shift(p: TaylorPolynomial, k: int) -> TaylorPolynomial:
    """Multiplication by z**k."""
    if k < 0:
        raise ValueError("shift order must be nonnegative")
    return TaylorPolynomial(np.concatenate((np.zeros(k, dtype=complex), p.coeffs)))


def truncate(p: TaylorPolynomial, degree: int) -> TaylorPolynomial:
    return TaylorPolynomial(p.coeffs[: degree + 1])


def eval_on_circle(p: TaylorPolynomial, r: float, m: int) -> np.ndarray:
    """Values at r*exp(2 pi i j/m), j = 0..m-1, by FFT with index folding."""
    n = np.arange(p.coeffs.size)
    scaled = p.coeffs * np.power(float(r), n) if r > 0 else np.where(n == 0, p.coeffs, 0)
    folded = np.zeros(m, dtype=complex)
    np.add.at(folded, n % m, scaled)
    return m * np.fft.ifft(folded)


def hardy_mean(p: TaylorPolynomial, r: float, q: float) -> float:
    """Integral mean M_q(r, p) with the normalized measure d theta / 2 pi."""
    if not 0.0 <= r < 1.0:
        raise ValueError("radius must satisfy 0 <= r < 1")
    if q < 1.0:
        raise ValueError("exponent q must be >= 1")
    if r == 0.0:
        return abs(p.coeffs[0])
    if q == 2.0:
        sq = np.abs(p.coeffs) ** 2
        # terms past n_eff are bounded by r^(2 n_eff) * sum|a_n|^2, far below rounding
        bound = float(np.sum(sq))
        n_eff = sq.size
        if bound > 0.0:
            n_need = math.ceil((math.log(bound) - math.log(sq[0] + 1e-300 * bound) + 40 * math.log(10))
                               / (-2.0 * math.log(r)))
            n_eff = min(sq.size, max(n_need, 1))
        n = np.arange(n_eff)
        return math.sqrt(rsum(sq[:n_eff] * np.power(r, 2 * n)))
    m = max(4 * p.degree, 256)
    vals = np.abs(eval_on_circle(p, r, m))
    scale = float(np.max(vals))
    if scale == 0.0:
        return 0.0
    return scale * (rsum((vals / scale) ** q) / m) ** (1.0 / q)


def poisson_extension_mod_sq(p, zeta: complex) -> float:
    """Harmonic extension of |p|^2 from the circle, evaluated at zeta."""
    zeta = complex(zeta)
    if abs(zeta) >= 1.0:
        raise ValueError("zeta must lie in the open unit disc")
    if isinstance(p, TailedSeries):
        return p.poisson_extension_mod_sq(zeta)
    return _extension_from_acf(p.autocorrelation(), zeta)


# ---------------------------------------------------------------------------
# grids and sup estimates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EvaluationDiskGrid:
    radii: tuple
    angles: tuple
    purpose: str = "sup-estimation"

    def __post_init__(self):
        radii = tuple(float(r) for r in self.radii)
        angles = tuple(float(t) for t in self.angles)
        if not radii or not angles:
            raise ValueError("grid must be nonempty")
        if any(not 0.0 <= r < 1.0 for r in radii) or any(b <= a for a, b in zip(radii, radii[1:])):
            raise ValueError("radii must be strictly increasing in [0, 1)")
        if any(not 0.0 <= t < 2 * math.pi for t in angles) or any(b <= a for a, b in zip(angles, angles[1:])):
            raise ValueError("angles must be strictly increasing in [0, 2 pi)")
        if self.purpose not in ("sup-estimation", "plotting"):
            raise ValueError(f"unknown grid purpose {self.purpose!r}")
        object.__setattr__(self, "radii", radii)
        object.__setattr__(self, "angles", angles)

    @classmethod
    def uniform(cls, n_radii: int, n_angles: int, r_max: float, purpose: str = "sup-estimation"):
        radii = np.linspace(0.0, r_max, n_radii)
        angles = 2 * np.pi * np.arange(n_angles) / n_angles
        return cls(tuple(radii), tuple(angles), purpose)

    def points(self) -> np.ndarray:
        r = np.asarray(self.radii)[:, None]
        t = np.asarray(self.angles)[None, :]
        return (r * np.exp(1j * t)).ravel()


def sup_modulus_estimate(p: TaylorPolynomial, grid: EvaluationDiskGrid) -> float:
    """Max of |p| over the grid; a lower bound for the sup norm."""
    return float(np.max(np.abs(evaluate(p, grid.points()))))


# ---------------------------------------------------------------------------
# named functions and constructions
# ---------------------------------------------------------------------------

def monomial(n: int, c: complex = 1.0) -> TaylorPolynomial:
    out = np.zeros(n + 1, dtype=complex)
    out[n] = c
    return TaylorPolynomial(out)


def constant(c: complex) -> TaylorPolynomial:
    return TaylorPolynomial([c])


def geometric_series(degree: int = DEFAULT_DEGREE) -> TaylorPolynomial:
    """Truncation of 1/(1-z)."""
    return TaylorPolynomial(np.ones(degree + 1))


def log_series(degree: int = DEFAULT_DEGREE) -> TaylorPolynomial:
    """Truncation of log(1/(1-z)) = sum_{n>=1} z**n / n."""
    n = np.arange(degree + 1, dtype=float)
    c = np.zeros(degree + 1)
    c[1:] = 1.0 / n[1:]
    return TaylorPolynomial(c)


def hilbert_one_series(degree: int = DEFAULT_DEGREE) -> TaylorPolynomial:
    """Truncation of (1/z) log(1/(1-z)) = sum z**n / (n+1)."""
    return TaylorPolynomial(1.0 / np.arange(1, degree + 2, dtype=float))


def mobius_series(a: complex, degree: int = DEFAULT_DEGREE) -> TaylorPolynomial:
    """Expansion of (a - z)/(1 - conj(a) z)."""
    a = complex(a)
    if abs(a) >= 1.0:
        raise ValueError("|a| must be < 1")
    n = np.arange(1, degree + 1)
    c = np.empty(degree + 1, dtype=complex)
    c[0] = a
    c[1:] = (abs(a) ** 2 - 1.0) * np.power(np.conj(a), n - 1)
    return TaylorPolynomial(c)


def multiply(p: TaylorPolynomial, q: TaylorPolynomial, degree: int) -> TaylorPolynomial:
    return TaylorPolynomial(np.convolve(p.coeffs, q.coeffs)[: degree + 1])


def blaschke_series(zeros: Sequence[complex], degree: int = DEFAULT_DEGREE) -> TaylorPolynomial:
    out = constant(1.0)
    for a in zeros:
        out = multiply(out, mobius_series(a, degree), degree)
    return out


def compose(p: TaylorPolynomial, q: TaylorPolynomial, degree: int) -> TaylorPolynomial:
    """Truncation of p(q(z)) at the given degree (Horner in series arithmetic)."""
    q = truncate(q, degree)
    out = constant(p.coeffs[-1])
    for a in p.coeffs[-2::-1]:
        out = multiply(out, q, degree) + constant(a)
    return truncate(out, degree)


# ---------------------------------------------------------------------------
# series with an exactly summed harmonic tail
# ---------------------------------------------------------------------------

def _harmonic_tail(z: np.ndarray, n: int, s: int, drop: int = 0) -> np.ndarray:
    """sum_{k>n} z**(k-drop) / (k+s) for |z| < 1."""
    z = _as_points(z)
    out = np.zeros(z.shape, dtype=complex)
    small = np.abs(z) <= 0.5
    if np.any(small):
        w = z[small]
        j = np.arange(64)
        acc = np.zeros(w.shape, dtype=complex)
        for jj in j[::-1]:
            acc = acc * w + 1.0 / (n + 1 + s + jj)
        out[small] = np.power(w, n + 1 - drop) * acc
    big = ~small
    if np.any(big):
        w = z[big]
        k = n + s
        partial = np.zeros(w.shape, dtype=complex)
        for m in range(k, 0, -1):
            partial = partial * w + 1.0 / m
        partial = partial * w
        log_tail = -np.log1p(-w) - partial
        out[big] = log_tail / np.power(w, s + drop)
    return out


@dataclass(frozen=True, eq=False)
class TailedSeries:
    """head(z) + scale * sum_{n > head.degree} z**n / (n + shift)."""

    head: TaylorPolynomial
    tail_scale: complex = 1.0
    tail_shift: int = 0
    _memo: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.tail_shift, (int, np.integer)) or not 0 <= self.tail_shift <= 8:
            raise ValueError("tail shift must be an integer in 0..8")
        object.__setattr__(self, "tail_scale", complex(self.tail_scale))

    @property
    def degree(self) -> int:
        return self.head.degree

    def coefficients(self, n_max: int) -> np.ndarray:
        n_head = self.head.coeffs.size
        if n_max + 1 <= n_head:
            return np.array(self.head.coeffs[: n_max + 1])
        k = np.arange(n_head, n_max + 1, dtype=float)
        return np.concatenate((self.head.coeffs, self.tail_scale / (k + self.tail_shift)))

    def truncate(self, degree: int) -> TaylorPolynomial:
        return TaylorPolynomial(self.coefficients(degree))

    def value_at_zero(self) -> complex:
        return complex(self.head.coeffs[0])

    def __call__(self, z):
        return self.evaluate(z)

    def evaluate(self, z):
        pts = _as_points(z)
        _check_inside(pts)
        out = series_sum(self.head.coeffs, pts) + self.tail_scale * _harmonic_tail(pts, self.degree, self.tail_shift)
        return complex(out) if out.ndim == 0 else out

    def derivative_values(self, z):
        pts = _as_points(z)
        _check_inside(pts)
        n, s = self.degree, self.tail_shift
        out = series_sum(differentiate(self.head).coeffs, pts) if n > 0 else np.zeros(pts.shape, dtype=complex)
        geo = np.power(pts, n) / (1.0 - pts)
        tail = geo - s * _harmonic_tail(pts, n, s, drop=1) if s else geo
        out = out + self.tail_scale * tail
        return complex(out) if out.ndim == 0 else out

    def sq_norm(self) -> float:
        """sum |a_n|^2 over all n, tail summed by the trigamma function."""
        head = rsum(np.abs(self.head.coeffs) ** 2)
        tail = abs(self.tail_scale) ** 2 * float(special.polygamma(1, self.degree + 1 + self.tail_shift))
        return head + tail

    def _acf(self, lags: int) -> np.ndarray:
        """Exact autocorrelation r[0..lags] including the tail-tail pairs."""
        lags = max(lags, 1)
        key = 1 << int(math.ceil(math.log2(lags)))
        if key not in self._memo:
            e = self.degree + key
            r = _autocorrelation(self.coefficients(e))[: key + 1].copy()
            s = self.tail_shift
            c2 = abs(self.tail_scale) ** 2
            k = np.arange(1, key + 1, dtype=float)
            r[0] = self.sq_norm()
            r[1:] += c2 * (special.digamma(e + 1 + s) - special.digamma(e - k + 1 + s)) / k
            self._memo[key] = r
        return self._memo[key]

    def poisson_extension_mod_sq(self, zeta: complex) -> float:
        rho = abs(zeta)
        if rho == 0.0:
            return self.sq_norm()
        lags = int(math.ceil(math.log(_DROP * (1.0 - rho)) / math.log(rho))) + 1
        return _extension_from_acf(self._acf(min(lags, MAX_LAGS)), zeta)

    def to_json(self) -> str:
        return json.dumps({
            "head": json.loads(self.head.to_json()),
            "tail": {"scale": [self.tail_scale.real, self.tail_scale.imag], "shift": int(self.tail_shift)},
        })


def log_tailed(degree: int = DEFAULT_DEGREE) -> TailedSeries:
    """log(1/(1-z)) as head of the given degree plus exact tail."""
    return TailedSeries(log_series(degree), 1.0, 0)


def hilbert_one_tailed(degree: int = DEFAULT_DEGREE) -> TailedSeries:
    """(1/z) log(1/(1-z)) as head of the given degree plus exact tail."""
    return TailedSeries(hilbert_one_series(degree), 1.0, 1)


def function_from_json(data) -> TaylorPolynomial | TailedSeries:
    """Accept a coefficient array or a {head, tail} object."""
    if isinstance(data, str):
        data = json.loads(data)
    if isinstance(data, dict):
        if "head" not in data:
            raise ValueError("series object needs a 'head' coefficient array")
        head = TaylorPolynomial.from_json(data["head"])
        tail = data.get("tail")
        if tail is None:
            return head
        scale = tail.get("scale", [1.0, 0.0])
        return TailedSeries(head, complex(scale[0], scale[1]), int(tail.get("shift", 0)))
    return TaylorPolynomial.from_json(data)


def as_coefficients(values: Iterable[complex]) -> TaylorPolynomial:
    return TaylorPolynomial(np.fromiter(values, dtype=complex))
