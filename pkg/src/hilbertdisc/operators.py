"""Hilbert matrix and Cesaro operators in coefficient and integral form."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._numerics import csum
from .series import TaylorPolynomial, evaluate, monomial, shift
from .quadrature import IntervalRule, interval_rule

DEFAULT_RULE_SIZE = 128


def _default_rule(rule: IntervalRule | None) -> IntervalRule:
    return rule if rule is not None else interval_rule(DEFAULT_RULE_SIZE)


def _check_disc(z: complex) -> complex:
    z = complex(z)
    if abs(z) >= 1.0:
        raise ValueError(f"point must lie in the open unit disc, got {z!r}")
    return z


@dataclass(frozen=True)
class ArcPath:
    """s -> s/((s-1) w + 1), a circular arc from 0 to 1 through the disc."""

    w: complex

    def __post_init__(self):
        object.__setattr__(self, "w", _check_disc(self.w))

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        return s / ((s - 1.0) * self.w + 1.0)


def hilbert_coeff(f: TaylorPolynomial, n_out: int) -> TaylorPolynomial:
    """Coefficients sum_k a_k/(k+n+1) for n = 0..n_out."""
    n = np.arange(n_out + 1, dtype=float)
    out = np.zeros(n_out + 1, dtype=complex)
    for k in np.flatnonzero(f.coeffs):
        out += f.coeffs[k] / (k + n + 1.0)
    return TaylorPolynomial(out)


def cesaro_coeff(f: TaylorPolynomial, n_out: int) -> TaylorPolynomial:
    """Coefficients (a_0 + ... + a_n)/(n+1) for n = 0..n_out."""
    m = min(n_out, f.degree) + 1
    partial = np.empty(n_out + 1, dtype=complex)
    # compensated running sum in index order
    total, comp = 0j, 0j
    for i in range(m):
        y = complex(f.coeffs[i]) - comp
        t = total + y
        comp = (t - total) - y
        total = t
        partial[i] = total
    partial[m:] = partial[m - 1]
    return TaylorPolynomial(partial / np.arange(1, n_out + 2, dtype=float))


def hilbert_integral(f: TaylorPolynomial, z: complex, rule: IntervalRule | None = None) -> complex:
    """int_0^1 f(t)/(1 - t z) dt by Gauss quadrature."""
    z = _check_disc(z)
    rule = _default_rule(rule)
    t = rule.nodes
    return csum(rule.weights * evaluate(f, t.astype(complex)) / (1.0 - t * z))


def bounded_factor(f: TaylorPolynomial, z: complex, rule: IntervalRule | None = None) -> complex:
    """b(z) = int_0^1 psi_s(z) f(psi_s(z)) ds, so that H(f)'(z) = b(z)/(1 - z)."""
    z = _check_disc(z)
    rule = _default_rule(rule)
    psi = ArcPath(z)(rule.nodes)
    return csum(rule.weights * psi * evaluate(f, psi))


def hilbert_derivative(f: TaylorPolynomial, w: complex, rule: IntervalRule | None = None) -> complex:
    """Derivative of H(f) at w through the arc representation."""
    w = _check_disc(w)
    return bounded_factor(f, w, rule) / (1.0 - w)


def shift_relation_residual(n: int, n_out: int) -> float:
    """max |C(e_n) - S^n H(e_n)| over coefficients 0..n_out."""
    e_n = monomial(n)
    c = cesaro_coeff(e_n, n_out).coeffs
    h = shift(hilbert_coeff(e_n, n_out), n).coeffs[: n_out + 1]
    return float(np.max(np.abs(c - h)))
