"""BMOA, Q_p, M(D_mu) and mean Lipschitz norms, and the norm formulas for H and C.

Area functionals are evaluated after the change of variables
zeta = sigma_a(w), under which

    int |f'(w)|^2 W(|sigma_a(w)|) dA(w) = int |(f o sigma_a)'(zeta)|^2 W(|zeta|) dA(zeta).

For radial weights W this puts every singular feature at a known place:
the logarithmic weight sits at zeta = 0, the Jacobian peak at the boundary
point a/|a|, and a boundary singularity of f at z = 1 moves to sigma_a(1).
The graded disc rule refines towards those boundary points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .measures import (
    AtomicMeasure,
    BoundednessConfig,
    DIVERGENT,
    Measure,
    RadialMeasure,
    as_radial,
    boundedness_check,
    potential_cache,
    total_moment,
)
from .mobius import DiscAutomorphism, jacobian_modulus_sq, sigma
from .quadrature import (
    DiscRule,
    SingularityHint,
    SupResult,
    SupSearchConfig,
    integrate_disc_values,
    interval_rule,
    sup_over_disc,
    wedge_rule,
)
from .series import (
    TailedSeries,
    TaylorPolynomial,
    differentiate,
    evaluate,
    hardy_mean,
    poisson_extension_mod_sq,
)
from ._numerics import rsum

Analytic = TaylorPolynomial | TailedSeries

# images of boundary points with |w| closer than this to 1 are pulled inside
_EDGE = 1.0 - 2.0 ** -50


@dataclass(frozen=True)
class SeminormReport:
    norm_value: float
    point_evaluation_part: float
    sup_part: SupResult
    method: str
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "norm_value": self.norm_value,
            "point_evaluation_part": self.point_evaluation_part,
            "sup_part": self.sup_part.to_dict(),
            "method": self.method,
            "details": dict(self.details),
        }


def _check_disc(a: complex) -> complex:
    a = complex(a)
    if abs(a) >= 1.0:
        raise ValueError(f"|a| must be < 1, got {a!r}")
    return a


def _value_at_zero(f: Analytic) -> complex:
    return complex(f.value_at_zero()) if isinstance(f, TailedSeries) else complex(f.coeffs[0])


def _eval(f: Analytic, z):
    return f.evaluate(z) if isinstance(f, TailedSeries) else evaluate(f, z)


def _derivative(f: Analytic) -> Callable:
    if isinstance(f, TailedSeries):
        return f.derivative_values
    df = differentiate(f)
    return lambda w: evaluate(df, w)


def _is_constant(f: Analytic) -> bool:
    if isinstance(f, TailedSeries):
        return False
    return not np.any(f.coeffs[1:])


# ---------------------------------------------------------------------------
# BMOA
# ---------------------------------------------------------------------------

def garsia_functional(f: Analytic, a: complex) -> float:
    """P[|f|^2](a) - |f(a)|^2 with the Poisson kernel (1-|a|^2)/|e^{it}-a|^2."""
    a = _check_disc(a)
    return poisson_extension_mod_sq(f, a) - abs(_eval(f, a)) ** 2


def pullback_rule(a: complex, boundary_points: Sequence[complex] = (1.0,), hint_exponent: float = 0.0,
                  order: int = 14, levels: int = 40) -> DiscRule:
    """Graded rule in zeta = sigma_a(w) for radial weights."""
    a = complex(a)
    angles = [math.atan2(a.imag, a.real)] if abs(a) > 0 else []
    for b in boundary_points:
        img = complex(sigma(a, complex(b)))
        angles.append(math.atan2(img.imag, img.real))
    return wedge_rule(angles, order=order, levels=levels,
                      boundary_hint=SingularityHint("power", max(hint_exponent, 0.0)))


def pullback_energy(f: Analytic, a: complex, weight: Callable[[np.ndarray, np.ndarray], np.ndarray],
                    rule: DiscRule | None = None, hint_exponent: float = 0.0) -> float:
    """int |f'(w)|^2 W(|sigma_a(w)|) dA(w) for a radial weight W(r, gap)."""
    a = _check_disc(a)
    if _is_constant(f):
        return 0.0
    if rule is None:
        rule = pullback_rule(a, hint_exponent=hint_exponent)
    zeta = rule.z
    w = np.asarray(sigma(a, zeta)) if a != 0 else -zeta
    mod = np.abs(w)
    w = np.where(mod > _EDGE, w * (_EDGE / np.maximum(mod, _EDGE)), w)
    dens = np.abs(_derivative(f)(w)) ** 2 * np.asarray(jacobian_modulus_sq(a, zeta))
    wts = rule.radial_values(weight)
    return integrate_disc_values(dens * wts, rule)


def _log_weight_radial(r, g):
    return -2.0 * np.log1p(-g)


def bmoa_area_functional(f: Analytic, a: complex, rule: DiscRule | None = None) -> float:
    """int |f'(z)|^2 log|(1 - conj(a) z)/(a - z)|^2 dA(z).

    A supplied rule is read in the variable zeta = sigma_a(z) and should
    carry a logarithmic radial hint at the centre.
    """
    return pullback_energy(f, a, _log_weight_radial, rule, hint_exponent=1.0)


def _bmoa_config(f: Analytic) -> SupSearchConfig:
    return SupSearchConfig()


def bmoa_norm(f: Analytic, config: SupSearchConfig | None = None) -> SeminormReport:
    """|f(0)| + sqrt(sup_a Garsia functional)."""
    f0 = abs(_value_at_zero(f))
    if _is_constant(f):
        res = SupResult(0.0, 0j, 0.0, True)
        return SeminormReport(f0, f0, res, "garsia")
    config = config or _bmoa_config(f)
    res = sup_over_disc(lambda a: garsia_functional(f, a), config)
    return SeminormReport(f0 + math.sqrt(max(res.value, 0.0)), f0, res, "garsia")


# ---------------------------------------------------------------------------
# Q_p
# ---------------------------------------------------------------------------

def qp_functional(f: Analytic, a: complex, p: float, rule: DiscRule | None = None) -> float:
    """int |f'(z)|^2 (1 - |sigma_a(z)|^2)^p dA(z)."""
    if p <= 0:
        raise ValueError("p must be positive")
    return pullback_energy(f, a, lambda r, g: (g * (2.0 - g)) ** p, rule, hint_exponent=p)


def qp_norm(f: Analytic, p: float, config: SupSearchConfig | None = None) -> SeminormReport:
    f0 = abs(_value_at_zero(f))
    config = config or SupSearchConfig()
    res = sup_over_disc(lambda a: qp_functional(f, a, p), config)
    return SeminormReport(f0 + math.sqrt(max(res.value, 0.0)), f0, res, "qp", {"p": p})


# ---------------------------------------------------------------------------
# M(D_mu)
# ---------------------------------------------------------------------------

def _require_nontrivial(mu: Measure) -> None:
    if not math.isfinite(total_moment(mu)):
        raise ValueError("measure is trivial: int (1 - |z|^2) dmu is infinite")


def _radial_weight(mu: RadialMeasure, form: str):
    cache = potential_cache(mu, form)
    return lambda r, g: cache(r, g)


def mdmu_functional(f: Analytic, phi: DiscAutomorphism, mu: Measure, rule: DiscRule | None = None,
                    form: str = "u", method: str = "auto") -> float:
    """int |f'(w)|^2 U_mu(phi(w)) dA(w), or the V_mu form.

    For radial mu only the point a = phi^{-1}(0) matters.  For atomic mu the
    U form defaults to the exact identity sum m_j G(f, phi^{-1}(p_j)) with G
    the Garsia functional (method "identity"); method "quadrature" integrates
    the same sum of logarithmic weights by quadrature instead.
    """
    if form not in ("u", "v"):
        raise ValueError("form must be 'u' or 'v'")
    _require_nontrivial(mu)
    rad = as_radial(mu)
    if rad is not None and not (isinstance(mu, AtomicMeasure) and method == "identity"):
        beta = rad.boundary_exponent + 2.0 if rad.has_density else 1.0
        return pullback_energy(f, phi.a, _radial_weight(rad, form), rule, hint_exponent=beta)
    inv = phi.inverse()
    total = []
    for p, m in zip(mu.points, mu.masses):
        b = complex(inv(p))
        if form == "v":
            total.append(m * pullback_energy(f, b, lambda r, g: g * (2.0 - g), rule, hint_exponent=1.0))
        elif method in ("auto", "identity"):
            total.append(m * garsia_functional(f, b))
        else:
            total.append(m * bmoa_area_functional(f, b, rule))
    return rsum(total)


def _nonnegative_coefficients(f: Analytic) -> bool:
    head = f.head.coeffs if isinstance(f, TailedSeries) else f.coeffs
    ok = bool(np.all(head.imag == 0) and np.all(head.real >= 0))
    if isinstance(f, TailedSeries):
        ok = ok and f.tail_scale.imag == 0 and f.tail_scale.real >= 0
    return ok


def mdmu_norm(f: Analytic, mu: Measure, config: SupSearchConfig | None = None, form: str = "u",
              rotations: int = 8) -> SeminormReport:
    """|f(0)| + sqrt(sup over automorphisms of the M(D_mu) functional).

    For radial measures the rotation drops out.  When f also has real
    nonnegative coefficients the default search runs over real a in
    (-1, 1), where |f'| peaks; otherwise a ranges over the disc.  Other
    measures sample the rotation at `rotations` equally spaced points.
    """
    _require_nontrivial(mu)
    f0 = abs(_value_at_zero(f))
    if _is_constant(f):
        return SeminormReport(f0, f0, SupResult(0.0, 0j, 0.0, True), form + "-form")
    radial = as_radial(mu) is not None
    if config is None:
        config = SupSearchConfig(restrict_to_real_axis=radial and _nonnegative_coefficients(f))
    if radial:
        F = lambda a: mdmu_functional(f, DiscAutomorphism(1.0, a), mu, form=form)
    else:
        lams = [complex(math.cos(t), math.sin(t)) for t in 2 * math.pi * np.arange(rotations) / rotations]
        F = lambda a: max(mdmu_functional(f, DiscAutomorphism(lam, a), mu, form=form) for lam in lams)
    res = sup_over_disc(F, config)
    return SeminormReport(f0 + math.sqrt(max(res.value, 0.0)), f0, res, form + "-form")


# ---------------------------------------------------------------------------
# norm formulas for H and C from H-infinity
# ---------------------------------------------------------------------------

def _formula_rule(mu: RadialMeasure, gap_cut: float = 0.0) -> DiscRule:
    beta = mu.boundary_exponent + 2.0 if mu.has_density else 1.0
    return wedge_rule([0.0, math.pi], order=10, levels=40,
                      boundary_hint=SingularityHint("power", max(beta, 0.0)), gap_cut=gap_cut)


def _formula_integral(mu: RadialMeasure, rule: DiscRule) -> float:
    cache = potential_cache(mu, "u")
    u = rule.radial_values(lambda r, g: cache(r, g))
    z = rule.z
    return integrate_disc_values(4.0 * u / np.abs(1.0 - z * z) ** 2, rule)


def log_norm_sq_formula(mu: Measure, rule: DiscRule | None = None, method: str = "wedge",
                        growth_factor: float = 0.10) -> float:
    """int 4 |1 - z^2|^-2 U_mu(z) dA(z); math.inf when the integral diverges.

    method "wedge" integrates in two dimensions with grading at z = +-1.
    method "radial" uses the angular mean 4/(1 - r^4) and a 1-D rule.
    Divergence is judged by the growth of the integral over |z| < 1 - 10^-k
    for k = 4, 5, 6 with the same relative threshold as the boundedness test.
    """
    rad = as_radial(mu)
    if rad is None:
        raise ValueError("the norm formula needs a radial measure")
    if not math.isfinite(total_moment(rad)):
        return math.inf
    if method == "radial":
        return _formula_radial(rad)
    if method != "wedge":
        raise ValueError("method must be 'wedge' or 'radial'")
    ladder = [_formula_integral(rad, _formula_rule(rad, 10.0 ** -k)) for k in (4, 5, 6)]
    if ladder[1] > 0 and (ladder[2] - ladder[1]) / ladder[1] >= growth_factor:
        return math.inf
    return _formula_integral(rad, rule if rule is not None else _formula_rule(rad))


def _formula_radial(mu: RadialMeasure) -> float:
    cache = potential_cache(mu, "u")
    parts = []
    # r in [0, 1/2] with a log hint for atoms at the centre, then dyadic gaps
    rule0 = interval_rule(40, "log")
    r, w, _, _ = rule0.on(0.0, 0.5)
    parts.append(w * cache(r, 1.0 - r) * 8.0 * r / (1.0 - r ** 4))
    edge = interval_rule(20)
    g_hi = 0.5
    while g_hi > 1e-300:
        g_lo = g_hi / 4.0
        g, wg, _, _ = edge.on(g_lo, g_hi)
        r = 1.0 - g
        one_m_r4 = g * (2.0 - g) * (1.0 + r * r)
        parts.append(wg * cache(r, g) * 8.0 * r / one_m_r4)
        g_hi = g_lo
    return rsum(np.concatenate(parts))


def hilbert_norm_hinf_mdmu(mu: Measure, check: bool = True) -> float:
    """1 + sqrt(int 4 |1 - z^2|^-2 U_mu dA) for measures passing the boundedness test."""
    if check:
        report = boundedness_check(mu, BoundednessConfig())
        if report.verdict == DIVERGENT:
            raise ValueError(
                "the condition integrals diverge for this measure, so H is not bounded from "
                "H-infinity into M(D_mu) and the norm formula does not apply"
            )
    k = log_norm_sq_formula(mu)
    if not math.isfinite(k):
        raise ValueError("the norm formula integral diverges for this measure")
    return 1.0 + math.sqrt(k)


def cesaro_norm_hinf_mdmu(mu: Measure, check: bool = True) -> float:
    """The Cesaro operator obeys the same norm formula."""
    return hilbert_norm_hinf_mdmu(mu, check)


# ---------------------------------------------------------------------------
# mean Lipschitz spaces
# ---------------------------------------------------------------------------

def default_lambda_radii(n: int = 20, depth: float = 5.0) -> list[float]:
    return [1.0 - 10.0 ** (-depth * k / n) for k in range(1, n + 1)]


def lambda_profile(f: TaylorPolynomial, p: float, r_grid: Sequence[float]) -> list[float]:
    """M_p(r, f') (1 - r^2)^(1 - 1/p) at each radius."""
    df = differentiate(f)
    out = []
    for r in r_grid:
        omr2 = (1.0 - r) * (1.0 + r)
        out.append(hardy_mean(df, r, p) * omr2 ** (1.0 - 1.0 / p))
    return out


def lambda_norm(f: TaylorPolynomial, p: float, r_grid: Sequence[float] | None = None) -> float:
    """|f(0)| + max over the grid of M_p(r, f')(1 - r^2)^(1 - 1/p), d theta / 2 pi means."""
    if p <= 1.0:
        raise ValueError("p must exceed 1")
    r_grid = default_lambda_radii() if r_grid is None else r_grid
    return abs(f.coeffs[0]) + max(lambda_profile(f, p, r_grid))


# ---------------------------------------------------------------------------
# the area identity for point masses
# ---------------------------------------------------------------------------

def lp_identity_sides(f: Analytic, mu: AtomicMeasure, rule: DiscRule | None = None) -> tuple[float, float]:
    """Left side sum m_j G(f, p_j) exactly; right side int |f'|^2 U_mu dA by quadrature.

    Without a rule the right side is split by linearity into one integral
    per atom, each taken in the variable in which its logarithmic weight is
    centred.  A supplied rule is used directly on the z-plane integrand.
    """
    lhs = rsum([m * garsia_functional(f, p) for p, m in zip(mu.points, mu.masses)])
    if rule is None:
        rhs = rsum([m * bmoa_area_functional(f, p) for p, m in zip(mu.points, mu.masses)])
    else:
        from .measures import potential_u

        z = rule.z
        dens = np.abs(_derivative(f)(z)) ** 2 * np.asarray(potential_u(mu, z))
        rhs = integrate_disc_values(dens, rule)
    return lhs, rhs


def lp_identity_residual(f: Analytic, mu: AtomicMeasure, rule: DiscRule | None = None) -> float:
    lhs, rhs = lp_identity_sides(f, mu, rule)
    return abs(lhs - rhs)
