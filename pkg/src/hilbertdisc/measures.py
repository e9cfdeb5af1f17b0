"""Positive measures on the disc, their potentials and boundedness tests.

Radial measures are written dmu = rho(|z|) dA(z) plus optional atoms spread
uniformly over circles.  With dM(s) = 2 s rho(s) ds the radial marginal,

    U(r) = -2 int log max(r, s) dM(s)
    V(r) = (1 - r^2) int (1 - s^2)/(1 - r^2 s^2) dM(s)

which are the circular means of the logarithmic and Poisson-type kernels.
Near the circle the integrals run in y = -log(1 - s); every radial density
supplies ``tail(y) = g^2 rho(1 - g)`` at g = exp(-y) so that the boundary
layer is evaluated without underflow or cancellation.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from ._numerics import rsum
from .mobius import log_weight, one_minus_abs_sq_sigma, sigma
from .quadrature import (
    SingularityHint,
    exp_sinh_rule,
    integrate_disc_values,
    interval_rule,
    polar_rule,
    wedge_rule,
)

LOG2 = math.log(2.0)


# ---------------------------------------------------------------------------
# measure types
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RadialMeasure:
    """rho(|z|) dA(z) plus circle atoms (radius, mass).

    density(s, g) receives the radius and its gap g = 1 - s; tail(y)
    returns g^2 rho at g = exp(-y).  boundary_exponent is the power of
    (1 - r) governing rho near the circle.
    """

    density: Callable[[np.ndarray, np.ndarray], np.ndarray]
    tail: Callable[[np.ndarray], np.ndarray]
    boundary_exponent: float = 0.0
    atoms: tuple = ()
    name: str = "radial"
    params: dict = field(default_factory=dict)
    scale: float = 1.0
    _memo: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        atoms = tuple((float(s), float(m)) for s, m in self.atoms)
        for s, m in atoms:
            if not 0.0 <= s < 1.0 or m <= 0.0:
                raise ValueError(f"atom ({s}, {m}) needs radius in [0, 1) and positive mass")
        object.__setattr__(self, "atoms", atoms)

    @property
    def has_density(self) -> bool:
        return self.name != "atoms"

    def rho(self, s, g=None):
        s = np.asarray(s, dtype=float)
        g = 1.0 - s if g is None else np.asarray(g, dtype=float)
        return self.scale * np.asarray(self.density(s, g))

    def tail_values(self, y):
        return self.scale * np.asarray(self.tail(np.asarray(y, dtype=float)))

    def scaled(self, k: float) -> "RadialMeasure":
        if k <= 0:
            raise ValueError("scale must be positive")
        return RadialMeasure(self.density, self.tail, self.boundary_exponent,
                             tuple((s, k * m) for s, m in self.atoms), self.name, dict(self.params),
                             self.scale * k)

    def to_dict(self) -> dict:
        d = {"kind": self.name if self.name in ("qp", "remark") else "radial"}
        if self.name in ("qp", "remark"):
            d.update(self.params)
        elif self.name != "atoms":
            d["profile"] = self.name
            d["params"] = dict(self.params)
        else:
            d["profile"] = "none"
        if self.atoms:
            d["atoms"] = [list(a) for a in self.atoms]
        if self.scale != 1.0:
            d["scale"] = self.scale
        return d


@dataclass(frozen=True, eq=False)
class AtomicMeasure:
    points: tuple
    masses: tuple

    def __post_init__(self):
        pts = tuple(complex(p) for p in self.points)
        ms = tuple(float(m) for m in self.masses)
        if len(pts) != len(ms) or not pts:
            raise ValueError("need equally many points and masses, at least one")
        if any(abs(p) >= 1.0 for p in pts) or any(m <= 0.0 for m in ms):
            raise ValueError("points must lie in the disc and masses be positive")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "masses", ms)

    def scaled(self, k: float) -> "AtomicMeasure":
        return AtomicMeasure(self.points, tuple(k * m for m in self.masses))

    def to_dict(self) -> dict:
        return {"kind": "atomic", "points": [[p.real, p.imag] for p in self.points], "masses": list(self.masses)}


Measure = RadialMeasure | AtomicMeasure


def unit_atom(at: complex = 0.0, mass: float = 1.0) -> AtomicMeasure:
    return AtomicMeasure((at,), (mass,))


def as_radial(mu: Measure) -> RadialMeasure | None:
    """Radial view of a measure, or None.  Atoms at 0 are radial."""
    if isinstance(mu, RadialMeasure):
        return mu
    if all(p == 0 for p in mu.points):
        return circle_atoms([(0.0, sum(mu.masses))])
    return None


def is_radial(mu: Measure) -> bool:
    return as_radial(mu) is not None


# ---------------------------------------------------------------------------
# named families
# ---------------------------------------------------------------------------

def _zero_density(s, g):
    return np.zeros(np.shape(s))


def _zero_tail(y):
    return np.zeros(np.shape(y))


def circle_atoms(atoms: Sequence[tuple]) -> RadialMeasure:
    """Purely atomic radial measure: unit circle masses at given radii."""
    return RadialMeasure(_zero_density, _zero_tail, 0.0, tuple(atoms), "atoms", {})


def qp_measure(p: float) -> RadialMeasure:
    """-Laplacian of (1-|z|^2)^p: density 4p(1 - p r^2)(1 - r^2)^(p-2)."""
    p = float(p)
    if not 0.0 < p < 1.0:
        raise ValueError("qp_measure needs 0 < p < 1")

    def density(s, g):
        return 4 * p * (1 - p * s * s) * (g * (2 - g)) ** (p - 2)

    def tail(y):
        g = np.exp(-y)
        s = -np.expm1(-y)
        return 4 * p * (1 - p * s * s) * (2 - g) ** (p - 2) * np.exp(-p * y)

    return RadialMeasure(density, tail, p - 2.0, (), "qp", {"p": p})


def remark_profile(a: float, r, g=None):
    """f(r) = (log(e^(1+a)/(1 - r^2)))^(-a)."""
    r = np.asarray(r, dtype=float)
    g = 1.0 - r if g is None else np.asarray(g, dtype=float)
    return (1.0 + a - np.log(g * (2.0 - g))) ** (-a)


def remark_measure(a: float) -> RadialMeasure:
    """Measure -Laplacian(f) for the profile f = (log(e^(1+a)/(1-r^2)))^(-a).

    In t = r^2 the density is 4a(L - (a+1)t)/((1-t)^2 L^(a+2)) with
    L = 1 + a - log(1 - t); it is positive on [0, 1).  Construction checks
    positivity and compares with a finite-difference Laplacian.
    """
    a = float(a)
    if a <= 0.0:
        raise ValueError("remark_measure needs a > 0")

    def density(s, g):
        t = s * s
        omt = g * (2 - g)
        big_l = 1 + a - np.log(omt)
        return 4 * a * (big_l - (a + 1) * t) / (omt ** 2 * big_l ** (a + 2))

    def tail(y):
        g = np.exp(-y)
        s = -np.expm1(-y)
        big_l = 1 + a + y - np.log(2 - g)
        return 4 * a * (big_l - (a + 1) * s * s) / ((2 - g) ** 2 * big_l ** (a + 2))

    probes = np.linspace(0.0, 0.999, 200)
    vals = density(probes, 1.0 - probes)
    if np.min(vals) < -1e-10:
        raise ArithmeticError(f"remark density negative at r = {probes[np.argmin(vals)]}")
    for r0 in (0.3, 0.5, 0.9):
        fd = -finite_difference_laplacian(lambda r: remark_profile(a, r), r0)
        if abs(fd - density(r0, 1 - r0)) > 1e-5 * max(1.0, abs(fd)):
            raise ArithmeticError(f"remark density disagrees with finite differences at r = {r0}")
    return RadialMeasure(density, tail, -2.0, (), "remark", {"a": a})


def power_measure(c: float = 1.0, beta: float = 0.0) -> RadialMeasure:
    """c (1 - r^2)^beta; the measure is trivial (infinite total moment) for beta <= -2."""
    c, beta = float(c), float(beta)
    if c <= 0.0:
        raise ValueError("power profile needs c > 0")

    def density(s, g):
        return c * (g * (2 - g)) ** beta

    def tail(y):
        g = np.exp(-y)
        with np.errstate(over="ignore"):  # trivial measures grow without bound
            return c * (2 - g) ** beta * np.exp(-(beta + 2) * y)

    return RadialMeasure(density, tail, beta, (), "power", {"c": c, "beta": beta})


def log_power_measure(c: float = 1.0, beta: float = -2.0, gamma: float = -2.0) -> RadialMeasure:
    """c (1 - r^2)^beta (log(e/(1 - r^2)))^gamma."""
    c, beta, gamma = float(c), float(beta), float(gamma)
    if c <= 0.0:
        raise ValueError("log-power profile needs c > 0")

    def density(s, g):
        omt = g * (2 - g)
        return c * omt ** beta * (1 - np.log(omt)) ** gamma

    def tail(y):
        g = np.exp(-y)
        with np.errstate(over="ignore"):
            return c * (2 - g) ** beta * np.exp(-(beta + 2) * y) * (1 + y - np.log(2 - g)) ** gamma

    return RadialMeasure(density, tail, beta, (), "log-power", {"c": c, "beta": beta, "gamma": gamma})


def uniform_measure(c: float = 1.0) -> RadialMeasure:
    return power_measure(c, 0.0)


PROFILES: dict[str, Callable[..., RadialMeasure]] = {
    "power": power_measure,
    "log-power": log_power_measure,
    "uniform": uniform_measure,
}


def finite_difference_laplacian(f: Callable, r: float, h: float = 1e-4) -> float:
    """f'' + f'/r by central differences."""
    f0, fp, fm = f(r), f(r + h), f(r - h)
    return float((fp - 2 * f0 + fm) / h ** 2 + (fp - fm) / (2 * h * r))


def measure_from_dict(d: dict) -> Measure:
    if not isinstance(d, dict) or "kind" not in d:
        raise ValueError("measure JSON needs a 'kind' field")
    kind = d["kind"]
    if kind == "qp":
        mu = qp_measure(float(d["p"]))
    elif kind == "remark":
        mu = remark_measure(float(d["a"]))
    elif kind == "atomic":
        pts = [complex(*p) if isinstance(p, list) else complex(p) for p in d["points"]]
        masses = d.get("masses", [1.0] * len(pts))
        return AtomicMeasure(tuple(pts), tuple(masses))
    elif kind == "radial":
        profile = d.get("profile", "none")
        atoms = [tuple(a) for a in d.get("atoms", [])]
        if profile == "none":
            if not atoms:
                raise ValueError("radial measure needs a profile or atoms")
            mu = circle_atoms(atoms)
        else:
            if profile not in PROFILES:
                raise ValueError(f"unknown profile {profile!r}; known: {sorted(PROFILES)}")
            base = PROFILES[profile](**d.get("params", {}))
            mu = RadialMeasure(base.density, base.tail, base.boundary_exponent, tuple(atoms),
                               base.name, base.params)
    else:
        raise ValueError(f"unknown measure kind {kind!r}")
    if "scale" in d:
        mu = mu.scaled(float(d["scale"]))
    return mu


def measure_from_json(text: str) -> Measure:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed measure JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return measure_from_dict(d)


def measure_to_json(mu: Measure) -> str:
    return json.dumps(mu.to_dict())


# ---------------------------------------------------------------------------
# radial integrals against dM
# ---------------------------------------------------------------------------

_CORE = interval_rule(32)
_CORE_LOG = interval_rule(32, "log")
_PANEL = interval_rule(16)
_PANEL_WIDTH = 3.0


def _ell(g):
    """-log(1 - g)/g, with its limit 1 at g = 0."""
    g = np.asarray(g, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(g < 1e-8, 1.0 + 0.5 * g, -np.log1p(-g) / np.where(g == 0, 1.0, g))
    return out


def _radial_integral(mu: RadialMeasure, kernel_in: Callable, kernel_out: Callable | None = None,
                     split_gap: float | None = None) -> float:
    """Integral of k(s, g) * g dM(s) over the density part of mu.

    Kernels take (s, g) and are divided by g, so that the boundary layer
    runs in y = -log g as int k(s, g) 2 s tail(y) dy.  kernel_in applies
    for s < 1 - split_gap and kernel_out beyond it.
    """
    if not mu.has_density:
        return 0.0
    if split_gap is None:
        kernel_out, gs = kernel_in, 1.0
    else:
        kernel_out, gs = kernel_out or kernel_in, float(split_gap)
    parts = []

    def core(s0, s1, kern):
        # -log s in the U kernel is singular at s = 0 when nothing splits it
        # off; a panel starting just after 0 is cut geometrically instead
        if s0 == 0.0:
            pieces = [_CORE_LOG.on(s0, s1)[:2]]
        else:
            edges = [s0]
            while edges[-1] * 4.0 < s1:
                edges.append(edges[-1] * 4.0)
            edges.append(s1)
            pieces = [_CORE.on(c, d)[:2] for c, d in zip(edges[:-1], edges[1:])]
        for s, w in pieces:
            g = 1.0 - s
            parts.append(w * kern(s, g) * g * 2 * s * mu.rho(s, g))

    # core s in [0, 1/2], split at the kink when it lies there
    if 0.5 < gs < 1.0:
        core(0.0, 1.0 - gs, kernel_in)
        core(1.0 - gs, 0.5, kernel_out)
    else:
        core(0.0, 0.5, kernel_in if gs <= 0.5 else kernel_out)
    # boundary layer in y = -log g
    y_split = -math.log(gs) if gs < 0.5 else LOG2
    if y_split > LOG2:
        n = max(1, int(math.ceil((y_split - LOG2) / _PANEL_WIDTH)))
        edges = np.linspace(LOG2, y_split, n + 1)
        y = np.concatenate([_PANEL.on(c, d)[0] for c, d in zip(edges[:-1], edges[1:])])
        w = np.concatenate([_PANEL.on(c, d)[1] for c, d in zip(edges[:-1], edges[1:])])
        parts.append(w * kernel_in(-np.expm1(-y), np.exp(-y)) * 2 * (-np.expm1(-y)) * mu.tail_values(y))
    x, wx = exp_sinh_rule()
    y = y_split + x
    s = -np.expm1(-y)
    parts.append(wx * kernel_out(s, np.exp(-y)) * 2 * s * mu.tail_values(y))
    vals = np.concatenate(parts)
    if not np.all(np.isfinite(vals)):
        raise FloatingPointError("radial integrand is not finite")
    return rsum(vals)


def _gap_of(r, gap):
    return 1.0 - r if gap is None else gap


def _u_density(mu: RadialMeasure, r: float, gap: float) -> float:
    if r == 0.0:
        return _radial_integral(mu, lambda s, g: 2 * _ell(g))
    log_r = math.log1p(-gap)
    return _radial_integral(
        mu,
        lambda s, g: -2.0 * log_r / g,
        lambda s, g: 2 * _ell(g),
        split_gap=gap,
    )


def _v_density(mu: RadialMeasure, r: float, gap: float) -> float:
    omr2 = gap * (2.0 - gap)

    def kern(s, g):
        one_minus_rs = gap + g - gap * g
        return omr2 * (2.0 - g) / (one_minus_rs * (1.0 + r * s))

    return _radial_integral(mu, kern, kern, split_gap=gap if gap < 0.5 else None)


def _u_atoms(mu: RadialMeasure, r, gap):
    r = np.asarray(r, dtype=float)
    gap = np.asarray(gap, dtype=float)
    out = np.zeros(r.shape)
    for s0, m in mu.atoms:
        with np.errstate(divide="ignore"):
            out = out + m * np.where(r >= s0, -2.0 * np.log1p(-gap), -2.0 * math.log(s0) if s0 > 0 else np.inf)
    return out


def _v_atoms(mu: RadialMeasure, r, gap):
    r = np.asarray(r, dtype=float)
    gap = np.asarray(gap, dtype=float)
    out = np.zeros(r.shape)
    for s0, m in mu.atoms:
        out = out + m * gap * (2 - gap) * (1 - s0 * s0) / ((1 - r * s0) * (1 + r * s0))
    return out


def potential_u_radial(mu: RadialMeasure, r: float, gap: float | None = None) -> float:
    """U(r) = -2 int log max(r, s) dM(s) by 1-D quadrature."""
    gap = _gap_of(r, gap)
    if not 0.0 <= r <= 1.0 or gap <= 0.0:
        raise ValueError("radius must lie in [0, 1)")
    if r == 0 and any(s0 == 0 for s0, _ in mu.atoms):
        raise ValueError("potential is infinite at an atom")
    out = float(_u_atoms(mu, r, gap)) if mu.atoms else 0.0
    if mu.has_density:
        out += _u_density(mu, float(r), float(gap))
    return out


def potential_v_radial(mu: RadialMeasure, r: float, gap: float | None = None) -> float:
    gap = _gap_of(r, gap)
    out = float(_v_atoms(mu, r, gap)) if mu.atoms else 0.0
    if mu.has_density:
        out += _v_density(mu, float(r), float(gap))
    return out


# ---------------------------------------------------------------------------
# potentials for general (radial or atomic) measures
# ---------------------------------------------------------------------------

def potential_u(mu: Measure, z, rule_size: int = 96, angles: int = 512):
    """U(z) = int log |(1 - conj(w) z)/(z - w)|^2 dmu(w).

    Atomic measures are summed exactly.  Radial densities are integrated
    in two dimensions after the substitution w = sigma_z(xi), which moves
    the logarithmic singularity to xi = 0; this route is independent of
    the 1-D formula of :func:`potential_u_radial`.
    """
    zs = np.atleast_1d(np.asarray(z, dtype=complex))
    if isinstance(mu, AtomicMeasure):
        out = np.zeros(zs.shape)
        for p, m in zip(mu.points, mu.masses):
            out = out + m * np.asarray(log_weight(p, zs))
        return out if np.ndim(z) else float(out[0])
    rule_r = interval_rule(rule_size, SingularityHint("log", 0.0, "left"),
                           SingularityHint("power", mu.boundary_exponent + 1.0, "right"))
    rule = polar_rule(rule_r, angles)
    xi = rule.z
    weight = -2.0 * np.log(rule.radius)
    out = np.empty(zs.shape)
    for i, zz in enumerate(zs):
        total = 0.0
        if mu.has_density:
            w = sigma(zz, xi)
            # gap of |w| from 1 - |w|^2 = (1-|z|^2)(1-|xi|^2)/|1 - conj(z) xi|^2
            one_m = (1 - abs(zz) ** 2) * rule.gap * (1 + rule.radius) / np.abs(1 - np.conj(zz) * xi) ** 2
            g = one_m / (1.0 + np.sqrt(1.0 - one_m))
            dens = mu.rho(np.abs(w), g)
            jac = (1 - abs(zz) ** 2) ** 2 / np.abs(1 - np.conj(zz) * xi) ** 4
            total += integrate_disc_values(weight * dens * jac, rule)
        for s0, m in mu.atoms:
            th = 2 * np.pi * np.arange(4096) / 4096
            if s0 > 0:
                total += m * rsum(log_weight(zz, s0 * np.exp(1j * th))) / th.size
            else:
                total += m * float(log_weight(0.0, zz))
        out[i] = total
    return out if np.ndim(z) else float(out[0])


def potential_v(mu: Measure, z):
    """V(z) = int (1 - |sigma_z(w)|^2) dmu(w)."""
    zs = np.atleast_1d(np.asarray(z, dtype=complex))
    if isinstance(mu, AtomicMeasure):
        out = np.zeros(zs.shape)
        for p, m in zip(mu.points, mu.masses):
            out = out + m * np.asarray(one_minus_abs_sq_sigma(p, zs))
        return out if np.ndim(z) else float(out[0])
    out = np.array([potential_v_radial(mu, abs(zz)) for zz in zs])
    return out if np.ndim(z) else float(out[0])


# ---------------------------------------------------------------------------
# cached radial potentials
# ---------------------------------------------------------------------------

def _cache_grid() -> np.ndarray:
    """Grid in x = log(g / r): dense where U varies, sparse deep in the boundary layer."""
    deep = np.arange(-690.0, -40.0, 2.0)
    mid = np.arange(-40.0, 12.0, 0.05)
    return np.concatenate((deep, mid, [12.0]))


class PotentialCache:
    """Cubic spline of the density part of U (or V) in x = log(gap / r).

    Atom contributions are added exactly at evaluation time.  The spline
    runs through log-values, which are smooth in x for the families used
    here.  Points outside the grid are evaluated directly.
    """

    def __init__(self, mu: RadialMeasure, kind: str = "u"):
        if kind not in ("u", "v"):
            raise ValueError("kind must be 'u' or 'v'")
        self.measure = mu
        self.kind = kind
        self.x = _cache_grid()
        self.valid = False
        self._spline = None
        if mu.has_density:
            g = 1.0 / (1.0 + np.exp(-self.x))
            r = 1.0 / (1.0 + np.exp(self.x))
            fn = _u_density if kind == "u" else _v_density
            vals = np.array([fn(mu, float(rr), float(gg)) for rr, gg in zip(r, g)])
            self.samples = vals
            if np.all(vals > 0):
                self._spline = CubicSpline(self.x, np.log(vals))
                self._log = True
            else:
                self._spline = CubicSpline(self.x, vals)
                self._log = False
        self.valid = True

    def density_part(self, r, gap) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        gap = np.asarray(gap, dtype=float)
        if self._spline is None:
            return np.zeros(r.shape)
        with np.errstate(divide="ignore"):
            x = np.log(gap) - np.log(r)
        inside = (x >= self.x[0]) & (x <= self.x[-1])
        out = np.empty(r.shape)
        v = self._spline(x[inside])
        out[inside] = np.exp(v) if self._log else v
        fn = _u_density if self.kind == "u" else _v_density
        for i in np.flatnonzero(~inside):
            out.flat[i] = fn(self.measure, float(r.flat[i]), float(gap.flat[i]))
        return out

    def __call__(self, r, gap=None):
        r = np.asarray(r, dtype=float)
        gap = 1.0 - r if gap is None else np.asarray(gap, dtype=float)
        out = self.density_part(r, gap)
        if self.measure.atoms:
            out = out + (_u_atoms if self.kind == "u" else _v_atoms)(self.measure, r, gap)
        return out


def potential_cache(mu: RadialMeasure, kind: str = "u") -> PotentialCache:
    """Per-measure memoized cache."""
    key = "cache-" + kind
    if key not in mu._memo:
        mu._memo[key] = PotentialCache(mu, kind)
    return mu._memo[key]


# ---------------------------------------------------------------------------
# moments and totals
# ---------------------------------------------------------------------------

def total_moment(mu: Measure, cap: float = 1e12) -> float:
    """int (1 - |z|^2) dmu; +inf when the boundary layer is not integrable."""
    if isinstance(mu, AtomicMeasure):
        return rsum([m * (1 - abs(p) ** 2) for p, m in zip(mu.points, mu.masses)])
    atoms = rsum([m * (1 - s * s) for s, m in mu.atoms]) if mu.atoms else 0.0
    if not mu.has_density:
        return atoms
    if not _tail_integrable(mu):
        return math.inf
    val = _radial_integral(mu, lambda s, g: 2.0 - g)
    if not math.isfinite(val) or val > cap:
        return math.inf
    return atoms + val


def _tail_integrable(mu: RadialMeasure, delta: float = 0.05) -> bool:
    """Decay test for the y-integrand 2 s (2 - g) tail(y): log-log slope below -1 - delta."""
    y = np.array([400.0, 4000.0])
    q = 2.0 * mu.tail_values(y)
    if np.all(q == 0):
        return True
    if q[0] <= 0:
        return True
    if q[1] <= 0:
        return True
    slope = math.log(q[1] / q[0]) / math.log(y[1] / y[0])
    return slope < -1.0 - delta


def u_moments(mu: RadialMeasure, n_max: int, nodes: int = 96) -> list[float]:
    """int_0^1 r^(2n+1) U(r) dr for n = 1..n_max by 1-D quadrature of U."""
    mu = as_radial(mu) if isinstance(mu, AtomicMeasure) else mu
    if mu is None:
        raise ValueError("moments need a radial measure")
    rule = interval_rule(nodes, SingularityHint("log", 0.0, "left"),
                         SingularityHint("power", max(mu.boundary_exponent + 2.0, 0.0), "right"))
    cache = potential_cache(mu, "u")
    u = cache(rule.nodes, rule.complements)
    return [rsum(rule.weights * rule.nodes ** (2 * n + 1) * u) for n in range(1, n_max + 1)]


# ---------------------------------------------------------------------------
# boundedness conditions
# ---------------------------------------------------------------------------

def _v_at_nodes(mu: Measure, rule) -> np.ndarray:
    rad = as_radial(mu)
    if rad is not None:
        cache = potential_cache(rad, "v")
        return rule.radial_values(lambda r, g: cache(r, g))
    return np.asarray(potential_v(mu, rule.z))


def condition_rule(a: complex, R: float, mu: Measure | None = None, order: int = 8):
    angles = [math.atan2(complex(a).imag, complex(a).real)] if a != 0 else []
    hint = SingularityHint("power", max((mu.boundary_exponent if isinstance(mu, RadialMeasure) else 0.0) + 2.0, 0.0))
    return wedge_rule(angles, order=order, boundary_hint=hint, gap_cut=1.0 - R)


def condition_integral(mu: Measure, a: complex, R: float, rule=None) -> float:
    """int over |z| < R of V(z)/|1 - conj(a) z|^2 dA(z), for |a| <= 1."""
    a = complex(a)
    if abs(a) > 1.0 + 1e-15:
        raise ValueError("|a| must be <= 1")
    if not 0.0 < R < 1.0:
        raise ValueError("R must lie in (0, 1)")
    if rule is None:
        rule = condition_rule(a, R, mu)
        mask = 1.0
    else:
        mask = (rule.radius < R).astype(float)
    v = _v_at_nodes(mu, rule)
    return integrate_disc_values(mask * v / np.abs(1.0 - np.conj(a) * rule.z) ** 2, rule)


BOUNDED = "BOUNDED"
DIVERGENT = "DIVERGENT"
INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class BoundednessConfig:
    points: tuple = (0.0, 1.0, -1.0, 1j, -1j)
    k_values: tuple = (1, 2, 3, 4, 5)
    growth_factor: float = 0.10
    contraction: float = 0.9

    def radii(self) -> tuple:
        return tuple(1.0 - 10.0 ** (-k) for k in self.k_values)


@dataclass(frozen=True)
class BoundednessReport:
    verdict: str
    rows: tuple  # (a, R, value, relative increment)
    last_increments: dict
    total_moment: float
    config: BoundednessConfig

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "total_moment": self.total_moment,
            "growth_factor": self.config.growth_factor,
            "rows": [
                {"a": [complex(a).real, complex(a).imag], "R": R, "value": v, "relative_increment": d}
                for a, R, v, d in self.rows
            ],
        }


def boundedness_check(mu: Measure, config: BoundednessConfig = BoundednessConfig()) -> BoundednessReport:
    """Run the condition integrals along the R ladder and classify growth.

    DIVERGENT: some sequence grows by at least growth_factor at the last
    step.  BOUNDED: every last step is below that and the increments
    contract geometrically (ratio <= contraction), so the tail sum is
    controlled.  INCONCLUSIVE otherwise.
    """
    tm = total_moment(mu)
    rows = []
    last = {}
    verdicts = []
    if not math.isfinite(tm):
        return BoundednessReport(DIVERGENT, (), {}, tm, config)
    for a in config.points:
        vals = [condition_integral(mu, a, R) for R in config.radii()]
        incs = [None] + [(b - c) / c if c > 0 else math.inf for c, b in zip(vals, vals[1:])]
        for R, v, d in zip(config.radii(), vals, incs):
            rows.append((a, R, v, d))
        d_last = incs[-1]
        last[str(a)] = d_last
        if d_last is None:
            verdicts.append(INCONCLUSIVE)
        elif d_last >= config.growth_factor:
            verdicts.append(DIVERGENT)
        elif len(incs) >= 3 and incs[-2] is not None and (incs[-2] <= 0 or d_last <= config.contraction * incs[-2]):
            verdicts.append(BOUNDED)
        else:
            verdicts.append(INCONCLUSIVE)
    if DIVERGENT in verdicts:
        verdict = DIVERGENT
    elif all(v == BOUNDED for v in verdicts):
        verdict = BOUNDED
    else:
        verdict = INCONCLUSIVE
    return BoundednessReport(verdict, tuple(rows), last, tm, config)
