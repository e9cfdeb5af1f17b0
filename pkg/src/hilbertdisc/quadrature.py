"""Quadrature on [0, 1] and on the disc (dA = dx dy / pi), and sup searches.

Interval rules are Gauss-Legendre rules pushed through a substitution that
clusters nodes at a flagged endpoint.  Every rule also stores the distance
of each node to the right endpoint, so integrands that depend on ``1 - t``
(for example ``(1 - r^2)^p`` near the circle) are evaluated without
cancellation.

Disc rules come in two shapes.  :func:`polar_rule` is a Gauss-by-trapezoid
product.  :func:`wedge_rule` grades panels dyadically towards chosen points
of the circle, for integrands concentrated near such points.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy import optimize

from ._numerics import check_finite, csum

TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# interval rules
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SingularityHint:
    """Endpoint behaviour of an integrand on [0, 1].

    kind is "none", "log" (log t type) or "power" (t**exponent type);
    endpoint is "left" (t = 0) or "right" (t = 1).
    """

    kind: str = "none"
    exponent: float = 0.0
    endpoint: str = "left"

    def __post_init__(self):
        if self.kind not in ("none", "log", "power"):
            raise ValueError(f"unknown singularity kind {self.kind!r}")
        if self.endpoint not in ("left", "right"):
            raise ValueError(f"endpoint must be 'left' or 'right', got {self.endpoint!r}")
        if self.kind == "power" and self.exponent <= -1.0:
            raise ValueError("power exponents <= -1 are not integrable")

    @property
    def grading(self) -> float:
        """Substitution power q for t = u**q."""
        if self.kind == "log":
            return 4.0
        if self.kind == "power":
            if self.exponent >= 0 and float(self.exponent).is_integer():
                return 1.0  # t**k is already polynomial
            return float(min(40.0, max(1.0, 4.0 / (self.exponent + 1.0))))
        return 1.0

    def to_dict(self) -> dict:
        return {"kind": self.kind, "exponent": self.exponent, "endpoint": self.endpoint}


NO_HINT = SingularityHint()


@dataclass(frozen=True, eq=False)
class IntervalRule:
    nodes: np.ndarray
    weights: np.ndarray
    complements: np.ndarray  # 1 - nodes, computed without cancellation
    hints: tuple = ()

    def integrate(self, f: Callable, with_complement: bool = False) -> complex:
        """sum of weights * f(t), or f(t, 1 - t) when with_complement is set."""
        vals = np.asarray(f(self.nodes, self.complements) if with_complement else f(self.nodes))
        check_finite(vals, self.nodes)
        out = csum(self.weights * vals)
        return out.real if np.isrealobj(vals) else out

    def on(self, a: float, b: float):
        """Nodes, weights and distances to both ends for the interval [a, b]."""
        h = b - a
        return a + h * self.nodes, h * self.weights, h * self.nodes, h * self.complements

    def to_json(self) -> str:
        return json.dumps({
            "nodes": self.nodes.tolist(),
            "weights": self.weights.tolist(),
            "hints": [h.to_dict() for h in self.hints],
        })


@lru_cache(maxsize=None)
def _gauss(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return (x + 1.0) / 2.0, (1.0 - x) / 2.0, w / 2.0


@lru_cache(maxsize=256)
def _interval_rule_cached(n: int, hints: tuple) -> IntervalRule:
    u, v, w = _gauss(n)  # v = 1 - u exactly
    left = next((h for h in hints if h.endpoint == "left" and h.kind != "none"), None)
    right = next((h for h in hints if h.endpoint == "right" and h.kind != "none"), None)
    if left is None and right is None:
        t, c, jac = u, v, np.ones_like(u)
    elif right is None:
        q = left.grading
        t = u ** q
        c = -np.expm1(q * np.log(u))
        jac = q * u ** (q - 1.0)
    elif left is None:
        q = right.grading
        c = v ** q
        t = -np.expm1(q * np.log(v))
        jac = q * v ** (q - 1.0)
    else:
        q = max(left.grading, right.grading, 2.0)
        uq, vq = u ** q, v ** q
        s = uq + vq
        t, c = uq / s, vq / s
        jac = q * u ** (q - 1.0) * v ** (q - 1.0) / s ** 2
    nodes, weights, comps = (np.ascontiguousarray(a) for a in (t, w * jac, c))
    for a in (nodes, weights, comps):
        a.setflags(write=False)
    return IntervalRule(nodes, weights, comps, hints)


def interval_rule(n: int, *hints: SingularityHint | str) -> IntervalRule:
    """Gauss-Legendre rule on (0, 1) with optional endpoint substitutions.

    Up to two hints may be given, one per endpoint.  A bare string is read
    as the hint kind at the left endpoint.
    """
    if n < 2:
        raise ValueError("rules need at least two nodes")
    parsed = []
    for h in hints:
        if isinstance(h, str):
            h = SingularityHint(h)
        parsed.append(h)
    ends = [h.endpoint for h in parsed if h.kind != "none"]
    if len(ends) != len(set(ends)):
        raise ValueError("at most one hint per endpoint")
    return _interval_rule_cached(int(n), tuple(parsed))


@lru_cache(maxsize=16)
def exp_sinh_rule(step: float = 1.0 / 16, t_max: float = 4.5):
    """Nodes and weights for integrals over (0, inf) (double exponential).

    x = exp(pi/2 sinh t); suitable for integrands with algebraic decay.
    """
    t = np.arange(-t_max, t_max + step / 2, step)
    x = np.exp(0.5 * math.pi * np.sinh(t))
    w = step * 0.5 * math.pi * np.cosh(t) * x
    return x, w


def integrate_tail(f: Callable, y0: float, step: float = 1.0 / 16) -> float:
    """Integral of f over (y0, inf) with the exp-sinh rule."""
    x, w = exp_sinh_rule(step)
    vals = np.asarray(f(y0 + x), dtype=float)
    check_finite(vals, y0 + x, "tail integrand")
    return math.fsum(w * vals)


# ---------------------------------------------------------------------------
# disc rules
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DiscRule:
    """Nodes r exp(i theta) with weights for dA = r dr d theta / pi.

    gap holds 1 - r computed without cancellation.  Product rules keep the
    radial rule and angular count; graded rules leave them as None.
    """

    radius: np.ndarray
    gap: np.ndarray
    theta: np.ndarray
    weight: np.ndarray
    radial: IntervalRule | None = None
    angular_count: int | None = None
    _memo: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def z(self) -> np.ndarray:
        if "z" not in self._memo:
            self._memo["z"] = self.radius * np.exp(1j * self.theta)
        return self._memo["z"]

    @property
    def size(self) -> int:
        return self.weight.size

    def rings(self):
        """Distinct gaps and the index of each node into them."""
        if "rings" not in self._memo:
            self._memo["rings"] = np.unique(self.gap, return_inverse=True)
        return self._memo["rings"]

    def radial_values(self, g: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> np.ndarray:
        """Evaluate a radial function g(r, gap) once per ring, spread to nodes."""
        gaps, idx = self.rings()
        return np.asarray(g(1.0 - gaps, gaps))[idx]

    def to_json(self) -> str:
        d = {"size": self.size}
        if self.radial is not None:
            d["radial"] = json.loads(self.radial.to_json())
            d["angular_count"] = self.angular_count
        return json.dumps(d)


def _freeze(*arrays):
    for a in arrays:
        a.setflags(write=False)


def polar_rule(radial: IntervalRule | int = 64, angular_count: int = 64, offset: float = 0.0) -> DiscRule:
    """Gauss radial nodes times equally spaced angles."""
    if isinstance(radial, int):
        radial = interval_rule(radial, "log")
    m = int(angular_count)
    theta = offset + TWO_PI * np.arange(m) / m
    r = np.repeat(radial.nodes, m)
    g = np.repeat(radial.complements, m)
    th = np.tile(theta, radial.nodes.size)
    w = np.repeat(2.0 * radial.weights * radial.nodes / m, m)
    _freeze(r, g, th, w)
    return DiscRule(r, g, th, w, radial, m)


_CENTER_PANELS = 6


class _PanelSet:
    def __init__(self, order: int, boundary_hint: SingularityHint):
        self.order = order
        self.plain = interval_rule(order)
        self.edge = interval_rule(order, SingularityHint(boundary_hint.kind, boundary_hint.exponent, "left"))
        self.center = interval_rule(order, "log")
        self.parts: list[tuple] = []

    def gap_panel(self, g0, g1, t0, t1, at_edge=False):
        """Tensor panel in (gap, angle); at_edge grades towards g = g0."""
        if g1 <= g0 or t1 <= t0:
            return
        rule = self.edge if at_edge else self.plain
        g, wg, _, _ = rule.on(g0, g1)
        t, wt, _, _ = self.plain.on(t0, t1)
        gg = np.repeat(g, t.size)
        tt = np.tile(t, g.size)
        w = np.outer(wg * (1.0 - g), wt).ravel() / math.pi
        self.parts.append((gg, tt, w))

    def center_panel(self, r1, t0, t1):
        # geometric radial panels keep polynomial exactness; only the
        # innermost one is graded for a logarithm at the centre
        edges = r1 * 4.0 ** -np.arange(_CENTER_PANELS + 1)
        pieces = [self.plain.on(lo, hi)[:2] for hi, lo in zip(edges, edges[1:])]
        pieces.append(self.center.on(0.0, edges[-1])[:2])
        r = np.concatenate([p[0] for p in pieces])
        wr = np.concatenate([p[1] for p in pieces])
        t, wt, _, _ = self.plain.on(t0, t1)
        gg = np.repeat(1.0 - r, t.size)
        tt = np.tile(t, r.size)
        w = np.outer(wr * r, wt).ravel() / math.pi
        self.parts.append((gg, tt, w))

    def build(self) -> DiscRule:
        g = np.concatenate([p[0] for p in self.parts])
        t = np.mod(np.concatenate([p[1] for p in self.parts]), TWO_PI)
        w = np.concatenate([p[2] for p in self.parts])
        r = 1.0 - g
        _freeze(r, g, t, w)
        return DiscRule(r, g, t, w)


def _arc_panels(start: float, stop: float, width: float):
    n = max(1, int(math.ceil((stop - start) / width - 1e-12)))
    edges = np.linspace(start, stop, n + 1)
    return zip(edges[:-1], edges[1:])


def wedge_rule(
    angles: Sequence[float] = (),
    order: int = 10,
    levels: int = 40,
    boundary_hint: SingularityHint | None = None,
    gap_cut: float = 0.0,
    width: float = 0.25,
) -> DiscRule:
    """Disc rule graded dyadically towards the boundary points exp(i angle).

    Around each flagged angle a box of half width H is split into L-shaped
    layers max(gap, |theta - angle|) in [H 2^-k-1, H 2^-k].  Panels touching
    the circle use boundary_hint in the gap variable.  Nodes with gap below
    gap_cut are omitted, which integrates over the disc of radius 1 - gap_cut.
    """
    hint = boundary_hint or SingularityHint("power", 0.0)
    ps = _PanelSet(order, hint)
    centers = sorted({float(np.mod(a, TWO_PI)) for a in angles})
    merged: list[float] = []
    for a in centers:
        if merged and a - merged[-1] < 1e-9:
            continue
        merged.append(a)
    if len(merged) > 1 and (merged[0] + TWO_PI - merged[-1]) < 1e-9:
        merged.pop()
    centers = merged
    if len(centers) > 1:
        seps = np.diff(centers + [centers[0] + TWO_PI])
        big_h = min(width, 0.5 * float(np.min(seps)))
    else:
        big_h = width
    gc = float(gap_cut)

    def panel(g0, g1, t0, t1, at_edge):
        g0c = max(g0, gc)
        ps.gap_panel(g0c, g1, t0, t1, at_edge=at_edge and (g0 == 0.0 or g0c > g0))

    # graded boxes
    for c in centers:
        h = big_h
        for _ in range(levels):
            h2 = h / 2.0
            if h <= gc:
                break
            for t0, t1 in ((-h, -h2), (-h2, 0.0), (0.0, h2), (h2, h)):
                panel(h2, h, c + t0, c + t1, at_edge=False)
            panel(0.0, h2, c + h2, c + h, at_edge=True)
            panel(0.0, h2, c - h, c - h2, at_edge=True)
            h = h2
        if h > gc:
            panel(0.0, h, c - h, c, at_edge=True)
            panel(0.0, h, c, c + h, at_edge=True)

    # boundary strip between boxes
    if centers:
        arcs = [(c + big_h, n - big_h) for c, n in zip(centers, centers[1:] + [centers[0] + TWO_PI])]
        full = [(c, n) for c, n in zip(centers, centers[1:] + [centers[0] + TWO_PI])]
    else:
        arcs = [(0.0, TWO_PI)]
        full = [(0.0, TWO_PI)]
    for a0, a1 in arcs:
        if a1 - a0 <= 1e-15:
            continue
        for t0, t1 in _arc_panels(a0, a1, big_h):
            panel(0.0, big_h, t0, t1, at_edge=True)

    # interior annuli with dyadic gaps, then the central disc
    g = big_h
    while g < 0.5:
        g1 = min(2.0 * g, 0.5)
        for a0, a1 in full:
            for t0, t1 in _arc_panels(a0, a1, min(g1, math.pi / 4)):
                panel(g, g1, t0, t1, at_edge=False)
        g = g1
    for a0, a1 in full:
        for t0, t1 in _arc_panels(a0, a1, math.pi / 4):
            ps.center_panel(0.5, t0, t1)
    return ps.build()


def integrate_disc(f: Callable, rule: DiscRule) -> complex:
    """sum of weight * f(z) over the rule; f receives the node array."""
    vals = np.asarray(f(rule.z))
    check_finite(vals, rule.z)
    out = csum(rule.weight * vals)
    return out.real if np.isrealobj(vals) else out


def integrate_disc_values(values: np.ndarray, rule: DiscRule) -> float:
    check_finite(values, rule.z)
    return csum(rule.weight * values).real


# ---------------------------------------------------------------------------
# sup search
# ---------------------------------------------------------------------------

def boundary_radii(k_max: int = 5, k_min: int = 1) -> tuple:
    return tuple(1.0 - 10.0 ** (-k) for k in range(k_min, k_max + 1))


@dataclass(frozen=True)
class SupSearchConfig:
    n_radii: int = 8
    n_angles: int = 16
    boundary: tuple = boundary_radii()
    refine_iterations: int = 60
    restrict_to_real_axis: bool = False
    tolerance: float = 1e-3

    def __post_init__(self):
        b = tuple(float(r) for r in self.boundary)
        if not b or any(not 0.0 < r < 1.0 for r in b) or any(y <= x for x, y in zip(b, b[1:])):
            raise ValueError("boundary radii must be strictly increasing in (0, 1)")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        object.__setattr__(self, "boundary", b)

    def to_dict(self) -> dict:
        return {
            "n_radii": self.n_radii,
            "n_angles": self.n_angles,
            "boundary": list(self.boundary),
            "refine_iterations": self.refine_iterations,
            "restrict_to_real_axis": self.restrict_to_real_axis,
            "tolerance": self.tolerance,
        }


@dataclass(frozen=True)
class SupResult:
    value: float
    argmax: complex
    error_estimate: float
    converged: bool
    evaluations: int = 0
    boundary_values: tuple = ()

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "argmax": [self.argmax.real, self.argmax.imag],
            "error_estimate": self.error_estimate,
            "converged": self.converged,
            "evaluations": self.evaluations,
            "boundary_values": list(self.boundary_values),
        }


def _radius(s: float) -> float:
    return -math.expm1(-s)


def sup_over_disc(F: Callable[[complex], float], config: SupSearchConfig = SupSearchConfig()) -> SupResult:
    """Coarse scan, local refinement, then the boundary approach sequence.

    Radii are parametrized by s = -log(1 - r), which spreads the search
    evenly over the scales at which functionals of boundary behaviour vary.
    """
    seen: dict[complex, float] = {}

    def value(a: complex) -> float:
        a = complex(a)
        if a not in seen:
            v = float(F(a))
            if not math.isfinite(v):
                raise FloatingPointError(f"functional is not finite at a = {a!r}")
            seen[a] = v
        return seen[a]

    s_max = -math.log1p(-config.boundary[-1])
    s_top = -math.log1p(-config.boundary[0])
    s_grid = np.linspace(0.0, s_top, config.n_radii)
    if config.restrict_to_real_axis:
        coarse = [0.0] + [sg * _radius(s) for s in s_grid[1:] for sg in (1.0, -1.0)]
    else:
        th = TWO_PI * np.arange(config.n_angles) / config.n_angles
        coarse = [0.0] + [_radius(s) * complex(math.cos(t), math.sin(t)) for s in s_grid[1:] for t in th]
    for a in coarse:
        value(a)
    best = max(seen, key=seen.get)

    # local refinement in (s, theta)
    if config.refine_iterations > 0 and best != 0:
        s0 = -math.log1p(-abs(best))
        t0 = math.atan2(best.imag, best.real)
        ds = s_grid[1] - s_grid[0]
        if config.restrict_to_real_axis:
            sign = 1.0 if best.real > 0 else -1.0
            res = optimize.minimize_scalar(
                lambda s: -value(sign * _radius(s)),
                bounds=(max(0.0, s0 - ds), min(s_max, s0 + ds)),
                method="bounded",
                options={"maxiter": config.refine_iterations, "xatol": 1e-4},
            )
            value(sign * _radius(float(res.x)))
        else:
            dt = TWO_PI / config.n_angles
            optimize.minimize(
                lambda x: -value(_radius(x[0]) * complex(math.cos(x[1]), math.sin(x[1]))),
                np.array([s0, t0]),
                method="Nelder-Mead",
                bounds=[(0.0, s_max), (t0 - dt, t0 + dt)],
                options={"maxiter": config.refine_iterations, "xatol": 1e-4, "fatol": 1e-10,
                         "initial_simplex": np.array([[s0, t0], [min(s0 + ds / 2, s_max), t0], [s0, t0 + dt / 2]])},
            )
        best = max(seen, key=seen.get)

    # boundary approach; off the real axis the angle is re-optimized at each
    # radius, since peaks of boundary functionals narrow like 1 - r
    direction = best / abs(best) if best != 0 else 1.0
    if config.restrict_to_real_axis:
        bvals = [value(r * direction) for r in config.boundary]
    else:
        theta = math.atan2(direction.imag, direction.real)
        width = TWO_PI / config.n_angles
        bvals = []
        for r in config.boundary:
            ray = lambda t, r=r: r * complex(math.cos(t), math.sin(t))
            res = optimize.minimize_scalar(
                lambda t: -value(ray(t)),
                bounds=(theta - width, theta + width),
                method="bounded",
                options={"maxiter": config.refine_iterations, "xatol": 1e-3 * (1.0 - r)},
            )
            t_best = max((theta, float(res.x)), key=lambda t: value(ray(t)))
            bvals.append(value(ray(t_best)))
            theta = t_best
            width = min(width, 10.0 * (1.0 - r))
    best = max(seen, key=seen.get)
    top = seen[best]
    scale = max(abs(top), 1e-300)
    incs = [abs(b - a) for a, b in zip(bvals, bvals[1:])]
    interior = max(bvals) < top - config.tolerance * scale
    if interior:
        # the sup sits inside the disc; the boundary sequence only confirms it
        converged = True
        err = config.tolerance * scale
    else:
        recent = incs[-2:]
        converged = bool(recent) and all(d <= config.tolerance * scale for d in recent)
        if len(incs) >= 2 and 0 < incs[-1] < incs[-2]:
            q = incs[-1] / incs[-2]
            err = incs[-1] * q / (1.0 - q)
        else:
            err = incs[-1] if incs else 0.0
    return SupResult(top, complex(best), float(err), bool(converged), len(seen), tuple(bvals))
